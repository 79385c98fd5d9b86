"""Refinement of tests and of hyper distributions.

A test ``s: A ⊸ n`` refines into ``t: A ⊸ m`` when some stochastic
post-processing ``h: n ⊸ m`` satisfies ``h • s = t``. Deciding this is a
linear feasibility problem in the entries of ``h``, solved exactly by
:mod:`hyperdist.feasibility`.

For hyper distributions the order asks for a two-level witness ``Ω`` over
``m·D(n·D(A))`` projecting onto both sides. :func:`hyper_refines` reduces
that question to test refinement when both sides are hyper conditionals
of one full-support state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArityMismatch, IncompleteSupport, NotATest, NotNormalised, SpaceMismatch, StateMismatch
from .feasibility import find_nonnegative_solution
from .hypercond import hyper_condition, is_normalised, recover_state, recover_test
from .kernel import Channel, Copower, Dist, Dists, Numeric, Tagged, dirac, flatten, kleisli_apply, kleisli_compose, push_forward
from .kernel.values import ZERO
from .normalise import disintegrate, hyper_normalise


@dataclass(frozen=True)
class RefinementWitness:
    """A distribution ``Ω`` over ``m·D(n·D(A))``."""

    omega: Dist

    def source_projection(self) -> Dist:
        """``(π₂)_*(Ω)``, which should equal the coarser side ``Φ``."""
        return flatten(push_forward(lambda x: x[1], self.omega, self.omega.space.base))

    def target_projection(self) -> Dist:
        """``D(m·(π₂)_*)(Ω)``, which should equal the finer side ``Ψ``."""
        sp = self.omega.space
        outer = Copower(sp.n, sp.base.base.base)
        return push_forward(lambda x: Tagged(x[0], recover_state(x[1])), self.omega, outer)


def _hyper_shape(phi: Dist, name: str) -> Copower:
    sp = phi.space
    if not (isinstance(sp, Copower) and isinstance(sp.base, Dists)):
        raise SpaceMismatch(f"{name} is not a hyper distribution over n·D(A): {sp.expr()}")
    return sp


def check_witness(phi: Dist, psi: Dist, witness: RefinementWitness | Dist) -> bool:
    """True iff ``Ω`` projects to ``Φ`` on the inside and to ``Ψ`` on the outside."""
    omega = witness.omega if isinstance(witness, RefinementWitness) else witness
    phi_sp = _hyper_shape(phi, "Φ")
    psi_sp = _hyper_shape(psi, "Ψ")
    if phi_sp.base != psi_sp.base:
        raise SpaceMismatch(f"Φ and Ψ live over {phi_sp.base.expr()} and {psi_sp.base.expr()}")
    sp = omega.space
    if not (isinstance(sp, Copower) and isinstance(sp.base, Dists)):
        raise ArityMismatch(f"witness is not over m·D(n·D(A)): {sp.expr()}")
    if sp.n != psi_sp.n:
        raise ArityMismatch(f"witness outer arity {sp.n} ≠ arity of Ψ {psi_sp.n}")
    if sp.base.base != phi_sp:
        raise ArityMismatch(f"witness inner space {sp.base.base.expr()} ≠ space of Φ {phi_sp.expr()}")
    w = RefinementWitness(omega)
    return w.source_projection() == phi and w.target_projection() == psi


def _require_test(t: Channel, name: str) -> int:
    if not isinstance(t.target, Numeric):
        raise NotATest(f"{name} has target {t.target.expr()}, not a numeric space")
    return t.target.n


def test_refines(s: Channel, t: Channel) -> Channel | None:
    """Return ``h: n ⊸ m`` with ``h • s = t``, or ``None`` when no such ``h`` exists.

    Outcomes of ``s`` that never occur leave their row of ``h`` unconstrained;
    those rows are fixed to ``1|0>``.
    """
    n = _require_test(s, "s")
    m = _require_test(t, "t")
    if s.source != t.source:
        raise SpaceMismatch(f"tests on {s.source.expr()} and {t.source.expr()}")
    labels = s.source.labels
    active = [i for i in range(n) if any(s(a)(i) for a in labels)]
    col = {(i, j): k for k, (i, j) in enumerate((i, j) for i in active for j in range(m))}
    width = len(col)
    rows, rhs = [], []
    for a in labels:
        sa, ta = s(a), t(a)
        for j in range(m):
            r = [ZERO] * width
            for i in active:
                r[col[i, j]] = sa(i)
            rows.append(r)
            rhs.append(ta(j))
    for i in active:
        r = [ZERO] * width
        for j in range(m):
            r[col[i, j]] = 1
        rows.append(r)
        rhs.append(1)
    x = find_nonnegative_solution(rows, rhs)
    if x is None:
        return None
    src, tgt = Numeric(n), Numeric(m)
    table = {}
    for i in range(n):
        if i in active:
            table[i] = Dist(tgt, {j: x[col[i, j]] for j in range(m)})
        else:
            table[i] = dirac(0, tgt)
    h = Channel(src, tgt, table)
    if kleisli_compose(h, s) != t:
        raise AssertionError("feasibility solver returned a post-processing that does not verify")
    return h


def _postprocess_graph(h: Channel, phi_space: Copower) -> Channel:
    # gr(h∘π₁): κ_i φ ↦ Σ_j h(i)(j)|κ_j κ_i φ>
    target = Copower(h.target.n, phi_space)

    def row(x):
        return Dist._trusted(target, {Tagged(j, x): p for j, p in h(x[0]).items()})

    return Channel.from_function(phi_space, target, row)


def witness_from_h(omega: Dist, s: Channel, h: Channel) -> RefinementWitness:
    """``Ω = N(gr(h∘π₁)_*(ω∥s))``, a witness for ``ω∥s ⊑ ω∥(h•s)``."""
    n = _require_test(s, "s")
    if h.source != Numeric(n) or not isinstance(h.target, Numeric):
        raise SpaceMismatch(f"h must map {n} to a numeric space, got {h.source.expr()} -> {h.target.expr()}")
    phi = hyper_condition(omega, s)
    return RefinementWitness(hyper_normalise(kleisli_apply(_postprocess_graph(h, phi.space), phi)))


def h_from_witness(witness: RefinementWitness | Dist, omega: Dist, s: Channel) -> Channel:
    """Read the post-processing ``h`` back off a witness.

    ``Θ = (st₂)_*(D(m·D(π₁))(Ω))`` over ``m·n`` is disintegrated along ``n``.
    Needs full support of ``ω`` and of ``s_*(ω)``.
    """
    big = witness.omega if isinstance(witness, RefinementWitness) else witness
    n = _require_test(s, "s")
    missing = [a for a in omega.space.labels if omega(a) == 0]
    if missing:
        raise IncompleteSupport(missing, "state")
    outcome = kleisli_apply(s, omega)
    missing = [i for i in range(n) if outcome(i) == 0]
    if missing:
        raise IncompleteSupport(missing, "test outcome distribution")
    sp = big.space
    theta_space = Copower(sp.n, Numeric(n))
    acc: dict = {}
    for (j, rho), u in big.items():
        for (i, _), p in rho.items():
            key = Tagged(j, i)
            acc[key] = acc.get(key, ZERO) + u * p
    theta = Dist._trusted(theta_space, acc)
    return disintegrate(theta).conditional


def hyper_refines(phi: Dist, psi: Dist) -> RefinementWitness | None:
    """Decide ``Φ ⊑ Ψ`` for hyper conditionals of a common full-support state.

    Returns a verified witness, or ``None`` when refinement is refuted.
    Raises :class:`IncompleteSupport` when the answer is undetermined and
    :class:`StateMismatch` when the two sides come from different states.
    """
    for name, x in (("Φ", phi), ("Ψ", psi)):
        _hyper_shape(x, name)
        if not is_normalised(x):
            raise NotNormalised(f"{name} has a tag carrying two different inner distributions")
    state = recover_state(phi)
    if recover_state(psi) != state:
        raise StateMismatch("Φ and Ψ do not flatten to the same state")
    missing = [a for a in state.space.labels if state(a) == 0]
    if missing:
        raise IncompleteSupport(missing, "state")
    s = recover_test(phi)
    t = recover_test(psi)
    h = test_refines(s, t)
    if h is None:
        return None
    w = witness_from_h(state, s, h)
    if not check_witness(phi, psi, w):
        raise AssertionError("constructed witness does not verify")
    return w


test_refines.__test__ = False
