"""Normalisation: the partial traditional one and the total hyper one.

``hyper_normalise`` maps a distribution over ``n·A`` to a distribution
over ``n·D(A)`` by normalising every tag block separately and weighting
the result by the block's mass. It never fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import IncompleteSupport, SpaceMismatch, ValidationError, ZeroScoreMass, ZeroSubdistribution
from .kernel import (
    Channel,
    Copower,
    Dist,
    Dists,
    Injected,
    Numeric,
    Product,
    SubDist,
    Sum,
    Tagged,
    UnitInterval,
    common_space,
    graph,
    kleisli_apply,
    marginal_second,
    maybe,
)
from .kernel.ops import _components
from .kernel.values import ZERO

__all__ = [
    "DisintegrationResult",
    "nrm",
    "hyper_normalise",
    "sprinkle",
    "joint_from_conditional",
    "disintegrate",
    "as_maybe",
    "normalise_maybe",
    "maybe_extract",
    "normalise_scored",
    "scored_extract",
    "score_space",
]


def nrm(phi: SubDist | Dist) -> Dist:
    """Rescale a nonzero subdistribution to total mass 1."""
    total = phi.total()
    if total == 0:
        raise ZeroSubdistribution()
    return Dist._trusted(phi.space, {a: m / total for a, m in phi.items()})


def hyper_normalise(omega: Dist) -> Dist:
    """``N``: ``Σ_{ω[i]≠0} ω[i] |κ_i(Σ_a ω(κ_i a)/ω[i] |a>)>``, keeping the arity."""
    sp = omega.space
    if not isinstance(sp, Copower):
        raise SpaceMismatch(f"hyper normalisation needs a copower, got {sp.expr()}")
    blocks: dict[int, dict] = {}
    for x, m in omega.items():
        blocks.setdefault(x[0], {})[x[1]] = m
    out = {}
    for i, block in blocks.items():
        w = sum(block.values(), ZERO)
        inner = Dist._trusted(sp.base, {a: m / w for a, m in block.items()})
        out[Tagged(i, inner)] = w
    return Dist._trusted(Copower(sp.n, Dists(sp.base)), out)


def sprinkle(r: Dist, phis: Sequence[Dist]) -> Dist:
    """``spr(r, φ) = Σ_i r_i·φ_i`` for ``r`` over ``n`` and ``n`` distributions ``φ_i``."""
    if not isinstance(r.space, Numeric):
        raise SpaceMismatch(f"sprinkle weights must live in a numeric space, got {r.space.expr()}")
    if len(phis) != r.space.n:
        raise ValidationError(f"sprinkle expects {r.space.n} distributions, got {len(phis)}")
    base = common_space(list(phis))
    acc: dict = {}
    for i, w in r.items():
        for a, m in phis[i].items():
            acc[a] = acc.get(a, ZERO) + w * m
    return Dist._trusted(base, acc)


@dataclass(frozen=True)
class DisintegrationResult:
    conditional: Channel
    marginal: Dist


def joint_from_conditional(f: Channel, omega: Dist) -> Dist:
    """``Ω(κ_i a) = ω(a)·f(a)(i)``, i.e. ``gr(f)_*(ω)``."""
    if f.source != omega.space:
        raise SpaceMismatch(f"conditional source {f.source.expr()} vs state {omega.space.expr()}")
    return kleisli_apply(graph(f), omega)


def disintegrate(joint: Dist) -> DisintegrationResult:
    """Split a joint over ``n·A`` (or ``B×A``) into marginal on ``A`` and ``A ⊸ n``.

    The marginal must have full support; otherwise the conditional is not
    determined and :class:`IncompleteSupport` names the uncovered labels.
    """
    left, right = _components(joint.space)
    marginal = marginal_second(joint)
    missing = [a for a in right.labels if marginal(a) == 0]
    if missing:
        raise IncompleteSupport(missing)
    rows: dict = {a: {} for a in right.labels}
    for x, m in joint.items():
        rows[x[1]][x[0]] = m / marginal(x[1])
    cond = Channel(right, left, {a: Dist._trusted(left, r) for a, r in rows.items()})
    return DisintegrationResult(cond, marginal)


# -- alternatives built from N ---------------------------------------------


def as_maybe(phi: SubDist | Dist) -> Dist:
    """View a subdistribution over ``A`` as a distribution over ``A+1``.

    The missing mass goes to the extra point ``κ₂0``.
    """
    sp = maybe(phi.space)
    mass = {Injected(1, a): m for a, m in phi.items()}
    mass[Injected(2, 0)] = 1 - phi.total()
    return Dist._trusted(sp, mass)


def normalise_maybe(omega: Dist) -> Dist:
    """Total normalisation of ``ω`` over ``A+1`` into ``2·D(A+1)``.

    Push forward along ``κ₁+κ₂`` into ``(A+1)+(A+1)`` (read as ``2·(A+1)``,
    tag 0 for the left summand) and apply ``N``.
    """
    sp = omega.space
    if not (isinstance(sp, Sum) and sp.right == Numeric(1)):
        raise SpaceMismatch(f"expected a distribution over A+1, got {sp.expr()}")
    split = Dist._trusted(
        Copower(2, sp), {Tagged(x[0] - 1, x): m for x, m in omega.items()}
    )
    return hyper_normalise(split)


def maybe_extract(hyper: Dist) -> Dist:
    """The normalised ``A``-part of a :func:`normalise_maybe` result."""
    for x, _ in hyper.items():
        if x[0] == 0:
            inner = x[1]
            return Dist._trusted(inner.space.left, {y[1]: m for y, m in inner.items()})
    raise ZeroSubdistribution()


def score_space(base) -> Product:
    """``[0,1]×A``: rational scores paired with labels."""
    return Product(UnitInterval(), base)


def normalise_scored(sigma: Dist) -> Dist:
    """Total score-based normalisation into ``A+1``.

    ``Σ r_i|s_i,a_i> ↦ Σ r_i·s_i|κ₁a_i> + (Σ r_i·(1−s_i))|κ₂0>``.
    """
    sp = sigma.space
    if not (isinstance(sp, Product) and isinstance(sp.left, UnitInterval)):
        raise SpaceMismatch(f"expected a distribution over Unit×A, got {sp.expr()}")
    base = sp.right
    acc: dict = {}
    rest = ZERO
    for (s, a), r in sigma.items():
        if not 0 <= s <= 1:
            raise ValidationError(f"score {s} outside [0,1]")
        key = Injected(1, a)
        acc[key] = acc.get(key, ZERO) + r * s
        rest += r * (1 - s)
    acc[Injected(2, 0)] = rest
    return Dist._trusted(maybe(base), acc)


def scored_extract(sigma: Dist) -> Dist:
    """``Σ_i (r_i·s_i / Σ_j r_j·s_j)|a_i>``; fails when all score mass is zero."""
    total = ZERO
    acc: dict = {}
    for (s, a), r in sigma.items():
        acc[a] = acc.get(a, ZERO) + r * s
        total += r * s
    if total == 0:
        raise ZeroScoreMass()
    return Dist._trusted(sigma.space.right, {a: m / total for a, m in acc.items()})
