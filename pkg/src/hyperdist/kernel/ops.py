"""Distribution-monad operations.

Throughout, a *Kleisli map* is either a :class:`Channel` or any callable
returning a :class:`Dist`. Plain callables are convenient for maps whose
source is infinite, such as ``N`` viewed as ``D(n·A) → D(n·D(A))``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import SpaceMismatch, UnknownLabel, ValidationError
from .spaces import Copower, Dists, Numeric, Product, Space, Tagged
from .values import ONE, ZERO, Channel, Dist, SubDist, as_prob


def dirac(a, space: Space) -> Dist:
    """Point mass ``1|a>``."""
    return Dist._trusted(space, {space.coerce(a): ONE})


def push_forward(f: Callable, omega: Dist, target: Space) -> Dist:
    """``D(f)(ω)``: masses of labels with equal image are merged."""
    acc: dict = {}
    for a, m in omega.items():
        b = f(a)
        try:
            b = target.coerce(b)
        except UnknownLabel:
            raise UnknownLabel(b, target.expr()) from None
        acc[b] = acc.get(b, ZERO) + m
    return Dist._trusted(target, acc)


def flatten(xi: Dist) -> Dist:
    """``μ``: average a distribution of distributions."""
    if not isinstance(xi.space, Dists):
        raise SpaceMismatch(f"flatten expects a distribution over D(A), got {xi.space.expr()}")
    acc: dict = {}
    for inner, r in xi.items():
        for a, m in inner.items():
            acc[a] = acc.get(a, ZERO) + r * m
    return Dist._trusted(xi.space.base, acc)


def _row(g, a) -> Dist:
    d = g(a)
    if not isinstance(d, Dist):
        raise TypeError(f"Kleisli map returned {d!r} instead of a Dist")
    return d


def kleisli_apply(g, omega: Dist) -> Dist:
    """``g_*(ω)(c) = Σ_a ω(a)·g(a)(c)``."""
    if isinstance(g, Channel):
        if omega.space != g.source:
            raise SpaceMismatch(
                f"channel source {g.source.expr()} does not match {omega.space.expr()}"
            )
        target = g.target
    else:
        target = None
    acc: dict = {}
    for a, m in omega.items():
        row = _row(g, a)
        if target is None:
            target = row.space
        elif row.space != target:
            raise SpaceMismatch(
                f"Kleisli map returned rows over both {target.expr()} and {row.space.expr()}"
            )
        for c, p in row.items():
            acc[c] = acc.get(c, ZERO) + m * p
    return Dist._trusted(target, acc)


def kleisli_compose(g: Channel, f: Channel) -> Channel:
    """``g • f``: first ``f``, then ``g``."""
    if f.target != g.source:
        raise SpaceMismatch(f"cannot compose: {f.target.expr()} vs {g.source.expr()}")
    return Channel.from_function(f.source, g.target, lambda a: kleisli_apply(g, f(a)))


def unit_channel(space: Space) -> Channel:
    """The identity channel ``η``."""
    return Channel.from_function(space, space, lambda a: dirac(a, space))


def deterministic(f: Callable, source: Space, target: Space) -> Channel:
    """The channel ``η∘f`` of a function."""
    return Channel.from_function(source, target, lambda a: dirac(f(a), target))


def _pair_space(left: Space, right: Space) -> Space:
    # n×A is represented as the copower n·A
    if isinstance(left, Numeric):
        return Copower(left.n, right)
    return Product(left, right)


def _pair(space: Space, x, y):
    return Tagged(x, y) if isinstance(space, Copower) else (x, y)


def strength_left(omega: Dist, b, b_space: Space) -> Dist:
    """``st₁(Σ r_i|a_i>, b) = Σ r_i|a_i,b>``.

    When ``ω`` lives in a numeric space ``n`` the result lives in ``n·B``.
    """
    b = b_space.coerce(b)
    sp = _pair_space(omega.space, b_space)
    return Dist._trusted(sp, {_pair(sp, a, b): m for a, m in omega.items()})


def strength_right(a, a_space: Space, omega: Dist) -> Dist:
    """``st₂(a, Σ r_i|b_i>) = Σ r_i|a,b_i>``; a numeric ``a_space`` gives a copower."""
    a = a_space.coerce(a)
    sp = _pair_space(a_space, omega.space)
    return Dist._trusted(sp, {_pair(sp, a, b): m for b, m in omega.items()})


def graph(f: Channel) -> Channel:
    """``gr(f)(a) = Σ_b f(a)(b)|b,a>``.

    For a test (numeric target ``n``) the result is the tagged channel
    ``A ⊸ n·A`` with ``κ_b a``.
    """
    sp = _pair_space(f.target, f.source)

    def row(a):
        return Dist._trusted(sp, {_pair(sp, b, a): m for b, m in f(a).items()})

    return Channel.from_function(f.source, sp, row)


def _copower_of(omega) -> Copower:
    if not isinstance(omega.space, Copower):
        raise SpaceMismatch(f"expected a tagged distribution, got one over {omega.space.expr()}")
    return omega.space


def weight(omega: Dist, i: int) -> Fraction:
    """``ω[i] = Σ_a ω(κ_i a)``."""
    sp = _copower_of(omega)
    if not 0 <= i < sp.n:
        raise UnknownLabel(i, f"tags of {sp.expr()}")
    return sum((m for x, m in omega.items() if x[0] == i), ZERO)


def weights(omega: Dist) -> tuple:
    """All tag weights ``(ω[0], ..., ω[n-1])``."""
    sp = _copower_of(omega)
    w = [ZERO] * sp.n
    for x, m in omega.items():
        w[x[0]] += m
    return tuple(w)


def fiber(omega: Dist, a) -> SubDist:
    """``Ω_a = Σ_i Ω(κ_i a)|i>``, a subdistribution over ``n``."""
    sp = _copower_of(omega)
    a = sp.base.coerce(a)
    return SubDist._trusted(Numeric(sp.n), {i: omega(Tagged(i, a)) for i in range(sp.n)})


def tagged(n: int, base: Space, mass) -> Dist:
    """Build a distribution over ``n·base`` from ``{(i, a): p}``."""
    return Dist(Copower(n, base), mass)


def channel_copower_right(g: Channel, n: int) -> Channel:
    """``n·g``: ``κ_i a ↦ Σ_b g(a)(b)|κ_i b>``."""
    src, tgt = Copower(n, g.source), Copower(n, g.target)

    def row(x):
        return Dist._trusted(tgt, {Tagged(x[0], b): m for b, m in g(x[1]).items()})

    return Channel.from_function(src, tgt, row)


def channel_copower_left(h: Channel, base: Space) -> Channel:
    """``h·A``: ``κ_i a ↦ Σ_j h(i)(j)|κ_j a>`` for ``h: n ⊸ m``."""
    if not (isinstance(h.source, Numeric) and isinstance(h.target, Numeric)):
        raise SpaceMismatch("h must map a numeric space to a numeric space")
    src, tgt = Copower(h.source.n, base), Copower(h.target.n, base)

    def row(x):
        return Dist._trusted(tgt, {Tagged(j, x[1]): m for j, m in h(x[0]).items()})

    return Channel.from_function(src, tgt, row)


def _components(space: Space) -> tuple:
    if isinstance(space, Copower):
        return Numeric(space.n), space.base
    if isinstance(space, Product):
        return space.left, space.right
    raise SpaceMismatch(f"{space.expr()} is not a pair space")


def marginal_first(omega: Dist) -> Dist:
    """``D(π₁)``; for a copower this is the distribution of tags."""
    left, _ = _components(omega.space)
    return push_forward(lambda x: x[0], omega, left)


def marginal_second(omega: Dist) -> Dist:
    """``D(π₂)``; for a copower this is ``D(∇)``, erasing tags."""
    _, right = _components(omega.space)
    return push_forward(lambda x: x[1], omega, right)


codiagonal = marginal_second


def twist(omega: Dist) -> Dist:
    """``D(tw)``: swap the two components; a copower ``n·A`` becomes ``A×n``."""
    left, right = _components(omega.space)
    sp = _pair_space(right, left)
    return push_forward(lambda x: _pair(sp, x[1], x[0]), omega, sp)


def convex_sum(terms: Iterable[tuple], space: Space | None = None) -> Dist:
    """``Σ r_k ω_k`` for weights ``r_k`` summing to 1 and distributions ``ω_k``."""
    acc: dict = {}
    total = ZERO
    for r, omega in terms:
        r = as_prob(r)
        if space is None:
            space = omega.space
        elif omega.space != space:
            raise SpaceMismatch(f"cannot mix {omega.space.expr()} into {space.expr()}")
        total += r
        for a, m in omega.items():
            acc[a] = acc.get(a, ZERO) + r * m
    if space is None:
        raise ValidationError("convex sum of no terms")
    if total != 1:
        raise ValidationError(f"convex weights sum to {total} ≠ 1")
    return Dist._trusted(space, acc)


def inject(i: int, n: int, omega: Dist) -> Dist:
    """``D(κ_i)(ω)`` over ``n·A``."""
    sp = Copower(n, omega.space)
    if not 0 <= i < n:
        raise UnknownLabel(i, f"tags of {sp.expr()}")
    return Dist._trusted(sp, {Tagged(i, a): m for a, m in omega.items()})


def common_space(dists: Sequence[Dist]) -> Space:
    """The common space of a nonempty sequence of distributions."""
    if not dists:
        raise ValidationError("empty sequence of distributions")
    sp = dists[0].space
    for d in dists[1:]:
        if d.space != sp:
            raise SpaceMismatch(f"mixed spaces {sp.expr()} and {d.space.expr()}")
    return sp
