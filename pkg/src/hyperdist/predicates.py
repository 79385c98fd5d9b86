"""Fuzzy predicates, tests, validity and traditional conditioning."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NotATest, NotOrthogonal, SpaceMismatch, ValidationError, ZeroValidity
from .kernel import Channel, Dist, Numeric, Space, as_prob
from .kernel.ket import render_label, render_prob
from .kernel.values import ONE, ZERO


class Predicate:
    """A map ``A → [0,1]``, stored total over the space."""

    __slots__ = ("space", "_values", "_lookup", "_hash")

    def __init__(self, space: Space, values: Mapping):
        table = {}
        for lab, v in values.items():
            lab = space.coerce(lab)
            v = as_prob(v)
            if not 0 <= v <= 1:
                raise ValidationError(f"predicate value {v} at {lab!r} outside [0,1]")
            table[lab] = v
        missing = [a for a in space.labels if a not in table]
        if missing:
            raise ValidationError(
                "predicate has no value for labels: " + ", ".join(str(a) for a in missing)
            )
        self.space = space
        self._values = tuple((a, table[a]) for a in space.labels)
        self._lookup = table
        self._hash = None

    def __call__(self, a) -> Fraction:
        return self._lookup[a]

    def items(self) -> tuple:
        return self._values

    @property
    def is_sharp(self) -> bool:
        return all(v in (0, 1) for _, v in self._values)

    def event(self) -> frozenset:
        """The set of labels of a sharp predicate."""
        if not self.is_sharp:
            raise ValidationError("only sharp predicates correspond to events")
        return frozenset(a for a, v in self._values if v == 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Predicate):
            return NotImplemented
        return self.space == other.space and self._values == other._values

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.space, self._values))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{render_label(a, self.space)}: {render_prob(v)}" for a, v in self._values)
        return f"Predicate({self.space.expr()}: {body})"


def _same_space(p: Predicate, q: Predicate):
    if p.space != q.space:
        raise SpaceMismatch(f"predicates over {p.space.expr()} and {q.space.expr()}")


def truth(space: Space) -> Predicate:
    return Predicate(space, {a: ONE for a in space.labels})


def falsity(space: Space) -> Predicate:
    return Predicate(space, {a: ZERO for a in space.labels})


def indicator(event: Iterable, space: Space) -> Predicate:
    """``1_E``: 1 on ``E``, 0 elsewhere."""
    inside = {space.coerce(a) for a in event}
    return Predicate(space, {a: ONE if a in inside else ZERO for a in space.labels})


def psum(p: Predicate, q: Predicate) -> Predicate:
    """Partial sum ``p ⊎ q``, defined when ``p + q ≤ 1`` pointwise."""
    _same_space(p, q)
    out = {}
    for (a, u), (_, v) in zip(p.items(), q.items()):
        if u + v > 1:
            raise NotOrthogonal(a, u + v)
        out[a] = u + v
    return Predicate(p.space, out)


def complement(p: Predicate) -> Predicate:
    """Orthosupplement ``p^⊥ = 1 − p``."""
    return Predicate(p.space, {a: 1 - v for a, v in p.items()})


def scale(s, p: Predicate) -> Predicate:
    s = as_prob(s)
    if not 0 <= s <= 1:
        raise ValidationError(f"scalar {s} outside [0,1]")
    return Predicate(p.space, {a: s * v for a, v in p.items()})


def test_from_predicate(p: Predicate) -> Channel:
    """The 2-test ``a ↦ p(a)|0> + p^⊥(a)|1>``."""
    two = Numeric(2)
    return Channel(p.space, two, {a: {0: v, 1: 1 - v} for a, v in p.items()})


def test_components(t: Channel) -> tuple:
    """The predicates ``p_i(a) = t(a)(i)`` of an n-test."""
    if not isinstance(t.target, Numeric):
        raise NotATest(f"target {t.target.expr()} is not a numeric space")
    return tuple(
        Predicate(t.source, {a: t(a)(i) for a in t.source.labels}) for i in range(t.target.n)
    )


def test_from_components(components: Sequence[Predicate]) -> Channel:
    """Assemble predicates that add up to truth into an n-test."""
    if not components:
        raise NotATest("a test needs at least one component")
    sp = components[0].space
    for q in components[1:]:
        _same_space(components[0], q)
    n = Numeric(len(components))
    rows = {}
    for a in sp.labels:
        col = [q(a) for q in components]
        if sum(col, ZERO) != 1:
            raise NotATest(f"components sum to {sum(col, ZERO)} ≠ 1 at {a!r}")
        rows[a] = {i: v for i, v in enumerate(col)}
    return Channel(sp, n, rows)


def wp(f: Channel, q: Predicate) -> Predicate:
    """Weakest precondition ``f*(q)(a) = Σ_b f(a)(b)·q(b)``."""
    if f.target != q.space:
        raise SpaceMismatch(f"channel target {f.target.expr()} vs predicate over {q.space.expr()}")
    qv = q._lookup
    return Predicate(
        f.source, {a: sum((m * qv[b] for b, m in f(a).items()), ZERO) for a in f.source.labels}
    )


def validity(omega: Dist, p: Predicate) -> Fraction:
    """``ω ⊨ p = Σ_a ω(a)·p(a)``."""
    if omega.space != p.space:
        raise SpaceMismatch(f"state over {omega.space.expr()} vs predicate over {p.space.expr()}")
    pv = p._lookup
    return sum((m * pv[a] for a, m in omega.items()), ZERO)


def condition(omega: Dist, p: Predicate) -> Dist:
    """``ω|_p(a) = ω(a)·p(a) / (ω ⊨ p)``."""
    v = validity(omega, p)
    if v == 0:
        raise ZeroValidity()
    pv = p._lookup
    return Dist._trusted(omega.space, {a: m * pv[a] / v for a, m in omega.items()})


# keep pytest from collecting these when a test module imports them
for _fn in (test_from_predicate, test_components, test_from_components):
    _fn.__test__ = False
