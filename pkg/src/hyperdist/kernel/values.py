"""Immutable distribution and channel values."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from ..errors import SpaceMismatch, UnknownLabel, ValidationError
from .ket import render_ket
from .spaces import Copower, Space

ZERO = Fraction(0)
ONE = Fraction(1)


def as_prob(x) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to an exact rational.

    Floats are refused: every computation in this package is exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"expected an exact rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        from .ket import parse_rational

        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {x!r}")


class _Masses:
    __slots__ = ("space", "_items", "_lookup", "_hash", "_key")

    def __init__(self, space: Space, mass: Mapping | Iterable = ()):
        if not isinstance(space, Space):
            raise TypeError(f"expected a Space, got {space!r}")
        pairs = mass.items() if isinstance(mass, Mapping) else mass
        lookup: dict = {}
        for lab, p in pairs:
            lab = space.coerce(lab)
            p = as_prob(p)
            if p < 0:
                raise ValidationError(f"negative mass {p} at {lab!r}")
            if lab in lookup:
                raise ValidationError(f"label {lab!r} given twice")
            if p:
                lookup[lab] = p
        self._init(space, lookup)
        self._check_total()

    @classmethod
    def _trusted(cls, space: Space, lookup: dict):
        """Build from an already-coerced label map; zeros are dropped here."""
        obj = cls.__new__(cls)
        obj._init(space, {k: v for k, v in lookup.items() if v})
        obj._check_total()
        return obj

    def _init(self, space, lookup):
        key = space.sort_key
        items = tuple(sorted(lookup.items(), key=lambda kv: key(kv[0])))
        self.space = space
        self._items = items
        self._lookup = dict(items)
        self._hash = None
        self._key = None

    def _check_total(self):
        raise NotImplementedError

    def __call__(self, label) -> Fraction:
        return self._lookup.get(label, ZERO)

    def items(self) -> tuple:
        """``(label, mass)`` pairs of the support, in space order."""
        return self._items

    @property
    def support(self) -> tuple:
        return tuple(a for a, _ in self._items)

    def total(self) -> Fraction:
        return sum((m for _, m in self._items), ZERO)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self.support)

    def sort_key(self) -> tuple:
        if self._key is None:
            sk = self.space.sort_key
            self._key = tuple((sk(a), m) for a, m in self._items)
        return self._key

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._items == other._items and self.space == other.space

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.space, self._items))
        return self._hash

    def __lt__(self, other) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return render_ket(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.space.expr()}: {render_ket(self)})"

    @property
    def arity(self) -> int:
        """Arity of the enclosing copower; only defined for tagged values."""
        if not isinstance(self.space, Copower):
            raise TypeError(f"{self.space.expr()} is not a copower")
        return self.space.n


class Dist(_Masses):
    """A finitely supported distribution: exact masses summing to exactly 1."""

    __slots__ = ()

    def _check_total(self):
        t = self.total()
        if t != 1:
            raise ValidationError(f"distribution mass {t} ≠ 1")


class SubDist(_Masses):
    """A subdistribution: masses summing to at most 1 (possibly 0)."""

    __slots__ = ()

    def _check_total(self):
        t = self.total()
        if t > 1:
            raise ValidationError(f"subdistribution mass {t} > 1")


class Channel:
    """A Kleisli map ``source ⊸ target``.

    Channels over a finite source are stored as total row tables. Channels
    over an infinite source (for instance ``n·D(A)``) are built with
    :meth:`from_function`; their rows are computed and checked on demand.
    """

    __slots__ = ("source", "target", "_rows", "_fn", "_hash")

    def __init__(self, source: Space, target: Space, rows: Mapping):
        if not source.is_finite:
            raise ValidationError(f"source {source.expr()} is infinite; use Channel.from_function")
        table = {}
        for lab, row in rows.items():
            lab = source.coerce(lab)
            if lab in table:
                raise ValidationError(f"row {lab!r} given twice")
            table[lab] = _as_row(row, target, lab)
        missing = [a for a in source.labels if a not in table]
        if missing:
            raise ValidationError(
                "channel rows missing for labels: " + ", ".join(str(a) for a in missing)
            )
        self.source = source
        self.target = target
        self._rows = {a: table[a] for a in source.labels}
        self._fn = None
        self._hash = None

    @classmethod
    def from_function(cls, source: Space, target: Space, fn: Callable) -> "Channel":
        if source.is_finite:
            return cls(source, target, {a: fn(a) for a in source.labels})
        obj = cls.__new__(cls)
        obj.source = source
        obj.target = target
        obj._rows = None
        obj._fn = fn
        obj._hash = None
        return obj

    @property
    def is_tabulated(self) -> bool:
        return self._rows is not None

    @property
    def rows(self) -> dict:
        if self._rows is None:
            raise TypeError("channel over an infinite source has no row table")
        return dict(self._rows)

    def __call__(self, x) -> Dist:
        if self._rows is not None:
            try:
                return self._rows[x]
            except (KeyError, TypeError):
                raise UnknownLabel(x, self.source.expr()) from None
        x = self.source.coerce(x)
        return _as_row(self._fn(x), self.target, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Channel):
            return NotImplemented
        if self._rows is None or other._rows is None:
            return self is other
        return self.source == other.source and self.target == other.target and self._rows == other._rows

    def __hash__(self) -> int:
        if self._rows is None:
            return id(self)
        if self._hash is None:
            self._hash = hash((self.source, self.target, tuple(self._rows.items())))
        return self._hash

    def __repr__(self) -> str:
        if self._rows is None:
            return f"Channel({self.source.expr()} -> {self.target.expr()}, lazy)"
        from .ket import render_label

        body = "; ".join(
            f"{render_label(a, self.source)} -> {render_ket(d)}" for a, d in self._rows.items()
        )
        return f"Channel({self.source.expr()} -> {self.target.expr()}: {body})"


def _as_row(row, target: Space, lab) -> Dist:
    if isinstance(row, Dist):
        if row.space != target:
            raise SpaceMismatch(
                f"row {lab!r} lives in {row.space.expr()}, expected {target.expr()}"
            )
        return row
    if isinstance(row, SubDist):
        raise ValidationError(f"row {lab!r} is a subdistribution, not a distribution")
    try:
        return Dist(target, row)
    except ValidationError as exc:
        raise ValidationError(f"row {lab!r}: {exc}") from None
