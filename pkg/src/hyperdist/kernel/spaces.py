"""Sample spaces.

A space knows which labels belong to it, how to order them, and how to
coerce loosely typed input (plain tuples, ints) into its canonical label
type. Finite spaces enumerate their labels; ``Dists`` and ``UnitInterval``
are infinite and only answer membership questions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

from ..errors import UnknownLabel, ValidationError


class Tagged(NamedTuple):
    """Element ``κ_tag(label)`` of a copower ``n·A``."""

    tag: int
    label: Any


class Injected(NamedTuple):
    """Element of a binary sum ``A+B``; ``side`` is 1 for ``A`` and 2 for ``B``."""

    side: int
    value: Any


RESERVED_NAMES = frozenset({"D", "prod", "sum", "Unit"})


class Space:
    """Abstract base. Subclasses are frozen dataclasses compared structurally."""

    is_finite: bool = True

    def coerce(self, x):
        """Return the canonical form of ``x`` or raise :class:`UnknownLabel`."""
        raise NotImplementedError

    def __contains__(self, x) -> bool:
        try:
            self.coerce(x)
        except (UnknownLabel, TypeError, ValueError):
            return False
        return True

    def sort_key(self, x):
        raise NotImplementedError

    def expr(self) -> str:
        """Compact textual name, parseable by :func:`parse_space`."""
        raise NotImplementedError

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return self.expr()


@dataclass(frozen=True)
class Finite(Space):
    name: str
    labels: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ValidationError(f"space {self.name} has no labels")
        index = {}
        for pos, lab in enumerate(labels):
            if lab in index:
                raise ValidationError(f"space {self.name} repeats label {lab!r}")
            index[lab] = pos
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", index)

    def coerce(self, x):
        try:
            if x in self._index:
                return x
        except TypeError:
            pass
        raise UnknownLabel(x, self.name)

    def sort_key(self, x):
        return self._index[x]

    def expr(self) -> str:
        return self.name

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Numeric(Space):
    """The space ``n = {0, ..., n-1}`` with integer labels."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValidationError(f"numeric space size must be a natural number, got {self.n!r}")

    @property
    def labels(self) -> tuple:
        return tuple(range(self.n))

    def coerce(self, x):
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.n:
            return x
        raise UnknownLabel(x, self.expr())

    def sort_key(self, x):
        return x

    def expr(self) -> str:
        return str(self.n)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class Copower(Space):
    """``n·A``: ``n`` tagged copies of ``base``. The arity is part of equality."""

    n: int
    base: Space

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValidationError(f"copower arity must be a natural number, got {self.n!r}")
        object.__setattr__(self, "is_finite", self.base.is_finite)

    @property
    def labels(self) -> tuple:
        base = self.base.labels
        return tuple(Tagged(i, a) for i in range(self.n) for a in base)

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == 2:
            i, a = x
            if isinstance(i, int) and not isinstance(i, bool) and 0 <= i < self.n:
                return Tagged(i, self.base.coerce(a))
        raise UnknownLabel(x, self.expr())

    def sort_key(self, x):
        return (x[0], self.base.sort_key(x[1]))

    def expr(self) -> str:
        return f"{self.n}*{self.base.expr()}"

    def __len__(self) -> int:
        return self.n * len(self.base)


@dataclass(frozen=True)
class Product(Space):
    left: Space
    right: Space

    def __post_init__(self):
        object.__setattr__(self, "is_finite", self.left.is_finite and self.right.is_finite)

    @property
    def labels(self) -> tuple:
        return tuple((a, b) for a in self.left.labels for b in self.right.labels)

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == 2:
            return (self.left.coerce(x[0]), self.right.coerce(x[1]))
        raise UnknownLabel(x, self.expr())

    def sort_key(self, x):
        return (self.left.sort_key(x[0]), self.right.sort_key(x[1]))

    def expr(self) -> str:
        return f"prod({self.left.expr()},{self.right.expr()})"

    def __len__(self) -> int:
        return len(self.left) * len(self.right)


@dataclass(frozen=True)
class Sum(Space):
    """Binary coproduct ``left + right`` with labels :class:`Injected`."""

    left: Space
    right: Space

    def __post_init__(self):
        object.__setattr__(self, "is_finite", self.left.is_finite and self.right.is_finite)

    @property
    def labels(self) -> tuple:
        return tuple(Injected(1, a) for a in self.left.labels) + tuple(
            Injected(2, b) for b in self.right.labels
        )

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == 2:
            side, v = x
            if side == 1 and not isinstance(side, bool):
                return Injected(1, self.left.coerce(v))
            if side == 2:
                return Injected(2, self.right.coerce(v))
        raise UnknownLabel(x, self.expr())

    def sort_key(self, x):
        sub = self.left if x[0] == 1 else self.right
        return (x[0], sub.sort_key(x[1]))

    def expr(self) -> str:
        return f"sum({self.left.expr()},{self.right.expr()})"

    def __len__(self) -> int:
        return len(self.left) + len(self.right)


@dataclass(frozen=True)
class Dists(Space):
    """``D(base)``: the (infinite) space whose points are distributions over ``base``."""

    base: Space
    is_finite = False

    @property
    def labels(self) -> tuple:
        raise TypeError(f"space {self.expr()} is infinite and has no label list")

    def coerce(self, x):
        from .values import Dist

        if isinstance(x, Dist) and x.space == self.base:
            return x
        raise UnknownLabel(x, self.expr())

    def sort_key(self, x):
        return x.sort_key()

    def expr(self) -> str:
        return f"D({self.base.expr()})"

    def __len__(self) -> int:
        raise TypeError(f"space {self.expr()} is infinite")


@dataclass(frozen=True)
class UnitInterval(Space):
    """Rational scores in ``[0,1]``."""

    is_finite = False

    @property
    def labels(self) -> tuple:
        raise TypeError("space Unit is infinite and has no label list")

    def coerce(self, x):
        if isinstance(x, (float, bool)):
            raise UnknownLabel(x, "Unit")
        try:
            q = Fraction(x)
        except (TypeError, ValueError):
            raise UnknownLabel(x, "Unit") from None
        if not 0 <= q <= 1:
            raise UnknownLabel(x, "Unit")
        return q

    def sort_key(self, x):
        return x

    def expr(self) -> str:
        return "Unit"

    def __len__(self) -> int:
        raise TypeError("space Unit is infinite")


ONE = Numeric(1)


def space(name: str, labels) -> Finite:
    """Declare a finite space with the given label order."""
    return Finite(name, tuple(labels))


def maybe(base: Space) -> Sum:
    """``A+1``: the base space with one extra point ``Injected(2, 0)``."""
    return Sum(base, ONE)
