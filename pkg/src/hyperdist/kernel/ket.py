"""Ket notation: ``1/4|a> + 3/4|b>``.

Rendering is canonical (support in space order, rationals in lowest terms)
so the rendered text of a distribution can serve as a key. Parsing is
directed by the expected space, which makes nested values such as
``k0(1/3|a> + 2/3|b>)`` unambiguous.

Label syntax per space kind:

* finite: the label text itself
* numeric: decimal integer
* copower ``n*A``: ``k<i>(<label of A>)``
* sum ``sum(A,B)``: ``k1(<label of A>)`` or ``k2(<label of B>)``
* product ``prod(A,B)``: ``(<label of A>,<label of B>)``
* ``D(A)``: a ket over ``A``
* ``Unit``: a rational
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from ..errors import ValidationError
from .spaces import Copower, Dists, Finite, Numeric, Product, Space, Sum, UnitInterval

# characters that may not occur inside a finite-space label if it is to be rendered
RESERVED_CHARS = frozenset("|<>()+,[]{}\"' \t\r\n")
_LABEL_RE = re.compile(r"[^|<>()+,\[\]{}\"'\s]+")


class KetParseError(ValidationError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at offset {pos} in {text!r}")
        self.pos = pos


def render_prob(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_label(x, space: Space) -> str:
    if isinstance(space, Finite):
        return str(x)
    if isinstance(space, Numeric):
        return str(x)
    if isinstance(space, Copower):
        return f"k{x[0]}({render_label(x[1], space.base)})"
    if isinstance(space, Sum):
        sub = space.left if x[0] == 1 else space.right
        return f"k{x[0]}({render_label(x[1], sub)})"
    if isinstance(space, Product):
        return f"({render_label(x[0], space.left)},{render_label(x[1], space.right)})"
    if isinstance(space, Dists):
        return render_ket(x)
    if isinstance(space, UnitInterval):
        return render_prob(x)
    raise TypeError(f"cannot render labels of {space!r}")


def render_ket(d) -> str:
    """Render a Dist or SubDist; the zero subdistribution renders as ``0``."""
    if not d.items():
        return "0"
    sp = d.space
    return " + ".join(f"{render_prob(m)}|{render_label(a, sp)}>" for a, m in d.items())


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` with nonnegative ``p`` and positive ``q``."""
    m = re.fullmatch(r"\s*(\d+)(?:/(\d+))?\s*", text)
    if m is None:
        if text.strip().startswith(("-", "−")):
            raise ValidationError(f"negative rational {text!r}")
        raise ValidationError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    return Fraction(num, den)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, msg: str):
        raise KetParseError(msg, self.text, self.pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, s: str):
        self.ws()
        if not self.text.startswith(s, self.pos):
            self.fail(f"expected {s!r}")
        self.pos += len(s)

    def rational(self) -> Fraction:
        self.ws()
        if self.peek() in ("-", "−"):
            self.fail("negative rational")
        m = re.compile(r"(\d+)(?:/(\d+))?").match(self.text, self.pos)
        if m is None:
            self.fail("expected a rational")
        self.pos = m.end()
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            self.fail("zero denominator")
        return Fraction(int(m.group(1)), den)

    def natural(self) -> int:
        self.ws()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if m is None:
            self.fail("expected a natural number")
        self.pos = m.end()
        return int(m.group(0))

    def label(self, space: Space):
        if isinstance(space, Finite):
            self.ws()
            m = _LABEL_RE.match(self.text, self.pos)
            if m is None:
                self.fail(f"expected a label of {space.name}")
            lookup = _finite_lookup(space)
            if m.group(0) not in lookup:
                self.fail(f"unknown label {m.group(0)!r} of {space.name}")
            self.pos = m.end()
            return lookup[m.group(0)]
        if isinstance(space, Numeric):
            start = self.pos
            i = self.natural()
            if i >= space.n:
                self.pos = start
                self.fail(f"label {i} out of range for {space.n}")
            return i
        if isinstance(space, (Copower, Sum)):
            self.expect("k")
            start = self.pos
            i = self.natural()
            if isinstance(space, Copower):
                if i >= space.n:
                    self.pos = start
                    self.fail(f"tag {i} out of range for arity {space.n}")
                sub = space.base
            else:
                if i not in (1, 2):
                    self.pos = start
                    self.fail("sum injection must be k1 or k2")
                sub = space.left if i == 1 else space.right
            self.expect("(")
            inner = self.label(sub)
            self.expect(")")
            return space.coerce((i, inner))
        if isinstance(space, Product):
            self.expect("(")
            a = self.label(space.left)
            self.expect(",")
            b = self.label(space.right)
            self.expect(")")
            return (a, b)
        if isinstance(space, Dists):
            return self.ket(space.base, proper=True)
        if isinstance(space, UnitInterval):
            start = self.pos
            q = self.rational()
            if q > 1:
                self.pos = start
                self.fail("score above 1")
            return q
        self.fail(f"cannot parse labels of {space!r}")

    def ket(self, space: Space, proper: bool):
        from .values import Dist, SubDist

        self.ws()
        if self.text.startswith("0", self.pos) and not proper:
            # zero subdistribution, but not the start of a term such as "0|a>"
            save = self.pos
            self.pos += 1
            if self.peek() != "|" and not self.peek().isdigit() and self.peek() != "/":
                return SubDist(space, {})
            self.pos = save
        mass: dict = {}
        while True:
            p = self.rational()
            self.expect("|")
            start = self.pos
            lab = self.label(space)
            if lab in mass:
                self.pos = start
                self.fail("repeated label")
            self.expect(">")
            mass[lab] = p
            if self.peek() != "+":
                break
            self.pos += 1
        cls = Dist if proper else SubDist
        try:
            return cls(space, mass)
        except ValidationError as exc:
            self.fail(str(exc))

    def done(self):
        self.ws()
        if self.pos != len(self.text):
            self.fail("trailing text")


@lru_cache(maxsize=512)
def _finite_lookup(space: Finite) -> dict:
    return {str(lab): lab for lab in space.labels}


def parse_label(text: str, space: Space):
    p = _Parser(text)
    lab = p.label(space)
    p.done()
    return lab


def parse_ket(text: str, space: Space, *, proper: bool = True):
    """Parse a ket over ``space``; ``proper=False`` yields a SubDist."""
    p = _Parser(text)
    d = p.ket(space, proper)
    p.done()
    return d


def check_renderable(space: Finite):
    """Raise if some label of ``space`` cannot round-trip through ket text."""
    seen = set()
    for lab in space.labels:
        s = str(lab)
        if not isinstance(lab, str) or _LABEL_RE.fullmatch(s) is None:
            raise ValidationError(f"space {space.name}: label {lab!r} is not renderable")
        if s in seen:
            raise ValidationError(f"space {space.name}: two labels render as {s!r}")
        seen.add(s)
