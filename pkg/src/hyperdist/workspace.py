"""Workspace files: named spaces, distributions, channels, tests, predicates.

A workspace is a JSON document; see the README for the exact format.
Loading validates every object, and errors name the offending entry.
Dumping is canonical, so ``dumps(loads(text))`` is a fixed point and two
equal workspaces render to identical bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .kernel import (
    Channel,
    Copower,
    Dist,
    Dists,
    Finite,
    Numeric,
    Product,
    Space,
    SubDist,
    Sum,
    UnitInterval,
)
from .kernel.ket import check_renderable, parse_label, parse_rational, render_label, render_prob
from .kernel.spaces import RESERVED_NAMES
from .predicates import Predicate

SECTIONS = ("spaces", "dists", "subdists", "channels", "tests", "predicates", "hyperdists", "labels")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class WorkspaceError(ValidationError):
    """A workspace file is malformed or violates an invariant."""


# -- space expressions -------------------------------------------------------


def parse_space(expr: str, declared: dict) -> Space:
    """Parse ``A``, ``3``, ``3*A``, ``D(A)``, ``prod(A,B)``, ``sum(A,1)`` or ``Unit``."""
    text = expr.replace(" ", "")
    pos = 0

    def fail(msg):
        raise WorkspaceError(f"space expression {expr!r}: {msg}")

    def term():
        nonlocal pos
        m = re.compile(r"\d+").match(text, pos)
        if m:
            pos = m.end()
            n = int(m.group(0))
            if text.startswith("*", pos):
                pos += 1
                return Copower(n, term())
            return Numeric(n)
        for head in ("D(", "prod(", "sum("):
            if text.startswith(head, pos):
                pos += len(head)
                first = term()
                if head == "D(":
                    close()
                    return Dists(first)
                if not text.startswith(",", pos):
                    fail("expected ','")
                pos += 1
                second = term()
                close()
                return Product(first, second) if head == "prod(" else Sum(first, second)
        m = _NAME_RE.match(text, pos)
        if m is None:
            fail(f"unexpected text at offset {pos}")
        pos = m.end()
        name = m.group(0)
        if name == "Unit":
            return UnitInterval()
        if name not in declared:
            fail(f"unknown space {name}")
        return declared[name]

    def close():
        nonlocal pos
        if not text.startswith(")", pos):
            fail("expected ')'")
        pos += 1

    sp = term()
    if pos != len(text):
        fail(f"trailing text at offset {pos}")
    return sp


def finite_parts(sp: Space, acc: dict | None = None) -> dict:
    """All declared (finite, named) spaces occurring inside ``sp``."""
    acc = {} if acc is None else acc
    if isinstance(sp, Finite):
        if acc.get(sp.name, sp) != sp:
            raise WorkspaceError(f"two different spaces are both named {sp.name}")
        acc[sp.name] = sp
    elif isinstance(sp, (Copower, Dists)):
        finite_parts(sp.base, acc)
    elif isinstance(sp, (Product, Sum)):
        finite_parts(sp.left, acc)
        finite_parts(sp.right, acc)
    return acc


# -- rationals and masses ------------------------------------------------------


def _rational(v, where: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise WorkspaceError(f"{where}: rationals must be strings 'p/q' or integers, got {v!r}")
    if isinstance(v, int):
        if v < 0:
            raise WorkspaceError(f"{where}: negative rational {v}")
        return Fraction(v)
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ValidationError as exc:
            raise WorkspaceError(f"{where}: {exc}") from None
    raise WorkspaceError(f"{where}: expected a rational, got {v!r}")


def _json_rational(q: Fraction):
    return render_prob(q)


def _label(raw, sp: Space, where: str):
    try:
        if isinstance(raw, list):
            if len(raw) != 2 or not isinstance(sp, Copower) or not isinstance(raw[0], int):
                raise WorkspaceError(f"{where}: a tagged point must be [tag, label] in a copower")
            return sp.coerce((raw[0], _label(raw[1], sp.base, where)))
        if isinstance(raw, int) and not isinstance(raw, bool) and isinstance(sp, Numeric):
            return sp.coerce(raw)
        if not isinstance(raw, str):
            raise WorkspaceError(f"{where}: label {raw!r} must be a string")
        return parse_label(raw, sp)
    except WorkspaceError:
        raise
    except ValidationError as exc:
        raise WorkspaceError(f"{where}: {exc}") from None


def _mass_pairs(raw, sp: Space, where: str) -> dict:
    if isinstance(raw, dict):
        items = list(raw.items())
    elif isinstance(raw, list):
        items = []
        for entry in raw:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise WorkspaceError(f"{where}: mass entries must be [label, rational] pairs")
            items.append((entry[0], entry[1]))
    else:
        raise WorkspaceError(f"{where}: mass must be an object or a list of pairs")
    out: dict = {}
    for k, v in items:
        lab = _label(k, sp, where)
        if lab in out:
            raise WorkspaceError(f"{where}: label {k!r} given twice")
        out[lab] = _rational(v, f"{where}[{k!r}]")
    return out


def _json_label(x, sp: Space):
    if isinstance(sp, Copower) and not isinstance(sp.base, Dists):
        return [x[0], _json_label(x[1], sp.base)]
    return render_label(x, sp)


def _json_mass(d):
    sp = d.space
    if isinstance(sp, Copower) and not isinstance(sp.base, Dists):
        return [[_json_label(a, sp), _json_rational(m)] for a, m in d.items()]
    return {render_label(a, sp): _json_rational(m) for a, m in d.items()}


# -- the workspace -------------------------------------------------------------


@dataclass
class Workspace:
    spaces: dict = field(default_factory=dict)
    dists: dict = field(default_factory=dict)
    subdists: dict = field(default_factory=dict)
    channels: dict = field(default_factory=dict)
    tests: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)
    hyperdists: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)

    def get(self, name: str):
        for section in SECTIONS[1:]:
            table = getattr(self, section)
            if name in table:
                return table[name]
        if name in self.spaces:
            return self.spaces[name]
        raise WorkspaceError(f"no object named {name!r} in workspace")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        return all(getattr(self, s) == getattr(other, s) for s in SECTIONS)

    def add(self, name: str, value) -> None:
        """Put ``value`` in the section matching its type."""
        if isinstance(value, Predicate):
            self.predicates[name] = value
        elif isinstance(value, SubDist):
            self.subdists[name] = value
        elif isinstance(value, Dist):
            sp = value.space
            if isinstance(sp, Copower) and isinstance(sp.base, Dists) and isinstance(sp.base.base, Finite):
                self.hyperdists[name] = value
            else:
                self.dists[name] = value
        elif isinstance(value, Channel):
            if isinstance(value.target, Numeric):
                self.tests[name] = value
            else:
                self.channels[name] = value
        elif isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], Space):
            self.labels[name] = value
        elif isinstance(value, Finite):
            self.spaces[name] = value
        else:
            raise TypeError(f"cannot store {value!r} in a workspace")

    def objects(self) -> dict:
        out = {}
        for section in SECTIONS[1:]:
            for k, v in getattr(self, section).items():
                out[k] = v
        return out

    # -- serialisation

    def to_doc(self) -> dict:
        spaces: dict = {}
        for sp in self.spaces.values():
            finite_parts(sp, spaces)
        for d in (*self.dists.values(), *self.subdists.values(), *self.hyperdists.values()):
            finite_parts(d.space, spaces)
        for c in (*self.channels.values(), *self.tests.values()):
            finite_parts(c.source, spaces)
            finite_parts(c.target, spaces)
        for p in self.predicates.values():
            finite_parts(p.space, spaces)
        for sp, _ in self.labels.values():
            finite_parts(sp, spaces)
        doc: dict = {"spaces": {k: [str(x) for x in v.labels] for k, v in sorted(spaces.items())}}
        if self.dists:
            doc["dists"] = {
                k: {"space": d.space.expr(), "mass": _json_mass(d)} for k, d in self.dists.items()
            }
        if self.subdists:
            doc["subdists"] = {
                k: {"space": d.space.expr(), "mass": _json_mass(d)} for k, d in self.subdists.items()
            }
        if self.channels:
            doc["channels"] = {
                k: {
                    "source": c.source.expr(),
                    "target": c.target.expr(),
                    "rows": {render_label(a, c.source): _json_mass(r) for a, r in c.rows.items()},
                }
                for k, c in self.channels.items()
            }
        if self.tests:
            doc["tests"] = {
                k: {
                    "source": t.source.expr(),
                    "outcomes": t.target.n,
                    "rows": {render_label(a, t.source): _json_mass(r) for a, r in t.rows.items()},
                }
                for k, t in self.tests.items()
            }
        if self.predicates:
            doc["predicates"] = {
                k: {
                    "space": p.space.expr(),
                    "values": {render_label(a, p.space): _json_rational(v) for a, v in p.items()},
                }
                for k, p in self.predicates.items()
            }
        if self.hyperdists:
            doc["hyperdists"] = {
                k: {
                    "arity": h.space.n,
                    "base": h.space.base.base.expr(),
                    "mass": _json_mass(h),
                }
                for k, h in self.hyperdists.items()
            }
        if self.labels:
            doc["labels"] = {
                k: {"space": sp.expr(), "label": _json_label(x, sp)} for k, (sp, x) in self.labels.items()
            }
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_doc(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_doc(cls, doc) -> "Workspace":
        if not isinstance(doc, dict):
            raise WorkspaceError("workspace must be a JSON object")
        unknown = set(doc) - set(SECTIONS)
        if unknown:
            raise WorkspaceError(f"unknown workspace sections: {', '.join(sorted(unknown))}")
        ws = cls()
        seen: set = set()

        def entries(section):
            table = doc.get(section, {})
            if not isinstance(table, dict):
                raise WorkspaceError(f"{section} must be an object")
            for name, body in table.items():
                if name in seen:
                    raise WorkspaceError(f"{section}.{name}: name already used")
                seen.add(name)
                yield name, body, f"{section}.{name}"

        for name, labels, where in entries("spaces"):
            if _NAME_RE.fullmatch(name) is None or name in RESERVED_NAMES:
                raise WorkspaceError(f"{where}: invalid space name")
            if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
                raise WorkspaceError(f"{where}: labels must be a list of strings")
            try:
                sp = Finite(name, tuple(labels))
                check_renderable(sp)
            except ValidationError as exc:
                raise WorkspaceError(f"{where}: {exc}") from None
            ws.spaces[name] = sp

        def space_of(body, key, where):
            if not isinstance(body, dict) or key not in body:
                raise WorkspaceError(f"{where}: missing {key!r}")
            raw = body[key]
            if isinstance(raw, int) and not isinstance(raw, bool):
                raw = str(raw)
            if not isinstance(raw, str):
                raise WorkspaceError(f"{where}: {key} must be a space expression")
            try:
                return parse_space(raw, ws.spaces)
            except WorkspaceError as exc:
                raise WorkspaceError(f"{where}: {exc}") from None

        def build(kind, sp, mass, where):
            try:
                return kind(sp, mass)
            except ValidationError as exc:
                raise WorkspaceError(f"{where}: {exc}") from None

        for section, kind in (("dists", Dist), ("subdists", SubDist)):
            for name, body, where in entries(section):
                sp = space_of(body, "space", where)
                mass = _mass_pairs(body.get("mass"), sp, where)
                getattr(ws, section)[name] = build(kind, sp, mass, where)

        for name, body, where in entries("hyperdists"):
            if not isinstance(body, dict):
                raise WorkspaceError(f"{where}: expected an object")
            n = body.get("arity")
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise WorkspaceError(f"{where}: arity must be a natural number")
            base = space_of(body, "base", where)
            sp = Copower(n, Dists(base))
            mass = _mass_pairs(body.get("mass"), sp, where)
            ws.hyperdists[name] = build(Dist, sp, mass, where)

        def rows_of(body, src, tgt, where):
            raw = body.get("rows")
            if not isinstance(raw, dict):
                raise WorkspaceError(f"{where}: rows must be an object")
            rows = {}
            for k, row in raw.items():
                lab = _label(k, src, where)
                if lab in rows:
                    raise WorkspaceError(f"{where}: row {k!r} given twice")
                rows[lab] = build(Dist, tgt, _mass_pairs(row, tgt, f"{where}.rows[{k!r}]"), f"{where}.rows[{k!r}]")
            try:
                return Channel(src, tgt, rows)
            except ValidationError as exc:
                raise WorkspaceError(f"{where}: {exc}") from None

        for name, body, where in entries("channels"):
            src = space_of(body, "source", where)
            tgt = space_of(body, "target", where)
            if not src.is_finite:
                raise WorkspaceError(f"{where}: channel source must be finite")
            ws.channels[name] = rows_of(body, src, tgt, where)

        for name, body, where in entries("tests"):
            src = space_of(body, "source", where)
            n = body.get("outcomes") if isinstance(body, dict) else None
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise WorkspaceError(f"{where}: outcomes must be a positive integer")
            ws.tests[name] = rows_of(body, src, Numeric(n), where)

        for name, body, where in entries("predicates"):
            sp = space_of(body, "space", where)
            raw = body.get("values")
            if not isinstance(raw, dict):
                raise WorkspaceError(f"{where}: values must be an object")
            vals = {}
            for k, v in raw.items():
                vals[_label(k, sp, where)] = _rational(v, f"{where}[{k!r}]")
            ws.predicates[name] = build(Predicate, sp, vals, where)

        for name, body, where in entries("labels"):
            sp = space_of(body, "space", where)
            if "label" not in body:
                raise WorkspaceError(f"{where}: missing 'label'")
            ws.labels[name] = (sp, _label(body["label"], sp, where))
        return ws

    @classmethod
    def loads(cls, text: str) -> "Workspace":
        try:
            doc = json.loads(text, parse_float=_no_float, parse_constant=_no_float)
        except json.JSONDecodeError as exc:
            raise WorkspaceError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_doc(doc)


def _no_float(text):
    raise WorkspaceError(f"floating-point literal {text} not allowed; write rationals as \"p/q\"")


def load(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return Workspace.loads(fh.read())


def dump_objects(objects: dict) -> str:
    ws = Workspace()
    for k, v in objects.items():
        ws.add(k, v)
    return ws.dumps()


def value_to_json(value):
    """Structured rendering of a single result value for ``--format json``."""
    if isinstance(value, (Dist, SubDist)):
        return {"space": value.space.expr(), "mass": _json_mass(value)}
    if isinstance(value, Channel):
        return {
            "source": value.source.expr(),
            "target": value.target.expr(),
            "rows": {render_label(a, value.source): _json_mass(r) for a, r in value.rows.items()},
        }
    if isinstance(value, Predicate):
        return {
            "space": value.space.expr(),
            "values": {render_label(a, value.space): _json_rational(v) for a, v in value.items()},
        }
    if isinstance(value, Fraction):
        return _json_rational(value)
    raise TypeError(f"no JSON rendering for {value!r}")
