"""Executable law checks over small generated instances.

Every law is a function of named objects (distributions, channels, labels)
returning the two sides of an equation. Checkers enumerate instances,
evaluate the laws and stop at the first violation, which is serialised as a
workspace document so that :func:`replay` can reproduce it.

In exhaustive mode every state with masses ``k/q`` for ``q ≤ max_denominator``
is visited. Channels are drawn from a pool: all deterministic channels of
the shape when there are at most :attr:`CheckConfig.max_deterministic`, plus
``pool_size`` seeded random stochastic channels.
"""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .hypercond import unfold
from .kernel import (
    Channel,
    Copower,
    Dist,
    Dists,
    Finite,
    Numeric,
    Space,
    Tagged,
    UnitInterval,
    channel_copower_left,
    channel_copower_right,
    codiagonal,
    convex_sum,
    dirac,
    flatten,
    graph,
    inject,
    kleisli_apply,
    kleisli_compose,
    marginal_first,
    push_forward,
    render_ket,
    strength_left,
    twist,
    unit_channel,
)
from .normalise import disintegrate, hyper_normalise, joint_from_conditional, sprinkle

# -- configuration and reports -----------------------------------------------


@dataclass(frozen=True)
class CheckConfig:
    max_space_size: int = 3
    max_arity: int = 3
    max_denominator: int = 4
    mode: str = "exhaustive"
    seed: int = 0
    trials: int = 50
    pool_size: int = 4
    max_deterministic: int = 27

    def __post_init__(self):
        for name in ("max_space_size", "max_arity", "max_denominator", "trials"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.mode not in ("exhaustive", "randomised"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_space_size > 26:
            raise ValueError("max_space_size above 26 is not supported")


@dataclass(frozen=True)
class CheckReport:
    law: str
    instances: int
    outcome: str
    counterexample: dict | None = None
    skipped: int = 0
    parts: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return self.outcome != "fail"

    def summary(self) -> str:
        extra = f", {self.skipped} skipped" if self.skipped else ""
        return f"{self.law}: {self.outcome} ({self.instances} instances{extra})"

    def to_json(self) -> dict:
        doc = {"law": self.law, "instances": self.instances, "outcome": self.outcome}
        if self.skipped:
            doc["skipped"] = self.skipped
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample
        if self.parts:
            doc["parts"] = [p.to_json() for p in self.parts]
        return doc


@dataclass(frozen=True)
class Ops:
    """The operations under test; tests swap in broken versions to see failures."""

    lift: Callable = kleisli_apply
    normalise: Callable = hyper_normalise


DEFAULT_OPS = Ops()

# -- generators ----------------------------------------------------------------


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def all_dists(sp: Space, max_denominator: int) -> tuple:
    """Every distribution over ``sp`` whose masses are ``k/q`` with ``q ≤ max_denominator``."""
    labels = sp.labels
    seen: dict = {}
    for q in range(1, max_denominator + 1):
        for comp in _compositions(q, len(labels)):
            d = Dist._trusted(sp, {a: Fraction(c, q) for a, c in zip(labels, comp)})
            seen.setdefault(d, None)
    return tuple(seen)


def random_dist(sp: Space, rng: random.Random, max_denominator: int) -> Dist:
    labels = sp.labels
    q = rng.randint(1, max_denominator)
    bars = sorted(rng.sample(range(q + len(labels) - 1), len(labels) - 1))
    counts, prev = [], -1
    for b in bars + [q + len(labels) - 1]:
        counts.append(b - prev - 1)
        prev = b
    return Dist._trusted(sp, {a: Fraction(c, q) for a, c in zip(labels, counts)})


def random_channel(src: Space, tgt: Space, rng: random.Random, max_denominator: int) -> Channel:
    return Channel(src, tgt, {a: random_dist(tgt, rng, max_denominator) for a in src.labels})


def sample_space(prefix: str, size: int) -> Finite:
    """Spaces used by the checkers: ``A3 = {a,b,c}``, ``B2 = {u0,u1}``, ``C1 = {v0}``."""
    if prefix == "A":
        labels = tuple(string.ascii_lowercase[:size])
    else:
        letter = {"B": "u", "C": "v"}[prefix]
        labels = tuple(f"{letter}{i}" for i in range(size))
    return Finite(f"{prefix}{size}", labels)


class _Gen:
    def __init__(self, cfg: CheckConfig):
        self.cfg = cfg

    def rng(self, *tag) -> random.Random:
        return random.Random("/".join(str(t) for t in (self.cfg.seed, *tag)))

    def spaces(self, prefix: str) -> list:
        return [sample_space(prefix, k) for k in range(1, self.cfg.max_space_size + 1)]

    def arities(self, start: int = 1) -> range:
        return range(start, self.cfg.max_arity + 1)

    def states(self, sp: Space, *tag) -> Iterable[Dist]:
        if self.cfg.mode == "exhaustive":
            return all_dists(sp, self.cfg.max_denominator)
        rng = self.rng("states", sp.expr(), *tag)
        return [random_dist(sp, rng, self.cfg.max_denominator) for _ in range(self.cfg.trials)]

    def channels(self, src: Space, tgt: Space, *tag, deterministic: bool = True) -> list:
        pool = []
        if deterministic and self.cfg.mode == "exhaustive":
            if len(tgt) ** len(src) <= self.cfg.max_deterministic:
                for images in itertools.product(tgt.labels, repeat=len(src)):
                    pool.append(
                        Channel(src, tgt, {a: dirac(b, tgt) for a, b in zip(src.labels, images)})
                    )
        rng = self.rng("channels", src.expr(), tgt.expr(), *tag)
        pool.extend(
            random_channel(src, tgt, rng, self.cfg.max_denominator) for _ in range(self.cfg.pool_size)
        )
        return pool


# -- the laws -------------------------------------------------------------------

LAWS: dict[str, Callable] = {}


def law(name: str):
    def register(fn):
        LAWS[name] = fn
        return fn

    return register


def _lab(x):
    return x[1] if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], Space) else x


def _point_of(ch: Channel) -> Callable:
    # the function underlying a deterministic channel
    def f(a):
        (b,) = ch(a).support
        return b

    return f


def _tags_map(fn, d: Dist, target: Space) -> Dist:
    # D(n·fn): apply fn under the tag
    return push_forward(lambda x: Tagged(x[0], fn(x[1])), d, target)


def _as_channel(fn, src: Space, tgt: Space) -> Channel:
    return Channel.from_function(src, tgt, fn)


@law("kleisli.unit_left")
def _(o, ops):
    g, a = o["g"], _lab(o["a"])
    return ops.lift(g, dirac(a, g.source)), g(a)


@law("kleisli.unit_right")
def _(o, ops):
    w = o["omega"]
    return ops.lift(unit_channel(w.space), w), w


@law("kleisli.pure")
def _(o, ops):
    f, w = o["f"], o["omega"]
    return ops.lift(f, w), push_forward(_point_of(f), w, f.target)


@law("kleisli.map_after_lift")
def _(o, ops):
    g, h, w = o["g"], o["h"], o["omega"]
    hf = _point_of(h)
    lhs = push_forward(hf, ops.lift(g, w), h.target)
    rhs = ops.lift(_as_channel(lambda a: push_forward(hf, g(a), h.target), g.source, h.target), w)
    return lhs, rhs


@law("kleisli.compose")
def _(o, ops):
    f, g, w = o["f"], o["g"], o["omega"]
    return ops.lift(g, ops.lift(f, w)), ops.lift(kleisli_compose(g, f), w)


@law("kleisli.assoc")
def _(o, ops):
    f, g, h = o["f"], o["g"], o["h"]
    return kleisli_compose(kleisli_compose(h, g), f), kleisli_compose(h, kleisli_compose(g, f))


@law("kleisli.unital")
def _(o, ops):
    f = o["f"]
    left = kleisli_compose(unit_channel(f.target), f)
    right = kleisli_compose(f, unit_channel(f.source))
    return (left, right), (f, f)


@law("norm.trivial_inject")
def _(o, ops):
    phi = o["phi"]
    n, i = o["i"][0].n, o["i"][1]
    return ops.normalise(inject(i, n, phi)), dirac(Tagged(i, phi), Copower(n, Dists(phi.space)))


@law("norm.trivial_strength")
def _(o, ops):
    r = o["r"]
    sp, a = o["a"]
    return ops.normalise(strength_left(r, a, sp)), strength_left(r, dirac(a, sp), Dists(sp))


@law("norm.tags_kept")
def _(o, ops):
    w = o["omega"]
    return marginal_first(ops.normalise(w)), marginal_first(w)


@law("norm.output_flattens")
def _(o, ops):
    w = o["omega"]
    return flatten(codiagonal(ops.normalise(w))), codiagonal(w)


@law("norm.idempotent")
def _(o, ops):
    w = o["omega"]
    nw = ops.normalise(w)
    base = w.space.base
    up = Copower(w.space.n, Dists(Dists(base)))
    return ops.normalise(nw), _tags_map(lambda phi: dirac(phi, Dists(base)), nw, up)


@law("norm.idempotent_flat")
def _(o, ops):
    w = o["omega"]
    nw = ops.normalise(w)
    return _tags_map(flatten, ops.normalise(nw), nw.space), nw


@law("norm.left_inverse")
def _(o, ops):
    w = o["omega"]
    return unfold(ops.normalise(w)), w


@law("norm.natural")
def _(o, ops):
    w, g = o["omega"], o["g"]
    n = w.space.n
    lhs = ops.normalise(ops.lift(channel_copower_right(g, n), w))
    rhs = _tags_map(lambda phi: ops.lift(g, phi), ops.normalise(w), Copower(n, Dists(g.target)))
    return lhs, rhs


def _phis(o) -> list:
    return [o[k] for k in sorted((k for k in o if k.startswith("phi")), key=lambda k: int(k[3:]))]


def _rectangle_input(r: Dist, phis: list) -> Dist:
    n = r.space.n
    return sprinkle(r, [inject(i, n, phi) for i, phi in enumerate(phis)])


def _rectangle_output(r: Dist, phis: list) -> Dist:
    n = r.space.n
    sp = Copower(n, Dists(phis[0].space))
    return sprinkle(r, [dirac(Tagged(i, phi), sp) for i, phi in enumerate(phis)])


@law("characterisation.rectangle")
def _(o, ops):
    r, phis = o["r"], _phis(o)
    return ops.normalise(_rectangle_input(r, phis)), _rectangle_output(r, phis)


@law("n_naturality")
def _(o, ops):
    w, h = o["omega"], o["h"]
    base = w.space.base
    m = h.target.n
    inner = ops.normalise(ops.lift(channel_copower_left(h, Dists(base)), ops.normalise(w)))
    lhs = _tags_map(flatten, inner, Copower(m, Dists(base)))
    rhs = ops.normalise(ops.lift(channel_copower_left(h, base), w))
    return lhs, rhs


@law("hyper_point")
def _(o, ops):
    w = o["omega"]
    split = disintegrate(twist(w))
    cond, tags = split.conditional, split.marginal
    point = Channel(cond.source, Dists(cond.target), {i: dirac(cond(i), Dists(cond.target)) for i in cond.source.labels})
    return twist(ops.normalise(w)), ops.lift(graph(point), tags)


# Kleisli-comonad data: D̄ and n∗(−) on Kleisli maps given as Python callables.


def _kcomp(g, f):
    return lambda x: kleisli_apply(g, f(x))


def _dbar(f):
    def mapped(omega):
        out = kleisli_apply(f, omega)
        return dirac(out, Dists(out.space))

    return mapped


def _nstar(f, n: int):
    def mapped(x):
        row = f(x[1])
        return Dist._trusted(Copower(n, row.space), {Tagged(x[0], y): m for y, m in row.items()})

    return mapped


def _eps_dbar(phi):
    return phi


def _delta_dbar(phi):
    once = dirac(phi, Dists(phi.space))
    return dirac(once, Dists(once.space))


def _delta_nstar(n: int, inner: Space):
    sp = Copower(n, Copower(n, inner))
    return lambda x: dirac(Tagged(x[0], Tagged(x[0], x[1])), sp)


@law("distributive.natural")
def _(o, ops):
    w, f = o["omega"], o["f"]
    n = w.space.n
    N = ops.normalise
    lhs = _kcomp(_nstar(_dbar(f), n), N)(w)
    rhs = _kcomp(N, _dbar(_nstar(f, n)))(w)
    return lhs, rhs


@law("distributive.comult_left")
def _(o, ops):
    w = o["omega"]
    n = w.space.n
    N = ops.normalise
    lhs = _kcomp(N, _kcomp(_dbar(N), _delta_dbar))(w)
    rhs = _kcomp(_nstar(_delta_dbar, n), N)(w)
    return lhs, rhs


@law("distributive.comult_right")
def _(o, ops):
    w = o["omega"]
    n, base = w.space.n, w.space.base
    N = ops.normalise
    lhs = _kcomp(_nstar(N, n), _kcomp(N, _dbar(_delta_nstar(n, base))))(w)
    rhs = _kcomp(_delta_nstar(n, Dists(base)), N)(w)
    return lhs, rhs


@law("distributive.counit")
def _(o, ops):
    w = o["omega"]
    return _kcomp(_nstar(_eps_dbar, w.space.n), ops.normalise)(w), _eps_dbar(w)


def _eps_nstar_at(base: Space):
    return lambda x: dirac(x[1], base)


@law("distributive.extended_counit")
def _(o, ops):
    w = o["omega"]
    base = w.space.base
    lhs = _kcomp(_eps_dbar, _kcomp(_eps_nstar_at(Dists(base)), ops.normalise))(w)
    rhs = _kcomp(_eps_dbar, _dbar(_eps_nstar_at(base)))(w)
    return lhs, rhs


@law("distributive.counit_square")
def _(o, ops):
    w = o["omega"]
    base = w.space.base
    lhs = _kcomp(_eps_nstar_at(Dists(base)), ops.normalise)(w)
    rhs = _dbar(_eps_nstar_at(base))(w)
    return lhs, rhs


@law("non_affine.mix")
def _(o, ops):
    w1, w2 = o["omega1"], o["omega2"]
    lam = _lab(o["weight"])
    N = ops.normalise
    lhs = convex_sum([(lam, N(w1)), (1 - lam, N(w2))])
    rhs = N(convex_sum([(lam, w1), (1 - lam, w2)]))
    return lhs, rhs


@law("non_affine.single_tag_is_unit")
def _(o, ops):
    w = o["omega"]
    flat = codiagonal(w)
    return ops.normalise(w), dirac(Tagged(0, flat), Copower(1, Dists(flat.space)))


@law("disintegration.joint_roundtrip")
def _(o, ops):
    j = o["joint"]
    split = disintegrate(j)
    return joint_from_conditional(split.conditional, split.marginal), j


@law("disintegration.conditional_roundtrip")
def _(o, ops):
    f, w = o["f"], o["omega"]
    split = disintegrate(joint_from_conditional(f, w))
    return (split.conditional, split.marginal), (f, w)


# -- running -------------------------------------------------------------------


def _render(v) -> str:
    if isinstance(v, Dist):
        return render_ket(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(_render(x) for x in v) + ")"
    return repr(v)


def counterexample(name: str, objs: dict, lhs, rhs) -> dict:
    from .workspace import Workspace

    ws = Workspace()
    for k, v in objs.items():
        ws.add(k, v)
    return {"law": name, "workspace": ws.to_doc(), "lhs": _render(lhs), "rhs": _render(rhs)}


def replay(cex: dict, ops: Ops = DEFAULT_OPS) -> bool:
    """Re-evaluate a stored counterexample; ``True`` means the law holds on it."""
    from .workspace import Workspace

    ws = Workspace.from_doc(cex["workspace"])
    lhs, rhs = LAWS[cex["law"]](ws.objects(), ops)
    return lhs == rhs


class _Stop(Exception):
    pass


class _Tally:
    def __init__(self, name: str, ops: Ops, expected_fail: frozenset = frozenset()):
        self.name = name
        self.ops = ops
        self.count = 0
        self.skipped = 0
        self.failure = None
        self.expected_fail = expected_fail
        self.expected: dict = {}
        self.per_law: dict = {}

    def run(self, name: str, objs: dict) -> bool:
        self.count += 1
        self.per_law[name] = self.per_law.get(name, 0) + 1
        if name in self.expected_fail and name in self.expected:
            return False
        lhs, rhs = LAWS[name](objs, self.ops)
        if lhs == rhs:
            return True
        if name in self.expected_fail:
            self.expected[name] = counterexample(name, objs, lhs, rhs)
            return False
        self.failure = counterexample(name, objs, lhs, rhs)
        raise _Stop

    def report(self) -> CheckReport:
        parts = tuple(
            CheckReport(
                name,
                cnt,
                "fail"
                if self.failure is not None and self.failure["law"] == name
                else ("expected-fail" if name in self.expected else "pass"),
                self.failure if self.failure is not None and self.failure["law"] == name else self.expected.get(name),
            )
            for name, cnt in self.per_law.items()
            if name != self.name
        )
        if self.failure is not None:
            return CheckReport(self.name, self.count, "fail", self.failure, self.skipped, parts)
        if self.expected:
            first = next(iter(self.expected.values()))
            return CheckReport(self.name, self.count, "expected-fail", first, self.skipped, parts)
        return CheckReport(self.name, self.count, "pass", None, self.skipped, parts)


def _run(tally: _Tally, body: Callable[[], None]) -> CheckReport:
    try:
        body()
    except _Stop:
        pass
    return tally.report()


# -- checkers --------------------------------------------------------------------


def check_kleisli_laws(cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS) -> CheckReport:
    """Unit, lifting and composition laws of the distribution monad."""
    gen = _Gen(cfg)
    tally = _Tally("kleisli", ops)

    def body():
        As, Bs, Cs = gen.spaces("A"), gen.spaces("B"), gen.spaces("C")
        for A in As:
            for w in gen.states(A):
                tally.run("kleisli.unit_right", {"omega": w})
        for A, B in itertools.product(As, Bs):
            pool = gen.channels(A, B, "g")
            dets = [g for g in pool if all(len(g(a)) == 1 for a in A.labels)]
            for g in pool:
                for a in A.labels:
                    tally.run("kleisli.unit_left", {"g": g, "a": (A, a)})
                tally.run("kleisli.unital", {"f": g})
            for f in dets:
                for w in gen.states(A):
                    tally.run("kleisli.pure", {"f": f, "omega": w})
        for A, B, C in itertools.product(As, Bs, Cs):
            fs = gen.channels(A, B, "f")
            gs = gen.channels(B, C, "g")
            hs = [h for h in gen.channels(B, C, "h") if all(len(h(b)) == 1 for b in B.labels)]
            states = gen.states(A)
            for w in states:
                for f in fs:
                    for h in hs:
                        tally.run("kleisli.map_after_lift", {"g": f, "h": h, "omega": w})
                    for g in gs:
                        tally.run("kleisli.compose", {"f": f, "g": g, "omega": w})
            rs = gen.channels(A, B, "assoc", deterministic=False)
            ss = gen.channels(B, C, "assoc", deterministic=False)
            ts = gen.channels(C, A, "assoc", deterministic=False)
            for f, g, h in itertools.product(rs, ss, ts):
                tally.run("kleisli.assoc", {"f": f, "g": g, "h": h})

    return _run(tally, body)


def check_norm_laws(
    cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS, instances: Iterable[Dist] | None = None
) -> CheckReport:
    """Trivial inputs, destroyed structure, idempotence, left inverse and naturality of ``N``.

    With ``instances`` only those tagged states (plus the inputs they induce)
    are checked instead of the generated ones.
    """
    gen = _Gen(cfg)
    tally = _Tally("norm", ops)

    def per_state(w: Dist, pool_for: Callable):
        for name in (
            "norm.tags_kept",
            "norm.output_flattens",
            "norm.idempotent",
            "norm.idempotent_flat",
            "norm.left_inverse",
        ):
            tally.run(name, {"omega": w})
        for g in pool_for(w.space.base):
            tally.run("norm.natural", {"omega": w, "g": g})

    def trivial(n: int, A: Space, phis: Iterable[Dist], rs: Iterable[Dist]):
        for phi in phis:
            for i in range(n):
                tally.run("norm.trivial_inject", {"phi": phi, "i": (Numeric(n), i)})
        for r in rs:
            for a in A.labels:
                tally.run("norm.trivial_strength", {"r": r, "a": (A, a)})

    def body():
        if instances is not None:
            for w in instances:
                n, A = w.space.n, w.space.base
                B = sample_space("B", 2)
                trivial(n, A, [codiagonal(w)], [marginal_first(w)])
                per_state(w, lambda base: gen.channels(base, B, "natural"))
            return
        Bs = gen.spaces("B")
        for n in gen.arities(start=0):
            for A in gen.spaces("A"):
                if n:
                    trivial(n, A, gen.states(A), gen.states(Numeric(n)))
                sp = Copower(n, A)
                if n == 0:
                    continue  # D(0·A) is empty: nothing to check
                pools = {B: gen.channels(A, B, "natural") for B in Bs}
                for w in gen.states(sp):
                    per_state(w, lambda base: [g for B in Bs for g in pools[B]])

    return _run(tally, body)


def check_characterisation(
    cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS, instances: Iterable[tuple] | None = None
) -> CheckReport:
    """Both paths of the characterising rectangle of ``N``, over all ``(r, φ₁..φ_n)``.

    Also tabulates the rectangle's required output per reachable input and
    checks that this table is a function and coincides with ``N``.
    """
    gen = _Gen(cfg)
    tally = _Tally("characterisation", ops)
    table: dict = {}

    def one(r: Dist, phis: tuple):
        objs = {"r": r}
        objs.update({f"phi{i}": phi for i, phi in enumerate(phis)})
        tally.run("characterisation.rectangle", objs)
        x = _rectangle_input(r, list(phis))
        y = _rectangle_output(r, list(phis))
        prev = table.setdefault(x, (y, objs))
        if prev[0] != y:
            tally.failure = counterexample("characterisation.rectangle", objs, prev[0], y)
            tally.failure["note"] = "two rectangle inputs agree but demand different outputs"
            raise _Stop

    def body():
        if instances is not None:
            for r, phis in instances:
                one(r, tuple(phis))
            return
        for n in gen.arities():
            for A in gen.spaces("A"):
                phis = gen.states(A, "phi")
                for r in gen.states(Numeric(n), "r"):
                    if cfg.mode == "exhaustive":
                        combos = itertools.product(phis, repeat=n)
                    else:
                        rng = gen.rng("phis", n, A.expr(), r)
                        combos = [tuple(rng.choice(phis) for _ in range(n)) for _ in range(4)]
                    for combo in combos:
                        one(r, combo)
        for x, (y, objs) in table.items():
            if ops.normalise(x) != y:
                tally.failure = counterexample("characterisation.rectangle", objs, ops.normalise(x), y)
                raise _Stop

    return _run(tally, body)


def check_n_naturality(
    cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS, instances: Iterable[tuple] | None = None
) -> CheckReport:
    """``N`` is natural in the arity: relabelling tags by ``h: n ⊸ m`` commutes with it."""
    gen = _Gen(cfg)
    tally = _Tally("n_naturality", ops)

    def body():
        if instances is not None:
            for w, h in instances:
                tally.run("n_naturality", {"omega": w, "h": h})
            return
        for n, m in itertools.product(gen.arities(), gen.arities()):
            hs = gen.channels(Numeric(n), Numeric(m), "h")
            for A in gen.spaces("A"):
                for w in gen.states(Copower(n, A)):
                    for h in hs:
                        tally.run("n_naturality", {"omega": w, "h": h})

    return _run(tally, body)


def check_hyper_point(
    cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS, instances: Iterable[Dist] | None = None
) -> CheckReport:
    """``N`` equals pointwise disintegration along the tags, when every tag occurs."""
    gen = _Gen(cfg)
    tally = _Tally("hyper_point", ops)

    def visit(w: Dist):
        if len(set(x[0] for x in w.support)) < w.space.n:
            tally.skipped += 1
            return
        tally.run("hyper_point", {"omega": w})

    def body():
        if instances is not None:
            for w in instances:
                visit(w)
            return
        for n in gen.arities():
            for A in gen.spaces("A"):
                for w in gen.states(Copower(n, A)):
                    visit(w)

    return _run(tally, body)


def check_distributive_law(cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS) -> CheckReport:
    """``N`` as a distributive law of ``n∗(−)`` over the comonad ``D̄`` on Kleisli maps.

    Naturality, both comultiplication squares, one counit law and the
    extended counit rectangle must hold. The remaining counit square fails
    for ``n ≥ 2``; the first failing state found is reported as an
    expected failure.
    """
    gen = _Gen(cfg)
    tally = _Tally("distributive", ops, expected_fail=frozenset({"distributive.counit_square"}))

    def body():
        Bs = gen.spaces("B")
        for n in gen.arities():
            for A in gen.spaces("A"):
                pool = [f for B in Bs for f in gen.channels(A, B, "dist")]
                for w in gen.states(Copower(n, A)):
                    for name in (
                        "distributive.comult_left",
                        "distributive.comult_right",
                        "distributive.counit",
                        "distributive.extended_counit",
                    ):
                        tally.run(name, {"omega": w})
                    for f in pool:
                        tally.run("distributive.natural", {"omega": w, "f": f})
                    if n == 1:
                        # with one tag the square must commute; a failure here is real
                        lhs, rhs = LAWS["distributive.counit_square"]({"omega": w}, ops)
                        tally.count += 1
                        tally.per_law["distributive.counit_square"] = tally.per_law.get("distributive.counit_square", 0) + 1
                        if lhs != rhs:
                            tally.failure = counterexample("distributive.counit_square", {"omega": w}, lhs, rhs)
                            raise _Stop
                    else:
                        tally.run("distributive.counit_square", {"omega": w})

    return _run(tally, body)


def check_disintegration(cfg: CheckConfig = CheckConfig(), ops: Ops = DEFAULT_OPS) -> CheckReport:
    """Disintegration and joint formation are mutually inverse on full-support instances.

    Joints over ``n·A`` whose ``A``-marginal has full support round-trip
    through their disintegration; every channel ``A ⊸ n`` with denominators
    bounded by ``max_denominator`` round-trips against every full-support
    state. Joints without full support are counted as skipped.
    """
    gen = _Gen(cfg)
    tally = _Tally("disintegration", ops)

    def full(w: Dist) -> bool:
        return len(w) == len(w.space)

    def body():
        for n in gen.arities():
            for A in gen.spaces("A"):
                for j in gen.states(Copower(n, A)):
                    if len(set(x[1] for x in j.support)) < len(A):
                        tally.skipped += 1
                        continue
                    tally.run("disintegration.joint_roundtrip", {"joint": j})
                if cfg.mode == "exhaustive":
                    rows = all_dists(Numeric(n), cfg.max_denominator)
                    fs = (
                        Channel(A, Numeric(n), dict(zip(A.labels, combo)))
                        for combo in itertools.product(rows, repeat=len(A))
                    )
                else:
                    fs = gen.channels(A, Numeric(n), "cond")
                states = [w for w in gen.states(A, "marginal") if full(w)]
                for f in fs:
                    for w in states:
                        tally.run("disintegration.conditional_roundtrip", {"f": f, "omega": w})

    return _run(tally, body)


def remark_instance() -> tuple:
    """The two states and weight showing that ``N`` does not preserve convex sums."""
    A = Finite("A", ("a", "b"))
    sp = Copower(2, A)
    return dirac(Tagged(0, "a"), sp), dirac(Tagged(0, "b"), sp), Fraction(1, 4)


def check_non_affine(cfg: CheckConfig = CheckConfig(2, 2, 3), ops: Ops = DEFAULT_OPS) -> CheckReport:
    """``N`` is not affine.

    Parts: the two-point counterexample (expected to fail); mixtures of
    states with the same normalised blocks, where ``N`` is affine (must
    pass); one-tag states, where ``N`` is the unit (must pass); and the
    counterexample moved into ``1·A`` (expected to fail, so even with one tag
    ``N`` is not affine).
    """
    gen = _Gen(cfg)
    parts = []

    w1, w2, lam = remark_instance()
    weight = (UnitInterval(), lam)
    for name, (a, b) in (
        ("non_affine.remark", (w1, w2)),
        (
            "non_affine.remark_one_tag",
            tuple(Dist._trusted(Copower(1, w.space.base), dict(w.items())) for w in (w1, w2)),
        ),
    ):
        objs = {"omega1": a, "omega2": b, "weight": weight}
        lhs, rhs = LAWS["non_affine.mix"](objs, ops)
        outcome = "expected-fail" if lhs != rhs else "fail"
        parts.append(CheckReport(name, 1, outcome, counterexample("non_affine.mix", objs, lhs, rhs)))

    tally = _Tally("non_affine.fixed_blocks", ops)

    def blocks():
        lams = sorted({Fraction(k, q) for q in range(2, cfg.max_denominator + 1) for k in range(1, q)})
        for n in gen.arities():
            for A in gen.spaces("A"):
                phis = gen.states(A)
                rs = gen.states(Numeric(n))
                for combo in itertools.islice(itertools.product(phis, repeat=n), 40):
                    for r1, r2 in itertools.islice(itertools.product(rs, rs), 40):
                        a = _rectangle_input(r1, list(combo))
                        b = _rectangle_input(r2, list(combo))
                        for lam_ in lams:
                            tally.run(
                                "non_affine.mix", {"omega1": a, "omega2": b, "weight": (UnitInterval(), lam_)}
                            )

    parts.append(_run(tally, blocks))

    one = _Tally("non_affine.single_tag_is_unit", ops)

    def single():
        for A in gen.spaces("A"):
            for w in gen.states(Copower(1, A)):
                one.run("non_affine.single_tag_is_unit", {"omega": w})

    parts.append(_run(one, single))

    failed = [p for p in parts if p.outcome == "fail"]
    total = sum(p.instances for p in parts)
    if failed:
        return CheckReport("non_affine", total, "fail", failed[0].counterexample, 0, tuple(parts))
    return CheckReport("non_affine", total, "expected-fail", parts[0].counterexample, 0, tuple(parts))


CHECKERS = {
    "kleisli": check_kleisli_laws,
    "norm": check_norm_laws,
    "characterisation": check_characterisation,
    "n_naturality": check_n_naturality,
    "hyper_point": check_hyper_point,
    "distributive": check_distributive_law,
    "disintegration": check_disintegration,
    "non_affine": check_non_affine,
}
