"""Worked examples replayed as golden checks.

Expected values are written as ket strings and parsed, so a fixture
compares two independently obtained objects: what the library computes
and what the text says.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .hypercond import denote_channel, hyper_condition, hyper_condition_direct, recover_state, recover_test, unfold
from .kernel import (
    Channel,
    Copower,
    Dist,
    Dists,
    Injected,
    Numeric,
    SubDist,
    UnitInterval,
    Sum,
    dirac,
    graph,
    kleisli_apply,
    maybe,
    parse_ket,
    push_forward,
    render_ket,
    render_prob,
    space,
)
from .kernel.spaces import ONE
from .laws import LAWS, DEFAULT_OPS, remark_instance
from .normalise import hyper_normalise, nrm
from .predicates import Predicate, complement, condition, indicator, test_components, test_from_predicate, validity, wp
from .refinement import check_witness, h_from_witness, hyper_refines, test_refines, witness_from_h


@dataclass(frozen=True)
class Check:
    label: str
    computed: object
    expected: object

    @property
    def ok(self) -> bool:
        return self.computed == self.expected


@dataclass(frozen=True)
class Fixture:
    name: str
    title: str
    build: Callable[[], list]

    def run(self) -> list:
        return self.build()


def show(v) -> str:
    if isinstance(v, (Dist, SubDist)):
        return render_ket(v)
    if isinstance(v, Fraction):
        return render_prob(v)
    if isinstance(v, Channel):
        return "; ".join(f"{a} -> {render_ket(v(a))}" for a in v.source.labels)
    if isinstance(v, tuple):
        return ", ".join(show(x) for x in v)
    return str(v)


def _q(text: str) -> Fraction:
    return Fraction(text)


def _channel(src, tgt, rows: dict) -> Channel:
    return Channel(src, tgt, {a: parse_ket(k, tgt) for a, k in rows.items()})


# -- fixtures -------------------------------------------------------------------


def _colour():
    rgb = space("RGB", ["R", "G", "B"])
    c = SubDist(rgb, {"R": "1/8", "G": "1/4", "B": "1/2"})
    n = nrm(c)
    expected = parse_ket("1/7|R> + 2/7|G> + 4/7|B>", rgb)
    return [
        Check("nrm(C)", n, expected),
        Check("nrm(C)(R)", n("R"), _q("1/7")),
        Check("nrm(C)(G)", n("G"), _q("2/7")),
        Check("nrm(C)(B)", n("B"), _q("4/7")),
    ]


def _hypernorm():
    A = space("A", ["a", "b", "c", "d"])
    sp = Copower(3, A)
    w = parse_ket("1/8|k0(a)> + 1/4|k0(b)> + 1/2|k1(c)> + 1/8|k1(d)>", sp)
    out = hyper_normalise(w)
    expected = parse_ket("3/8|k0(1/3|a> + 2/3|b>)> + 5/8|k1(4/5|c> + 1/5|d>)>", Copower(3, Dists(A)))
    return [Check("N(omega)", out, expected), Check("arity", out.arity, 3)]


def _table_data():
    A = space("A", ["a", "b", "c"])
    w = parse_ket("1/4|a> + 1/3|b> + 5/12|c>", A)
    p = Predicate(A, {"a": "1/2", "b": "1/4", "c": 1})
    return A, w, p


def _predicate_table():
    A, w, p = _table_data()
    one_e = indicator({"a", "c"}, A)
    return [
        Check("omega |= p", validity(w, p), _q("5/8")),
        Check("omega |= p^perp", validity(w, complement(p)), _q("3/8")),
        Check("P(E) = omega |= 1_E", validity(w, one_e), _q("2/3")),
        Check("omega|_p", condition(w, p), parse_ket("1/5|a> + 2/15|b> + 2/3|c>", A)),
        Check("omega|_p^perp", condition(w, complement(p)), parse_ket("1/3|a> + 2/3|b>", A)),
        Check("omega|_1_E", condition(w, one_e), parse_ket("3/8|a> + 5/8|c>", A)),
    ]


def _hypercond():
    A, w, p = _table_data()
    t = test_from_predicate(p)
    joint = kleisli_apply(graph(t), w)
    phi = hyper_condition(w, t)
    expected = parse_ket("5/8|k0(1/5|a> + 2/15|b> + 2/3|c>)> + 3/8|k1(1/3|a> + 2/3|b>)>", Copower(2, Dists(A)))
    return [
        Check(
            "gr(t)_*(omega)",
            joint,
            parse_ket("1/8|k0(a)> + 1/12|k0(b)> + 5/12|k0(c)> + 1/8|k1(a)> + 1/4|k1(b)>", Copower(2, A)),
        ),
        Check("omega || t", phi, expected),
        Check("direct route", hyper_condition_direct(w, test_components(t)), expected),
        Check(
            "denotation",
            denote_channel(t, w),
            parse_ket("5/8|1/5|a> + 2/15|b> + 2/3|c>> + 3/8|1/3|a> + 2/3|b>>", Dists(A)),
        ),
    ]


def _coin():
    HT = space("HT", ["H", "T"])
    phi = parse_ket("1/2|k0(2/3|H> + 1/3|T>)> + 1/2|k1(1/3|H> + 2/3|T>)>", Copower(2, Dists(HT)))
    psi = parse_ket(
        "1/3|k0(2/3|H> + 1/3|T>)> + 1/3|k1(1/2|H> + 1/2|T>)> + 1/3|k2(1/3|H> + 2/3|T>)>",
        Copower(3, Dists(HT)),
    )
    w = parse_ket("1/2|H> + 1/2|T>", HT)
    s = _channel(HT, Numeric(2), {"H": "2/3|0> + 1/3|1>", "T": "1/3|0> + 2/3|1>"})
    t = _channel(HT, Numeric(3), {"H": "4/9|0> + 1/3|1> + 2/9|2>", "T": "2/9|0> + 1/3|1> + 4/9|2>"})
    return HT, phi, psi, w, s, t


def _example1():
    HT, phi, psi, w, s, t = _coin()
    return [
        Check("(pi2)_*(Phi)", recover_state(phi), w),
        Check(
            "(st2)_*(Phi)",
            unfold(phi),
            parse_ket("1/3|k0(H)> + 1/6|k0(T)> + 1/6|k1(H)> + 1/3|k1(T)>", Copower(2, HT)),
        ),
        Check("test of Phi", recover_test(phi), s),
        Check("omega || s", hyper_condition(w, s), phi),
        Check("(pi2)_*(Psi)", recover_state(psi), w),
        Check("test of Psi", recover_test(psi), t),
        Check("omega || t", hyper_condition(w, t), psi),
    ]


def _medical():
    D = space("Health", ["d", "~d"])
    T = space("Result", ["t", "~t"])
    w = parse_ket("1/100|d> + 99/100|~d>", D)
    sens = _channel(D, T, {"d": "9/10|t> + 1/10|~t>", "~d": "1/20|t> + 19/20|~t>"})
    positive = Predicate(T, {"t": 1, "~t": 0})
    pulled = wp(sens, positive)
    test = test_from_predicate(pulled)
    phi = hyper_condition(w, test)
    hyper_space = Copower(2, Dists(D))
    drop_second = Sum(Dists(D), ONE)
    dropped = push_forward(
        lambda x: Injected(1, x[1]) if x[0] == 0 else Injected(2, 0), phi, drop_second
    )
    flat_space = maybe(D)

    def merge(y):
        if y.side == 1:
            return push_forward(lambda a: Injected(1, a), y.value, flat_space)
        return dirac(Injected(2, 0), flat_space)

    flat = kleisli_apply(Channel.from_function(drop_second, flat_space, merge), dropped)
    return [
        Check("s*(T?)", pulled, Predicate(D, {"d": "9/10", "~d": "1/20"})),
        Check("omega |= s*(T?)", validity(w, pulled), _q("117/2000")),
        Check(
            "gr(s*(T!))_*(omega)",
            kleisli_apply(graph(test), w),
            parse_ket("9/1000|k0(d)> + 99/2000|k0(~d)> + 1/1000|k1(d)> + 1881/2000|k1(~d)>", Copower(2, D)),
        ),
        Check(
            "omega || s*(T!)",
            phi,
            parse_ket("117/2000|k0(18/117|d> + 99/117|~d>)> + 1883/2000|k1(2/1883|d> + 1881/1883|~d>)>", hyper_space),
        ),
        Check("second block dropped", dropped, parse_ket("117/2000|k1(18/117|d> + 99/117|~d>)> + 1883/2000|k2(0)>", drop_second)),
        Check("flattened", flat, parse_ket("9/1000|k1(d)> + 99/2000|k1(~d)> + 1883/2000|k2(0)>", flat_space)),
    ]


def _refinement():
    HT, phi, psi, w, s, t = _coin()
    omega_space = Copower(3, Dists(Copower(2, Dists(HT))))
    big = parse_ket(
        "1/3|k0(1|k0(2/3|H> + 1/3|T>)>)>"
        " + 1/3|k1(1/2|k0(2/3|H> + 1/3|T>)> + 1/2|k1(1/3|H> + 2/3|T>)>)>"
        " + 1/3|k2(1|k1(1/3|H> + 2/3|T>)>)>",
        omega_space,
    )
    h_expected = _channel(Numeric(2), Numeric(3), {0: "2/3|0> + 1/3|1>", 1: "1/3|1> + 2/3|2>"})
    h = test_refines(s, t)
    decided = hyper_refines(phi, psi)
    return [
        Check("check_witness(Phi, Psi, Omega)", check_witness(phi, psi, big), True),
        Check("h from Omega", h_from_witness(big, w, s), h_expected),
        Check("h from s and t", h, h_expected),
        Check("witness from h", witness_from_h(w, s, h).omega, big),
        Check("Phi below Psi decided", decided is not None and check_witness(phi, psi, decided.omega), True),
        Check("Psi below Phi refuted", hyper_refines(psi, phi), None),
    ]


def _remark():
    w1, w2, lam = remark_instance()
    lhs, rhs = LAWS["non_affine.mix"]({"omega1": w1, "omega2": w2, "weight": (UnitInterval(), lam)}, DEFAULT_OPS)
    sp = Copower(2, Dists(w1.space.base))
    return [
        Check("1/4 N(k0 a) + 3/4 N(k0 b)", lhs, parse_ket("1/4|k0(1|a>)> + 3/4|k0(1|b>)>", sp)),
        Check("N(1/4 k0 a + 3/4 k0 b)", rhs, parse_ket("1|k0(1/4|a> + 3/4|b>)>", sp)),
        Check("sides differ", lhs != rhs, True),
    ]


FIXTURES = {
    f.name: f
    for f in (
        Fixture("colour", "normalising an RGB subdistribution", _colour),
        Fixture("hypernorm", "hyper normalisation over 3·{a,b,c,d}", _hypernorm),
        Fixture("predicate-table", "validity and conditioning table", _predicate_table),
        Fixture("hypercond", "hyper conditional of a 2-test", _hypercond),
        Fixture("example1", "recovering state and test from a hyper distribution", _example1),
        Fixture("medical", "disease test with 1% prior", _medical),
        Fixture("refinement", "refinement witness and post-processing", _refinement),
        Fixture("remark-nonaffine", "hyper normalisation is not affine", _remark),
    )
}
