from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperdist import (
    Channel,
    Copower,
    Dist,
    Dists,
    Finite,
    Injected,
    Numeric,
    Product,
    SpaceMismatch,
    SubDist,
    Sum,
    Tagged,
    UnitInterval,
    UnknownLabel,
    ValidationError,
    as_prob,
    codiagonal,
    convex_sum,
    dirac,
    fiber,
    flatten,
    graph,
    inject,
    kleisli_apply,
    kleisli_compose,
    marginal_first,
    maybe,
    parse_ket,
    parse_label,
    parse_rational,
    push_forward,
    render_ket,
    space,
    strength_left,
    strength_right,
    twist,
    unit_channel,
    weights,
)
from strategies import channels, dists, finite_spaces, subdists

A = space("A", ["a", "b", "c"])
B = space("B", ["x", "y"])


# -- values --------------------------------------------------------------------


def test_dist_rejects_wrong_total():
    with pytest.raises(ValidationError, match="distribution mass 9/10 ≠ 1"):
        Dist(A, {"a": "1/2", "b": "2/5"})


def test_subdist_rejects_excess():
    with pytest.raises(ValidationError, match="subdistribution mass 11/10 > 1"):
        SubDist(A, {"a": "1/2", "b": "3/5"})


def test_negative_mass_rejected():
    with pytest.raises(ValidationError):
        Dist(A, {"a": Fraction(-1, 2), "b": Fraction(3, 2)})


def test_floats_refused():
    with pytest.raises(TypeError):
        as_prob(0.5)
    with pytest.raises(TypeError):
        Dist(A, {"a": 0.5, "b": 0.5})


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        Dist(A, {"z": 1})


def test_zero_masses_dropped_and_canonical_order():
    d = Dist(A, {"c": "1/2", "b": 0, "a": "1/2"})
    assert d.support == ("a", "c")
    assert render_ket(d) == "1/2|a> + 1/2|c>"
    assert d("b") == 0


def test_equality_and_hash_ignore_construction_order():
    d1 = Dist(A, [("a", "1/3"), ("b", "2/3")])
    d2 = Dist(A, {"b": Fraction(2, 3), "a": Fraction(1, 3)})
    assert d1 == d2 and hash(d1) == hash(d2)
    assert d1 != SubDist(A, {"a": "1/3", "b": "2/3"})


def test_zero_subdist_renders_as_zero():
    assert render_ket(SubDist(A, {})) == "0"


def test_copower_arity_is_part_of_space():
    assert Copower(2, A) != Copower(3, A)
    assert inject(0, 2, dirac("a", A)) != inject(0, 3, dirac("a", A))


def test_channel_requires_every_row():
    with pytest.raises(ValidationError, match="channel rows missing for labels: b, c"):
        Channel(A, B, {"a": {"x": 1}})


def test_channel_row_space_checked():
    with pytest.raises(SpaceMismatch):
        Channel(B, A, {"x": dirac("x", B), "y": dirac("a", A)})


# -- monad structure ----------------------------------------------------------------


def test_flatten_and_push_forward():
    xi = Dist(Dists(A), {Dist(A, {"a": 1}): "1/2", Dist(A, {"b": "1/2", "c": "1/2"}): "1/2"})
    assert flatten(xi) == Dist(A, {"a": "1/2", "b": "1/4", "c": "1/4"})
    f = push_forward(lambda a: "x" if a == "a" else "y", flatten(xi), B)
    assert f == Dist(B, {"x": "1/2", "y": "1/2"})


def test_graph_of_test_is_tagged():
    t = Channel(A, Numeric(2), {"a": {0: 1}, "b": {1: 1}, "c": {0: "1/2", 1: "1/2"}})
    g = graph(t)
    assert g("c") == Dist(Copower(2, A), {(0, "c"): "1/2", (1, "c"): "1/2"})


def test_graph_of_channel_is_product():
    f = Channel(B, A, {"x": {"a": 1}, "y": {"b": "1/2", "c": "1/2"}})
    assert graph(f)("y") == Dist(Product(A, B), {("b", "y"): "1/2", ("c", "y"): "1/2"})


def test_strengths():
    w = Dist(Numeric(2), {0: "1/3", 1: "2/3"})
    s = strength_left(w, "b", A)
    assert s.space == Copower(2, A)
    assert s == Dist(Copower(2, A), {(0, "b"): "1/3", (1, "b"): "2/3"})
    r = strength_right("x", B, Dist(A, {"a": 1}))
    assert r == Dist(Product(B, A), {("x", "a"): 1})


def test_tag_helpers():
    w = Dist(Copower(3, A), {(0, "a"): "1/4", (0, "b"): "1/4", (2, "a"): "1/2"})
    assert weights(w) == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
    assert marginal_first(w) == Dist(Numeric(3), {0: "1/2", 2: "1/2"})
    assert codiagonal(w) == Dist(A, {"a": "3/4", "b": "1/4"})
    assert fiber(w, "a") == SubDist(Numeric(3), {0: "1/4", 2: "1/2"})
    assert twist(w).space == Product(A, Numeric(3))


def test_convex_sum_checks_weights():
    d = convex_sum([("1/4", dirac("a", A)), ("3/4", dirac("b", A))])
    assert d == Dist(A, {"a": "1/4", "b": "3/4"})
    with pytest.raises(ValidationError):
        convex_sum([("1/4", dirac("a", A))])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_kleisli_unit_and_associativity(data):
    X = data.draw(finite_spaces(name="X"))
    Y = data.draw(finite_spaces(name="Y"))
    Z = data.draw(finite_spaces(name="Z"))
    w = data.draw(dists(X))
    f = data.draw(channels(X, Y))
    g = data.draw(channels(Y, Z))
    h = data.draw(channels(Z, X))
    assert kleisli_apply(unit_channel(X), w) == w
    assert kleisli_apply(f, dirac(X.labels[0], X)) == f(X.labels[0])
    assert kleisli_apply(g, kleisli_apply(f, w)) == kleisli_apply(kleisli_compose(g, f), w)
    assert kleisli_compose(h, kleisli_compose(g, f)) == kleisli_compose(kleisli_compose(h, g), f)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_kleisli_apply_matches_matrix_product(data):
    # oracle: explicit sum over the source
    X = data.draw(finite_spaces(name="X"))
    Y = data.draw(finite_spaces(name="Y"))
    w = data.draw(dists(X))
    f = data.draw(channels(X, Y))
    expected = {b: sum(w(a) * f(a)(b) for a in X.labels) for b in Y.labels}
    out = kleisli_apply(f, w)
    assert {b: out(b) for b in Y.labels} == expected


# -- spaces and kets ------------------------------------------------------------------


def test_space_expressions():
    assert Copower(3, A).expr() == "3*A"
    assert Product(A, B).expr() == "prod(A,B)"
    assert maybe(A).expr() == "sum(A,1)"
    assert Dists(Copower(2, A)).expr() == "D(2*A)"
    assert UnitInterval().expr() == "Unit"


def test_render_nested():
    inner = Dist(A, {"a": "1/3", "b": "2/3"})
    h = Dist(Copower(2, Dists(A)), {Tagged(1, inner): 1})
    assert render_ket(h) == "1|k1(1/3|a> + 2/3|b>)>"
    s = Dist(maybe(A), {Injected(1, "a"): "1/2", Injected(2, 0): "1/2"})
    assert render_ket(s) == "1/2|k1(a)> + 1/2|k2(0)>"


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("2") == 2
    for bad in ("-1/2", "1/0", "0.5", "", "a"):
        with pytest.raises(ValidationError):
            parse_rational(bad)


def test_parse_ket_errors_have_offsets():
    with pytest.raises(ValidationError, match="unknown label 'z'"):
        parse_ket("1/2|a> + 1/2|z>", A)
    with pytest.raises(ValidationError, match="distribution mass 1/2"):
        parse_ket("1/2|a>", A)
    with pytest.raises(ValidationError, match="negative"):
        parse_ket("-1/2|a> + 3/2|b>", A)
    with pytest.raises(ValidationError, match="trailing"):
        parse_ket("1|a> junk", A)


def test_parse_zero_subdist():
    assert parse_ket("0", A, proper=False) == SubDist(A, {})
    assert parse_ket("0|a> + 1/2|b>", A, proper=False) == SubDist(A, {"b": "1/2"})


def test_parse_label_kinds():
    assert parse_label("k2(b)", Copower(3, A)) == Tagged(2, "b")
    assert parse_label("(a,y)", Product(A, B)) == ("a", "y")
    assert parse_label("k2(0)", maybe(A)) == Injected(2, 0)
    assert parse_label("3/4", UnitInterval()) == Fraction(3, 4)
    with pytest.raises(ValidationError):
        parse_label("k3(a)", Copower(3, A))


SPACES = [
    A,
    Numeric(3),
    Copower(2, A),
    Product(A, B),
    Sum(A, Numeric(1)),
    Copower(2, Product(B, Numeric(2))),
]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SPACES), st.data())
def test_ket_round_trip(sp, data):
    d = data.draw(dists(sp))
    assert parse_ket(render_ket(d), sp) == d
    s = data.draw(subdists(sp))
    assert parse_ket(render_ket(s), sp, proper=False) == s


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_ket_round_trip_nested(data):
    inner = [data.draw(dists(A)) for _ in range(3)]
    sp = Copower(3, Dists(A))
    counts = data.draw(st.lists(st.integers(1, 5), min_size=3, max_size=3))
    mass: dict = {}
    for i, (phi, c) in enumerate(zip(inner, counts)):
        mass[Tagged(i, phi)] = Fraction(c, sum(counts))
    h = Dist(sp, mass)
    assert parse_ket(render_ket(h), sp) == h


def test_finite_space_rejects_duplicates():
    with pytest.raises(ValidationError):
        Finite("X", ("a", "a"))
