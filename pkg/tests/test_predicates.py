from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperdist import (
    Channel,
    Dist,
    NotATest,
    NotOrthogonal,
    Numeric,
    Predicate,
    SpaceMismatch,
    ValidationError,
    ZeroValidity,
    complement,
    condition,
    convex_sum,
    falsity,
    indicator,
    kleisli_apply,
    parse_ket,
    psum,
    scale,
    space,
    test_components,
    test_from_components,
    test_from_predicate,
    truth,
    validity,
    wp,
)
from strategies import channels, dists, finite_spaces, predicates

A = space("A", ["a", "b", "c"])
OMEGA = parse_ket("1/4|a> + 1/3|b> + 5/12|c>", A)
P = Predicate(A, {"a": "1/2", "b": "1/4", "c": 1})


def test_validity_table():
    assert validity(OMEGA, P) == Fraction(5, 8)
    assert validity(OMEGA, complement(P)) == Fraction(3, 8)
    assert validity(OMEGA, indicator({"a", "c"}, A)) == Fraction(2, 3)


def test_conditioning_table():
    assert condition(OMEGA, P) == parse_ket("1/5|a> + 2/15|b> + 2/3|c>", A)
    assert condition(OMEGA, complement(P)) == parse_ket("1/3|a> + 2/3|b>", A)
    assert condition(OMEGA, indicator({"a", "c"}, A)) == parse_ket("3/8|a> + 5/8|c>", A)


def test_conditioning_needs_nonzero_validity():
    with pytest.raises(ZeroValidity):
        condition(parse_ket("1|a>", A), indicator({"b"}, A))


def test_predicate_validation():
    with pytest.raises(ValidationError):
        Predicate(A, {"a": 2, "b": 0, "c": 0})
    with pytest.raises(ValidationError, match="no value for labels: c"):
        Predicate(A, {"a": 1, "b": 0})


def test_effect_algebra_operations():
    p = Predicate(A, {"a": "1/2", "b": 0, "c": "1/4"})
    q = Predicate(A, {"a": "1/2", "b": 1, "c": "1/4"})
    assert psum(p, q) == Predicate(A, {"a": 1, "b": 1, "c": "1/2"})
    with pytest.raises(NotOrthogonal):
        psum(q, q)
    assert psum(p, complement(p)) == truth(A)
    assert scale("1/2", truth(A)) == Predicate(A, {a: "1/2" for a in A.labels})
    assert falsity(A) == complement(truth(A))
    assert indicator({"a"}, A).event() == frozenset({"a"})


def test_tests_and_components():
    t = test_from_predicate(P)
    assert test_components(t) == (P, complement(P))
    assert test_from_components(test_components(t)) == t
    with pytest.raises(NotATest):
        test_from_components([P, P])
    with pytest.raises(NotATest):
        test_components(Channel(A, A, {a: {a: 1} for a in A.labels}))


def test_wp_medical():
    D = space("Health", ["d", "~d"])
    T = space("Result", ["t", "~t"])
    s = Channel(D, T, {"d": {"t": "9/10", "~t": "1/10"}, "~d": {"t": "1/20", "~t": "19/20"}})
    pos = wp(s, indicator({"t"}, T))
    assert pos == Predicate(D, {"d": "9/10", "~d": "1/20"})
    assert validity(Dist(D, {"d": "1/100", "~d": "99/100"}), pos) == Fraction(117, 2000)
    with pytest.raises(SpaceMismatch):
        wp(s, P)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_validity_transfers_along_channels(data):
    X = data.draw(finite_spaces(name="X"))
    Y = data.draw(finite_spaces(name="Y"))
    w = data.draw(dists(X))
    f = data.draw(channels(X, Y))
    q = data.draw(predicates(Y))
    assert validity(kleisli_apply(f, w), q) == validity(w, wp(f, q))


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_total_probability(data):
    X = data.draw(finite_spaces(name="X"))
    w = data.draw(dists(X))
    p = data.draw(predicates(X))
    v = validity(w, p)
    assert validity(w, complement(p)) == 1 - v
    if 0 < v < 1:
        mixed = convex_sum([(v, condition(w, p)), (1 - v, condition(w, complement(p)))])
        assert mixed == w


def test_numeric_test_target():
    t = test_from_predicate(P)
    assert t.target == Numeric(2)
