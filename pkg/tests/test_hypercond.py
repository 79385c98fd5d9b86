import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperdist import (
    Channel,
    Copower,
    Dists,
    NotATest,
    Numeric,
    Predicate,
    SpaceMismatch,
    codiagonal,
    condition,
    denote_channel,
    erase_tags,
    flatten,
    graph,
    hyper_condition,
    hyper_condition_direct,
    instrument,
    is_normalised,
    kleisli_apply,
    parse_ket,
    recover_state,
    recover_test,
    render_ket,
    space,
    test_components,
    test_from_predicate,
    validity,
)
from strategies import dists, finite_spaces, full_support_dists, n_tests

A = space("A", ["a", "b", "c"])
OMEGA = parse_ket("1/4|a> + 1/3|b> + 5/12|c>", A)
P = Predicate(A, {"a": "1/2", "b": "1/4", "c": 1})
HT = space("HT", ["H", "T"])


def test_instrument_and_hyper_conditional():
    t = test_from_predicate(P)
    joint = kleisli_apply(instrument(t), OMEGA)
    assert render_ket(joint) == "1/8|k0(a)> + 1/12|k0(b)> + 5/12|k0(c)> + 1/8|k1(a)> + 1/4|k1(b)>"
    phi = hyper_condition(OMEGA, t)
    assert render_ket(phi) == "5/8|k0(1/5|a> + 2/15|b> + 2/3|c>)> + 3/8|k1(1/3|a> + 2/3|b>)>"
    assert hyper_condition_direct(OMEGA, test_components(t)) == phi


def test_denotation_merges_tags():
    t = test_from_predicate(P)
    assert render_ket(denote_channel(t, OMEGA)) == "5/8|1/5|a> + 2/15|b> + 2/3|c>> + 3/8|1/3|a> + 2/3|b>>"
    # two outcomes with the same posterior collapse after erasing tags
    same = Channel(HT, Numeric(2), {"H": {0: "1/2", 1: "1/2"}, "T": {0: "1/2", 1: "1/2"}})
    w = parse_ket("1/3|H> + 2/3|T>", HT)
    assert denote_channel(same, w) == parse_ket("1|1/3|H> + 2/3|T>>", Dists(HT))
    assert len(hyper_condition(w, same)) == 2


def test_medical_hyper_conditional():
    D = space("Health", ["d", "~d"])
    w = parse_ket("1/100|d> + 99/100|~d>", D)
    t = test_from_predicate(Predicate(D, {"d": "9/10", "~d": "1/20"}))
    phi = hyper_condition(w, t)
    expected = parse_ket(
        "117/2000|k0(18/117|d> + 99/117|~d>)> + 1883/2000|k1(2/1883|d> + 1881/1883|~d>)>", Copower(2, Dists(D))
    )
    assert phi == expected


def test_recovery_example():
    phi = parse_ket("1/2|k0(2/3|H> + 1/3|T>)> + 1/2|k1(1/3|H> + 2/3|T>)>", Copower(2, Dists(HT)))
    assert recover_state(phi) == parse_ket("1/2|H> + 1/2|T>", HT)
    s = recover_test(phi)
    assert s("H") == parse_ket("2/3|0> + 1/3|1>", s.target)
    assert s("T") == parse_ket("1/3|0> + 2/3|1>", s.target)
    assert hyper_condition(recover_state(phi), s) == phi


def test_errors():
    with pytest.raises(NotATest):
        hyper_condition(OMEGA, Channel(A, A, {a: {a: 1} for a in A.labels}))
    t = test_from_predicate(Predicate(HT, {"H": 1, "T": 0}))
    with pytest.raises(SpaceMismatch):
        hyper_condition(OMEGA, t)
    with pytest.raises(SpaceMismatch):
        erase_tags(OMEGA)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_instrument_route_equals_direct_route(data):
    X = data.draw(finite_spaces(name="X"))
    w = data.draw(dists(X))
    t = data.draw(n_tests(X))
    phi = hyper_condition(w, t)
    assert phi == hyper_condition_direct(w, test_components(t))
    assert is_normalised(phi)
    assert recover_state(phi) == w
    for (i, post), weight in phi.items():
        p = test_components(t)[i]
        assert weight == validity(w, p)
        assert post == condition(w, p)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_recovery_inverts_hyper_conditioning(data):
    X = data.draw(finite_spaces(name="X"))
    w = data.draw(full_support_dists(X))
    t = data.draw(n_tests(X))
    phi = hyper_condition(w, t)
    assert recover_test(phi) == t
    assert flatten(codiagonal(phi)) == w
    assert kleisli_apply(graph(t), w) == kleisli_apply(graph(recover_test(phi)), recover_state(phi))
