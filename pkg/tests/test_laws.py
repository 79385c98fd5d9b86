import json
from fractions import Fraction
from pathlib import Path

import pytest

from hyperdist import (
    Channel,
    Copower,
    Dist,
    Dists,
    Numeric,
    Tagged,
    dirac,
    graph,
    hyper_normalise,
    kleisli_apply,
    parse_ket,
    space,
)
from hyperdist.kernel.ops import kleisli_apply as real_lift
from hyperdist.laws import (
    CHECKERS,
    LAWS,
    CheckConfig,
    CheckReport,
    Ops,
    all_dists,
    check_characterisation,
    check_disintegration,
    check_distributive_law,
    check_hyper_point,
    check_kleisli_laws,
    check_n_naturality,
    check_non_affine,
    check_norm_laws,
    replay,
    sample_space,
)
from hyperdist.workspace import Workspace

DATA = Path(__file__).parent / "data"
SMALL = CheckConfig(2, 2, 3)
TINY = CheckConfig(1, 1, 1)

A4 = space("A", ["a", "b", "c", "d"])
SECTION3 = parse_ket("1/8|k0(a)> + 1/4|k0(b)> + 1/2|k1(c)> + 1/8|k1(d)>", Copower(3, A4))


# -- generators -------------------------------------------------------------------


def test_all_dists_counts():
    # distinct mass vectors k/q, q ≤ 4; on two points these are fixed by the first mass
    two = all_dists(sample_space("A", 2), 4)
    assert len(two) == 7  # 0, 1/4, 1/3, 1/2, 2/3, 3/4, 1 on the first point
    three = all_dists(sample_space("A", 3), 4)
    assert len(three) == len(set(three)) == 22
    assert all(d.total() == 1 for d in three)


def test_all_dists_order_starts_with_points():
    ds = all_dists(sample_space("A", 2), 2)
    assert [str(d) for d in ds] == ["1|a>", "1|b>", "1/2|a> + 1/2|b>"]


def test_config_validation():
    with pytest.raises(ValueError):
        CheckConfig(max_space_size=0)
    with pytest.raises(ValueError):
        CheckConfig(mode="sometimes")


# -- passing suites at small bounds --------------------------------------------------


@pytest.mark.parametrize(
    "checker",
    [check_kleisli_laws, check_norm_laws, check_characterisation, check_n_naturality, check_hyper_point, check_disintegration],
)
@pytest.mark.parametrize("cfg", [TINY, SMALL], ids=["tiny", "small"])
def test_passing_suites(checker, cfg):
    r = checker(cfg)
    assert r.outcome == "pass", r.counterexample
    assert r.instances > 0


def test_distributive_law_small():
    r = check_distributive_law(SMALL)
    assert r.outcome == "expected-fail"
    outcomes = {p.law: p.outcome for p in r.parts}
    assert outcomes.pop("distributive.counit_square") == "expected-fail"
    assert set(outcomes.values()) == {"pass"}
    assert set(outcomes) == {
        "distributive.natural",
        "distributive.comult_left",
        "distributive.comult_right",
        "distributive.counit",
        "distributive.extended_counit",
    }


def test_distributive_law_single_tag_passes():
    r = check_distributive_law(CheckConfig(2, 1, 3))
    assert r.outcome == "pass"
    assert "distributive.counit_square" in {p.law for p in r.parts}


def test_randomised_mode_is_reproducible():
    cfg = CheckConfig(3, 3, 6, mode="randomised", seed=7, trials=10)
    a = check_norm_laws(cfg).to_json()
    b = check_norm_laws(cfg).to_json()
    assert a == b and a["outcome"] == "pass"
    assert check_kleisli_laws(cfg).outcome == "pass"
    assert check_distributive_law(cfg).outcome == "expected-fail"


# -- worked instances -----------------------------------------------------------------


def test_worked_example_instances():
    assert check_norm_laws(instances=[SECTION3]).outcome == "pass"
    phis = [parse_ket("1/3|a> + 2/3|b>", A4), parse_ket("4/5|c> + 1/5|d>", A4), parse_ket("1|a>", A4)]
    assert check_characterisation(instances=[(parse_ket("3/8|0> + 5/8|1>", Numeric(3)), phis)]).outcome == "pass"
    r = check_hyper_point(instances=[SECTION3])
    assert r.outcome == "pass" and r.skipped == 1  # tag 2 never occurs
    full = parse_ket("1/8|k0(a)> + 1/4|k1(b)> + 5/8|k2(c)>", Copower(3, A4))
    assert check_hyper_point(instances=[full]).instances == 1


def test_n_naturality_instances():
    HT = space("HT", ["H", "T"])
    s = Channel(HT, Numeric(2), {"H": {0: "2/3", 1: "1/3"}, "T": {0: "1/3", 1: "2/3"}})
    joint = kleisli_apply(graph(s), parse_ket("1/2|H> + 1/2|T>", HT))
    h = Channel(Numeric(2), Numeric(3), {0: {0: "2/3", 1: "1/3"}, 1: {1: "1/3", 2: "2/3"}})
    unit = Channel(Numeric(2), Numeric(2), {0: {0: 1}, 1: {1: 1}})
    collapse = Channel(Numeric(3), Numeric(1), {i: {0: 1} for i in range(3)})
    r = check_n_naturality(instances=[(joint, h), (joint, unit), (SECTION3, collapse)])
    assert r.outcome == "pass" and r.instances == 3


def test_non_affine_report():
    r = check_non_affine()
    assert r.outcome == "expected-fail"
    parts = {p.law: p for p in r.parts}
    remark = parts["non_affine.remark"]
    assert remark.outcome == "expected-fail"
    assert remark.counterexample["lhs"] == "1/4|k0(1|a>)> + 3/4|k0(1|b>)>"
    assert remark.counterexample["rhs"] == "1|k0(1/4|a> + 3/4|b>)>"
    assert parts["non_affine.remark_one_tag"].outcome == "expected-fail"
    assert parts["non_affine.fixed_blocks"].outcome == "pass"
    assert parts["non_affine.single_tag_is_unit"].outcome == "pass"
    assert not replay(remark.counterexample)


# -- counterexamples ----------------------------------------------------------------


def test_stored_counit_counterexample_replays():
    cex = json.loads((DATA / "counit_counterexample.json").read_text())
    assert cex["law"] == "distributive.counit_square"
    ws = Workspace.from_doc(cex["workspace"])
    assert str(ws.get("omega")) == "1/2|k0(a)> + 1/2|k1(b)>"
    assert replay(cex) is False
    lhs, rhs = LAWS[cex["law"]](ws.objects(), Ops())
    assert str(lhs) == cex["lhs"] == "1/2|1|a>> + 1/2|1|b>>"
    assert str(rhs) == cex["rhs"] == "1|1/2|a> + 1/2|b>>"


def test_search_finds_the_stored_counterexample_first():
    cex = json.loads((DATA / "counit_counterexample.json").read_text())
    assert check_distributive_law(SMALL).counterexample == cex


def _bad_lift(g, omega):
    out = real_lift(g, omega)
    items = out.items()
    if len(items) < 2:
        return out
    # move a little mass between the first two outcomes
    (a, p), (b, q) = items[0], items[1]
    eps = min(p, Fraction(1, 97))
    mass = dict(items)
    mass[a], mass[b] = p - eps, q + eps
    return Dist(out.space, mass)


def _global_normalise(omega):
    # normalises once across all tags instead of per block
    base = omega.space.base
    flat: dict = {}
    for (i, a), m in omega.items():
        flat[a] = flat.get(a, 0) + m
    inner = Dist(base, flat)
    sp = Copower(omega.space.n, Dists(base))
    tags: dict = {}
    for (i, _), m in omega.items():
        tags[i] = tags.get(i, 0) + m
    return Dist(sp, {Tagged(i, inner): m for i, m in tags.items()})


@pytest.mark.parametrize(
    "checker,ops",
    [
        (check_kleisli_laws, Ops(lift=_bad_lift)),
        (check_norm_laws, Ops(normalise=_global_normalise)),
        (check_characterisation, Ops(normalise=_global_normalise)),
        (check_n_naturality, Ops(lift=_bad_lift)),
        (check_hyper_point, Ops(normalise=_global_normalise)),
    ],
)
def test_corrupted_operations_are_caught(checker, ops):
    r = checker(SMALL, ops)
    assert r.outcome == "fail"
    cex = r.counterexample
    assert replay(cex, ops) is False
    assert replay(cex) is True  # the real operations satisfy the law there
    # and it survives serialisation
    again = json.loads(json.dumps(cex))
    assert replay(again, ops) is False


def test_report_json_shape():
    r = check_hyper_point(TINY)
    doc = r.to_json()
    assert doc["law"] == "hyper_point" and doc["outcome"] == "pass"
    assert isinstance(r, CheckReport) and r.ok


def test_registry_names():
    assert set(CHECKERS) == {
        "kleisli",
        "norm",
        "characterisation",
        "n_naturality",
        "hyper_point",
        "distributive",
        "disintegration",
        "non_affine",
    }


def test_degenerate_zero_arity():
    # D(0·A) is empty, so there is nothing to normalise
    assert Copower(0, A4).labels == ()
    assert hyper_normalise(dirac(Tagged(0, "a"), Copower(1, A4))).arity == 1
