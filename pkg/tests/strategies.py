"""Hypothesis strategies for spaces, distributions, channels and predicates."""

from fractions import Fraction

from hypothesis import strategies as st

from hyperdist import Channel, Copower, Dist, Finite, Numeric, Predicate, SubDist

LETTERS = "abcdefgh"


@st.composite
def finite_spaces(draw, min_size=1, max_size=4, name="A"):
    k = draw(st.integers(min_size, max_size))
    return Finite(name, tuple(LETTERS[:k]))


@st.composite
def weights(draw, k, allow_zero_total=False):
    counts = draw(st.lists(st.integers(0, 6), min_size=k, max_size=k))
    if not allow_zero_total and sum(counts) == 0:
        counts[draw(st.integers(0, k - 1))] = 1
    return counts


@st.composite
def dists(draw, sp):
    labels = sp.labels
    counts = draw(weights(len(labels)))
    total = sum(counts)
    return Dist(sp, {a: Fraction(c, total) for a, c in zip(labels, counts)})


@st.composite
def subdists(draw, sp):
    labels = sp.labels
    counts = draw(weights(len(labels), allow_zero_total=True))
    extra = draw(st.integers(0, 6))
    total = sum(counts) + extra or 1
    return SubDist(sp, {a: Fraction(c, total) for a, c in zip(labels, counts)})


@st.composite
def channels(draw, src, tgt):
    return Channel(src, tgt, {a: draw(dists(tgt)) for a in src.labels})


@st.composite
def n_tests(draw, src, min_outcomes=1, max_outcomes=4):
    n = draw(st.integers(min_outcomes, max_outcomes))
    return draw(channels(src, Numeric(n)))


@st.composite
def predicates(draw, sp):
    vals = draw(st.lists(st.integers(0, 6), min_size=len(sp), max_size=len(sp)))
    return Predicate(sp, {a: Fraction(v, 6) for a, v in zip(sp.labels, vals)})


@st.composite
def tagged_dists(draw, max_arity=4, max_size=4):
    n = draw(st.integers(1, max_arity))
    A = draw(finite_spaces(max_size=max_size))
    return draw(dists(Copower(n, A)))


@st.composite
def full_support_dists(draw, sp):
    counts = [draw(st.integers(1, 6)) for _ in sp.labels]
    total = sum(counts)
    return Dist(sp, {a: Fraction(c, total) for a, c in zip(sp.labels, counts)})
