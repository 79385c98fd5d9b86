"""Hyper conditioning, recovery of state and test, channel denotation."""

from __future__ import annotations

from typing import Sequence

from .errors import NotATest, SpaceMismatch
from .kernel import (
    Copower,
    Dist,
    Dists,
    Numeric,
    Tagged,
    codiagonal,
    flatten,
    graph,
    kleisli_apply,
)
from .kernel.values import ZERO, Channel
from .normalise import disintegrate, hyper_normalise
from .predicates import Predicate, condition, test_from_components, validity


def _require_test(t: Channel):
    if not isinstance(t.target, Numeric):
        raise NotATest(f"target {t.target.expr()} is not a numeric space")


def instrument(t: Channel) -> Channel:
    """The channel ``A ⊸ n·A`` pairing each outcome with its cause."""
    _require_test(t)
    return graph(t)


def hyper_condition(omega: Dist, t: Channel) -> Dist:
    """``ω∥t = N(gr(t)_*(ω))``; total for every state and test."""
    _require_test(t)
    if t.source != omega.space:
        raise SpaceMismatch(f"test on {t.source.expr()} vs state on {omega.space.expr()}")
    return hyper_normalise(kleisli_apply(graph(t), omega))


def hyper_condition_direct(omega: Dist, components: Sequence[Predicate]) -> Dist:
    """``Σ_{ω⊨p_i≠0} (ω⊨p_i)|κ_i(ω|_{p_i})>``, computed by ordinary conditioning."""
    t = test_from_components(components)
    if t.source != omega.space:
        raise SpaceMismatch(f"test on {t.source.expr()} vs state on {omega.space.expr()}")
    out = {}
    for i, p in enumerate(components):
        v = validity(omega, p)
        if v:
            out[Tagged(i, condition(omega, p))] = v
    return Dist._trusted(Copower(len(components), Dists(omega.space)), out)


def is_normalised(phi: Dist) -> bool:
    """True when every tag occurs at most once."""
    tags = [x[0] for x, _ in phi.items()]
    return len(tags) == len(set(tags))


def _require_hyper(phi: Dist) -> Copower:
    sp = phi.space
    if not (isinstance(sp, Copower) and isinstance(sp.base, Dists)):
        raise SpaceMismatch(f"expected a hyper distribution over n·D(A), got {sp.expr()}")
    return sp


def erase_tags(phi: Dist) -> Dist:
    """``D(π₂)``: a hyper distribution over ``n·D(A)`` as an element of ``D(D(A))``."""
    _require_hyper(phi)
    return codiagonal(phi)


def recover_state(phi: Dist) -> Dist:
    """``(π₂)_*(Φ) = μ(D(π₂)(Φ))``."""
    return flatten(erase_tags(phi))


def unfold(phi: Dist) -> Dist:
    """``(st₂)_*``: ``Σ u_i|κ_i φ_i> ↦ Σ u_i φ_i(a)|κ_i a>`` over ``n·A``."""
    sp = _require_hyper(phi)
    base = sp.base.base
    acc: dict = {}
    for (i, inner), u in phi.items():
        for a, m in inner.items():
            key = Tagged(i, a)
            acc[key] = acc.get(key, ZERO) + u * m
    return Dist._trusted(Copower(sp.n, base), acc)


def recover_test(phi: Dist) -> Channel:
    """The test ``t`` with ``Φ = ω∥t``; needs the recovered state to have full support."""
    return disintegrate(unfold(phi)).conditional


def denote_channel(c: Channel, omega: Dist) -> Dist:
    """``D(∇)(ω∥c)``: posteriors with their weights, tags erased and equal posteriors merged."""
    return erase_tags(hyper_condition(omega, c))

