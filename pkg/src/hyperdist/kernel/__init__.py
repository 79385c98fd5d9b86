"""Spaces, distributions, channels and the distribution-monad operations."""

from .ket import parse_ket, parse_label, parse_rational, render_ket, render_label, render_prob
from .ops import (
    channel_copower_left,
    channel_copower_right,
    codiagonal,
    common_space,
    convex_sum,
    deterministic,
    dirac,
    fiber,
    flatten,
    graph,
    inject,
    kleisli_apply,
    kleisli_compose,
    marginal_first,
    marginal_second,
    push_forward,
    strength_left,
    strength_right,
    tagged,
    twist,
    unit_channel,
    weight,
    weights,
)
from .spaces import (
    ONE as UNIT_SPACE,
    Copower,
    Dists,
    Finite,
    Injected,
    Numeric,
    Product,
    Space,
    Sum,
    Tagged,
    UnitInterval,
    maybe,
    space,
)
from .values import Channel, Dist, SubDist, as_prob

__all__ = [name for name in dir() if not name.startswith("_")]
