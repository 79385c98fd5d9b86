"""Exact discrete probability with total hyper normalisation and conditioning."""

from .errors import (
    ArityMismatch,
    HyperdistError,
    IncompleteSupport,
    NotATest,
    NotNormalised,
    NotOrthogonal,
    SpaceMismatch,
    StateMismatch,
    UnknownLabel,
    ValidationError,
    ZeroScoreMass,
    ZeroSubdistribution,
    ZeroValidity,
)
from .hypercond import (
    denote_channel,
    erase_tags,
    hyper_condition,
    hyper_condition_direct,
    instrument,
    is_normalised,
    recover_state,
    recover_test,
    unfold,
)
from .kernel import *  # noqa: F401,F403
from .normalise import (
    DisintegrationResult,
    as_maybe,
    disintegrate,
    hyper_normalise,
    joint_from_conditional,
    maybe_extract,
    normalise_maybe,
    normalise_scored,
    nrm,
    score_space,
    scored_extract,
    sprinkle,
)
from .predicates import (
    Predicate,
    complement,
    condition,
    falsity,
    indicator,
    psum,
    scale,
    test_components,
    test_from_components,
    test_from_predicate,
    truth,
    validity,
    wp,
)
from .refinement import (
    RefinementWitness,
    check_witness,
    h_from_witness,
    hyper_refines,
    test_refines,
    witness_from_h,
)

__version__ = "0.1.0"
