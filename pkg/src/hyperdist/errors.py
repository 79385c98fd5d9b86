"""Exception types raised by the library.

Domain errors derive from :class:`HyperdistError`; the CLI maps them to exit
status 1. Errors that describe malformed input derive from
:class:`ValidationError` and map to exit status 2.
"""

from __future__ import annotations


class HyperdistError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HyperdistError, ValueError):
    """A value was constructed that violates its type invariants."""


class UnknownLabel(ValidationError):
    def __init__(self, label, space_name: str):
        super().__init__(f"unknown label {label!r} in space {space_name}")
        self.label = label
        self.space_name = space_name


class SpaceMismatch(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class ZeroSubdistribution(HyperdistError):
    def __init__(self, msg: str = "cannot normalise the zero subdistribution"):
        super().__init__(msg)


class ZeroScoreMass(HyperdistError):
    def __init__(self, msg: str = "total score mass is zero"):
        super().__init__(msg)


class ZeroValidity(HyperdistError):
    def __init__(self, msg: str = "predicate has validity zero in this state"):
        super().__init__(msg)


class IncompleteSupport(HyperdistError):
    """Support does not cover the whole space; ``labels`` lists what is missing."""

    def __init__(self, labels, what: str = "marginal"):
        self.labels = tuple(labels)
        shown = ", ".join(str(x) for x in self.labels)
        super().__init__(f"{what} does not cover labels: {shown}")


class NotOrthogonal(HyperdistError):
    def __init__(self, label, total):
        super().__init__(f"predicates are not orthogonal at {label!r}: sum {total} > 1")
        self.label = label
        self.total = total


class NotATest(HyperdistError):
    pass


class StateMismatch(HyperdistError):
    pass


class NotNormalised(HyperdistError):
    pass
