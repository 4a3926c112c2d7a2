"""/c3rf/src/c3rf/core/errors.py
Exception hierarchy. Every error knows the CLI exit code it maps to.
"""


class C3RFError(Exception):
    """Base class for all c3rf errors."""

    exit_code = 3


# Malformed input

class GraphError(C3RFError, ValueError):
    """A graph, configuration or document violates a structural rule."""

    exit_code = 2


class DuplicateId(GraphError):
    pass


class ScopeOutOfRange(GraphError):
    pass


class TableSizeMismatch(GraphError):
    pass


class NaNPotential(GraphError):
    pass


class InvalidConfiguration(GraphError):
    pass


class LengthMismatch(GraphError):
    pass


class DimensionMismatch(GraphError):
    pass


class ParseError(GraphError):
    """A file could not be decoded into a c3rf object."""


# Inference failures

class InferenceError(C3RFError, RuntimeError):
    exit_code = 3


class AllConfigurationsForbidden(InferenceError):
    """Every configuration carries -inf weight."""


class EmptyBall(InferenceError):
    """Every member of a Hamming ball is forbidden."""


class EmptyCandidateSet(InferenceError):
    pass


class TooLargeToEnumerate(InferenceError):
    exit_code = 4
