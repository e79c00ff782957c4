"""
Exception hierarchy for linstark.

Numeric kernels raise one of these instead of returning a value they cannot
vouch for. The CLI and the HTTP surface translate them into exit codes and
error envelopes.
"""


class LinstarkError(Exception):
    """Base class for every error raised by the package."""

    error_type = "linstark_error"


class InvalidParameterError(LinstarkError, ValueError):
    """A parameter lies outside the domain of the requested operation."""

    error_type = "invalid_parameter"


class NoBoundStateError(InvalidParameterError):
    """The perturbed potential no longer supports bound states."""

    error_type = "no_bound_state"


class ZeroFindingError(LinstarkError):
    """Zero refinement failed to bracket or converge."""

    error_type = "zero_finding"


class BracketError(ZeroFindingError):
    """No sign change inside the search bracket."""

    error_type = "bracket"


class UnsupportedIdentityError(LinstarkError):
    """No closed-form integral identity exists for the requested case."""

    error_type = "unsupported_identity"


class IllConditionedError(LinstarkError):
    """The requested closed form divides by a vanishing quantity."""

    error_type = "ill_conditioned"


class QuadratureError(LinstarkError):
    """Adaptive quadrature did not reach the requested tolerance."""

    error_type = "quadrature"


class GridTooNarrowError(LinstarkError):
    """A finite-difference grid truncates a bound state."""

    error_type = "grid_too_narrow"


class ExpansionError(LinstarkError):
    """The symbolic Stark expansion produced an inconsistent system."""

    error_type = "expansion"
