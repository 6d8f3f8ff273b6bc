"""
Error hierarchy

Every error raised by menuforge derives from MenuforgeError. The CLI maps the
families below onto its exit codes.
"""


class MenuforgeError(Exception):
    """Root of all menuforge errors"""

    exit_code = 1


class InputError(MenuforgeError, ValueError):
    """Raised for malformed input: bad dimensions, distributions, weights or payoffs"""


class ParseError(InputError):
    """Raised when a game, menu, trajectory or config file cannot be read"""


class PreconditionError(InputError):
    """Raised when an operation's documented precondition does not hold"""


class AssumptionViolationError(MenuforgeError):
    """Raised when a game fails the assumptions required for menu construction"""

    exit_code = 2


class UnsupportedShapeError(MenuforgeError):
    """Raised when an operation is restricted to a game shape the input does not have"""

    exit_code = 3


class DimensionLimitError(UnsupportedShapeError):
    """Raised when vertex enumeration would exceed the configured dimension limit"""


class GeometryError(MenuforgeError):
    """Raised for failures inside exact geometry routines"""


class UnboundedRegionError(GeometryError):
    """Raised when a halfspace system describes an unbounded region"""


class EmptyPolytopeError(GeometryError):
    """Raised when a halfspace system has no feasible point"""


class RepresentationError(GeometryError):
    """Raised when a polytope lacks the representation an operation needs"""


class LPCertificateError(GeometryError):
    """Raised when an LP solution fails exact substitution into its constraints"""


class StructureError(MenuforgeError):
    """Raised for degenerate best-response cone structure"""

    exit_code = 3


class SearchFailureError(MenuforgeError):
    """Raised when a budgeted search ends without a witness (inconclusive, not a proof)"""

    exit_code = 4
