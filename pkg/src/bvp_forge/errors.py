"""Exception hierarchy shared by all solver modules."""


class BVPError(Exception):
    """Base class for every error raised by bvp_forge."""


class ConfigError(BVPError, ValueError):
    """Invalid problem definition or solver options."""


class ParseError(BVPError, ValueError):
    """Malformed expression source.

    ``offset`` is the byte offset into the UTF-8 encoded source.
    """

    def __init__(self, message, source="", offset=0):
        self.source = source
        self.offset = offset
        super().__init__(f"{message} (at byte {offset})")


class ExprDomainError(BVPError, ArithmeticError):
    """Expression evaluated outside its domain (log of non-positive, ...)."""

    def __init__(self, message, point=None):
        self.point = point
        if point is not None:
            x, u, v = point
            message = f"{message} at (x={x!r}, u={u!r}, v={v!r})"
        super().__init__(message)


class SolverError(BVPError, ArithmeticError):
    """A numerical step could not be carried out (zero pivot, zero slope, ...)."""


class DivergenceError(BVPError, ArithmeticError):
    """Iterates or trajectories blew up."""


class ConvergenceError(BVPError):
    """Iteration stopped at ``max_iter`` without meeting the tolerance.

    The partial trace is attached so callers can inspect how far it got.
    """

    def __init__(self, message, trace=None, state=None):
        self.trace = trace
        self.state = state
        super().__init__(message)
