"""Exception hierarchy. Every error raised by the library derives from LightconeError."""


class LightconeError(Exception):
    """Base class for all library errors."""


class ConstraintError(LightconeError):
    """A frame or pair violates its defining constraints beyond tolerance."""


class LightlikeError(LightconeError):
    """A vector expected to be a usable lightlike vector is not."""


class ExprSyntaxError(LightconeError):
    """Malformed expression text.

    Attributes
    ----------
    offset : int
        Byte offset into the source where parsing failed.
    expected : tuple of str
        Tokens that would have been accepted at ``offset``.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnknownFunctionError(ExprSyntaxError):
    """Call to a function name outside the supported set."""


class UnboundParameterError(LightconeError):
    """A free name in an expression has no binding."""


class DomainError(LightconeError):
    """Evaluation left the domain of a function (log of a non-positive number, ...)."""


class IntervalError(LightconeError):
    """Query outside a field's interval, or incompatible intervals."""


class IntegrationError(LightconeError):
    """Frame ODE integration drifted beyond the hard limit."""


class GaugeError(LightconeError):
    """Gauge function vanishes somewhere on the interval."""


class MateSpecError(LightconeError):
    """A mate specification is malformed (zero lambda, nonconstant NN lambda, ...)."""


class ConditionError(LightconeError):
    """The mate existence condition fails on the grid.

    Attributes
    ----------
    residual : float
        Largest absolute residual.
    node : int
        Grid index where it occurs.
    t : float
        Parameter value of that node.
    """

    def __init__(self, residual, node, t):
        self.residual = float(residual)
        self.node = int(node)
        self.t = float(t)
        super().__init__(
            f"mate condition violated: max residual {self.residual:.3e} at node {self.node} (t={self.t:.6g})"
        )


class UnsolvableError(LightconeError):
    """Coefficient of lambda vanishes on the grid, so lambda cannot be solved for."""

    def __init__(self, node, t, what="coefficient"):
        self.node = int(node)
        self.t = float(t)
        super().__init__(f"{what} vanishes at node {self.node} (t={self.t:.6g}); lambda unsolvable on this grid")


class MateConstructionError(LightconeError):
    """The constructed mate fails its own frame or tangency invariants."""
