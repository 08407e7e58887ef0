"""Exception hierarchy shared by every module."""


class XpkError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(XpkError, ValueError):
    pass


class GraphError(XpkError, ValueError):
    pass


class SelfLoop(GraphError):
    def __init__(self, edge):
        self.edge = tuple(edge)
        super().__init__(f"self-loop {self.edge}")


class DuplicateEdge(GraphError):
    def __init__(self, edge):
        self.edge = tuple(edge)
        super().__init__(f"duplicate edge {self.edge}")


class VertexOutOfRange(GraphError):
    def __init__(self, what, n):
        self.what = what
        self.n = n
        super().__init__(f"vertex out of range [0, {n}): {what}")


class EmptySet(GraphError):
    pass


class CountTooLarge(GraphError):
    pass


class EdgeListFormatError(GraphError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class TooLarge(XpkError, ValueError):
    """Input exceeds the size cap of an exhaustive routine."""


class TooSmall(XpkError, ValueError):
    pass


class IsolatedVertex(XpkError, ValueError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} is isolated")


class NoConvergence(XpkError, RuntimeError):
    def __init__(self, message, best_residual):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class Disconnected(XpkError, ValueError):
    pass


class PreconditionDensity(XpkError, ValueError):
    pass


class PreconditionDegree(XpkError, ValueError):
    pass


class InternalInvariantViolated(XpkError, AssertionError):
    pass


class HypothesisViolated(XpkError, ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class IllegalMove(XpkError, ValueError):
    def __init__(self, message, move_log=()):
        self.move_log = list(move_log)
        super().__init__(message)


class BiasTooLarge(XpkError, ValueError):
    pass
