"""Exception types raised by the package."""


class GraphInputError(ValueError):
    """Invalid graph, vertex, or vertex-set argument."""


class NoPathError(GraphInputError):
    """Two vertices lie in different connected components."""

    def __init__(self, u, v):
        super().__init__(f"no path between vertices {u} and {v}")
        self.u = u
        self.v = v


class ParseError(ValueError):
    """Malformed graph file."""

    def __init__(self, message, path=None, lineno=None):
        where = ""
        if path is not None:
            where += f"{path}"
        if lineno is not None:
            where += f":{lineno}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.lineno = lineno


class ConvergenceError(RuntimeError):
    """The time-averaged distribution did not settle within ``max_steps``.

    Carries the last averaged edge distribution and the last residual so that
    callers can still inspect a partial result.
    """

    def __init__(self, pi, residual, steps, epsilon):
        super().__init__(
            f"no convergence after {steps} steps: residual {residual:.3e} >= epsilon {epsilon:g}"
        )
        self.pi = pi
        self.residual = residual
        self.steps = steps
        self.epsilon = epsilon
