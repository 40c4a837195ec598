"""Exception hierarchy for the exact lattice toolkit."""


class LatticeError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrix(LatticeError):
    """An operation required a nonzero determinant and got zero."""


class RankDeficient(LatticeError):
    """Input matrix does not have the full rank the operation needs."""


class BothZero(LatticeError):
    """gcd/Bezout of (0, 0) is undefined."""


class HypothesisViolated(LatticeError):
    """A stated arithmetic precondition (e.g. coprimality) does not hold."""


class TooLarge(LatticeError):
    """Argument exceeds the documented cap for an exhaustive computation."""


class DimensionTooSmall(LatticeError):
    """Strict mode requires dimension at least 8."""


class NoSolution(LatticeError):
    """A system of congruences or equations has no solution."""


class BudgetExceeded(LatticeError):
    """Enumeration exhausted its node budget before certifying an answer."""

    def __init__(self, budget: int, nodes: int):
        super().__init__(f"enumeration budget exhausted: {nodes} nodes, budget {budget}")
        self.budget = budget
        self.nodes = nodes


class ModeUnavailable(LatticeError):
    """The requested oracle mode cannot run on this input (e.g. size cap)."""


class TargetDenominatorTooLarge(LatticeError):
    """CVP target has a least common denominator above the instance bound k."""


class ShiftSearchExhausted(LatticeError):
    """Coprime-perturbation scan hit its safety cap; diagnostic payload attached."""

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class InstanceError(LatticeError):
    """A problem instance violates one of its declared invariants."""
