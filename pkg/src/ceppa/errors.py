"""Exception hierarchy shared by every ceppa module."""


class CeppaError(Exception):
    """Base class for all errors raised by ceppa."""


class UnsupportedType(CeppaError, ValueError):
    pass


class NoNodalVertex(CeppaError, ValueError):
    pass


class IrregularWeight(CeppaError, ValueError):
    pass


class RankMismatch(CeppaError, ValueError):
    pass


class SingularConstantTerm(CeppaError, ArithmeticError):
    pass


class NotNilpotent(CeppaError, ArithmeticError):
    pass


class BudgetExceeded(CeppaError):
    """A build would enumerate more free monomials than the budget allows."""

    def __init__(self, degree: int, count: int, budget: int):
        self.degree = degree
        self.count = count
        self.budget = budget
        super().__init__(
            f"degree {degree} has {count} free monomials, budget is {budget}"
        )


class IncomposableRelation(CeppaError, ValueError):
    pass


class DegreeOverflow(CeppaError, ValueError):
    pass


class NonUniqueTrace(CeppaError):
    pass


class MissingTopDegree(CeppaError):
    pass


class DegeneratePairing(CeppaError):
    pass


class ComplexNotChain(CeppaError):
    pass


class NotADerivation(CeppaError, ValueError):
    pass


class NoSolution(CeppaError):
    pass


class JacobiFailure(CeppaError):
    pass


class InconsistentScaling(CeppaError):
    pass


class NonGenericLambda(CeppaError, ValueError):
    pass


class TheoremViolation(CeppaError):
    """A computed invariant disagrees with the value the theory predicts."""
