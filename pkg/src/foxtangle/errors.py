"""Exception hierarchy shared by all foxtangle modules."""


class FoxTangleError(Exception):
    """Base class for every error raised by this package."""


class BadModulus(FoxTangleError, ValueError):
    pass


class TrivialVector(FoxTangleError, ValueError):
    """Raised when an operation needs a vector with two distinct entries."""


class LengthMismatch(FoxTangleError, ValueError):
    pass


class IndexOutOfRange(FoxTangleError, IndexError):
    pass


class StrandMismatch(FoxTangleError, ValueError):
    pass


class RequiresMAtLeast2(FoxTangleError, ValueError):
    pass


class DeltaNonZero(FoxTangleError, ValueError):
    pass


class NotEquivalent(FoxTangleError, ValueError):
    """The two vectors lie in different Hurwitz orbits."""


class BudgetExhausted(FoxTangleError, RuntimeError):
    """A bounded search ran out of budget before producing a witness."""


class MalformedDiagram(FoxTangleError, ValueError):
    pass


class ArcMismatch(FoxTangleError, ValueError):
    pass


class InvalidColoring(FoxTangleError, ValueError):
    pass


class DiagramMismatch(FoxTangleError, ValueError):
    pass


class InconsistentSeed(FoxTangleError, ValueError):
    """A closure arc would join two endpoints of different colors."""


class MalformedRecipe(FoxTangleError, ValueError):
    pass


class TrivialBoundary(FoxTangleError, ValueError):
    pass


class NotRealizable(FoxTangleError, ValueError):
    pass
