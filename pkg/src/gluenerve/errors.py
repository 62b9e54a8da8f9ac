"""Exception hierarchy shared by every module."""


class GlueError(Exception):
    """Base class. ``witness`` carries the offending data when there is one."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class UsageError(GlueError):
    """Malformed input: wrong shapes, unknown ids, bad documents."""


class MathematicalFailure(GlueError):
    """A checked property turned out false."""


class CycleDetected(UsageError):
    pass


class DuplicateElement(UsageError):
    pass


class UnknownElement(UsageError):
    pass


class UnknownObject(UsageError):
    pass


class InvalidSquare(UsageError):
    pass


class NotComparable(UsageError):
    pass


class SizeBudgetExceeded(UsageError):
    pass


class BaseMismatch(UsageError):
    pass


class NotInner(UsageError):
    pass


class NotSubcomplex(UsageError):
    pass


class NotAChain(UsageError):
    pass


class OutOfRange(UsageError):
    pass


class ShapeMismatch(UsageError):
    pass


class UnsupportedType(UsageError):
    pass


class IllTypedComposite(UsageError):
    pass


class MissingIdentity(UsageError):
    pass


class NotAssociative(MathematicalFailure):
    pass


class NotCommuting(UsageError):
    pass


class MoveInvalid(MathematicalFailure):
    pass


class CertificateInvalid(MathematicalFailure):
    pass


class HypothesisFailed(MathematicalFailure):
    """``name`` identifies the failing hypothesis."""

    def __init__(self, name, message="", witness=None):
        super().__init__(message or f"hypothesis {name!r} fails", witness)
        self.name = name


class MissingPullback(MathematicalFailure):
    pass


class MissingLimit(MathematicalFailure):
    pass


class GapNotInBothClasses(MathematicalFailure):
    pass


class NotFunctorial(MathematicalFailure):
    pass


class EdgeClassViolation(MathematicalFailure):
    def __init__(self, direction, edge, message=""):
        super().__init__(message or f"direction {direction} edge {edge} outside its class", edge)
        self.direction = direction


class TilingViolation(MathematicalFailure):
    pass
