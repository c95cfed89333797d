class MechSpaceException(Exception):
    pass


class ValidationError(MechSpaceException):
    """A scenario precondition failed when the scenario was loaded."""


# measure


class DimensionMismatch(MechSpaceException):
    pass


class DivisionByZero(MechSpaceException):
    pass


class NegativeRoot(MechSpaceException):
    pass


class ParseError(MechSpaceException):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownBase(ParseError):
    pass


# groups


class MembershipViolation(MechSpaceException):
    pass


class NotInExtendedGroup(MechSpaceException):
    pass


# spaces


class DomainError(MechSpaceException):
    pass


class ZeroMass(DomainError):
    pass


class NotSynchronous(DomainError):
    pass


class OnEPlane(DomainError):
    pass


class OutOfInterval(MechSpaceException):
    pass


# dynamics


class TooFewSamples(MechSpaceException):
    pass


class BadInitialData(MechSpaceException):
    pass


class FieldDomainError(MechSpaceException):
    pass


class FrameMismatch(MechSpaceException):
    pass


class NotOriented(MechSpaceException):
    pass


# symplectic


class TangencyViolation(MechSpaceException):
    pass


class NotTimelike(MechSpaceException):
    pass


class ScaleMismatch(MechSpaceException):
    pass
