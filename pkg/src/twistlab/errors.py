"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for bad input
(angles, polytope, dimensions) and :class:`IntegrityError` for numerical
drift or states that cannot occur on the Deroin-Tholozan locus.  The CLI maps
them to exit codes 2 and 3.
"""


class TwistlabError(Exception):
    pass


class ValidationError(TwistlabError, ValueError):
    pass


class IntegrityError(TwistlabError, ArithmeticError):
    pass


class NotElliptic(TwistlabError, ValueError):
    pass


class UnsupportedCurve(ValidationError):
    pass


class AnglesConditionViolated(ValidationError):
    pass


class PolytopeViolation(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class EmptySample(ValidationError):
    pass


class NumericalFailure(IntegrityError):
    pass


class DichotomyViolated(IntegrityError):
    pass


class NotTotallyElliptic(IntegrityError):
    pass


class TotalEllipticityViolation(IntegrityError):
    pass


class DegenerateOrbit(IntegrityError):
    def __init__(self, message, case=None):
        super().__init__(message)
        self.case = case
