"""Exception hierarchy.  The class attribute ``exit_code`` drives the CLI."""


class CoxwallsError(Exception):
    exit_code = 1


class ValidationError(CoxwallsError):
    exit_code = 2


class ResourceLimit(CoxwallsError):
    exit_code = 3


class InvariantViolation(CoxwallsError):
    exit_code = 4


class NotSquare(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class BadDiagonal(ValidationError):
    pass


class BadOffDiagonal(ValidationError):
    pass


class NotConnected(ValidationError):
    pass


class OutOfInventory(ValidationError):
    pass


class SameWall(ValidationError):
    pass


class NotNested(ValidationError):
    pass


class InvalidChain(ValidationError):
    pass


class BadParameters(ValidationError):
    pass


class EpsilonUndefined(ValidationError):
    pass


class Not2Spherical(ValidationError):
    pass


class NotPairwiseCrossing(ValidationError):
    pass


class PreconditionFailed(ValidationError):
    pass


class NotFinite(ValidationError):
    pass


class HypothesisViolated(ValidationError):
    def __init__(self, index: int, detail: str = "") -> None:
        super().__init__(f"hypothesis ({index}) violated" + (f": {detail}" if detail else ""))
        self.index = index


class SearchExhausted(ResourceLimit):
    pass
