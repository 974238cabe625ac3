# backend/app/core/exceptions.py
"""
Error Hierarchy

Every failure the library reports carries a stable ``code`` (used verbatim in
JSON output) and the process exit code the CLI maps it to.
"""

from typing import Optional


class AbvarError(Exception):
    """Base class for all reported failures"""
    code: str = "Error"
    exit_code: int = 1
    status: str = "error"

    def __init__(self, message: str = "", code: Optional[str] = None):
        super().__init__(message or self.__class__.__name__)
        if code is not None:
            self.code = code

    @property
    def detail(self) -> str:
        return str(self)


# Invalid input (exit 2)

class InvalidInputError(AbvarError):
    code = "InvalidInput"
    exit_code = 2
    status = "invalid"


class NotMonic(InvalidInputError):
    code = "NotMonic"


class BadDegreeParity(InvalidInputError):
    code = "BadDegreeParity"


class SymmetryViolated(InvalidInputError):
    code = "SymmetryViolated"


class RootModulusViolated(InvalidInputError):
    code = "RootModulusViolated"


class NotPrimePower(InvalidInputError):
    code = "NotPrimePower"


class NotPrimePowerShape(InvalidInputError):
    code = "NotPrimePowerShape"


class SingularMatrix(InvalidInputError):
    code = "SingularMatrix"


class ZeroIdeal(InvalidInputError):
    code = "ZeroIdeal"


class ZeroElement(InvalidInputError):
    code = "ZeroElement"


class NotARing(InvalidInputError):
    code = "NotARing"


class NotFullRank(InvalidInputError):
    code = "NotFullRank"


class InvalidChain(InvalidInputError):
    code = "InvalidChain"


class CurveSingular(InvalidInputError):
    code = "CurveSingular"


# Hypotheses of the structure theorems (exit 1)

class HypothesisNotMet(AbvarError):
    """A named precondition of a structure statement failed"""
    code = "HypothesisNotMet"
    exit_code = 1
    status = "hypothesis_not_met"

    def __init__(self, check: str, message: str = ""):
        super().__init__(message or check)
        self.check = check


class SeparabilityUnknown(HypothesisNotMet):
    code = "SeparabilityUnknown"

    def __init__(self, message: str = ""):
        super().__init__("SeparabilityUnknown", message)


class NotCoprime(HypothesisNotMet):
    code = "NotCoprime"

    def __init__(self, message: str = ""):
        super().__init__("NotCoprime", message)


class NotInvertiblePrime(HypothesisNotMet):
    code = "NotInvertiblePrime"

    def __init__(self, message: str = ""):
        super().__init__("NotInvertiblePrime", message)


class ResidueCharacteristicP(HypothesisNotMet):
    code = "ResidueCharacteristicP"

    def __init__(self, message: str = ""):
        super().__init__("ResidueCharacteristicP", message)


class OutOfTheoremScope(HypothesisNotMet):
    code = "OutOfTheoremScope"

    def __init__(self, message: str = ""):
        super().__init__("OutOfTheoremScope", message)


# Resource caps (exit 3)

class ResourceCapError(AbvarError):
    code = "ResourceCap"
    exit_code = 3
    status = "resource_cap"


class FieldTooLarge(ResourceCapError):
    code = "FieldTooLarge"


class FactorTooLarge(ResourceCapError):
    code = "FactorTooLarge"


class IndexCapExceeded(ResourceCapError):
    code = "IndexCapExceeded"


class DegreeCapExceeded(ResourceCapError):
    code = "DegreeCapExceeded"


class BadPrime(ResourceCapError):
    code = "BadPrime"


# Internal cross-checks

class ConsistencyError(AbvarError):
    """Two independent computations disagreed; this is a bug, not an input problem"""
    code = "ConsistencyError"
    exit_code = 1
    status = "internal_error"
