"""Error types raised by the lab. Verification failures are report entries, not exceptions."""


class LabError(ValueError):
    """Base class for every error the CLI maps to exit code 2."""


class ConfigError(LabError):
    pass


class SpecParseError(LabError):
    pass


class CapExceededError(LabError):
    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds configured cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InsufficientParamsError(LabError):
    pass


class CapacityError(LabError):
    pass


class UnsupportedBaseError(LabError):
    pass


class InfeasibleRegimeError(LabError):
    pass


class InadmissibleInstanceError(LabError):
    pass


class NonZeroBlockSumError(LabError):
    pass


class LengthMismatchError(LabError):
    pass


class BudgetError(LabError):
    pass
