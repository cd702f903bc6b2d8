"""Exception hierarchy shared by every module of the package."""


class NablaError(Exception):
    """Base class for all errors raised by nablacipher."""


class RangeError(NablaError, ValueError):
    """A value does not fit its declared bit length."""


class LengthMismatch(NablaError, ValueError):
    """Two sequences that must be aligned have different lengths."""


class InvalidNabla(NablaError, ValueError):
    """A radix schedule is empty, not strictly decreasing, or does not end in 1."""


class InvalidKey(NablaError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid key: " + "; ".join(self.violations))


class IntegrityError(NablaError):
    """An exact division failed during decryption.

    ``index`` is the 1-based coordinate where the check failed (0 for the
    final division by ``p0``) and ``stage`` names the multiplier involved.
    """

    def __init__(self, index: int, stage: str):
        self.index = index
        self.stage = stage
        super().__init__(f"integrity check failed at index {index} ({stage})")


class ParameterError(NablaError, ValueError):
    """Key generation parameters cannot be satisfied."""


class BudgetExceeded(NablaError):
    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"keyspace has {size} candidates, budget is {budget}")


class FormatError(NablaError, ValueError):
    """A key or ciphertext file is malformed."""


class UsageError(NablaError):
    """Missing or contradictory command-line flags."""
