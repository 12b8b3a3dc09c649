"""Exception types shared across the engines."""


class TopClosureError(Exception):
    """Base class for every error raised by this package."""


class FactorizationBudgetExceeded(TopClosureError):
    """A cofactor resisted Pollard rho within the configured iteration budget."""

    def __init__(self, cofactor: int, budget: int):
        super().__init__(f"could not factor cofactor {cofactor} within {budget} rho iterations")
        self.cofactor = cofactor
        self.budget = budget


class PrecisionExhausted(TopClosureError):
    """A numerical certificate could not be obtained at the working precision."""

    def __init__(self, message: str, precision: int):
        super().__init__(f"{message} (precision {precision})")
        self.precision = precision


class Refusal(TopClosureError):
    """A prime (or input) is outside the supported domain; scans skip it with the reason."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class WaldschmidtViolation(TopClosureError):
    """r <= s <= 2r failed; this can only come from a detection bug."""
