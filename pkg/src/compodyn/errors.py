"""Exception hierarchy shared across the package."""


class CompodynError(Exception):
    """Base class for all package-specific errors."""


class UsageError(CompodynError, ValueError):
    """Arguments violate an operation's contract (order mismatch, wrong symbol kind, ...)."""


class ChainingError(CompodynError, ValueError):
    """Jet base points do not line up for composition."""


class CriticalPointError(CompodynError, ArithmeticError):
    """First derivative below the floor; inverse jet undefined."""


class OutOfRangeError(CompodynError, ArithmeticError):
    """Requested preimage lies outside the symbol's range (bracket expansion failed)."""


class InfeasibleExtensionError(CompodynError, ValueError):
    """No strictly increasing blend exists for the requested endpoint data."""


class SeedInfeasibleError(CompodynError, ArithmeticError):
    """Junction jets force a non-monotone seed; retry with other parameters."""


class ScheduleInfeasibleError(CompodynError, ArithmeticError):
    """Schedule search exceeded the iteration cap."""


class ScheduleCorruptError(CompodynError, ValueError):
    """Transported supports overlap; the schedule does not separate targets."""


class UnboundedTailError(CompodynError, ArithmeticError):
    """No truncation radius achieves the tail tolerance for this seminorm."""
