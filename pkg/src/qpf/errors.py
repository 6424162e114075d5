"""Exception hierarchy for the qpf package."""


class QPFError(Exception):
    """Base class for all errors raised by qpf."""


class FieldMismatch(QPFError, TypeError):
    pass


class NotPrimeError(QPFError, ValueError):
    pass


class DivisionByZero(QPFError, ZeroDivisionError):
    pass


class LabelError(QPFError, ValueError):
    """A basis assignment is incomplete or contains an out-of-range digit."""


class LayoutError(QPFError, ValueError):
    pass


class PreconditionError(QPFError, ValueError):
    """An operation was applied to a state that violates its precondition,
    e.g. superposing a register that is not all-zero or running a network
    on dirty ancillas."""


class SliceError(QPFError, ValueError):
    pass


class TooLarge(QPFError, ValueError):
    pass


class CounterOverflow(QPFError, OverflowError):
    pass


class SelectorWidth(QPFError, ValueError):
    pass


class BudgetError(QPFError, RuntimeError):
    pass
