"""Exception hierarchy.

Everything raised on purpose derives from :class:`PVShortError`; the
value-type errors also derive from :class:`ValueError` so that callers
that only know about the builtin still catch them.
"""


class PVShortError(Exception):
    """Base class for all errors raised by this package."""


class ModulusRangeError(PVShortError, ValueError):
    """Modulus is zero, negative, or above the supported ceiling."""


class NotCoprimeError(PVShortError, ValueError):
    """A residue that must be a unit shares a factor with the modulus."""


class MemoryBudgetError(PVShortError, MemoryError):
    """Discrete-log tables would exceed the configured entry budget."""


class InvalidLabelError(PVShortError, ValueError):
    """Character label does not match the group structure of its modulus."""


class ImprimitiveCharacterError(PVShortError, ValueError):
    """Operation requires a primitive character."""


class HypothesisViolationError(PVShortError, ValueError):
    """Inputs fall outside the regime N <= q**(1 - gamma), 0 <= gamma <= 1/3."""


class RangeTooShortError(PVShortError, ValueError):
    """q**(1/3 + eps) < 5 q**gamma + 6; widen eps or lower gamma."""


class InternalConsistencyError(PVShortError, AssertionError):
    """An algebraic invariant failed; indicates a bug, not a numerical event."""


class OracleFailure(PVShortError, RuntimeError):
    """An exact identity checked inline during a survey did not hold."""


class EmptyRecordsError(PVShortError, ValueError):
    """Plot data was requested for an empty record set."""
