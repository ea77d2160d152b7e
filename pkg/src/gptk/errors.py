"""Exception hierarchy shared by all gptk modules."""


class GptkError(Exception):
    """Base class for all gptk errors."""


class InputError(GptkError):
    """Malformed or inconsistent caller input (dimension mismatches, bad files)."""


class StructureError(GptkError):
    """A structural invariant of a domain object is violated (redundant tests,
    unbounded state sets, non-algebraic test spaces where algebraicity is required)."""


class ResourceLimitError(GptkError):
    """A combinatorial enumeration exceeded its configured cap."""


class ConsistencyError(GptkError):
    """An internal well-definedness audit failed.  These audits re-check facts
    that hold by theorem; a failure indicates a bug and must never be silenced."""
