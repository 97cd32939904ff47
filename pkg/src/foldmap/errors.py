"""Exception hierarchy shared across the package.

Two families: precondition violations (bad caller input, CLI exit code 2)
and structural failures (an invariant the math guarantees did not hold at
runtime, CLI exit code 3).
"""


class FoldmapError(Exception):
    """Base class for all package-specific errors."""


class PreconditionError(FoldmapError, ValueError):
    """An argument violates a documented precondition."""


class PrecisionError(PreconditionError):
    """Requested computation exceeds the double-precision reliability bound."""


class WordNotFoundError(PreconditionError):
    """Search exhausted max_len without reaching the target; enlarge and retry."""


class StructuralError(FoldmapError, RuntimeError):
    """A guaranteed structural property failed to materialize."""


class WindowError(StructuralError):
    """A trajectory or label left the materialized graph window."""


class ClassBoundaryError(StructuralError):
    """An orbit value sits on a vertex-class boundary within tolerance."""


class LemmaViolationError(StructuralError):
    """An exhaustive search contradicted a guaranteed existence claim."""
