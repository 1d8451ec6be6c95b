"""Exception types shared across the toolkit."""


class GraphFormatError(ValueError):
    """Raised when an edge-list file or graph construction input is malformed."""


class NoPathError(ValueError):
    """Raised when a path witness is requested for a disconnected vertex pair."""


class PartitionError(ValueError):
    """Raised when an operation receives a partition that fails validation.

    The message carries the first violated invariant, as reported by
    ``validate_partition``.
    """


class InvariantViolation(RuntimeError):
    """An internal structural guarantee failed; indicates a bug or bad input."""


class IterationLimitError(RuntimeError):
    """Ball growing exceeded its outer-iteration cap.

    Almost-sure termination is guarded by a generous cap; hitting it points at
    a pathological RNG stream or an unreachable vertex.  The partial cell
    state is attached for diagnosis.
    """

    def __init__(self, message: str, cells=None, iterations: int = 0):
        super().__init__(message)
        self.cells = cells
        self.iterations = iterations


class NoSeparatingGap(ValueError):
    """No empty power-of-two window separates the terminal distances.

    Callers should treat this as "the bounded-aspect-ratio regime applies"
    and fall back to the direct partitioner.
    """


class RecursionDepthExceeded(RuntimeError):
    """Scale-reduction recursion ran deeper than the terminal count allows."""


class AmplificationError(RuntimeError):
    """Every amplification trial failed; no usable minor was produced."""
