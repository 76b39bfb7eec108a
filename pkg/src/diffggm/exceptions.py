"""Exception and warning types raised across the package."""


class DiffggmError(Exception):
    """Base class for all errors raised by diffggm."""


class NonFinite(DiffggmError):
    """A dataset contains NaN or infinite entries."""


class UnbalancedDesign(DiffggmError):
    """The two conditions do not have the same number of samples."""


class ConstantColumn(DiffggmError):
    """A variable has zero variance and cannot be standardized."""

    def __init__(self, name: str):
        super().__init__(f"column {name!r} is constant; cannot standardize")
        self.name = name


class CsvFormatError(DiffggmError):
    """A CSV file does not follow the expected header+float-rows layout."""


class SelfEdgeViolation(DiffggmError):
    """A coefficient pair has a nonzero entry at its own node index."""


class SelfBlock(DiffggmError):
    """A partial residual was requested for the response node itself."""


class DidNotConverge(DiffggmError):
    """Coordinate descent hit the sweep limit before converging.

    Carries the partial solution so callers can inspect or accept it.
    """

    def __init__(self, solution):
        super().__init__(
            f"node {solution.node_index} did not converge within "
            f"{solution.sweeps_used} sweeps"
        )
        self.solution = solution


class MissingNode(DiffggmError):
    """A network was assembled from an incomplete set of node solutions."""


class UnknownExperiment(DiffggmError):
    """Requested built-in experiment name does not exist."""


class FoldTooSmall(DiffggmError):
    """A cross-validation fold has fewer than two samples."""


class DegenerateCorrelation(UserWarning):
    """A pairwise correlation was at (or numerically beyond) +/-1 and was clamped."""
