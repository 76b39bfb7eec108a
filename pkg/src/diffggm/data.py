"""Data model, standardization, and objective evaluation.

The estimation problem regresses each variable on all others under two
experimental conditions at once.  Columns are centered and scaled to unit
Euclidean length (not unit variance), so inner products between columns are
sample correlations up to a shared convention, and the all-zero coefficient
vector has loss exactly 1 per condition.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import (
    ConstantColumn,
    CsvFormatError,
    NonFinite,
    SelfEdgeViolation,
    UnbalancedDesign,
)

MEAN_TOL = 1e-10
NORM_TOL = 1e-10


@dataclass(frozen=True)
class RawDataset:
    """Samples observed under a single condition.

    ``values`` is an (n_samples, n_variables) matrix, one column per variable.
    At least 4 samples are required (the regularization heuristics divide by
    sqrt((N-3)/2)) and at least 2 variables.
    """

    values: np.ndarray
    variable_names: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "variable_names", tuple(self.variable_names))
        if values.ndim != 2:
            raise ValueError("values must be a 2-D samples-by-variables matrix")
        n, p = values.shape
        if n < 4:
            raise ValueError(f"need at least 4 samples, got {n}")
        if p < 2:
            raise ValueError(f"need at least 2 variables, got {p}")
        if len(self.variable_names) != p:
            raise ValueError(
                f"{len(self.variable_names)} names for {p} columns"
            )
        if len(set(self.variable_names)) != p:
            raise ValueError("variable names must be unique")
        if not np.all(np.isfinite(values)):
            raise NonFinite("dataset contains NaN or infinite entries")

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_variables(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class StandardizedDataset:
    """Paired per-condition matrices with centered, unit-length columns.

    Immutable after construction (backing arrays are marked read-only), so a
    single instance can be shared freely across concurrent per-node solves.
    """

    cond1: np.ndarray
    cond2: np.ndarray
    variable_names: tuple[str, ...]

    def __post_init__(self):
        cond1 = np.array(self.cond1, dtype=np.float64, order="F")
        cond2 = np.array(self.cond2, dtype=np.float64, order="F")
        cond1.flags.writeable = False
        cond2.flags.writeable = False
        object.__setattr__(self, "cond1", cond1)
        object.__setattr__(self, "cond2", cond2)
        object.__setattr__(self, "variable_names", tuple(self.variable_names))
        if cond1.shape != cond2.shape:
            raise UnbalancedDesign(
                f"condition shapes differ: {cond1.shape} vs {cond2.shape}"
            )
        if len(self.variable_names) != cond1.shape[1]:
            raise ValueError("one name per column required")
        for label, mat in (("condition 1", cond1), ("condition 2", cond2)):
            means = mat.mean(axis=0)
            sqnorms = np.einsum("ij,ij->j", mat, mat)
            if np.any(np.abs(means) > MEAN_TOL):
                raise ValueError(f"{label}: columns are not centered")
            if np.any(np.abs(sqnorms - 1.0) > NORM_TOL):
                raise ValueError(f"{label}: columns do not have unit length")

    @property
    def n_samples(self) -> int:
        return self.cond1.shape[0]

    @property
    def n_variables(self) -> int:
        return self.cond1.shape[1]


@dataclass(frozen=True)
class CoefficientPair:
    """Fitted coefficient vectors (one per condition) for a single node.

    The entry at ``node_index`` must be exactly zero in both vectors: a node
    never regresses on itself.
    """

    beta1: np.ndarray
    beta2: np.ndarray
    node_index: int

    def __post_init__(self):
        beta1 = np.array(self.beta1, dtype=np.float64)
        beta2 = np.array(self.beta2, dtype=np.float64)
        beta1.flags.writeable = False
        beta2.flags.writeable = False
        object.__setattr__(self, "beta1", beta1)
        object.__setattr__(self, "beta2", beta2)
        if beta1.shape != beta2.shape or beta1.ndim != 1:
            raise ValueError("beta1 and beta2 must be 1-D vectors of equal length")
        if not 0 <= self.node_index < beta1.shape[0]:
            raise ValueError("node_index out of range")
        if beta1[self.node_index] != 0.0 or beta2[self.node_index] != 0.0:
            raise SelfEdgeViolation(
                f"coefficient at node {self.node_index} must be exactly zero"
            )


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty weights: ``lambda1`` on coefficient magnitudes, ``lambda2`` on
    between-condition coefficient differences.  ``alpha`` records the
    significance level used to derive lambda2, when applicable."""

    lambda1: float
    lambda2: float
    alpha: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.lambda1) and self.lambda1 >= 0.0):
            raise ValueError(f"lambda1 must be >= 0, got {self.lambda1}")
        if not (np.isfinite(self.lambda2) and self.lambda2 >= 0.0):
            raise ValueError(f"lambda2 must be >= 0, got {self.lambda2}")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")


def standardize_columns(matrix: np.ndarray, names=None) -> np.ndarray:
    """Center each column and scale it to unit Euclidean length.

    ``names`` is used only for error reporting; a column whose values are all
    identical raises ConstantColumn.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if not np.all(np.isfinite(matrix)):
        raise NonFinite("matrix contains NaN or infinite entries")
    centered = matrix - matrix.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", centered, centered))
    flat = np.ptp(matrix, axis=0) == 0.0
    if np.any(flat) or np.any(norms == 0.0):
        idx = int(np.argmax(flat | (norms == 0.0)))
        name = names[idx] if names is not None else str(idx)
        raise ConstantColumn(name)
    return centered / norms


def standardize(raw1: RawDataset, raw2: RawDataset) -> StandardizedDataset:
    """Jointly standardize the two conditions of a balanced design.

    Raises UnbalancedDesign if sample counts differ, ConstantColumn for a
    zero-variance column, NonFinite for bad entries.  Variable names and
    ordering must agree between conditions.
    """
    if raw1.variable_names != raw2.variable_names:
        raise ValueError("the two conditions must share variable names and order")
    if raw1.n_samples != raw2.n_samples:
        raise UnbalancedDesign(
            f"{raw1.n_samples} samples under condition 1 but "
            f"{raw2.n_samples} under condition 2"
        )
    return StandardizedDataset(
        cond1=standardize_columns(raw1.values, raw1.variable_names),
        cond2=standardize_columns(raw2.values, raw2.variable_names),
        variable_names=raw1.variable_names,
    )


def objective_value(
    data: StandardizedDataset,
    j: int,
    beta: CoefficientPair,
    pen: PenaltyConfig,
) -> float:
    """Penalized least-squares objective for node ``j``.

    Computed block-wise: the residual for each condition uses only that
    condition's matrix and coefficient vector, which is equivalent to the
    stacked formulation because the two conditions never mix columns.
    """
    if beta.node_index != j:
        raise ValueError(f"coefficients are for node {beta.node_index}, not {j}")
    if beta.beta1[j] != 0.0 or beta.beta2[j] != 0.0:
        raise SelfEdgeViolation(f"nonzero self-coefficient at node {j}")
    r1 = data.cond1[:, j] - data.cond1 @ beta.beta1
    r2 = data.cond2[:, j] - data.cond2 @ beta.beta2
    loss = 0.5 * (r1 @ r1 + r2 @ r2)
    l1 = np.abs(beta.beta1).sum() + np.abs(beta.beta2).sum()
    fused = np.abs(beta.beta1 - beta.beta2).sum()
    return float(loss + pen.lambda1 * l1 + pen.lambda2 * fused)


def read_csv(path: str | Path) -> RawDataset:
    """Load one condition from CSV: header row of names, then float rows."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: file is empty") from None
        names = tuple(name.strip() for name in header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(names):
                raise CsvFormatError(
                    f"{path}:{lineno}: expected {len(names)} fields, got {len(row)}"
                )
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise CsvFormatError(f"{path}: no sample rows")
    return RawDataset(values=np.array(rows, dtype=np.float64), variable_names=names)


def write_csv(path: str | Path, dataset: RawDataset) -> None:
    """Write a dataset in the same CSV layout read_csv expects.

    Floats are serialized with repr (shortest round-trip form), so identical
    datasets produce byte-identical files.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.variable_names)
        for row in dataset.values:
            writer.writerow([repr(float(x)) for x in row])
