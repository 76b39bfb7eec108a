"""Data-driven selection of the two penalty weights.

lambda1 comes from K-fold cross-validation of the lambda2 = 0 problem, which
separates into an ordinary lasso per condition.  lambda2 comes from a
significance argument on the difference of Fisher-transformed correlations:
a coefficient pair is fused exactly when the correlation gap is within what
sampling noise would explain at level alpha.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .data import StandardizedDataset, standardize_columns
from .exceptions import DegenerateCorrelation, FoldTooSmall
from .solver import _fit_gram

CORRELATION_CLAMP = 1.0 - 1e-6
DEFAULT_GRID_LENGTH = 20


@dataclass(frozen=True)
class Lambda2Heuristic:
    """Outcome of the significance-based lambda2 rule.

    ``s`` is the significance threshold on the Fisher z scale,
    Phi^{-1}(1 - alpha/2) / sqrt((N - 3) / 2); ``chosen`` is
    (e^{2s} - 1) / (2 e^{2s} + 2) * (1 - mean_rho_product).
    """

    alpha: float
    s: float
    mean_rho_product: float
    chosen: float
    n_clamped: int = 0


@dataclass(frozen=True)
class Lambda1Selection:
    """Cross-validation curve and the selected lambda1.

    ``fold_errors`` has shape (folds, len(grid), 2): squared prediction error
    summed over nodes, per fold, grid point, and condition.
    """

    grid: np.ndarray
    mean_errors: np.ndarray
    se_errors: np.ndarray
    chosen: float
    folds: int
    fold_errors: np.ndarray


def fisher_z(rho):
    """Fisher transform arctanh(rho) = 0.5 * ln((1 + rho) / (1 - rho)).

    Inputs are clamped to magnitude 1 - 1e-6 so the transform stays finite
    for numerically degenerate correlations.  Accepts scalars or arrays.
    """
    clipped = np.clip(rho, -CORRELATION_CLAMP, CORRELATION_CLAMP)
    out = np.arctanh(clipped)
    return float(out) if np.isscalar(rho) else out


def lambda2_from_stats(
    n_samples: int, alpha: float, mean_rho_product: float
) -> Lambda2Heuristic:
    """Evaluate the lambda2 rule given the summary statistics directly."""
    if n_samples < 4:
        raise ValueError("need at least 4 samples per condition")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    quantile = NormalDist().inv_cdf(1.0 - alpha / 2.0)
    s = quantile / math.sqrt((n_samples - 3) / 2.0)
    # (e^{2s} - 1) / (2 e^{2s} + 2) == tanh(s) / 2, which is stabler to evaluate.
    chosen = 0.5 * math.tanh(s) * (1.0 - mean_rho_product)
    return Lambda2Heuristic(
        alpha=alpha, s=s, mean_rho_product=mean_rho_product, chosen=chosen
    )


def correlation_matrices(
    data: StandardizedDataset,
) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise sample correlations per condition (Gram of unit columns)."""
    return data.cond1.T @ data.cond1, data.cond2.T @ data.cond2


def select_lambda2(data: StandardizedDataset, alpha: float = 0.01) -> Lambda2Heuristic:
    """Pick lambda2 from the data via the Fisher-transform significance rule.

    The product-of-correlations term is averaged over all unordered variable
    pairs: mean over j < l of corr1(j, l) * corr2(j, l).  Correlations at or
    beyond +/-(1 - 1e-6) are clamped and reported with a
    DegenerateCorrelation warning.
    """
    if data.n_samples < 4:
        raise ValueError("need at least 4 samples per condition")
    c1, c2 = correlation_matrices(data)
    iu = np.triu_indices(data.n_variables, k=1)
    r1 = c1[iu]
    r2 = c2[iu]
    n_clamped = int(np.sum(np.abs(r1) > CORRELATION_CLAMP)) + int(
        np.sum(np.abs(r2) > CORRELATION_CLAMP)
    )
    if n_clamped:
        warnings.warn(
            f"{n_clamped} pairwise correlation(s) at magnitude >= 1 - 1e-6 "
            "were clamped",
            DegenerateCorrelation,
            stacklevel=2,
        )
        r1 = np.clip(r1, -CORRELATION_CLAMP, CORRELATION_CLAMP)
        r2 = np.clip(r2, -CORRELATION_CLAMP, CORRELATION_CLAMP)
    mean_rho_product = float(np.mean(r1 * r2))
    base = lambda2_from_stats(data.n_samples, alpha, mean_rho_product)
    return Lambda2Heuristic(
        alpha=base.alpha,
        s=base.s,
        mean_rho_product=base.mean_rho_product,
        chosen=base.chosen,
        n_clamped=n_clamped,
    )


def lambda1_grid(data: StandardizedDataset, length: int = DEFAULT_GRID_LENGTH) -> np.ndarray:
    """Descending log-spaced lambda1 candidates.

    Starts at the smallest value that zeroes every coefficient (the largest
    absolute off-diagonal correlation under either condition) and ends two
    decades below it.
    """
    if length < 2:
        raise ValueError("grid needs at least 2 points")
    c1, c2 = correlation_matrices(data)
    off = ~np.eye(data.n_variables, dtype=bool)
    lam_max = float(max(np.abs(c1[off]).max(), np.abs(c2[off]).max()))
    return np.geomspace(lam_max, 0.01 * lam_max, length)


def select_lambda1_cv(
    data: StandardizedDataset,
    folds: int = 10,
    grid: np.ndarray | None = None,
    seed: int = 0,
    one_se_rule: bool = False,
    tolerance: float = 1e-6,
    max_sweeps: int = 1000,
) -> Lambda1Selection:
    """Choose lambda1 by K-fold cross-validation at lambda2 = 0.

    Folds are contiguous chunks of a seeded shuffle of the sample indices,
    shared between conditions.  Train and held-out portions are each
    re-standardized; the error is the squared prediction error of every
    node's regression on the held-out portion, summed over both conditions.
    The minimum-mean-error grid point wins (the largest such lambda1 on
    ties); ``one_se_rule`` instead picks the largest lambda1 within one
    standard error of the minimum.
    """
    if folds < 2:
        raise ValueError("need at least 2 folds")
    n = data.n_samples
    if n // folds < 2:
        raise FoldTooSmall(f"{folds} folds over {n} samples leave folds below 2")
    if grid is None:
        grid = lambda1_grid(data)
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(np.diff(grid) >= 0.0):
        raise ValueError("grid must be strictly decreasing")

    p = data.n_variables
    rng = np.random.default_rng(seed)
    chunks = np.array_split(rng.permutation(n), folds)
    fold_errors = np.zeros((folds, len(grid), 2))

    for f, test_idx in enumerate(chunks):
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        tr1 = standardize_columns(data.cond1[mask])
        tr2 = standardize_columns(data.cond2[mask])
        te1 = standardize_columns(data.cond1[test_idx])
        te2 = standardize_columns(data.cond2[test_idx])
        g1 = tr1.T @ tr1
        g2 = tr2.T @ tr2
        warm1 = np.zeros((p, p))
        warm2 = np.zeros((p, p))
        for gi, lam in enumerate(grid):
            for j in range(p):
                b1, b2, _, _, _ = _fit_gram(
                    g1, g2, j, lam, 0.0, tolerance, max_sweeps,
                    warm1[j], warm2[j],
                )
                warm1[j] = b1
                warm2[j] = b2
                e1 = te1[:, j] - te1 @ b1
                e2 = te2[:, j] - te2 @ b2
                fold_errors[f, gi, 0] += e1 @ e1
                fold_errors[f, gi, 1] += e2 @ e2

    totals = fold_errors.sum(axis=2)
    mean_errors = totals.mean(axis=0)
    se_errors = totals.std(axis=0, ddof=1) / math.sqrt(folds)
    best = int(np.argmin(mean_errors))
    if one_se_rule:
        cutoff = mean_errors[best] + se_errors[best]
        best = int(np.argmax(mean_errors <= cutoff))
    return Lambda1Selection(
        grid=grid,
        mean_errors=mean_errors,
        se_errors=se_errors,
        chosen=float(grid[best]),
        folds=folds,
        fold_errors=fold_errors,
    )
