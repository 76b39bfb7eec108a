"""Per-node block coordinate descent and whole-graph fitting.

For a node j the solver cycles through the coefficient pairs
(beta1[k], beta2[k]), k != j, in ascending order, solving each pair's
two-variable fused soft-thresholding problem in closed form against the
current partial residual.  Starting point is always zero unless a warm start
is supplied.

Internally the solver works on the Gram matrices G_c = X_c^T X_c instead of
explicit residual vectors: the correlation of column k with the partial
residual is G_c[k, j] - (G_c b_c)[k] + G_c[k, k] * b_c[k], and the running
products G_c b_c are updated incrementally only when a coefficient actually
moves.  A block update is therefore O(p) at worst and O(1) when the block is
unchanged (the common case on sparse paths), and one pair of Gram matrices
serves every node, which keeps cross-validation over a full penalty path
cheap.  Equivalence with literal residual recomputation is pinned by tests.

The sweep loop is numba-compiled; a pure-Python twin of the loop runs when
per-update objective tracking is requested and asserts monotone descent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .data import CoefficientPair, PenaltyConfig, StandardizedDataset, objective_value
from .exceptions import DidNotConverge, SelfBlock
from .fusedpair import _solve

DESCENT_SLACK = 1e-12


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-6
    max_sweeps: int = 1000
    track_objective: bool = False

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


@dataclass(frozen=True)
class NodeSolution:
    """Result of one node's regression.

    ``objective_trace`` holds the objective value after every block update
    when tracking was requested, else None.
    """

    node_index: int
    coefficients: CoefficientPair
    objective: float
    sweeps_used: int
    converged: bool
    objective_trace: tuple[float, ...] | None = None


def gram_matrices(data: StandardizedDataset) -> tuple[np.ndarray, np.ndarray]:
    """Per-condition Gram (equivalently correlation) matrices X_c^T X_c."""
    return data.cond1.T @ data.cond1, data.cond2.T @ data.cond2


def partial_residual(
    data: StandardizedDataset,
    j: int,
    beta: CoefficientPair,
    k: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Residual of node j's response with block k's contribution excluded.

    Returns the condition-1 and condition-2 parts separately; stacking them
    gives the full response residual against all blocks l not in {j, k}.
    """
    if k == j:
        raise SelfBlock(f"block {k} is the response node")
    r1 = data.cond1[:, j] - data.cond1 @ beta.beta1 + data.cond1[:, k] * beta.beta1[k]
    r2 = data.cond2[:, j] - data.cond2 @ beta.beta2 + data.cond2[:, k] * beta.beta2[k]
    return r1, r2


@njit(cache=True)
def _cd_kernel(g1, g2, c1, c2, d1, d2, j, lam1, lam2, tol, max_sweeps, b1, b2, u1, u2):
    """Cyclic sweeps until the largest coefficient change drops below tol.

    Mutates b and u in place; returns (sweeps_used, converged).
    """
    p = b1.shape[0]
    sweeps = 0
    converged = False
    for _ in range(max_sweeps):
        sweeps += 1
        max_delta = 0.0
        for k in range(p):
            if k == j:
                continue
            old1 = b1[k]
            old2 = b2[k]
            rho1 = c1[k] - u1[k] + d1[k] * old1
            rho2 = c2[k] - u2[k] + d2[k] * old2
            new1, new2, _ = _solve(rho1, rho2, lam1, lam2)
            delta1 = new1 - old1
            if delta1 != 0.0:
                for i in range(p):
                    u1[i] += g1[i, k] * delta1
                b1[k] = new1
                if abs(delta1) > max_delta:
                    max_delta = abs(delta1)
            delta2 = new2 - old2
            if delta2 != 0.0:
                for i in range(p):
                    u2[i] += g2[i, k] * delta2
                b2[k] = new2
                if abs(delta2) > max_delta:
                    max_delta = abs(delta2)
        if max_delta < tol:
            converged = True
            break
    return sweeps, converged


def _block_energy(b1, b2, rho1, rho2, q1, q2, lam1, lam2):
    """Terms of the objective that depend on one block, up to a constant."""
    return (
        0.5 * (q1 * b1 * b1 + q2 * b2 * b2)
        - rho1 * b1
        - rho2 * b2
        + lam1 * (abs(b1) + abs(b2))
        + lam2 * abs(b1 - b2)
    )


def _tracked_sweeps(g1, g2, c1, c2, d1, d2, j, lam1, lam2, tol, max_sweeps,
                    b1, b2, u1, u2):
    """Pure-Python twin of _cd_kernel that records the objective after every
    block update and asserts it never increases."""
    p = b1.shape[0]
    loss1 = 0.5 * (d1[j] - 2.0 * (c1 @ b1) + b1 @ u1)
    loss2 = 0.5 * (d2[j] - 2.0 * (c2 @ b2) + b2 @ u2)
    running = float(
        loss1
        + loss2
        + lam1 * (np.abs(b1).sum() + np.abs(b2).sum())
        + lam2 * np.abs(b1 - b2).sum()
    )
    trace: list[float] = []
    sweeps = 0
    converged = False
    for _ in range(max_sweeps):
        sweeps += 1
        max_delta = 0.0
        for k in range(p):
            if k == j:
                continue
            old1 = b1[k]
            old2 = b2[k]
            rho1 = c1[k] - u1[k] + d1[k] * old1
            rho2 = c2[k] - u2[k] + d2[k] * old2
            new1, new2, _ = _solve(rho1, rho2, lam1, lam2)
            if new1 != old1:
                u1 += g1[:, k] * (new1 - old1)
                b1[k] = new1
                max_delta = max(max_delta, abs(new1 - old1))
            if new2 != old2:
                u2 += g2[:, k] * (new2 - old2)
                b2[k] = new2
                max_delta = max(max_delta, abs(new2 - old2))
            step = _block_energy(
                new1, new2, rho1, rho2, d1[k], d2[k], lam1, lam2
            ) - _block_energy(old1, old2, rho1, rho2, d1[k], d2[k], lam1, lam2)
            assert step <= DESCENT_SLACK, (
                f"objective increased by {step:g} at node {j}, block {k}"
            )
            running += step
            trace.append(running)
        if max_delta < tol:
            converged = True
            break
    return sweeps, converged, trace


def _fit_gram(
    g1: np.ndarray,
    g2: np.ndarray,
    j: int,
    lam1: float,
    lam2: float,
    tolerance: float,
    max_sweeps: int,
    start1: np.ndarray | None = None,
    start2: np.ndarray | None = None,
    track_objective: bool = False,
):
    """Coordinate descent on precomputed Gram matrices.

    Returns (beta1, beta2, sweeps_used, converged, trace).  Does not raise on
    non-convergence; callers decide policy.
    """
    p = g1.shape[0]
    d1 = np.ascontiguousarray(np.diag(g1))
    d2 = np.ascontiguousarray(np.diag(g2))
    if start1 is None:
        b1 = np.zeros(p)
        u1 = np.zeros(p)
    else:
        b1 = np.array(start1, dtype=np.float64)
        b1[j] = 0.0
        u1 = g1 @ b1
    if start2 is None:
        b2 = np.zeros(p)
        u2 = np.zeros(p)
    else:
        b2 = np.array(start2, dtype=np.float64)
        b2[j] = 0.0
        u2 = g2 @ b2
    c1 = np.ascontiguousarray(g1[:, j])
    c2 = np.ascontiguousarray(g2[:, j])

    if track_objective:
        sweeps, converged, trace = _tracked_sweeps(
            g1, g2, c1, c2, d1, d2, j, lam1, lam2, tolerance, max_sweeps,
            b1, b2, u1, u2,
        )
        return b1, b2, sweeps, converged, trace
    sweeps, converged = _cd_kernel(
        g1, g2, c1, c2, d1, d2, j, lam1, lam2, tolerance, max_sweeps,
        b1, b2, u1, u2,
    )
    return b1, b2, sweeps, converged, None


def fit_node(
    data: StandardizedDataset,
    j: int,
    pen: PenaltyConfig,
    opts: SolverOptions = SolverOptions(),
    start: CoefficientPair | None = None,
) -> NodeSolution:
    """Fit node j's two-condition regression by block coordinate descent.

    Raises DidNotConverge (carrying the partial solution) if the sweep limit
    is reached first.
    """
    g1, g2 = gram_matrices(data)
    return _fit_node_with_grams(data, g1, g2, j, pen, opts, start)


def _fit_node_with_grams(
    data: StandardizedDataset,
    g1: np.ndarray,
    g2: np.ndarray,
    j: int,
    pen: PenaltyConfig,
    opts: SolverOptions,
    start: CoefficientPair | None = None,
) -> NodeSolution:
    if not 0 <= j < data.n_variables:
        raise ValueError(f"node index {j} out of range")
    start1 = start.beta1 if start is not None else None
    start2 = start.beta2 if start is not None else None
    b1, b2, sweeps, converged, trace = _fit_gram(
        g1,
        g2,
        j,
        pen.lambda1,
        pen.lambda2,
        opts.tolerance,
        opts.max_sweeps,
        start1,
        start2,
        opts.track_objective,
    )
    coefficients = CoefficientPair(beta1=b1, beta2=b2, node_index=j)
    solution = NodeSolution(
        node_index=j,
        coefficients=coefficients,
        objective=objective_value(data, j, coefficients, pen),
        sweeps_used=sweeps,
        converged=converged,
        objective_trace=tuple(trace) if trace is not None else None,
    )
    if not converged:
        raise DidNotConverge(solution)
    return solution


def fit_all(
    data: StandardizedDataset,
    pen: PenaltyConfig,
    opts: SolverOptions = SolverOptions(),
) -> list[NodeSolution]:
    """Fit every node, collecting non-converged solutions instead of raising.

    Output is ordered by node index.  Check the ``converged`` flags before
    trusting downstream analyses.
    """
    g1, g2 = gram_matrices(data)
    solutions = []
    for j in range(data.n_variables):
        try:
            solutions.append(_fit_node_with_grams(data, g1, g2, j, pen, opts))
        except DidNotConverge as exc:
            solutions.append(exc.solution)
    return solutions
