"""Independent reference implementations used as test oracles.

Everything here is deliberately written against the mathematical definitions
only (no reuse of the package's closed forms or solver internals), so a bug
in the library cannot hide in its own oracle.
"""

from __future__ import annotations

import numpy as np


def pair_objective(b1, b2, rho1, rho2, lam1, lam2):
    """Objective of the two-variable fused soft-thresholding problem."""
    return (
        0.5 * (b1 - rho1) ** 2
        + 0.5 * (b2 - rho2) ** 2
        + lam1 * (np.abs(b1) + np.abs(b2))
        + lam2 * np.abs(b1 - b2)
    )


def brute_force_pair_min(rho1, rho2, lam1, lam2, levels=6, points=121):
    """Brute-force minimizer by zooming grid search plus coordinate refinement.

    Starts from a grid over [-6, 6]^2 and repeatedly re-grids a window around
    the incumbent (convexity keeps the true minimizer within one cell of the
    grid argmin, so the +/- 2-cell window always contains it); the pass
    through step < 1e-3 happens by the third level.  A final derivative-free
    ternary search along each coordinate polishes the result.
    """
    lo1, hi1, lo2, hi2 = -6.0, 6.0, -6.0, 6.0
    b1 = b2 = 0.0
    for _ in range(levels):
        g1 = np.linspace(lo1, hi1, points)
        g2 = np.linspace(lo2, hi2, points)
        vals = pair_objective(
            g1[:, None], g2[None, :], rho1, rho2, lam1, lam2
        )
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        h1 = g1[1] - g1[0]
        h2 = g2[1] - g2[0]
        b1, b2 = g1[i], g2[j]
        lo1, hi1 = b1 - 2 * h1, b1 + 2 * h1
        lo2, hi2 = b2 - 2 * h2, b2 + 2 * h2

    for _ in range(3):  # alternate exact-ish 1-D ternary searches
        for axis in (0, 1):
            lo, hi = (b1, b1) if axis == 0 else (b2, b2)
            lo, hi = lo - 1e-4, hi + 1e-4
            for _ in range(120):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                f1 = pair_objective(*((m1, b2) if axis == 0 else (b1, m1)),
                                    rho1, rho2, lam1, lam2)
                f2 = pair_objective(*((m2, b2) if axis == 0 else (b1, m2)),
                                    rho1, rho2, lam1, lam2)
                if f1 <= f2:
                    hi = m2
                else:
                    lo = m1
            if axis == 0:
                b1 = 0.5 * (lo + hi)
            else:
                b2 = 0.5 * (lo + hi)
    return b1, b2


def brute_force_pair_min_batch(rhos1, rhos2, lams1, lams2):
    """Vectorized zooming grid search over a batch of problems.

    Returns the per-problem minimum objective value found (refined well past
    step 1e-3).  Used by the large acceptance sweep where calling the scalar
    oracle 10,000 times would dominate runtime.
    """
    n = len(rhos1)
    r1 = np.asarray(rhos1)[:, None, None]
    r2 = np.asarray(rhos2)[:, None, None]
    l1 = np.asarray(lams1)[:, None, None]
    l2 = np.asarray(lams2)[:, None, None]
    points = 121
    lo1 = np.full(n, -6.0)[:, None]
    hi1 = np.full(n, 6.0)[:, None]
    lo2 = np.full(n, -6.0)[:, None]
    hi2 = np.full(n, 6.0)[:, None]
    t = np.linspace(0.0, 1.0, points)[None, :]
    best1 = np.zeros(n)
    best2 = np.zeros(n)
    for _ in range(6):
        g1 = lo1 + (hi1 - lo1) * t  # (n, points)
        g2 = lo2 + (hi2 - lo2) * t
        vals = pair_objective(
            g1[:, :, None], g2[:, None, :], r1, r2, l1, l2
        )
        flat = vals.reshape(n, -1).argmin(axis=1)
        i, j = np.unravel_index(flat, (points, points))
        h1 = (hi1 - lo1)[:, 0] / (points - 1)
        h2 = (hi2 - lo2)[:, 0] / (points - 1)
        best1 = g1[np.arange(n), i]
        best2 = g2[np.arange(n), j]
        lo1 = (best1 - 2 * h1)[:, None]
        hi1 = (best1 + 2 * h1)[:, None]
        lo2 = (best2 - 2 * h2)[:, None]
        hi2 = (best2 + 2 * h2)[:, None]
    # Coordinate ternary refinement, vectorized across the batch.
    r1f = np.asarray(rhos1)
    r2f = np.asarray(rhos2)
    l1f = np.asarray(lams1)
    l2f = np.asarray(lams2)
    for _ in range(2):
        for axis in (0, 1):
            lo = (best1 if axis == 0 else best2) - 1e-4
            hi = (best1 if axis == 0 else best2) + 1e-4
            for _ in range(80):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if axis == 0:
                    f1 = pair_objective(m1, best2, r1f, r2f, l1f, l2f)
                    f2 = pair_objective(m2, best2, r1f, r2f, l1f, l2f)
                else:
                    f1 = pair_objective(best1, m1, r1f, r2f, l1f, l2f)
                    f2 = pair_objective(best1, m2, r1f, r2f, l1f, l2f)
                take = f1 <= f2
                hi = np.where(take, m2, hi)
                lo = np.where(take, lo, m1)
            if axis == 0:
                best1 = 0.5 * (lo + hi)
            else:
                best2 = 0.5 * (lo + hi)
    return pair_objective(best1, best2, r1f, r2f, l1f, l2f)


def lasso_coordinate_descent(x, y, lam, skip, tol=1e-10, max_sweeps=10000):
    """Plain cyclic coordinate descent for 0.5*||y - X b||^2 + lam*||b||_1.

    Columns of x are assumed unit-norm; coordinate ``skip`` is pinned at 0.
    Textbook implementation kept independent of the package solver.
    """
    n, p = x.shape
    b = np.zeros(p)
    r = y.copy()
    for _ in range(max_sweeps):
        delta = 0.0
        for k in range(p):
            if k == skip:
                continue
            rho = r @ x[:, k] + b[k]
            new = np.sign(rho) * max(abs(rho) - lam, 0.0)
            if new != b[k]:
                r += x[:, k] * (b[k] - new)
                delta = max(delta, abs(new - b[k]))
                b[k] = new
        if delta < tol:
            break
    return b


def stacked_objective(data, j, beta1, beta2, lam1, lam2):
    """Objective evaluated through the literal 2N x 2p block-diagonal design."""
    n, p = data.cond1.shape
    big_x = np.zeros((2 * n, 2 * p))
    big_x[:n, :p] = data.cond1
    big_x[n:, p:] = data.cond2
    y = np.concatenate([data.cond1[:, j], data.cond2[:, j]])
    beta = np.concatenate([beta1, beta2])
    resid = y - big_x @ beta
    return (
        0.5 * resid @ resid
        + lam1 * np.abs(beta).sum()
        + lam2 * np.abs(beta1 - beta2).sum()
    )
