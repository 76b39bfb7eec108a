"""Synthetic paired datasets drawn from specified graph structures.

A graph spec is turned into a positive definite precision matrix by placing
edge weights on the off-diagonal, making the diagonal strictly dominant, and
rescaling to unit diagonal.  Samples are drawn from the zero-mean Gaussian
whose precision is that matrix.

Randomness comes from numpy's default generator (PCG64); standard normals use
its ziggurat sampler.  Datasets are therefore reproducible per seed across
runs of this package, though not necessarily across numpy major versions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import RawDataset
from .exceptions import UnknownExperiment

DIAGONAL_MARGIN = 0.1


@dataclass(frozen=True)
class GraphSpec:
    """Undirected weighted graph: edges are (u, v, weight) with u < v."""

    p: int
    edges: tuple[tuple[int, int, float], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("need at least 2 nodes")
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for u, v, w in edges:
            if not 0 <= u < v < self.p:
                raise ValueError(f"bad edge ({u}, {v}): need 0 <= u < v < p")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            if not np.isfinite(w) or w == 0.0:
                raise ValueError(f"edge ({u}, {v}) weight must be finite nonzero")
        if self.names is not None:
            names = tuple(self.names)
            object.__setattr__(self, "names", names)
            if len(names) != self.p:
                raise ValueError("one name per node required")

    @property
    def node_names(self) -> tuple[str, ...]:
        if self.names is not None:
            return self.names
        return tuple(f"X{i + 1}" for i in range(self.p))

    def edge_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u, v, _ in self.edges)


@dataclass(frozen=True)
class PrecisionMatrix:
    """Symmetric positive definite matrix; PD is certified by factorization."""

    omega: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=np.float64)
        object.__setattr__(self, "omega", omega)
        if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
            raise ValueError("omega must be square")
        if not np.allclose(omega, omega.T, atol=1e-12, rtol=0.0):
            raise ValueError("omega must be symmetric")
        try:
            np.linalg.cholesky(omega)
        except np.linalg.LinAlgError:
            raise ValueError("omega is not positive definite") from None


def build_precision(spec: GraphSpec) -> PrecisionMatrix:
    """Precision matrix with the spec's zero pattern and unit diagonal.

    The pre-scaling diagonal is 1 + sum(|row off-diagonals|) + 0.1, which
    makes the matrix strictly diagonally dominant and hence positive definite
    for any edge weights.
    """
    m = np.zeros((spec.p, spec.p))
    for u, v, w in spec.edges:
        m[u, v] = w
        m[v, u] = w
    np.fill_diagonal(m, 1.0 + np.abs(m).sum(axis=1) + DIAGONAL_MARGIN)
    d = 1.0 / np.sqrt(np.diag(m))
    return PrecisionMatrix(omega=m * np.outer(d, d))


def sample(
    precision: PrecisionMatrix,
    n: int,
    seed: int,
    names: tuple[str, ...] | None = None,
) -> RawDataset:
    """Draw n rows from the zero-mean Gaussian with the given precision.

    Sampling factorizes the precision (omega = L L^T) and solves
    L^T x = z for standard normal z, so the covariance is omega^{-1} exactly.
    Deterministic per seed.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    p = precision.omega.shape[0]
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, p))
    chol = np.linalg.cholesky(precision.omega)
    values = np.linalg.solve(chol.T, z.T).T
    if names is None:
        names = tuple(f"X{i + 1}" for i in range(p))
    return RawDataset(values=values, variable_names=names)


def sample_pair(
    spec1: GraphSpec, spec2: GraphSpec, n: int, seed: int
) -> tuple[RawDataset, RawDataset]:
    """Paired datasets for the two conditions; condition 2 uses seed + 1."""
    if spec1.p != spec2.p or spec1.node_names != spec2.node_names:
        raise ValueError("the two specs must share nodes")
    raw1 = sample(build_precision(spec1), n, seed, spec1.node_names)
    raw2 = sample(build_precision(spec2), n, seed + 1, spec2.node_names)
    return raw1, raw2


def changed_edges(
    spec1: GraphSpec, spec2: GraphSpec
) -> frozenset[tuple[int, int]]:
    """Node pairs whose presence or weight differs between the two specs."""
    w1 = {(u, v): w for u, v, w in spec1.edges}
    w2 = {(u, v): w for u, v, w in spec2.edges}
    return frozenset(
        pair
        for pair in set(w1) | set(w2)
        if w1.get(pair) != w2.get(pair)
    )


# --- Built-in experiments -------------------------------------------------
#
# Fixed constants of this package: two desk-scale experiment pairs with a
# documented ground-truth changed-edge set (see README for the topologies).

SIX_NODE_NAMES = ("A", "B", "C", "D", "E", "F")

# Both conditions are six-cycles; condition 2 rewires condition 1's ring by a
# two-switch, {A-B, D-E} -> {A-D, B-E}.  The switch preserves every node's
# absolute row sum, so the shared edges keep identical precision entries
# under both conditions and the ground-truth changed set is exactly the four
# switched edges.  Negative couplings give positively associated variables;
# the changed edges are stronger than the shared ones so presence flips stay
# separable from sampling noise at the default significance level.
_SIX_NODE_SHARED = (
    (1, 2, -1.0),  # B-C
    (2, 3, -1.0),  # C-D
    (4, 5, -1.0),  # E-F
    (0, 5, -1.0),  # A-F
)
SIX_NODE_COND1 = GraphSpec(
    p=6,
    names=SIX_NODE_NAMES,
    edges=_SIX_NODE_SHARED
    + (
        (0, 1, -1.4),  # A-B, condition 1 only
        (3, 4, -1.4),  # D-E, condition 1 only
    ),
)
SIX_NODE_COND2 = GraphSpec(
    p=6,
    names=SIX_NODE_NAMES,
    edges=_SIX_NODE_SHARED
    + (
        (0, 3, -1.4),  # A-D, condition 2 only
        (1, 4, -1.4),  # B-E, condition 2 only
    ),
)

GRN20_NAMES = tuple(f"G{i:02d}" for i in range(1, 21))

# A 20-gene regulatory-style network: a scaffold around hubs G01 and G06
# shared by both conditions; condition 2 rewires ten regulatory edges (a
# two-switch on G07/G08/G10/G11 and a three-cycle rotation over
# G09/G15/G16/G12/G18/G20).  Both rewirings preserve per-node row sums, so
# shared edges keep identical precision entries across conditions and the
# ground truth is exactly the ten rewired edges.  Rewired couplings are
# strong relative to the scaffold so that differential recall stays high at
# fifty samples per condition.
_GRN20_SHARED = (
    (0, 1, -0.5),   # G01-G02
    (0, 2, -0.5),   # G01-G03
    (0, 3, -0.5),   # G01-G04
    (0, 4, -0.5),   # G01-G05
    (1, 16, -0.5),  # G02-G17
    (2, 7, -0.5),   # G03-G08
    (3, 8, -0.5),   # G04-G09
    (3, 18, -0.5),  # G04-G19
    (4, 5, -0.5),   # G05-G06
    (4, 13, -0.5),  # G05-G14
    (5, 9, -0.5),   # G06-G10
    (5, 11, -0.5),  # G06-G12
    (10, 11, -0.5), # G11-G12
    (12, 13, -0.5), # G13-G14
    (12, 19, -0.5), # G13-G20
    (13, 16, -0.5), # G14-G17
    (16, 17, -0.5), # G17-G18
    (17, 18, -0.5), # G18-G19
    (18, 19, -0.5), # G19-G20
)
GRN20_COND1 = GraphSpec(
    p=20,
    names=GRN20_NAMES,
    edges=_GRN20_SHARED
    + (
        (6, 7, -2.6),   # G07-G08, condition 1 only
        (9, 10, -2.6),  # G10-G11, condition 1 only
        (8, 14, -2.6),  # G09-G15, condition 1 only
        (11, 15, -2.6), # G12-G16, condition 1 only
        (17, 19, -2.6), # G18-G20, condition 1 only
    ),
)
GRN20_COND2 = GraphSpec(
    p=20,
    names=GRN20_NAMES,
    edges=_GRN20_SHARED
    + (
        (6, 9, -2.6),   # G07-G10, condition 2 only
        (7, 10, -2.6),  # G08-G11, condition 2 only
        (14, 15, -2.6), # G15-G16, condition 2 only
        (11, 17, -2.6), # G12-G18, condition 2 only
        (8, 19, -2.6),  # G09-G20, condition 2 only
    ),
)

_BUILTINS = {
    "six-node": (SIX_NODE_COND1, SIX_NODE_COND2),
    "grn20": (GRN20_COND1, GRN20_COND2),
}


def builtin_experiment(name: str) -> tuple[GraphSpec, GraphSpec]:
    """Fixed experiment pairs: 'six-node' (p=6) and 'grn20' (p=20)."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UnknownExperiment(
            f"unknown experiment {name!r}; choose from {sorted(_BUILTINS)}"
        ) from None


def spec_to_json(spec: GraphSpec) -> str:
    doc = {
        "p": spec.p,
        "names": list(spec.node_names),
        "edges": [[u, v, w] for u, v, w in spec.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def spec_from_json(text: str) -> GraphSpec:
    doc = json.loads(text)
    return GraphSpec(
        p=int(doc["p"]),
        edges=tuple((int(u), int(v), float(w)) for u, v, w in doc["edges"]),
        names=tuple(doc["names"]) if doc.get("names") else None,
    )


def load_spec(path: str | Path) -> GraphSpec:
    return spec_from_json(Path(path).read_text())
