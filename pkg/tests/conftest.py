import numpy as np
import pytest

from diffggm import GraphSpec, build_precision, sample, standardize


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_dataset_pair(seed, n=100, p=6):
    """Two independent Gaussian datasets over p variables, n samples each."""
    rng = np.random.default_rng(seed)
    from diffggm import RawDataset

    names = tuple(f"V{i}" for i in range(p))
    raw1 = RawDataset(rng.standard_normal((n, p)), names)
    raw2 = RawDataset(rng.standard_normal((n, p)), names)
    return raw1, raw2


def random_standardized(seed, n=100, p=6):
    return standardize(*random_dataset_pair(seed, n, p))


def structured_pair(seed, n=100, p=6, n_edges=5, weight=-0.9):
    """Paired datasets drawn from one random GGM (same graph both conditions)."""
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(p) for v in range(u + 1, p)]
    idx = rng.choice(len(pairs), size=min(n_edges, len(pairs)), replace=False)
    edges = tuple((*pairs[i], weight) for i in idx)
    spec = GraphSpec(p=p, edges=edges)
    prec = build_precision(spec)
    raw1 = sample(prec, n, seed=seed * 2 + 1)
    raw2 = sample(prec, n, seed=seed * 2 + 2)
    return standardize(raw1, raw2)
