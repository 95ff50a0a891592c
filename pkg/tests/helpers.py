"""Independent oracles used by the tests.

These deliberately share no code with the production evaluators: the batched
naive evaluator enumerates index tuples literally, and the elementary
symmetric oracle expands the generating polynomial by convolution.
"""

from itertools import permutations

import numpy as np


def sep_naive_batch(P: np.ndarray, Q: np.ndarray, j: int) -> np.ndarray:
    """Literal ordered-distinct-tuple enumeration, vectorized over row pairs."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    N, b = P.shape
    idx = np.array(list(permutations(range(b), j + 1)), dtype=np.intp)
    head, tail = idx[:, :j], idx[:, j]
    out = np.zeros(N)
    chunk = max(1, 2_000_000 // idx.shape[0])
    for lo in range(0, N, chunk):
        hi = min(N, lo + chunk)
        Pc, Qc = P[lo:hi], Q[lo:hi]
        pprod = np.ones((hi - lo, idx.shape[0]))
        qprod = np.ones((hi - lo, idx.shape[0]))
        for t in range(j):
            pprod *= Pc[:, head[:, t]]
            qprod *= Qc[:, head[:, t]]
        out[lo:hi] = (pprod * Qc[:, tail]).sum(axis=1) + (qprod * Pc[:, tail]).sum(axis=1)
    return out


def esym_excluding_poly(values, j: int, excluded: int) -> float:
    """Coefficient of x^j in prod_{i != excluded} (1 + v_i x)."""
    coeffs = np.array([1.0])
    for i, v in enumerate(values):
        if i == excluded:
            continue
        coeffs = np.convolve(coeffs, np.array([1.0, float(v)]))
    return float(coeffs[j]) if j < len(coeffs) else 0.0


def random_simplex(rng: np.random.Generator, b: int, n: int = 1) -> np.ndarray:
    return rng.dirichlet(np.ones(b), size=n)
