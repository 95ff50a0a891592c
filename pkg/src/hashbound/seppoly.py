"""Separation polynomial on pairs of probability vectors.

For probability vectors p, q in R^b and an order j with 2 <= j <= b-1, the
separation polynomial of order j is the sum over all ordered (j+1)-tuples of
distinct indices (i_1, ..., i_j, m) of

    p[i_1] * ... * p[i_j] * q[m]  +  q[i_1] * ... * q[i_j] * p[m] .

It measures how likely j symbols drawn from one distribution and one symbol
from the other are pairwise distinct, which is what drives the hash-code rate
bounds in :mod:`hashbound.classical`.

Grouping the tuples by their trailing index gives the identity

    S_j(p, q) = j! * sum_m ( q[m] * e_j(p \\ m) + p[m] * e_j(q \\ m) )

where ``e_j(v \\ m)`` is the j-th elementary symmetric polynomial of v with
coordinate m removed.  ``sep_fast`` and the bulk evaluator ``sep_batch`` use
this form; ``sep_naive`` enumerates tuples literally and serves as an
independent cross-check oracle for small b.

All monomials have nonnegative coefficients, so evaluation involves no
cancellation: every routine here is unconditionally stable and monotone
nondecreasing in each coordinate of p and q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

#: tolerance for the unit-sum check at DistVec construction
SUM_TOL = 1e-12

#: hard cap on b for the naive evaluator (factorial blowup guard)
NAIVE_B_CAP = 8

#: chunk size for the bulk evaluator, keeps the prefix/suffix tables small
_BATCH_CHUNK = 8192


class DimensionMismatch(ValueError):
    """p, q and the declared alphabet size disagree."""


class NaiveCapExceeded(ValueError):
    """sep_naive called with b beyond its factorial-safe cap."""


@dataclass(frozen=True)
class DistVec:
    """A length-b vector of nonnegative reals summing to one.

    ``relaxed`` instances skip the unit-sum check.  Optimizers pass slightly
    off-sum intermediate points (constraint elimination leaves rounding of a
    few ulps) and are responsible for their own hygiene; everything else
    should construct strict instances.
    """

    values: tuple[float, ...]
    relaxed: bool = False

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("empty distribution")
        low = min(self.values)
        if low < 0.0:
            raise ValueError(f"negative entry {low!r} in distribution")
        if not self.relaxed:
            total = math.fsum(self.values)
            if abs(total - 1.0) > SUM_TOL:
                raise ValueError(f"entries sum to {total!r}, not 1 (tol {SUM_TOL})")

    @classmethod
    def uniform(cls, b: int) -> "DistVec":
        return cls((1.0 / b,) * b)

    @classmethod
    def unnormalized(cls, values) -> "DistVec":
        """Relaxed constructor for optimizer-internal intermediate points."""
        return cls(tuple(float(v) for v in values), relaxed=True)

    @property
    def b(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class SepParams:
    """Alphabet size b and polynomial order j, with 2 <= j <= b-1."""

    b: int
    j: int

    def __post_init__(self):
        if self.b < 2:
            raise ValueError(f"alphabet size b={self.b} must be >= 2")
        if not 2 <= self.j <= self.b - 1:
            raise ValueError(f"order j={self.j} must satisfy 2 <= j <= b-1={self.b - 1}")


def _check_pair(p: DistVec, q: DistVec, params: SepParams) -> None:
    if p.b != params.b or q.b != params.b:
        raise DimensionMismatch(f"expected dimension {params.b}, got {p.b} and {q.b}")


def sep_naive(p: DistVec, q: DistVec, params: SepParams) -> float:
    """Literal tuple-enumeration evaluator; independent oracle, b <= NAIVE_B_CAP only."""
    _check_pair(p, q, params)
    if params.b > NAIVE_B_CAP:
        raise NaiveCapExceeded(f"b={params.b} exceeds naive cap {NAIVE_B_CAP}")
    pv, qv = p.values, q.values
    j = params.j
    total = 0.0
    for tup in permutations(range(params.b), j + 1):
        m = tup[j]
        pprod = 1.0
        qprod = 1.0
        for i in tup[:j]:
            pprod *= pv[i]
            qprod *= qv[i]
        total += pprod * qv[m] + qprod * pv[m]
    return total


def elem_sym_excluding(values, j: int, excluded: int) -> float:
    """e_j of ``values`` with coordinate ``excluded`` removed.

    Ascending one-pass recurrence over the kept coordinates; all terms are
    nonnegative for nonnegative input so there is no cancellation.  j = 0
    returns 1 by convention.
    """
    n = len(values)
    if not 0 <= excluded < n:
        raise IndexError(f"excluded index {excluded} out of range for length {n}")
    if not 0 <= j <= n - 1:
        raise ValueError(f"j={j} must be in [0, {n - 1}]")
    e = [0.0] * (j + 1)
    e[0] = 1.0
    seen = 0
    for i in range(n):
        if i == excluded:
            continue
        v = values[i]
        seen += 1
        for t in range(min(j, seen), 0, -1):
            e[t] += v * e[t - 1]
    return e[j]


def sep_fast(p: DistVec, q: DistVec, params: SepParams) -> float:
    """O(b^2 j) evaluator via the leave-one-out elementary symmetric identity.

    Recomputes e_j per excluded index rather than deflating the full e-vector,
    which would cancel catastrophically near zero coordinates.
    """
    _check_pair(p, q, params)
    pv, qv = p.values, q.values
    j = params.j
    acc = 0.0
    for m in range(params.b):
        # the two addends swap under p <-> q; forming their sum before
        # accumulating keeps the evaluation exactly symmetric (IEEE addition
        # commutes, it just does not associate)
        x = qv[m] * elem_sym_excluding(pv, j, m) if qv[m] != 0.0 else 0.0
        y = pv[m] * elem_sym_excluding(qv, j, m) if pv[m] != 0.0 else 0.0
        acc += x + y
    return math.factorial(j) * acc


def sep_uniform_fraction(params: SepParams) -> Fraction:
    """Exact value of the separation polynomial at two uniform vectors.

    Equals 2 * b^(j+1 falling) / b^(j+1); integer arithmetic throughout.
    """
    b, j = params.b, params.j
    num = 2
    for t in range(j + 1):
        num *= b - t
    return Fraction(num, b ** (j + 1))


def sep_uniform_exact(params: SepParams) -> float:
    return float(sep_uniform_fraction(params))


def _loo_esym(V: np.ndarray, j: int) -> np.ndarray:
    """Leave-one-out elementary symmetric values for a stack of vectors.

    V has shape (N, b); the result ``out[n, m] = e_j(V[n] without column m)``.
    Uses prefix/suffix tables: e_j(v \\ m) = sum_t pre[m][t] * suf[m+1][j-t].
    Still cancellation-free (sums of nonnegative products only).
    """
    N, b = V.shape
    pre = np.zeros((b + 1, j + 1, N))
    pre[0, 0] = 1.0
    for m in range(b):
        v = V[:, m]
        pre[m + 1, 0] = pre[m, 0]
        for t in range(1, j + 1):
            pre[m + 1, t] = pre[m, t] + v * pre[m, t - 1]
    suf = np.zeros((b + 1, j + 1, N))
    suf[b, 0] = 1.0
    for m in range(b - 1, -1, -1):
        v = V[:, m]
        suf[m, 0] = suf[m + 1, 0]
        for t in range(1, j + 1):
            suf[m, t] = suf[m + 1, t] + v * suf[m + 1, t - 1]
    # out[m] = sum_t pre[m, t] * suf[m+1, j-t]
    left = pre[:b]                      # (b, j+1, N)
    right = suf[1:, ::-1, :]            # right[m, t] = suf[m+1][j-t]
    return np.einsum("mtn,mtn->nm", left, right)


def sep_batch(P: np.ndarray, Q: np.ndarray, j: int) -> np.ndarray:
    """Vectorized ``sep_fast`` over stacks of vectors.

    P, Q have shape (N, b) with rows paired; returns shape (N,).  Agrees with
    ``sep_fast`` to well below 1e-12 (same arithmetic up to summation order).
    """
    P = np.ascontiguousarray(P, dtype=float)
    Q = np.ascontiguousarray(Q, dtype=float)
    if P.shape != Q.shape or P.ndim != 2:
        raise DimensionMismatch(f"paired stacks required, got {P.shape} and {Q.shape}")
    N = P.shape[0]
    jf = float(math.factorial(j))
    out = np.empty(N)
    for lo in range(0, N, _BATCH_CHUNK):
        hi = min(lo + _BATCH_CHUNK, N)
        Pc, Qc = P[lo:hi], Q[lo:hi]
        loo_p = _loo_esym(Pc, j)
        loo_q = _loo_esym(Qc, j)
        out[lo:hi] = jf * ((Qc * loo_p).sum(axis=1) + (Pc * loo_q).sum(axis=1))
    return out
