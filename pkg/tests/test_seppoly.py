import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hashbound.seppoly import (
    DimensionMismatch,
    DistVec,
    NaiveCapExceeded,
    SepParams,
    elem_sym_excluding,
    sep_batch,
    sep_fast,
    sep_naive,
    sep_uniform_exact,
    sep_uniform_fraction,
)

from helpers import esym_excluding_poly, sep_naive_batch


def test_distvec_validation():
    DistVec((0.5, 0.5))
    with pytest.raises(ValueError):
        DistVec((0.5, 0.6))
    with pytest.raises(ValueError):
        DistVec((-0.1, 1.1))
    # relaxed constructor skips the sum check, not the sign check
    DistVec.unnormalized((0.5, 0.6))
    with pytest.raises(ValueError):
        DistVec.unnormalized((-0.1, 0.2))


def test_params_validation():
    SepParams(6, 4)
    with pytest.raises(ValueError):
        SepParams(6, 1)
    with pytest.raises(ValueError):
        SepParams(6, 6)
    with pytest.raises(ValueError):
        SepParams(1, 2)


def test_naive_uniform_six_four():
    params = SepParams(6, 4)
    u = DistVec.uniform(6)
    assert sep_naive(u, u, params) == pytest.approx(5 / 27, abs=1e-12)


def test_naive_vertex_against_spread():
    params = SepParams(6, 4)
    p = DistVec((1.0, 0, 0, 0, 0, 0))
    q = DistVec((0.0,) + (0.2,) * 5)
    assert sep_naive(p, q, params) == pytest.approx(0.192, abs=1e-12)


def test_naive_zero_when_support_too_small():
    # fewer than j nonzero entries on both sides kills every product
    params = SepParams(6, 4)
    p = DistVec((0.4, 0.6, 0, 0, 0, 0))
    q = DistVec((0, 0, 0.7, 0.3, 0, 0))
    assert sep_naive(p, q, params) == 0.0
    assert sep_fast(p, q, params) == 0.0


def test_naive_guards():
    with pytest.raises(NaiveCapExceeded):
        sep_naive(DistVec.uniform(9), DistVec.uniform(9), SepParams(9, 4))
    with pytest.raises(DimensionMismatch):
        sep_naive(DistVec.uniform(5), DistVec.uniform(6), SepParams(6, 4))


def test_fast_uniform_seven_five():
    val = sep_fast(DistVec.uniform(7), DistVec.uniform(7), SepParams(7, 5))
    assert val == pytest.approx(1440 / 16807, abs=1e-15)
    assert val == pytest.approx(0.085679, abs=1e-6)


def test_fast_vertex_seven_five():
    p = DistVec((1.0,) + (0.0,) * 6)
    q = DistVec((0.0,) + (1 / 6,) * 6)
    assert sep_fast(p, q, SepParams(7, 5)) == pytest.approx(720 / 7776, abs=1e-15)


def test_fast_matches_naive_oracle():
    rng = np.random.default_rng(20240811)
    params = SepParams(6, 3)
    P = rng.dirichlet(np.ones(6), size=300)
    Q = rng.dirichlet(np.ones(6), size=300)
    for i in range(300):
        fast = sep_fast(DistVec.unnormalized(P[i]), DistVec.unnormalized(Q[i]), params)
        ref = sep_naive(DistVec.unnormalized(P[i]), DistVec.unnormalized(Q[i]), params)
        assert abs(fast - ref) <= 1e-12


def test_batch_matches_fast_and_batched_oracle():
    rng = np.random.default_rng(7)
    for b, j in ((5, 2), (6, 4), (7, 3)):
        P = rng.dirichlet(np.ones(b), size=400)
        Q = rng.dirichlet(np.ones(b), size=400)
        batch = sep_batch(P, Q, j)
        oracle = sep_naive_batch(P, Q, j)
        assert np.abs(batch - oracle).max() <= 1e-12
        params = SepParams(b, j)
        spot = [17, 119, 301]
        for i in spot:
            assert batch[i] == pytest.approx(
                sep_fast(DistVec.unnormalized(P[i]), DistVec.unnormalized(Q[i]), params),
                abs=1e-14,
            )


def test_elem_sym_basics():
    assert elem_sym_excluding((0.3, 0.5, 0.2), 1, 0) == pytest.approx(0.7, abs=1e-15)
    assert elem_sym_excluding((1 / 6,) * 6, 4, 0) == pytest.approx(5 / 1296, abs=1e-16)
    assert elem_sym_excluding((0.1, 0.2), 0, 1) == 1.0
    with pytest.raises(IndexError):
        elem_sym_excluding((0.1, 0.2), 1, 5)
    with pytest.raises(ValueError):
        elem_sym_excluding((0.1, 0.2), 2, 0)


def test_elem_sym_against_polynomial_expansion():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(3, 9))
        v = rng.random(n)
        j = int(rng.integers(0, n))
        excl = int(rng.integers(0, n))
        assert elem_sym_excluding(v, j, excl) == pytest.approx(
            esym_excluding_poly(v, j, excl), rel=1e-13, abs=1e-15
        )


def test_uniform_closed_form_values():
    assert sep_uniform_fraction(SepParams(6, 4)) == Fraction(5, 27)
    assert sep_uniform_exact(SepParams(7, 4)) == pytest.approx(2 * 2520 / 16807, abs=1e-15)
    # b = j+1: the falling factorial is the full factorial
    for j in (2, 3, 4):
        b = j + 1
        assert sep_uniform_fraction(SepParams(b, j)) == Fraction(
            2 * math.factorial(b), b ** b
        )


def test_uniform_closed_form_matches_fast():
    for b in range(3, 16):
        for j in range(2, b):
            u = DistVec.uniform(b)
            assert abs(
                sep_fast(u, u, SepParams(b, j)) - sep_uniform_exact(SepParams(b, j))
            ) <= 1e-14


@st.composite
def simplex_pair(draw):
    b = draw(st.integers(min_value=3, max_value=7))
    j = draw(st.integers(min_value=2, max_value=b - 1))
    raws = []
    for _ in range(2):
        raw = draw(
            st.lists(
                st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
                min_size=b, max_size=b,
            )
        )
        total = sum(raw)
        if total < 1e-9:
            raw = [1.0] * b
            total = float(b)
        raws.append(tuple(x / total for x in raw))
    return b, j, raws[0], raws[1]


@settings(max_examples=150, deadline=None)
@given(simplex_pair())
def test_symmetry_in_p_and_q(data):
    b, j, p, q = data
    params = SepParams(b, j)
    dp, dq = DistVec.unnormalized(p), DistVec.unnormalized(q)
    assert sep_fast(dp, dq, params) == sep_fast(dq, dp, params)


@settings(max_examples=150, deadline=None)
@given(simplex_pair(), st.randoms(use_true_random=False))
def test_permutation_equivariance(data, pyrandom):
    b, j, p, q = data
    params = SepParams(b, j)
    perm = list(range(b))
    pyrandom.shuffle(perm)
    pp = tuple(p[i] for i in perm)
    qq = tuple(q[i] for i in perm)
    before = sep_fast(DistVec.unnormalized(p), DistVec.unnormalized(q), params)
    after = sep_fast(DistVec.unnormalized(pp), DistVec.unnormalized(qq), params)
    assert abs(before - after) <= 1e-14
