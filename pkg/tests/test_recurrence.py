from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdshift.language import decompose, first_mismatch
from pdshift.recurrence import (
    as_epsilon,
    bowen_correlation_sum,
    cint_bounds,
    correlation_integral,
    correlation_integral_from_measure,
    correlation_sum,
    determinism,
    determinism_is_one,
    dyadic,
    embedded_correlation_sum,
    embedded_det,
    embedded_rr,
    m_epsilon,
    recurrence_matrix,
    recurrence_rate,
    recurrence_rate_empirical,
    scale_match,
)

from conftest import brute_prefix

F = Fraction


def rho(s, i, j):
    """Distance of the shifts starting at 0-based i and j, searched within ``s``."""
    if i == j:
        return F(0)
    for k, (a, b) in enumerate(zip(s[i:], s[j:]), start=1):
        if a != b:
            return F(2, 2**k)
    raise AssertionError("search window too short")


def brute_bowen(ell, n, eps, extra=200):
    s = brute_prefix(n + ell + extra)
    hits = 0
    for i in range(n):
        for j in range(n):
            d = max(rho(s, i + t, j + t) for t in range(ell))
            hits += d <= eps
    return F(hits, n * n)


def test_m_epsilon_examples():
    assert m_epsilon(1) == 0
    assert m_epsilon(F(1, 2)) == 1
    assert m_epsilon(F(3, 10)) == 2
    assert m_epsilon("2^-5") == 5
    assert m_epsilon("0.3") == 2
    assert m_epsilon(7) == 0


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_m_epsilon_bracket(a, b):
    eps = F(a, b)
    m = m_epsilon(eps)
    if eps >= 1:
        assert m == 0
    else:
        assert F(1, 2**m) <= eps < F(2, 2**m)


def test_as_epsilon_rejects():
    with pytest.raises(TypeError):
        as_epsilon(0.5)
    with pytest.raises(ValueError):
        as_epsilon("0")
    assert as_epsilon("3/8") == F(3, 8)


def test_scale_match_examples():
    assert scale_match(1, 5, 3)
    assert not scale_match(1, 2, 1)
    assert scale_match(4, 4, 100)


def test_scale_match_agrees_with_first_mismatch():
    for k in range(1, 6):
        top = 3 * 2**k
        for i in range(1, top + 1):
            for j in range(i + 1, top + 1):
                h = first_mismatch(i, j, k)
                assert scale_match(i, j, h - 1)
                assert not scale_match(i, j, h)


def test_correlation_integral_examples():
    assert correlation_integral(0) == 1
    assert correlation_integral(1) == F(5, 9)
    assert correlation_integral(2) == F(1, 3)
    assert correlation_integral(4) == F(1, 6)


def test_correlation_integral_matches_measure_to_4096():
    for m in range(1, 4097):
        assert correlation_integral(m) == correlation_integral_from_measure(m), m


def test_correlation_sum_examples():
    assert correlation_sum(4, 1) == F(10, 16)
    assert correlation_sum(4, 0) == 1
    assert correlation_sum(1, 30) == 1


@pytest.mark.parametrize("n, m", [(1, 1), (7, 1), (20, 2), (33, 3), (50, 5), (64, 9)])
def test_correlation_sum_against_pairwise(n, m):
    assert correlation_sum(n, m) == brute_bowen(1, n, dyadic(m))


def test_correlation_sum_converges():
    for m in range(1, 13):
        assert abs(correlation_sum(2**16, m) - correlation_integral(m)) < F(1, 100)


@pytest.mark.parametrize("workers", [1, 2, 3, 8])
def test_correlation_sum_independent_of_workers(workers):
    for m in (1, 5, 40, 70):
        assert correlation_sum(50_000, m, workers=workers) == correlation_sum(50_000, m)


def test_bowen_examples():
    assert bowen_correlation_sum(2, 4, dyadic(1)) == F(6, 16)
    assert bowen_correlation_sum(3, 10, 1) == 1
    assert bowen_correlation_sum(1, 4, dyadic(1)) == correlation_sum(4, 1)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 40),
    st.fractions(min_value=F(1, 300), max_value=F(3, 2)),
)
def test_bowen_against_pairwise(ell, n, eps):
    assert bowen_correlation_sum(ell, n, eps) == brute_bowen(ell, n, eps)


cint_cached = lru_cache(maxsize=None)(correlation_integral_from_measure)


def rr_from_cint(ell, m):
    c = cint_cached
    if ell == 1:
        return c(m)
    return ell * c(m + ell - 1) - (ell - 1) * c(m + ell)


def test_recurrence_rate_grid():
    for ell in range(1, 17):
        for m in range(1, 1025):
            assert recurrence_rate(ell, dyadic(m)) == rr_from_cint(ell, m), (ell, m)


def test_recurrence_rate_examples():
    assert recurrence_rate(1, dyadic(1)) == F(5, 9)
    assert recurrence_rate(2, dyadic(1)) == F(4, 9)
    assert recurrence_rate(3, F(3, 2)) == 1


def test_recurrence_rate_is_step_function():
    for m in range(1, 40):
        for eps in (dyadic(m), F(3, 2**(m + 1)), F(2**m - 1, 2**(2 * m - 1))):
            assert recurrence_rate(2, eps) == recurrence_rate(2, dyadic(m))


def test_empirical_rr2_converges():
    for m in range(1, 11):
        eps = dyadic(m)
        assert abs(recurrence_rate_empirical(2, 2**16, eps) - recurrence_rate(2, eps)) < F(1, 100)


def test_determinism_examples():
    assert determinism(2, dyadic(1)) == F(4, 5)
    assert determinism(2, dyadic(2)) == F(5, 6)
    assert determinism(2, dyadic(4)) == 1
    assert determinism(5, 2) == 1
    with pytest.raises(ValueError):
        determinism(1, dyadic(3))


def test_determinism_predicate_exhaustive():
    for ell in range(2, 17):
        for m in range(1, 1025):
            eps = dyadic(m)
            assert (determinism(ell, eps) == 1) == determinism_is_one(ell, eps), (ell, m)


def test_determinism_at_most_one():
    for ell in range(2, 17):
        for m in range(1, 300):
            assert 0 < determinism(ell, dyadic(m)) <= 1


def test_determinism_limit_in_m():
    previous = None
    for k in range(1, 13):
        low = min(determinism(2, dyadic(m)) for m in range(2**k, 2 ** (k + 1)))
        assert low >= 1 - F(4, 2**k)
        if previous is not None:
            assert low >= previous
        previous = low


def test_determinism_decays_in_ell():
    assert determinism(1024, dyadic(1)) < F(1, 100)
    values = [determinism(ell, dyadic(1)) for ell in range(2, 200)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_cint_bounds_and_equality_cases():
    for m in range(2, 4097):
        bounds = cint_bounds(m)
        c = correlation_integral(m)
        assert bounds.lower <= c <= bounds.upper
        _, k, q = decompose(m)
        lower_case = q == 0 or 2 * q == 2**k
        upper_case = 4 * q == 2**k
        assert (c == bounds.lower) == lower_case, m
        assert (c == bounds.upper) == upper_case, m
        expected = "lower-tight" if lower_case else "upper-tight" if upper_case else "strict"
        assert bounds.classification == expected


def test_embedded_dimension_one_reduces():
    for ell in range(1, 6):
        for m in range(1, 30):
            assert embedded_rr(1, ell, dyadic(m)) == recurrence_rate(ell, dyadic(m))


def test_embedded_examples():
    assert embedded_rr(2, 1, dyadic(1)) == correlation_integral(2) == F(1, 3)
    assert embedded_rr(3, 2, 1) == 1
    assert embedded_det(4, 3, F(5, 4)) == 1


def test_embedded_sum_dimension_one_matches_plain():
    for ell in (1, 2, 3):
        for m in (1, 2, 5):
            assert embedded_correlation_sum(ell, 500, dyadic(m), 1) == bowen_correlation_sum(
                ell, 500, dyadic(m)
            )


def test_embedded_sum_against_pairwise():
    # embedded points agree on s symbols iff the letters agree on s + d - 1
    s = brute_prefix(400)
    n = 60
    for d in (2, 3):
        for m in (1, 2, 3):
            for ell in (1, 2):
                span = m + ell - 1 + d - 1
                hits = sum(s[i : i + span] == s[j : j + span] for i in range(n) for j in range(n))
                assert embedded_correlation_sum(ell, n, dyadic(m), d) == F(hits, n * n)


def test_recurrence_matrix():
    r = recurrence_matrix(4, F(1, 2))
    assert int(r.sum()) == 10
    assert np.array_equal(r, r.T)
    big = recurrence_matrix(300, dyadic(3))
    assert big.diagonal().all()
    assert np.array_equal(big, big.T)
    assert F(int(big.sum()), 300 * 300) == correlation_sum(300, 3)
    assert recurrence_matrix(5, 1).all()
    assert recurrence_matrix(0, dyadic(2)).shape == (0, 0)


def test_listed_examples():
    assert abs(correlation_sum(2**16, 2) - F(1, 3)) < F(1, 1000)
    assert abs(recurrence_rate_empirical(2, 2**16, dyadic(1)) - F(4, 9)) < F(1, 1000)
    assert recurrence_rate_empirical(2, 4, dyadic(0)) == 1
    assert determinism(2, dyadic(12)) == 1 and determinism_is_one(2, dyadic(12))
    assert not determinism_is_one(2, dyadic(1))
    assert cint_bounds(2).classification == "lower-tight" and correlation_integral(2) == F(2, 6)
    assert cint_bounds(5).classification == "upper-tight" and correlation_integral(5) == F(5, 36)
    assert cint_bounds(6).classification == "lower-tight" and correlation_integral(6) == F(1, 9)
    assert embedded_rr(3, 2, dyadic(1)) == recurrence_rate(2, dyadic(3))
    assert embedded_det(1, 2, dyadic(1)) == F(4, 5)
    assert embedded_det(2, 2, dyadic(1)) == determinism(2, dyadic(2))


def test_embedded_threshold_one_counts_every_pair():
    # the embedded metric never exceeds 1, so the scale shift stops at eps < 1
    for d in (2, 3):
        assert embedded_rr(d, 1, 1) == 1
        assert embedded_correlation_sum(1, 300, 1, d) == 1
        assert embedded_det(d, 2, 1) == 1
    assert embedded_rr(2, 1, F(99, 100)) == recurrence_rate(1, F(99, 200))


@settings(max_examples=300)
@given(st.integers(1, 3 * 2**10), st.integers(1, 3 * 2**10), st.integers(0, 64))
def test_scale_match_sampled(i, j, m):
    s = brute_prefix(3 * 2**10 + 2**11 + 64)
    assert scale_match(i, j, m) == (s[i - 1 : i - 1 + m] == s[j - 1 : j - 1 + m])
    if i != j:
        h = first_mismatch(min(i, j), max(i, j), 10)
        assert scale_match(i, j, m) == (m < h)
