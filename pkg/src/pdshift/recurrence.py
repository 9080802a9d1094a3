"""
Correlation integral and recurrence quantification of the period-doubling
subshift.

On the full shift with ``rho(a, b) = 2^(1-k)`` (``k`` the first mismatch),
two points are within ``eps < 1`` iff they agree on their first ``m_eps``
letters, where ``2^-m_eps <= eps < 2^(1-m_eps)``.  Every quantity here is
therefore a step function of ``eps`` that only depends on ``m_eps``.

Thresholds are exact rationals.  :func:`dyadic` builds ``2^-m``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .language import decompose, window_keys
from .measure import measure_table
from .sequence import prefix_array
from .windows import WindowKeys, sum_of_squared_multiplicities

__all__ = [
    "dyadic",
    "as_epsilon",
    "m_epsilon",
    "scale_match",
    "correlation_integral",
    "correlation_integral_from_measure",
    "correlation_sum",
    "bowen_correlation_sum",
    "recurrence_rate",
    "recurrence_rate_empirical",
    "determinism",
    "determinism_empirical",
    "determinism_is_one",
    "recurrence_matrix",
    "CintBounds",
    "cint_bounds",
    "embedded_rr",
    "embedded_det",
    "embedded_sequence",
    "embedded_correlation_sum",
    "embedded_rr_empirical",
    "embedded_det_empirical",
]

EpsilonLike = Union[Fraction, int, str]


def dyadic(m: int) -> Fraction:
    """The threshold ``2^-m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Fraction(1, 1 << m)


def as_epsilon(eps: EpsilonLike) -> Fraction:
    """Parse a threshold: a rational, a decimal string, ``"a/b"`` or ``"2^-m"``."""
    if isinstance(eps, str):
        text = eps.strip().replace(" ", "")
        if text.startswith("2^"):
            exponent = int(text[2:].strip("()"))
            value = Fraction(2) ** exponent
        else:
            value = Fraction(text)
    elif isinstance(eps, float):
        raise TypeError("pass thresholds as exact rationals or strings, not floats")
    else:
        value = Fraction(eps)
    if value <= 0:
        raise ValueError("threshold must be positive")
    return value


def m_epsilon(eps: EpsilonLike) -> int:
    """0 if ``eps >= 1``, else the ``m >= 1`` with ``2^-m <= eps < 2^(1-m)``."""
    eps = as_epsilon(eps)
    if eps >= 1:
        return 0
    # smallest m with 2^m * eps >= 1, i.e. 2^m * num >= den
    num, den = eps.numerator, eps.denominator
    m = max(den.bit_length() - num.bit_length(), 1)
    while (num << m) < den:
        m += 1
    while m > 1 and (num << (m - 1)) >= den:
        m -= 1
    return m


def scale_match(i: int, j: int, m: int) -> bool:
    """Whether ``rho(sigma^(i-1) omega, sigma^(j-1) omega) <= 2^-m``."""
    if m <= 0 or i == j:
        return True
    letters = prefix_array(max(i, j) + m - 1)
    return bool(np.array_equal(letters[i - 1 : i - 1 + m], letters[j - 1 : j - 1 + m]))


def correlation_integral(m_eps: int) -> Fraction:
    """``c(mu, eps)`` as a function of ``m_eps``."""
    if m_eps < 0:
        raise ValueError("m_eps must be nonnegative")
    if m_eps == 0:
        return Fraction(1)
    if m_eps == 1:
        return Fraction(5, 9)
    _, k, q = decompose(m_eps)
    denominator = 9 << (2 * k)
    if 2 * q < (1 << k):
        return Fraction(3 * (2 << k) - 4 * q, denominator)
    return Fraction(5 * (1 << k) - 2 * q, denominator)


def correlation_integral_from_measure(m_eps: int) -> Fraction:
    """``sum_v mu([v])^2`` over the allowed ``m_eps``-words."""
    if m_eps < 1:
        raise ValueError("m_eps must be positive")
    table = measure_table(m_eps)
    _, k, _ = decompose(m_eps)
    scale = 3 << k
    numerators = [v.numerator * (scale // v.denominator) for v in table.values]
    return Fraction(sum(a * a for a in numerators), scale * scale)


def correlation_sum(n: int, m_eps: int, workers: int = 1) -> Fraction:
    """``C(omega, n, eps)``: the fraction of pairs among ``w_1 .. w_n`` that agree on ``m_eps`` letters.

    Computed as ``sum_u c_u^2 / n^2`` from window multiplicities.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m_eps <= 0:
        return Fraction(1)
    keys = window_keys(m_eps, n)
    return Fraction(sum_of_squared_multiplicities(keys, workers), n * n)


def bowen_correlation_sum(ell: int, n: int, eps: EpsilonLike) -> Fraction:
    """``C_ell(omega, n, eps)`` for Bowen's metric ``rho_ell``.

    ``rho_ell`` never exceeds 1, so every pair counts for ``eps >= 1``; below
    that, ``rho_ell <= eps`` iff ``rho <= 2^(1-ell) eps``.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    eps = as_epsilon(eps)
    if eps >= 1:
        return Fraction(1)
    return correlation_sum(n, m_epsilon(eps / (1 << (ell - 1))))


def recurrence_rate(ell: int, eps: EpsilonLike) -> Fraction:
    """Limit of ``RR_ell(omega, n, eps)`` as ``n -> infinity``."""
    if ell < 1:
        raise ValueError("ell must be positive")
    m_eps = m_epsilon(eps)
    if m_eps == 0:
        return Fraction(1)
    if m_eps == 1 and ell == 1:
        return Fraction(5, 9)
    _, k, q = decompose(m_eps + ell - 1)
    denominator = 9 << (2 * k)
    if 2 * q < (1 << k):
        return Fraction(3 * (2 << k) - 4 * q + 4 * ell - 4, denominator)
    return Fraction(5 * (1 << k) - 2 * q + 2 * ell - 2, denominator)


def recurrence_rate_empirical(ell: int, n: int, eps: EpsilonLike) -> Fraction:
    """``RR_ell(omega, n, eps) = ell C_ell - (ell - 1) C_(ell+1)``."""
    if ell < 1 or n < 1:
        raise ValueError("ell and n must be positive")
    if ell == 1:
        return bowen_correlation_sum(1, n, eps)
    return ell * bowen_correlation_sum(ell, n, eps) - (ell - 1) * bowen_correlation_sum(
        ell + 1, n, eps
    )


def determinism(ell: int, eps: EpsilonLike) -> Fraction:
    """``DET_ell = RR_ell / RR_1`` in the limit ``n -> infinity``."""
    if ell < 2:
        raise ValueError("determinism needs ell >= 2")
    return recurrence_rate(ell, eps) / recurrence_rate(1, eps)


def determinism_empirical(ell: int, n: int, eps: EpsilonLike) -> Fraction:
    if ell < 2:
        raise ValueError("determinism needs ell >= 2")
    return recurrence_rate_empirical(ell, n, eps) / recurrence_rate_empirical(1, n, eps)


def determinism_is_one(ell: int, eps: EpsilonLike) -> bool:
    """Whether ``DET_ell(omega, eps) = 1``, decided from ``m_eps`` and ``ell`` alone.

    True iff ``eps >= 1``, or ``m_eps`` and ``m_eps + ell - 1`` both lie in
    one of the half-octaves ``[2^k, 2^k + 2^(k-1))`` or
    ``[2^k + 2^(k-1), 2^(k+1))`` for some ``k >= 1``.
    """
    if ell < 2:
        raise ValueError("determinism needs ell >= 2")
    m_eps = m_epsilon(eps)
    if m_eps == 0:
        return True
    _, k, q = decompose(m_eps)
    if k == 0:
        return False
    top = m_eps + ell - 1
    if 2 * q < (1 << k):
        return top < (1 << k) + (1 << (k - 1))
    return top < (2 << k)


class CintBounds(NamedTuple):
    lower: Fraction
    upper: Fraction
    classification: str  # "lower-tight", "upper-tight" or "strict"


def cint_bounds(m_eps: int) -> CintBounds:
    """Bounds ``2/(3 m) <= c <= 25/(36 m)`` and which one, if any, is attained."""
    if m_eps < 2:
        raise ValueError("bounds need m_eps >= 2")
    _, k, q = decompose(m_eps)
    if q == 0 or q == (1 << (k - 1)):
        kind = "lower-tight"
    elif k >= 2 and q == (1 << (k - 2)):
        kind = "upper-tight"
    else:
        kind = "strict"
    return CintBounds(Fraction(2, 3 * m_eps), Fraction(25, 36 * m_eps), kind)


def recurrence_matrix(n: int, eps: EpsilonLike) -> np.ndarray:
    """Boolean ``n x n`` matrix with ``R[i, j] = rho(sigma^i omega, sigma^j omega) <= eps``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m_eps = m_epsilon(eps)
    if m_eps == 0 or n == 0:
        return np.ones((n, n), dtype=bool)
    keys = window_keys(m_eps, n)
    return keys[:, None] == keys[None, :]


# Embedding dimension d: the sequence is re-coded over the alphabet {0,1}^d.


def _embedded_eps(d: int, eps: EpsilonLike) -> Fraction:
    if d < 1:
        raise ValueError("embedding dimension must be positive")
    eps = as_epsilon(eps)
    if eps >= 1:
        return eps
    return eps / (1 << (d - 1))


def embedded_rr(d: int, ell: int, eps: EpsilonLike) -> Fraction:
    """Limit of ``RR_ell^d``: the ``d = 1`` value at threshold ``2^(1-d) eps`` when ``eps < 1``."""
    return recurrence_rate(ell, _embedded_eps(d, eps))


def embedded_det(d: int, ell: int, eps: EpsilonLike) -> Fraction:
    if ell < 2:
        raise ValueError("determinism needs ell >= 2")
    return embedded_rr(d, ell, eps) / embedded_rr(d, 1, eps)


def embedded_sequence(n: int, d: int) -> np.ndarray:
    """Codes of ``x^d_1 .. x^d_n`` where ``x^d_i = omega_i ... omega_(i+d-1)``."""
    if d < 1:
        raise ValueError("embedding dimension must be positive")
    return WindowKeys(prefix_array(n + d - 1)).keys(d, n)


def embedded_correlation_sum(ell: int, n: int, eps: EpsilonLike, d: int) -> Fraction:
    """``C_ell^d(omega^d, n, eps)`` counted on the embedded sequence itself.

    Two embedded points are within ``eps < 1`` in ``rho^d_ell`` iff their
    first ``m_eps + ell - 1`` embedded symbols agree.
    """
    if ell < 1 or n < 1:
        raise ValueError("ell and n must be positive")
    eps = as_epsilon(eps)
    m_eps = m_epsilon(eps)
    if m_eps == 0:
        return Fraction(1)
    span = m_eps + ell - 1
    symbols = embedded_sequence(n + span - 1, d)
    # rank the symbols densely, then key words of `span` symbols exactly
    _, dense = np.unique(symbols, return_inverse=True)
    keys = WindowKeys(dense.ravel().astype(np.int64)).keys_general(span, n)
    return Fraction(sum_of_squared_multiplicities(keys), n * n)


def embedded_rr_empirical(d: int, ell: int, n: int, eps: EpsilonLike) -> Fraction:
    if ell == 1:
        return embedded_correlation_sum(1, n, eps, d)
    return ell * embedded_correlation_sum(ell, n, eps, d) - (ell - 1) * embedded_correlation_sum(
        ell + 1, n, eps, d
    )


def embedded_det_empirical(d: int, ell: int, n: int, eps: EpsilonLike) -> Fraction:
    if ell < 2:
        raise ValueError("determinism needs ell >= 2")
    return embedded_rr_empirical(d, ell, n, eps) / embedded_rr_empirical(d, 1, n, eps)
