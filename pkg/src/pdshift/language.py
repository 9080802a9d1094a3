"""
Factors of the period-doubling sequence: windows, the language of m-words,
the complexity function and the structure of repeated windows.

Every length ``m >= 1`` is written ``m = 2^k + q`` with ``0 <= q < 2^k``;
:func:`decompose` returns that triple and most formulas here branch on it.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .errors import ConsistencyError
from .sequence import Word, WordLike, as_word, prefix_array
from .windows import PACKED_MAX, WindowKeys, packed_codes

__all__ = [
    "ScaleDecomposition",
    "LanguageTable",
    "DuplicatePair",
    "window",
    "decompose",
    "complexity",
    "enumerate_words",
    "locate",
    "duplicate_pairs",
    "first_mismatch",
    "scan_count",
    "window_keys",
]


class ScaleDecomposition(NamedTuple):
    m: int
    k: int
    q: int


def decompose(m: int) -> ScaleDecomposition:
    """Split ``m`` as ``2^k + q`` with ``0 <= q < 2^k``."""
    if m < 1:
        raise ValueError("m must be positive")
    k = m.bit_length() - 1
    return ScaleDecomposition(m, k, m - (1 << k))


def window(i: int, m: int) -> Word:
    """``omega_i ... omega_{i+m-1}``."""
    if i < 1 or m < 0:
        raise ValueError("need i >= 1 and m >= 0")
    return Word.from_array(prefix_array(i + m - 1)[i - 1 :])


def complexity(m: int) -> int:
    """Number of distinct m-words occurring in omega."""
    _, k, q = decompose(m)
    if k == 0:
        return 2
    half = 1 << (k - 1)
    if q <= half:
        return 3 * half + 2 * q
    return 4 * half + q


_keys_lock = threading.Lock()
_keys: Optional[WindowKeys] = None


def _shared_keys(length: int) -> WindowKeys:
    """Window keys over a prefix of at least ``length`` letters, reused across calls."""
    global _keys
    current = _keys
    if current is not None and current.letters.size >= length:
        return current
    with _keys_lock:
        if _keys is None or _keys.letters.size < length:
            size = max(length, 2 * (_keys.letters.size if _keys is not None else 0), 1 << 12)
            _keys = WindowKeys(prefix_array(size))
        return _keys


def window_keys(m: int, count: int, start: int = 1) -> np.ndarray:
    """Exact keys of ``w_start^(m) .. w_{start+count-1}^(m)``; equal keys iff equal words."""
    if m <= PACKED_MAX:
        return packed_codes(prefix_array(start + count + m - 2)[start - 1 :], m, count)
    return _shared_keys(start + count + m - 2).keys(m, count, start - 1)


def scan_count(m: int, positions: int) -> int:
    """Distinct m-windows among ``w_1 .. w_positions``, by direct scanning."""
    return int(np.unique(window_keys(m, positions)).size)


@dataclass(frozen=True)
class LanguageTable:
    """The allowed m-words, each with its first occurrence index, in index order.

    Words are materialized lazily from the indices; for large ``m`` most
    callers only need the indices.
    """

    m: int
    first_indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.first_indices)

    @cached_property
    def words(self) -> tuple[Word, ...]:
        return tuple(window(i, self.m) for i in self.first_indices)

    @property
    def entries(self) -> list[tuple[Word, int]]:
        return list(zip(self.words, self.first_indices))

    def __iter__(self) -> Iterator[tuple[Word, int]]:
        return iter(self.entries)

    def index_of(self, u: WordLike) -> int:
        """Position of ``u`` in this table's order."""
        return self._positions[as_word(u)]

    @cached_property
    def _positions(self) -> dict[Word, int]:
        return {w: pos for pos, w in enumerate(self.words)}


def enumerate_words(m: int) -> LanguageTable:
    """Scan ``w_1 .. w_{3*2^k}`` and keep the first occurrence of each word."""
    _, k, _ = decompose(m)
    span = 3 << k
    keys = window_keys(m, span)
    _, first = np.unique(keys, return_index=True)
    first = np.sort(first) + 1
    expected = complexity(m)
    if first.size != expected:
        raise ConsistencyError(
            f"m={m}: scan found {first.size} words, complexity formula gives {expected}"
        )
    return LanguageTable(m, tuple(int(i) for i in first))


def locate(u: WordLike) -> Optional[int]:
    """Least ``i`` with ``w_i = u``, or ``None`` if ``u`` does not occur in omega.

    Every allowed m-word occurs at some ``i <= 3 * 2^k``, so only that range
    is searched.
    """
    u = as_word(u)
    if u.length == 0:
        raise ValueError("locate needs a nonempty word")
    _, k, _ = decompose(u.length)
    end = (3 << k) + u.length - 1
    haystack = prefix_array(end).tobytes()
    pos = haystack.find(u.to_array().tobytes())
    return None if pos < 0 else pos + 1


class DuplicatePair(NamedTuple):
    i: int
    j: int
    kind: str  # "long-period" or "short-period"


def duplicate_pairs(m: int) -> list[DuplicatePair]:
    """All ``i < j <= 3*2^k`` with ``w_i^(m) = w_j^(m)``, for ``q >= 1``."""
    _, k, q = decompose(m)
    if k == 0 or q == 0:
        raise ValueError("duplicate_pairs needs m = 2^k + q with k >= 1 and q >= 1")
    pairs = [DuplicatePair(i, i + (2 << k), "long-period") for i in range(1, (1 << k) - q + 1)]
    if 2 * q < (1 << k):
        half = 1 << (k - 1)
        pairs += [
            DuplicatePair(i, i + half, "short-period")
            for i in range((1 << k) + 1, 3 * half - q + 1)
        ]
    return pairs


def first_mismatch(i: int, j: int, k: int) -> int:
    """Least ``h <= 2^(k+1)`` with ``omega_{i+h-1} != omega_{j+h-1}``."""
    if not (1 <= i < j) or k < 1:
        raise ValueError("need 1 <= i < j and k >= 1")
    limit = 2 << k
    letters = prefix_array(j + limit - 1)
    a = letters[i - 1 : i - 1 + limit]
    b = letters[j - 1 : j - 1 + limit]
    diff = np.flatnonzero(a != b)
    if diff.size == 0:
        raise ConsistencyError(f"windows at {i} and {j} agree on {limit} letters")
    return int(diff[0]) + 1
