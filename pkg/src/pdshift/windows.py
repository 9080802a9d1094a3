"""
Exact sliding-window keys over a binary array.

Two windows get the same key iff they are equal as words.  Short windows
(``m <= 62``) are bit-packed into one int64.  Longer windows are keyed by a
pair of prefix-doubling ranks: with ``2^a <= m < 2^(a+1)`` the window at
``i`` is determined by the ranks of the length-``2^a`` windows at ``i`` and
at ``i + m - 2^a``, which together cover it.  Nothing is hashed, so there are
no collisions to worry about.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

PACKED_MAX = 62


def packed_codes(letters: np.ndarray, m: int, count: int) -> np.ndarray:
    """Bit-packed codes of the ``count`` windows of length ``m`` (``m <= 62``)."""
    if m > PACKED_MAX:
        raise ValueError(f"window length {m} does not fit in one word")
    if count + m - 1 > letters.size:
        raise ValueError("array too short for the requested windows")
    codes = np.zeros(count, dtype=np.int64)
    for t in range(m):
        codes <<= 1
        codes |= letters[t : t + count]
    return codes


class WindowKeys:
    """Window keys over a fixed array; rank levels are built lazily and reused.

    The array may hold any nonnegative integers; packed codes are only used
    for binary input through :meth:`keys`.
    """

    def __init__(self, letters: np.ndarray):
        self.letters = np.asarray(letters)
        if self.letters.size and self.letters.min() < 0:
            raise ValueError("letters must be nonnegative")
        self._ranks = [self.letters.astype(np.int64)]

    def _level(self, a: int) -> np.ndarray:
        while len(self._ranks) <= a:
            prev = self._ranks[-1]
            half = 1 << (len(self._ranks) - 1)
            n = prev.size - half
            if n <= 0:
                raise ValueError("array too short for the requested windows")
            base = int(prev.max()) + 1
            pairs = prev[:n] * base + prev[half : half + n]
            _, dense = np.unique(pairs, return_inverse=True)
            self._ranks.append(dense.astype(np.int64).ravel())
        return self._ranks[a]

    def keys(self, m: int, count: int, start: int = 0) -> np.ndarray:
        """Keys of the windows of length ``m`` starting at ``start .. start+count-1`` (0-based)."""
        if m < 1:
            raise ValueError("window length must be positive")
        if start + count + m - 1 > self.letters.size:
            raise ValueError("array too short for the requested windows")
        if m <= PACKED_MAX and self.letters.dtype == np.uint8:
            return packed_codes(self.letters[start:], m, count)
        return self.keys_general(m, count, start)

    def keys_general(self, m: int, count: int, start: int = 0) -> np.ndarray:
        """Like :meth:`keys` but always through doubling ranks (any alphabet)."""
        if m < 1:
            raise ValueError("window length must be positive")
        if start + count + m - 1 > self.letters.size:
            raise ValueError("array too short for the requested windows")
        a = m.bit_length() - 1
        ranks = self._level(a)
        shift = m - (1 << a)
        base = int(ranks.max()) + 1
        return ranks[start : start + count] * base + ranks[start + shift : start + shift + count]


def window_keys(letters: np.ndarray, m: int, count: int) -> np.ndarray:
    return WindowKeys(letters).keys(m, count)


def multiplicities(keys: np.ndarray) -> np.ndarray:
    """Occurrence counts of each distinct key."""
    _, counts = np.unique(keys, return_counts=True)
    return counts


def sum_of_squared_multiplicities(keys: np.ndarray, workers: int = 1) -> int:
    """``sum_u c_u^2`` over distinct keys, optionally counting chunks in parallel.

    Each worker counts its own slice; the partial counts are merged by key, so
    the result does not depend on how the range was split.
    """
    if workers <= 1 or keys.size < 2 * workers:
        counts = multiplicities(keys)
        return int(np.dot(counts, counts))

    chunks = np.array_split(keys, workers)

    def count(chunk):
        return np.unique(chunk, return_counts=True)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(count, chunks))
    all_keys = np.concatenate([k for k, _ in parts])
    all_counts = np.concatenate([c for _, c in parts])
    uniq, inverse = np.unique(all_keys, return_inverse=True)
    merged = np.zeros(uniq.size, dtype=np.int64)
    np.add.at(merged, inverse.ravel(), all_counts)
    return int(np.dot(merged, merged))
