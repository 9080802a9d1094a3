"""
Cylinder measures of the unique shift-invariant measure of the
period-doubling subshift.

Three independent routes are available:

* :func:`measure_table` -- the closed form: each allowed m-word has measure
  ``2/(3*2^k)`` or ``1/(3*2^k)`` depending on its first occurrence index;
* :func:`perron_measure_oracle` -- the normalized eigenvector for eigenvalue
  2 of the composition matrix of the induced substitution on m-words,
  solved exactly over the rationals;
* :func:`empirical_frequency` -- counting occurrences in a long prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import ConsistencyError
from .language import (
    LanguageTable,
    decompose,
    enumerate_words,
    locate,
    window,
    window_keys,
)
from .linalg import nullspace
from .sequence import Word, WordLike, as_word, prefix_array, substitution_image
from .windows import PACKED_MAX

__all__ = [
    "MeasureTable",
    "CompositionMatrix",
    "measure_by_index",
    "measure",
    "class_count",
    "measure_table",
    "block_substitution",
    "composition_matrix",
    "perron_measure_oracle",
    "empirical_frequency",
    "empirical_frequencies",
]


@dataclass(frozen=True)
class MeasureTable:
    """Measures of all allowed m-words, in first-occurrence order."""

    m: int
    language: LanguageTable
    values: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def first_indices(self) -> tuple[int, ...]:
        return self.language.first_indices

    @property
    def words(self) -> tuple[Word, ...]:
        return self.language.words

    @cached_property
    def rows(self) -> list[tuple[Word, int, Fraction]]:
        return list(zip(self.words, self.first_indices, self.values))

    def as_dict(self) -> dict[str, Fraction]:
        return {str(w): v for w, v in zip(self.words, self.values)}

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


def measure_by_index(i: int, m: int) -> Fraction:
    """Measure of the m-word whose first occurrence is at ``i``."""
    _, k, q = decompose(m)
    scale = 3 << k
    if not 1 <= i <= scale:
        raise ValueError(f"first occurrence index {i} outside 1..{scale}")
    big = i <= (1 << k) - q
    if not big and 2 * q < (1 << k):
        big = (1 << k) < i <= (1 << k) + (1 << k) // 2 - q
    return Fraction(2 if big else 1, scale)


def measure(u: WordLike) -> Optional[Fraction]:
    """``mu([u])``, or ``None`` when ``u`` is not an allowed word."""
    u = as_word(u)
    i = locate(u)
    if i is None:
        return None
    return measure_by_index(i, u.length)


def class_count(m: int) -> int:
    """Number of m-words carrying the larger measure ``2/(3*2^k)``."""
    _, k, q = decompose(m)
    if k == 0:
        return 1
    half = 1 << (k - 1)
    if q < half:
        return 3 * half - 2 * q
    return (1 << k) - q


def measure_table(m: int) -> MeasureTable:
    language = enumerate_words(m)
    _, k, q = decompose(m)
    big, small = Fraction(2, 3 << k), Fraction(1, 3 << k)
    idx = np.asarray(language.first_indices, dtype=np.int64)
    is_big = idx <= (1 << k) - q
    if 2 * q < (1 << k):
        is_big |= ((1 << k) < idx) & (idx <= (1 << k) + (1 << k) // 2 - q)
    values = tuple(big if b else small for b in is_big.tolist())
    # every value has denominator dividing 3*2^k, so compare numerators
    scale = 3 << k
    if sum(v.numerator * (scale // v.denominator) for v in values) != scale:
        raise ConsistencyError(f"m={m}: cylinder measures do not sum to 1")
    return MeasureTable(m, language, values)


def block_substitution(u: WordLike) -> tuple[Word, Word]:
    """The two m-windows of ``zeta(u)`` starting at its first and second letters."""
    u = as_word(u)
    if u.length == 0:
        raise ValueError("block_substitution needs a nonempty word")
    image = substitution_image(u)
    m = u.length
    return image[0:m], image[1 : m + 1]


@dataclass(frozen=True)
class CompositionMatrix:
    """``entries[a, b]`` counts occurrences of word ``b`` in the image of word ``a``."""

    m: int
    alphabet: LanguageTable
    entries: np.ndarray


def composition_matrix(m: int) -> CompositionMatrix:
    alphabet = enumerate_words(m)
    size = len(alphabet)
    entries = np.zeros((size, size), dtype=np.int64)
    for a, u in enumerate(alphabet.words):
        for v in block_substitution(u):
            try:
                b = alphabet.index_of(v)
            except KeyError:
                raise ConsistencyError(f"image word {v} of {u} is not an allowed {m}-word")
            entries[a, b] += 1
    return CompositionMatrix(m, alphabet, entries)


def perron_measure_oracle(m: int) -> MeasureTable:
    """Solve ``d M = 2 d``, ``sum(d) = 1`` exactly and return ``d`` as a table."""
    matrix = composition_matrix(m)
    entries = matrix.entries
    size = entries.shape[0]
    # one equation per target word v: sum_u M[u, v] d_u - 2 d_v = 0
    rows = []
    for v in range(size):
        row = {int(u): Fraction(int(entries[u, v])) for u in np.flatnonzero(entries[:, v])}
        row[v] = row.get(v, Fraction(0)) - 2
        rows.append(row)
    basis = nullspace(rows, size)
    if len(basis) != 1:
        raise ConsistencyError(f"m={m}: eigenspace for eigenvalue 2 has dimension {len(basis)}")
    vector = basis[0]
    total = sum(vector, Fraction(0))
    values = tuple(x / total for x in vector)
    if any(x <= 0 for x in values):
        raise ConsistencyError(f"m={m}: Perron vector has a nonpositive entry")
    return MeasureTable(m, matrix.alphabet, values)


def empirical_frequency(u: WordLike, n: int) -> Fraction:
    """``#{1 <= i <= n : w_i = u} / n``."""
    u = as_word(u)
    if n < 1:
        raise ValueError("n must be positive")
    if u.length == 0:
        return Fraction(1)
    if u.length <= PACKED_MAX:
        hits = int(np.count_nonzero(window_keys(u.length, n) == u.bits))
        return Fraction(hits, n)
    haystack = prefix_array(n + u.length - 1).tobytes()
    needle = u.to_array().tobytes()
    hits, pos = 0, haystack.find(needle)
    while pos >= 0:
        hits += 1
        pos = haystack.find(needle, pos + 1)
    return Fraction(hits, n)


def empirical_frequencies(m: int, n: int) -> dict[Word, Fraction]:
    """Empirical frequencies of every m-word seen among ``w_1 .. w_n``."""
    keys = window_keys(m, n)
    _, first, counts = np.unique(keys, return_index=True, return_counts=True)
    return {window(int(i) + 1, m): Fraction(int(c), n) for i, c in zip(first, counts)}
