"""
The period-doubling sequence ``omega = 0100 0101 0100 0100 ...``.

Three constructions are provided and agree letter for letter:

* ``valuation``: ``omega_i = v2(i) mod 2`` with ``v2`` the 2-adic valuation,
* ``substitution``: iterate ``0 -> 01, 1 -> 00`` on ``0``,
* ``toeplitz``: fill every other hole with ``0``, then every other remaining
  hole with ``1``, then ``0`` again, and so on.

Letters are plain ints in ``{0, 1}``. Finite words are :class:`Word` values,
bit-packed into a Python int together with an explicit length.

Parity convention: ``omega_i = v2(i) mod 2``, so ``omega_1 = 0``.  Taking the
opposite parity gives the complementary word ``1011 1010 ...``, which is not
a fixed point of the substitution.
"""

from __future__ import annotations

import enum
import os
import threading
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

__all__ = [
    "GeneratorMethod",
    "Word",
    "letter",
    "prefix",
    "prefix_array",
    "substitution_image",
    "block",
    "max_prefix",
]

DEFAULT_MAX_PREFIX = 1 << 26


def max_prefix() -> int:
    """Largest prefix length this process will generate (``PDSHIFT_MAX_PREFIX``)."""
    value = os.environ.get("PDSHIFT_MAX_PREFIX")
    if value is None:
        return DEFAULT_MAX_PREFIX
    return int(value)


class GeneratorMethod(str, enum.Enum):
    VALUATION = "valuation"
    SUBSTITUTION = "substitution"
    TOEPLITZ = "toeplitz"


@dataclass(frozen=True)
class Word:
    """A finite binary word, first letter in the most significant bit.

    ``bits`` has no bits set at or above ``length``.  Indexing is 0-based, as
    for any Python sequence.
    """

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative word length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits do not fit in the word length")

    @classmethod
    def from_str(cls, s: str) -> "Word":
        if s.strip("01"):
            raise ValueError(f"not a binary word: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Word":
        arr = np.asarray(list(letters) if not isinstance(letters, np.ndarray) else letters,
                         dtype=np.uint8)
        return cls.from_array(arr)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Word":
        n = int(arr.size)
        if n == 0:
            return cls(0, 0)
        if np.any(arr > 1):
            raise ValueError("letters must be 0 or 1")
        packed = np.packbits(arr.astype(np.uint8, copy=False))
        pad = 8 * packed.size - n
        return cls(int.from_bytes(packed.tobytes(), "big") >> pad, n)

    def to_array(self) -> np.ndarray:
        if self.length == 0:
            return np.zeros(0, dtype=np.uint8)
        nbytes = (self.length + 7) // 8
        raw = (self.bits << (8 * nbytes - self.length)).to_bytes(nbytes, "big")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[: self.length]

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b") if self.length else ""

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __getitem__(self, index):
        if isinstance(index, slice):
            start, stop, step = index.indices(self.length)
            if step != 1:
                return Word.from_array(self.to_array()[index])
            if stop <= start:
                return Word(0, 0)
            n = stop - start
            return Word((self.bits >> (self.length - stop)) & ((1 << n) - 1), n)
        if index < 0:
            index += self.length
        if not 0 <= index < self.length:
            raise IndexError("word index out of range")
        return (self.bits >> (self.length - 1 - index)) & 1

    def __iter__(self):
        for i in range(self.length):
            yield self[i]

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word((self.bits << other.length) | other.bits, self.length + other.length)


WordLike = Union[Word, str]


def as_word(w: WordLike) -> Word:
    return w if isinstance(w, Word) else Word.from_str(w)


def letter(i: int) -> int:
    """Return ``omega_i`` (1-based)."""
    if i < 1:
        raise ValueError("positions start at 1")
    v2 = (i & -i).bit_length() - 1
    return v2 & 1


_ODD_EXPONENTS = np.uint64(0xAAAAAAAAAAAAAAAA)


_CHUNK = 1 << 22


def _by_valuation(n: int) -> np.ndarray:
    out = np.empty(n, dtype=np.uint8)
    for start in range(0, n, _CHUNK):
        i = np.arange(start + 1, min(start + _CHUNK, n) + 1, dtype=np.uint64)
        lowbit = i & (~i + np.uint64(1))
        out[start : start + i.size] = (lowbit & _ODD_EXPONENTS) != 0
    return out


def _by_substitution(n: int) -> np.ndarray:
    w = np.zeros(1, dtype=np.uint8)
    while w.size < n:
        w = _apply_substitution(w)
    return w[:n].copy()


def _apply_substitution(w: np.ndarray) -> np.ndarray:
    # 0 -> 01, 1 -> 00: every image starts with 0, second letter is 1 - a
    out = np.zeros(2 * w.size, dtype=np.uint8)
    out[1::2] = 1 - w
    return out


def _by_toeplitz(n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint8)
    holes = np.arange(n)
    symbol = 0
    while holes.size:
        out[holes[0::2]] = symbol
        holes = holes[1::2]
        symbol ^= 1
    return out


_BUILDERS = {
    GeneratorMethod.VALUATION: _by_valuation,
    GeneratorMethod.SUBSTITUTION: _by_substitution,
    GeneratorMethod.TOEPLITZ: _by_toeplitz,
}


class _PrefixCache:
    """Extend-only cache of a generated prefix, shared between threads.

    Readers take whatever array is currently published; a writer builds the
    longer array completely before swapping the reference in.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._letters = np.zeros(0, dtype=np.uint8)

    def get(self, n: int) -> np.ndarray:
        letters = self._letters
        if letters.size >= n:
            return letters[:n]
        with self._lock:
            if self._letters.size < n:
                size = max(n, 2 * self._letters.size, 1 << 12)
                cap = max_prefix()
                if n > cap:
                    raise ValueError(f"prefix of length {n} exceeds the cap {cap}")
                size = min(size, cap)
                fresh = _by_valuation(size)
                fresh.setflags(write=False)
                self._letters = fresh
            return self._letters[:n]


_cache = _PrefixCache()


def prefix_array(n: int, method: GeneratorMethod | str | None = None) -> np.ndarray:
    """``omega_1 ... omega_n`` as a uint8 array (read-only when cached)."""
    if n < 0:
        raise ValueError("prefix length must be nonnegative")
    if method is None:
        return _cache.get(n)
    if n > max_prefix():
        raise ValueError(f"prefix of length {n} exceeds the cap {max_prefix()}")
    return _BUILDERS[GeneratorMethod(method)](n)


def prefix(n: int, method: GeneratorMethod | str = GeneratorMethod.VALUATION) -> Word:
    """Return the prefix ``omega_1 ... omega_n`` built by ``method``."""
    return Word.from_array(prefix_array(n, method))


def substitution_image(w: WordLike) -> Word:
    """Apply the morphism ``0 -> 01, 1 -> 00`` letterwise."""
    w = as_word(w)
    return Word.from_array(_apply_substitution(w.to_array()))


def block(s: int, k: int) -> Word:
    """``zeta^k(s)``, the word written ``s^(2^k)``; it has length ``2^k``."""
    if s not in (0, 1):
        raise ValueError("symbol must be 0 or 1")
    if k < 0:
        raise ValueError("k must be nonnegative")
    w = np.array([s], dtype=np.uint8)
    for _ in range(k):
        w = _apply_substitution(w)
    return Word.from_array(w)
