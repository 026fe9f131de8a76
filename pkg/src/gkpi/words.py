"""Words in the free monoid on a finite alphabet.

A word is a plain tuple of letter indices ``0 <= a < alphabet_size``; the
empty tuple is the unit word. Letter order is the index order, which for
matrix presentations is the order the generators were given in.
"""

from __future__ import annotations

from enum import IntEnum
from itertools import product
from typing import Iterator, NamedTuple, Sequence

from .errors import (BudgetExceeded, InputError, LengthMismatch, NotPeriodic,
                     SublengthTooLarge)

Word = tuple


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def check_word(w: Sequence[int], alphabet_size: int) -> Word:
    w = tuple(w)
    for i, a in enumerate(w):
        if not isinstance(a, int) or not 0 <= a < alphabet_size:
            raise InputError(f"letter {a!r} at position {i} is outside an alphabet of size {alphabet_size}")
    return w


def compare_lex(w1: Word, w2: Word) -> Ordering:
    """Lexicographic order on words of one fixed length."""
    if len(w1) != len(w2):
        raise LengthMismatch(f"lexicographic order compares equal lengths, got {len(w1)} and {len(w2)}")
    t1, t2 = tuple(w1), tuple(w2)
    return Ordering((t1 > t2) - (t1 < t2))


def lenlex_key(w: Word) -> tuple:
    return (len(w), tuple(w))


def compare_lenlex(w1: Word, w2: Word) -> Ordering:
    """Shorter words first, ties broken lexicographically (a well-order)."""
    k1, k2 = lenlex_key(w1), lenlex_key(w2)
    return Ordering((k1 > k2) - (k1 < k2))


def enumerate_words(alphabet_size: int, length: int, cap: int | None = None) -> Iterator[Word]:
    """All words of the given length, in increasing lexicographic order."""
    if alphabet_size < 1 or length < 0:
        raise InputError("need alphabet_size >= 1 and length >= 0")
    if cap is not None and alphabet_size ** length > cap:
        raise BudgetExceeded(f"{alphabet_size}^{length} words exceeds the cap of {cap}")
    return product(range(alphabet_size), repeat=length)


def consecutive_subwords(w: Word, sublength: int) -> list[tuple[int, Word]]:
    """Pairs (start, subword) for every window of ``sublength`` letters."""
    w = tuple(w)
    if sublength < 0 or sublength > len(w):
        raise SublengthTooLarge(f"sublength {sublength} does not fit in a word of length {len(w)}")
    return [(j, w[j:j + sublength]) for j in range(len(w) - sublength + 1)]


class PowerDecomposition(NamedTuple):
    prefix: Word
    base: Word
    exponent: int
    suffix: Word

    def reassemble(self) -> Word:
        return self.prefix + self.base * self.exponent + self.suffix


def power_decompose(w: Word, p: int, q: int, n: int, sublength: int | None = None) -> PowerDecomposition:
    """Split ``w`` as prefix * u^n * suffix from two equal windows.

    ``p < q`` are 1-based starts of two windows of length ``sublength`` that
    hold identical letter sequences. The window equality makes the stretch
    from ``p`` periodic with period ``q - p``, so u = w[p..q-1] repeats ``n``
    times starting at ``p``. By default ``w`` has length ell*(n+1) and
    ``sublength`` is ell*n.
    """
    w = tuple(w)
    if n < 1:
        raise InputError("exponent n must be at least 1")
    if sublength is None:
        if len(w) % (n + 1):
            raise NotPeriodic(f"length {len(w)} is not a multiple of n+1 = {n + 1}")
        sublength = len(w) - len(w) // (n + 1)
    if not 1 <= p < q or q - 1 + sublength > len(w):
        raise NotPeriodic(f"windows at {p} and {q} of length {sublength} do not fit in a word of length {len(w)}")
    period = q - p
    if (n - 1) * period > sublength:
        raise NotPeriodic(f"period {period} repeated {n} times overruns the periodic stretch")
    if w[p - 1:p - 1 + sublength] != w[q - 1:q - 1 + sublength]:
        raise NotPeriodic(f"windows at {p} and {q} differ as letter sequences")
    start = p - 1
    dec = PowerDecomposition(w[:start], w[start:start + period], n, w[start + n * period:])
    assert dec.reassemble() == w
    return dec


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    if not w:
        return "1"
    if names is None:
        return "(" + ",".join(map(str, w)) + ")"
    return "*".join(names[a] for a in w)
