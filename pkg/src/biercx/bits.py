"""Bit-set helpers.

A subset of the ground set ``[n] = {1, ..., n}`` is an ``int`` whose bit
``i - 1`` is set iff vertex ``i`` belongs to the subset.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

MAX_N = 63


def mask(vertices: Iterable[int]) -> int:
    """Encode 1-based vertices as a bit-set."""
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def vertices(m: int) -> list[int]:
    """Decode a bit-set into its sorted 1-based vertices."""
    out = []
    v = 1
    while m:
        if m & 1:
            out.append(v)
        m >>= 1
        v += 1
    return out


def popcount(m: int) -> int:
    return bin(m).count("1")


def lowest(m: int) -> int:
    """1-based index of the smallest vertex of a non-empty set."""
    return (m & -m).bit_length()


def full(n: int) -> int:
    return (1 << n) - 1


def iter_bits(m: int) -> Iterator[int]:
    """Yield the single-bit masks of ``m`` in increasing vertex order."""
    while m:
        low = m & -m
        yield low
        m ^= low


def submasks(m: int) -> Iterator[int]:
    """All subsets of ``m`` (including ``0`` and ``m`` itself)."""
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def canonical_key(m: int) -> tuple[int, int]:
    """Sort key used everywhere: cardinality first, then bit pattern."""
    return (popcount(m), m)


def subsets_of_size(ground: int, k: int) -> list[int]:
    """All ``k``-subsets of ``ground`` in canonical order."""
    out = []
    for combo in combinations(list(iter_bits(ground)), k):
        s = 0
        for b in combo:
            s |= b
        out.append(s)
    out.sort()
    return out


def sorted_subsets(ground: int) -> list[int]:
    return sorted(submasks(ground), key=canonical_key)


def below(v: int) -> int:
    """Mask of the segment ``[1, v]``."""
    return (1 << v) - 1
