"""Reduced simplicial homology over GF(2) by boundary-matrix rank.

Boundary columns are Python ints used as bit vectors; ranks come from
XOR elimination on the lowest set bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import canonical_key, iter_bits, popcount, submasks
from .complex_core import SimplicialComplex

DEFAULT_BUDGET = 2_000_000


class OracleBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class BettiProfile:
    """Reduced Betti numbers ``b̃_0 .. b̃_d`` and the unreduced Euler number.

    ``minus_one`` is ``b̃_{-1}``, which is 1 only for the complex ``{∅}``.
    """

    reduced: tuple[int, ...]
    euler: int
    minus_one: int = 0

    def __getitem__(self, i: int) -> int:
        if i == -1:
            return self.minus_one
        return self.reduced[i] if 0 <= i < len(self.reduced) else 0

    def to_json(self) -> list[int]:
        return list(self.reduced)


def _faces_by_dim(K: SimplicialComplex, budget: int) -> list[list[int]]:
    if sum(1 << popcount(f) for f in K.facets) > 4 * budget:
        raise OracleBudgetError("complex exceeds the homology budget")
    seen: set[int] = set()
    for f in K.facets:
        seen.update(submasks(f))
        if len(seen) > budget:
            raise OracleBudgetError(f"more than {budget} faces")
    return _layers(seen)


def _layers(faces) -> list[list[int]]:
    """``layers[k]`` holds the faces with k vertices (dimension k-1)."""
    top = max(popcount(f) for f in faces)
    layers: list[list[int]] = [[] for _ in range(top + 1)]
    for f in sorted(faces, key=canonical_key):
        layers[popcount(f)].append(f)
    return layers


def _betti_from_layers(layers: list[list[int]]) -> BettiProfile:
    # Top-down with clearing: a k-face that is a pivot of the (k+1)-boundary
    # reduction can be dropped from the k-boundary, since the reduced
    # boundaries span a complement of the remaining columns and are cycles.
    ranks = [0] * (len(layers) + 1)  # ranks[k]: rank of the map from k-vertex faces
    cleared: set[int] = set()
    for k in range(len(layers) - 1, 0, -1):
        index = {f: i for i, f in enumerate(layers[k - 1])}
        pivots: dict[int, int] = {}
        for f in layers[k]:
            if f in cleared:
                continue
            col = 0
            for b in iter_bits(f):
                col |= 1 << index[f ^ b]
            while col:
                low = col & -col
                p = pivots.get(low)
                if p is None:
                    pivots[low] = col
                    break
                col ^= p
        ranks[k] = len(pivots)
        below = layers[k - 1]
        cleared = {below[low.bit_length() - 1] for low in pivots}
    betti = [len(layers[k]) - ranks[k] - ranks[k + 1] for k in range(len(layers))]
    euler = sum((-1) ** (k - 1) * len(layers[k]) for k in range(1, len(layers)))
    return BettiProfile(tuple(betti[1:]), euler, betti[0])


def betti_mod2(K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> BettiProfile:
    return _betti_from_layers(_faces_by_dim(K, budget))


def betti_of_faces(faces, budget: int = DEFAULT_BUDGET) -> BettiProfile:
    """Betti numbers of a complex given by its full face list (``∅`` included).

    The list must be closed under taking subsets.
    """
    faces = set(faces)
    if len(faces) > budget:
        raise OracleBudgetError(f"more than {budget} faces")
    if 0 not in faces:
        raise ValueError("face list must contain the empty face")
    return _betti_from_layers(_layers(faces))


def deleted_join_betti(dj, budget: int = DEFAULT_BUDGET) -> BettiProfile:
    """Betti numbers of a deleted join, straight from its encoded cells."""
    return betti_of_faces((dj.encode(c) for c in dj._all), budget)


def homological_connectivity(K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> int:
    """Largest c with ``b̃_i = 0`` for all ``i ≤ c``.

    ``-1`` when ``b̃_0 ≠ 0``, ``-2`` for ``{∅}``; an acyclic complex reports
    its own dimension.
    """
    prof = betti_mod2(K, budget)
    if prof.minus_one:
        return -2
    for i, b in enumerate(prof.reduced):
        if b:
            return i - 1
    return len(prof.reduced) - 1
