"""Collective unavoidability, Alexander tuples and their classification."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Sequence

from .bits import full, iter_bits, popcount, subsets_of_size, vertices
from .complex_core import (
    ComplexTuple,
    DeletedJoin,
    PartitionSimplex,
    PreconditionError,
    SimplicialComplex,
    alexander_dual,
    random_complex,
    residual_complex,
)


class UnavoidabilityResult(NamedTuple):
    """Truthy iff unavoidable; otherwise ``witness`` is a violating tuple."""

    unavoidable: bool
    witness: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.unavoidable


def is_collectively_unavoidable(T: ComplexTuple) -> UnavoidabilityResult:
    """Search for disjoint ``(A_1..A_r)`` with every ``A_i ∉ K_i``.

    Non-faces are closed upwards, so a violation exists iff one exists made
    of minimal non-faces; the reported witness is the lexicographically
    least one under the canonical ``(cardinality, bits)`` order.
    """
    r = T.r
    blockers = [K.minimal_nonfaces for K in T]

    @lru_cache(maxsize=None)
    def feasible(i: int, avail: int) -> bool:
        if i == r:
            return True
        return any(not b & ~avail and feasible(i + 1, avail & ~b) for b in blockers[i])

    avail = full(T.n)
    if not feasible(0, avail):
        return UnavoidabilityResult(True, None)
    witness = []
    for i in range(r):
        for b in blockers[i]:
            if not b & ~avail and feasible(i + 1, avail & ~b):
                witness.append(b)
                avail &= ~b
                break
    return UnavoidabilityResult(False, tuple(witness))


def _max_bipartite_matching(adj: list[list[int]], r: int) -> int:
    owner = [-1] * r

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if owner[v] == -1 or augment(owner[v], seen):
                    owner[v] = u
                    return True
        return False

    return sum(augment(u, [False] * r) for u in range(len(adj)))


def _set_partitions(n: int, k: int):
    """Partitions of ``[n]`` into at most ``k`` blocks, blocks ordered by minimum."""
    blocks: list[int] = []

    def rec(v: int):
        if v == n:
            yield tuple(blocks)
            return
        bit = 1 << v
        for i in range(len(blocks)):
            blocks[i] |= bit
            yield from rec(v + 1)
            blocks[i] ^= bit
        if len(blocks) < k:
            blocks.append(bit)
            yield from rec(v + 1)
            blocks.pop()

    yield from rec(0)


def is_collectively_unavoidable_hall(T: ComplexTuple) -> bool:
    """Same answer via the marriage condition.

    For each unordered cover of ``[n]`` by r disjoint (possibly empty) blocks,
    the graph ``{(i, j) : A_i ∉ K_j}`` must have no perfect matching.
    Covers suffice because enlarging blocks keeps non-membership.
    """
    r = T.r
    for blocks in _set_partitions(T.n, r):
        padded = blocks + (0,) * (r - len(blocks))
        adj = [[j for j, K in enumerate(T) if a not in K] for a in padded]
        if _max_bipartite_matching(adj, r) == r:
            return False
    return True


def frobenius_check(T: ComplexTuple, A: Sequence[int]) -> bool:
    """Is there ``S, T' ⊆ [r]``, ``|S| + |T'| = r + 1``, with ``A_i ∈ K_j`` on ``S × T'``?"""
    r = T.r
    if len(A) != r:
        raise PreconditionError(f"expected {r} blocks, got {len(A)}")
    seen = 0
    for a in A:
        if a & seen:
            raise PreconditionError("blocks must be pairwise disjoint")
        seen |= a
    rows = [frozenset(j for j, K in enumerate(T) if a in K) for a in A]
    for s in range(1, r + 1):
        for S in combinations(range(r), s):
            common = frozenset(range(r)).intersection(*(rows[i] for i in S))
            if len(common) >= r + 1 - s:
                return True
    return False


class MaximalTuple(NamedTuple):
    cell: PartitionSimplex
    uncovered: int


def maximal_disjoint_tuples(T: ComplexTuple) -> list[MaximalTuple]:
    """Maximal disjoint ``(A_1..A_r)`` with ``A_i ∈ K_i``, with ``|[n] \\ ∪A_i|``."""
    dj = DeletedJoin(T)
    return [MaximalTuple(c, popcount(c.rest)) for c in dj._all if dj.is_maximal(c)]


class AlexanderCheck(NamedTuple):
    ok: bool
    reason: str
    witness: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.ok


def is_alexander_tuple(T: ComplexTuple) -> AlexanderCheck:
    u = is_collectively_unavoidable(T)
    if not u:
        return AlexanderCheck(False, "not collectively unavoidable", u.witness)
    for m in maximal_disjoint_tuples(T):
        if m.uncovered < T.r - 1:
            return AlexanderCheck(
                False,
                f"a maximal disjoint tuple leaves {m.uncovered} < {T.r - 1} vertices uncovered",
                m.cell.parts,
            )
    return AlexanderCheck(True, "", None)


def remove_facet(K: SimplicialComplex, facet: int) -> SimplicialComplex:
    """K with one facet deleted (its boundary stays)."""
    if facet not in K.facets:
        raise PreconditionError(f"{vertices(facet)} is not a facet")
    if facet == 0:
        raise PreconditionError("cannot remove the empty face")
    rest = [f for f in K.facets if f != facet]
    rest.extend(facet ^ b for b in iter_bits(facet))
    return SimplicialComplex(K.n, tuple(rest))


def is_minimal_unavoidable(T: ComplexTuple) -> bool:
    """True iff deleting any single facet of any member breaks unavoidability."""
    if not is_collectively_unavoidable(T):
        raise PreconditionError("tuple is not collectively unavoidable")
    members = list(T)
    for i, K in enumerate(members):
        for f in K.facets:
            if f == 0:
                continue
            trial = members[:i] + [remove_facet(K, f)] + members[i + 1 :]
            if is_collectively_unavoidable(ComplexTuple(trial)):
                return False
    return True


DUAL_PAIR = "DualPair"
PURE_SKELETON = "PureSkeleton"
SKELETON_JOIN_SIMPLEX = "SkeletonJoinSimplex"
NOT_ALEXANDER = "NotAlexander"


@dataclass(frozen=True)
class AlexanderClassification:
    kind: str
    m: tuple[int, ...] = ()
    cone: int = 0

    def reconstruct(self, T: ComplexTuple) -> ComplexTuple:
        """Rebuild the tuple from the parameters (DualPair needs ``K_1`` from T)."""
        n = T.n
        if self.kind == DUAL_PAIR:
            return ComplexTuple((T[0], alexander_dual(T[0])))
        if self.kind in (PURE_SKELETON, SKELETON_JOIN_SIMPLEX):
            return ComplexTuple([skeleton_cone(n, mi, self.cone) for mi in self.m])
        raise PreconditionError("nothing to reconstruct for a non-Alexander tuple")

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": list(self.m), "cone": vertices(self.cone)}


def skeleton_cone(n: int, k: int, cone: int) -> SimplicialComplex:
    """``(W choose ≤ k) * Δ(C)`` on ``[n]`` with ``C = cone``, ``W = [n] \\ C``."""
    W = full(n) & ~cone
    return SimplicialComplex(n, tuple(s | cone for s in subsets_of_size(W, k)))


def cone_points(K: SimplicialComplex) -> int:
    """Vertices lying in every facet."""
    out = full(K.n)
    for f in K.facets:
        out &= f
    return out


def classify_alexander_tuple(T: ComplexTuple) -> AlexanderClassification:
    if not is_alexander_tuple(T):
        return AlexanderClassification(NOT_ALEXANDER)
    if T.r == 2:
        if T[1] == alexander_dual(T[0]):
            return AlexanderClassification(DUAL_PAIR)
        raise RuntimeError(f"Alexander pair that is not a dual pair: {T}")
    C = full(T.n)
    for K in T:
        C &= cone_points(K)
    W = full(T.n) & ~C
    m = tuple(max(popcount(f & W) for f in K.facets) for K in T)
    if popcount(W) == sum(m) + T.r - 1 and all(
        K == skeleton_cone(T.n, mi, C) for K, mi in zip(T, m)
    ):
        return AlexanderClassification(SKELETON_JOIN_SIMPLEX if C else PURE_SKELETON, m, C)
    raise RuntimeError(f"Alexander tuple outside the three known families: {T}")


def sample_unavoidable(n: int, r: int, rng: random.Random) -> ComplexTuple:
    """A random collectively unavoidable r-tuple on ``[n]``.

    Draws ``r - 1`` random complexes, completes them by the residual
    complex enlarged with a few random faces, then shuffles the order.
    """
    ground = full(n)
    while True:
        partial = [random_complex(n, rng) for _ in range(r - 1)]
        try:
            Z = residual_complex(partial, r)
        except PreconditionError:
            # the partial tuple admits no disjoint non-faces, so any Z works
            members = partial + [random_complex(n, rng)]
            rng.shuffle(members)
            return ComplexTuple(members)
        extra = []
        for _ in range(rng.randint(0, 2)):
            f = 0
            for v in range(n):
                if rng.random() < 0.4:
                    f |= 1 << v
            extra.append(f)
        Z2 = SimplicialComplex(n, Z.facets + tuple(extra))
        if Z2.facets == (ground,):
            Z2 = Z
        members = partial + [Z2]
        rng.shuffle(members)
        return ComplexTuple(members)


def random_tuple(n: int, r: int, rng: random.Random) -> ComplexTuple:
    return ComplexTuple([random_complex(n, rng) for _ in range(r)])
