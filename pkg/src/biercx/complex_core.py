"""Simplicial complexes on ``[n]`` stored as facet antichains of bit-sets.

Everything here is immutable.  Faces are ``int`` bit-sets (see
:mod:`biercx.bits`); a complex always contains the empty face.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

from .bits import (
    MAX_N,
    canonical_key,
    full,
    iter_bits,
    mask,
    popcount,
    submasks,
    subsets_of_size,
    vertices,
)

# Face sets larger than this are not materialised for membership tests.
_FACESET_LIMIT = 1 << 18


class ComplexError(ValueError):
    """Invalid construction input (vertex out of range, size cap, ...)."""


class PreconditionError(ValueError):
    """An operation was called outside its domain."""


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ComplexError(f"ground-set size must be in 1..{MAX_N}, got {n}")


@dataclass(frozen=True, eq=True)
class SimplicialComplex:
    """A complex ``K ⊆ 2^[n]`` given by its facets.

    The facet list is normalised on construction: duplicates and facets
    contained in other facets are dropped, and the survivors are sorted by
    ``(cardinality, bit pattern)``.  An empty list means ``{∅}``.
    """

    n: int
    facets: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        _check_n(self.n)
        ground = full(self.n)
        masks = set(self.facets)
        for f in masks:
            if f < 0 or f & ~ground:
                raise ComplexError(f"facet {vertices(f)} is not a subset of [{self.n}]")
        kept: list[int] = []
        for f in sorted(masks, key=popcount, reverse=True):
            if not any(f & ~g == 0 for g in kept):
                kept.append(f)
        if not kept:
            kept = [0]
        object.__setattr__(self, "facets", tuple(sorted(kept, key=canonical_key)))

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build from 1-based vertex lists."""
        _check_n(n)
        masks = []
        for fac in facets:
            fac = list(fac)
            for v in fac:
                if not isinstance(v, int) or not 1 <= v <= n:
                    raise ComplexError(f"vertex {v!r} out of range 1..{n}")
            masks.append(mask(fac))
        return cls(n, tuple(masks))

    @cached_property
    def _faceset(self) -> frozenset[int] | None:
        if sum(1 << popcount(f) for f in self.facets) > _FACESET_LIMIT:
            return None
        out: set[int] = set()
        for f in self.facets:
            out.update(submasks(f))
        return frozenset(out)

    def __contains__(self, face: int) -> bool:
        fs = self._faceset
        if fs is not None:
            return face in fs
        return any(face & ~g == 0 for g in self.facets)

    @property
    def dimension(self) -> int:
        return max(popcount(f) for f in self.facets) - 1

    @property
    def is_full_simplex(self) -> bool:
        return self.facets == (full(self.n),)

    def facet_lists(self) -> list[list[int]]:
        if self.facets == (0,):
            return []
        return [vertices(f) for f in self.facets]

    @cached_property
    def minimal_nonfaces(self) -> tuple[int, ...]:
        """Minimal non-faces (blockers), canonical order.

        A set is a non-face iff it meets the complement of every facet, so
        the blockers are the minimal transversals of those complements.
        """
        ground = full(self.n)
        transversals = [0]
        for g in self.facets:
            edge = ground & ~g
            hit = [t for t in transversals if t & edge]
            miss = [t for t in transversals if not t & edge]
            cand = set(hit)
            for t in miss:
                for b in iter_bits(edge):
                    cand.add(t | b)
            transversals = _minimal_sets(cand)
        return tuple(sorted(transversals, key=canonical_key))

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, facets={self.facet_lists()})"


def _minimal_sets(sets: Iterable[int]) -> list[int]:
    out: list[int] = []
    for s in sorted(set(sets), key=popcount):
        if not any(t & ~s == 0 for t in out):
            out.append(s)
    return out


def from_facets(n: int, facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    return SimplicialComplex.from_facets(n, facets)


def contains(K: SimplicialComplex, face: int) -> bool:
    return face in K


def simplex(n: int) -> SimplicialComplex:
    """The full simplex ``2^[n]``."""
    return SimplicialComplex(n, (full(n),))


def skeleton(n: int, k: int) -> SimplicialComplex:
    """All subsets of ``[n]`` of cardinality at most ``k``."""
    _check_n(n)
    if not 0 <= k <= n:
        raise ComplexError(f"skeleton size {k} outside 0..{n}")
    return SimplicialComplex(n, tuple(subsets_of_size(full(n), k)))


def boundary(n: int) -> SimplicialComplex:
    """``∂Δ^{n-1}``: every proper subset of ``[n]``."""
    return skeleton(n, n - 1)


def alexander_dual(K: SimplicialComplex) -> SimplicialComplex:
    """``K° = {F : [n] \\ F ∉ K}``; its facets are complements of blockers of K."""
    if K.is_full_simplex:
        raise PreconditionError("the full simplex has no Alexander dual")
    ground = full(K.n)
    return SimplicialComplex(K.n, tuple(ground & ~b for b in K.minimal_nonfaces))


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Join of K on ``[m]`` and L on ``[n]``; L's vertices are shifted by m."""
    if K.n + L.n > MAX_N:
        raise ComplexError(f"join would need {K.n + L.n} > {MAX_N} vertices")
    return SimplicialComplex(
        K.n + L.n, tuple(g | (h << K.n) for g in K.facets for h in L.facets)
    )


def faces(K: SimplicialComplex, dim: int | None = None) -> list[int]:
    """Every face of K (``∅`` included), sorted by (cardinality, bits).

    With ``dim`` given, only faces of that dimension (``dim=-1`` is ``∅``).
    """
    out: set[int] = set()
    if dim is None:
        for f in K.facets:
            out.update(submasks(f))
    else:
        for f in K.facets:
            if popcount(f) > dim:
                out.update(subsets_of_size(f, dim + 1))
        if dim == -1:
            out = {0}
    return sorted(out, key=canonical_key)


class ComplexTuple:
    """An ordered tuple ``⟨K_1, ..., K_r⟩`` of proper complexes on one ``[n]``."""

    __slots__ = ("n", "complexes")

    def __init__(self, complexes: Sequence[SimplicialComplex]):
        complexes = tuple(complexes)
        if len(complexes) < 2:
            raise ComplexError("a complex tuple needs at least two members")
        n = complexes[0].n
        for i, K in enumerate(complexes, 1):
            if K.n != n:
                raise ComplexError(f"member {i} lives on [{K.n}], expected [{n}]")
            if K.is_full_simplex:
                raise ComplexError(f"member {i} is the full simplex 2^[{n}]")
        self.n = n
        self.complexes = complexes

    @property
    def r(self) -> int:
        return len(self.complexes)

    def __len__(self) -> int:
        return len(self.complexes)

    def __iter__(self) -> Iterator[SimplicialComplex]:
        return iter(self.complexes)

    def __getitem__(self, i: int) -> SimplicialComplex:
        return self.complexes[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ComplexTuple) and self.complexes == other.complexes

    def __hash__(self) -> int:
        return hash(self.complexes)

    def __repr__(self) -> str:
        inner = ", ".join(str(K.facet_lists()) for K in self.complexes)
        return f"ComplexTuple(n={self.n}, [{inner}])"


class PartitionSimplex(NamedTuple):
    """A deleted-join face ``(A_1, ..., A_r; B)`` in partition notation."""

    parts: tuple[int, ...]
    rest: int

    @property
    def support(self) -> int:
        s = 0
        for a in self.parts:
            s |= a
        return s

    @property
    def dim(self) -> int:
        return popcount(self.support) - 1

    @classmethod
    def from_lists(cls, n: int, parts: Sequence[Iterable[int]]) -> "PartitionSimplex":
        masks = tuple(mask(p) for p in parts)
        union = 0
        for m in masks:
            if union & m:
                raise ComplexError("parts of a partition simplex must be disjoint")
            union |= m
        if union & ~full(n):
            raise ComplexError(f"partition uses vertices outside [{n}]")
        return cls(masks, full(n) & ~union)

    def as_lists(self) -> tuple[list[list[int]], list[int]]:
        return [vertices(a) for a in self.parts], vertices(self.rest)

    def key(self) -> tuple:
        return (self.dim, self.parts)

    def __str__(self) -> str:
        parts, rest = self.as_lists()
        body = ", ".join("{" + ",".join(map(str, p)) + "}" for p in parts)
        return f"({body}; {{{','.join(map(str, rest))}}})"


def _assign(T: ComplexTuple) -> list[PartitionSimplex]:
    """Every disjoint ``(A_1..A_r)`` with ``A_i ∈ K_i``, the empty one included."""
    r = T.r
    states: list[tuple[tuple[int, ...], int]] = [((0,) * r, 0)]
    for v in range(T.n):
        bit = 1 << v
        nxt = []
        for parts, rest in states:
            nxt.append((parts, rest | bit))
            for i, K in enumerate(T.complexes):
                cand = parts[i] | bit
                if cand in K:
                    nxt.append((parts[:i] + (cand,) + parts[i + 1 :], rest))
        states = nxt
    return [PartitionSimplex(p, b) for p, b in states]


class DeletedJoin:
    """``K_1 *_Δ ... *_Δ K_r``, enumerated in partition notation.

    The flattened view on ``[n] × [r]`` puts vertex ``i`` of block ``j``
    at index ``(j - 1) * n + i``.
    """

    def __init__(self, T: ComplexTuple, bier: bool = False):
        self.tuple = T
        self.n = T.n
        self.r = T.r
        self.bier = bier

    @cached_property
    def _all(self) -> list[PartitionSimplex]:
        return _assign(self.tuple)

    @cached_property
    def cells(self) -> list[PartitionSimplex]:
        """Non-empty faces, in enumeration order."""
        return [c for c in self._all if c.rest != full(self.n)]

    def __iter__(self) -> Iterator[PartitionSimplex]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, c: PartitionSimplex) -> bool:
        if len(c.parts) != self.r or c.support | c.rest != full(self.n) or c.support & c.rest:
            return False
        seen = 0
        for a, K in zip(c.parts, self.tuple.complexes):
            if a & seen or a not in K:
                return False
            seen |= a
        return c.rest != full(self.n)

    def is_maximal(self, c: PartitionSimplex) -> bool:
        for b in iter_bits(c.rest):
            for a, K in zip(c.parts, self.tuple.complexes):
                if a | b in K:
                    return False
        return True

    @cached_property
    def maximal_cells(self) -> list[PartitionSimplex]:
        return [c for c in self.cells if self.is_maximal(c)]

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def is_pure(self) -> bool:
        d = self.dimension
        return all(c.dim == d for c in self.maximal_cells)

    def f_vector(self) -> list[int]:
        f = [0] * (self.dimension + 1)
        for c in self.cells:
            f[c.dim] += 1
        return f

    def euler(self) -> int:
        """Unreduced Euler characteristic, empty face excluded."""
        return sum(-1 if c.dim % 2 else 1 for c in self.cells)

    def encode(self, c: PartitionSimplex) -> int:
        out = 0
        for j, a in enumerate(c.parts):
            out |= a << (j * self.n)
        return out

    def complex(self) -> SimplicialComplex:
        """Flattened complex on ``n * r`` vertices, facets = maximal cells."""
        if self.n * self.r > MAX_N:
            raise ComplexError(f"flattened view needs {self.n * self.r} > {MAX_N} vertices")
        facets = tuple(self.encode(c) for c in self.maximal_cells)
        return SimplicialComplex(self.n * self.r, facets)


def deleted_join(T: ComplexTuple) -> DeletedJoin:
    return DeletedJoin(T)


class NotAlexanderError(PreconditionError):
    def __init__(self, check):
        super().__init__(f"not an Alexander tuple: {check.reason}")
        self.check = check


def bier_complex(T: ComplexTuple) -> DeletedJoin:
    """Deleted join of an Alexander tuple; refuses anything else."""
    from .tuples import is_alexander_tuple

    check = is_alexander_tuple(T)
    if not check:
        raise NotAlexanderError(check)
    return DeletedJoin(T, bier=True)


def bier_sphere(K: SimplicialComplex) -> DeletedJoin:
    """``Bier(K) = K *_Δ K°``."""
    return DeletedJoin(ComplexTuple((K, alexander_dual(K))), bier=True)


def residual_complex(partial: Sequence[SimplicialComplex], r: int | None = None) -> SimplicialComplex:
    """The minimal Z making ``⟨K_1, ..., K_{r-1}, Z⟩`` collectively unavoidable.

    Generated by the complements of disjoint unions ``F_1 ∪ ... ∪ F_{r-1}``
    with ``F_j`` a minimal non-face of ``K_j``.
    """
    partial = list(partial)
    if r is None:
        r = len(partial) + 1
    if len(partial) != r - 1 or r < 2:
        raise PreconditionError(f"expected {r - 1} complexes for arity {r}, got {len(partial)}")
    n = partial[0].n
    if any(K.n != n for K in partial):
        raise ComplexError("all members must share the ground set")
    if any(K.is_full_simplex for K in partial):
        raise ComplexError("members must be proper subcomplexes")
    blockers = [K.minimal_nonfaces for K in partial]
    gens: set[int] = set()

    def rec(i: int, used: int) -> None:
        if i == len(blockers):
            gens.add(full(n) & ~used)
            return
        for b in blockers[i]:
            if not b & used:
                rec(i + 1, used | b)

    rec(0, 0)
    if not gens:
        raise PreconditionError(
            f"the {r - 1}-tuple is already collectively unavoidable; no residual complex"
        )
    return SimplicialComplex(n, tuple(gens))


def random_complex(n: int, rng: random.Random, max_facets: int | None = None) -> SimplicialComplex:
    """A random proper complex on ``[n]`` (facets drawn as random subsets)."""
    if max_facets is None:
        max_facets = n + 2
    ground = full(n)
    while True:
        k = rng.randint(0, max_facets)
        density = rng.uniform(0.2, 0.8)
        facets = []
        for _ in range(k):
            f = 0
            for v in range(n):
                if rng.random() < density:
                    f |= 1 << v
            facets.append(f)
        K = SimplicialComplex(n, tuple(facets))
        if not K.facets == (ground,):
            return K


def enumerate_complexes(n: int, proper: bool = True) -> Iterator[SimplicialComplex]:
    """Every complex on ``[n]`` (the full simplex skipped when ``proper``)."""
    order = sorted(range(1, 1 << n), key=canonical_key)
    chosen: set[int] = {0}

    def rec(idx: int) -> Iterator[SimplicialComplex]:
        if idx == len(order):
            yield SimplicialComplex(n, tuple(chosen))
            return
        s = order[idx]
        yield from rec(idx + 1)
        if all(s ^ b in chosen for b in iter_bits(s)):
            chosen.add(s)
            yield from rec(idx + 1)
            chosen.discard(s)

    for K in rec(0):
        if proper and K.is_full_simplex:
            continue
        yield K
