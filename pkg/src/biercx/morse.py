"""Discrete Morse matchings on deleted joins.

The generic field comes from the *movable vector* of a cell: for
``(A_1, ..., A_r; B)`` put ``a_1 = min(B ∪ A_1)`` and
``a_i = min((B ∪ A_i) \\ [1, a_{i-1}])``, with an absorbing ``∞`` once a
pool runs dry.  A cell is paired by moving its first movable entry
(``a_j ∈ A_j``, or ``a_j ∈ B`` with ``A_j ∪ a_j ∈ K_j``) and is critical when
there is none.  The only exception is ``({1}, ∅, ..., ∅; [n] \\ {1})``
whose move would reach the empty face; it stays critical.

Fields are computed after relabelling so that ``{1} ∈ K_1`` and reported
in the caller's labels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from itertools import combinations
from typing import Callable, NamedTuple

from .bits import below, full, iter_bits, lowest, popcount
from .complex_core import (
    ComplexTuple,
    DeletedJoin,
    PartitionSimplex,
    PreconditionError,
    SimplicialComplex,
    alexander_dual,
    skeleton,
)


class DMFError(RuntimeError):
    """A constructed field failed an internal consistency check."""


def _inf(c: PartitionSimplex) -> int:
    return (c.support | c.rest).bit_length() + 1


def movable_vector(c: PartitionSimplex, n: int | None = None) -> tuple[int, ...]:
    """``(a_1, ..., a_r)``; ``∞`` is encoded as ``n + 1``."""
    inf = n + 1 if n is not None else _inf(c)
    out = []
    seen = 0
    for a in c.parts:
        pool = (c.rest | a) & ~seen
        if not pool:
            break
        low = pool & -pool
        out.append(low.bit_length())
        seen = (low << 1) - 1
    out.extend([inf] * (len(c.parts) - len(out)))
    return tuple(out)


class Match(NamedTuple):
    """Outcome of the matching rule for one cell.

    ``direction`` is ``"up"`` (the cell is the lower end), ``"down"`` or
    ``"critical"``; ``step`` is the 1-based block that receives the
    migrating vertex.
    """

    direction: str
    partner: PartitionSimplex | None
    step: int


CRITICAL = Match("critical", None, 0)


def _match(c: PartitionSimplex, complexes) -> Match:
    parts, rest = c.parts, c.rest
    seen = 0
    for k, (a, K) in enumerate(zip(parts, complexes)):
        pool = (rest | a) & ~seen
        if not pool:
            return CRITICAL
        low = pool & -pool
        if low & rest:
            if a | low in K:
                new = parts[:k] + (a | low,) + parts[k + 1 :]
                return Match("up", PartitionSimplex(new, rest ^ low), k + 1)
        else:
            new = parts[:k] + (a ^ low,) + parts[k + 1 :]
            if not any(new):
                return CRITICAL
            return Match("down", PartitionSimplex(new, rest | low), k + 1)
        seen = (low << 1) - 1
    return CRITICAL


def match_cell(c: PartitionSimplex, T: ComplexTuple) -> Match:
    """Apply the matching rule to one cell, in T's own labels (no relabelling)."""
    return _match(c, T.complexes)


@dataclass(frozen=True)
class Relabel:
    """Vertex permutation plus block rotation used to get ``{1} ∈ K_1``.

    ``perm[v - 1]`` is the new label of old vertex ``v``; new block ``i``
    is old block ``order[i]``.
    """

    perm: tuple[int, ...]
    order: tuple[int, ...]

    @property
    def identity(self) -> bool:
        return all(p == i + 1 for i, p in enumerate(self.perm)) and all(
            o == i for i, o in enumerate(self.order)
        )

    def _map(self, m: int, perm: tuple[int, ...]) -> int:
        out = 0
        for b in iter_bits(m):
            out |= 1 << (perm[b.bit_length() - 1] - 1)
        return out

    @property
    def _inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p - 1] = i + 1
        return tuple(inv)

    def complex(self, K: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(K.n, tuple(self._map(f, self.perm) for f in K.facets))

    def tuple(self, T: ComplexTuple) -> ComplexTuple:
        return ComplexTuple([self.complex(T[o]) for o in self.order])

    def forward(self, c: PartitionSimplex) -> PartitionSimplex:
        parts = tuple(self._map(c.parts[o], self.perm) for o in self.order)
        return PartitionSimplex(parts, self._map(c.rest, self.perm))

    def backward(self, c: PartitionSimplex) -> PartitionSimplex:
        inv = self._inverse
        parts = [0] * len(self.order)
        for i, o in enumerate(self.order):
            parts[o] = self._map(c.parts[i], inv)
        return PartitionSimplex(tuple(parts), self._map(c.rest, inv))


def _transposition(n: int, v: int) -> tuple[int, ...]:
    perm = list(range(1, n + 1))
    perm[0], perm[v - 1] = v, 1
    return tuple(perm)


def choose_relabel(T: ComplexTuple) -> Relabel | None:
    """Smallest block holding a vertex goes first; its least vertex becomes 1.

    ``None`` when no member has a vertex (the deleted join has no cells).
    """
    r = T.r
    for j, K in enumerate(T):
        verts = 0
        for f in K.facets:
            verts |= f
        if verts:
            v = lowest(verts)
            order = tuple(range(j, r)) + tuple(range(j))
            return Relabel(_transposition(T.n, v), order)
    return None


class Pairing(NamedTuple):
    partner: PartitionSimplex
    up: bool
    step: int


@dataclass
class DiscreteVectorField:
    """A matching on the cells of a deleted join.

    ``pairs`` holds both ends of every pair; ``up`` is true on the lower
    cell.  ``order_key`` (when set) is the movable vector in the labels the
    construction ran in, used as the acyclicity certificate.
    """

    tuple: ComplexTuple
    kind: str
    pairs: dict[PartitionSimplex, Pairing]
    cells: list[PartitionSimplex]
    relabel: Relabel | None = None
    order_key: Callable[[PartitionSimplex], tuple] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def critical(self) -> list[PartitionSimplex]:
        return sorted((c for c in self.cells if c not in self.pairs), key=PartitionSimplex.key)

    def status(self, c: PartitionSimplex) -> str:
        p = self.pairs.get(c)
        if p is None:
            return "critical"
        return "up" if p.up else "down"


def _assemble(T, kind, raw, rel, order_key=None) -> DiscreteVectorField:
    """``raw`` maps relabelled cells to Match values; returns a checked field."""
    pairs: dict[PartitionSimplex, Pairing] = {}
    cells = []
    back = (lambda c: c) if rel is None or rel.identity else rel.backward
    order = rel.order if rel is not None else tuple(range(T.r))
    for c, m in raw.items():
        oc = back(c)
        cells.append(oc)
        if m.direction == "critical":
            continue
        back_m = raw.get(m.partner)
        if back_m is None or back_m.partner != c or back_m.direction == m.direction:
            raise DMFError(f"matching is not an involution at {oc}")
        pairs[oc] = Pairing(back(m.partner), m.direction == "up", order[m.step - 1] + 1)
    return DiscreteVectorField(T, kind, pairs, cells, rel, order_key)


def _empty_field(T: ComplexTuple, kind: str) -> DiscreteVectorField:
    return DiscreteVectorField(T, kind, {}, [], None)


def build_dmf(T: ComplexTuple) -> DiscreteVectorField:
    """The generic field on ``K_1 *_Δ ... *_Δ K_r``."""
    rel = choose_relabel(T)
    if rel is None:
        return _empty_field(T, "d")
    T2 = rel.tuple(T)
    raw = {c: _match(c, T2.complexes) for c in DeletedJoin(T2).cells}
    key = (lambda c: movable_vector(c, T.n)) if rel.identity else (
        lambda c: movable_vector(rel.forward(c), T.n)
    )
    return _assemble(T, "d", raw, rel, key)


def build_dmf_stepwise(T: ComplexTuple) -> DiscreteVectorField:
    """The same field assembled block by block.

    Step k pairs every still-active cell whose least free vertex ``x`` lies
    below ``A_k \\ [1, i_{k-1}]`` with the cell obtained by migrating ``x``
    into ``A_k``, when that coface is also still active.  Unpaired cells
    either record ``i_k`` and stay active (first type) or freeze (second
    type: no free vertex left and ``A_k ⊆ [1, i_{k-1}]``).
    """
    rel = choose_relabel(T)
    if rel is None:
        return _empty_field(T, "stepwise")
    T2 = rel.tuple(T)
    cells = DeletedJoin(T2).cells
    ground = full(T.n)
    # active cell -> (mask of recorded i's, last i)
    active = {c: (0, 0) for c in cells}
    raw: dict[PartitionSimplex, Match] = {}
    zero = PartitionSimplex((1,) + (0,) * (T.r - 1), ground ^ 1)
    if zero in active:
        del active[zero]
        raw[zero] = CRITICAL
    for k, K in enumerate(T2.complexes):
        matched = set()
        for c, (used, last) in active.items():
            if c in matched:
                continue
            free = c.rest & ~used
            if not free:
                continue
            x = free & -free
            a = c.parts[k]
            upper = a & ~below(last)
            if upper and (upper & -upper) < x:
                continue
            if a | x not in K:
                continue
            beta = PartitionSimplex(c.parts[:k] + (a | x,) + c.parts[k + 1 :], c.rest ^ x)
            if active.get(beta) != (used, last) or beta in matched:
                continue
            raw[c] = Match("up", beta, k + 1)
            raw[beta] = Match("down", c, k + 1)
            matched.update((c, beta))
        survivors = {}
        for c, (used, last) in active.items():
            if c in matched:
                continue
            free = c.rest & ~used
            a = c.parts[k]
            upper = a & ~below(last)
            if not free and not upper:
                raw[c] = CRITICAL  # second type
                continue
            i_k = free & -free
            if free and (not upper or i_k < (upper & -upper)) and a | i_k not in K:
                survivors[c] = (used | i_k, i_k.bit_length())
                continue
            raise DMFError(f"cell {c} is neither paired nor of first or second type at step {k + 1}")
        active = survivors
    for c in active:
        raw[c] = CRITICAL
    return _assemble(T, "stepwise", raw, rel)


def _d1_step1(c: PartitionSimplex, Kd: SimplicialComplex) -> Match | None:
    A1, A2 = c.parts
    pool = c.rest | A2
    if not pool:
        return None
    i = pool & -pool
    if i & c.rest:
        if A2 | i in Kd:
            return Match("up", PartitionSimplex((A1, A2 | i), c.rest ^ i), 2)
        return None
    if not A1 and A2 == i:
        return None
    return Match("down", PartitionSimplex((A1, A2 ^ i), c.rest | i), 2)


def _d1_step2(c: PartitionSimplex, K: SimplicialComplex, Kd: SimplicialComplex) -> Match | None:
    A1, A2 = c.parts
    pool = c.rest | A1
    if not pool:
        return None
    j = 1 << (pool.bit_length() - 1)
    if j & c.rest:
        if A1 | j not in K:
            return None
        other = PartitionSimplex((A1 | j, A2), c.rest ^ j)
        direction = "up"
    else:
        if A1 == j and not A2:
            return None
        other = PartitionSimplex((A1 ^ j, A2), c.rest | j)
        direction = "down"
    if _d1_step1(other, Kd) is not None:
        return None
    return Match(direction, other, 1)


def _d2_step2(c: PartitionSimplex, K: SimplicialComplex, Kd: SimplicialComplex) -> Match | None:
    A1, A2 = c.parts
    pool = c.rest | A2
    if not pool:
        return None
    i = pool & -pool
    if not i & c.rest:
        return None
    pool = (c.rest ^ i | A1) & ~below(i.bit_length())
    if not pool:
        return None
    j = pool & -pool
    if j & c.rest:
        if A1 | j not in K:
            return None
        other = PartitionSimplex((A1 | j, A2), c.rest ^ j)
        direction = "up"
    else:
        if A1 == j and not A2:
            return None
        other = PartitionSimplex((A1 ^ j, A2), c.rest | j)
        direction = "down"
    if _d1_step1(other, Kd) is not None:
        return None
    return Match(direction, other, 1)


def _bier_field(K: SimplicialComplex, kind: str) -> DiscreteVectorField:
    Kd = alexander_dual(K)
    T = ComplexTuple((K, Kd))
    verts = 0
    for f in Kd.facets:
        verts |= f
    if not verts:
        F = build_dmf(T)
        F.kind = kind
        F.notes.append("dual is {∅}: no vertex can be moved to 1; generic field used")
        return F
    rel = Relabel(_transposition(K.n, lowest(verts)), (0, 1))
    T2 = rel.tuple(T)
    K2, Kd2 = T2.complexes
    step2 = _d1_step2 if kind == "d1" else _d2_step2
    raw = {}
    for c in DeletedJoin(T2).cells:
        m = _d1_step1(c, Kd2) or step2(c, K2, Kd2) or CRITICAL
        raw[c] = m
    key = None
    if kind == "d2":
        # D2 is the generic field on the swapped pair (K°, K)
        key = lambda c: movable_vector(PartitionSimplex(rel.forward(c).parts[::-1], rel.forward(c).rest), K.n)
    return _assemble(T, kind, raw, rel, key)


def bier_dmf_d1(K: SimplicialComplex) -> DiscreteVectorField:
    """First perfect field on ``Bier(K)``: step 1 grows ``A_2`` by its least
    candidate, step 2 grows ``A_1`` by the largest vertex of ``B ∪ A_1``."""
    return _bier_field(K, "d1")


def bier_dmf_d2(K: SimplicialComplex) -> DiscreteVectorField:
    """Second perfect field on ``Bier(K)``: step 1 as in D1; step 2 grows ``A_1``
    by the least vertex of ``(B ∪ A_1)`` above the step-1 candidate ``i``.

    Step 2 tests ``A_1 ∪ j ∈ K`` (``A_1`` carries faces of K).
    """
    return _bier_field(K, "d2")


@dataclass
class ValidityReport:
    valid: bool
    problems: list[str]
    cycle: list[PartitionSimplex] | None = None

    def __bool__(self) -> bool:
        return self.valid


def _facets_of(c: PartitionSimplex):
    for k, a in enumerate(c.parts):
        for b in iter_bits(a):
            new = c.parts[:k] + (a ^ b,) + c.parts[k + 1 :]
            if any(new):
                yield PartitionSimplex(new, c.rest | b)


def _is_elementary_coface(lo: PartitionSimplex, hi: PartitionSimplex) -> bool:
    moved = lo.rest & ~hi.rest
    if popcount(moved) != 1 or hi.rest | moved != lo.rest:
        return False
    diff = [k for k, (a, b) in enumerate(zip(lo.parts, hi.parts)) if a != b]
    return len(diff) == 1 and hi.parts[diff[0]] == lo.parts[diff[0]] | moved


def verify_dmf(F: DiscreteVectorField, certificate: bool = True) -> ValidityReport:
    """Check incidences, single pairing, acyclicity and (optionally) that the
    order key is constant on pairs and non-increasing along facet steps."""
    problems: list[str] = []
    cellset = set(DeletedJoin(F.tuple).cells)
    appearances: Counter = Counter()
    for c, p in F.pairs.items():
        if c not in cellset:
            problems.append(f"{c} is not a cell of the deleted join")
        appearances[p.partner] += 1
        back = F.pairs.get(p.partner)
        if back is None or back.partner != c or back.up == p.up:
            problems.append(f"{p.partner} is not paired back with {c}")
        lo, hi = (c, p.partner) if p.up else (p.partner, c)
        if not _is_elementary_coface(lo, hi):
            problems.append(f"{lo} -> {hi} is not a facet/coface pair")
    for c, k in appearances.items():
        if k > 1:
            problems.append(f"{c} appears in {k} pairs")
    if problems:
        return ValidityReport(False, problems)

    graph: dict[PartitionSimplex, list[PartitionSimplex]] = {}
    for alpha, p in F.pairs.items():
        if not p.up:
            continue
        succ = []
        for face in _facets_of(p.partner):
            if face == alpha:
                continue
            q = F.pairs.get(face)
            if q is not None and q.up:
                succ.append(face)
        graph[alpha] = succ
    try:
        TopologicalSorter(graph).prepare()
    except CycleError as exc:
        cycle = list(exc.args[1])
        return ValidityReport(False, [f"closed gradient path of length {len(cycle) - 1}"], cycle)

    if certificate and F.order_key is not None:
        key = F.order_key
        for alpha, p in F.pairs.items():
            if not p.up:
                continue
            kb = key(p.partner)
            if key(alpha) != kb:
                problems.append(f"order key changes across the pair {alpha} -> {p.partner}")
            for face in _facets_of(p.partner):
                if face in cellset and key(face) > kb:
                    problems.append(f"order key increases from {p.partner} to {face}")
    return ValidityReport(not problems, problems)


@dataclass
class CriticalReport:
    cells: list[PartitionSimplex]
    histogram: dict[int, int]
    zero_cell: PartitionSimplex | None

    @property
    def count(self) -> int:
        return len(self.cells)

    def non_vertex(self) -> list[PartitionSimplex]:
        """Critical cells other than the distinguished vertex."""
        return [c for c in self.cells if c != self.zero_cell]


def _report(T: ComplexTuple, cells, rel: Relabel | None) -> CriticalReport:
    cells = sorted(set(cells), key=PartitionSimplex.key)
    hist = Counter(c.dim for c in cells)
    zero = None
    if rel is not None:
        z = rel.backward(PartitionSimplex((1,) + (0,) * (T.r - 1), full(T.n) ^ 1))
        if z in cells:
            zero = z
    return CriticalReport(cells, dict(sorted(hist.items())), zero)


def critical_cells(F: DiscreteVectorField, cross_check: bool = True) -> CriticalReport:
    """Critical cells of a field.

    For the generic field of an Alexander tuple the list is also rebuilt
    from the top-dimensional criteria and compared.
    """
    rel = F.relabel if F.relabel is not None else choose_relabel(F.tuple)
    rep = _report(F.tuple, F.critical, rel)
    if cross_check and F.kind == "d":
        from .tuples import is_alexander_tuple

        if is_alexander_tuple(F.tuple):
            direct = critical_cells_direct(F.tuple, "alexander")
            if direct.cells != rep.cells:
                raise DMFError("critical cells disagree with the direct criteria")
    return rep


def _place(elements, allowed, complexes, start_parts):
    """Assign each vertex bit in ``elements`` to one allowed block (or to B
    when ``None`` is allowed), keeping ``A_k ∈ K_k``."""
    out = []

    def rec(idx, parts, extra_rest):
        if idx == len(elements):
            out.append((parts, extra_rest))
            return
        b = elements[idx]
        for k in allowed[idx]:
            if k is None:
                rec(idx + 1, parts, extra_rest | b)
                continue
            cand = parts[k] | b
            if cand in complexes[k]:
                rec(idx + 1, parts[:k] + (cand,) + parts[k + 1 :], extra_rest)

    rec(0, start_parts, 0)
    return out


def _skeleton_caps(T: ComplexTuple) -> list[int] | None:
    caps = []
    for K in T:
        k = K.dimension + 1
        if K != skeleton(T.n, k):
            return None
        caps.append(k)
    return caps


def critical_cells_direct(T: ComplexTuple, mode: str = "alexander") -> CriticalReport:
    """Critical cells of the generic field from closed-form criteria.

    ``alexander``: top cells ``(A_1..A_r; {i_1 < ... < i_{r-1}})`` with
    ``A_1 > i_1``, ``A_k`` missing ``[i_{k-1}, i_k]``, ``A_r < i_{r-1}``
    and ``A_k ∪ i_k ∉ K_k`` for ``k < r``.

    ``long_chessboard``: ``i_1 < ... < i_r`` are the r least free vertices,
    every other free vertex exceeds ``i_r``, ``A_1 > i_1``, ``A_k`` misses
    ``[i_{k-1}, i_k]`` and ``A_k ∪ i_k ∉ K_k`` for every ``k ≤ r``.

    Both add the distinguished vertex ``({1}, ∅, ..., ∅)``.
    """
    from .tuples import is_alexander_tuple

    n, r = T.n, T.r
    if mode == "alexander":
        if not is_alexander_tuple(T):
            raise PreconditionError("alexander mode needs an Alexander tuple")
        width = r - 1
    elif mode == "long_chessboard":
        caps = _skeleton_caps(T)
        if caps is None or n <= sum(caps) + r - 1:
            raise PreconditionError("long_chessboard mode needs a long skeleton tuple")
        width = r
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    rel = choose_relabel(T)
    if rel is None:
        return CriticalReport([], {}, None)
    T2 = rel.tuple(T)
    Ks = T2.complexes
    found = [PartitionSimplex((1,) + (0,) * (r - 1), full(n) ^ 1)]
    for chosen in combinations(range(1, n + 1), width):
        marks = (0,) + chosen
        elements, allowed = [], []
        for v in range(1, n + 1):
            if v in chosen:
                continue
            opts = []
            for k in range(r):
                lo = marks[k]
                hi = marks[k + 1] if k + 1 < len(marks) else n + 1
                if not lo <= v <= hi:
                    opts.append(k)
            if mode == "long_chessboard" and v > chosen[-1]:
                opts.append(None)
            elements.append(1 << (v - 1))
            allowed.append(opts)
        B0 = sum(1 << (v - 1) for v in chosen)
        for parts, extra in _place(elements, allowed, Ks, (0,) * r):
            if any(parts[k] | (1 << (chosen[k] - 1)) in Ks[k] for k in range(width)):
                continue
            found.append(PartitionSimplex(parts, B0 | extra))
    back = rel.backward
    return _report(T, [back(c) for c in found], rel)
