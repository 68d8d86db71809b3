"""Multiple chessboard complexes and closed-form critical-cell counts.

``Δ_{n,r}^{m;1}`` places rooks on an ``n × r`` board (columns = ground
vertices, rows = blocks) with at most ``m_i`` rooks in row ``i`` and at most
one per column.  It is the deleted join of the skeletons ``([n] ≤ m_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, prod
from typing import Iterator

from .bits import MAX_N
from .complex_core import ComplexError, ComplexTuple, DeletedJoin, PreconditionError, SimplicialComplex, skeleton


@dataclass(frozen=True)
class ChessboardSpec:
    n: int
    r: int
    m: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(self.m))
        if self.r < 2 or len(self.m) != self.r:
            raise ComplexError(f"need r >= 2 caps, got r={self.r}, m={list(self.m)}")
        if any(k < 0 for k in self.m):
            raise ComplexError("row caps must be non-negative")
        if any(k >= self.n for k in self.m):
            raise ComplexError("a row cap of n or more makes that row the full simplex")

    @property
    def threshold(self) -> int:
        return sum(self.m) + self.r - 1

    @property
    def is_optimal(self) -> bool:
        return self.n == self.threshold

    @property
    def is_long(self) -> bool:
        return self.n > self.threshold

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "m": list(self.m)}


@dataclass
class Chessboard:
    spec: ChessboardSpec
    tuple: ComplexTuple
    deleted_join: DeletedJoin

    def rook_complex(self) -> SimplicialComplex:
        """The rook-placement complex built square by square (no skeletons).

        Square (column i, row j) is vertex ``(j - 1) * n + i``.
        """
        n, r, caps = self.spec.n, self.spec.r, self.spec.m
        if n * r > MAX_N:
            raise ComplexError(f"board needs {n * r} > {MAX_N} vertices")
        maximal = []

        def rec(col: int, used: list[int], placed: int) -> None:
            if col == n:
                # maximal iff no empty column can take a rook in a non-full row
                empty_cols = n - sum(used)
                if not (empty_cols and any(u < c for u, c in zip(used, caps))):
                    maximal.append(placed)
                return
            rec(col + 1, used, placed)
            for j in range(r):
                if used[j] < caps[j]:
                    used[j] += 1
                    rec(col + 1, used, placed | 1 << (j * n + col))
                    used[j] -= 1

        rec(0, [0] * r, 0)
        return SimplicialComplex(n * r, tuple(maximal))


def build_chessboard(spec: ChessboardSpec) -> Chessboard:
    T = ComplexTuple([skeleton(spec.n, k) for k in spec.m])
    return Chessboard(spec, T, DeletedJoin(T))


def _compositions(total: int, slots: int, forbidden: int) -> Iterator[tuple[int, ...]]:
    """Non-negative vectors of length ``slots`` summing to ``total`` with
    a zero at index ``forbidden``."""
    if slots == 0:
        if total == 0:
            yield ()
        return

    def rec(i: int, left: int, acc: list[int]):
        if i == slots - 1:
            if i == forbidden:
                if left == 0:
                    yield tuple(acc + [0])
            else:
                yield tuple(acc + [left])
            return
        if i == forbidden:
            yield from rec(i + 1, left, acc + [0])
            return
        for x in range(left + 1):
            yield from rec(i + 1, left - x, acc + [x])

    yield from rec(0, total, [])


def gap_matrices(m: tuple[int, ...], columns: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Non-negative ``r × columns`` matrices with zero diagonal and row sums m."""
    rows = [list(_compositions(mi, columns, i)) for i, mi in enumerate(m)]

    def rec(i: int, acc: list):
        if i == len(rows):
            yield tuple(acc)
            return
        for row in rows[i]:
            yield from rec(i + 1, acc + [row])

    yield from rec(0, [])


def multinomial(parts) -> int:
    return factorial(sum(parts)) // prod(factorial(p) for p in parts)


def count_critical_optimal(spec: ChessboardSpec) -> int:
    """Top-dimensional critical cells of the optimal board.

    Sums, over zero-diagonal ``r × r`` gap matrices with row sums m, the
    number of orderings of rooks inside each gap between free columns.
    """
    if not spec.is_optimal:
        raise PreconditionError(f"n={spec.n} is not optimal (needs {spec.threshold})")
    total = 0
    for B in gap_matrices(spec.m, spec.r):
        total += prod(multinomial(col) for col in zip(*B))
    return total


def count_critical_long(spec: ChessboardSpec) -> int:
    """Non-vertex critical cells of a long board.

    Gap matrices are ``r × (r + 1)``; the last gap also holds the
    ``n - r - Σm`` trailing free columns, which can be interleaved freely
    with its rooks.
    """
    if not spec.is_long:
        raise PreconditionError(f"n={spec.n} is not long (needs > {spec.threshold})")
    trailing = spec.n - spec.r - sum(spec.m)
    total = 0
    for B in gap_matrices(spec.m, spec.r + 1):
        cols = list(zip(*B))
        last = sum(cols[-1])
        total += comb(trailing + last, last) * prod(multinomial(col) for col in cols)
    return total


def wedge_summary(spec: ChessboardSpec, check_homology: bool = True, budget: int | None = None) -> dict:
    """Sphere dimension and count, from the Morse field.

    The count is compared with the closed-form count and, when the board is
    small enough, with mod-2 homology.
    """
    from .homology import DEFAULT_BUDGET, OracleBudgetError, deleted_join_betti
    from .morse import build_dmf, critical_cells

    if not (spec.is_optimal or spec.is_long):
        raise PreconditionError("board is neither optimal nor long")
    if sum(spec.m) == 0:
        raise PreconditionError("all row caps are zero: the board complex has no cells")
    board = build_chessboard(spec)
    rep = critical_cells(build_dmf(board.tuple), cross_check=False)
    dim = sum(spec.m) - 1
    count = len(rep.non_vertex())
    if any(c.dim != dim for c in rep.non_vertex()):
        raise RuntimeError("critical cells outside the expected dimension")
    formula = count_critical_optimal(spec) if spec.is_optimal else count_critical_long(spec)
    if formula != count:
        raise RuntimeError(f"closed form gives {formula}, Morse field gives {count}")
    out = {"dimension": dim, "count": count, "homology_checked": False}
    if check_homology:
        try:
            prof = deleted_join_betti(board.deleted_join, budget or DEFAULT_BUDGET)
        except OracleBudgetError:
            return out
        expected = tuple(count if i == dim else 0 for i in range(dim + 1))
        if prof.reduced != expected:
            raise RuntimeError(f"homology {prof.reduced} disagrees with {expected}")
        out["homology_checked"] = True
    return out
