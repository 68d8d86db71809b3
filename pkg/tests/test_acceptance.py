"""Acceptance suite: one group of tests per criterion, exact equality throughout.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""

import random
import time
from itertools import product

import pytest

from biercx.bits import full
from biercx.chessboard import (
    ChessboardSpec,
    build_chessboard,
    count_critical_long,
    count_critical_optimal,
)
from biercx.complex_core import (
    ComplexTuple,
    DeletedJoin,
    PartitionSimplex,
    alexander_dual,
    enumerate_complexes,
    join,
    random_complex,
    residual_complex,
    skeleton,
)
from biercx.homology import deleted_join_betti
from biercx.morse import (
    bier_dmf_d1,
    bier_dmf_d2,
    build_dmf,
    critical_cells,
    verify_dmf,
)
from biercx.tuples import (
    DUAL_PAIR,
    NOT_ALEXANDER,
    PURE_SKELETON,
    SKELETON_JOIN_SIMPLEX,
    classify_alexander_tuple,
    is_alexander_tuple,
    is_collectively_unavoidable,
    is_minimal_unavoidable,
    maximal_disjoint_tuples,
    random_tuple,
    sample_unavoidable,
    skeleton_cone,
)

criterion = pytest.mark.criterion


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in compositions(total - a, parts - 1):
            yield (a,) + rest


def distinct_random_complexes(n, count, seed):
    rng = random.Random(seed)
    seen = {}
    while len(seen) < count:
        K = random_complex(n, rng)
        seen.setdefault(K.facets, K)
    return list(seen.values())


def sphere_profile(d):
    return tuple(1 if i == d else 0 for i in range(d + 1))


# 1. Bier spheres


def bier_battery(Ks):
    for K in Ks:
        n = K.n
        Kd = alexander_dual(K)
        generic = build_dmf(ComplexTuple((K, Kd)))
        assert verify_dmf(generic), (K, verify_dmf(generic).problems)
        for build in (bier_dmf_d1, bier_dmf_d2):
            F = build(K)
            rep = verify_dmf(F)
            assert rep, (F.kind, K, rep.problems)
            assert sorted(c.dim for c in F.critical) == [0, n - 2], (F.kind, K)
        prof = deleted_join_betti(DeletedJoin(ComplexTuple((K, Kd))))
        assert prof.reduced == sphere_profile(n - 2), K


@criterion(1, "Bier-sphere battery")
@pytest.mark.parametrize("n", [2, 3, 4])
def test_bier_spheres_exhaustive(n):
    bier_battery(list(enumerate_complexes(n)))


@criterion(1, "Bier-sphere battery")
@pytest.mark.parametrize("n", [5, 6])
def test_bier_spheres_random(n):
    bier_battery(distinct_random_complexes(n, 200, seed=1000 + n))


# 2. the optimal 5 x 3 board with caps (1, 1, 1)

LISTED_5_3 = [
    ([2], [5], [3]), ([3], [1], [4]), ([3], [5], [1]), ([3], [5], [2]),
    ([4], [1], [2]), ([4], [1], [3]), ([4], [2], [1]), ([4], [5], [1]), ([4], [5], [2]),
    ([5], [1], [2]), ([5], [1], [3]), ([5], [2], [1]), ([5], [4], [1]), ([5], [4], [2]),
]


@criterion(2, "5x3 board, caps (1,1,1): 14 critical 2-cells")
def test_optimal_board_5_3():
    start = time.perf_counter()
    spec = ChessboardSpec(5, 3, (1, 1, 1))
    board = build_chessboard(spec)
    rep = critical_cells(build_dmf(board.tuple))
    assert rep.histogram == {0: 1, 2: 14}
    assert rep.zero_cell == PartitionSimplex.from_lists(5, [[1], [], []])
    listed = {PartitionSimplex.from_lists(5, p) for p in LISTED_5_3}
    assert set(rep.non_vertex()) == listed
    assert deleted_join_betti(board.deleted_join).reduced == (0, 0, 14)
    assert count_critical_optimal(spec) == 14
    assert time.perf_counter() - start < 1.0


# 3. the long 4 x 2 board with caps (1, 1)


@criterion(3, "4x2 long board, caps (1,1): 5 critical 1-cells")
def test_long_board_4_2():
    start = time.perf_counter()
    spec = ChessboardSpec(4, 2, (1, 1))
    board = build_chessboard(spec)
    rep = critical_cells(build_dmf(board.tuple))
    assert rep.histogram == {0: 1, 1: 5}
    dj = board.deleted_join
    assert dj.f_vector() == [8, 12] and dj.euler() == -4
    assert deleted_join_betti(dj).reduced == (0, 5)
    assert count_critical_long(spec) == 5
    assert time.perf_counter() - start < 1.0


# 4. connectivity of unavoidable tuples


@criterion(4, "unavoidable tuples: critical cells in dim >= n-r, homology vanishes below")
def test_unavoidable_connectivity():
    rng = random.Random(20240601)
    checked = 0
    for _ in range(500):
        n = rng.randint(3, 7)
        r = rng.choice((2, 3))
        T = sample_unavoidable(n, r, rng)
        assert is_collectively_unavoidable(T)
        F = build_dmf(T)
        assert verify_dmf(F), T
        rep = critical_cells(F, cross_check=False)
        assert rep.zero_cell is not None, T
        assert all(c.dim >= n - r for c in rep.non_vertex()), T
        prof = deleted_join_betti(DeletedJoin(T))
        assert not any(prof[i] for i in range(n - r)), (T, prof)
        checked += 1
    assert checked == 500


# 5. Alexander tuples: skeleton tuples and cone tuples


def skeleton_tuples(n):
    for r in range(2, n + 1):
        for m in compositions(n - r + 1, r):
            yield ComplexTuple([skeleton(n, k) for k in m]), m, 0


def cone_tuples(n, c):
    C = full(c)
    w = n - c
    for r in range(2, w + 1):
        for m in compositions(w - r + 1, r):
            yield ComplexTuple([skeleton_cone(n, k, C) for k in m]), m, C


def check_alexander_wedge(T):
    n, r = T.n, T.r
    dj = DeletedJoin(T)
    assert dj.is_pure() and dj.dimension == n - r, T
    F = build_dmf(T)
    assert verify_dmf(F), T
    rep = critical_cells(F)  # also compared with the top-dimensional criteria
    assert all(c.dim == n - r for c in rep.non_vertex()), T
    prof = deleted_join_betti(dj)
    assert prof.reduced == tuple(rep.count - 1 if i == n - r else 0 for i in range(n - r + 1)), T


@criterion(5, "Alexander tuples: pure, critical cells in top dim, matching homology")
@pytest.mark.parametrize("n", range(2, 10))
def test_skeleton_tuples_wedge(n):
    for T, _, _ in skeleton_tuples(n):
        check_alexander_wedge(T)


@criterion(5, "Alexander tuples: pure, critical cells in top dim, matching homology")
@pytest.mark.parametrize("c", [1, 2])
@pytest.mark.parametrize("n", range(3, 9))
def test_cone_tuples_wedge(n, c):
    for T, _, _ in cone_tuples(n, c):
        check_alexander_wedge(T)


# 6. classification


def expected_kind(T, m, C):
    if T.r == 2:
        return DUAL_PAIR
    return SKELETON_JOIN_SIMPLEX if C else PURE_SKELETON


@criterion(6, "classification round-trips and rejects non-Alexander tuples")
@pytest.mark.parametrize("n", range(2, 10))
def test_classify_constructed(n):
    families = list(skeleton_tuples(n))
    if n <= 8:
        families += [t for c in (1, 2) if n - c >= 2 for t in cone_tuples(n, c)]
    for T, m, C in families:
        cls = classify_alexander_tuple(T)
        kind = expected_kind(T, m, C)
        assert cls.kind == kind, T
        if kind != DUAL_PAIR:
            assert cls.m == m and cls.cone == C, (T, cls)
        assert cls.reconstruct(T) == T


@criterion(6, "classification round-trips and rejects non-Alexander tuples")
def test_classify_random():
    # half of the draws come from the unavoidable sampler, so Alexander
    # tuples (mostly dual pairs) show up too; draw until 1000 rejections
    rng = random.Random(77)
    alex = rejected = i = 0
    while rejected < 1000:
        n = rng.randint(2, 6)
        r = rng.choice((2, 3))
        T = sample_unavoidable(n, r, rng) if i % 2 else random_tuple(n, r, rng)
        is_alex = bool(is_alexander_tuple(T))
        kind = classify_alexander_tuple(T).kind
        assert (kind == NOT_ALEXANDER) == (not is_alex), T
        alex += is_alex
        rejected += not is_alex
        i += 1
    assert alex > 0


# 7. closed-form counts against the field


@criterion(7, "closed-form counts equal the field's critical counts")
@pytest.mark.parametrize("n", range(2, 9))
def test_formula_grid(n):
    for r in range(2, 5):
        for m in product(range(n), repeat=r):
            spec = ChessboardSpec(n, r, m)
            if sum(m) == 0 or n < spec.threshold:
                continue
            rep = critical_cells(build_dmf(build_chessboard(spec).tuple), cross_check=False)
            formula = count_critical_optimal(spec) if spec.is_optimal else count_critical_long(spec)
            assert len(rep.non_vertex()) == formula, spec


# 8. structural lemmas


def small_unavoidable_tuples():
    for n in range(1, 5):
        Ks = list(enumerate_complexes(n))
        for K, L in product(Ks, repeat=2):
            T = ComplexTuple((K, L))
            if is_collectively_unavoidable(T):
                yield T
    Ks = list(enumerate_complexes(3))
    for triple in product(Ks, repeat=3):
        T = ComplexTuple(triple)
        if is_collectively_unavoidable(T):
            yield T
    rng = random.Random(8)
    for _ in range(300):
        yield sample_unavoidable(rng.randint(2, 6), rng.choice((2, 3)), rng)


def alexander_tuples():
    for n in range(1, 5):
        for K in enumerate_complexes(n):
            yield ComplexTuple((K, alexander_dual(K)))
    for K in distinct_random_complexes(6, 100, seed=88):
        yield ComplexTuple((K, alexander_dual(K)))
    for n in range(2, 7):
        for T, _, _ in skeleton_tuples(n):
            yield T
        for c in (1, 2):
            for T, _, _ in cone_tuples(n, c):
                yield T


@criterion(8, "structural lemmas")
def test_unavoidable_leaves_few_uncovered():
    count = 0
    for T in small_unavoidable_tuples():
        assert all(mt.uncovered <= T.r - 1 for mt in maximal_disjoint_tuples(T)), T
        count += 1
    assert count > 7000


@criterion(8, "structural lemmas")
def test_alexander_leaves_exactly_r_minus_one():
    for T in alexander_tuples():
        assert is_alexander_tuple(T), T
        assert all(mt.uncovered == T.r - 1 for mt in maximal_disjoint_tuples(T)), T


@criterion(8, "structural lemmas")
def test_alexander_tuples_are_minimal():
    for T in alexander_tuples():
        assert is_minimal_unavoidable(T), T


@criterion(8, "structural lemmas")
def test_pair_residual_is_dual():
    Ks = [K for n in range(1, 5) for K in enumerate_complexes(n)]
    Ks += [K for n in (5, 6) for K in distinct_random_complexes(n, 150, seed=n)]
    for K in Ks:
        assert residual_complex([K]) == alexander_dual(K), K


@criterion(8, "structural lemmas")
def test_duality_involution():
    Ks = [K for n in range(1, 5) for K in enumerate_complexes(n)]
    Ks += [K for n in (5, 6) for K in distinct_random_complexes(n, 150, seed=10 + n)]
    for K in Ks:
        Kd = alexander_dual(K)
        assert alexander_dual(Kd) == K, K


def split_cell(c, m):
    low = (1 << m) - 1
    left = PartitionSimplex(tuple(a & low for a in c.parts), c.rest & low)
    right = PartitionSimplex(tuple(a >> m for a in c.parts), c.rest >> m)
    return left, right


def check_commutes(TK, TL):
    joined = ComplexTuple([join(K, L) for K, L in zip(TK, TL)])
    lhs = {split_cell(c, TK.n) for c in DeletedJoin(joined)._all}
    rhs = set(product(DeletedJoin(TK)._all, DeletedJoin(TL)._all))
    assert lhs == rhs, (TK, TL)


@criterion(8, "structural lemmas")
def test_join_commutes_with_deleted_join():
    small = {m: list(enumerate_complexes(m)) for m in (1, 2)}
    for m, n in product((1, 2), repeat=2):
        for a, b, c, d in product(small[m], small[m], small[n], small[n]):
            check_commutes(ComplexTuple((a, b)), ComplexTuple((c, d)))
    rng = random.Random(9)
    for _ in range(150):
        m = rng.randint(1, 3)
        n = rng.randint(1, 6 - m)
        r = rng.choice((2, 3))
        check_commutes(random_tuple(m, r, rng), random_tuple(n, r, rng))
