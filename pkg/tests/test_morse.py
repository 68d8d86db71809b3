import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from biercx.complex_core import (
    ComplexTuple,
    DeletedJoin,
    PartitionSimplex,
    PreconditionError,
    SimplicialComplex,
    alexander_dual,
    random_complex,
    skeleton,
)
from biercx.morse import (
    DiscreteVectorField,
    Pairing,
    bier_dmf_d1,
    bier_dmf_d2,
    build_dmf,
    build_dmf_stepwise,
    choose_relabel,
    critical_cells,
    critical_cells_direct,
    match_cell,
    movable_vector,
    verify_dmf,
)
from biercx.tuples import random_tuple, sample_unavoidable

seeds = st.integers(0, 10**6)


def cell(n, *parts):
    return PartitionSimplex.from_lists(n, parts)


def has_gradient_cycle(F):
    """DFS on the Hasse diagram with matched edges reversed."""
    cells = DeletedJoin(F.tuple).cells
    cellset = set(cells)
    succ = {c: [] for c in cells}
    for c in cells:
        for k, a in enumerate(c.parts):
            for v in range(F.tuple.n):
                b = 1 << v
                if not a & b:
                    continue
                face = PartitionSimplex(c.parts[:k] + (a ^ b,) + c.parts[k + 1 :], c.rest | b)
                if face not in cellset:
                    continue
                matched = F.pairs.get(face)
                if matched is not None and matched.partner == c:
                    succ[face].append(c)  # reversed: face -> coface
                else:
                    succ[c].append(face)
    colour = dict.fromkeys(cells, 0)
    for start in cells:
        if colour[start]:
            continue
        stack = [(start, iter(succ[start]))]
        colour[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
            elif colour[nxt] == 1:
                return True
            elif colour[nxt] == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


BOARD_5_3 = ComplexTuple([skeleton(5, 1)] * 3)
BOARD_4_2 = ComplexTuple([skeleton(4, 1)] * 2)

# the published list with (3,5,3;{1,4}) read as (3,5,2;{1,4})
CRITICAL_5_3 = [
    ([1], [], []),
    ([2], [5], [3]), ([3], [1], [4]), ([3], [5], [1]), ([3], [5], [2]),
    ([4], [1], [2]), ([4], [1], [3]), ([4], [2], [1]), ([4], [5], [1]), ([4], [5], [2]),
    ([5], [1], [2]), ([5], [1], [3]), ([5], [2], [1]), ([5], [4], [1]), ([5], [4], [2]),
]

CRITICAL_4_2 = [([1], []), ([2], [4]), ([3], [1]), ([3], [4]), ([4], [1]), ([4], [3])]


def test_movable_vector_by_hand():
    c = cell(5, [2], [5], [3])
    assert movable_vector(c, 5) == (1, 4, 6)
    assert movable_vector(cell(5, [1], [], []), 5) == (1, 2, 3)
    # an empty pool makes every later entry ∞ as well
    assert movable_vector(cell(3, [], [1, 2, 3]), 3) == (4, 4)


def test_match_rule_by_hand():
    T = BOARD_5_3
    # 1 ∈ B is movable into A_1 = ∅
    m = match_cell(cell(5, [], [2], [3]), T)
    assert m.direction == "up" and m.partner == cell(5, [1], [2], [3]) and m.step == 1
    # 1 ∈ A_1 moves back out
    m = match_cell(cell(5, [1], [2], [3]), T)
    assert m.direction == "down" and m.partner == cell(5, [], [2], [3])
    assert match_cell(cell(5, [2], [5], [3]), T).direction == "critical"
    # the distinguished vertex is never lowered to ∅
    assert match_cell(cell(5, [1], [], []), T).direction == "critical"


def test_board_5_3_critical_list():
    F = build_dmf(BOARD_5_3)
    rep = critical_cells(F)
    assert rep.cells == sorted((cell(5, *p) for p in CRITICAL_5_3), key=PartitionSimplex.key)
    assert rep.histogram == {0: 1, 2: 14}
    assert rep.zero_cell == cell(5, [1], [], [])
    assert len(rep.non_vertex()) == 14
    assert verify_dmf(F)
    assert not has_gradient_cycle(F)


def test_board_5_3_direct_criteria():
    assert critical_cells_direct(BOARD_5_3).cells == critical_cells(build_dmf(BOARD_5_3)).cells


def test_board_4_2_critical_list():
    rep = critical_cells(build_dmf(BOARD_4_2))
    assert rep.cells == sorted((cell(4, *p) for p in CRITICAL_4_2), key=PartitionSimplex.key)
    assert rep.histogram == {0: 1, 1: 5}
    assert critical_cells_direct(BOARD_4_2, "long_chessboard").cells == rep.cells


def test_direct_mode_preconditions():
    with pytest.raises(PreconditionError):
        critical_cells_direct(BOARD_4_2, "alexander")
    with pytest.raises(PreconditionError):
        critical_cells_direct(BOARD_5_3, "long_chessboard")
    with pytest.raises(PreconditionError):
        critical_cells_direct(BOARD_5_3, "sideways")


def test_stepwise_equals_rule_on_boards():
    for T in (BOARD_5_3, BOARD_4_2):
        assert build_dmf_stepwise(T).pairs == build_dmf(T).pairs


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 5), st.integers(2, 3), seeds)
def test_generic_field_is_gradient(n, r, seed):
    rng = random.Random(seed)
    T = random_tuple(n, r, rng) if seed % 2 else sample_unavoidable(n, r, rng)
    F = build_dmf(T)
    rep = verify_dmf(F)
    assert rep, rep.problems
    assert not has_gradient_cycle(F)
    assert build_dmf_stepwise(T).pairs == F.pairs
    dj = DeletedJoin(T)
    crit = F.critical
    # alternating count of critical cells is the Euler characteristic
    assert sum((-1) ** c.dim for c in crit) == dj.euler()
    if dj.cells:
        betti = oracles.reduced_betti({dj.encode(c) for c in dj._all})
        hist = critical_cells(F, cross_check=False).histogram
        # weak Morse inequalities against unreduced Betti numbers
        for d, b in enumerate(betti):
            assert hist.get(d, 0) >= b + (d == 0)


def test_relabel_reports_original_labels():
    # {1} is not a face of K_1, so the field runs on relabelled vertices
    K1 = SimplicialComplex.from_facets(4, [[2, 3], [4]])
    T = ComplexTuple((K1, alexander_dual(K1)))
    rel = choose_relabel(T)
    assert not rel.identity
    F = build_dmf(T)
    cells = set(DeletedJoin(T).cells)
    assert set(F.cells) == cells
    assert all(p.partner in cells for p in F.pairs.values())
    assert verify_dmf(F)
    rep = critical_cells(F)
    assert rep.zero_cell in cells and rep.zero_cell.dim == 0


def test_empty_deleted_join():
    T = ComplexTuple([SimplicialComplex(3, ())] * 2)
    F = build_dmf(T)
    assert F.cells == [] and F.critical == []
    assert verify_dmf(F)


def test_perfect_fields_small():
    K = skeleton(3, 1)
    for build in (bier_dmf_d1, bier_dmf_d2):
        F = build(K)
        assert verify_dmf(F)
        assert not has_gradient_cycle(F)
        assert sorted(c.dim for c in F.critical) == [0, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), seeds)
def test_perfect_fields_have_two_cells(n, seed):
    K = random_complex(n, random.Random(seed))
    for build in (bier_dmf_d1, bier_dmf_d2):
        F = build(K)
        assert verify_dmf(F), verify_dmf(F).problems
        assert sorted(c.dim for c in F.critical) == [0, n - 2]


def test_d2_is_generic_field_on_swapped_pair():
    rng = random.Random(5)
    for _ in range(20):
        K = random_complex(5, rng)
        Kd = alexander_dual(K)
        if not any(Kd.facets):
            continue
        swapped = build_dmf(ComplexTuple((Kd, K)))
        flip = lambda c: PartitionSimplex(c.parts[::-1], c.rest)
        ours = bier_dmf_d2(K)
        assert {flip(c) for c in ours.critical} == set(swapped.critical)


def _triangle_field(pairs):
    # Bier({∅} on [3]) is ∂Δ² in the second block
    K = SimplicialComplex(3, ())
    T = ComplexTuple((K, alexander_dual(K)))
    dj = DeletedJoin(T)
    out = {}
    for lo, hi in pairs:
        out[lo] = Pairing(hi, True, 2)
        out[hi] = Pairing(lo, False, 2)
    return DiscreteVectorField(T, "manual", out, dj.cells)


def test_verify_finds_closed_path():
    v = lambda *xs: cell(3, [], list(xs))
    F = _triangle_field([(v(1), v(1, 2)), (v(2), v(2, 3)), (v(3), v(1, 3))])
    rep = verify_dmf(F)
    assert not rep and rep.cycle
    assert has_gradient_cycle(F)


def test_verify_finds_bad_incidence_and_double_use():
    v = lambda *xs: cell(3, [], list(xs))
    rep = verify_dmf(_triangle_field([(v(1), v(2, 3))]))
    assert not rep and any("facet" in p for p in rep.problems)
    F = _triangle_field([(v(1), v(1, 2))])
    F.pairs[v(2)] = Pairing(v(1, 2), True, 2)
    rep = verify_dmf(F)
    assert not rep


def test_verify_accepts_gradient_triangle():
    v = lambda *xs: cell(3, [], list(xs))
    F = _triangle_field([(v(1), v(1, 2)), (v(2), v(2, 3))])
    assert verify_dmf(F)
    assert not has_gradient_cycle(F)


def test_generic_field_on_small_bier_pair():
    # K = {∅, 1, 2, 3}: Bier(K) is a circle; the generic field is already perfect
    K = skeleton(3, 1)
    T = ComplexTuple((K, alexander_dual(K)))
    F = build_dmf(T)
    assert F.critical == [cell(3, [1], []), cell(3, [3], [1])]
    assert verify_dmf(F)
    assert oracles.reduced_betti({DeletedJoin(T).encode(c) for c in DeletedJoin(T)._all}) == (0, 1)
