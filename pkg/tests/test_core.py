import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tileperiod.core import (UNSATISFIABLE, AlphabetMismatch, Pattern, RegionAssignment, Tile,
                             TilingSystem, UnknownTile, check_region, disjoint_union,
                             layer_product, reduce_pattern_mod, torus, validate_system)
from tileperiod.solver import horizontal_eigenperiods, total_eigenperiods, total_period_exists

from fixtures import FIX1, FIX2, FIX3, small_systems


def test_pattern_normalized():
    p = Pattern.of({(3, 5): 1, (4, 5): 2})
    assert p.offsets == ((0, 0), (1, 0))
    assert p == Pattern.hpair(1, 2)
    assert (p.width, p.height) == (2, 1)


def test_validate_clean_and_broken():
    assert validate_system(FIX2) == []
    bad = TilingSystem(FIX2.tiles, (Pattern.of({(0, 0): 7}),))
    diags = validate_system(bad)
    assert len(diags) == 1 and "unknown tile" in diags[0]
    empty = TilingSystem(FIX2.tiles, (Pattern(()),))
    diags = validate_system(empty)
    assert len(diags) == 1 and "empty pattern" in diags[0]


def test_validate_duplicates_and_layers():
    sys = TilingSystem((Tile(0, "a"), Tile(0, "a")))
    diags = validate_system(sys)
    assert any("duplicate tile id" in d for d in diags)
    assert any("duplicate tile label" in d for d in diags)
    layered = TilingSystem((Tile(0, "x", ("a",)),), (), ("L0", "L1"))
    assert any("arity" in d for d in validate_system(layered))


def test_reduce_pattern_mod_examples():
    a, b = 0, 1
    assert reduce_pattern_mod(Pattern.of({(0, 0): a, (2, 0): a}), 2, None) == Pattern.of({(0, 0): a})
    assert reduce_pattern_mod(Pattern.of({(0, 0): a, (2, 0): b}), 2, None) is UNSATISFIABLE
    p = Pattern.hpair(a, b)
    assert reduce_pattern_mod(p, 3, None) == p
    assert reduce_pattern_mod(Pattern.vpair(a, a), None, 1) == Pattern.of({(0, 0): a})


offsets = st.tuples(st.integers(0, 5), st.integers(0, 5))


@given(st.dictionaries(offsets, st.integers(0, 2), min_size=1, max_size=5),
       st.one_of(st.none(), st.integers(1, 4)), st.one_of(st.none(), st.integers(1, 4)))
def test_reduce_idempotent(cells, px, py):
    once = reduce_pattern_mod(Pattern.of(cells), px, py)
    if once is UNSATISFIABLE:
        return
    assert reduce_pattern_mod(once, px, py) == once


def test_check_region_examples():
    assert check_region(FIX2, RegionAssignment(3, 3, [[0] * 3] * 3)) == []
    v = check_region(FIX3, torus([[0]]))
    assert len(v) == 1 and v[0].anchor == (0, 0)
    assert check_region(FIX1, torus([[0, 1], [0, 1]])) == []
    assert check_region(FIX1, torus([[0, 1], [1, 0]]))


def test_check_region_boundary_and_unknown():
    # the pair straddles the open boundary only: not an occurrence
    open_row = RegionAssignment(2, 1, [[1, 0]])
    assert check_region(FIX1, open_row) == []
    assert check_region(FIX1, RegionAssignment(2, 1, [[1, 0]], wrap_x=True)) == []
    assert len(check_region(FIX1, RegionAssignment(1, 1, [[0]], wrap_x=True))) == 1
    with pytest.raises(UnknownTile):
        check_region(FIX1, torus([[5]]))


@settings(max_examples=60, deadline=None)
@given(small_systems(), st.integers(1, 3))
def test_bigger_alphabet_keeps_valid_regions(sys, p):
    ok, witness = total_period_exists(sys, p)
    if not ok:
        return
    bigger = TilingSystem(sys.tiles + (Tile(99, "z"),), sys.forbidden)
    assert check_region(bigger, witness) == []


@settings(max_examples=60, deadline=None)
@given(small_systems(), st.integers(1, 3))
def test_torus_tiled_twice_stays_valid(sys, p):
    ok, witness = total_period_exists(sys, p)
    if not ok:
        return
    rows = [r * 2 for r in witness.cells] * 2
    assert check_region(sys, torus(rows)) == []


def test_layer_product_trivial():
    prod = layer_product([FIX2, FIX2])
    assert len(prod.tiles) == 1 and prod.forbidden == ()


def test_layer_product_keeps_periods():
    prod = layer_product([FIX1, FIX2])
    assert len(prod.tiles) == 2
    assert set(horizontal_eigenperiods(prod, 4)) == set(horizontal_eigenperiods(FIX1, 4)) == {2}
    assert set(total_eigenperiods(prod, 4)) == {2}


def test_layer_product_coupled_copies():
    coupling = [Pattern.of({(0, 0): (x, y)}, (0, 1)) for x in "ab" for y in "ab" if x != y]
    prod = layer_product([FIX1, FIX1], coupling)
    assert len(prod.tiles) == 4
    assert set(horizontal_eigenperiods(prod, 4)) == {2}
    assert set(total_eigenperiods(prod, 4)) == {2}
    pruned = layer_product([FIX1, FIX1], coupling, prune=True)
    assert [t.layers for t in pruned.tiles] == [("a", "a"), ("b", "b")]
    assert set(total_eigenperiods(pruned, 4)) == {2}


def test_layer_product_bad_coupling():
    with pytest.raises(AlphabetMismatch):
        layer_product([FIX1, FIX1], [Pattern.of({(0, 0): ("a",)})])
    with pytest.raises(AlphabetMismatch):
        layer_product([FIX1, FIX1], [Pattern.of({(0, 0): ("a", "b")}, (0, 5))])


def test_expanded_matches_projected():
    coupling = [Pattern.hpair(("a", "a"), ("b", "b"), (0, 1))]
    prod = layer_product([FIX1, TilingSystem.from_labels("ab")], coupling)
    flat = prod.expanded()
    assert all(p.layers is None for p in flat.forbidden)
    for rows in itertools.product(range(4), repeat=4):
        region = torus([rows[:2], rows[2:]])
        assert bool(check_region(prod, region)) == bool(check_region(flat, region))


def test_disjoint_union_examples():
    assert set(total_eigenperiods(disjoint_union(FIX2, FIX3), 3)) == {1}
    assert set(total_eigenperiods(disjoint_union(FIX1, FIX2), 4)) == {1, 2}
    assert set(total_eigenperiods(disjoint_union(FIX2, FIX2), 4)) == {1}


@settings(max_examples=30, deadline=None)
@given(small_systems(), small_systems(), st.integers(1, 3))
def test_union_torus_iff_either(s1, s2, p):
    u = disjoint_union(s1, s2)
    assert total_period_exists(u, p)[0] == (total_period_exists(s1, p)[0]
                                            or total_period_exists(s2, p)[0])
