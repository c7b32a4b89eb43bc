from collections import Counter

import pytest

from randwalls.complexes import Gluing
from randwalls.fixtures import build_fixture, synthesize_patch
from randwalls.walls import (
    WallEdge,
    WallError,
    antipodal_walls,
    balance,
    check_tile_wall,
    classify_wall_case,
    lemma_suite,
    shard_of,
    verify_balanced,
    wall_cells,
    wall_components,
    wall_endpoints,
    wall_midpoints,
)


def _two_cell(ell, overlap):
    return synthesize_patch(2, [Gluing(0, 0, 1, 0, overlap, True)], ell)


def test_balance_values():
    patch = _two_cell(20, 6)
    assert balance(patch.closure([0])) == 10        # (ell/4)(1+1) - 0
    assert balance(patch.whole) == 15 - 6           # (ell/4)(2+1) - Can


def test_wall_edge_normalized():
    e = WallEdge.make(0, 7, 3)
    assert (e.a, e.b) == (3, 7) and e.midpoints == (3, 7)
    assert e == WallEdge.make(0, 3, 7)


def test_antipodal_walls():
    patch = _two_cell(20, 6)
    walls = antipodal_walls(patch, 0)
    assert len(walls) == 10
    cell = patch.closure([0])
    comps = wall_components(walls)
    assert len(comps) == 10  # each antipodal chord is its own wall
    for comp in comps:
        assert len(comp) == 1
        assert check_tile_wall(patch, frozenset({0}), comp) == []
        a, b = wall_endpoints(comp)
        assert wall_midpoints(comp) == frozenset({a, b})
        assert wall_cells(comp) == frozenset({0})


def test_wall_components_concatenate():
    # two wall edges sharing a midpoint across cells form one wall
    edges = frozenset({WallEdge.make(0, 1, 5), WallEdge.make(1, 5, 9)})
    comps = wall_components(edges)
    assert len(comps) == 1
    assert wall_endpoints(comps[0]) == (1, 9)


def test_state_and_bending(corpus):
    patch, tc = corpus["MPexample"]
    state = tc.wall_state
    assert len(state.bend_log) == 4  # both alpha regions of both step-1 trees
    for rec in state.bend_log:
        assert rec["alpha_side"] in ("+", "-")
    top = tc.by_cells(frozenset({0, 1, 2}))
    comps = wall_components(state.walls_of(top.cells))
    assert len(comps) == 16
    rep = verify_balanced(top, state)
    assert rep.ok and not rep.failures
    assert len(rep.entries) == 16
    for entry in rep.entries:
        assert entry.distance_half >= 2 * entry.shard_balance


def test_verify_balanced_everywhere(corpus):
    for name, (patch, tc) in corpus.items():
        for tile in tc.alive_tiles():
            rep = verify_balanced(tile, tc.wall_state)
            assert rep.ok, (name, tile.key(), rep.failures)


def test_shard_assignment(corpus):
    patch, tc = corpus["shards"]
    top = tc.by_cells(frozenset({0, 1, 2}))
    comps = wall_components(tc.wall_state.walls_of(top.cells))
    assert len(comps) == 40
    shard_sets = sorted(
        {tuple(sorted(shard_of(top, comp).cells)) for comp in comps}
    )
    # step-2 walls recurse to the cheaper parent when they fit inside it
    assert shard_sets == [(0, 1), (0, 1, 2), (2,)]
    stray = frozenset({WallEdge.make(4, 0, 1)})
    with pytest.raises(WallError):
        shard_of(top, stray)


def test_wall_case_census(corpus):
    patch, tc = corpus["wallcases"]
    top = tc.by_cells(frozenset({0, 1, 2, 3}))
    last = tc.step_log[-1]
    t = tc.by_cells(frozenset(last["tiles"][0]))
    t2 = tc.by_cells(frozenset(last["tiles"][1]))
    census = Counter(
        classify_wall_case(comp, t.sub, t2.sub)
        for comp in wall_components(tc.wall_state.walls_of(top.cells))
    )
    assert dict(census) == {"1": 37, "4a": 2, "4b": 9}


def test_lemma_suite_clean(corpus):
    patch, tc = corpus["MPexample"]
    last = tc.step_log[-1]
    t = tc.by_cells(frozenset(last["tiles"][0]))
    t2 = tc.by_cells(frozenset(last["tiles"][1]))
    suite = lemma_suite(t.sub, t2.sub, tc.wall_state)
    assert set(suite) >= {"trees", "balancebounds", "lemma44", "lemma45",
                          "lemma46", "lemma48"}
    for name, tally in suite.items():
        assert not tally.violations, (name, tally.violations)
        assert tally.checked + tally.skipped > 0 or tally.checked == 0
