from fractions import Fraction

import pytest

from randwalls.complexes import Gluing
from randwalls.fixtures import build_fixture, synthesize_patch
from randwalls.tiles import (
    Tile,
    TileConfig,
    TileError,
    age_compare,
    build_tile_collection,
    check_collection,
    is_potile,
)


def _steps(tc):
    return [
        (r["step"], r["kind"], sorted(map(sorted, r["tiles"])), sorted(r["union"]))
        for r in tc.step_log
    ]


def _alive(tc):
    return sorted((tuple(sorted(t.cells)), t.klass, t.step)
                  for t in tc.alive_tiles())


def test_config_derived_constants():
    cfg = TileConfig()
    assert cfg.d == Fraction(3, 14) and cfg.c == 1
    assert cfg.lam == Fraction(7)  # 1 / (1 - 4d)
    assert cfg.n_ret == 21         # (2c + 1) * lam


def test_is_potile():
    patch = synthesize_patch(2, [Gluing(0, 0, 1, 0, 5, True)], 20)
    assert is_potile(patch.closure([0]))           # Can = 0 >= 0
    assert is_potile(patch.whole)                  # Can = 5 >= 20/4
    shallow = synthesize_patch(2, [Gluing(0, 0, 1, 0, 3, True)], 20)
    assert not is_potile(shallow.whole)            # Can = 3 < 5


def test_age_compare(corpus):
    _, tc = corpus["updatedlifeofatile"]
    by_cells = {tuple(sorted(t.cells)): t for t in tc.tiles}
    start = by_cells[(2,)]
    pair = by_cells[(0, 1)]
    top = by_cells[(0, 1, 2, 3, 4)]
    assert age_compare(start, pair) == "Younger"   # start tiles are youngest
    assert age_compare(pair, start) == "Older"
    assert age_compare(pair, top) == "Older"       # born at an earlier step
    assert age_compare(start, by_cells[(0,)]) == "Incomparable"


def test_single_gluing_traces(corpus):
    _, tc = corpus["balancing2tile"]
    assert _steps(tc) == [(1, "1b", [[0], [1]], [0, 1])]
    assert _alive(tc) == [((0, 1), "Core", "1")]

    _, tc = corpus["two_cell_quarter"]
    assert _steps(tc) == [(1, "1a", [[0], [1]], [0, 1])]

    _, tc = corpus["two_cell_small"]
    assert _steps(tc) == []  # overlap below ell/4: no gluing fires
    assert _alive(tc) == [((0,), "One", "start"), ((1,), "One", "start")]


def test_exampletile_trace(corpus):
    _, tc = corpus["exampletile"]
    assert _steps(tc) == [
        (1, "1b", [[0], [1]], [0, 1]),
        (1, "1a", [[0, 1], [2]], [0, 1, 2]),
        (2, "2", [[0, 1, 2], [3]], [0, 1, 2, 3]),
    ]
    # step-2 constituents survive with class NonCore
    assert _alive(tc) == [
        ((0, 1, 2), "NonCore", "1"),
        ((0, 1, 2, 3), "NonCore", "2"),
        ((3,), "NonCore", "start"),
    ]


def test_updatedlifeofatile_trace(corpus):
    _, tc = corpus["updatedlifeofatile"]
    assert _steps(tc) == [
        (1, "1b", [[0], [1]], [0, 1]),
        (1, "1a", [[3], [4]], [3, 4]),
        (2, "2", [[0, 1], [2]], [0, 1, 2]),
        (3, "3", [[0, 1, 2], [3, 4]], [0, 1, 2, 3, 4]),
    ]
    assert _alive(tc) == [
        ((0, 1), "NonCore", "1"),
        ((0, 1, 2, 3, 4), "NonCore", "3"),
        ((2,), "NonCore", "start"),
    ]


def test_wallcases_trace(corpus):
    _, tc = corpus["wallcases"]
    assert _steps(tc) == [
        (1, "1b", [[0], [1]], [0, 1]),
        (1, "1a", [[0, 1], [2]], [0, 1, 2]),
        (1, "1b", [[0, 1, 2], [3]], [0, 1, 2, 3]),
    ]
    assert _alive(tc) == [((0, 1, 2, 3), "Core", "1")]


def test_coverage_and_collection_checks(corpus):
    for name, (patch, tc) in corpus.items():
        covered = {c for t in tc.alive_tiles() for c in t.cells}
        assert covered == set(patch.all_cells), name
        rep = check_collection(tc)
        assert rep.ok, (name, rep.violations)


def test_inadmissible_requires_force(ring3_patch):
    with pytest.raises(TileError):
        build_tile_collection(ring3_patch)
    tc = build_tile_collection(ring3_patch, force=True)
    assert any("inadmissible" in w for w in tc.warnings)


def test_kk_bound_enforced():
    patch = build_fixture("MPexample")
    with pytest.raises(TileError):
        build_tile_collection(patch, TileConfig(k_bound=2))


def test_determinism(corpus):
    patch, tc = corpus["updatedlifeofatile"]
    again = build_tile_collection(patch)
    assert tc.step_log == again.step_log
    assert _alive(tc) == _alive(again)
