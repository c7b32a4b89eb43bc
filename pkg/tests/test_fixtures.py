import pytest

from randwalls.fixtures import (
    FixtureError,
    build_fixture,
    fixture_names,
    load_catalog,
)
from randwalls.words import is_cyclically_reduced


def test_catalog_contents():
    names = fixture_names()
    for expected in ("two_cell_small", "balancing2tile", "MPexample",
                     "exampletile", "shards", "updatedlifeofatile",
                     "wallcases", "ring3"):
        assert expected in names


def test_all_fixtures_build():
    for name, spec in sorted(load_catalog().items()):
        patch = build_fixture(name)
        assert len(patch.cells) == spec.num_cells
        assert patch.fulfilled_violations == []
        assert patch.ell % 4 == 0 and patch.ell >= 20
        for w in patch.presentation.relators:
            assert is_cyclically_reduced(w)
        # synthesized relators are pairwise distinct
        assert len(set(patch.presentation.relators)) == spec.num_cells


def test_scaling():
    spec = load_catalog()["two_cell_small"]
    step = spec.min_ell()
    small = build_fixture("two_cell_small", ell=2 * step)
    large = build_fixture("two_cell_small", ell=4 * step)
    assert large.ell == 2 * small.ell
    with pytest.raises(FixtureError):
        build_fixture("two_cell_small", ell=step + 1)


def test_unknown_fixture():
    with pytest.raises(FixtureError):
        build_fixture("no_such_fixture")


def test_mpexample_overlap():
    # the bending showcase: ell = 20 with a long 8-edge (2 ell / 5) overlap
    patch = build_fixture("MPexample")
    assert patch.ell == 20
    shared = (frozenset(patch.cell_edge_ids(0))
              & frozenset(patch.cell_edge_ids(1)))
    assert len(shared) == 8
