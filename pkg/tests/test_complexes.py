from fractions import Fraction

import pytest

from randwalls.complexes import (
    CellSpec,
    ComplexError,
    Gluing,
    PatchComplex,
    SubComplex,
    fine_tokens,
)
from randwalls.fixtures import build_fixture
from randwalls.presentation import Presentation


def _two_cell(ell=8, overlap=3):
    """Two distinct ell-gons glued along an arc of `overlap` edges."""
    return build_fixture("two_cell_small") if (ell, overlap) == (None, None) \
        else _synth(ell, overlap)


def _synth(ell, overlap):
    from randwalls.fixtures import synthesize_patch

    return synthesize_patch(
        2, [Gluing(0, 0, 1, 0, overlap, True)], ell
    )


def test_fine_tokens_subdivision():
    # letter g subdivides into k fine edges, inverses traverse them backwards
    assert fine_tokens((1, -2), 2) == [(0, 1), (1, 1), (3, -1), (2, -1)]
    assert fine_tokens((1,), 1) == [(0, 1)]


def test_counts_and_euler():
    for ell, q in ((8, 3), (12, 5), (20, 8)):
        patch = _synth(ell, q)
        assert patch.n_edges == 2 * ell - q
        assert patch.n_vertices == 2 * ell - (q + 1)
        # glued discs are contractible: V - E + F = 1
        assert patch.n_vertices - patch.n_edges + len(patch.cells) == 1
        assert patch.fulfilled_violations == []
        degs = {patch.edge_degree(e) for e in range(patch.n_edges)}
        assert degs == {1, 2}


def test_closure_and_subgraph():
    patch = _synth(8, 3)
    whole = patch.whole
    assert whole.cells == frozenset({0, 1})
    assert whole == patch.closure([0, 1])
    one = patch.closure([0])
    assert one.size == 1 and len(one.edges) == 8
    assert whole.contains(one)
    assert one.is_closed() and one.is_connected()
    shared = frozenset(patch.cell_edge_ids(0)) & frozenset(patch.cell_edge_ids(1))
    assert len(shared) == 3
    arc = patch.subgraph(shared)
    assert arc.cells == frozenset() and arc.is_connected()
    assert one.intersect(patch.closure([1])).edges == shared


def test_subcomplex_identity():
    patch = _synth(8, 3)
    a = patch.closure([0])
    b = SubComplex.closure_of_cells(patch, [0])
    assert a == b and hash(a) == hash(b)
    assert a != patch.closure([1])


def test_json_round_trip():
    patch = build_fixture("MPexample")
    data = patch.to_json()
    again = PatchComplex.from_json(data, patch.presentation)
    assert again.to_json() == data
    assert again.n_edges == patch.n_edges
    assert again.n_vertices == patch.n_vertices


def test_to_dot():
    patch = _synth(8, 3)
    dot = patch.to_dot()
    assert dot.startswith("graph") and "--" in dot


def test_unfulfilled_rejected():
    pres = Presentation(n=2, d=Fraction(1, 5), ell0=4, subdivision=1,
                        relators=((1, 2, 1, 2),))
    # two copies of one relator glued forward read identically into the
    # shared edge, so the labeling is not locally injective there
    cells = [CellSpec(0), CellSpec(0)]
    gluings = [Gluing(0, 0, 1, 0, 1, False)]
    with pytest.raises(ComplexError):
        PatchComplex(pres, cells, gluings)
    patch = PatchComplex(pres, cells, gluings, require_fulfilled=False)
    assert patch.fulfilled_violations
    # a mismatched gluing is rejected outright
    with pytest.raises(ComplexError):
        PatchComplex(pres, cells, [Gluing(0, 0, 1, 0, 1, True)])
