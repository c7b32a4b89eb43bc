from fractions import Fraction

import pytest

from randwalls.complexes import Gluing
from randwalls.fixtures import build_fixture, synthesize_patch
from randwalls.metrics import (
    NotATreeError,
    RoundTreeError,
    alpha_regions,
    analyze_tree,
    cancellation,
    check_embedded_geodesics,
    classify_tree,
    distances_from,
    intersection,
    ipi_check,
    is_kk_bounded,
    midpoint,
    path_symmetry,
    skeleton_distance,
    tree_path_between,
    vertex,
)


def _two_cell(ell, overlap):
    return synthesize_patch(2, [Gluing(0, 0, 1, 0, overlap, True)], ell)


def test_cancellation():
    patch = _two_cell(8, 3)
    assert cancellation(patch.closure([0])) == 0
    assert cancellation(patch) == 3  # one arc of degree 2
    with pytest.raises(ValueError):
        cancellation(patch.subgraph(patch.cell_edge_ids(0)[:2]))


def test_skeleton_distance_polygon():
    patch = _two_cell(8, 3)
    cell = patch.closure([0])
    eids = patch.cell_edge_ids(0)
    # around an 8-gon: adjacent midpoints 2 half-units, antipodal 8
    assert skeleton_distance(midpoint(eids[0]), midpoint(eids[1]), cell) == 2
    assert skeleton_distance(midpoint(eids[0]), midpoint(eids[4]), cell) == 8
    assert skeleton_distance(midpoint(eids[0]), midpoint(eids[0]), cell) == 0
    d = distances_from(midpoint(eids[0]), cell)
    for k in range(8):
        assert d[midpoint(eids[k])] == 2 * min(k, 8 - k)


def test_intersection_is_gluing_arc():
    patch = _two_cell(12, 5)
    inter = intersection(patch.closure([0]), patch.closure([1]))
    assert len(inter.edges) == 5 and not inter.cells
    shape = analyze_tree(inter)
    assert shape.diameter == 5
    assert len(shape.leaves) == 2 and not shape.branch_points


def test_tree_path_and_symmetry():
    patch = _two_cell(12, 5)
    inter = intersection(patch.closure([0]), patch.closure([1]))
    shape = analyze_tree(inter)
    a, b = shape.leaves
    path = tree_path_between(inter, a, b)
    assert path.length_edges == 5 and path.length_half == 10
    assert path_symmetry(path, vertex(a)) == vertex(b)
    mid = path.point_at(5)
    assert path_symmetry(path, mid) == mid


def test_not_a_tree():
    patch = _two_cell(8, 3)
    cycle = patch.subgraph(patch.cell_edge_ids(0))
    with pytest.raises(NotATreeError):
        analyze_tree(cycle)
    two_arcs = patch.subgraph([patch.cell_edge_ids(0)[0],
                               patch.cell_edge_ids(0)[2]])
    with pytest.raises(NotATreeError):
        analyze_tree(two_arcs)


def test_classify_long_round():
    # a path of q edges is long iff q > ell/4
    patch = _two_cell(12, 5)
    inter = intersection(patch.closure([0]), patch.closure([1]))
    shape = analyze_tree(inter)
    kind, in_range = classify_tree(shape, 12)
    assert (kind, in_range) == ("long", True)
    patch2 = _two_cell(12, 3)
    shape2 = analyze_tree(intersection(patch2.closure([0]), patch2.closure([1])))
    assert classify_tree(shape2, 12) == ("round", True)
    with pytest.raises(RoundTreeError):
        alpha_regions(shape2, 12)


def test_alpha_regions_on_path():
    # path of 5 edges at ell = 12, q = 3: each region is the far 2 edges
    patch = _two_cell(12, 5)
    inter = intersection(patch.closure([0]), patch.closure([1]))
    shape = analyze_tree(inter)
    regions = alpha_regions(shape, 12)
    assert len(regions.alpha_plus) == 2 and len(regions.alpha_minus) == 2
    assert not regions.alpha_plus & regions.alpha_minus
    assert {regions.u_plus, regions.u_minus} == set(shape.leaves)


def test_geodesics_and_ipi(ring3_patch):
    good = _two_cell(8, 3)
    assert check_embedded_geodesics(good).ok
    assert ipi_check(good, Fraction(3, 14), Fraction(1, 50)).ok
    rep = check_embedded_geodesics(ring3_patch)
    assert not rep.ok and rep.girth is not None
    assert rep.girth < ring3_patch.ell
    assert not ipi_check(ring3_patch, Fraction(3, 14), Fraction(1, 50)).ok


def test_kk_bounded():
    patch = _two_cell(8, 3)
    assert is_kk_bounded(patch, 6, 15)
    assert not is_kk_bounded(patch, 1, 15)
    assert not is_kk_bounded(patch, 6, 0)
