"""Labeled-isomorphism certificates for subcomplexes.

An isomorphism commuting with the maps to the presentation complex is
forced on each cell by germ matching, so it reduces to a relator-preserving
bijection of 2-cells under which the germ-labeled edge partitions agree.
The certificate is the minimum serialization over all such bijections;
equality of certificates is exactly labeled isomorphism.
"""

from __future__ import annotations

from itertools import permutations

from .complexes import PatchComplex, SubComplex


def _germ_edges(patch: PatchComplex, cells: frozenset[int]):
    """Per edge, the slots on `cells` in germ coordinates (cell, relator, p)."""
    out = []
    for rec in patch.edge_slots:
        slots = [
            (ci, patch.cells[ci].relator, patch._germ(ci, i))
            for ci, i, _ in rec
            if ci in cells
        ]
        if slots:
            out.append(slots)
    return out


def certificate(sub: SubComplex, parts: dict[int, int] | None = None) -> tuple:
    """Canonical form of the closure of a cell set, up to labeled isomorphism.

    `parts` optionally tags each cell with a role (e.g. which side of a
    candidate pair it lies on); tags must be preserved by the isomorphism.
    """
    patch = sub.patch
    cells = sorted(sub.cells)
    if parts is None:
        parts = {c: 0 for c in cells}
    edges = _germ_edges(patch, frozenset(cells))
    best = None
    for perm in permutations(range(len(cells))):
        order = {cells[j]: perm[j] for j in range(len(cells))}
        head = tuple(
            sorted((order[c], patch.cells[c].relator, parts[c]) for c in cells)
        )
        # serialize each edge's slot set in the permuted order
        ser = tuple(
            sorted(
                tuple(sorted((order[ci], rel, germ[1]) for ci, rel, germ in slots))
                for slots in edges
            )
        )
        cand = (head, ser)
        if best is None or cand < best:
            best = cand
    return best


def orbit_isomorphic(a: SubComplex, b: SubComplex) -> bool:
    """Label-preserving isomorphism test between two cell closures."""
    if a.patch.presentation is not b.patch.presentation:
        raise ValueError("tiles must come from the same presentation")
    if len(a.cells) != len(b.cells):
        return False
    if a.patch is b.patch and a.cells == b.cells:
        return True
    return certificate(a) == certificate(b)


def pair_certificate(t: SubComplex, t2: SubComplex) -> tuple:
    """Certificate of a candidate gluing pattern (T, T'), sides tagged."""
    union = t.union(t2)
    parts = {}
    for c in t.cells:
        parts[c] = 1
    for c in t2.cells:
        parts[c] = 2
    # unordered pair: take the smaller of the two side assignments
    parts_swapped = {c: 3 - v for c, v in parts.items()}
    return min(certificate(union, parts), certificate(union, parts_swapped))
