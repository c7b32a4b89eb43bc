"""Finite polygonal 2-complexes fulfilled by a presentation.

A patch is a quotient of disjoint relator polygons by a list of boundary
subpath identifications. Edges and vertices are computed by union-find;
every edge remembers its incident boundary slots, so degrees, cancellation
and the local-injectivity (fulfilledness) condition are all exact.

Positions are in (subdivided) edge units, 0-indexed around each polygon.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .presentation import Presentation


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class CellSpec:
    relator: int
    rotation: int = 0
    inverted: bool = False


@dataclass(frozen=True)
class Gluing:
    cell_a: int
    start_a: int
    cell_b: int
    start_b: int
    length: int
    reversed: bool = True

    def to_json(self) -> dict:
        return {
            "cell_a": self.cell_a,
            "start_a": self.start_a,
            "cell_b": self.cell_b,
            "start_b": self.start_b,
            "length": self.length,
            "reversed": self.reversed,
        }


def fine_tokens(word: tuple[int, ...], k: int) -> list[tuple[int, int]]:
    """Boundary tokens ((fine 1-cell id, direction)) after k-fold subdivision."""
    toks = []
    for g in word:
        if g > 0:
            toks.extend(((g - 1) * k + j, +1) for j in range(k))
        else:
            toks.extend(((-g - 1) * k + (k - 1 - j), -1) for j in range(k))
    return toks


class _UnionFind:
    """Union-find with a +-1 orientation relative to each root."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rel = [1] * n

    def find(self, x: int) -> tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        sign = 1
        for y in reversed(path):
            sign *= self.rel[y]
            self.parent[y] = x
            self.rel[y] = sign
        return x, self.rel[path[0]] if path else 1

    def union(self, x: int, y: int, sign: int) -> bool:
        """Impose orient(x) = sign * orient(y). False on contradiction."""
        rx, sx = self.find(x)
        ry, sy = self.find(y)
        if rx == ry:
            return sx == sign * sy
        self.parent[ry] = rx
        self.rel[ry] = sx * sign * sy
        return True


class PatchComplex:
    def __init__(
        self,
        presentation: Presentation,
        cells: list[CellSpec],
        gluings: list[Gluing],
        require_fulfilled: bool = True,
    ):
        self.presentation = presentation
        self.ell = presentation.ell
        self.cells = tuple(cells)
        self.gluings = tuple(gluings)
        self._build()
        if require_fulfilled and self.fulfilled_violations:
            raise ComplexError(
                f"labeling not locally injective around edges: "
                f"{self.fulfilled_violations[:3]}"
            )

    # -- construction ---------------------------------------------------

    def _boundary(self, spec: CellSpec) -> list[tuple[int, int]]:
        word = self.presentation.relators[spec.relator]
        if spec.inverted:
            word = tuple(-g for g in reversed(word))
        toks = fine_tokens(word, self.presentation.subdivision)
        r = spec.rotation % self.ell
        return toks[r:] + toks[:r]

    def _germ(self, ci: int, i: int) -> tuple[int, int]:
        """Image corner in the canonical relator polygon (relator, position)."""
        spec = self.cells[ci]
        p = (i + spec.rotation) % self.ell
        if spec.inverted:
            p = self.ell - 1 - p
        return (spec.relator, p)

    def _build(self):
        ell = self.ell
        m = len(self.cells)
        self.boundary = [self._boundary(c) for c in self.cells]

        uf_e = _UnionFind(m * ell)
        uf_v = _UnionFind(m * ell)

        def eidx(ci, i):
            return ci * ell + (i % ell)

        for g in self.gluings:
            if not (0 <= g.cell_a < m and 0 <= g.cell_b < m):
                raise ComplexError(f"gluing references unknown cell: {g}")
            if not (1 <= g.length <= ell):
                raise ComplexError(f"bad gluing length: {g}")
            for k in range(g.length):
                ia = (g.start_a + k) % ell
                ta, da = self.boundary[g.cell_a][ia]
                if g.reversed:
                    ib = (g.start_b + g.length - 1 - k) % ell
                    tb, db = self.boundary[g.cell_b][ib]
                    if ta != tb or da != -db:
                        raise ComplexError(f"label mismatch in gluing {g} at offset {k}")
                    uf_e.union(eidx(g.cell_a, ia), eidx(g.cell_b, ib), -1)
                    uf_v.union(eidx(g.cell_a, ia), eidx(g.cell_b, ib + 1), 1)
                    uf_v.union(eidx(g.cell_a, ia + 1), eidx(g.cell_b, ib), 1)
                else:
                    ib = (g.start_b + k) % ell
                    tb, db = self.boundary[g.cell_b][ib]
                    if ta != tb or da != db:
                        raise ComplexError(f"label mismatch in gluing {g} at offset {k}")
                    uf_e.union(eidx(g.cell_a, ia), eidx(g.cell_b, ib), 1)
                    uf_v.union(eidx(g.cell_a, ia), eidx(g.cell_b, ib), 1)
                    uf_v.union(eidx(g.cell_a, ia + 1), eidx(g.cell_b, ib + 1), 1)

        # edge classes, ids ordered by minimal slot for determinism
        classes: dict[int, list[tuple[int, int]]] = {}
        for s in range(m * ell):
            root, sign = uf_e.find(s)
            classes.setdefault(root, []).append((s, sign))
        roots = sorted(classes, key=lambda r: min(s for s, _ in classes[r]))
        self.edge_slots: list[list[tuple[int, int, int]]] = []  # (cell, pos, orient)
        self.edge_of_slot: dict[tuple[int, int], tuple[int, int]] = {}
        for eid, root in enumerate(roots):
            slots = sorted(classes[root])
            rep_sign = slots[0][1]
            rec = []
            for s, sign in slots:
                orient = sign * rep_sign  # +1 if aligned with representative slot
                ci, i = divmod(s, ell)
                rec.append((ci, i, orient))
                self.edge_of_slot[(ci, i)] = (eid, orient)
            self.edge_slots.append(rec)

        vclasses: dict[int, list[int]] = {}
        for s in range(m * ell):
            root, _ = uf_v.find(s)
            vclasses.setdefault(root, []).append(s)
        vroots = sorted(vclasses, key=lambda r: min(vclasses[r]))
        self.vertex_of_corner: dict[tuple[int, int], int] = {}
        self.vertex_corners: list[list[tuple[int, int]]] = []
        for vid, root in enumerate(vroots):
            corners = sorted(vclasses[root])
            self.vertex_corners.append([divmod(s, ell) for s in corners])
            for s in corners:
                self.vertex_of_corner[divmod(s, ell)] = vid

        # endpoints in the representative slot's direction: tail -> head
        self.edge_endpoints: list[tuple[int, int]] = []
        for rec in self.edge_slots:
            ci, i, orient = rec[0]
            assert orient == 1
            tail = self.vertex_of_corner[(ci, i)]
            head = self.vertex_of_corner[(ci, (i + 1) % ell)]
            self.edge_endpoints.append((tail, head))

        self.n_edges = len(self.edge_slots)
        self.n_vertices = len(self.vertex_corners)

        self.fulfilled_violations = []
        for eid, rec in enumerate(self.edge_slots):
            germs = [self._germ(ci, i) for ci, i, _ in rec]
            if len(set(germs)) != len(germs):
                self.fulfilled_violations.append((eid, sorted(germs)))

    # -- queries --------------------------------------------------------

    def edge_degree(self, eid: int) -> int:
        return len(self.edge_slots[eid])

    def cell_edge_ids(self, ci: int) -> list[int]:
        """Edge id at each boundary position of cell ci."""
        return [self.edge_of_slot[(ci, i)][0] for i in range(self.ell)]

    @cached_property
    def edge_cells(self) -> list[frozenset[int]]:
        return [frozenset(ci for ci, _, _ in rec) for rec in self.edge_slots]

    @cached_property
    def all_cells(self) -> frozenset[int]:
        return frozenset(range(len(self.cells)))

    def closure(self, cells) -> "SubComplex":
        return SubComplex.closure_of_cells(self, cells)

    @cached_property
    def whole(self) -> "SubComplex":
        return self.closure(self.all_cells)

    def subgraph(self, edges) -> "SubComplex":
        return SubComplex.from_edges(self, edges)

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "cells": [
                {
                    "id": i,
                    "relator": c.relator,
                    "rotation": c.rotation,
                    "inverted": c.inverted,
                }
                for i, c in enumerate(self.cells)
            ],
            "gluings": [g.to_json() for g in self.gluings],
        }

    @classmethod
    def from_json(cls, data: dict, presentation: Presentation, **kw) -> "PatchComplex":
        cells_sorted = sorted(data["cells"], key=lambda c: c["id"])
        cells = [
            CellSpec(c["relator"], c["rotation"], c["inverted"]) for c in cells_sorted
        ]
        gluings = [
            Gluing(
                g["cell_a"], g["start_a"], g["cell_b"], g["start_b"],
                g["length"], g["reversed"],
            )
            for g in data["gluings"]
        ]
        return cls(presentation, cells, gluings, **kw)

    def to_dot(self) -> str:
        lines = ["graph skeleton {"]
        for v in range(self.n_vertices):
            lines.append(f'  v{v} [shape=point];')
        for eid, (t, h) in enumerate(self.edge_endpoints):
            deg = self.edge_degree(eid)
            lines.append(f'  v{t} -- v{h} [label="e{eid} deg={deg}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class SubComplex:
    """A subcomplex of a patch: 2-cells plus a (closed) 1-dimensional part."""

    patch: PatchComplex
    cells: frozenset[int]
    edges: frozenset[int]
    vertices: frozenset[int]

    @classmethod
    def closure_of_cells(cls, patch: PatchComplex, cells) -> "SubComplex":
        cells = frozenset(cells)
        edges = set()
        for ci in cells:
            edges.update(patch.cell_edge_ids(ci))
        vertices = set()
        for e in edges:
            vertices.update(patch.edge_endpoints[e])
        return cls(patch, cells, frozenset(edges), frozenset(vertices))

    @classmethod
    def from_edges(cls, patch: PatchComplex, edges) -> "SubComplex":
        edges = frozenset(edges)
        vertices = set()
        for e in edges:
            vertices.update(patch.edge_endpoints[e])
        return cls(patch, frozenset(), edges, frozenset(vertices))

    def __eq__(self, other):
        return (
            isinstance(other, SubComplex)
            and self.patch is other.patch
            and self.cells == other.cells
            and self.edges == other.edges
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((id(self.patch), self.cells, self.edges, self.vertices))

    @property
    def size(self) -> int:
        """Number of 2-cells, |Y|."""
        return len(self.cells)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def has_2cells(self) -> bool:
        return bool(self.cells)

    def is_closed(self) -> bool:
        """True if the 1-part is exactly the closure of the 2-cells."""
        closure = SubComplex.closure_of_cells(self.patch, self.cells)
        return self.edges == closure.edges and self.vertices == closure.vertices

    def is_closure_of_cells(self) -> bool:
        return self.has_2cells and self.is_closed()

    def degree(self, eid: int) -> int:
        """Number of boundary slots of this subcomplex's 2-cells on edge eid."""
        return sum(1 for ci, _, _ in self.patch.edge_slots[eid] if ci in self.cells)

    def intersect(self, other: "SubComplex") -> "SubComplex":
        assert self.patch is other.patch
        return SubComplex(
            self.patch,
            self.cells & other.cells,
            self.edges & other.edges,
            self.vertices & other.vertices,
        )

    def union(self, other: "SubComplex") -> "SubComplex":
        assert self.patch is other.patch
        return SubComplex(
            self.patch,
            self.cells | other.cells,
            self.edges | other.edges,
            self.vertices | other.vertices,
        )

    def contains(self, other: "SubComplex") -> bool:
        return (
            self.cells >= other.cells
            and self.edges >= other.edges
            and self.vertices >= other.vertices
        )

    def contains_midpoint(self, eid: int) -> bool:
        return eid in self.edges

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edges:
            t, h = self.patch.edge_endpoints[e]
            adj[t].append(h)
            adj[h].append(t)
        start = min(self.vertices)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def key(self) -> tuple:
        """Deterministic sort key."""
        return (tuple(sorted(self.cells)), tuple(sorted(self.edges)))
