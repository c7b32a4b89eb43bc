"""Exact combinatorial metrics on patches and subcomplexes.

Distances between points (vertices and edge midpoints) are integers in
half-edge units; sizes, cancellation, balance and tree diameters are in
edge units. No floating point appears in any predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import dist_kernel
from .complexes import PatchComplex, SubComplex

# Points are ("v", vertex_id) or ("m", edge_id).
Point = tuple[str, int]


def midpoint(eid: int) -> Point:
    return ("m", eid)


def vertex(vid: int) -> Point:
    return ("v", vid)


class NotATreeError(ValueError):
    pass


class RoundTreeError(ValueError):
    pass


def cancellation(sub: SubComplex | PatchComplex) -> int:
    """Can(Y) = sum over 1-cells of (deg - 1), in edge units."""
    if isinstance(sub, PatchComplex):
        sub = sub.whole
    if not sub.is_closed():
        raise ValueError("cancellation requires the closure of a set of 2-cells")
    return sum(sub.degree(e) - 1 for e in sub.edges)


def intersection(a: SubComplex, b: SubComplex) -> SubComplex:
    return a.intersect(b)


# -- half-edge metric graph ---------------------------------------------


@lru_cache(maxsize=16384)
def _metric_graph(sub: SubComplex):
    verts = sorted(sub.vertices)
    edges = sorted(sub.edges)
    index: dict[Point, int] = {}
    for v in verts:
        index[("v", v)] = len(index)
    for e in edges:
        index[("m", e)] = len(index)
    links = []
    for e in edges:
        t, h = sub.patch.edge_endpoints[e]
        m = index[("m", e)]
        links.append((index[("v", t)], m))
        links.append((m, index[("v", h)]))
    indptr, indices = dist_kernel.build_csr(len(index), links)
    return index, indptr, indices


def _locate(sub: SubComplex, p: Point) -> None:
    kind, i = p
    if kind == "v" and i in sub.vertices:
        return
    if kind == "m" and i in sub.edges:
        return
    raise ValueError(f"point {p} does not lie in the subcomplex")


def skeleton_distance(x: Point, y: Point, within: SubComplex) -> int | None:
    """Shortest-path length from x to y inside `within`, in half-edge units.

    Returns None when the two points lie in different components.
    """
    _locate(within, x)
    _locate(within, y)
    if x == y:
        return 0
    index, indptr, indices = _metric_graph(within)
    dist = dist_kernel.bfs_distances(indptr, indices, index[x])
    d = int(dist[index[y]])
    return None if d < 0 else d


def distances_from(x: Point, within: SubComplex) -> dict[Point, int]:
    """Half-unit distances from x to every point of `within` (-1 dropped)."""
    _locate(within, x)
    index, indptr, indices = _metric_graph(within)
    dist = dist_kernel.bfs_distances(indptr, indices, index[x])
    return {p: int(dist[i]) for p, i in index.items() if dist[i] >= 0}


# -- trees ---------------------------------------------------------------


@dataclass(frozen=True)
class TreePath:
    """A simple edge path, with point positions in half-edge units."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def length_edges(self) -> int:
        return len(self.edges)

    @property
    def length_half(self) -> int:
        return 2 * len(self.edges)

    def point_at(self, pos_half: int) -> Point:
        if not (0 <= pos_half <= self.length_half):
            raise ValueError("position off the path")
        if pos_half % 2 == 0:
            return ("v", self.vertices[pos_half // 2])
        return ("m", self.edges[pos_half // 2])

    def position_of(self, p: Point) -> int:
        kind, i = p
        if kind == "v":
            if i in self.vertices:
                return 2 * self.vertices.index(i)
        else:
            if i in self.edges:
                return 2 * self.edges.index(i) + 1
        raise ValueError(f"point {p} not on path")

    def reflect(self, p: Point) -> Point:
        return self.point_at(self.length_half - self.position_of(p))


def path_symmetry(beta: TreePath, x: Point) -> Point:
    """The endpoint-swapping involution of the path, applied to x."""
    return beta.reflect(x)


@dataclass(frozen=True)
class TreeShape:
    sub: SubComplex
    leaves: tuple[int, ...]
    branch_points: tuple[int, ...]
    diameter: int  # edge units
    diameter_paths: tuple[TreePath, ...]

    @property
    def edge_count(self) -> int:
        return self.sub.edge_count


def _adjacency(sub: SubComplex) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in sub.vertices}
    for e in sorted(sub.edges):
        t, h = sub.patch.edge_endpoints[e]
        adj[t].append((h, e))
        adj[h].append((t, e))
    return adj


def tree_path_between(sub: SubComplex, a: int, b: int) -> TreePath:
    """The unique simple path between two vertices of a tree."""
    adj = _adjacency(sub)
    prev: dict[int, tuple[int, int]] = {a: (-1, -1)}
    stack = [a]
    while stack:
        u = stack.pop()
        if u == b:
            break
        for w, e in adj[u]:
            if w not in prev:
                prev[w] = (u, e)
                stack.append(w)
    if b not in prev:
        raise ValueError("vertices not connected")
    verts = [b]
    edges = []
    u = b
    while u != a:
        pu, pe = prev[u]
        edges.append(pe)
        verts.append(pu)
        u = pu
    return TreePath(tuple(reversed(verts)), tuple(reversed(edges)))


def analyze_tree(sub: SubComplex) -> TreeShape:
    """Connectivity, acyclicity, leaves and all diameter paths of a 1-complex."""
    if sub.has_2cells:
        raise ValueError("analyze_tree expects a 1-dimensional subcomplex")
    if not sub.edges:
        raise NotATreeError("empty edge set")
    if not sub.is_connected():
        raise NotATreeError("disconnected subgraph")
    if len(sub.vertices) != len(sub.edges) + 1:
        raise NotATreeError("subgraph contains a cycle")
    adj = _adjacency(sub)
    leaves = tuple(sorted(v for v in sub.vertices if len(adj[v]) == 1))
    branch = tuple(sorted(v for v in sub.vertices if len(adj[v]) >= 3))

    dist: dict[int, dict[int, int]] = {}
    for a in sorted(sub.vertices):
        d = {a: 0}
        stack = [a]
        while stack:
            u = stack.pop()
            for w, _ in adj[u]:
                if w not in d:
                    d[w] = d[u] + 1
                    stack.append(w)
        dist[a] = d
    diam = max(dist[a][b] for a in sub.vertices for b in sub.vertices)
    paths = []
    for a in sorted(sub.vertices):
        for b in sorted(sub.vertices):
            if a < b and dist[a][b] == diam:
                paths.append(tree_path_between(sub, a, b))
    return TreeShape(sub, leaves, branch, diam, tuple(paths))


def classify_tree(shape: TreeShape, ell: int) -> tuple[str, bool]:
    """("long"|"round", in_definitional_range).

    Long iff (|A| + ell/4) / 2 < diam(A), by exact integer comparison.
    """
    in_range = ell // 4 <= shape.edge_count <= ell // 2
    is_long = shape.edge_count + ell // 4 < 2 * shape.diameter
    return ("long" if is_long else "round", in_range)


@dataclass(frozen=True)
class AlphaRegions:
    alpha_plus: frozenset[int]   # edges of A far from u_minus
    alpha_minus: frozenset[int]  # edges of A far from u_plus
    u_plus: int
    u_minus: int


def _far_edges(shape: TreeShape, u: int, q: int) -> frozenset[int]:
    """Edges of A not contained in the closed q-ball around vertex u."""
    sub = shape.sub
    d = {p: h for p, h in distances_from(("v", u), sub).items() if p[0] == "v"}
    out = set()
    for e in sub.edges:
        t, h = sub.patch.edge_endpoints[e]
        if min(d[("v", t)], d[("v", h)]) // 2 + 1 > q:
            out.add(e)
    return frozenset(out)


def alpha_regions(shape: TreeShape, ell: int) -> AlphaRegions:
    """The unbending regions of a long tree, checked over every diameter."""
    kind, _ = classify_tree(shape, ell)
    if kind != "long":
        raise RoundTreeError("alpha regions exist only for long trees")
    q = ell // 4
    results = []
    for path in shape.diameter_paths:
        a, b = path.vertices[0], path.vertices[-1]
        results.append({a: _far_edges(shape, a, q), b: _far_edges(shape, b, q)})
    base = results[0]
    (u0, alpha_far_u0), (u1, alpha_far_u1) = sorted(base.items())
    for res in results[1:]:
        if sorted(res.values(), key=sorted) != sorted(base.values(), key=sorted):
            raise AssertionError("alpha regions depend on the diameter choice")
    # alpha_plus is the region far from u_minus; order endpoints by id.
    u_minus, u_plus = u0, u1
    return AlphaRegions(
        alpha_plus=alpha_far_u0, alpha_minus=alpha_far_u1,
        u_plus=u_plus, u_minus=u_minus,
    )


# -- global patch checks -------------------------------------------------


@dataclass(frozen=True)
class GeodesicReport:
    girth: int | None
    short_cycles: tuple[tuple[int, int], ...]      # (length, witness edge)
    nongeodesic_paths: tuple[tuple[int, int, int, int], ...]  # (u, v, len, dist)

    @property
    def ok(self) -> bool:
        return not self.short_cycles and not self.nongeodesic_paths


def check_embedded_geodesics(patch: PatchComplex, ell: int | None = None) -> GeodesicReport:
    """No embedded closed path shorter than ell; short embedded paths geodesic."""
    if ell is None:
        ell = patch.ell
    whole = patch.whole
    adj = _adjacency(whole)

    girth = None
    short_cycles = []
    for e in sorted(whole.edges):
        t, h = patch.edge_endpoints[e]
        if t == h:
            length = 1
        else:
            # shortest cycle through e = 1 + dist(t, h) avoiding e
            d = {t: 0}
            frontier = [t]
            found = None
            while frontier and found is None:
                nxt = []
                for u in frontier:
                    for w, ee in adj[u]:
                        if ee == e:
                            continue
                        if w not in d:
                            d[w] = d[u] + 1
                            if w == h:
                                found = d[w]
                                break
                            nxt.append(w)
                    if found is not None:
                        break
                frontier = nxt
            if found is None:
                continue
            length = found + 1
        if girth is None or length < girth:
            girth = length
        if length < ell:
            short_cycles.append((length, e))

    nongeodesic = _nongeodesic_paths(patch, adj, ell)
    return GeodesicReport(girth, tuple(short_cycles), tuple(nongeodesic))


def _nongeodesic_paths(patch, adj, ell):
    """Embedded paths of length <= ell/2 that beat no geodesic: DFS with
    pruning at the first excess, so the search stays near-linear when the
    patch is clean."""
    bound = ell // 2
    whole = patch.whole
    out = []
    for src in sorted(whole.vertices):
        d = {p: h // 2 for p, h in distances_from(("v", src), whole).items()
             if p[0] == "v"}
        stack = [(src, frozenset([src]), 0)]
        while stack:
            u, used, length = stack.pop()
            for w, e in adj[u]:
                if w in used:
                    continue
                nl = length + 1
                if nl > bound:
                    continue
                if nl > d[("v", w)]:
                    if src < w:
                        out.append((src, w, nl, d[("v", w)]))
                    continue
                stack.append((w, used | {w}, nl))
    return out


def is_kk_bounded(patch: PatchComplex, K: int, K_prime: int) -> bool:
    """|Y| <= K and at most K' gluing subpaths in the gluing history."""
    return len(patch.cells) <= K and len(patch.gluings) <= K_prime


@dataclass(frozen=True)
class IpiResult:
    ok: bool
    can: int
    bound: Fraction

    def __bool__(self) -> bool:
        return self.ok


def ipi_check(sub: SubComplex | PatchComplex, d: Fraction, eps: Fraction,
              ell: int | None = None) -> IpiResult:
    """Isoperimetric admissibility: Can(Y) <= (d + eps) |Y| ell, exactly."""
    if isinstance(sub, PatchComplex):
        sub = sub.whole
    if ell is None:
        ell = sub.patch.ell
    can = cancellation(sub)
    bound = (Fraction(d) + Fraction(eps)) * sub.size * ell
    return IpiResult(Fraction(can) <= bound, can, bound)
