"""Global walls: tracing, embedded-tree checks, decompositions, export.

A wall is a connected component of the union of the tile-walls of the
maximal alive tiles. Each wall should be an embedded tree; its paths
factor through tiles of the collection, and on admissible patches no
short factored segment returns to a common tile.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .complexes import PatchComplex
from .metrics import _adjacency, skeleton_distance
from .walls import (
    WallEdge,
    WallError,
    _order_path_edges,
    balance,
    shard_of,
    wall_cells,
    wall_components,
    wall_endpoints,
    wall_key,
    wall_midpoints,
)


@dataclass(frozen=True)
class WallTrace:
    wall_id: int
    edges: frozenset[WallEdge]
    midpoints: tuple[int, ...]
    cells: tuple[int, ...]


def maximal_alive(tc) -> list:
    """Alive tiles not properly contained in another alive tile."""
    alive = tc.alive_tiles()
    return [
        t for t in alive
        if not any(o is not t and t.cells < o.cells for o in alive)
    ]


def trace_walls(patch: PatchComplex, tc) -> list[WallTrace]:
    edges: set[WallEdge] = set()
    for t in maximal_alive(tc):
        edges |= tc.wall_state.walls_of(t.cells)
    comps = sorted(wall_components(edges), key=wall_key)
    return [
        WallTrace(i, comp, tuple(sorted(wall_midpoints(comp))),
                  tuple(sorted(wall_cells(comp))))
        for i, comp in enumerate(comps)
    ]


@dataclass(frozen=True)
class EmbeddingReport:
    wall_id: int
    witnesses: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.witnesses


def check_embedded(trace: WallTrace) -> EmbeddingReport:
    """Embedded tree: acyclic, and no 2-cell hosts two wall edges of it."""
    wit = []
    loops = sorted(we for we in trace.edges if we.a == we.b)
    for we in loops:
        wit.append(f"degenerate loop edge at midpoint {we.a} in cell {we.cell}")
    if not loops and len(trace.edges) != len(trace.midpoints) - 1:
        wit.append(
            f"cycle: {len(trace.edges)} wall edges on "
            f"{len(trace.midpoints)} midpoints"
        )
    per_cell = Counter(we.cell for we in trace.edges)
    for ci, k in sorted(per_cell.items()):
        if k > 1:
            wit.append(f"cell {ci} hosts {k} wall edges of one wall")
    return EmbeddingReport(trace.wall_id, tuple(wit))


# -- wall paths and decompositions ----------------------------------------


def trace_paths(trace: WallTrace) -> list[tuple[WallEdge, ...]]:
    """Leaf-to-leaf simple paths of an embedded wall tree, ordered."""
    by_mid: dict[int, list[WallEdge]] = {}
    for we in trace.edges:
        by_mid.setdefault(we.a, []).append(we)
        by_mid.setdefault(we.b, []).append(we)
    leaves = wall_endpoints(trace.edges)
    if not leaves and len(trace.edges) == 1:
        return [tuple(trace.edges)]
    paths = []
    for i, src in enumerate(leaves):
        # DFS to every later leaf; embedded trees are tiny at desk scale
        stack = [(src, None, [])]
        while stack:
            m, prev, acc = stack.pop()
            dead_end = True
            for we in sorted(by_mid[m]):
                if we is prev or we in acc:
                    continue
                nxt = we.b if we.a == m else we.a
                stack.append((nxt, we, acc + [we]))
                dead_end = False
            if dead_end and m in leaves[i + 1:] and acc:
                paths.append(tuple(acc))
    paths.sort(key=lambda p: tuple(sorted(p)))
    return paths


def path_midpoints(path: tuple[WallEdge, ...]) -> list[int]:
    """Midpoint sequence m_0 .. m_k along an ordered wall path."""
    if len(path) == 1:
        return list(path[0].midpoints)
    first, second = path[0], path[1]
    shared = set(first.midpoints) & set(second.midpoints)
    cur = next(m for m in first.midpoints if m not in shared)
    mids = [cur]
    for we in path:
        cur = we.b if we.a == cur else we.a
        mids.append(cur)
    return mids


@dataclass(frozen=True)
class Factor:
    edges: tuple[WallEdge, ...]
    tile_cells: tuple[int, ...]
    endpoints: tuple[int, int]
    balanced: bool


@dataclass(frozen=True)
class Decomposition:
    path: tuple[WallEdge, ...]
    factors: tuple[Factor, ...]
    reduced: bool
    fractured_factors: tuple[Factor, ...]
    fractured: bool


def _containing_tiles(tc, cells: frozenset[int]) -> list:
    return sorted(
        (t for t in tc.alive_tiles() if cells <= t.cells),
        key=lambda t: (t.size, t.key()),
    )


def _segment_balanced(tc, tile, edges: tuple[WallEdge, ...],
                      ends: tuple[int, int]) -> bool:
    shard = shard_of(tile, frozenset(edges))
    dist = skeleton_distance(("m", ends[0]), ("m", ends[1]), tile.sub)
    return dist is not None and dist >= 2 * balance(shard.sub)


def decompose(tc, path: tuple[WallEdge, ...]) -> Decomposition:
    """Minimal reduced decomposition, then the fractured refinement.

    Exhaustive over contiguous factorizations into alive tiles; minimal
    length first, then (among minimal) prefer fully reduced ones.
    """
    k = len(path)
    mids = path_midpoints(path)
    seg_tiles: dict[tuple[int, int], list] = {}
    for i in range(k):
        for j in range(i + 1, k + 1):
            cells = frozenset(we.cell for we in path[i:j])
            tiles = _containing_tiles(tc, cells)
            if tiles:
                seg_tiles[(i, j)] = tiles

    # DP for minimal factor count, then enumerate all minimal splits
    INF = k + 1
    best = [INF] * (k + 1)
    best[0] = 0
    for j in range(1, k + 1):
        for i in range(j):
            if (i, j) in seg_tiles and best[i] + 1 < best[j]:
                best[j] = best[i] + 1
    if best[k] > k:
        raise WallError("wall path has no decomposition into collection tiles")

    def splits(j):
        if j == 0:
            yield []
            return
        for i in range(j):
            if (i, j) in seg_tiles and best[i] + 1 == best[j]:
                for head in splits(i):
                    yield head + [(i, j)]

    def realize(cuts, pick):
        factors = []
        for i, j in cuts:
            tile = pick(cuts, (i, j))
            factors.append(
                Factor(path[i:j], tuple(sorted(tile.cells)),
                       (mids[i], mids[j]),
                       _segment_balanced(tc, tile, path[i:j],
                                         (mids[i], mids[j])))
            )
        return factors

    def smallest(cuts, seg):
        return seg_tiles[seg][0]

    def is_reduced(factors):
        for a in range(len(factors)):
            for b in range(a + 2, len(factors)):
                if set(factors[a].tile_cells) & set(factors[b].tile_cells):
                    return False
        return True

    chosen = None
    for cuts in splits(k):
        factors = realize(cuts, smallest)
        if is_reduced(factors):
            chosen = factors
            break
        if chosen is None:
            chosen = factors
    reduced = is_reduced(chosen)

    # fractured refinement: cell-disjoint tiles; fall back to single-edge
    # factors in their 1-tiles wherever tiles collide
    fractured = []
    used: set[int] = set()
    for f in chosen:
        if not (set(f.tile_cells) & used):
            used |= set(f.tile_cells)
            fractured.append(f)
            continue
        lo = path.index(f.edges[0])
        for off, we in enumerate(f.edges):
            one = tc.by_cells(frozenset([we.cell]))
            fractured.append(
                Factor((we,), tuple(sorted(one.cells)),
                       (mids[lo + off], mids[lo + off + 1]),
                       _segment_balanced(tc, one, (we,),
                                         (mids[lo + off], mids[lo + off + 1])))
            )
    frac_ok = all(f.balanced for f in fractured) and is_cell_disjoint(fractured)
    return Decomposition(path, tuple(chosen), reduced, tuple(fractured), frac_ok)


def is_cell_disjoint(factors) -> bool:
    seen: set[int] = set()
    for f in factors:
        cells = set(f.tile_cells)
        if cells & seen:
            return False
        seen |= cells
    return True


# -- returning segments ---------------------------------------------------


@dataclass(frozen=True)
class ReturningHit:
    wall_id: int
    endpoints: tuple[int, int]
    n_factors: int
    t0_cells: tuple[int, ...]


@dataclass(frozen=True)
class ReturningReport:
    n_ret: int
    segments_scanned: int
    hits: tuple[ReturningHit, ...]
    admissibility_cross_reference: tuple | None

    @property
    def ok(self) -> bool:
        return not self.hits


def detect_returning(patch: PatchComplex, tc, traces, n_ret: int,
                     d=None, eps=None) -> ReturningReport:
    """Scan factored wall segments of decomposition length < n_ret for a
    tile holding both end midpoints while no single tile holds the whole
    segment. Hits on an admissible patch would falsify the construction,
    so each hit carries the patch's admissibility violations."""
    alive = tc.alive_tiles()
    hits = []
    scanned = 0
    seen_segments = set()
    for trace in traces:
        for path in trace_paths(trace):
            dec = decompose(tc, path)
            factors = dec.factors
            bounds = []
            pos = 0
            for f in factors:
                bounds.append((pos, pos + len(f.edges)))
                pos += len(f.edges)
            mids = path_midpoints(path)
            for i in range(len(factors)):
                for j in range(i, min(len(factors), i + n_ret - 1)):
                    x, x2 = mids[bounds[i][0]], mids[bounds[j][1]]
                    seg_key = (trace.wall_id, min(x, x2), max(x, x2), j - i + 1)
                    if seg_key in seen_segments:
                        continue
                    seen_segments.add(seg_key)
                    scanned += 1
                    seg_cells = frozenset(
                        we.cell for we in path[bounds[i][0]:bounds[j][1]]
                    )
                    if any(seg_cells <= t.cells for t in alive):
                        continue
                    for t0 in alive:
                        if {x, x2} <= t0.sub.edges:
                            hits.append(ReturningHit(
                                trace.wall_id, (x, x2), j - i + 1,
                                tuple(sorted(t0.cells)),
                            ))
                            break
    cross = None
    if hits and d is not None:
        from .sampler import check_admissible

        rep = check_admissible(patch, d, eps)
        cross = (rep.ok, rep.ipi_violations,
                 tuple(rep.geodesics.short_cycles),
                 tuple(rep.geodesics.nongeodesic_paths))
    return ReturningReport(n_ret, scanned, tuple(hits), cross)


# -- wallspace export -----------------------------------------------------


def export_wallspace(patch: PatchComplex, traces, d, c: int = 1,
                     n_ret: int | None = None) -> dict:
    """Two-side vertex labeling per wall by flood fill of the 1-skeleton
    avoiding wall-carrying edges; separation is reported at patch scale
    only (a connected complement is a boundary effect, not an error)."""
    for trace in traces:
        rep = check_embedded(trace)
        if not rep.ok:
            raise WallError(
                f"refusing export: wall {trace.wall_id} not embedded: "
                f"{rep.witnesses[0]}"
            )
    d = Fraction(d)
    lam = 1 / (1 - 4 * d)
    if n_ret is None:
        n_ret = math.ceil((2 * c + 1) * lam)
    whole = patch.whole
    adj = _adjacency(whole)
    walls = []
    for trace in traces:
        blocked = set(trace.midpoints)
        sides: dict[str, int] = {}
        comps = []
        left = set(whole.vertices)
        while left:
            src = min(left)
            comp = {src}
            stack = [src]
            while stack:
                u = stack.pop()
                for w, e in adj[u]:
                    if e in blocked or w in comp:
                        continue
                    comp.add(w)
                    stack.append(w)
            comps.append(comp)
            left -= comp
        comps.sort(key=min)
        for idx, comp in enumerate(comps):
            side = 0 if idx == 0 else 1
            for v in sorted(comp):
                sides[str(v)] = side
        walls.append({
            "id": trace.wall_id,
            "midpoints": list(trace.midpoints),
            "sides": sides,
            "separating_at_patch_scale": len(comps) == 2,
        })
    return {
        "walls": walls,
        "lambda": f"{lam.numerator}/{lam.denominator}",
        "n_ret": int(n_ret),
    }


def to_dot(patch: PatchComplex, traces) -> str:
    """1-skeleton with walls overlaid through edge midpoints."""
    whole = patch.whole
    lines = ["graph walls {", "  node [shape=point];"]
    wall_mids = {m for tr in traces for m in tr.midpoints}
    for v in sorted(whole.vertices):
        lines.append(f'  v{v} [label="{v}"];')
    for e in sorted(whole.edges):
        t, h = patch.edge_endpoints[e]
        if e in wall_mids:
            lines.append(f'  m{e} [color=red];')
            lines.append(f"  v{t} -- m{e};")
            lines.append(f"  m{e} -- v{h};")
        else:
            lines.append(f"  v{t} -- v{h};")
    for tr in traces:
        for we in sorted(tr.edges):
            lines.append(f"  m{we.a} -- m{we.b} [color=red, penwidth=2];")
    lines.append("}")
    return "\n".join(lines) + "\n"
