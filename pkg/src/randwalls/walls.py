"""Tile-walls: antipodal initialization, bending at long gluings, balance.

A wall edge joins two edge midpoints inside one 2-cell; a tile-wall is a
connected component of the wall-edge graph of a tile. Midpoints are patch
edge ids, so concatenation across a gluing is just taking unions of wall
edge sets and recomputing components. Balance values are in edge units;
skeleton distances are in half-edge units, so every comparison doubles
the balance side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import PatchComplex, SubComplex
from .metrics import (
    AlphaRegions,
    NotATreeError,
    alpha_regions,
    analyze_tree,
    cancellation,
    classify_tree,
    skeleton_distance,
)


class WallError(ValueError):
    pass


def balance(sub: SubComplex) -> int:
    """Bal(T) = (ell/4)(|T| + 1) - Can(T), in edge units."""
    ell = sub.patch.ell
    return (ell // 4) * (sub.size + 1) - cancellation(sub)


@dataclass(frozen=True, order=True)
class WallEdge:
    cell: int
    a: int  # midpoint = patch edge id, a <= b
    b: int

    @classmethod
    def make(cls, cell: int, m1: int, m2: int) -> "WallEdge":
        return cls(cell, *sorted((m1, m2)))

    @property
    def midpoints(self) -> tuple[int, int]:
        return (self.a, self.b)


def antipodal_walls(patch: PatchComplex, ci: int) -> frozenset[WallEdge]:
    """One wall edge per antipodal pair of boundary positions of cell ci."""
    ids = patch.cell_edge_ids(ci)
    half = patch.ell // 2
    return frozenset(WallEdge.make(ci, ids[i], ids[i + half]) for i in range(half))


def wall_components(edges) -> list[frozenset[WallEdge]]:
    """Connected components of the wall-edge graph, deterministically ordered."""
    edges = sorted(set(edges))
    by_mid: dict[int, list[WallEdge]] = {}
    for we in edges:
        by_mid.setdefault(we.a, []).append(we)
        if we.b != we.a:
            by_mid.setdefault(we.b, []).append(we)
    seen: set[WallEdge] = set()
    comps = []
    for we in edges:
        if we in seen:
            continue
        comp = {we}
        stack = [we]
        seen.add(we)
        while stack:
            cur = stack.pop()
            for m in cur.midpoints:
                for nxt in by_mid[m]:
                    if nxt not in seen:
                        seen.add(nxt)
                        comp.add(nxt)
                        stack.append(nxt)
        comps.append(frozenset(comp))
    return comps


def wall_midpoints(comp) -> frozenset[int]:
    return frozenset(m for we in comp for m in we.midpoints)


def wall_cells(comp) -> frozenset[int]:
    return frozenset(we.cell for we in comp)


def _mid_degrees(comp) -> dict[int, int]:
    deg: dict[int, int] = {}
    for we in comp:
        deg[we.a] = deg.get(we.a, 0) + 1
        deg[we.b] = deg.get(we.b, 0) + 1
    return deg


def wall_endpoints(comp) -> tuple[int, ...]:
    """Degree-1 midpoints of a wall component, sorted. Empty for loops."""
    return tuple(sorted(m for m, d in _mid_degrees(comp).items() if d == 1))


def wall_key(comp) -> tuple:
    return tuple(sorted(comp))


def check_tile_wall(patch: PatchComplex, cells, wall_edges) -> list[str]:
    """Tile-wall validity: per wall, <= 2 vertices on any 2-cell, immersed,
    every component a simple path (no loops, no branching)."""
    violations = []
    cell_edge_sets = {ci: set(patch.cell_edge_ids(ci)) for ci in cells}
    for comp in wall_components(wall_edges):
        mids = wall_midpoints(comp)
        for we in comp:
            if we.a == we.b:
                violations.append(f"degenerate wall edge at midpoint {we.a} in cell {we.cell}")
        for m, d in sorted(_mid_degrees(comp).items()):
            if d > 2:
                violations.append(f"wall branches at midpoint {m} (degree {d})")
        for ci, edge_set in sorted(cell_edge_sets.items()):
            on_cell = sorted(m for m in mids if m in edge_set)
            if len(on_cell) > 2:
                violations.append(
                    f"cell {ci} carries {len(on_cell)} vertices {on_cell} of one wall"
                )
            here = sorted(we for we in comp if we.cell == ci)
            for i, w1 in enumerate(here):
                for w2 in here[i + 1:]:
                    if set(w1.midpoints) & set(w2.midpoints):
                        violations.append(
                            f"wall not immersed in cell {ci}: {w1} and {w2} share a vertex"
                        )
    return violations


# -- construction state ---------------------------------------------------


@dataclass
class WallState:
    """Wall edges per tile (keyed by cell set), plus the bend audit trail."""

    walls: dict[frozenset[int], frozenset[WallEdge]] = field(default_factory=dict)
    bend_log: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def init_cell(self, patch: PatchComplex, ci: int) -> frozenset[WallEdge]:
        key = frozenset([ci])
        if key not in self.walls:
            self.walls[key] = antipodal_walls(patch, ci)
        return self.walls[key]

    def walls_of(self, cells) -> frozenset[WallEdge]:
        return self.walls[frozenset(cells)]


def step1_kind(t: SubComplex, t2: SubComplex):
    """("1a"|"1b", tree shape, alpha regions or None) for a Step-1 gluing.

    A disconnected or cyclic intersection (possible only on inadmissible
    patches built with force) degrades to an unbent "1a" gluing.
    """
    inter = t.intersect(t2)
    tree = t.patch.subgraph(inter.edges)
    try:
        shape = analyze_tree(tree)
    except NotATreeError:
        return "1a", None, None
    kind, _ = classify_tree(shape, t.patch.ell)
    if kind == "long":
        return "1b", shape, alpha_regions(shape, t.patch.ell)
    return "1a", shape, None


def _cell_arc_symmetries(patch, ci: int, alpha_edges: frozenset[int], warnings):
    """Midpoint involution of each path component of alpha restricted to ci."""
    arc = sorted(set(patch.cell_edge_ids(ci)) & alpha_edges)
    sym: dict[int, int] = {}
    if not arc:
        return sym
    sub = patch.subgraph(arc)
    for comp_edges in _edge_components(patch, arc):
        ordered = _order_path_edges(patch, comp_edges)
        if ordered is None:
            warnings.append(
                f"alpha region in cell {ci} is not a simple path; left unbent"
            )
            continue
        for j, e in enumerate(ordered):
            sym[e] = ordered[len(ordered) - 1 - j]
    return sym


def _edge_components(patch, edges) -> list[list[int]]:
    adj: dict[int, list[int]] = {}
    for e in edges:
        t, h = patch.edge_endpoints[e]
        adj.setdefault(t, []).append(e)
        adj.setdefault(h, []).append(e)
    seen: set[int] = set()
    comps = []
    for e in sorted(edges):
        if e in seen:
            continue
        comp = {e}
        seen.add(e)
        stack = [e]
        while stack:
            cur = stack.pop()
            for v in patch.edge_endpoints[cur]:
                for nxt in adj[v]:
                    if nxt not in seen:
                        seen.add(nxt)
                        comp.add(nxt)
                        stack.append(nxt)
        comps.append(sorted(comp))
    return comps


def _order_path_edges(patch, edges) -> list[int] | None:
    """Order a connected edge set along a simple path, or None."""
    incid: dict[int, list[int]] = {}
    for e in edges:
        for v in patch.edge_endpoints[e]:
            incid.setdefault(v, []).append(e)
    ends = sorted(v for v, es in incid.items() if len(es) == 1)
    if any(len(es) > 2 for es in incid.values()):
        return None
    if len(edges) == 1:
        return list(edges)
    if len(ends) != 2:
        return None
    ordered = []
    v = ends[0]
    prev = None
    while True:
        nxt = [e for e in incid[v] if e != prev]
        if not nxt:
            break
        e = nxt[0]
        ordered.append(e)
        t, h = patch.edge_endpoints[e]
        v = h if v == t else t
        prev = e
    return ordered if len(ordered) == len(edges) else None


def bend_walls(
    t2: SubComplex,
    wall_edges: frozenset[WallEdge],
    regions: AlphaRegions,
    state: WallState,
    gluing_step: int,
) -> frozenset[WallEdge]:
    """Apply the unbending rule to the younger tile's wall edges.

    For each 2-cell C_i of T' meeting an alpha region, every wall-edge
    endpoint x lying in alpha_i gets replaced by the arc symmetry image
    s(x); both endpoints of a wall edge may move (via different arcs).
    """
    patch = t2.patch
    sym_by_cell: dict[int, dict[int, tuple[int, str]]] = {}
    for side, alpha in (("+", regions.alpha_plus), ("-", regions.alpha_minus)):
        for ci in sorted(t2.cells):
            sym = _cell_arc_symmetries(patch, ci, alpha, state.warnings)
            if not sym:
                continue
            dest = sym_by_cell.setdefault(ci, {})
            for x, sx in sym.items():
                if x in dest and dest[x][0] != sx:
                    state.warnings.append(
                        f"midpoint {x} in cell {ci} lies in both alpha regions"
                    )
                    continue
                dest[x] = (sx, side)
    out = set()
    for we in sorted(wall_edges):
        sym = sym_by_cell.get(we.cell, {})
        new = []
        for m in we.midpoints:
            if m in sym:
                sx, side = sym[m]
                if sx != m:
                    state.bend_log.append(
                        {
                            "gluing_step": gluing_step,
                            "cell": we.cell,
                            "alpha_side": side,
                            "from_midpoint": m,
                            "to_midpoint": sx,
                        }
                    )
                new.append(sx)
            else:
                new.append(m)
        out.add(WallEdge.make(we.cell, new[0], new[1]))
    return frozenset(out)


def bend_and_glue(
    t: SubComplex,
    t2: SubComplex,
    state: WallState,
    tc_step: str,
    gluing_step: int = 0,
    bend: bool = True,
) -> frozenset[WallEdge]:
    """Produce the wall edges of T union T' and record them in the state.

    `t2` must be the younger tile: Step 1(b) bending applies to its cells.
    tc_step is "1" (auto round/long), "1a", "1b", "2" or "3".
    """
    patch = t.patch
    w1 = state.walls_of(t.cells)
    w2 = state.walls_of(t2.cells)
    if tc_step in ("1", "1a", "1b"):
        kind, shape, regions = step1_kind(t, t2)
        if tc_step == "1b" and kind == "1a":
            raise WallError("bending requested on a round intersection")
        if tc_step == "1a":
            kind = "1a"
        if kind == "1b" and bend:
            if t2.size > 3:
                state.warnings.append(
                    f"Step 1(b) gluing with |T'| = {t2.size} > 3: beyond verified range"
                )
            w2 = bend_walls(t2, w2, regions, state, gluing_step)
    merged = w1 | w2
    state.walls[t.cells | t2.cells] = merged
    return merged


# -- shards and balance ---------------------------------------------------


def shard_of(tile, comp):
    """The subtile against whose balance the wall path `comp` is measured.

    `tile` carries provenance: .sub (closure), .cells, .step in
    {"start", "1", "2", "3"} and .parents (ordered; for Step 3 the second
    parent is the side containing the most recent Step-2 union).
    """
    gcells = wall_cells(comp)
    if not gcells <= tile.cells:
        raise WallError("wall path does not lie in the tile")
    if tile.step in ("start", "1"):
        return tile
    if tile.step == "2":
        bal_union = balance(tile.sub)
        for parent in sorted(tile.parents, key=lambda p: sorted(p.cells)):
            if gcells <= parent.cells and balance(parent.sub) <= bal_union:
                return parent
        return tile
    if tile.step == "3":
        r2 = tile.parents[1]
        if gcells <= r2.cells:
            return shard_of(r2, comp)
        return tile
    raise WallError(f"unknown provenance {tile.step!r}")


@dataclass(frozen=True)
class BalanceEntry:
    endpoints: tuple[int, int]
    distance_half: int
    shard_cells: tuple[int, ...]
    shard_balance: int
    ok: bool


@dataclass(frozen=True)
class BalanceReport:
    entries: tuple[BalanceEntry, ...]
    structure_violations: tuple[str, ...]

    @property
    def failures(self) -> tuple[BalanceEntry, ...]:
        return tuple(e for e in self.entries if not e.ok)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.structure_violations


def verify_balanced(tile, state: WallState) -> BalanceReport:
    """|x, x'|_T >= Bal(sh_T(gamma)) for every wall path, by exact BFS."""
    sub = tile.sub
    wall_edges = state.walls_of(tile.cells)
    structure = check_tile_wall(sub.patch, tile.cells, wall_edges)
    entries = []
    for comp in wall_components(wall_edges):
        ends = wall_endpoints(comp)
        if len(ends) != 2:
            structure.append(
                f"wall component with endpoints {ends} is not a simple path"
            )
            continue
        x, x2 = ends
        dist = skeleton_distance(("m", x), ("m", x2), sub)
        shard = shard_of(tile, comp)
        bal = balance(shard.sub)
        ok = dist is not None and dist >= 2 * bal
        entries.append(
            BalanceEntry((x, x2), -1 if dist is None else dist,
                         tuple(sorted(shard.cells)), bal, ok)
        )
    return BalanceReport(tuple(entries), tuple(structure))


# -- case analysis --------------------------------------------------------


def classify_wall_case(comp, t: SubComplex, t2: SubComplex,
                       regions: AlphaRegions | None = None) -> str:
    """Which of the seven configurations a wall path of T union T' realizes.

    Returns "1", "2a", "2b", "3a", "3b", "4a", "4b", or "other" for
    configurations outside the enumeration (expected only on degenerate
    input; callers report these rather than assume them balanced).
    """
    patch = t.patch
    if regions is None:
        kind, shape, regions = step1_kind(t, t2)
        if regions is None:
            alpha = frozenset()
        else:
            alpha = regions.alpha_plus | regions.alpha_minus
    else:
        alpha = regions.alpha_plus | regions.alpha_minus
    a_edges = t.intersect(t2).edges
    cells = wall_cells(comp)
    one_side = cells <= t.cells or cells <= t2.cells
    mids = wall_midpoints(comp)
    ends = set(wall_endpoints(comp))
    in_a = {m for m in mids if m in a_edges}
    touches_alpha = bool({m for m in mids if m in alpha})
    if one_side:
        if not in_a:
            return "1"
        if len(in_a) == 1 and in_a <= ends:
            return "2a" if (ends & alpha) else "2b"
        if len(in_a) == 1 and not (in_a & ends):
            (y,) = in_a
            if y in alpha:
                return "3a"
            return "3b" if not touches_alpha else "other"
        return "other"
    if len(in_a) == 1 and not (in_a & ends):
        (y,) = in_a
        if y in alpha:
            return "4a"
        return "4b" if not touches_alpha else "other"
    return "other"


# -- lemma verification ---------------------------------------------------


@dataclass
class LemmaTally:
    lemma: str
    checked: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _paths_with_endpoints(wall_edges):
    out = []
    for comp in wall_components(wall_edges):
        ends = wall_endpoints(comp)
        if len(ends) == 2:
            out.append((comp, ends))
    return out


def _tree_path_symmetry_map(patch, path_edges):
    ordered = _order_path_edges(patch, list(path_edges))
    if ordered is None:
        return None
    return {e: ordered[len(ordered) - 1 - j] for j, e in enumerate(ordered)}


def lemma_suite(t: SubComplex, t2: SubComplex, state: WallState) -> dict[str, LemmaTally]:
    """Exact verification of the balance lemmas on one tile pair.

    Hypothesis failures are counted as skips; only admissible-instance
    violations should ever appear for a correctly built collection.
    """
    patch = t.patch
    ell = patch.ell
    q = ell // 4
    union = t.union(t2)
    inter = t.intersect(t2)
    shared_cells = bool(t.cells & t2.cells)
    tallies = {
        name: LemmaTally(name)
        for name in ("trees", "balancebounds", "lemma44", "lemma45",
                     "lemma46", "lemma48", "roundtrees", "balance_monotone")
    }

    def potile(sub):
        return cancellation(sub) >= (ell // 4) * (sub.size - 1)

    # Remark balancebounds on T, T', and the union
    for sub in (t, t2, union):
        tallies["balancebounds"].checked += 1
        bal = balance(sub)
        if potile(sub) and sub.is_connected():
            if not (q <= bal <= ell // 2):
                tallies["balancebounds"].violations.append(
                    ("potile balance out of range", sorted(sub.cells), bal)
                )
        elif sub.is_connected() and not (bal > ell // 2):
            tallies["balancebounds"].violations.append(
                ("non-potile balance too small", sorted(sub.cells), bal)
            )

    if shared_cells:
        for name in ("trees", "lemma44", "lemma45", "lemma46", "lemma48",
                     "roundtrees", "balance_monotone"):
            tallies[name].skipped += 1
        return tallies

    # Lemma trees: intersection of cell-disjoint potiles
    tallies["trees"].checked += 1
    if potile(t) and potile(t2) and inter.edges:
        tree = patch.subgraph(inter.edges)
        bad = (
            not tree.is_connected()
            or len(tree.vertices) != len(tree.edges) + 1
            or len(tree.edges) > ell // 2
        )
        if bad:
            tallies["trees"].violations.append(
                ("intersection not a small tree", sorted(inter.edges))
            )
    else:
        tallies["trees"].checked -= 1
        tallies["trees"].skipped += 1

    # Balance monotonicity from the Lemma 4.5 proof
    tallies["balance_monotone"].checked += 1
    if not balance(union) <= balance(t) - inter.edge_count + q:
        tallies["balance_monotone"].violations.append(
            ("Bal(TuT') > Bal(T) - |A| + l/4", balance(union), balance(t))
        )

    paths_t = _paths_with_endpoints(state.walls_of(t.cells))
    paths_t2 = _paths_with_endpoints(state.walls_of(t2.cells))

    def balanced_in(sub, ends):
        d = skeleton_distance(("m", ends[0]), ("m", ends[1]), sub)
        return d is not None and d >= 2 * balance(sub)

    # Lemmas 4.4 / 4.5 for balanced wall paths of T against T'
    for comp, ends in paths_t:
        if not balanced_in(t, ends):
            tallies["lemma44"].skipped += 1
            tallies["lemma45"].skipped += 1
            continue
        tallies["lemma44"].checked += 1
        inside = [x for x in ends if x in t2.edges]
        if len(inside) > 1:
            tallies["lemma44"].violations.append(
                ("both endpoints meet the other tile", ends)
            )
        tallies["lemma45"].checked += 1
        d_union = skeleton_distance(("m", ends[0]), ("m", ends[1]), union)
        lower = 2 * (balance(union) + inter.edge_count - q)
        if inter.edge_count >= q:
            lower = max(lower, 2 * balance(union))
        if d_union is None or d_union < lower:
            tallies["lemma45"].violations.append(
                ("endpoint separation below Lemma 4.5 bound", ends, d_union, lower)
            )

    # Lemma 4.6 (and 4.8 as the alpha = {y} special case)
    if inter.edges:
        tree = patch.subgraph(inter.edges)
        try:
            shape = analyze_tree(tree)
        except ValueError:
            shape = None
        if shape is not None and inter.edge_count > q:
            sym = None
            for path in shape.diameter_paths:
                cover = _covered_by(patch, tree, path.edges, q)
                if cover:
                    sym = _tree_path_symmetry_map(patch, path.edges)
                    break
            if sym is None:
                tallies["lemma46"].skipped += 1
            else:
                _check_46(tallies["lemma46"], t, t2, union, paths_t, paths_t2, sym)
        else:
            tallies["lemma46"].skipped += 1
        # 4.8: midpoints y with A inside their l/4-ball
        checked_48 = False
        for e in sorted(inter.edges):
            if not _covered_by(patch, tree, [e], q, from_midpoint=True):
                continue
            checked_48 = True
            _check_46(tallies["lemma48"], t, t2, union, paths_t, paths_t2, {e: e})
        if not checked_48:
            tallies["lemma48"].skipped += 1
    else:
        tallies["lemma46"].skipped += 1
        tallies["lemma48"].skipped += 1

    # Lemma roundtrees
    if inter.edge_count >= q and inter.edges:
        tree = patch.subgraph(inter.edges)
        try:
            shape = analyze_tree(tree)
            kind, _ = classify_tree(shape, ell)
        except ValueError:
            kind = None
        if kind == "round":
            for comp, ends in paths_t + paths_t2:
                sub = t if wall_cells(comp) <= t.cells else t2
                if not balanced_in(sub, ends):
                    tallies["roundtrees"].skipped += 1
                    continue
                tallies["roundtrees"].checked += 1
                d = skeleton_distance(("m", ends[0]), ("m", ends[1]), union)
                if d is None or d < 2 * balance(union):
                    tallies["roundtrees"].violations.append(
                        ("inherited wall unbalanced over round tree", ends, d)
                    )
            merged = state.walls_of(t.cells) | state.walls_of(t2.cells)
            for comp, ends in _paths_with_endpoints(merged):
                if wall_cells(comp) <= t.cells or wall_cells(comp) <= t2.cells:
                    continue
                tallies["roundtrees"].checked += 1
                d = skeleton_distance(("m", ends[0]), ("m", ends[1]), union)
                if d is None or d < 2 * balance(union):
                    tallies["roundtrees"].violations.append(
                        ("concatenated wall unbalanced over round tree", ends, d)
                    )
        else:
            tallies["roundtrees"].skipped += 1
    else:
        tallies["roundtrees"].skipped += 1

    return tallies


def _covered_by(patch, tree: SubComplex, alpha_edges, q: int,
                from_midpoint: bool = False) -> bool:
    """Is the tree inside the q-neighborhood (edge units) of alpha?"""
    from .metrics import distances_from

    best: dict = {}
    sources = (
        [("m", alpha_edges[0])]
        if from_midpoint
        else [("m", e) for e in alpha_edges]
    )
    for src in sources:
        for p, h in distances_from(src, tree).items():
            if p not in best or h < best[p]:
                best[p] = h
    return all(
        best.get(("m", e), 10 ** 9) <= 2 * q for e in tree.edges
    )


def _check_46(tally: LemmaTally, t, t2, union, paths_t, paths_t2, sym):
    """Shared engine for Lemmas 4.6/4.8: pairs of wall paths whose endpoints
    are exchanged by the symmetry of alpha must have far outer endpoints."""
    found = False
    for comp, ends in paths_t:
        for comp2, ends2 in paths_t2:
            for y in ends:
                for x in ends2:
                    if sym.get(x) != y:
                        continue
                    found = True
                    outer = [e for e in ends if e != y] + [e for e in ends2 if e != x]
                    if len(outer) != 2:
                        continue
                    tally.checked += 1
                    d = skeleton_distance(("m", outer[0]), ("m", outer[1]), union)
                    if d is None or d < 2 * balance(union):
                        tally.violations.append(
                            ("outer endpoints too close", tuple(outer), d)
                        )
    if not found:
        tally.skipped += 1
