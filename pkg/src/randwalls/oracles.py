"""Brute-force referees for the metric lemmas.

Everything here is deliberately naive: exhaustive simple-path search for
distances, exhaustive triple scans for the tree inequality, exhaustive
subset enumeration for the lemma sweep. The main implementations are
tested against these, never the other way around.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import PatchComplex, SubComplex
from .metrics import cancellation, skeleton_distance


class OracleError(ValueError):
    pass


@dataclass
class OracleResult:
    lemma: str
    checked: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "checked": self.checked,
            "skipped": self.skipped,
            "violated": len(self.violations),
            "violations": [repr(v) for v in self.violations[:20]],
            "seconds": round(self.seconds, 3),
        }


def summarize(results: list[OracleResult]) -> str:
    rows = [("lemma", "checked", "skipped", "violated")]
    rows += [
        (r.lemma, str(r.checked), str(r.skipped), str(len(r.violations)))
        for r in results
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = []
    for j, row in enumerate(rows):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def report_json(results: list[OracleResult]) -> str:
    return json.dumps([r.as_dict() for r in results], indent=2, sort_keys=True)


# -- exhaustive distance --------------------------------------------------


def oracle_distance(sub: SubComplex, x, x2, cap: int = 200) -> int | None:
    """Shortest simple path between two points, in half-edge units, by
    exhaustive branch-and-bound enumeration. Points are ("v", vertex_id)
    or ("m", edge_id), as for skeleton_distance."""
    if len(sub.edges) > cap:
        raise OracleError(f"oracle_distance capped at {cap} edges")
    patch = sub.patch
    adj: dict[tuple, list[tuple]] = {}
    for e in sorted(sub.edges):
        t, h = patch.edge_endpoints[e]
        for a, b in ((("v", t), ("m", e)), (("m", e), ("v", h))):
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    for v in sub.vertices:
        adj.setdefault(("v", v), [])
    if x not in adj or x2 not in adj:
        return None
    if x == x2:
        return 0
    best = None
    stack = [(x, frozenset([x]), 0)]
    while stack:
        p, used, length = stack.pop()
        for nxt in adj[p]:
            if nxt in used:
                continue
            nl = length + 1
            if best is not None and nl >= best:
                continue
            if nxt == x2:
                best = nl
                continue
            stack.append((nxt, used | {nxt}, nl))
    return best


# -- Sublemma 4.7 ---------------------------------------------------------


def random_tree(rng: random.Random, n_edges: int) -> list[tuple[int, int]]:
    """Sequential attachment: vertex i+1 joins a uniform earlier vertex."""
    return [(rng.randrange(i + 1), i + 1) for i in range(n_edges)]


def tree_path(edges: list[tuple[int, int]], u: int, v: int) -> list[int]:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    prev = {u: None}
    frontier = [u]
    while frontier and v not in prev:
        nxt = []
        for w in frontier:
            for z in adj[w]:
                if z not in prev:
                    prev[z] = w
                    nxt.append(z)
        frontier = nxt
    path = [v]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _subdivided(edges):
    """Half-unit graph: tree vertices plus one midpoint node per edge."""
    adj: dict[tuple, list[tuple]] = {}
    for i, (a, b) in enumerate(edges):
        for p, p2 in (((("v", a)), ("m", i)), (("m", i), ("v", b))):
            adj.setdefault(p, []).append(p2)
            adj.setdefault(p2, []).append(p)
    return adj

def _all_dists(adj, src):
    d = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for p in frontier:
            for p2 in adj[p]:
                if p2 not in d:
                    d[p2] = d[p] + 1
                    nxt.append(p2)
        frontier = nxt
    return d


def oracle_sublemma(edges: list[tuple[int, int]], alpha: list[int], q: int):
    """Exhaustive check of |y,z| + |s(y),z'| <= |A| + max{|alpha|, q} over
    all point triples, in half-edge units on the subdivided tree.

    `alpha` is a vertex path in the tree; s is its reversal symmetry.
    Returns (max_lhs, bound, witnesses), or None when A is not inside the
    q-neighborhood of alpha (hypothesis failure; callers count a skip).
    """
    if not edges:
        return (0, 2 * max(0, q), [])
    adj = _subdivided(edges)
    edge_index = {frozenset(e): i for i, e in enumerate(edges)}
    # alpha as a half-unit point sequence: v a0, m, v a1, m, ...
    seq: list[tuple] = []
    for j, a in enumerate(alpha):
        seq.append(("v", a))
        if j + 1 < len(alpha):
            seq.append(("m", edge_index[frozenset((a, alpha[j + 1]))]))
    dists = {p: _all_dists(adj, p) for p in adj}
    # coverage: every point within q edge units of alpha
    alpha_set = set(seq)
    for p in adj:
        if min(dists[p][a] for a in alpha_set) > 2 * q:
            return None
    n_a = len(edges)
    alpha_len = len(alpha) - 1
    bound = 2 * (n_a + max(alpha_len, q))
    best = 0
    witnesses = []
    points = sorted(adj)
    for i, y in enumerate(seq):
        sy = seq[len(seq) - 1 - i]
        dy, dsy = dists[y], dists[sy]
        for z in points:
            for z2 in points:
                lhs = dy[z] + dsy[z2]
                if lhs > best:
                    best = lhs
                if lhs > bound:
                    witnesses.append((y, z, z2, lhs))
    return (best, bound, witnesses)


def sublemma_sweep(n_trees: int, seed: int, max_edges: int = 40) -> OracleResult:
    """Criterion harness: random trees with a valid (alpha, q)."""
    t0 = time.perf_counter()
    res = OracleResult("sublemma47")
    rng = random.Random(f"{seed}:sublemma47")
    for _ in range(n_trees):
        n = rng.randint(1, max_edges)
        edges = random_tree(rng, n)
        u, v = rng.randrange(n + 1), rng.randrange(n + 1)
        alpha = tree_path(edges, u, v)
        # eccentricity of alpha makes the coverage hypothesis hold
        adj = _subdivided(edges)
        aset = {("v", a) for a in alpha}
        ecc = 0
        for p in adj:
            d = _all_dists(adj, p)
            ecc = max(ecc, min(d[a] for a in aset))
        q = (ecc + 1) // 2 + rng.randint(0, 3)
        out = oracle_sublemma(edges, alpha, q)
        if out is None:
            res.skipped += 1
            continue
        res.checked += 1
        _, _, witnesses = out
        if witnesses:
            res.violations.append((edges, alpha, q, witnesses[:3]))
    res.seconds = time.perf_counter() - t0
    return res


# -- lemma sweep over a patch corpus --------------------------------------


def _connected_subsets(patch: PatchComplex):
    m = len(patch.cells)
    out = []
    for mask in range(1, 1 << m):
        cells = frozenset(i for i in range(m) if mask >> i & 1)
        sub = patch.closure(cells)
        if sub.is_connected():
            out.append((cells, sub))
    return out


def _is_potile(sub: SubComplex) -> bool:
    ell = sub.patch.ell
    return cancellation(sub) >= (ell // 4) * (sub.size - 1)


def _bal(sub: SubComplex) -> int:
    ell = sub.patch.ell
    return (ell // 4) * (sub.size + 1) - cancellation(sub)


def _graph_is_tree(patch, edges) -> tuple[bool, bool]:
    """(connected, acyclic) of an edge set in the 1-skeleton."""
    if not edges:
        return (True, True)
    verts = set()
    adj: dict[int, list[int]] = {}
    for e in edges:
        t, h = patch.edge_endpoints[e]
        verts.update((t, h))
        adj.setdefault(t, []).append(h)
        adj.setdefault(h, []).append(t)
    src = min(verts)
    seen = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    connected = seen == verts
    acyclic = len(edges) <= len(verts) - 1
    return (connected, acyclic)


def oracle_lemma_sweep(corpus, d=Fraction(3, 14), eps=Fraction(1, 50),
                       cfg=None) -> list[OracleResult]:
    """Exhaustive per-patch verification of the statement-level lemmas.

    corpus: iterable of PatchComplex. Patches failing admissibility are
    still swept; a conclusion failure on them is recorded as a skip with
    its admissibility cross-reference, not a violation.
    """
    from .sampler import check_admissible
    from .tiles import TileConfig, build_tile_collection, _first_two_tile
    from .walls import verify_balanced

    if cfg is None:
        cfg = TileConfig(d=Fraction(d), eps=Fraction(eps))
    names = ("balancebounds", "trees", "lemma44", "subtileage",
             "balanceandD'", "smallintersections")
    results = {n: OracleResult(n) for n in names}
    t0 = time.perf_counter()
    for patch in corpus:
        admissible = check_admissible(patch, d, eps).ok
        ell = patch.ell
        subsets = _connected_subsets(patch)

        for cells, sub in subsets:
            results["balancebounds"].checked += 1
            bal = _bal(sub)
            ok = (ell // 4 <= bal <= ell // 2) if _is_potile(sub) \
                else (bal > ell // 2)
            if not ok:
                if admissible:
                    results["balancebounds"].violations.append(
                        (sorted(cells), bal))
                else:
                    results["balancebounds"].skipped += 1

        for i, (cells, sub) in enumerate(subsets):
            for cells2, sub2 in subsets[i + 1:]:
                if cells & cells2:
                    continue
                if not (_is_potile(sub) and _is_potile(sub2)):
                    results["trees"].skipped += 1
                    continue
                inter = sub.intersect(sub2)
                results["trees"].checked += 1
                connected, acyclic = _graph_is_tree(patch, inter.edges)
                ok = connected and acyclic and len(inter.edges) <= ell // 2
                if not ok:
                    if admissible:
                        results["trees"].violations.append(
                            (sorted(cells), sorted(cells2)))
                    else:
                        results["trees"].skipped += 1

        # construction-level lemmas need the built collection and walls
        tc = build_tile_collection(patch, cfg, admissible=True)
        for tile in tc.alive_tiles():
            rep = verify_balanced(tile, tc.wall_state)
            for entry in rep.entries:
                if not entry.ok:
                    continue
                x, x2 = entry.endpoints
                for cells2, sub2 in subsets:
                    if cells2 & tile.cells or not _is_potile(sub2):
                        results["lemma44"].skipped += 1
                        continue
                    results["lemma44"].checked += 1
                    if x in sub2.edges and x2 in sub2.edges:
                        if admissible:
                            results["lemma44"].violations.append(
                                (tile.tid, (x, x2), sorted(cells2)))
                        else:
                            results["lemma44"].skipped += 1

        from .tiles import age_compare

        # Remark subtileage over Core pairs of size <= 3 (the T_c class)
        core_small = [t for t in tc.alive_tiles()
                      if t.klass == "Core" and t.size <= 3]
        for t in core_small:
            for t2 in core_small:
                if t is t2 or age_compare(t, t2) != "Older":
                    continue
                dd, dd2 = _first_two_tile(t), _first_two_tile(t2)
                if dd is None or dd2 is None:
                    results["subtileage"].skipped += 1
                    continue
                results["subtileage"].checked += 1
                if cancellation(dd.sub) < cancellation(dd2.sub):
                    if admissible:
                        results["subtileage"].violations.append(
                            (t.tid, t2.tid, cancellation(dd.sub),
                             cancellation(dd2.sub)))
                    else:
                        results["subtileage"].skipped += 1

        # Lemma balanceandD': Core unions of cell-disjoint Core parents
        # with |T| <= |T'| = 3 (single cells are T_1, not T_c, and the
        # 2-tile-plus-cell decomposition needs |T| >= 2)
        for tile in tc.tiles:
            if tile.klass != "Core" or not tile.parents:
                continue
            pa, pb = tile.parents
            if pa.cells & pb.cells:
                continue
            if any(p.klass != "Core" for p in (pa, pb)):
                results["balanceandD'"].skipped += 1
                continue
            t, t2 = sorted((pa, pb), key=lambda p: p.size)
            dd2 = _first_two_tile(t2)
            if t2.size != 3 or dd2 is None:
                results["balanceandD'"].skipped += 1
                continue
            results["balanceandD'"].checked += 1
            inter = t.sub.intersect(t2.sub)
            lhs = _bal(tile.sub)
            rhs = Fraction(5 * ell, 4) - 2 * cancellation(dd2.sub) \
                - len(inter.edges)
            if lhs > rhs:
                if admissible:
                    results["balanceandD'"].violations.append(
                        (tile.tid, lhs, rhs))
                else:
                    results["balanceandD'"].skipped += 1

        core = [t for t in tc.alive_tiles() if t.klass == "Core"]
        for i, t in enumerate(core):
            for t2 in core[i + 1:]:
                if t.cells & t2.cells:
                    continue
                results["smallintersections"].checked += 1
                inter = t.sub.intersect(t2.sub)
                if len(inter.edges) > ell // 2:
                    if admissible:
                        results["smallintersections"].violations.append(
                            (t.tid, t2.tid, len(inter.edges)))
                    else:
                        results["smallintersections"].skipped += 1

    dt = time.perf_counter() - t0
    out = [results[n] for n in names]
    for r in out:
        r.seconds = dt / len(out)
    return out
