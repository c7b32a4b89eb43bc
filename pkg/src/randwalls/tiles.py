"""Potile recognition and the three-step greedy tile-collection construction.

Tiles are closures of 2-cell sets inside one patch. The construction glues
core pairs (overlap >= ell/4) to exhaustion, then alternates small-overlap
potile unions with the large-intersection absorption step, invoking wall
bending at every core gluing. All tie-breaks are canonical so a run is a
pure function of (patch, config).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import walls as wallmod
from .canonical import orbit_isomorphic, pair_certificate
from .complexes import PatchComplex, SubComplex
from .metrics import cancellation, is_kk_bounded
from .walls import WallState, balance


class TileError(ValueError):
    pass


@dataclass(frozen=True)
class TileConfig:
    d: Fraction = Fraction(3, 14)
    eps: Fraction = Fraction(1, 50)
    max_tile_size: int = 5
    max_potile_size: int = 6
    k_bound: int = 6
    k_prime_bound: int = 15  # K(K-1)/2 at K = 6
    c: int = 1
    core_strict: bool = False
    bend: bool = True

    def __post_init__(self):
        n = self.max_potile_size
        if not self.d <= Fraction(n, 4 * (n + 1)):
            raise TileError(
                f"density {self.d} exceeds the size-{n} potile bound {n}/(4({n}+1))"
            )
        if not 0 < self.d < Fraction(1, 4):
            raise TileError("density must lie in (0, 1/4)")

    @property
    def lam(self) -> Fraction:
        return 1 / (1 - 4 * self.d)

    @property
    def n_ret(self) -> int:
        val = (2 * self.c + 1) * self.lam
        return int(val) if val.denominator == 1 else int(val) + 1


def is_potile(sub: SubComplex, ell: int | None = None) -> bool:
    """Can(T) >= (ell/4)(|T| - 1) for a nonempty connected cell closure."""
    if ell is None:
        ell = sub.patch.ell
    if not sub.has_2cells:
        raise TileError("potile check needs at least one 2-cell")
    if not sub.is_closed():
        raise TileError("potile check needs the closure of a set of 2-cells")
    if not sub.is_connected():
        raise TileError("potile check needs a connected complex")
    return cancellation(sub) >= (ell // 4) * (sub.size - 1)


@dataclass
class Tile:
    tid: int
    sub: SubComplex
    klass: str  # "One" | "Core" | "NonCore"
    step: str   # "start" | "1" | "2" | "3"
    parents: tuple
    birth: int  # step-log index; starting tiles use -1
    alive: bool = True

    @property
    def cells(self) -> frozenset[int]:
        return self.sub.cells

    @property
    def size(self) -> int:
        return self.sub.size

    def key(self) -> tuple:
        return tuple(sorted(self.cells))

    def birth_key(self) -> tuple:
        # Starting tiles are by convention the youngest; otherwise age
        # follows the construction step order (smaller key = older).
        if self.step == "start":
            return (1, 0)
        return (0, self.birth)


def age_compare(t: Tile, t2: Tile) -> str:
    """"Older" | "Younger" | "Incomparable" for t relative to t2."""
    k1, k2 = t.birth_key(), t2.birth_key()
    if k1 == k2:
        return "Incomparable"
    return "Older" if k1 < k2 else "Younger"


@dataclass
class TileCollection:
    patch: PatchComplex
    config: TileConfig
    tiles: list[Tile] = field(default_factory=list)
    registry: dict[frozenset[int], int] = field(default_factory=dict)
    step_log: list[dict] = field(default_factory=list)
    wall_state: WallState = field(default_factory=WallState)
    warnings: list[str] = field(default_factory=list)

    def alive_tiles(self) -> list[Tile]:
        return [t for t in self.tiles if t.alive]

    def by_cells(self, cells) -> Tile:
        return self.tiles[self.registry[frozenset(cells)]]

    def classes(self) -> dict[str, list[Tile]]:
        out: dict[str, list[Tile]] = {"One": [], "Core": [], "NonCore": []}
        for t in self.alive_tiles():
            out[t.klass].append(t)
        return out

    def _new_tile(self, sub, klass, step, parents, birth) -> Tile:
        tile = Tile(len(self.tiles), sub, klass, step, parents, birth)
        self.tiles.append(tile)
        self.registry[tile.cells] = tile.tid
        return tile


def _overlap_edges(t: Tile, t2: Tile) -> int:
    return len(t.sub.edges & t2.sub.edges)


def _core_threshold(cfg: TileConfig, ell: int, overlap: int) -> bool:
    q = ell // 4
    return overlap > q if cfg.core_strict else overlap >= q


def _pairs(tc: TileCollection):
    alive = sorted(tc.alive_tiles(), key=Tile.key)
    for i, t in enumerate(alive):
        for t2 in alive[i + 1:]:
            if not (t.cells & t2.cells):
                yield t, t2


def _union_ok(tc: TileCollection, t: Tile, t2: Tile, cap: int) -> bool:
    cells = t.cells | t2.cells
    return len(cells) <= cap and cells not in tc.registry


def _ordered_by_age(t: Tile, t2: Tile) -> tuple[Tile, Tile]:
    """(older, younger), breaking exact age ties by canonical cell key."""
    rel = age_compare(t, t2)
    if rel == "Older":
        return t, t2
    if rel == "Younger":
        return t2, t
    return (t, t2) if t.key() <= t2.key() else (t2, t)


def _log_gluing(tc, step, kind, t, t2, union_sub, tie_break):
    tc.step_log.append(
        {
            "step": step,
            "kind": kind,
            "tiles": [list(t.key()), list(t2.key())],
            "union": sorted(union_sub.cells),
            "union_size": union_sub.size,
            "intersection_size": _overlap_edges(t, t2),
            "can": cancellation(union_sub),
            "tie_break": tie_break,
        }
    )


def _glue_copies(tc: TileCollection, cands, best, step, klass, remove, score_fn):
    """Glue the chosen pair and every labeled-isomorphic copy simultaneously."""
    patch = tc.patch
    cfg = tc.config
    cert = pair_certificate(best[0].sub, best[1].sub)
    copies = [
        c for c in cands
        if score_fn(c) == score_fn(best)
        and pair_certificate(c[0].sub, c[1].sub) == cert
    ]
    copies.sort(key=lambda c: (c[0].key(), c[1].key()))
    rule = {1: "(union size, overlap)", 2: "overlap", 3: "(union size, Can)"}[step]
    tie_break = (
        f"max {rule}; {len(copies)} labeled copies; lexicographic cell key"
    )
    made = []
    for t, t2 in copies:
        if not (t.alive and t2.alive) or (t.cells | t2.cells) in tc.registry:
            continue
        union_sub = patch.closure(t.cells | t2.cells)
        if step in (1, 3) and orbit_isomorphic(t.sub, t2.sub):
            tc.warnings.append(
                f"step {step}: orbit-isomorphic tiles {t.key()} and {t2.key()} glued "
                "along a core overlap; patch violates the isoperimetric inequality"
            )
        older, younger = _ordered_by_age(t, t2)
        gl_step = len(tc.step_log)
        kind = str(step)
        if step == 1:
            kind, _, _ = wallmod.step1_kind(older.sub, younger.sub)
            wallmod.bend_and_glue(
                older.sub, younger.sub, tc.wall_state, "1", gl_step, bend=cfg.bend
            )
        else:
            wallmod.bend_and_glue(
                older.sub, younger.sub, tc.wall_state, str(step), gl_step, bend=cfg.bend
            )
        if not is_potile(union_sub):
            tc.warnings.append(f"step {step} produced a non-potile union {sorted(union_sub.cells)}")
        parents = (t, t2)
        tile = tc._new_tile(union_sub, klass, str(step), parents, gl_step)
        made.append(tile)
        if remove:
            t.alive = False
            t2.alive = False
        else:
            t.klass = "NonCore"
            t2.klass = "NonCore"
        _log_gluing(tc, step, kind, t, t2, union_sub, tie_break)
    return made


def _run_step1(tc: TileCollection) -> bool:
    cfg, ell = tc.config, tc.patch.ell
    cands = [
        (t, t2)
        for t, t2 in _pairs(tc)
        if _core_threshold(cfg, ell, _overlap_edges(t, t2))
        and _union_ok(tc, t, t2, cfg.max_tile_size)
    ]
    if not cands:
        return False

    def score(c):
        return (len(c[0].cells | c[1].cells), _overlap_edges(c[0], c[1]))

    best_score = max(score(c) for c in cands)
    best = min(
        [c for c in cands if score(c) == best_score],
        key=lambda c: (tuple(sorted(c[0].cells | c[1].cells)), c[0].key(), c[1].key()),
    )
    return bool(_glue_copies(tc, cands, best, 1, "Core", remove=True, score_fn=score))


def _run_step2(tc: TileCollection) -> list[Tile]:
    cfg = tc.config
    cands = []
    for t, t2 in _pairs(tc):
        if not _union_ok(tc, t, t2, cfg.max_tile_size):
            continue
        union_sub = tc.patch.closure(t.cells | t2.cells)
        if union_sub.is_connected() and is_potile(union_sub):
            cands.append((t, t2))
    if not cands:
        return []

    def score(c):
        return _overlap_edges(c[0], c[1])

    best_score = max(score(c) for c in cands)
    best = min(
        [c for c in cands if score(c) == best_score],
        key=lambda c: (tuple(sorted(c[0].cells | c[1].cells)), c[0].key(), c[1].key()),
    )
    return _glue_copies(tc, cands, best, 2, "NonCore", remove=False, score_fn=score)


def _run_step3(tc: TileCollection, step2_unions: list[frozenset[int]]) -> bool:
    cfg, ell = tc.config, tc.patch.ell
    cands = []
    for t, t2 in _pairs(tc):
        if not _core_threshold(cfg, ell, _overlap_edges(t, t2)):
            continue
        if not _union_ok(tc, t, t2, cfg.max_tile_size):
            continue
        holders = [
            x for x in (t, t2) if any(u <= x.cells for u in step2_unions)
        ]
        if not holders:
            continue
        r_prime = min(holders, key=Tile.key)
        r = t2 if r_prime is t else t
        cands.append((r, r_prime))
    if not cands:
        return False

    def score(c):
        union = c[0].cells | c[1].cells
        return (len(union), cancellation(tc.patch.closure(union)))

    best_score = max(score(c) for c in cands)
    best = min(
        [c for c in cands if score(c) == best_score],
        key=lambda c: (tuple(sorted(c[0].cells | c[1].cells)), c[0].key(), c[1].key()),
    )
    return bool(_glue_copies(tc, cands, best, 3, "NonCore", remove=True, score_fn=score))


def build_tile_collection(
    patch: PatchComplex,
    cfg: TileConfig | None = None,
    wall_state: WallState | None = None,
    force: bool = False,
    admissible: bool | None = None,
) -> TileCollection:
    """Run the full flowchart: Step 1 to exhaustion, then alternate Steps 2/3."""
    cfg = cfg or TileConfig()
    tc = TileCollection(patch, cfg, wall_state=wall_state or WallState())
    if not is_kk_bounded(patch, cfg.k_bound, cfg.k_prime_bound):
        raise TileError(
            f"patch exceeds ({cfg.k_bound}, {cfg.k_prime_bound})-boundedness caps"
        )
    if admissible is None:
        from .sampler import check_admissible

        admissible = check_admissible(patch, cfg.d, cfg.eps).ok
    if not admissible:
        if not force:
            raise TileError("patch is not admissible; rerun with force to proceed")
        tc.warnings.append("built on an inadmissible patch: lemma suites may fail")

    for ci in range(len(patch.cells)):
        sub = patch.closure([ci])
        tc._new_tile(sub, "One", "start", (), -1)
        tc.wall_state.init_cell(patch, ci)

    guard = 0
    while _run_step1(tc):
        guard += 1
        if guard > 10000:
            raise TileError("step 1 failed to terminate")
    while True:
        made = _run_step2(tc)
        if not made:
            break
        unions = [t.cells for t in made]
        while _run_step3(tc, unions):
            guard += 1
            if guard > 10000:
                raise TileError("step 3 failed to terminate")
        guard += 1
        if guard > 10000:
            raise TileError("step 2 failed to terminate")

    uncovered = set(patch.all_cells) - {
        c for t in tc.alive_tiles() for c in t.cells
    }
    if uncovered:
        raise TileError(f"cells {sorted(uncovered)} not covered by any tile")
    return tc


# -- structural verification ----------------------------------------------


def _is_union_of_registry_tiles(tc: TileCollection, cellset: frozenset[int]) -> bool:
    covered = set()
    for cells in tc.registry:
        if cells <= cellset:
            covered |= cells
    return covered == set(cellset)


def _first_two_tile(tile: Tile) -> Tile | None:
    """The earliest-born 2-tile in a tile's ancestry."""
    best = None
    stack = [tile]
    while stack:
        t = stack.pop()
        if t.size == 2 and (best is None or t.birth_key() < best.birth_key()):
            best = t
        stack.extend(t.parents)
    return best


@dataclass(frozen=True)
class CollectionReport:
    violations: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_collection(tc: TileCollection) -> CollectionReport:
    """Structural invariants of a finished collection.

    Checks the three intersection properties, the younger-core-tile 2-cell
    overlap bound, the age/cancellation order of small core ancestries, and
    the balance window for every tile.
    """
    patch, ell = tc.patch, tc.patch.ell
    q = ell // 4
    out = []
    alive = sorted(tc.alive_tiles(), key=Tile.key)
    non_noncore = [t for t in alive if t.klass != "NonCore"]

    for i, t in enumerate(non_noncore):
        for t2 in non_noncore[i + 1:]:
            if t.cells & t2.cells:
                out.append(("item1_shared_cells", t.key(), t2.key()))
    for t in non_noncore:
        for t2 in alive:
            if t2 is not t and t2.cells < t.cells:
                out.append(("item1_proper_subtile", t.key(), t2.key()))

    step1_cells = [x.cells for x in tc.tiles if x.step == "1"]
    for t in alive:
        if t.klass == "NonCore" and t.size >= 2:
            if not any(c <= t.cells for c in step1_cells):
                out.append(("item2_no_core_subtile", t.key()))

    for i, t in enumerate(alive):
        for t2 in alive[i + 1:]:
            shared = t.cells & t2.cells
            if not shared:
                continue
            for part in (shared, t.cells - t2.cells, t2.cells - t.cells):
                if part and not _is_union_of_registry_tiles(tc, frozenset(part)):
                    out.append(("item3_not_tile_union", t.key(), t2.key(), sorted(part)))

    cores = [t for t in alive if t.klass == "Core"]
    for t in cores:
        for t2 in cores:
            if t is t2 or age_compare(t2, t) != "Younger":
                continue
            for ci in sorted(t2.cells):
                ov = len(t.sub.edges & patch.closure([ci]).edges)
                if ov >= q:
                    out.append(("smallintersections", t.key(), t2.key(), ci, ov))

    for t in cores:
        for t2 in cores:
            if t.size > 3 or t2.size > 3 or age_compare(t2, t) != "Younger":
                continue
            d1, d2 = _first_two_tile(t), _first_two_tile(t2)
            if d1 and d2 and cancellation(d1.sub) < cancellation(d2.sub):
                out.append(("subtileage", t.key(), t2.key(),
                            cancellation(d1.sub), cancellation(d2.sub)))

    for t in alive:
        bal = balance(t.sub)
        if not q <= bal <= ell // 2:
            out.append(("balancebounds", t.key(), bal))

    return CollectionReport(tuple(out))
