"""Named example patches with synthesized relator labels.

Each fixture is an abstract gluing pattern whose positions are affine
expressions p/q * ell + c, so one catalog entry instantiates at any
compatible side length. Relators are synthesized for the pattern: every
edge class of the quotient gets a generator letter such that all boundary
words are cyclically reduced, and each cell receives a private letter on
its free boundary so the relators are pairwise distinct (which makes the
labeling locally injective for free).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import lcm

from .complexes import CellSpec, Gluing, PatchComplex, _UnionFind
from .presentation import Presentation, subdivision_factor


class FixtureError(ValueError):
    pass


Affine = tuple[Fraction, int]


@dataclass(frozen=True)
class AbstractGluing:
    cell_a: int
    start_a: Affine
    cell_b: int
    start_b: Affine
    length: Affine
    reversed: bool = True

    def at(self, ell: int) -> Gluing:
        return Gluing(
            self.cell_a,
            _eval_affine(self.start_a, ell, "start_a"),
            self.cell_b,
            _eval_affine(self.start_b, ell, "start_b"),
            _eval_affine(self.length, ell, "length"),
            self.reversed,
        )


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    doc: str
    num_cells: int
    gluings: tuple[AbstractGluing, ...]

    def min_ell(self) -> int:
        """Smallest side length at which every position is integral."""
        dens = [4]
        for g in self.gluings:
            dens.extend(f.denominator for f in (g.start_a[0], g.start_b[0], g.length[0]))
        return lcm(*dens)

    def default_ell(self) -> int:
        step = self.min_ell()
        ell = step
        while ell < 20 or any(
            _eval_affine(g.length, ell, "length", check=False) < 1
            for g in self.gluings
        ):
            ell += step
        return ell


def _eval_affine(a: Affine, ell: int, what: str, check: bool = True) -> int:
    val = a[0] * ell + a[1]
    if val.denominator != 1:
        raise FixtureError(f"{what} = {a[0]}*{ell}{a[1]:+d} is not an integer")
    val = int(val)
    if check and val < 0:
        raise FixtureError(f"{what} is negative at ell={ell}")
    return val


def _parse_affine(raw) -> Affine:
    return (Fraction(raw[0]), int(raw[1]))


def load_catalog() -> dict[str, FixtureSpec]:
    text = resources.files("randwalls.data").joinpath("fixtures.json").read_text()
    catalog = {}
    for name, entry in json.loads(text).items():
        gluings = tuple(
            AbstractGluing(
                g["cell_a"],
                _parse_affine(g["start_a"]),
                g["cell_b"],
                _parse_affine(g["start_b"]),
                _parse_affine(g["length"]),
                g.get("reversed", True),
            )
            for g in entry["gluings"]
        )
        catalog[name] = FixtureSpec(name, entry["doc"], entry["cells"], gluings)
    return catalog


def fixture_names() -> list[str]:
    return sorted(load_catalog())


def synthesize_patch(
    num_cells: int,
    gluings: list[Gluing],
    ell: int,
    d: Fraction = Fraction(3, 14),
    require_fulfilled: bool = True,
) -> PatchComplex:
    """Build a patch realizing `gluings` over freshly invented relators.

    Edge classes of the quotient are computed first; a letter assignment is
    then chosen so every boundary word is cyclically reduced. A reduction
    could only appear where the traversal orientation flips between two
    consecutive boundary edges carrying the same letter, so it suffices to
    separate the letters of orientation-flipping neighbor classes. Free
    boundary arcs always read with orientation +1 and may share a letter;
    each cell uses a private one, making all relators distinct.
    """
    uf = _UnionFind(num_cells * ell)

    def slot(ci, i):
        return ci * ell + (i % ell)

    for g in gluings:
        for k in range(g.length):
            ia = (g.start_a + k) % ell
            if g.reversed:
                ib = (g.start_b + g.length - 1 - k) % ell
                uf.union(slot(g.cell_a, ia), slot(g.cell_b, ib), -1)
            else:
                ib = (g.start_b + k) % ell
                uf.union(slot(g.cell_a, ia), slot(g.cell_b, ib), 1)

    # edge classes with per-slot orientation relative to the representative
    classes: dict[int, list[tuple[int, int]]] = {}
    for s in range(num_cells * ell):
        root, sign = uf.find(s)
        classes.setdefault(root, []).append((s, sign))
    roots = sorted(classes, key=lambda r: min(s for s, _ in classes[r]))
    cls_of: dict[int, int] = {}
    orient_of: dict[int, int] = {}
    shared = []
    for k, root in enumerate(roots):
        slots = sorted(classes[root])
        rep_sign = slots[0][1]
        for s, sign in slots:
            cls_of[s] = k
            orient_of[s] = sign * rep_sign
        if len(slots) > 1:
            shared.append(k)

    # conflicts: consecutive boundary slots with opposite traversal signs
    # must carry different letters, or the word would reduce there
    conflicts: dict[int, set[int]] = {k: set() for k in range(len(roots))}
    for ci in range(num_cells):
        for i in range(ell):
            a, b = slot(ci, i), slot(ci, (i + 1) % ell)
            if orient_of[a] * orient_of[b] == -1:
                if cls_of[a] == cls_of[b]:
                    raise FixtureError(
                        f"fold at cell {ci} position {i}: no reduced labeling exists"
                    )
                conflicts[cls_of[a]].add(cls_of[b])
                conflicts[cls_of[b]].add(cls_of[a])

    letter: dict[int, int] = {}
    for k in shared:
        used = {letter[j] for j in conflicts[k] if j in letter}
        g = 1
        while g in used:
            g += 1
        letter[k] = g
    base = max(letter.values(), default=0)
    shared_set = set(shared)
    for ci in range(num_cells):
        for i in range(ell):
            k = cls_of[slot(ci, i)]
            if k not in shared_set and k not in letter:
                letter[k] = base + 1 + ci
    n = max(letter.values())
    if n > 26:
        raise FixtureError("letter synthesis needs more than 26 generators")

    words = tuple(
        tuple(orient_of[slot(ci, i)] * letter[cls_of[slot(ci, i)]] for i in range(ell))
        for ci in range(num_cells)
    )
    if len(set(words)) != num_cells:
        raise FixtureError("synthesized relators are not pairwise distinct")

    pres = Presentation(
        n=n, d=d, ell0=ell, subdivision=subdivision_factor(ell), relators=words
    )
    if pres.subdivision != 1:
        raise FixtureError("fixture side length must be a multiple of 4")
    cells = [CellSpec(relator=ci) for ci in range(num_cells)]
    return PatchComplex(pres, cells, list(gluings), require_fulfilled=require_fulfilled)


def build_fixture(
    name: str,
    ell: int | None = None,
    d: Fraction = Fraction(3, 14),
    require_fulfilled: bool = True,
) -> PatchComplex:
    catalog = load_catalog()
    if name not in catalog:
        raise FixtureError(f"unknown fixture {name!r}; have {sorted(catalog)}")
    spec = catalog[name]
    if ell is None:
        ell = spec.default_ell()
    if ell % spec.min_ell() != 0:
        raise FixtureError(
            f"fixture {name!r} needs ell divisible by {spec.min_ell()}, got {ell}"
        )
    gluings = [g.at(ell) for g in spec.gluings]
    return synthesize_patch(
        spec.num_cells, gluings, ell, d=d, require_fulfilled=require_fulfilled
    )
