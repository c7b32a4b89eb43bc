"""Random presentations, patch enumeration and growth, admissibility.

All randomness flows from one seed through named streams, so adding a new
consumer never perturbs another's draws. Patch growth glues relator
polygons along label-compatible boundary subpaths with overlap lengths
biased toward [ell/4, ell/2], since uniform overlaps almost never form
potiles at desk scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import words as W
from .canonical import certificate
from .complexes import CellSpec, ComplexError, Gluing, PatchComplex
from .metrics import GeodesicReport, check_embedded_geodesics, ipi_check
from .presentation import Presentation, relator_count, subdivision_factor


def stream_rng(seed: int, name: str) -> random.Random:
    """Deterministic per-module randomness stream."""
    return random.Random(f"{seed}:{name}")


@dataclass(frozen=True)
class SampleResult:
    presentation: Presentation
    warnings: tuple[str, ...]


def sample_presentation(n: int, d, ell0: int, seed: int) -> SampleResult:
    """Uniform i.i.d. cyclically reduced relators, by rejection sampling."""
    if n < 2:
        raise ValueError("need n >= 2 generators")
    d = Fraction(d)
    if not 0 < d < 1:
        raise ValueError("density must lie in (0, 1)")
    count = relator_count(n, d, ell0)
    warnings = []
    if count == 0:
        warnings.append(
            f"relator count floor((2n-1)^(d*ell0)) = 0 at n={n}, d={d}, ell0={ell0}"
        )
    rng = stream_rng(seed, "sample_presentation")
    letters = list(range(1, n + 1)) + [-g for g in range(1, n + 1)]
    relators = []
    while len(relators) < count:
        # uniform over cyclically reduced words: each step excludes only the
        # inverse of the previous letter, then reject if the word closes badly
        w = [rng.choice(letters)]
        for _ in range(ell0 - 1):
            w.append(rng.choice([g for g in letters if g != -w[-1]]))
        if w[-1] != -w[0]:
            relators.append(tuple(w))
    if len(set(relators)) < len(relators):
        warnings.append(
            f"{len(relators) - len(set(relators))} duplicate relators sampled"
        )
    pres = Presentation(
        n=n, d=d, ell0=ell0,
        subdivision=subdivision_factor(ell0), relators=tuple(relators),
    )
    return SampleResult(pres, tuple(warnings))


# -- gluing search --------------------------------------------------------


def _required_tokens(patch: PatchComplex, ci: int, start: int, length: int):
    """Token sequence a new cell must read along [start2, start2+length)
    so that a reversed gluing against cell ci at `start` is label-valid."""
    ell = patch.ell
    arc = [patch.boundary[ci][(start + k) % ell] for k in range(length)]
    return [(t, -d) for t, d in reversed(arc)]


def _boundary_tokens(pres: Presentation, relator: int, inverted: bool):
    from .complexes import fine_tokens

    word = pres.relators[relator]
    if inverted:
        word = tuple(-g for g in reversed(word))
    return fine_tokens(word, pres.subdivision)


def _match_positions(tokens, needed):
    ell = len(tokens)
    out = []
    for s2 in range(ell):
        if all(tokens[(s2 + k) % ell] == needed[k] for k in range(len(needed))):
            out.append(s2)
    return out


def _attach_candidates(patch, ci, start, length, relator_ids):
    pres = patch.presentation
    needed = _required_tokens(patch, ci, start, length)
    found = []
    for r in relator_ids:
        for inv in (False, True):
            toks = _boundary_tokens(pres, r, inv)
            for s2 in _match_positions(toks, needed):
                found.append((r, inv, s2))
    return found


def enumerate_patches(
    pres: Presentation,
    max_cells: int = 2,
    max_gluings: int | None = None,
    budget: int = 10000,
):
    """Stream patches up to labeled isomorphism, breadth-first by cell count.

    Each emitted patch is fulfilled; admissibility is the caller's filter.
    Exhaustive for one-gluing attachments within the budget.
    """
    ell = pres.ell
    seen = set()
    emitted = 0
    frontier = []
    for r in range(len(pres.relators)):
        patch = PatchComplex(pres, [CellSpec(r)], [])
        cert = certificate(patch.whole)
        if cert in seen:
            continue
        seen.add(cert)
        yield patch
        emitted += 1
        frontier.append(patch)
        if emitted >= budget:
            return
    while frontier:
        nxt = []
        for patch in frontier:
            if len(patch.cells) >= max_cells:
                continue
            if max_gluings is not None and len(patch.gluings) >= max_gluings:
                continue
            for cand in _one_cell_extensions(patch):
                cert = certificate(cand.whole)
                if cert in seen:
                    continue
                seen.add(cert)
                yield cand
                emitted += 1
                if emitted >= budget:
                    return
                nxt.append(cand)
        frontier = nxt


def _one_cell_extensions(patch: PatchComplex):
    pres = patch.presentation
    ell = patch.ell
    new_ci = len(patch.cells)
    rel_ids = range(len(pres.relators))
    for ci in range(len(patch.cells)):
        for length in range(1, ell // 2 + 1):
            for start in range(ell):
                for r, inv, s2 in _attach_candidates(patch, ci, start, length, rel_ids):
                    cells = list(patch.cells) + [CellSpec(r, 0, inv)]
                    gluings = list(patch.gluings) + [
                        Gluing(ci, start, new_ci, s2, length, True)
                    ]
                    try:
                        yield PatchComplex(pres, cells, gluings)
                    except ComplexError:
                        continue


def random_patch(
    pres: Presentation,
    rng: random.Random,
    num_cells: int = 2,
    max_attempts: int = 300,
    overlap_bias: float = 0.85,
    scan_cap: int = 600,
) -> PatchComplex | None:
    """Grow a fulfilled patch by biased random label-compatible gluings."""
    ell = pres.ell
    q = ell // 4
    nrel = len(pres.relators)
    if nrel == 0:
        return None
    cells = [CellSpec(rng.randrange(nrel))]
    gluings: list[Gluing] = []
    patch = PatchComplex(pres, cells, gluings)
    while len(cells) < num_cells:
        done = False
        for _ in range(max_attempts):
            ci = rng.randrange(len(cells))
            if rng.random() < overlap_bias:
                length = rng.randint(q, ell // 2)
            else:
                length = rng.randint(1, max(1, q - 1))
            start = rng.randrange(ell)
            if nrel > scan_cap:
                rel_ids = rng.sample(range(nrel), scan_cap)
            else:
                rel_ids = range(nrel)
            found = _attach_candidates(patch, ci, start, length, rel_ids)
            if not found:
                continue
            r, inv, s2 = found[rng.randrange(len(found))]
            trial_cells = cells + [CellSpec(r, 0, inv)]
            trial_gluings = gluings + [
                Gluing(ci, start, len(cells), s2, length, True)
            ]
            try:
                patch = PatchComplex(pres, trial_cells, trial_gluings)
            except ComplexError:
                continue
            cells, gluings = trial_cells, trial_gluings
            done = True
            break
        if not done:
            return None
    return patch


# -- admissibility --------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    ipi_violations: tuple[tuple, ...]
    geodesics: GeodesicReport

    @property
    def ok(self) -> bool:
        return not self.ipi_violations and self.geodesics.ok


def check_admissible(patch: PatchComplex, d, eps) -> AdmissibilityReport:
    """The finite surrogate for "with overwhelming probability": the
    isoperimetric inequality over every connected cell-subset closure,
    plus girth >= ell and geodesy of short embedded paths."""
    d, eps = Fraction(d), Fraction(eps)
    m = len(patch.cells)
    violations = []
    for mask in range(1, 1 << m):
        cells = [i for i in range(m) if mask >> i & 1]
        sub = patch.closure(cells)
        if not sub.is_connected():
            continue
        res = ipi_check(sub, d, eps)
        if not res.ok:
            violations.append(
                (tuple(cells), res.can, f"{res.bound.numerator}/{res.bound.denominator}")
            )
    geo = check_embedded_geodesics(patch)
    return AdmissibilityReport(tuple(violations), geo)
