"""Command-line surface: sample, patches, build, verify, export, fixtures.

Every run is a pure function of (config, seed): artifacts are written
with sorted keys and stable ordering so identical invocations produce
byte-identical files. Exit codes: 0 success, 1 verification violation,
2 usage or config error, 3 inadmissible input without --force.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .complexes import ComplexError, PatchComplex
from .fixtures import FixtureError, build_fixture, load_catalog
from .presentation import Presentation
from .sampler import (
    check_admissible,
    enumerate_patches,
    random_patch,
    sample_presentation,
    stream_rng,
)
from .tiles import TileConfig, TileError, build_tile_collection, check_collection
from .tracer import detect_returning, export_wallspace, to_dot, trace_walls
from .walls import WallError, verify_balanced, wall_components

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INADMISSIBLE = 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _load_config(path: str) -> dict:
    """TOML-like key = value lines; '#' starts a comment."""
    out = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        val = val.strip("\"'")
        if val.lower() in ("true", "false"):
            parsed = val.lower() == "true"
        else:
            try:
                parsed = int(val)
            except ValueError:
                parsed = val
        out[key.replace("-", "_")] = parsed
    return out


def _default_seed() -> int:
    return int(os.environ.get("RANDWALLS_SEED", "0"))


def _json_dump(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _jsonl_dump(records, path: Path):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _tile_cfg(args) -> TileConfig:
    return TileConfig(
        d=args.d,
        eps=args.eps,
        max_tile_size=args.max_tile_size,
        max_potile_size=args.max_potile_size,
        c=args.c,
        core_strict=args.core_strict,
        bend=not args.no_bend,
    )


def _add_tile_flags(p: argparse.ArgumentParser):
    p.add_argument("-d", type=_fraction, default=Fraction(3, 14),
                   help="density (rational, default 3/14)")
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 50),
                   help="IPI slack (default 1/50)")
    p.add_argument("--max-tile-size", type=int, default=5)
    p.add_argument("--max-potile-size", type=int, default=6)
    p.add_argument("-c", type=int, default=1,
                   help="returning-length constant (N_ret = (2c+1) lambda)")
    p.add_argument("--core-strict", action="store_true",
                   help="require overlap strictly above ell/4 in Step 1")
    p.add_argument("--no-bend", action="store_true",
                   help="skip wall bending (diagnostic mode)")


def _add_input_flags(p: argparse.ArgumentParser):
    p.add_argument("--fixture", help="fixture name (see `fixtures list`)")
    p.add_argument("--ell", type=int, help="side length for the fixture")
    p.add_argument("--presentation", help="presentation JSON file")
    p.add_argument("--patch", help="patch JSON file")


def _load_patch(args) -> tuple[PatchComplex, Presentation | None]:
    if args.fixture:
        patch = build_fixture(args.fixture, ell=args.ell, d=args.d)
        return patch, patch.presentation
    if not (args.presentation and args.patch):
        raise FixtureError(
            "need either --fixture or both --presentation and --patch"
        )
    pres = Presentation.load(args.presentation)
    data = json.loads(Path(args.patch).read_text())
    return PatchComplex.from_json(data, pres), pres


# -- subcommands ----------------------------------------------------------


def cmd_sample(args) -> int:
    res = sample_presentation(args.n, args.d, args.ell0, args.seed)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    out = Path(args.output)
    res.presentation.save(out)
    print(f"wrote {out} ({len(res.presentation.relators)} relators, "
          f"ell = {res.presentation.ell})")
    return EXIT_OK


def cmd_patches(args) -> int:
    pres = Presentation.load(args.presentation)
    patches = []
    if args.random:
        rng = stream_rng(args.seed, "patches")
        while len(patches) < args.random:
            p = random_patch(pres, rng, num_cells=args.cells)
            if p is None:
                print("warning: patch growth stalled", file=sys.stderr)
                break
            patches.append(p)
    else:
        patches = list(enumerate_patches(
            pres, max_cells=args.cells, budget=args.budget))
    doc = {
        "presentation": pres.to_json(),
        "patches": [p.to_json() for p in patches],
    }
    _json_dump(doc, Path(args.output))
    print(f"wrote {args.output} ({len(patches)} patches)")
    return EXIT_OK


def _ordered_midpoints(comp) -> list[int]:
    """Walk a wall component's midpoints along its path; sorted fallback."""
    adj: dict[int, list[int]] = {}
    for we in sorted(comp):
        adj.setdefault(we.a, []).append(we.b)
        adj.setdefault(we.b, []).append(we.a)
    if any(len(v) > 2 for v in adj.values()):
        return sorted(adj)
    ends = sorted(m for m, v in adj.items() if len(v) == 1)
    cur = ends[0] if ends else min(adj)
    seq = [cur]
    prev = None
    while len(seq) <= len(adj):
        nxt = [m for m in adj[cur] if m != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur in seq:
            break
        seq.append(cur)
    return seq


def _wall_paths_json(patch, tc) -> list[dict]:
    out = []
    for tile in sorted(tc.alive_tiles(), key=lambda t: t.tid):
        walls = [
            _ordered_midpoints(comp)
            for comp in wall_components(tc.wall_state.walls_of(tile.cells))
        ]
        out.append({
            "tile": tile.tid,
            "cells": sorted(tile.cells),
            "walls": walls,
        })
    return out


def cmd_build(args) -> int:
    try:
        patch, pres = _load_patch(args)
    except (FixtureError, ComplexError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    adm = check_admissible(patch, args.d, args.eps)
    if not adm.ok and not args.force:
        print("inadmissible patch (rerun with --force to proceed):",
              file=sys.stderr)
        for cells, can, bound in adm.ipi_violations:
            print(f"  IPI: cells {list(cells)} Can {can} > {bound}",
                  file=sys.stderr)
        for length, e in adm.geodesics.short_cycles[:5]:
            print(f"  short cycle of length {length} through edge {e}",
                  file=sys.stderr)
        for u, v, nl, dd in adm.geodesics.nongeodesic_paths[:5]:
            print(f"  non-geodesic embedded path {u}..{v} len {nl} > dist {dd}",
                  file=sys.stderr)
        return EXIT_INADMISSIBLE
    cfg = _tile_cfg(args)
    tc = build_tile_collection(patch, cfg, force=args.force,
                               admissible=adm.ok)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if pres is not None:
        pres.save(outdir / "presentation.json")
    _json_dump(patch.to_json(), outdir / "patch.json")
    _json_dump(
        {
            "tiles": [
                {
                    "id": t.tid,
                    "cells": sorted(t.cells),
                    "class": t.klass,
                    "step": t.step,
                    "parents": [p.tid for p in t.parents],
                    "birth": t.birth,
                    "alive": t.alive,
                }
                for t in tc.tiles
            ]
        },
        outdir / "tiles.json",
    )
    _jsonl_dump(tc.step_log, outdir / "steps.jsonl")
    _jsonl_dump(tc.wall_state.bend_log, outdir / "bends.jsonl")
    _json_dump(_wall_paths_json(patch, tc), outdir / "walls.json")

    balance_failures = 0
    for tile in tc.alive_tiles():
        balance_failures += len(verify_balanced(tile, tc.wall_state).failures)
    traces = trace_walls(patch, tc)
    (outdir / "walls.dot").write_text(to_dot(patch, traces))
    try:
        ws = export_wallspace(patch, traces, args.d, c=args.c)
        _json_dump(ws, outdir / "wallspace.json")
    except WallError as exc:
        print(f"warning: wallspace export skipped: {exc}", file=sys.stderr)

    crep = check_collection(tc)
    returning = detect_returning(patch, tc, traces, _tile_cfg(args).n_ret,
                                 d=args.d, eps=args.eps)

    counts = {k: len(v) for k, v in tc.classes().items()}
    print(
        f"tiles: One={counts.get('One', 0)} Core={counts.get('Core', 0)} "
        f"NonCore={counts.get('NonCore', 0)}; walls={len(traces)}; "
        f"admissible={'yes' if adm.ok else 'NO (forced)'}; "
        f"balance_failures={balance_failures}"
    )
    for w in tc.warnings + tc.wall_state.warnings:
        print(f"warning: {w}", file=sys.stderr)
    violations = balance_failures + len(returning.hits)
    for v in crep.violations:
        print(f"collection violation: {v}", file=sys.stderr)
        violations += 1
    for hit in returning.hits:
        print(f"returning segment: wall {hit.wall_id} endpoints "
              f"{hit.endpoints} in tile {list(hit.t0_cells)}", file=sys.stderr)
    if adm.ok:
        return EXIT_OK if violations == 0 else EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    from .oracles import oracle_lemma_sweep, report_json, sublemma_sweep, summarize

    lemmas = args.lemmas.split(",") if args.lemmas else None
    results = []
    if lemmas is None or "sublemma47" in lemmas:
        results.append(sublemma_sweep(args.trees, args.seed))
    sweep_wanted = lemmas is None or any(l != "sublemma47" for l in lemmas)
    if sweep_wanted:
        if args.fixture and args.fixture != "all":
            corpus = [build_fixture(args.fixture, ell=args.ell, d=args.d)]
        elif args.presentation and args.patch:
            patch, _ = _load_patch(args)
            corpus = [patch]
        else:
            corpus = [
                build_fixture(name, d=args.d)
                for name in sorted(load_catalog())
                if name != "ring3"
            ]
        sweep = oracle_lemma_sweep(corpus, d=args.d, eps=args.eps,
                                   cfg=_tile_cfg(args))
        if lemmas is not None:
            sweep = [r for r in sweep if r.lemma in lemmas]
        results.extend(sweep)

    tampered = []
    if args.artifacts:
        tampered = _check_artifacts(args)
    print(summarize(results))
    if args.output:
        Path(args.output).write_text(report_json(results) + "\n")
    violated = [r for r in results if r.violations]
    for r in violated:
        print(f"violation in {r.lemma}: {r.violations[0]!r}", file=sys.stderr)
    for msg in tampered:
        print(f"artifact mismatch: {msg}", file=sys.stderr)
    return EXIT_VIOLATION if (violated or tampered) else EXIT_OK


def _check_artifacts(args) -> list[str]:
    """Recompute step and bend logs and compare byte-for-byte."""
    outdir = Path(args.artifacts)
    pres = Presentation.load(outdir / "presentation.json")
    data = json.loads((outdir / "patch.json").read_text())
    patch = PatchComplex.from_json(data, pres)
    adm = check_admissible(patch, args.d, args.eps)
    tc = build_tile_collection(patch, _tile_cfg(args), force=True,
                               admissible=adm.ok)
    problems = []
    for name, records in (("steps.jsonl", tc.step_log),
                          ("bends.jsonl", tc.wall_state.bend_log)):
        expected = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
        actual = (outdir / name).read_text()
        if expected != actual:
            problems.append(f"{name} does not match a clean rebuild")
    return problems


def cmd_export(args) -> int:
    try:
        patch, _ = _load_patch(args)
    except (FixtureError, ComplexError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    adm = check_admissible(patch, args.d, args.eps)
    tc = build_tile_collection(patch, _tile_cfg(args), force=True,
                               admissible=adm.ok)
    traces = trace_walls(patch, tc)
    out = Path(args.output)
    if args.format == "dot":
        out.write_text(to_dot(patch, traces))
    else:
        _json_dump(export_wallspace(patch, traces, args.d, c=args.c), out)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    catalog = load_catalog()
    if args.fixtures_cmd == "list":
        for name in sorted(catalog):
            spec = catalog[name]
            print(f"{name}: {spec.num_cells} cells, ell multiple of "
                  f"{spec.min_ell()} (default {spec.default_ell()}) - {spec.doc}")
        return EXIT_OK
    patch = build_fixture(args.name, ell=args.ell)
    doc = {
        "presentation": patch.presentation.to_json(),
        "patch": patch.to_json(),
    }
    _json_dump(doc, Path(args.output))
    print(f"wrote {args.output}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randwalls",
        description="Finite tile and wall constructions for random groups.",
    )
    parser.add_argument("--config", help="key = value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a random presentation")
    p.add_argument("-n", type=int, default=2)
    p.add_argument("-d", type=_fraction, default=Fraction(3, 14))
    p.add_argument("--ell0", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", default="presentation.json")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("patches", help="enumerate or sample patches")
    p.add_argument("--presentation", required=True)
    p.add_argument("--cells", type=int, default=2)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--random", type=int, default=0,
                   help="sample this many random patches instead")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", default="patches.json")
    p.set_defaults(func=cmd_patches)

    p = sub.add_parser("build", help="build tiles and walls for one patch")
    _add_input_flags(p)
    _add_tile_flags(p)
    p.add_argument("--force", action="store_true",
                   help="proceed on inadmissible input")
    p.add_argument("-o", "--output", default="out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run the oracle suites")
    _add_input_flags(p)
    _add_tile_flags(p)
    p.add_argument("--lemmas", help="comma-separated lemma filter")
    p.add_argument("--trees", type=int, default=1000,
                   help="random trees for the sublemma sweep")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--artifacts", help="build output dir to re-check")
    p.add_argument("-o", "--output", help="oracle report JSON path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="export walls as DOT or wallspace JSON")
    _add_input_flags(p)
    _add_tile_flags(p)
    p.add_argument("--format", choices=("dot", "json"), required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("fixtures", help="list or build named fixtures")
    fsub = p.add_subparsers(dest="fixtures_cmd", required=True)
    pl = fsub.add_parser("list")
    pl.set_defaults(func=cmd_fixtures)
    pb = fsub.add_parser("build")
    pb.add_argument("--name", required=True)
    pb.add_argument("--ell", type=int)
    pb.add_argument("-o", "--output", default="fixture.json")
    pb.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            overrides = _load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for key, val in overrides.items():
            if hasattr(args, key) and key != "config":
                cur = getattr(args, key)
                if cur in (None, parser.get_default(key)) or cur is None:
                    if key in ("d", "eps") and isinstance(val, str):
                        val = Fraction(val)
                    setattr(args, key, val)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (FixtureError, ComplexError, TileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
