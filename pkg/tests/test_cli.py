import json

import pytest

from randwalls import cli
from randwalls.presentation import Presentation


def _lines(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_fixtures_list(capsys):
    assert cli.main(["fixtures", "list"]) == 0
    out = capsys.readouterr().out
    assert "MPexample" in out and "ring3" in out


def test_fixtures_build(tmp_path):
    out = tmp_path / "fx.json"
    assert cli.main(["fixtures", "build", "--name", "two_cell_small",
                     "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert set(data) == {"presentation", "patch"}
    assert Presentation.from_json(data["presentation"]).ell % 4 == 0


def test_sample_and_patches(tmp_path):
    pres_path = tmp_path / "pres.json"
    assert cli.main(["sample", "--ell0", "8", "--seed", "7",
                     "-o", str(pres_path)]) == 0
    pres = Presentation.load(pres_path)
    assert len(pres.relators) == 6
    out = tmp_path / "patches.json"
    assert cli.main(["patches", "--presentation", str(pres_path),
                     "--budget", "40", "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["patches"]) == 40
    out_r = tmp_path / "random.json"
    assert cli.main(["patches", "--presentation", str(pres_path),
                     "--random", "5", "--seed", "3", "-o", str(out_r)]) == 0
    assert len(json.loads(out_r.read_text())["patches"]) == 5


def test_build_artifacts(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["build", "--fixture", "MPexample", "-o", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "tiles: One=0 Core=1 NonCore=0; walls=16; admissible=yes" in stdout
    for name in ("presentation.json", "patch.json", "tiles.json",
                 "steps.jsonl", "bends.jsonl", "walls.json", "walls.dot",
                 "wallspace.json"):
        assert (out / name).exists(), name
    steps = _lines(out / "steps.jsonl")
    assert [s["step"] for s in steps] == [1, 1]
    tiles = json.loads((out / "tiles.json").read_text())["tiles"]
    alive = [t for t in tiles if t["alive"]]
    assert len(alive) == 1 and alive[0]["class"] == "Core"
    ws = json.loads((out / "wallspace.json").read_text())
    assert ws["n_ret"] == 21 and ws["lambda"] == "7/1"


def test_build_inadmissible_exit_codes(tmp_path, capsys):
    out = tmp_path / "ring"
    assert cli.main(["build", "--fixture", "ring3", "-o", str(out)]) == 3
    assert "inadmissible" in capsys.readouterr().err
    assert cli.main(["build", "--fixture", "ring3", "--force",
                     "-o", str(out)]) == 0
    err = capsys.readouterr().err
    assert "inadmissible" in err  # forced build still warns


def test_build_from_files(tmp_path):
    fx = tmp_path / "fx.json"
    assert cli.main(["fixtures", "build", "--name", "balancing2tile",
                     "-o", str(fx)]) == 0
    data = json.loads(fx.read_text())
    pres_path = tmp_path / "pres.json"
    patch_path = tmp_path / "patch.json"
    Presentation.from_json(data["presentation"]).save(pres_path)
    patch_path.write_text(json.dumps(data["patch"]))
    out = tmp_path / "out"
    assert cli.main(["build", "--presentation", str(pres_path),
                     "--patch", str(patch_path), "-o", str(out)]) == 0
    assert (out / "steps.jsonl").exists()


def test_verify_and_tamper(tmp_path):
    out = tmp_path / "out"
    assert cli.main(["build", "--fixture", "MPexample", "-o", str(out)]) == 0
    report = tmp_path / "report.json"
    args = ["verify", "--fixture", "MPexample", "--trees", "20", "--seed", "1",
            "--artifacts", str(out), "-o", str(report)]
    assert cli.main(args) == 0
    data = json.loads(report.read_text())
    assert {r["lemma"] for r in data} >= {"sublemma47", "balancebounds"}
    # tampering with a logged artifact must fail verification
    bends = out / "bends.jsonl"
    records = bends.read_text().splitlines()
    first = json.loads(records[0])
    first["alpha_side"] = "-" if first["alpha_side"] == "+" else "+"
    records[0] = json.dumps(first, sort_keys=True)
    bends.write_text("\n".join(records) + "\n")
    assert cli.main(args) == 1


def test_verify_lemma_filter(tmp_path):
    report = tmp_path / "r.json"
    assert cli.main(["verify", "--fixture", "shards", "--lemmas",
                     "balancebounds,trees", "--trees", "5", "--seed", "1",
                     "-o", str(report)]) == 0
    data = json.loads(report.read_text())
    assert {r["lemma"] for r in data} == {"balancebounds", "trees"}


def test_export(tmp_path):
    dot = tmp_path / "w.dot"
    assert cli.main(["export", "--fixture", "wallcases", "--format", "dot",
                     "-o", str(dot)]) == 0
    assert dot.read_text().startswith("graph")
    ws = tmp_path / "w.json"
    assert cli.main(["export", "--fixture", "wallcases", "--format", "json",
                     "-o", str(ws)]) == 0
    assert "walls" in json.loads(ws.read_text())


def test_usage_errors(tmp_path, capsys):
    # argparse rejects an unknown format with exit code 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["export", "--fixture", "wallcases", "--format", "svg",
                  "-o", str(tmp_path / "x")])
    assert exc.value.code == 2
    capsys.readouterr()
    # missing input is a usage error, not a crash
    assert cli.main(["build", "-o", str(tmp_path / "y")]) == 2
    assert cli.main(["fixtures", "build", "--name", "nope",
                     "-o", str(tmp_path / "z")]) == 2


def test_seed_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("RANDWALLS_SEED", "7")
    a = tmp_path / "a.json"
    assert cli.main(["sample", "--ell0", "8", "-o", str(a)]) == 0
    b = tmp_path / "b.json"
    assert cli.main(["sample", "--ell0", "8", "--seed", "7", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg"
    cfg.write_text("# defaults for this run\nseed = 7\nell0 = 8\n")
    a = tmp_path / "a.json"
    assert cli.main(["--config", str(cfg), "sample", "--ell0", "8",
                     "-o", str(a)]) == 0
    b = tmp_path / "b.json"
    assert cli.main(["sample", "--ell0", "8", "--seed", "7",
                     "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
