import json
import subprocess
import sys

import pytest

from phk.cli import main
from phk.corpus import collapse_map
from phk.files import map_to_dict

BROKEN = {"dim_cap": 2, "simplices": {"0": ["a", "b"], "1": ["e"], "2": ["t"]},
          "faces": {"e": ["a", "b"], "t": ["e", "e", "e"]}}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cohomology_rp2(capsys):
    code, out, _ = run(capsys, "cohomology", "--space", "rp2", "--mod", "2", "--degree", "2")
    assert code == 0
    assert "H^2 = Z/2" in out.splitlines()
    assert out.startswith("schema: phk-report/1\n")
    assert "bounds: " in out and out.endswith("status: ok\n")


@pytest.mark.parametrize("argv", [
    ["homology", "--space", "torus"],
    ["pi0", "--space", "circle"],
    ["pi1", "--space", "rp2"],
    ["h1", "--space", "circle", "--group", "S3"],
    ["coverings", "--space", "circle", "--quotient-cap", "3"],
    ["bundles", "--space", "circle", "--group", "C2"],
    ["borel", "--space", "rp2", "--group", "C2", "--mod", "2"],
    ["cartan-leray", "--space", "rp2", "--group", "C2", "--mod", "2"],
    ["hurewicz", "--space", "torus"],
    ["pi2", "--space", "sphere"],
    ["check-we", "--space", "circle"],
    ["corpus"],
    ["validate", "--space", "rp2"],
    ["cohomology", "--space", "circle", "--tower", "2,4,8", "--degree", "1"],
])
def test_subcommands_succeed_and_embed_bounds(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    lines = out.splitlines()
    assert lines[0] == "schema: phk-report/1"
    assert any(l.startswith("bounds: ") for l in lines)
    assert lines[-1] == "status: ok"


def test_reports_are_deterministic(capsys):
    a = run(capsys, "h1", "--space", "torus", "--group", "S3")[1]
    b = run(capsys, "h1", "--space", "torus", "--group", "S3")[1]
    assert a == b


def test_specific_answers(capsys):
    assert "classes = 3" in run(capsys, "h1", "--space", "circle", "--group", "S3")[1]
    assert "bundles = 2" in run(capsys, "bundles", "--space", "circle", "--group", "C2")[1]
    out = run(capsys, "pi2", "--space", "sphere", "--mod", "5")[1]
    assert "m=5: GroupTower(Z/5)" in out


def test_check_we_frobenius(capsys):
    code, out, _ = run(capsys, "check-we", "--map", "frobenius-map")
    assert code == 0 and "verdict: pass-up-to-bounds" in out


def test_check_we_mismatch_exit_code(tmp_path, capsys):
    doc = {"source": "circle", "target": "delta",
           "images": {"0": "0", "01": "s_0|0"}}
    p = tmp_path / "f.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check-we", "--map", str(p))
    assert code == 1
    assert "H^1(.; Z/2): Z/2 vs 0" in out and out.endswith("status: mismatch\n")


def test_check_we_map_file(tmp_path, capsys):
    p = tmp_path / "collapse.json"
    p.write_text(json.dumps(map_to_dict(collapse_map())))
    code, out, _ = run(capsys, "check-we", "--map", str(p), "--degree-cap", "3")
    assert code == 0


def test_validate_broken_file(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(BROKEN))
    code, out, err = run(capsys, "validate", "--space", str(p))
    assert code == 2
    assert "simplex t" in err


def test_parse_error_location(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "dim_cap": 1,\n  "simplices": {"0": ["a",]}\n}\n')
    code, _, err = run(capsys, "validate", "--space", str(p))
    assert code == 2 and "line 3" in err


@pytest.mark.parametrize("argv", [
    ["cohomology", "--space", "nosuch"],
    ["cohomology", "--space", "rp2", "--degree", "9"],
    ["cohomology", "--space", "rp2", "--mod", "x"],
    ["check-we", "--space", "circle", "--degree-cap", "0"],
    ["h1", "--space", "circle", "--group", "Q99"],
    ["cohomology", "--space", "circle", "--tower", "2,3"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("phk: ")


def test_corpus_space_and_tower_round_trip(tmp_path, capsys):
    out = tmp_path / "circle.json"
    assert run(capsys, "corpus", "--space", "circle", "--out", str(out))[0] == 0
    code, text, _ = run(capsys, "cohomology", "--space", str(out), "--mod", "3", "--degree", "1")
    assert code == 0 and "H^1 = Z/3" in text
    tdir = tmp_path / "tower"
    assert run(capsys, "corpus", "--space", "BZn-tower", "--out", str(tdir))[0] == 0
    code, text, _ = run(capsys, "validate", "--tower", str(tdir / "tower.json"))
    assert code == 0


def test_out_file(tmp_path, capsys):
    p = tmp_path / "r.txt"
    code, out, _ = run(capsys, "pi0", "--space", "torus", "--out", str(p))
    assert code == 0 and out == ""
    assert "components = 1" in p.read_text()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "phk.cli", "cohomology", "--space", "rp2",
                        "--mod", "2", "--degree", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and "H^2 = Z/2" in r.stdout


def test_corpus_tower_flag_alias(tmp_path, capsys):
    tdir = tmp_path / "t"
    assert run(capsys, "corpus", "--tower", "BZn-tower", "--out", str(tdir))[0] == 0
    assert (tdir / "tower.json").exists()
