import json
import subprocess
import sys

import pytest

from pvshort.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_char_eval(capsys):
    code, out, _ = run(capsys, "char-eval", "5", "2", "2")
    assert code == 0
    d = json.loads(out)
    assert d["angle"] == "1/2" and d["value"] == [-1.0, 0.0]


def test_char_eval_non_unit(capsys):
    code, out, _ = run(capsys, "char-eval", "6", "1", "3")
    assert code == 0 and json.loads(out)["angle"] is None


def test_charsum_profile_stdout(capsys):
    code, out, _ = run(capsys, "charsum", "5", "5:2", "--emit-profile", "-")
    assert code == 0
    assert out.splitlines() == ["N,re,im,abs", "1,1.0,0.0,1.0", "2,0.0,0.0,0.0",
                                "3,-1.0,0.0,1.0", "4,0.0,0.0,0.0"]


def test_charsum_profile_file(capsys, tmp_path):
    f = tmp_path / "p.csv"
    code, out, _ = run(capsys, "charsum", "7", "1", "--emit-profile", str(f))
    d = json.loads(out)
    assert code == 0 and d["primitive"] and d["parity"] == "odd"
    assert len(f.read_text().splitlines()) == 7


def test_gauss(capsys):
    code, out, _ = run(capsys, "gauss", "5", "2")
    d = json.loads(out)
    assert code == 0 and d["abs"] == pytest.approx(5**0.5)


@pytest.mark.parametrize("argv", [
    ("trig", "sigma", "2", "9", "3.141592653589793"),
    ("trig", "eq1", "1000000", "0", "0.05", "1"),
    ("trig", "eq2", "1000000", "0.2", "0.05", "1.4142135623730951"),
    ("trig", "eq3", "1000000", "0", "0.05", "2"),
    ("trig", "eq4", "1", "3", "3.141592653589793", "100"),
    ("trig", "fourier", "1.5707963267948966"),
])
def test_trig(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    json.loads(out)


def test_decomp_json(capsys):
    code, out, _ = run(capsys, "decomp", "101", "1", "60", "--gamma", "0.1", "--epsilon", "0.05")
    d = json.loads(out)
    assert code == 0 and d["N"] == 60 and d["hypothesis_ok"]


@pytest.mark.parametrize("argv", [
    ("decomp", "101", "1", "99", "--gamma", "0.1"),
    ("gauss", "5", "7"),
    ("char-eval", "0", "1", "1"),
    ("trig", "eq3", "10000", "0.2", "0.05", "1"),
    ("nonsense",),
    ("gauss", "5"),
])
def test_usage_and_domain_errors_exit_2(capsys, argv):
    if argv[0] in ("nonsense",) or len(argv) == 2:
        with pytest.raises(SystemExit) as e:
            main(list(argv))
        assert e.value.code == 2
    else:
        code, _, err = run(capsys, *argv)
        assert code == 2 and "error" in err


def test_survey_theorem(capsys, tmp_path, monkeypatch):
    cfgf = tmp_path / "c.cfg"
    cfgf.write_text("q_range = 500, 560\ncharacters_per_modulus = 3\n")
    monkeypatch.setenv("PVSHORT_GAMMA_GRID", "0, 0.2")
    code, out, _ = run(capsys, "survey", "theorem", "--config", str(cfgf),
                       "--output-dir", str(tmp_path / "o"), "--workers", "1")
    assert code == 0
    names = {p.rsplit("/", 1)[-1] for p in out.split()}
    assert names == {"theorem_survey.csv", "ratio_vs_gamma.csv", "argmax_location.csv"}
    rows = (tmp_path / "o" / "theorem_survey.csv").read_text().splitlines()
    assert {r.split(",")[3] for r in rows[1:]} == {"0.0", "0.2"}


def test_survey_decomposition_and_lemma(capsys, tmp_path):
    cfgf = tmp_path / "c.cfg"
    cfgf.write_text("q_range = 1009, 1013\ncharacters_per_modulus = 2\nalpha_grid_size = 5\n")
    for kind in ("decomposition", "lemma"):
        code, out, _ = run(capsys, "survey", kind, "--config", str(cfgf),
                           "--output-dir", str(tmp_path / kind), "--workers", "1")
        assert code == 0 and out.strip()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pvshort", "char-eval", "5", "1", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["angle"] == "1/4"
