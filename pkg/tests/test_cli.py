"""Command-line behaviour and exit codes."""
import json

import pytest

from westervelt.cli import main

PULSE = """\
beta = 0.1
x0 = -10
x1 = 10
nx = 64
t_end = 0.2
init.name = gaussian
init.amplitude = 0.5
output.every = 5
"""


def _write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_verify_suite_passes(capsys):
    assert main(["verify", "--suite", "mapping"]) == 0
    out = capsys.readouterr().out
    assert "contact round trip" in out and "PASS" in out


def test_verify_writes_report(tmp_path):
    assert main(["verify", "--suite", "hamiltonian", "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "report.json").read_text())
    assert all(r["ok"] for r in rows)
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["exit_status"] == 0 and man["config"] == {"suite": "hamiltonian"}


def test_unknown_suite_is_usage_error():
    assert main(["verify", "--suite", "everything"]) == 2


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["exact", "--family", "deg2"]])
def test_bad_arguments(argv):
    assert main(argv) == 2


def test_simulate_missing_config(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.cfg"),
                 "--out", str(tmp_path / "o")]) == 2


def test_simulate_bad_key(tmp_path):
    cfg = _write(tmp_path, PULSE + "speed = 3\n")
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_simulate_degenerate(tmp_path):
    cfg = _write(tmp_path, PULSE.replace("beta = 0.1", "beta = 0.6").replace("0.5", "1"))
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
    man = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert man["exit_status"] == 3


def test_simulate_outputs(tmp_path):
    cfg = _write(tmp_path, PULSE)
    out = tmp_path / "o"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    header = (out / "monitors.csv").read_text().splitlines()[0]
    assert header == "t,C1,C2,C3,C4,C5,C6,E,M,K,H,Tv3,Tv4"
    fields = sorted(out.glob("fields_*.csv"))
    assert fields[0].name == "fields_0000.csv"
    assert fields[0].read_text().splitlines()[0] == "x,p,q,v"
    assert len(fields[0].read_text().splitlines()) == 65
    man = json.loads((out / "manifest.json").read_text())
    assert man["subcommand"] == "simulate" and man["config"]["nx"] == 64
    assert man["version"] and man["started"] and man["finished"]


def test_simulate_damped_columns(tmp_path):
    cfg = _write(tmp_path, PULSE + "alpha = 0.05\n")
    out = tmp_path / "o"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "monitors.csv").read_text().splitlines()[0] == "t,C1,C2,C3,C4"


def test_simulate_is_deterministic(tmp_path):
    cfg = _write(tmp_path, PULSE)
    for d in ("a", "b"):
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / d)]) == 0
    names = sorted(p.name for p in (tmp_path / "a").glob("*.csv"))
    assert names
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_exact_domain_violation(tmp_path):
    argv = ["exact", "--family", "deg3", "--params", "a1=1,beta=1",
            "--grid", "0:0.7:8,0:1:8", "--out", str(tmp_path / "ok.csv")]
    assert main(argv) == 0
    argv[5:7] = ["--grid", "0:0.8:8,0:1:8"]
    argv[-1] = str(tmp_path / "bad.csv")
    assert main(argv) == 3


def test_exact_output_and_determinism(tmp_path):
    argv = ["exact", "--family", "similarity", "--params", "beta=1",
            "--grid", "1:1.5:3,-1:1:5"]
    assert main(argv + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b.csv")]) == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    lines = a.decode().splitlines()
    assert lines[0] == "t,x,p,v" and len(lines) == 16
    man = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert man["config"]["family"] == "similarity"


@pytest.mark.parametrize("params", ["a9=1", "a1"])
def test_exact_bad_params(tmp_path, params):
    assert main(["exact", "--family", "deg2", "--params", params, "--grid", "0:1:2,0:1:2",
                 "--out", str(tmp_path / "x.csv")]) == 2


def test_mms_table(tmp_path, capsys):
    argv = ["mms", "--family", "deg2", "--params", "a3=2,beta=0.2", "--domain=-1:1",
            "--t-end", "0.1", "--nx0", "17", "--out", str(tmp_path)]
    assert main(argv) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "h,error,order" and len(lines) == 4
    assert (tmp_path / "mms.csv").exists()
    assert main(argv[:-2] + ["--refinements", "1"]) == 2


def test_catalog_dump(tmp_path):
    path = tmp_path / "cat.json"
    assert main(["catalog", "dump", "--format", "json", "--out", str(path)]) == 0
    rows = json.loads(path.read_text())
    assert any(r["id"] == "Q5" for r in rows)
