import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from ldlc.cli import main

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


@pytest.fixture()
def work(tmp_path):
    (tmp_path / "tiny.cnf").write_text("p cnf 3 1\n1 2 3 0\n")
    (tmp_path / "two.cnf").write_text("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n")
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(Path(path).read_text())


def validate(path, schema):
    jsonschema.validate(load(path), json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))


def test_lc_build_example(work):
    assert run("lc", "build", "--cnf", work / "tiny.cnf", "--r", 1, "--out", work / "inst.json") == 0
    doc = load(work / "inst.json")
    assert doc["artifact"] == "ldlc" and doc["run_config"]["r"] == 1
    assert len(doc["result"]["vertices"]["U"]) == 1 and len(doc["result"]["vertices"]["V"]) == 3
    validate(work / "inst.json", "instance")


def test_pcp_pipeline(work):
    assert run("lc", "multilayer", "--cnf", work / "tiny.cnf", "--ell", 2, "--T", 1, "--out", work / "ml.json") == 0
    validate(work / "ml.json", "instance")
    assert run("pcp", "prove", "--test", "3c3u", "--instance", work / "ml.json", "--out", work / "honest.json") == 0
    validate(work / "honest.json", "proof")
    assert run("pcp", "accept", "--test", "3c3u", "--proof", work / "honest.json", "--samples", 300, "--seed", 7, "--out", work / "acc.json") == 0
    acc = load(work / "acc.json")["result"]
    assert acc["estimate"] == 1.0 and acc["rejections"] == 0


def test_hypergraph_and_coloring(work):
    run("lc", "build", "--cnf", work / "tiny.cnf", "--out", work / "inst.json")
    assert run("pcp", "prove", "--test", "4c4u", "--d", 4, "--instance", work / "inst.json", "--out", work / "p.json") == 0
    assert run("pcp", "hypergraph", "--proof", work / "p.json", "--budget", 200, "--out", work / "h.json") == 0
    validate(work / "h.json", "hypergraph")
    assert run("hg", "check-coloring", "--hypergraph", work / "h.json", "--proof", work / "p.json", "--groups", "--out", work / "c.json") == 0
    assert load(work / "c.json")["result"]["proper"]
    assert run("hg", "check-coloring", "--hypergraph", work / "h.json", "--constant", 0, "--k", 4, "--out", work / "c0.json") == 0
    assert not load(work / "c0.json")["result"]["proper"]


def test_transcripts_are_json_lines(work):
    run("lc", "build", "--cnf", work / "tiny.cnf", "--out", work / "inst.json")
    run("pcp", "prove", "--test", "2c8u", "--d", 4, "--instance", work / "inst.json", "--out", work / "p.json")
    assert run("pcp", "transcript", "--proof", work / "p.json", "--count", 5, "--refs", "--out", work / "t.jsonl") == 0
    lines = (work / "t.jsonl").read_text().splitlines()
    assert len(lines) == 6
    recs = [json.loads(x) for x in lines[1:]]
    assert all(r["accept"] and len(r["refs"]) == 8 for r in recs)


def test_quad_rank_example(work):
    assert run("quad", "rank", "--beta", "100000000", "--n", 2, "--d", 1, "--out", work / "r.json") == 0
    assert load(work / "r.json")["result"]["rank"] == 1
    assert run("quad", "build", "--beta", "100", "--n", 1, "--d", 1, "--out", work / "q.json") == 0
    validate(work / "q.json", "quadform")


def test_spectrum_schema(work):
    assert run("fourier", "spectrum", "--colors", "01101001", "--n", 2, "--d", 1, "--exact", "--out", work / "s.json") == 0
    validate(work / "s.json", "spectrum")


@pytest.mark.parametrize(
    "argv,code",
    [
        (["lc"], 2),
        (["pcp", "prove", "--test", "9c9u"], 2),
        (["quad", "rank", "--beta", "12", "--n", 2, "--d", 1], 2),
        (["pcp", "prove", "--test", "2c8u", "--d", 3, "--cnf", "{tiny}"], 2),
        (["quad", "phi", "--d", 1, "--k", 1, "--D", 0, "--n-max", 3], 3),
        (["lc", "build", "--cnf", "{bad}"], 2),
    ],
)
def test_exit_codes(work, argv, code, capsys):
    (work / "bad.cnf").write_text("p cnf 3 1\n1 1 2 0\n")
    argv = [str(a).format(tiny=work / "tiny.cnf", bad=work / "bad.cnf") for a in argv]
    assert main(argv) == code
    if code == 3:
        assert "cap" in capsys.readouterr().err


COMMANDS = [
    ["lc", "build", "--cnf", "{two}", "--r", 2],
    ["lc", "multilayer", "--cnf", "{tiny}", "--ell", 2, "--T", 1],
    ["lc", "opt", "--cnf", "{two}"],
    ["pcp", "prove", "--test", "2c8u", "--d", 4, "--cnf", "{tiny}"],
    ["pcp", "accept", "--proof", "{p2}", "--samples", 200, "--seed", 3],
    ["pcp", "transcript", "--proof", "{p3}", "--count", 5, "--seed", 5],
    ["poly", "dual-check", "--n", 3, "--d", 1],
    ["poly", "distance", "--table", "01101001", "--d", 1],
    ["poly", "interpolate", "--points", "010,111", "--values", "11", "--n", 3, "--d", 2],
    ["fourier", "spectrum", "--colors", "0110100110010110", "--n", 3, "--d", 1],
    ["quad", "dist", "--beta", "120", "--n", 1, "--d", 1, "--mode", "montecarlo", "--samples", 500],
    ["quad", "phi", "--d", 1, "--k", 1, "--D", 0, "--n-max", 1],
    ["dg", "estimate", "--n", 6, "--d", 4, "--g-samples", 50, "--h-samples", 50, "--seed", 2],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(map(str, a[:2])))
def test_reproducible(work, argv):
    assert run("pcp", "prove", "--test", "2c8u", "--d", 4, "--cnf", work / "tiny.cnf", "--out", work / "p2.json") == 0
    assert run("pcp", "prove", "--test", "3c3u", "--cnf", work / "tiny.cnf", "--ell", 2, "--T", 1, "--out", work / "p3.json") == 0
    paths = {k: work / f"{k}.json" for k in ("p2", "p3")}
    argv = [str(a).format(tiny=work / "tiny.cnf", two=work / "two.cnf", **paths) for a in argv]
    outs = []
    for k in range(2):
        out = work / f"run{k}.json"
        assert main(argv + ["--out", str(out)]) == 0, argv
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.skipif(shutil.which("ldlc") is None, reason="console script not installed")
def test_console_script(work):
    proc = subprocess.run(["ldlc", "quad", "rank", "--beta", "100000000", "--n", "2", "--d", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "rank" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "ldlc.cli", "lc"], capture_output=True, text=True)
    assert proc.returncode == 2
