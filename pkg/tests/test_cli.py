import json
import subprocess
import sys

import pytest

from meshcert.cli import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, main, run


def _strip(report):
    return {k: v for k, v in report.items() if k != "wall_time"}


def test_oracle_negative_with_witness():
    rep, code = run(["oracle", "--input", "cycle:5", "--class", "Meshed"])
    assert code == EXIT_NEGATIVE
    res = rep["outcome"]["classes"]["Meshed"]
    assert res["member"] is False and res["witness"]


def test_certify_grid():
    rep, code = run(["certify", "--input", "grid:3,3", "--root", "4", "--mode", "mod3", "--ruleset", "MESHED_mod3"])
    assert code == EXIT_OK
    assert rep["outcome"]["verdict"]["accepted"] and rep["outcome"]["label_bits"] == 2
    rep, code = run(["certify", "--input", "grid:3,3", "--root", "4"])
    assert code == EXIT_OK and rep["outcome"]["label_bits"] == 2


def test_certify_cycle_rejected():
    rep, code = run(["certify", "--input", "cycle:6", "--ruleset", "MESHED_dist"])
    assert code == EXIT_NEGATIVE
    assert rep["outcome"]["verdict"]["rejections"] == [{"vertex": 3, "rule": "DM"}]


def test_elect():
    rep, code = run(["elect", "--input", "grid:3,3", "--root", "4"])
    assert code == EXIT_OK and rep["outcome"]["leader"] == 4 and rep["outcome"]["status"] == "Elected"
    rep, code = run(["elect", "--input", "complete:3", "--labels", "0,1,2"])
    assert code == EXIT_NEGATIVE and rep["outcome"]["status"] == "RejectedByVerifier"
    rep, code = run(["elect", "--input", "kinggrid:3,3", "--ruleset", "HELLY_mod3"])
    assert rep["outcome"]["leader"] == 0


def test_labels_from_file(tmp_path):
    f = tmp_path / "lab.txt"
    f.write_text("0 0\n1 1\n2 2\n")
    rep, code = run(["elect", "--input", "path:3", "--labels", str(f)])
    assert code == EXIT_OK and rep["outcome"]["leader"] == 0


def test_edge_list_input(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("4 4\n0 1\n1 2\n2 3\n3 0\n")
    rep, code = run(["oracle", "--input", str(f), "--class", "Median"])
    assert code == EXIT_OK and rep["outcome"]["n"] == 4


def test_recognize():
    rep, code = run(["recognize", "--input", "johnson:5,2", "--class", "MatroidBasis"])
    assert code == EXIT_OK and rep["outcome"]["decision"] is True
    rep, code = run(["recognize", "--input", "cycle:4", "--class", "Chordal"])
    assert code == EXIT_NEGATIVE
    _, code = run(["recognize", "--input", "cycle:4"])
    assert code == EXIT_INPUT


def test_fuzz():
    rep, code = run(["fuzz", "--input", "grid:3,3", "--trials", "200", "--seed", "7"])
    assert code == EXIT_OK and rep["outcome"]["spurious_acceptances"] == 0
    assert rep["outcome"]["accepted_canonical"] > 0


@pytest.mark.parametrize("argv", [
    ["oracle", "--input", "nosuchfamily:3"],
    ["certify", "--input", "path:3", "--root", "9"],
    ["certify", "--input", "path:3", "--mode", "mod3", "--ruleset", "MESHED_dist"],
    ["oracle", "--input", "path:3", "--class", "Nonsense"],
    ["elect", "--input", "path:3", "--labels", "0,1"],
])
def test_input_errors(argv):
    rep, code = run(argv)
    assert code == EXIT_INPUT and "error" in rep["outcome"]


def test_report_is_deterministic_and_round_trips(tmp_path):
    out = tmp_path / "r.json"
    argv = ["certify", "--input", "kinggrid:3,3", "--ruleset", "HELLY_dist", "--seed", "5", "--json", str(out)]
    a, _ = run(argv)
    b, _ = run(argv)
    assert _strip(a) == _strip(b)
    saved = json.loads(out.read_text())
    assert _strip(saved) == _strip(json.loads(json.dumps(a)))
    assert set(a) == {"command", "input", "parameters", "seed", "outcome", "wall_time"}


def test_export_dot(capsys):
    assert main(["export-dot", "--input", "path:3"]) == EXIT_OK
    dot = capsys.readouterr().out
    assert dot.startswith("digraph") and dot.count("->") == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "meshcert.cli", "oracle", "--input", "path:3", "--class", "Median"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outcome"]["classes"]["Median"]["member"] is True
