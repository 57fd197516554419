"""Tests for the command-line entry point."""
import json

import pytest

from config import settings
from main import EXIT_ABORT, EXIT_FAILED, EXIT_OK, EXIT_VALIDATION, main


def test_params(capsys):
    assert main(["params", "--n", "6", "--d", "2", "--k", "3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["M"] == 4
    assert doc["r"] == 9
    assert doc["m"] == 0
    assert doc["c"] == "1/19"
    assert doc["schema_version"] == "1.0"


def test_params_validation_error(capsys):
    assert main(["params", "--n", "5", "--d", "2", "--k", "3"]) == EXIT_VALIDATION
    assert capsys.readouterr().out == ""


def test_enumerate_edgelist(capsys):
    assert main(["enumerate", "--n", "4", "--d", "3", "--k", "3"]) == EXIT_OK
    assert capsys.readouterr().out == "khg 3 4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n"


def test_enumerate_json(capsys):
    assert main(["--format", "json", "enumerate", "--n", "6", "--d", "1", "--k", "3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 10
    assert doc["instances"][0] == [[1, 2, 3], [4, 5, 6]]


def test_enumerate_guard(capsys):
    code = main(["enumerate", "--n", "6", "--d", "2", "--k", "3", "--node-ceiling", "3"])
    assert code == EXIT_ABORT


def test_missing_seed_is_refused(monkeypatch):
    monkeypatch.setattr(settings, "seed", None)
    assert main(["sample-y", "--n", "6", "--d", "2"]) == EXIT_VALIDATION


def test_env_seed_is_used(monkeypatch, capsys):
    monkeypatch.setattr(settings, "seed", 42)
    assert main(["sample-y", "--n", "6", "--d", "2"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["sample-y", "--n", "6", "--d", "2", "--seed", "42"]) == EXIT_OK
    assert capsys.readouterr().out == first


def test_pipeline_output_is_reproducible(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        args = ["--out", str(path), "pipeline", "--n", "19", "--d", "3", "--seed", "42"]
        assert main(args) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["params"]["red_edges"] == 9


def test_pipeline_writes_edge_lists(tmp_path):
    hnm = tmp_path / "hnm.txt"
    tilde = tmp_path / "tilde.txt"
    code = main(["--out", str(tmp_path / "r.json"), "pipeline", "--n", "19", "--d", "3", "--seed", "1",
                 "--mode", "resample", "--hnm-out", str(hnm), "--tilde-out", str(tilde)])
    assert code == EXIT_OK
    assert hnm.read_text().startswith("khg 3 19 1\n")
    assert tilde.read_text().startswith("khg 3 19 19\n")


def test_hamilton_on_a_file(tmp_path, capsys):
    path = tmp_path / "cycle.txt"
    path.write_text("khg 3 6 3\n1 2 3\n3 4 5\n5 6 1\n")
    assert main(["hamilton", "--input", str(path)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["found"] and doc["valid"]


def test_hamilton_needs_an_input():
    assert main(["hamilton"]) == EXIT_VALIDATION


def test_bad_edge_list(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("khg 3 6 2\n1 2 3\n")
    assert main(["hamilton", "--input", str(path)]) == EXIT_VALIDATION


def test_preimages(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("khg 3 6 2\n1 2 3\n4 5 6\n")
    assert main(["preimages", "--input", str(path)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["count"] == 72


def test_uniformity_reference_passes(capsys):
    args = ["uniformity", "--n", "6", "--d", "2", "--k", "3", "--seed", "42", "--N", "750", "--sampler", "reference"]
    assert main(args) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["classes"] == 75


def test_uniformity_deletion_fails():
    args = ["uniformity", "--n", "6", "--d", "2", "--k", "3", "--seed", "42", "--N", "2000", "--sampler", "deletion"]
    assert main(args) == EXIT_FAILED


def test_uniform_reference_does_not_match_the_exact_pipeline_law(capsys):
    args = ["uniformity", "--n", "6", "--d", "2", "--k", "3", "--seed", "42", "--N", "2000",
            "--sampler", "reference", "--against", "exact"]
    assert main(args) == EXIT_FAILED
    assert json.loads(capsys.readouterr().out)["label"] == "law:reference"


def test_uniformity_sample_too_small():
    args = ["uniformity", "--n", "6", "--d", "2", "--k", "3", "--seed", "42", "--N", "100", "--sampler", "reference"]
    assert main(args) == EXIT_VALIDATION


def test_double_count(capsys):
    assert main(["double-count", "--n", "3", "--d", "3", "--k", "3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdicts"]["double_count_exact"]


def test_metrics_file(tmp_path):
    path = tmp_path / "metrics.prom"
    assert main(["--metrics-out", str(path), "pipeline", "--n", "6", "--d", "2", "--seed", "3"]) == EXIT_OK
    text = path.read_text()
    assert "trials_total" in text


@pytest.mark.parametrize("argv", [
    ["phi", "--n", "19", "--d", "3", "--seed", "1", "--N", "50"],
    ["expect", "--n", "19", "--d", "3", "--seed", "1", "--N", "50"],
    ["fb-audit", "--n", "19", "--d", "3", "--seed", "1", "--N", "5"],
    ["events", "--n", "19", "--d", "3", "--seed", "1", "--N", "10"],
    ["pilot", "--n", "30", "--degrees", "2,4", "--seed", "1", "--N", "3"],
])
def test_report_commands_emit_json(argv, capsys):
    assert main(argv) in (EXIT_OK, EXIT_FAILED)
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == "1.0"
