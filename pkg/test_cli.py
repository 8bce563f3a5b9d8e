#!/usr/bin/env python3
"""
Test the command line report shape and exit codes
"""

import json

import pytest

from main import run


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def test_orbit_dimension_report(capsys):
    assert run(["orbit-dim", "2,2", "-1"]) == 0
    report = _report(capsys)
    assert report["command"] == "orbit-dim"
    assert report["inputs"] == {"eps": -1, "mu": [2, 2], "file": None}
    assert report["outputs"] == {"dimension": 6}
    assert report["passed"] is True
    assert "seconds" not in report


@pytest.mark.parametrize("argv,key,expected", [
    (["collapse", "3,1", "-1"], "collapse", [2, 2]),
    (["enumerate-partitions", "4", "-1"], "count", 4),
    (["theta-enumerate", "3", "2"], "count", 5),
    (["transfer", "2,1;1,2", "2n"], "image", [[0, 1], [1, 0]]),
    (["transfer", "0,1;1,0", "2n"], "image", None),
    (["transfer", "1,0,0;0,1,0;0,0,1", "n"], "image", [[0, 0, 0], [0, 0, 0], [0, 0, 0]]),
    (["double-centralizer", "2", "2"], "image_dim", 3),
    (["faithfulness", "1,1,0;0,0,0"], "independent", True),
])
def test_subcommand_outputs(capsys, argv, key, expected):
    assert run(argv) == 0
    assert _report(capsys)["outputs"][key] == expected


def test_nilcone_very_even(capsys):
    assert run(["nilcone", "2", "4", "+1"]) == 0
    outputs = _report(capsys)["outputs"]
    assert outputs["components"] == [[2, 2], [2, 2]]
    assert outputs["very_even"] is True


def test_monomial_chain_report(capsys):
    assert run(["monomial-chain", "1,1;1,1"]) == 0
    outputs = _report(capsys)["outputs"]
    assert outputs["chain"] == [[[1, 1], [1, 1]]]
    assert outputs["element"] == [{"word": [{"kind": "f", "index": 1}, {"kind": "idem", "weight": [0, 0]}],
                                   "coeff": "1"}]


def test_stabilization_report(capsys):
    assert run(["stab-matrices", "odd-orthogonal", "3", "--v", "2"]) == 0
    outputs = _report(capsys)["outputs"]
    assert outputs["isometry"] is True
    assert outputs["jordan_type"] == [3]
    assert outputs["a_eps"] == 18


def test_block_variant_needs_eps(capsys):
    assert run(["stab-matrices", "block-2n", "3"]) == 2
    assert "needs --eps" in capsys.readouterr().err


def test_timing_flag_adds_seconds(capsys):
    assert run(["--timing", "orbit-dim", "2", "-1"]) == 0
    assert "seconds" in _report(capsys)


def test_text_format(capsys):
    assert run(["--format", "text", "orbit-dim", "2,2", "-1"]) == 0
    out = capsys.readouterr().out
    assert "command: orbit-dim" in out
    assert "passed: True" in out


def test_invalid_input_exits_with_two(capsys):
    assert run(["orbit-dim", "3,1", "-1"]) == 2
    assert capsys.readouterr().err.startswith("Error:")


def test_usage_error_exits_with_two(capsys):
    assert run(["orbit-dim"]) == 2
    assert run(["orbit-dim", "2", "0"]) == 2


def test_non_homogeneous_family_is_rejected(capsys):
    assert run(["faithfulness", "1,0,0;0,0,0"]) == 2


def test_faithfulness_in_one_weight_class(capsys):
    assert run(["faithfulness", "1,1,0;0,0,0", "--weight", "0,2,0", "--max-level", "6"]) == 1
    report = _report(capsys)
    assert report["passed"] is False
    assert report["outputs"]["rank"] == 1
    assert run(["faithfulness", "1,1,0;0,0,0", "--weight", "0,2,0", "--max-level", "8"]) == 0
    assert _report(capsys)["outputs"]["d_used"] == 4


def test_module_file_round_trip(tmp_path, capsys):
    path = tmp_path / "nflag.json"
    assert run(["--quiet", "--out", str(path), "nflag", "3", "4", "-1"]) == 0
    assert capsys.readouterr().out == ""
    saved = json.loads(path.read_text())
    assert saved["outputs"]["n"] == 3

    assert run(["--file", str(path), "verify-relations", "3"]) == 0
    report = _report(capsys)
    assert report["passed"] is True
    assert report["outputs"]["failures"] == 0

    assert run(["--file", str(path), "singular-vectors"]) == 0
    assert _report(capsys)["outputs"]["highest_weights"] == [[[2], [4]]]


def test_module_spec_argument(capsys):
    assert run(["singular-vectors", "grassmannian:v=4,eps=-1", "--theta-twist"]) == 0
    assert _report(capsys)["outputs"]["highest_weights"] == [[[4], [4]]]


def test_missing_module_is_an_error(capsys):
    assert run(["verify-relations", "3"]) == 2
    assert run(["--file", "/nonexistent/module.json", "verify-relations", "3"]) == 2


def test_t_minpoly(capsys):
    assert run(["t-minpoly", "6", "-1"]) == 0
    outputs = _report(capsys)["outputs"]
    assert outputs["top_eigenvalue"] == "3"
    assert outputs["spectral_transfer"]["passed"] is True


def test_limit_coherence(capsys):
    assert run(["limit-coherence", "e", "1", "3", "-1", "2", "--residue", "4"]) == 0
    outputs = _report(capsys)["outputs"]
    assert outputs["passed"] is True
    assert [item["v"] for item in outputs["levels"]] == [4, 10]


def test_limit_coherence_idempotent(capsys):
    assert run(["limit-coherence", "idem", "0", "3", "-1", "2", "--residue", "4", "--weight", "0,4,0"]) == 0
    assert _report(capsys)["outputs"]["passed"] is True


def test_acceptance_single_criterion(tmp_path, capsys):
    csv_path = tmp_path / "acceptance.csv"
    assert run(["--quiet", "--processes", "1", "--csv", str(csv_path), "acceptance", "--criteria", "2"]) == 0
    report = _report(capsys)
    (result,) = report["outputs"]["criteria"]
    assert result["criterion"] == 2
    assert result["passed"] is True
    assert "seconds" not in result
    assert csv_path.read_text().startswith("criterion,title,passed")


def test_acceptance_rejects_unknown_criterion(capsys):
    assert run(["--quiet", "acceptance", "--criteria", "12"]) == 2
