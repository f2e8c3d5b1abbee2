"""Command-line interface: output shapes, round trips, and exit codes."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

import bilapsym.cli as cli
from bilapsym.ambient import lie_to_ckv
from bilapsym.symalg import canonical_DV, dilation_element
from bilapsym.weylop import DiffOp


class TestDims:
    def test_ckt_json_payload(self, tmp_path):
        out = tmp_path / "dims.json"
        code = cli.main(
            ["dims", "--kind", "ckt", "--s", "1", "--format", "json", "--out", str(out)]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["dimension"] == 10
        assert payload["stabilized"] is True
        assert payload["by_degree"] == {"0": 3, "1": 4, "2": 3}

    def test_gckt_text_output(self, capsys):
        code = cli.main(["dims", "--kind", "gckt", "--t", "0"])
        assert code == 0
        text = capsys.readouterr().out
        assert "dimension: 14" in text

    def test_symmetries_includes_closed_form(self, tmp_path):
        out = tmp_path / "d.json"
        code = cli.main(
            [
                "dims",
                "--kind",
                "symmetries",
                "--s",
                "2",
                "--degree-bound",
                "4",
                "--format",
                "json",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["dimension"] == 60
        assert payload["closed_form"] == 60


class TestBasis:
    def test_basis_emits_elements(self, tmp_path):
        out = tmp_path / "basis.json"
        code = cli.main(
            ["basis", "--kind", "ckt", "--s", "1", "--format", "json", "--out", str(out)]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload["elements"]) == 10


class TestBuildOp:
    def test_dv_round_trip(self, tmp_path):
        field = lie_to_ckv(dilation_element(3))
        symbol = tmp_path / "symbol.json"
        symbol.write_text(json.dumps(field.to_json_obj()))
        out = tmp_path / "op.json"
        code = cli.main(
            [
                "build-op",
                "--kind",
                "dv",
                "--w",
                "1/2",
                "--format",
                "json",
                "--out",
                str(out),
                str(symbol),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        rebuilt = DiffOp.from_json_obj(payload["operator"])
        assert rebuilt == canonical_DV(field, Fraction(1, 2))

    def test_builtin_operators_need_no_symbol(self, capsys):
        assert cli.main(["build-op", "--kind", "bilaplacian"]) == 0
        text = capsys.readouterr().out
        assert "d1^4" in text.replace(" ", "") or "d1" in text


class TestVerify:
    def test_single_suite_passes(self, tmp_path):
        out = tmp_path / "verify.json"
        code = cli.main(
            [
                "verify",
                "--suite",
                "ambient-identities",
                "--format",
                "json",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["ok"] is True
        assert all(row["ok"] for row in payload["checks"])

    def test_weight_override_reaches_suite(self, capsys):
        code = cli.main(
            ["verify", "--suite", "composition-identity", "--w", "1/7"]
        )
        assert code == 0
        assert "PASS" in capsys.readouterr().out

    def test_failing_check_yields_exit_one(self, capsys, monkeypatch):
        monkeypatch.setitem(
            cli.SUITES, "ambient-identities", lambda n, seed, weight: {"forced": False}
        )
        code = cli.main(["verify", "--suite", "ambient-identities"])
        assert code == 1
        assert "FAIL" in capsys.readouterr().out


class TestExitCodes:
    def test_bad_arguments_exit_two(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["dims", "--kind", "nonsense"])
        assert info.value.code == 2

    def test_missing_symbol_file_exit_three(self, capsys):
        code = cli.main(["build-op", "--kind", "dv", "/nonexistent/path.json"])
        assert code == 3

    def test_precondition_failure_exit_four(self, capsys):
        assert cli.main(["dims", "--kind", "ckt", "--n", "2"]) == 4

    def test_symbolless_tensor_kind_exit_four(self, capsys):
        assert cli.main(["build-op", "--kind", "dv"]) == 4
