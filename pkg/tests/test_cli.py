import json

import pytest

from waring.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestRank:
    def test_text_output(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "x^2*y")
        assert code == 0
        assert out.strip() == "rank = 3 (degenerate; border rank 2; apolar f = y^2)"

    def test_generic_text(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "x^3 + y^3")
        assert code == 0
        assert out.strip() == "rank = 2 (generic; border rank 2; apolar f = x*y)"

    def test_middle_text(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "x^2*y^2")
        assert out.strip() == "rank = 3 (middle; border rank 3)"

    def test_zero_form(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "0*x^3")
        assert code == 0
        assert out.strip() == "rank = 0 (zero; border rank 0)"

    def test_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "json", "rank", "x^2*y")
        payload = json.loads(out)
        assert payload["rank"] == 3
        assert payload["border_rank"] == 2
        assert payload["case"] == "degenerate"
        assert payload["coefficients"] == ["0", "1", "0", "0"]
        assert payload["apolar"]["coefficients"] == ["0", "0", "1"]

    def test_json_round_trip(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "rank", "x^2*y", "--format", "json")
        path = tmp_path / "form.json"
        path.write_text(out)
        code2, out2, _ = run_cli(capsys, "rank", "--json", str(path), "--format", "json")
        assert code2 == 0
        assert out2 == out

    def test_expr_and_json_conflict(self, capsys):
        code, _, err = run_cli(capsys, "rank")
        assert code == 1
        assert "error" in err

    def test_degree_assertion(self, capsys):
        code, _, err = run_cli(capsys, "--degree", "4", "rank", "x^2*y")
        assert code == 2
        code, out, _ = run_cli(capsys, "rank", "x^2*y", "--degree", "3")
        assert code == 0

    def test_parse_error_exit(self, capsys):
        code, _, err = run_cli(capsys, "rank", "x^^2")
        assert code == 1

    def test_non_homogeneous_exit(self, capsys):
        code, _, err = run_cli(capsys, "rank", "x^2 + y^3")
        assert code == 2


class TestClassify:
    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "x^2*y")
        lines = out.strip().splitlines()
        assert lines[0] == "rank = 3 (degenerate; border rank 2; apolar f = y^2)"
        assert lines[1] == "stratum = S_{3,3}"
        assert lines[2] == "closure ranks = {1, 2, 3}"

    def test_zero_rejected(self, capsys):
        code, _, err = run_cli(capsys, "classify", "0*x^2")
        assert code == 2

    def test_json(self, capsys):
        _, out, _ = run_cli(capsys, "--format", "json", "classify", "x^5 + y^5")
        payload = json.loads(out)
        assert payload["stratum"] == "S_{5,2}"
        assert payload["closure_ranks"] == [1, 2, 5]


class TestClosure:
    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "closure", "--degree", "5", "--rank", "2")
        assert code == 0
        assert out.strip() == "{1, 2, 5}"

    def test_json(self, capsys):
        _, out, _ = run_cli(capsys, "--format", "json", "closure", "--degree", "4", "--rank", "3")
        assert json.loads(out)["closure_ranks"] == [1, 2, 3, 4]

    def test_out_of_range(self, capsys):
        code, _, _ = run_cli(capsys, "closure", "--degree", "4", "--rank", "5")
        assert code == 2


class TestDecompose:
    def test_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "decompose", "x^3 + y^3", "--precision", "256", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["rank"] == 2
        assert len(payload["terms"]) == 2
        assert float(payload["residual"]) < 1e-40
        assert payload["precision_bits"] == 256

    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "decompose", "x^2*y", "--seed", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("rank = 3; method = sampled; precision = 256 bits")
        assert len(lines) == 4

    def test_zero_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "decompose", "0*x^3")
        assert code == 2

    def test_determinism(self, capsys):
        _, out1, _ = run_cli(capsys, "decompose", "x^2*y", "--seed", "7", "--format", "json")
        _, out2, _ = run_cli(capsys, "decompose", "x^2*y", "--seed", "7", "--format", "json")
        assert out1 == out2


class TestSample:
    def test_generic(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "json", "sample", "--generic", "6", "3", "--seed", "2")
        payload = json.loads(out)
        assert payload["rank"] == 3
        assert payload["degree"] == 6
        assert payload["kind"] == "generic"

    def test_degenerate(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "json", "sample", "--degenerate", "7", "2", "--seed", "1")
        payload = json.loads(out)
        assert payload["rank"] == 6
        assert payload["border_rank"] == 3

    def test_determinism(self, capsys):
        _, out1, _ = run_cli(capsys, "sample", "--generic", "8", "4", "--seed", "5")
        _, out2, _ = run_cli(capsys, "sample", "--generic", "8", "4", "--seed", "5")
        assert out1 == out2

    def test_expr_reparses(self, capsys):
        from waring import form_from_coeffs, parse_form

        _, out, _ = run_cli(capsys, "--format", "json", "sample", "--generic", "5", "2", "--seed", "3")
        payload = json.loads(out)
        q = parse_form(payload["expr"])
        assert q == form_from_coeffs(
            payload["degree"], payload["coefficients"]
        )


class TestFit:
    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "fit", "x^3 + y^3", "--r", "2", "--seed", "0")
        assert code == 0
        assert out.startswith("r = 2; best residual = ")

    def test_missing_r(self, capsys):
        code, _, _ = run_cli(capsys, "fit", "x^3 + y^3")
        assert code == 1

    def test_json(self, capsys):
        _, out, _ = run_cli(
            capsys, "--format", "json", "fit", "x^2*y", "--r", "3", "--restarts", "16", "--seed", "1"
        )
        payload = json.loads(out)
        assert payload["r"] == 3
        assert float(payload["best_residual"]) < 1e-9
        assert len(payload["parameters"]) == 6


class TestBatch:
    def test_matches_single_invocations(self, capsys, tmp_path):
        records = [
            {"command": "rank", "expr": "x^2*y"},
            {"command": "closure", "degree": 5, "rank": 2},
            {"command": "decompose", "expr": "x^3 + y^3", "precision": 128, "seed": 2},
            {"command": "fit", "expr": "x^2*y", "r": 3, "restarts": 8, "seed": 1},
        ]
        path = tmp_path / "batch.json"
        path.write_text(json.dumps(records))
        code, out, _ = run_cli(capsys, "batch", str(path))
        assert code == 0
        results = json.loads(out)
        assert len(results) == 4

        _, single, _ = run_cli(capsys, "--format", "json", "rank", "x^2*y")
        assert results[0] == json.loads(single)
        _, single, _ = run_cli(capsys, "--format", "json", "closure", "--degree", "5", "--rank", "2")
        assert results[1] == json.loads(single)
        _, single, _ = run_cli(
            capsys, "--format", "json", "decompose", "x^3 + y^3", "--precision", "128", "--seed", "2"
        )
        assert results[2] == json.loads(single)
        _, single, _ = run_cli(
            capsys, "--format", "json", "fit", "x^2*y", "--r", "3", "--restarts", "8", "--seed", "1"
        )
        assert results[3] == json.loads(single)

    def test_errors_reported_per_record(self, capsys, tmp_path):
        records = [
            {"command": "rank", "expr": "x^2 + y^3"},
            {"command": "rank", "expr": "x^2*y"},
        ]
        path = tmp_path / "batch.json"
        path.write_text(json.dumps(records))
        code, out, _ = run_cli(capsys, "batch", str(path))
        assert code == 2
        results = json.loads(out)
        assert "error" in results[0]
        assert results[0]["error"]["exit_code"] == 2
        assert results[1]["rank"] == 3

    def test_order_preserved(self, capsys, tmp_path):
        records = [{"command": "closure", "degree": d, "rank": 1} for d in range(2, 8)]
        path = tmp_path / "batch.json"
        path.write_text(json.dumps(records))
        _, out, _ = run_cli(capsys, "batch", str(path))
        results = json.loads(out)
        assert [r["degree"] for r in results] == list(range(2, 8))

    def test_bad_file(self, capsys):
        code, _, _ = run_cli(capsys, "batch", "/nonexistent/path.json")
        assert code == 1
