import json

import pytest

from digitwitness import cli
from digitwitness.intpoly import IntPolynomial

WITNESS_KEYS = [
    "schema", "n", "k", "m0", "m1", "m2", "m3", "u", "M", "sq", "residue", "e",
]


def run(argv):
    return cli.main(argv)


def run_lines(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, [line for line in out.splitlines() if line]


class TestParsePoly:
    def test_monomial_shorthand(self):
        assert cli.parse_poly("x^3") == IntPolynomial.monomial(3)
        assert cli.parse_poly("x") == IntPolynomial.monomial(1)

    def test_coefficient_list_high_to_low(self):
        assert cli.parse_poly("1,0,-2,0") == IntPolynomial.from_coeffs([0, -2, 0, 1])

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            cli.parse_poly("x**3")
        with pytest.raises(ValueError):
            cli.parse_poly("3x+1")


class TestConstruct:
    def test_emits_requested_count_with_schema(self, capsys):
        code, lines = run_lines(
            capsys,
            ["construct", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--limit", "10"],
        )
        assert code == 0
        assert len(lines) == 10
        for line in lines:
            record = json.loads(line)
            assert list(record) == WITNESS_KEYS
            assert record["schema"] == "witness/1"
            assert record["residue"] == 1
            assert isinstance(record["n"], str) and record["n"].isdigit()

    def test_csv_format(self, capsys):
        code, lines = run_lines(
            capsys,
            ["construct", "--q", "2", "--m", "3", "--g", "0", "--poly", "x^3",
             "--limit", "2", "--format", "csv"],
        )
        assert code == 0
        assert lines[0] == "n,k,m0,m1,m2,m3,u,M,sq,residue,e"
        assert len(lines) == 3

    def test_shifted_polynomial_records_e(self, capsys):
        code, lines = run_lines(
            capsys,
            ["construct", "--q", "10", "--m", "7", "--g", "0", "--poly", "1,0,-2,0",
             "--limit", "5"],
        )
        assert code == 0
        assert len(lines) == 5
        assert all(json.loads(line)["e"] == 2 for line in lines)

    def test_missing_required_flag_is_usage_error(self, capsys):
        code = run(["construct", "--q", "2", "--g", "1", "--poly", "x^3"])
        capsys.readouterr()
        assert code == 2

    def test_gcd_violation_is_config_error(self, capsys):
        code = run(
            ["construct", "--q", "10", "--m", "3", "--g", "0", "--poly", "x^3",
             "--limit", "1"]
        )
        err = capsys.readouterr().err
        assert code == 2 and "coprime" in err

    def test_scale_below_minimum_is_config_error(self, capsys):
        code = run(
            ["construct", "--q", "2", "--m", "3", "--g", "0", "--poly", "x^3",
             "--limit", "1", "--u", "14"]
        )
        err = capsys.readouterr().err
        assert code == 2 and "minimum scale" in err

    def test_deterministic_output(self, tmp_path):
        args = ["construct", "--q", "2", "--m", "3", "--g", "2", "--poly", "x^3",
                "--limit", "25"]
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_workers_preserve_output(self, tmp_path):
        args = ["construct", "--q", "2", "--m", "3", "--g", "2", "--poly", "x^3",
                "--limit", "30"]
        serial, parallel = tmp_path / "s.jsonl", tmp_path / "p.jsonl"
        assert run(args + ["--out", str(serial)]) == 0
        assert run(args + ["--out", str(parallel), "--workers", "3"]) == 0
        assert serial.read_bytes() == parallel.read_bytes()


class TestVerify:
    def construct_file(self, tmp_path, fmt="json", limit=8):
        path = tmp_path / f"witnesses.{fmt}"
        code = run(
            ["construct", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--limit", str(limit), "--format", fmt, "--out", str(path)]
        )
        assert code == 0
        return path

    def test_round_trip_passes(self, tmp_path, capsys):
        path = self.construct_file(tmp_path)
        code, lines = run_lines(
            capsys,
            ["verify", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--in", str(path)],
        )
        assert code == 0
        summary = json.loads(lines[-1])
        assert summary["schema"] == "verify-summary/1" and summary["ok"]

    def test_csv_round_trip(self, tmp_path, capsys):
        path = self.construct_file(tmp_path, fmt="csv")
        code, _ = run_lines(
            capsys,
            ["verify", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--in", str(path)],
        )
        assert code == 0

    def test_corrupted_value_fails(self, tmp_path, capsys):
        path = self.construct_file(tmp_path)
        lines = path.read_text().splitlines()
        record = json.loads(lines[4])
        record["n"] = str(int(record["n"]) + 1)
        lines[4] = json.dumps(record, separators=(",", ":"))
        path.write_text("\n".join(lines) + "\n")
        code, out_lines = run_lines(
            capsys,
            ["verify", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--in", str(path)],
        )
        assert code == 1
        failing = [json.loads(l) for l in out_lines if not json.loads(l)["ok"]]
        assert any(row.get("index") == 4 for row in failing)

    def test_malformed_row_reports_line_number(self, tmp_path, capsys):
        path = self.construct_file(tmp_path, limit=3)
        lines = path.read_text().splitlines()
        lines[1] = '{"schema":"witness/1","n":"not a number"}'
        path.write_text("\n".join(lines) + "\n")
        code, out_lines = run_lines(
            capsys,
            ["verify", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--in", str(path)],
        )
        assert code == 1
        malformed = [json.loads(l) for l in out_lines if json.loads(l).get("line")]
        assert malformed and malformed[0]["line"] == 2

    def test_empty_file_passes(self, tmp_path, capsys):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        code, out_lines = run_lines(
            capsys,
            ["verify", "--q", "2", "--m", "3", "--g", "1", "--poly", "x^3",
             "--in", str(path)],
        )
        assert code == 0
        assert json.loads(out_lines[-1])["detail"] == "total=0 failed=0 malformed=0"

    def test_wrong_target_residue_fails(self, tmp_path, capsys):
        path = self.construct_file(tmp_path, limit=2)
        code, _ = run_lines(
            capsys,
            ["verify", "--q", "2", "--m", "3", "--g", "2", "--poly", "x^3",
             "--in", str(path)],
        )
        assert code == 1


class TestCertify:
    def test_at_n0(self, capsys):
        code, lines = run_lines(
            capsys, ["certify", "--q", "2", "--m", "3", "--h", "3", "--N-at", "N0"]
        )
        assert code == 0
        record = json.loads(lines[0])
        assert record["schema"] == "bounds/1"
        assert record["u0"] == 15 and record["u"] == 15
        assert record["N0"] == str(2**27 * 41472**10)
        assert record["verdict"] is True

    def test_expression_with_scale_step(self, capsys):
        code, lines = run_lines(
            capsys,
            ["certify", "--q", "2", "--m", "3", "--h", "3", "--N-at",
             "N0*q^(3h+1)"],
        )
        assert code == 0
        assert json.loads(lines[0])["u"] == 16

    def test_explicit_decimal_n(self, capsys):
        n0 = 2**27 * 41472**10
        code, lines = run_lines(
            capsys, ["certify", "--q", "2", "--m", "3", "--h", "3", "--N", str(n0)]
        )
        assert code == 0 and json.loads(lines[0])["verdict"] is True

    def test_monomial_poly_accepted(self, capsys):
        code, lines = run_lines(
            capsys,
            ["certify", "--q", "2", "--m", "3", "--poly", "x^3", "--N-at", "N0"],
        )
        assert code == 0 and json.loads(lines[0])["h"] == 3

    def test_general_poly_rejected(self, capsys):
        code = run(
            ["certify", "--q", "2", "--m", "3", "--poly", "1,0,-2,0", "--N-at", "N0"]
        )
        err = capsys.readouterr().err
        assert code == 2 and "monomial" in err

    def test_n_below_n0_rejected(self, capsys):
        code = run(["certify", "--q", "2", "--m", "3", "--h", "3", "--N-at", "N0-1"])
        err = capsys.readouterr().err
        assert code == 2 and "below N0" in err

    def test_csv_format(self, capsys):
        code, lines = run_lines(
            capsys,
            ["certify", "--q", "2", "--m", "3", "--h", "3", "--N-at", "N0",
             "--format", "csv"],
        )
        assert code == 0
        assert lines[0].startswith("q,m,h,u0,N0,")


class TestDensity:
    def test_degenerate_table(self, capsys):
        code, lines = run_lines(
            capsys,
            ["density", "--q", "2", "--m", "3", "--poly", "x^2", "--N", "1"],
        )
        # one tally: far from the 1/3 prediction, so the tolerance gate fails
        assert code == 1
        rows = [json.loads(l) for l in lines]
        assert [r["count"] for r in rows] == [1, 0, 0]

    def test_exact_parity_split_passes(self, capsys):
        code, lines = run_lines(
            capsys,
            ["density", "--q", "3", "--m", "2", "--poly", "x^2", "--N", "100"],
        )
        assert code == 0
        rows = [json.loads(l) for l in lines]
        assert all(r["within_tolerance"] for r in rows)
        assert rows[0]["prediction"] == "1/2"

    def test_workers_identical_output(self, tmp_path):
        args = ["density", "--q", "2", "--m", "3", "--poly", "x^3", "--N", "20000"]
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(args + ["--out", str(a)])
        run(args + ["--workers", "8", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_nonpositive_n(self, capsys):
        code = run(["density", "--q", "2", "--m", "3", "--poly", "x^2", "--N", "0"])
        capsys.readouterr()
        assert code == 2


class TestLemma:
    def test_random_mode_requires_seed(self, capsys):
        code = run(
            ["lemma", "--q", "2", "--l", "3", "--u", "15", "--mode", "random",
             "--count", "5"]
        )
        err = capsys.readouterr().err
        assert code == 2 and "--seed" in err

    def test_random_mode_all_pass(self, capsys):
        code, lines = run_lines(
            capsys,
            ["lemma", "--q", "2", "--l", "3", "--u", "15", "--mode", "random",
             "--count", "20", "--seed", "42"],
        )
        assert code == 0
        summary = json.loads(lines[-1])
        assert summary["total"] == 20 and summary["failed"] == 0

    def test_random_mode_is_reproducible(self, tmp_path):
        args = ["lemma", "--q", "2", "--l", "3", "--u", "15", "--mode", "random",
                "--count", "10", "--seed", "7"]
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_exhaustive_truncated_box(self, capsys):
        code, lines = run_lines(
            capsys,
            ["lemma", "--q", "2", "--l", "3", "--u", "15", "--mode", "exhaustive",
             "--max-per-range", "4"],
        )
        assert code == 0
        summary = json.loads(lines[-1])
        assert summary["total"] == 4**3 * 3  # m1 range holds only 3 values

    def test_unbounded_exhaustive_run_is_refused(self, capsys):
        code = run(["lemma", "--q", "2", "--l", "3", "--u", "15", "--mode",
                    "exhaustive"])
        err = capsys.readouterr().err
        assert code == 2 and "--max-per-range" in err


def test_unknown_command_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    capsys.readouterr()
