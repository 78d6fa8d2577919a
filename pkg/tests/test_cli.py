"""Command-line contract: exit codes, schemas, reproducible bytes."""

import json

import pytest

from wargraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


class TestExitCodes:
    def test_success_is_zero(self, capsys):
        code, _, _ = run(capsys, "analyze", "--n", "2")
        assert code == 0

    def test_unknown_command_is_usage_error(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_unknown_flag_is_usage_error(self, capsys):
        assert run(capsys, "analyze", "--n", "2", "--bogus")[0] == 1

    def test_oversize_n_is_usage_error(self, capsys):
        code, _, err = run(capsys, "analyze", "--n", "99")
        assert code == 1
        assert "error" in err

    def test_invalid_probabilities_are_usage_errors(self, capsys):
        code, _, _ = run(capsys, "expected-length", "--n", "2", "--pl1", "1.5")
        assert code == 1
        code, _, _ = run(capsys, "expected-length", "--n", "2", "--pl1", "0")
        assert code == 1

    def test_failed_claim_is_exit_two(self, capsys):
        code, out, err = run(capsys, "analyze", "--n", "4", "--edges", "seat-left",
                             "--expect-absorbing")
        assert code == 2
        assert "claim failed" in err
        assert json.loads(out)["wandering"] == 16

    def test_satisfied_claim_is_exit_zero(self, capsys):
        code, out, _ = run(capsys, "analyze", "--n", "4", "--edges", "both",
                           "--expect-absorbing")
        assert code == 0
        assert json.loads(out)["wandering"] == 0


class TestAnalyzeReport:
    def test_schema(self, capsys):
        code, data, _ = run_json(capsys, "analyze", "--n", "4")
        assert code == 0
        assert data["n"] == 4
        assert data["rule"] == "standard"
        assert data["edge_filter"] == "both"
        assert data["total_states"] == 120
        assert data["attaining"] == 120
        assert data["wandering"] == 0
        assert data["audit"] == {"out_violations": 0, "in_violations": 0}
        assert data["elapsed_ms"] is None
        assert data["config"]["command"] == "analyze"

    def test_no_audit_flag(self, capsys):
        _, data, _ = run_json(capsys, "analyze", "--n", "4", "--no-audit")
        assert data["audit"] is None

    def test_timing_flag_fills_elapsed(self, capsys):
        _, data, _ = run_json(capsys, "analyze", "--n", "2", "--timing")
        assert isinstance(data["elapsed_ms"], float)


class TestReproducibility:
    def test_identical_argv_identical_bytes(self, capsys):
        _, first, _ = run(capsys, "analyze", "--n", "4")
        _, second, _ = run(capsys, "analyze", "--n", "4")
        assert first == second

    def test_mc_reports_are_thread_count_invariant(self, capsys):
        _, a, _ = run_json(capsys, "mc-classic", "--trials", "50", "--seed", "2",
                           "--threads", "1")
        _, b, _ = run_json(capsys, "mc-classic", "--trials", "50", "--seed", "2",
                           "--threads", "3")
        a.pop("config")
        b.pop("config")
        assert a == b


class TestExpectedLength:
    def test_two_card_mean_is_exactly_one(self, capsys):
        code, data, _ = run_json(capsys, "expected-length", "--n", "2")
        assert code == 0
        assert data["mean_equal_split"] == 1.0
        assert data["config"]["pL1"] == 0.5

    def test_methods_agree(self, capsys):
        _, dense, _ = run_json(capsys, "expected-length", "--n", "4", "--method", "dense")
        _, it, _ = run_json(capsys, "expected-length", "--n", "4", "--method", "iterative")
        assert dense["mean_equal_split"] == pytest.approx(it["mean_equal_split"], abs=1e-9)


class TestTailCurve:
    def test_csv_output(self, capsys):
        code, out, _ = run(capsys, "tail-curve", "--n", "4", "--ks", "0,5,10")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "k,p_alive"
        assert len(lines) == 4
        assert lines[1].split(",")[0] == "0"

    def test_json_output(self, capsys):
        code, data, _ = run_json(capsys, "tail-curve", "--n", "4", "--ks", "0-3",
                                 "--format", "json")
        assert code == 0
        assert [point[0] for point in data["points"]] == [0, 1, 2, 3]
        assert data["initial_distribution"] == "uniform-equal-split"


class TestDecayCert:
    def test_report_fields(self, capsys):
        code, data, _ = run_json(capsys, "decay-cert", "--n", "4")
        assert code == 0
        assert data["N"] == 6
        assert data["q"] == 0.5
        assert data["verified_up_to"] > 0


class TestCycleCommands:
    def test_find_then_verify_round_trip(self, capsys, tmp_path):
        code, data, _ = run_json(capsys, "find-cycle", "--n", "4",
                                 "--policy", "seat-left-first")
        assert code == 0
        assert data["count"] == 8
        cert_file = tmp_path / "cert.json"
        cert_file.write_text(json.dumps(data["certificates"][0]))
        code, verdict, _ = run_json(capsys, "verify-cycle", str(cert_file))
        assert code == 0
        assert verdict["ok"] is True

    def test_tampered_certificate_exits_two(self, capsys, tmp_path):
        _, data, _ = run_json(capsys, "find-cycle", "--n", "4",
                              "--policy", "seat-left-first")
        cert = data["certificates"][0]
        cert["period"] += 1
        cert_file = tmp_path / "bad.json"
        cert_file.write_text(json.dumps(cert))
        code, verdict, err = run_json(capsys, "verify-cycle", str(cert_file))
        assert code == 2
        assert verdict["ok"] is False
        assert "claim failed" in err

    def test_missing_certificate_file_is_usage_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "verify-cycle", str(tmp_path / "absent.json"))
        assert code == 1

    def test_two_outcome_counts(self, capsys):
        _, data, _ = run_json(capsys, "two-outcome", "--n", "4")
        assert data["count"] == 0
        _, data, _ = run_json(capsys, "two-outcome", "--n", "4", "--rule", "cyclic")
        assert data["count"] == 12


class TestClassicCommands:
    def test_simulate_classic_reproducible(self, capsys):
        _, a, _ = run_json(capsys, "simulate-classic", "--seed", "5")
        _, b, _ = run_json(capsys, "simulate-classic", "--seed", "5")
        assert a == b
        assert a["winner"] in ("left", "right")
        assert a["moves"] > 0

    def test_simulate_classic_explicit_deal(self, capsys):
        _, a, _ = run_json(capsys, "simulate-classic", "--seed", "5")
        code, again, _ = run_json(capsys, "simulate-classic", "--seed", "5",
                                  "--deal", a["deal"])
        assert code == 0
        assert again["moves"] == a["moves"]

    def test_mc_classic_summary(self, capsys):
        code, data, _ = run_json(capsys, "mc-classic", "--trials", "50", "--seed", "1")
        assert code == 0
        assert data["trials"] == 50
        assert data["truncations"] == 0
        assert data["mean_moves"] > 0


class TestVerifyDeal:
    def test_valid_model_deal(self, capsys):
        code, data, _ = run_json(capsys, "verify-deal", "--model", "L: 3 1 ; R: 2 4")
        assert code == 0
        assert data == {
            "valid": True,
            "kind": "model",
            "n": 4,
            "is_final": False,
            "deal": "L: 3 1 ; R: 2 4",
            "config": {"command": "verify-deal"},
        }

    def test_invalid_deal_is_claim_failure(self, capsys):
        code, data, _ = run_json(capsys, "verify-deal", "--model", "L: 1 1 ; R: 2 4")
        assert code == 2
        assert data["valid"] is False

    def test_both_flags_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "verify-deal", "--model", "L: 1 ; R: 2",
                         "--classic", "L: AH ; R: KH")
        assert code == 1

    def test_valid_classic_deal(self, capsys):
        _, sim, _ = run_json(capsys, "simulate-classic", "--seed", "3")
        code, data, _ = run_json(capsys, "verify-deal", "--classic", sim["deal"])
        assert code == 0
        assert data["valid"] is True
        assert data["kind"] == "classic"


class TestOutputFile:
    def test_report_written_to_path(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "analyze", "--n", "2", "--output", str(target))
        assert code == 0
        assert out == ""
        data = json.loads(target.read_text())
        assert data["n"] == 2
