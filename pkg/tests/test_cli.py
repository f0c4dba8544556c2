"""End-to-end tests for the command line interface."""

from fractions import Fraction

import pytest

from dfastat import (
    build_majority_dfa,
    dfa_from_text,
    eta_derived,
    isomorphic,
)
from dfastat.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMajDfaCommand:
    def test_prints_canonical_text(self, capsys):
        code, out, _ = run_cli(capsys, "maj-dfa", "--k", "2")
        assert code == 0
        assert out == (
            "states 2\n"
            "start 0\n"
            "accept 1\n"
            "trans 0 0 0\n"
            "trans 0 1 1\n"
            "trans 1 0 0\n"
            "trans 1 1 1\n"
        )

    @pytest.mark.parametrize("k", [1, 3, 7, 12])
    def test_output_round_trips(self, capsys, k):
        code, out, _ = run_cli(capsys, "maj-dfa", "--k", str(k))
        assert code == 0
        assert dfa_from_text(out) == build_majority_dfa(k)

    def test_writes_file(self, tmp_path, capsys):
        target = tmp_path / "m5.dfa"
        code, out, _ = run_cli(capsys, "maj-dfa", "--k", "5", "--out", str(target))
        assert code == 0
        assert dfa_from_text(target.read_text()) == build_majority_dfa(5)

    def test_rejects_bad_k(self, capsys):
        code, _, err = run_cli(capsys, "maj-dfa", "--k", "0")
        assert code == 2
        assert "error" in err


class TestLearnCommand:
    def test_emits_machine_and_stats(self, capsys):
        code, out, _ = run_cli(capsys, "learn", "--a", "1/2", "--k", "3")
        assert code == 0
        body, stats = out.rsplit("#", 1)
        assert isomorphic(dfa_from_text(body), build_majority_dfa(3))
        assert "states=3" in stats
        assert "equivalence_queries=" in stats
        assert "membership_queries=" in stats

    def test_learned_file_is_loadable_as_dfa_source(self, tmp_path, capsys):
        target = tmp_path / "learned.dfa"
        code, _, _ = run_cli(capsys, "learn", "--a", "1/3", "--k", "7", "--out", str(target))
        assert code == 0
        code, out, _ = run_cli(
            capsys, "analyze", "--dfa", str(target), "--process", "bernoulli:0.5"
        )
        assert code == 0
        assert "limiting acceptance" in out

    def test_decimal_threshold_string_parses_exactly(self, capsys):
        # "0.5" goes through Fraction, so no float ever reaches the learner
        code, out, _ = run_cli(capsys, "learn", "--a", "0.5", "--k", "3")
        assert code == 0
        assert "states=3" in out

    def test_junk_threshold_rejected(self, capsys):
        code, _, err = run_cli(capsys, "learn", "--a", "half", "--k", "3")
        assert code == 2
        assert "error" in err


class TestAnalyzeCommand:
    def test_text_report_for_absorbing_chain(self, capsys):
        code, out, _ = run_cli(
            capsys, "analyze", "--dfa", "example:degeneracy", "--process", "bernoulli:0.5"
        )
        assert code == 0
        assert "recurrent class 3: members [3] period 1 absorption 1 acceptance_mass 1" in out
        assert "limiting acceptance = 1 (plain limit)" in out

    def test_csv_report(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "analyze",
            "--dfa", "maj:2",
            "--process", "markov:0.2:0.4",
            "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "kind,class,members,period,absorption,acceptance_mass,value,is_true_limit"
        limit_row = lines[-1].split(",")
        assert limit_row[0] == "limit"
        assert float(limit_row[6]) == pytest.approx(1 / 3)
        assert limit_row[7] == "true"

    def test_periodic_chain_marked_as_average(self, tmp_path, capsys):
        swap = tmp_path / "swap.dfa"
        swap.write_text(
            "states 2\nstart 0\naccept 1\ntrans 0 0 1\ntrans 0 1 1\ntrans 1 0 0\ntrans 1 1 0\n"
        )
        code, out, _ = run_cli(
            capsys, "analyze", "--dfa", str(swap), "--process", "bernoulli:0.3"
        )
        assert code == 0
        assert "Cesaro average only" in out
        assert "limiting acceptance = 0.5" in out

    def test_dominant_process_is_unsupported(self, capsys):
        code, _, err = run_cli(
            capsys, "analyze", "--dfa", "maj:3", "--process", "dominant:1:0.1"
        )
        assert code == 3
        assert "no finite induced chain" in err

    def test_missing_dfa_file(self, capsys):
        code, _, err = run_cli(
            capsys, "analyze", "--dfa", "/nonexistent/x.dfa", "--process", "bernoulli:0.5"
        )
        assert code == 2
        assert "error" in err

    def test_malformed_dfa_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.dfa"
        bad.write_text("states 2\nstart 0\n")
        code, _, err = run_cli(
            capsys, "analyze", "--dfa", str(bad), "--process", "bernoulli:0.5"
        )
        assert code == 2


class TestCurveCommand:
    def test_rows_match_closed_form(self, capsys):
        code, out, _ = run_cli(capsys, "curve", "--dfa", "maj:4", "--theta", "0.05:0.95:19")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "theta,limiting_acceptance"
        assert len(lines) == 20
        for line in lines[1:]:
            theta_s, value_s = line.split(",")
            theta = float(theta_s)
            assert float(value_s) == pytest.approx(
                1 - float(eta_derived(4, theta)), abs=1e-10
            )

    def test_learned_machine_as_source(self, capsys):
        code, out, _ = run_cli(capsys, "curve", "--dfa", "learn:1/3:5", "--theta", "0.2:0.5:4")
        assert code == 0
        assert len(out.strip().splitlines()) == 5

    @pytest.mark.parametrize(
        "grid", ["0.9:0.1:5", "0.1:0.9:1", "0:0.9:5", "0.1:1:5", "junk"]
    )
    def test_bad_grids_rejected(self, capsys, grid):
        code, _, err = run_cli(capsys, "curve", "--dfa", "maj:3", "--theta", grid)
        assert code == 2
        assert "error" in err

    def test_csv_file_uses_lf_endings(self, tmp_path, capsys):
        target = tmp_path / "curve.csv"
        code, _, _ = run_cli(
            capsys, "curve", "--dfa", "maj:3", "--theta", "0.2:0.8:3", "--out", str(target)
        )
        assert code == 0
        raw = target.read_bytes()
        assert b"\r" not in raw
        assert raw.decode().startswith("theta,limiting_acceptance\n")


class TestRefuteCommand:
    def test_threshold_certificate(self, capsys):
        code, out, _ = run_cli(
            capsys, "refute", "--dfa", "maj:4", "--a", "1/2", "--thetas", "0.25,0.75"
        )
        assert code == 0
        assert "epsilon_star = 0.1" in out
        assert "clause (b)" in out

    def test_table_certificate(self, capsys):
        code, out, _ = run_cli(
            capsys, "refute", "--dfa", "example:degeneracy", "--table", "0.3=0,0.7=1"
        )
        assert code == 0
        assert "clause (a)" in out
        assert "epsilon_star = 1" in out

    def test_requires_exactly_one_functional(self, capsys):
        code, _, err = run_cli(capsys, "refute", "--dfa", "maj:4")
        assert code == 2
        code, _, err = run_cli(
            capsys, "refute", "--dfa", "maj:4", "--a", "1/2", "--table", "0.3=0,0.7=1"
        )
        assert code == 2

    def test_trivial_table_rejected(self, capsys):
        code, _, err = run_cli(
            capsys, "refute", "--dfa", "maj:4", "--table", "0.3=1,0.7=1"
        )
        assert code == 2


class TestSimulateCommand:
    def test_checkpoint_csv(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "simulate",
            "--dfa", "maj:3",
            "--process", "bernoulli:0.6",
            "--n", "64",
            "--trials", "50",
            "--seed", "5",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "checkpoint_n,acceptance,stderr"
        assert [int(l.split(",")[0]) for l in lines[1:]] == [4, 8, 16, 32, 64]

    def test_deterministic_given_seed(self, capsys):
        args = (
            "simulate", "--dfa", "maj:5", "--process", "markov:0.3:0.2",
            "--n", "32", "--trials", "40", "--seed", "11",
        )
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_seed_env_variable_is_the_default(self, capsys, monkeypatch):
        monkeypatch.setenv("DFASTAT_SEED", "123")
        args = ("simulate", "--dfa", "maj:3", "--process", "bernoulli:0.5",
                "--n", "16", "--trials", "25")
        _, from_env, _ = run_cli(capsys, *args)
        _, explicit, _ = run_cli(capsys, *args, "--seed", "123")
        assert from_env == explicit
        _, other, _ = run_cli(capsys, *args, "--seed", "124")
        assert from_env != other

    def test_dominant_process_is_simulable(self, capsys):
        # no induced chain exists, but sampling is fine
        code, out, _ = run_cli(
            capsys,
            "simulate",
            "--dfa", "example:dominance",
            "--process", "dominant:1:0.2",
            "--n", "128",
            "--trials", "200",
            "--seed", "7",
        )
        assert code == 0
        final = float(out.strip().splitlines()[-1].split(",")[1])
        assert final > 0.95


class TestEtaCommand:
    def test_single_line_summary(self, capsys):
        code, out, _ = run_cli(capsys, "eta", "--k", "4", "--theta", "3/4")
        assert code == 0
        assert out == "k=4 theta=0.75 derived=0.1 printed=0.9 bound=0.125 numeric=0.1\n"

    def test_undefined_fields_print_na(self, capsys):
        code, out, _ = run_cli(capsys, "eta", "--k", "3", "--theta", "0.5")
        assert code == 0
        assert "printed=n/a" in out
        assert "bound=n/a" in out

    def test_report_file(self, tmp_path, capsys):
        target = tmp_path / "report.csv"
        code, _, _ = run_cli(capsys, "eta", "--report", str(target))
        assert code == 0
        lines = target.read_text().strip().splitlines()
        assert len(lines) == 217
        assert lines[0].startswith("k,theta,")

    def test_bad_theta_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "eta", "--k", "4", "--theta", "7/0")
        assert code == 2
        assert "error" in err


class TestParserBehavior:
    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_no_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
