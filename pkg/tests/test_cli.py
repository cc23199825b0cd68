"""命令行测试"""

import asyncio
import csv
import io
import logging
import math

import pytest

from main import CoverageCli
from utils.approximations import interference_validity, noise_validity
from utils.constants import (
    EXIT_ARGUMENT_ERROR, EXIT_IO_ERROR, EXIT_MATH_ERROR, EXIT_OK,
)
from utils.models import CoverageConfig

SWEEP_HEADER = (
    "snr_db,sigma2,A,B,pc_oracle,pc_limiting,pc_interference,pc_noise,pc_laplace,"
    "err_limiting,err_interference,err_noise,err_laplace"
)


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    cli = CoverageCli(config=CoverageConfig(), out=out, err=err)
    code = asyncio.run(cli.run(list(argv)))
    return code, out.getvalue(), err.getvalue()


def parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [[float(cell) for cell in row] for row in reader]
    return header, rows


def column(header, rows, name):
    index = header.index(name)
    return [row[index] for row in rows]


class TestEval:

    def test_alpha2_exact(self):
        code, out, _ = run_cli("eval", "--A", "1", "--B", "1", "--alpha", "2", "--method", "exact")
        assert code == EXIT_OK
        assert "I = 0.5" in out

    def test_interference_limited_exact(self):
        code, out, _ = run_cli("eval", "--A", "1", "--B", "0", "--alpha", "3.7", "--method", "exact")
        assert code == EXIT_OK
        assert "I = 1\n" in out

    def test_all_methods_report_unavailable_ones(self):
        code, out, _ = run_cli("eval", "--A", "1", "--B", "1", "--alpha", "3")
        assert code == EXIT_OK
        for name in ("[exact]", "[limiting]", "[interference_series]", "[noise_series]", "[laplace]"):
            assert name in out
        assert "不可用" in out
        assert "请求 4" in out

    def test_network_parameters(self):
        code, out, _ = run_cli("eval", "--alpha", "4", "--sigma2", "0.001", "--method", "laplace")
        assert code == EXIT_OK
        assert "β = 1.78539816" in out
        assert "p_c = " in out

    def test_single_unsupported_method_is_math_error(self):
        code, _, err = run_cli("eval", "--A", "1", "--B", "1", "--alpha", "3", "--method", "exact")
        assert code == EXIT_MATH_ERROR
        assert err.startswith("错误: ")

    def test_degenerate_input(self):
        code, _, _ = run_cli("eval", "--A", "0", "--B", "0", "--alpha", "3")
        assert code == EXIT_MATH_ERROR

    def test_incomplete_parameters(self):
        code, _, _ = run_cli("eval", "--A", "1", "--B", "1")
        assert code == EXIT_ARGUMENT_ERROR

    def test_unknown_method(self):
        code, _, _ = run_cli("eval", "--A", "1", "--B", "1", "--alpha", "3", "--method", "bogus")
        assert code == EXIT_ARGUMENT_ERROR


class TestArgumentParsing:

    def test_missing_command(self):
        code, _, _ = run_cli()
        assert code == EXIT_ARGUMENT_ERROR

    def test_bad_number(self):
        code, _, _ = run_cli("eval", "--A", "one")
        assert code == EXIT_ARGUMENT_ERROR

    @pytest.mark.parametrize("argv", [
        ("eval", "--A", "1", "--B", "1", "--alpha", "7"),
        ("eval", "--sigma2", "0.01", "--alpha", "1.5"),
        ("sweep", "--alpha", "7"),
        ("validity", "--alpha", "7"),
        ("convergence", "--A", "1", "--B", "1", "--alpha", "6.6"),
        ("max-error", "--alphas", "3,7"),
    ])
    def test_alpha_out_of_range(self, argv):
        code, _, err = run_cli(*argv)
        assert code == EXIT_ARGUMENT_ERROR
        assert "α" in err or "alpha" in err

    def test_help(self, capsys):
        code, _, _ = run_cli("sweep", "--help")
        assert code == EXIT_OK
        assert "--snr-start" in capsys.readouterr().out


class TestSweep:

    def test_header_and_rows(self):
        code, out, _ = run_cli("sweep", "--alpha", "3", "--snr-start", "0", "--snr-stop", "20", "--snr-step", "10")
        assert code == EXIT_OK
        assert out.splitlines()[0] == SWEEP_HEADER
        header, rows = parse_csv(out)
        assert column(header, rows, "snr_db") == [0.0, 10.0, 20.0]
        assert column(header, rows, "sigma2") == pytest.approx([1.0, 0.1, 0.01])

    def test_single_point(self):
        code, out, _ = run_cli("sweep", "--alpha", "3", "--snr-start", "10", "--snr-stop", "10")
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        assert len(rows) == 1

    def test_deterministic(self):
        argv = ("sweep", "--alpha", "3.5", "--snr-start", "-10", "--snr-stop", "30", "--snr-step", "5")
        assert run_cli(*argv)[1] == run_cli(*argv)[1]

    def test_method_selection(self):
        code, out, _ = run_cli("sweep", "--alpha", "3", "--snr-start", "0", "--snr-stop", "0",
                               "--methods", "laplace,limiting")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "snr_db,sigma2,A,B,pc_oracle,pc_limiting,pc_laplace,err_limiting,err_laplace"

    def test_laplace_accuracy_over_default_grid(self):
        code, out, _ = run_cli("sweep", "--alpha", "3", "--methods", "laplace")
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert len(rows) == 161
        assert max(column(header, rows, "err_laplace")) < 0.005

    def test_laplace_exact_at_alpha4(self):
        code, out, _ = run_cli("sweep", "--alpha", "4", "--methods", "laplace", "--snr-step", "5")
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert max(column(header, rows, "err_laplace")) < 1e-9

    def test_series_accurate_in_their_regimes(self):
        code, out, _ = run_cli("sweep", "--alpha", "3", "--methods", "interference,noise", "--snr-step", "40")
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert column(header, rows, "err_noise")[0] < 1e-9
        assert column(header, rows, "err_interference")[-1] < 1e-9

    def test_high_snr_plateau(self):
        code, out, _ = run_cli("sweep", "--alpha", "3", "--methods", "limiting", "--snr-start", "140")
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        plateau = column(header, rows, "pc_oracle")[0]
        # 1/β，β = 1 + 2∫_0^1 dv/(1+v³)
        beta = 1.0 + 2.0 * (math.log(2.0) / 3.0 + math.pi / (3.0 * math.sqrt(3.0)))
        assert plateau == pytest.approx(1.0 / beta, rel=1e-5)

    def test_writes_file(self, tmp_path):
        target = tmp_path / "results" / "sweep.csv"
        code, out, _ = run_cli("sweep", "--alpha", "3", "--snr-start", "0", "--snr-stop", "10",
                               "--snr-step", "5", "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        header, rows = parse_csv(target.read_text(encoding="utf-8"))
        assert len(rows) == 3

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code, _, _ = run_cli("sweep", "--alpha", "3", "--snr-start", "0", "--snr-stop", "0",
                             "--out", str(blocker / "sweep.csv"))
        assert code == EXIT_IO_ERROR

    @pytest.mark.parametrize("argv", [
        ("--alpha", "3", "--snr-start", "10", "--snr-stop", "0"),
        ("--alpha", "3", "--terms", "31"),
        ("--alpha", "7"),
        ("--alpha", "3", "--methods", "magic"),
        ("--snr-start", "0"),
    ])
    def test_invalid_configuration(self, argv):
        code, _, _ = run_cli("sweep", *argv)
        assert code == EXIT_ARGUMENT_ERROR

    def test_logs_validity_thresholds(self, caplog):
        argv = ("sweep", "--alpha", "3", "--snr-start", "0", "--snr-stop", "0")
        with caplog.at_level(logging.INFO):
            assert run_cli(*argv, "--epsilon", "1e-3")[0] == EXIT_OK
            assert run_cli(*argv, "--epsilon", "1e-6")[0] == EXIT_OK
        messages = [record.getMessage() for record in caplog.records if "有效区域" in record.getMessage()]
        assert len(messages) == 4
        assert messages[0].startswith("[interference] 有效区域 ε=0.001, n=4")
        assert messages[1].startswith("[noise] 有效区域 ε=0.001, n=4")
        assert messages[2].startswith("[interference] 有效区域 ε=1e-06, n=4")
        assert messages[0].split(":", 1)[1] != messages[2].split(":", 1)[1]

    def test_alpha2_requires_beta(self):
        code, _, _ = run_cli("sweep", "--alpha", "2", "--snr-start", "0", "--snr-stop", "0")
        assert code == EXIT_MATH_ERROR
        code, out, _ = run_cli("sweep", "--alpha", "2", "--beta", "2", "--snr-start", "0", "--snr-stop", "0")
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert column(header, rows, "err_limiting")[0] < 1e-12


class TestMaxError:

    def test_table(self):
        code, out, _ = run_cli("max-error", "--alphas", "3,4", "--snr-step", "5")
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["alpha", "max_err_limiting", "max_err_laplace"]
        assert column(header, rows, "alpha") == [3.0, 4.0]
        assert rows[1][2] < 1e-9
        assert rows[0][1] > rows[0][2]

    def test_errors_shrink_with_threshold(self):
        _, low, _ = run_cli("max-error", "--alphas", "3,5", "--T-db", "0")
        _, high, _ = run_cli("max-error", "--alphas", "3,5", "--T-db", "10")
        _, low_rows = parse_csv(low)
        _, high_rows = parse_csv(high)
        for low_row, high_row in zip(low_rows, high_rows):
            assert high_row[1] < low_row[1]
            assert high_row[2] < low_row[2]

    def test_bad_alpha_list(self):
        code, _, _ = run_cli("max-error", "--alphas", "3,x")
        assert code == EXIT_ARGUMENT_ERROR


class TestValidity:

    def test_report(self):
        code, out, _ = run_cli("validity", "--alpha", "3", "--epsilon", "1e-3", "--terms", "4")
        assert code == EXIT_OK
        assert "[interference]" in out
        assert "[noise]" in out
        assert out.count("σ² 阈值") == 2

    def test_alpha2_without_beta(self):
        code, _, _ = run_cli("validity", "--alpha", "2")
        assert code == EXIT_MATH_ERROR

    def test_missing_alpha(self):
        code, _, _ = run_cli("validity")
        assert code == EXIT_ARGUMENT_ERROR


class TestConvergence:

    def test_report(self):
        code, out, _ = run_cli("convergence", "--A", "1", "--B", "1", "--alpha", "3", "--ratio-terms", "20")
        assert code == EXIT_OK
        assert "[interference] 结论: diverges" in out
        assert "[noise] 结论: converges" in out
        assert "最优截断项数: 0" in out
        assert "前 10 项比值" in out
        assert "后 5 项比值" in out

    def test_too_few_terms(self):
        code, _, _ = run_cli("convergence", "--A", "1", "--B", "1", "--alpha", "3", "--ratio-terms", "1")
        assert code == EXIT_MATH_ERROR


class TestSweepProperties:

    def test_pc_oracle_in_unit_interval_and_monotone(self):
        _, out, _ = run_cli("sweep", "--alpha", "3", "--methods", "limiting", "--snr-step", "4")
        header, rows = parse_csv(out)
        pcs = column(header, rows, "pc_oracle")
        assert all(0.0 <= pc <= 1.0 for pc in pcs)
        assert all(hi >= lo - 1e-15 for lo, hi in zip(pcs, pcs[1:]))

    def test_matches_eval(self):
        _, csv_text, _ = run_cli("sweep", "--alpha", "3", "--methods", "laplace",
                                 "--snr-start", "10", "--snr-stop", "10")
        _, report, _ = run_cli("eval", "--alpha", "3", "--sigma2", "0.1", "--method", "laplace")
        cells = next(csv.DictReader(io.StringIO(csv_text)))
        assert f"  p_c = {cells['pc_laplace']}\n" in report
        assert f"参考覆盖概率: p_c = {cells['pc_oracle']}\n" in report

    def test_series_within_validity_regions(self, section3_network):
        epsilon = 1e-3
        interference = interference_validity(epsilon, 4, section3_network)
        noise = noise_validity(epsilon, 4, section3_network)
        _, out, _ = run_cli("sweep", "--alpha", "3", "--methods", "interference,noise", "--snr-step", "2")
        header, rows = parse_csv(out)
        limit = math.pi * section3_network.lam * epsilon + 1e-12
        checked = 0
        for sigma2, err_interference, err_noise in zip(
            column(header, rows, "sigma2"),
            column(header, rows, "err_interference"),
            column(header, rows, "err_noise"),
        ):
            if sigma2 <= interference.sigma2_threshold:
                assert err_interference <= limit
                checked += 1
            if sigma2 >= noise.sigma2_threshold:
                assert err_noise <= limit
                checked += 1
        assert checked > 0


class TestConvergenceVerdicts:

    def test_alpha2_conditional(self):
        code, out, _ = run_cli("convergence", "--A", "1", "--B", "0.5", "--alpha", "2")
        assert code == EXIT_OK
        assert "[interference] 结论: conditional, 比值极限: 0.5" in out

    def test_small_alpha_swaps_verdicts(self):
        code, out, _ = run_cli("convergence", "--A", "1", "--B", "1", "--alpha", "1.6")
        assert code == EXIT_OK
        assert "[interference] 结论: converges" in out
        assert "[noise] 结论: diverges" in out
