import csv
import io
import json
import math

import pytest

from cli.main import _run_config, build_parser, main
from config import settings
from sieve.cache import cache_path

LOG2 = math.log(2)
LOG3 = math.log(3)


@pytest.fixture
def run(tmp_path, capsys):
    """Run the CLI with a temporary cache and return (exit code, stdout)"""
    cache_dir = tmp_path / "cache"

    def _run(*argv):
        code = main(["--cache-dir", str(cache_dir), *argv])
        return code, capsys.readouterr().out

    _run.cache_dir = cache_dir
    return _run


def _text_fields(out):
    return dict(line.split(": ", 1) for line in out.strip().splitlines())


class TestSieveCommand:
    """Test the sieve subcommand."""

    def test_second_run_hits_the_cache(self, run):
        """Test that the second sieve reuses the cache file."""
        code, out = run("sieve", "--limit", "1000")
        assert code == 0
        assert _text_fields(out)["cache_hit"] == "false"
        code, out = run("sieve", "--limit", "1000")
        assert code == 0
        fields = _text_fields(out)
        assert fields["cache_hit"] == "true"
        assert fields["prime_powers"] == "193"

    def test_corrupt_cache_is_rebuilt(self, run):
        """Test that a corrupt cache file is replaced without failing."""
        run.cache_dir.mkdir()
        cache_path(run.cache_dir, 1000).write_bytes(b"LAMBDAv1 but too short")
        code, out = run("sieve", "--limit", "1000")
        assert code == 0
        assert _text_fields(out)["cache_hit"] == "false"

    def test_json_format(self, run):
        """Test that --format json writes a JSON object."""
        code, out = run("--format", "json", "sieve", "--limit", "100")
        assert code == 0
        assert json.loads(out)["limit"] == 100

    def test_over_budget_exits_3(self, run, monkeypatch):
        """Test that a sieve beyond the memory budget exits with code 3."""
        monkeypatch.setattr(settings, "SIEVE_MEMORY_BUDGET_BYTES", 1000)
        code, _ = run("sieve", "--limit", "100000")
        assert code == 3

    def test_zero_limit_exits_2(self, run):
        """Test that limit 0 is a configuration error."""
        code, _ = run("sieve", "--limit", "0")
        assert code == 2


class TestRspAndLhsCommands:
    """Test the rsp and lhs subcommands."""

    def test_rsp_to_stdout(self, run):
        """Test that rsp writes one CSV row per n."""
        code, out = run("rsp", "--limit", "20")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "rsp"]
        assert len(rows) == 21
        assert float(rows[10][1]) == pytest.approx(LOG2**3, rel=1e-15)

    def test_rsp_to_file(self, run, tmp_path):
        """Test that --output writes the CSV to a file."""
        target = tmp_path / "rsp.csv"
        code, _ = run("rsp", "--limit", "20", "--output", str(target))
        assert code == 0
        assert target.read_text(encoding="utf-8").splitlines()[0] == "n,rsp"

    def test_lhs(self, run):
        """Test that lhs at N = 12, k = 0 prints the partial sum of r_SP."""
        code, out = run("lhs", "--N", "12", "--k", "0")
        assert code == 0
        fields = _text_fields(out)
        assert fields["method"] == "direct"
        assert float(fields["lhs"]) == pytest.approx(2 * LOG2**3 + LOG3 * LOG2**2, rel=1e-14)

    def test_lhs_overflow_exits_4(self, run):
        """Test that N^k beyond float64 range exits with the numeric sentinel code."""
        code, _ = run("lhs", "--N", "10000", "--k", "100")
        assert code == 4

    def test_lhs_binomial_rejects_fractional_k(self, run):
        """Test that an invalid method for k exits with code 2."""
        code, _ = run("lhs", "--N", "100", "--k", "2.5", "--method", "binomial")
        assert code == 2


class TestCompareCommand:
    """Test the compare subcommand."""

    def test_json_report(self, run, three_zero_file):
        """Test that compare writes a JSON report with every field."""
        code, out = run("compare", "--N", "9", "--k", "2", "--zeros", str(three_zero_file))
        assert code == 0
        report = json.loads(out)
        for field in ("N", "k", "T", "zeros_used", "lhs", "m1", "m2", "m3", "m4", "residual",
                      "normalized_residual", "imag_residue", "warnings"):
            assert field in report
        assert report["lhs"] == 0
        assert report["zeros_used"] == 3
        assert report["warnings"] == []
        assert "secondary" not in report

    def test_critical_k_warning(self, run, three_zero_file):
        """Test that k <= 3/2 is listed in the report warnings."""
        code, out = run("compare", "--N", "100", "--k", "1", "--zeros", str(three_zero_file))
        assert code == 0
        assert json.loads(out)["warnings"] == ["k ≤ 3/2: outside Theorem range"]

    def test_without_zeros(self, run):
        """Test that a missing zero table leaves only M1 and a warning."""
        code, out = run("compare", "--N", "1000", "--k", "2")
        assert code == 0
        report = json.loads(out)
        assert report["zeros_used"] == 0
        assert report["m2"] == 0
        assert len(report["warnings"]) == 1

    def test_secondary_and_csv(self, run, three_zero_file):
        """Test that --secondary adds columns after the fixed CSV fields."""
        code, out = run(
            "--format", "csv", "compare", "--N", "1000", "--k", "2",
            "--zeros", str(three_zero_file), "--secondary",
        )
        assert code == 0
        header, values = list(csv.reader(io.StringIO(out)))
        assert header[:3] == ["N", "k", "T"]
        assert header[12] == "warnings"
        assert "secondary_residual" in header
        assert len(values) == len(header)

    def test_term_budget_exits_3(self, run, three_zero_file):
        """Test that a zero sum beyond the term budget exits with code 3."""
        code, _ = run(
            "compare", "--N", "1000", "--k", "2",
            "--zeros", str(three_zero_file), "--term-budget", "10",
        )
        assert code == 3

    def test_bad_zero_file_exits_2(self, run, tmp_path):
        """Test that an unparsable zero table exits with code 2."""
        path = tmp_path / "bad.txt"
        path.write_text("14.1\nnot-a-number\n", encoding="utf-8")
        code, _ = run("compare", "--N", "100", "--k", "2", "--zeros", str(path))
        assert code == 2

    def test_undecodable_zero_file_exits_2(self, run, tmp_path):
        """Test that a zero table with bytes that are not UTF-8 exits with code 2."""
        path = tmp_path / "bad.bin"
        path.write_bytes(b"14.134725141734694\n\xff\xfe21.0\n")
        code, _ = run("zeros", "info", str(path))
        assert code == 2

    def test_missing_zero_file_exits_2(self, run, tmp_path):
        """Test that a zero table path that does not exist exits with code 2."""
        code, _ = run("compare", "--N", "100", "--k", "2", "--zeros", str(tmp_path / "none.txt"))
        assert code == 2

    def test_deterministic(self, run, three_zero_file):
        """Test that two identical runs print identical reports."""
        args = ("compare", "--N", "2000", "--k", "2.5", "--zeros", str(three_zero_file))
        _, first = run(*args)
        _, second = run(*args)
        assert first == second


class TestScanCommand:
    """Test the scan subcommand."""

    def test_rows(self, run, three_zero_file):
        """Test that the scan writes one row per (N, k), N outermost."""
        code, out = run(
            "scan", "--N-grid", "100,200", "--k-grid", "2,3", "--zeros", str(three_zero_file)
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][:2] == ["N", "k"]
        assert [(r[0], r[1]) for r in rows[1:]] == [("100", "2"), ("100", "3"), ("200", "2"), ("200", "3")]

    def test_fractional_grid_value_is_rejected(self, run):
        """Test that a non-integer N in the grid is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            run("scan", "--N-grid", "2500.7")
        assert exc_info.value.code == 2

    def test_scientific_grid_value_is_accepted(self, run, three_zero_file):
        """Test that an integral N written in exponent form is accepted."""
        code, out = run("scan", "--N-grid", "1e2", "--k-grid", "2", "--zeros", str(three_zero_file))
        assert code == 0
        assert list(csv.reader(io.StringIO(out)))[1][0] == "100"

    def test_empty_grid_writes_header_only(self, run):
        """Test that an empty grid produces only the header."""
        code, out = run("scan")
        assert code == 0
        assert out.strip().splitlines() == [
            "N,k,T,lhs,m1,m2,m3,m4,residual,normalized_residual"
        ]


class TestVerifyCommand:
    """Test the verify subcommand."""

    def test_unknown_suite_exits_2(self, run):
        """Test that an unknown suite name exits with code 2."""
        code, _ = run("verify", "nope")
        assert code == 2

    @pytest.mark.parametrize("suite", ["laplace", "gamma", "stirling"])
    def test_table_free_suites_pass(self, run, suite):
        """Test that suites without inputs pass and print JSON checks."""
        code, out = run("verify", suite)
        assert code == 0
        checks = json.loads(out)
        assert checks
        assert all(check["pass"] for check in checks)

    def test_pnt_suite_passes(self, run):
        """Test that the S~ asymptotic checks pass within 5%."""
        code, out = run("verify", "pnt")
        assert code == 0
        assert all(check["pass"] for check in json.loads(out))

    def test_lemma_suite_needs_zeros(self, run):
        """Test that the lemma suites refuse to run without a zero table."""
        code, _ = run("verify", "lemma2")
        assert code == 2


class TestZerosCommand:
    """Test the zeros info subcommand."""

    def test_info(self, run, three_zero_file):
        """Test that zeros info reports count, range and β policy."""
        code, out = run("zeros", "info", str(three_zero_file))
        assert code == 0
        fields = _text_fields(out)
        assert fields["count"] == "3"
        assert float(fields["gamma_min"]) == 14.134725141734694
        assert fields["beta_policy"] == "beta = 1/2 (default)"


class TestRunConfig:
    """Test how parsed arguments become a RunConfig."""

    @pytest.mark.parametrize("flags, verbosity", [([], 0), (["-v"], 1), (["-q"], -1)])
    def test_verbosity(self, flags, verbosity, three_zero_file):
        """Test that -v and -q map to the verbosity that drives logging."""
        args = build_parser().parse_args([*flags, "zeros", "info", str(three_zero_file)])
        assert _run_config(args).verbosity == verbosity
