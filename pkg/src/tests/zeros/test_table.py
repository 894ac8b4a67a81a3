import math

import numpy as np
import pytest

from models import ZeroSet
from utilities.exceptions import BetaRangeError, ConfigError, OrderingError, ParseError
from zeros.table import (
    conjugate_pairs,
    describe_zeros,
    dump_zeros,
    expand_conjugates,
    load_zeros,
    truncate,
)


class TestLoadZeros:
    """Test reading zero tables."""

    def test_ordinates_only(self, three_zero_file):
        """Test that single-column lines load with the default real part."""
        zeros = load_zeros(three_zero_file)
        assert zeros.count == 3
        assert zeros.betas is None
        assert zeros.beta_bar == 0.5
        assert zeros.gammas[0] == 14.134725141734694

    def test_explicit_real_parts(self, tmp_path):
        """Test that "β γ" lines keep their real parts."""
        path = tmp_path / "zeros.txt"
        path.write_text("0.5 14.134725141734694\n0.75 21.022039638771555\n", encoding="utf-8")
        zeros = load_zeros(path)
        assert zeros.betas.tolist() == [0.5, 0.75]
        assert zeros.beta_bar == 0.75

    def test_mixed_columns(self, tmp_path):
        """Test that single-column lines get 1/2 when other lines carry β."""
        path = tmp_path / "zeros.txt"
        path.write_text("14.1\n0.6 21.0\n", encoding="utf-8")
        assert load_zeros(path).betas.tolist() == [0.5, 0.6]

    def test_comments_and_blank_lines(self, tmp_path):
        """Test that comments and blank lines are skipped."""
        path = tmp_path / "zeros.txt"
        path.write_text("# header\n\n14.1\n  # indented comment\n21.0\n\n", encoding="utf-8")
        assert load_zeros(path).gammas.tolist() == [14.1, 21.0]

    def test_empty_file(self, tmp_path):
        """Test that an empty file is an empty zero set."""
        path = tmp_path / "zeros.txt"
        path.write_text("", encoding="utf-8")
        zeros = load_zeros(path)
        assert zeros.count == 0
        assert zeros.beta_bar is None

    def test_ordering_error_names_the_line(self, tmp_path):
        """Test that a descending ordinate raises with its line number."""
        path = tmp_path / "zeros.txt"
        path.write_text("# c\n14.1\n21.0\n20.0\n", encoding="utf-8")
        with pytest.raises(OrderingError) as exc_info:
            load_zeros(path)
        assert exc_info.value.line == 4
        assert "line 4" in str(exc_info.value)

    def test_duplicate_ordinate(self, tmp_path):
        """Test that a repeated ordinate is an ordering error."""
        path = tmp_path / "zeros.txt"
        path.write_text("14.1\n14.1\n", encoding="utf-8")
        with pytest.raises(OrderingError):
            load_zeros(path)

    def test_beta_out_of_range(self, tmp_path):
        """Test that β outside (0, 1) raises with its line number."""
        path = tmp_path / "zeros.txt"
        path.write_text("14.1\n1.0 21.0\n", encoding="utf-8")
        with pytest.raises(BetaRangeError) as exc_info:
            load_zeros(path)
        assert exc_info.value.line == 2

    def test_unparsable_field(self, tmp_path):
        """Test that a non-numeric field is a parse error."""
        path = tmp_path / "zeros.txt"
        path.write_text("14.1\nabc\n", encoding="utf-8")
        with pytest.raises(ParseError) as exc_info:
            load_zeros(path)
        assert exc_info.value.line == 2

    def test_undecodable_bytes_name_the_line(self, tmp_path):
        """Test that bytes that are not UTF-8 are a parse error on their line."""
        path = tmp_path / "zeros.txt"
        path.write_bytes(b"14.134725141734694\n\xff\xfe21.0\n")
        with pytest.raises(ParseError) as exc_info:
            load_zeros(path)
        assert exc_info.value.line == 2
        assert "0xff" in str(exc_info.value)

    def test_too_many_fields(self, tmp_path):
        """Test that three fields on a line are a parse error."""
        path = tmp_path / "zeros.txt"
        path.write_text("0.5 14.1 3\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_zeros(path)

    def test_non_positive_ordinate(self, tmp_path):
        """Test that γ <= 0 is a parse error."""
        path = tmp_path / "zeros.txt"
        path.write_text("-14.1\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_zeros(path)

    def test_missing_file(self, tmp_path):
        """Test that an unreadable path is a configuration error."""
        with pytest.raises(ConfigError):
            load_zeros(tmp_path / "missing.txt")

    def test_generated_table_starts_at_first_zero(self, zero_set):
        """Test that the generated fixture starts at the first zero and ends below 500."""
        assert 14.0 < zero_set.gammas[0] < 15.0
        assert zero_set.gammas[-1] <= 500.0
        assert zero_set.count > 250


class TestDumpZeros:
    """Test writing zero tables."""

    def test_round_trip_is_exact(self, zero_set, tmp_path):
        """Test that dump then load reproduces every ordinate bit for bit."""
        path = dump_zeros(zero_set, tmp_path / "copy.txt")
        assert np.array_equal(load_zeros(path).gammas, zero_set.gammas)

    def test_round_trip_keeps_betas(self, tmp_path):
        """Test that explicit real parts survive a round trip."""
        zeros = ZeroSet(gammas=[14.1, 21.0], betas=[0.5, 0.7], source="test")
        loaded = load_zeros(dump_zeros(zeros, tmp_path / "copy.txt"))
        assert loaded.betas.tolist() == [0.5, 0.7]

    def test_header_comment(self, three_zeros, tmp_path):
        """Test that the source is written as a comment line."""
        path = dump_zeros(three_zeros, tmp_path / "copy.txt")
        assert path.read_text(encoding="utf-8").splitlines()[0] == "# first three"


class TestTruncate:
    """Test truncation by height."""

    def test_examples(self, three_zeros):
        """Test the number of zeros kept at several heights."""
        assert truncate(three_zeros, 10.0).count == 0
        assert truncate(three_zeros, 14.134725141734694).count == 1
        assert truncate(three_zeros, 22.0).count == 2
        assert truncate(three_zeros, math.inf).count == 3

    def test_prefix_property(self, zero_set):
        """Test that a lower height keeps a prefix of a higher one."""
        low = truncate(zero_set, 100.0)
        high = truncate(zero_set, 300.0)
        assert np.array_equal(high.gammas[: low.count], low.gammas)
        assert low.height == 100.0

    def test_known_count_below_100(self, zero_set):
        """Test that 29 zeros lie below height 100."""
        assert truncate(zero_set, 100.0).count == 29

    def test_rejects_bad_height(self, three_zeros):
        """Test that non-positive and NaN heights are rejected."""
        for T in (0.0, -1.0, math.nan):
            with pytest.raises(ConfigError):
                truncate(three_zeros, T)


class TestConjugates:
    """Test conjugate pairing and expansion."""

    def test_pairs(self, three_zeros):
        """Test that each pair is (ρ, ρ̄)."""
        pairs = conjugate_pairs(three_zeros)
        assert len(pairs) == 3
        rho, rho_bar = pairs[0]
        assert rho == complex(0.5, 14.134725141734694)
        assert rho_bar == rho.conjugate()

    def test_expansion_is_interleaved(self, three_zeros):
        """Test that the expansion lists ρ1, ρ̄1, ρ2, ρ̄2, ..."""
        expanded = expand_conjugates(three_zeros)
        assert expanded.shape == (6,)
        assert expanded[0] == complex(0.5, 14.134725141734694)
        assert expanded[1] == complex(0.5, -14.134725141734694)
        assert expanded[2].imag == 21.022039638771555

    def test_expansion_of_empty_set(self):
        """Test that no zeros expand to an empty array."""
        assert expand_conjugates(ZeroSet(gammas=[])).shape == (0,)


class TestDescribeZeros:
    """Test the zero table summary."""

    def test_default_policy(self, three_zeros):
        """Test the summary of a table without real parts."""
        info = describe_zeros(three_zeros)
        assert info["count"] == 3
        assert info["gamma_min"] == 14.134725141734694
        assert info["gamma_max"] == 25.010857580145688
        assert info["beta_policy"] == "beta = 1/2 (default)"

    def test_empty(self):
        """Test that an empty table reports no extremes."""
        info = describe_zeros(ZeroSet(gammas=[]))
        assert info["count"] == 0
        assert info["gamma_min"] is None
