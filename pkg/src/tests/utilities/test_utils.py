import json
import math

import numba
import numpy as np
import pytest

from models import OutputFormat
from utilities.utils import (
    compensated_sum,
    configure_threads,
    format_float,
    neumaier_cumsum,
    neumaier_sum,
    to_json,
)


class TestCompensatedSums:
    """Test the Neumaier summation helpers."""

    def test_recovers_cancelled_terms(self):
        """Test that 1 + 1e100 + 1 - 1e100 sums to 2."""
        assert neumaier_sum(np.array([1.0, 1e100, 1.0, -1e100])) == 2.0

    def test_many_small_terms(self):
        """Test that a million 0.1s sum to 1e5 to within one ulp."""
        values = np.full(1_000_000, 0.1)
        assert compensated_sum(values) == pytest.approx(1e5, rel=2e-16)

    def test_complex_parts_are_separate(self):
        """Test that real and imaginary parts are each compensated."""
        values = np.array([1 + 1e100j, 1e100 + 1j, 1 - 1e100j, -1e100 + 1j])
        assert compensated_sum(values) == complex(2.0, 2.0)

    def test_empty(self):
        """Test that an empty array sums to 0."""
        assert compensated_sum(np.zeros(0)) == 0.0

    def test_cumsum_matches_prefix_sums(self):
        """Test that each running sum equals the compensated sum of its prefix."""
        rng = np.random.default_rng(3)
        values = rng.standard_normal(1000) * 10.0 ** rng.integers(-5, 5, 1000)
        running = neumaier_cumsum(values)
        for i in (0, 10, 500, 999):
            assert running[i] == neumaier_sum(values[: i + 1])


class TestFormatFloat:
    """Test float formatting for reports."""

    def test_round_trip(self):
        """Test that 17 significant digits read back exactly."""
        for value in (0.1, math.pi, 1e-300, 123456789.123456789, -2.5e20):
            assert float(format_float(value)) == value

    def test_zero(self):
        """Test that zero is written as 0."""
        assert format_float(0.0) == "0"

    def test_rejects_non_finite(self):
        """Test that NaN and infinities are refused."""
        for value in (math.nan, math.inf, -math.inf):
            with pytest.raises(ValueError):
                format_float(value)


class TestToJson:
    """Test the report JSON writer."""

    def test_parses_back(self):
        """Test that the output is valid JSON with exact floats."""
        data = {"N": 10, "lhs": 0.1, "ok": True, "T": None, "warnings": ["a", "b"], "format": OutputFormat.JSON}
        parsed = json.loads(to_json(data))
        assert parsed == {"N": 10, "lhs": 0.1, "ok": True, "T": None, "warnings": ["a", "b"], "format": "json"}

    def test_seventeen_digits(self):
        """Test that floats carry 17 significant digits."""
        assert to_json({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}'

    def test_numpy_scalars(self):
        """Test that numpy scalars serialize like Python ones."""
        assert to_json([np.int64(3), np.float64(0.5), np.bool_(False)]) == "[\n  3,\n  0.5,\n  false\n]"

    def test_empty_containers(self):
        """Test that empty containers serialize compactly."""
        assert to_json({"a": [], "b": {}}) == '{\n  "a": [],\n  "b": {}\n}'

    def test_rejects_unknown_types(self):
        """Test that unsupported objects raise TypeError."""
        with pytest.raises(TypeError):
            to_json({"x": object()})


class TestConfigureThreads:
    """Test the numba thread cap."""

    def test_clamps_to_available(self):
        """Test that the count is clamped to [1, NUMBA_NUM_THREADS]."""
        assert configure_threads(0) == 1
        assert configure_threads(10_000) == numba.config.NUMBA_NUM_THREADS
        assert numba.get_num_threads() == numba.config.NUMBA_NUM_THREADS
