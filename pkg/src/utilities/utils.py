import json
import logging
import math
from enum import Enum
from typing import Any, Union

import numba
import numpy as np
from numba import njit

from utilities.constants import FLOAT_SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)


@njit(cache=True)
def neumaier_sum(values: np.ndarray) -> float:
    """Compensated (Kahan-Babuska-Neumaier) sum of a 1-D float64 array, in index order."""
    total = 0.0
    compensation = 0.0
    for i in range(values.shape[0]):
        x = values[i]
        t = total + x
        if abs(total) >= abs(x):
            compensation += (total - t) + x
        else:
            compensation += (x - t) + total
        total = t
    return total + compensation


@njit(cache=True)
def neumaier_cumsum(values: np.ndarray) -> np.ndarray:
    """Compensated running sums; out[i] is the compensated sum of values[: i + 1]."""
    out = np.empty(values.shape[0])
    total = 0.0
    compensation = 0.0
    for i in range(values.shape[0]):
        x = values[i]
        t = total + x
        if abs(total) >= abs(x):
            compensation += (total - t) + x
        else:
            compensation += (x - t) + total
        total = t
        out[i] = total + compensation
    return out


def compensated_sum(values: Any) -> Union[float, complex]:
    """Compensated sum of a real or complex array; complex parts are summed separately."""
    arr = np.ravel(np.asarray(values))
    if np.iscomplexobj(arr):
        real = neumaier_sum(np.ascontiguousarray(arr.real, dtype=np.float64))
        imag = neumaier_sum(np.ascontiguousarray(arr.imag, dtype=np.float64))
        return complex(real, imag)
    return float(neumaier_sum(np.ascontiguousarray(arr, dtype=np.float64)))


def format_float(value: float) -> str:
    """Format a float with 17 significant digits (exact float64 round trip)."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"Cannot serialize non-finite value {value}")
    return f"{value:.{FLOAT_SIGNIFICANT_DIGITS}g}"


def to_json(data: Any, indent: int = 2, _level: int = 0) -> str:
    """
    Serialize plain data to JSON, writing every float with 17 significant digits.
    json.dumps would use the shortest repr, which is not what the reports promise.
    """
    if isinstance(data, Enum):
        data = data.value
    if isinstance(data, (bool, np.bool_)):
        return "true" if data else "false"
    if data is None or isinstance(data, str):
        return json.dumps(data, ensure_ascii=False)
    if isinstance(data, (int, np.integer)):
        return str(int(data))
    if isinstance(data, (float, np.floating)):
        return format_float(data)

    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: "
            f"{to_json(value, indent, _level + 1)}"
            for key, value in data.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(data, (list, tuple)):
        if not data:
            return "[]"
        items = [f"{pad}{to_json(value, indent, _level + 1)}" for value in data]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"Cannot serialize {type(data).__name__} to JSON")


def configure_threads(threads: int) -> int:
    """Cap numba's worker count; returns the count actually in effect."""
    threads = max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(threads)
    logger.debug(f"Using {threads} numba threads")
    return threads
