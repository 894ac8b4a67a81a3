import logging
import os
from pathlib import Path
from typing import Tuple

import numpy as np

from models import LambdaTable
from sieve.lambda_table import build_lambda_table
from utilities.constants import LAMBDA_CACHE_MAGIC, LAMBDA_CACHE_NAME
from utilities.exceptions import CacheFormatError

logger = logging.getLogger(__name__)

_HEADER_SIZE = len(LAMBDA_CACHE_MAGIC) + 8


def cache_path(cache_dir: Path, limit: int) -> Path:
    return Path(cache_dir) / LAMBDA_CACHE_NAME.format(limit)


def write_lambda_cache(table: LambdaTable, path: Path) -> Path:
    """Write magic, limit (u64 LE) and weights (f64 LE); the file appears atomically."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "wb") as f:
            f.write(LAMBDA_CACHE_MAGIC)
            f.write(np.array([table.limit], dtype="<u8").tobytes())
            f.write(np.ascontiguousarray(table.weights, dtype="<f8").tobytes())
        os.replace(tmp, path)
    except OSError as e:
        raise OSError(f"cannot write Λ cache {path}: {e}") from e
    logger.debug(f"Wrote Λ cache {path}")
    return path


def read_lambda_cache(path: Path) -> LambdaTable:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise OSError(f"cannot read Λ cache {path}: {e}") from e

    if len(data) < _HEADER_SIZE or data[: len(LAMBDA_CACHE_MAGIC)] != LAMBDA_CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic")
    limit = int(np.frombuffer(data, dtype="<u8", count=1, offset=len(LAMBDA_CACHE_MAGIC))[0])
    expected = _HEADER_SIZE + 8 * (limit + 1)
    if len(data) != expected:
        raise CacheFormatError(
            f"{path}: payload has {len(data)} bytes, expected {expected} for limit {limit}"
        )
    weights = np.frombuffer(data, dtype="<f8", offset=_HEADER_SIZE).astype(np.float64)
    return LambdaTable(limit=limit, weights=weights)


def load_or_build(limit: int, cache_dir: Path) -> Tuple[LambdaTable, Path, bool]:
    """
    Return (table, cache file, cache_hit). A cache file with the wrong magic,
    a truncated payload or a different limit is rebuilt with a warning.
    """
    path = cache_path(cache_dir, limit)
    if path.exists():
        try:
            table = read_lambda_cache(path)
            if table.limit == limit:
                logger.info(f"✅ Λ cache hit: {path}")
                return table, path, True
            logger.warning(f"Λ cache {path} holds limit {table.limit}, rebuilding")
        except CacheFormatError as e:
            logger.warning(f"Corrupt Λ cache, rebuilding: {e}")

    logger.info(f"Λ cache miss for limit {limit}, sieving")
    table = build_lambda_table(limit)
    write_lambda_cache(table, path)
    return table, path, False
