import logging
import os
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    CACHE_DIR: Path = Path(".rsp_cache")
    THREADS: int = os.cpu_count() or 1
    TERM_BUDGET: int = 10**9
    SIEVE_MEMORY_BUDGET_BYTES: int = 2 * 1024**3
    MAX_POWER_EXPONENT: int = 12
    PARTITION_WIDTH: int = 1
    DEFAULT_T: float = 100.0
    QUADRATURE_NODE_BUDGET: int = 10**8
    VERIFY_TABLE_LIMIT: int = 200_000
    BRUTEFORCE_LIMIT: int = 5_000

    model_config = SettingsConfigDict(
        env_prefix="RSP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()


logger.debug(f"Cache directory: {settings.CACHE_DIR}")
