"""
Environment configuration for the firefly library and its tooling.

Values are read once at import time, after loading an optional ``.env`` file
from the working directory.
"""
from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).parent.parent.parent
CONFIG_DIR = BASE_DIR / "src" / "config"

FIREFLY_LOG_LEVEL: str = os.environ.get("FIREFLY_LOG_LEVEL", "INFO").upper()
# 1 keeps replicate execution serial and in-process.
FIREFLY_WORKERS: int = int(os.environ.get("FIREFLY_WORKERS", "1"))
# "local" (serial / process pool) or "celery" (Redis-backed workers).
FIREFLY_EXECUTOR: str = os.environ.get("FIREFLY_EXECUTOR", "local").lower()
REDIS_URL: str = os.environ.get("REDIS_URL", "redis://localhost:6379/0")
FIREFLY_OUTPUT_DIR = Path(os.environ.get("FIREFLY_OUTPUT_DIR", "results"))
# Seconds to wait for a single Celery replicate before giving up.
CELERY_RESULT_TIMEOUT: float = float(os.environ.get("FIREFLY_CELERY_TIMEOUT", "600"))

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
