#!/usr/bin/env python3
"""
Celery worker for firefly benchmark replicates.
Each task runs one seeded replicate of an experiment and returns its report row.

Usage:
    celery -A celery_worker worker --loglevel=info -Q replicates
"""
from __future__ import annotations

import logging
from typing import Any, Dict

from celery import Celery

from src.firefly.settings import REDIS_URL

logger = logging.getLogger(__name__)

app = Celery("firefly_bench", broker=REDIS_URL, backend=REDIS_URL)
app.config_from_object("celeryconfig")


@app.task(queue="replicates")
def run_replicate_task(config: Dict[str, Any], index: int) -> Dict[str, Any]:
    """
    Run replicate *index* of the experiment described by *config*
    (``ExperimentConfig.model_dump(mode="json")``).
    """
    try:
        from src.firefly.bench import ExperimentConfig, replicate_row

        experiment = ExperimentConfig.model_validate(config)
        row = replicate_row(experiment, index)
        logger.info("Replicate %d of %s: best=%.10g", index, experiment.name, row.best_value)
        return {"success": True, "row": row.to_dict()}
    except Exception as exc:  # noqa: BLE001
        logger.exception("Replicate %d failed: %s", index, exc)
        return {"success": False, "error": str(exc)}
