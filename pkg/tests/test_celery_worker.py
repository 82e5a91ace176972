import pytest

from celery_worker import app, run_replicate_task
from src.firefly.bench import ExperimentConfig, replicate_row, run_experiment
from src.firefly.engine import FaParams
from src.firefly.errors import FireflyError


@pytest.fixture
def eager_celery():
    previous = (app.conf.task_always_eager, app.conf.task_eager_propagates)
    app.conf.task_always_eager = True
    app.conf.task_eager_propagates = False
    yield app
    app.conf.task_always_eager, app.conf.task_eager_propagates = previous


@pytest.fixture
def config() -> ExperimentConfig:
    return ExperimentConfig(
        name="celery_small",
        target="four_peak",
        params=FaParams(population=6, max_iterations=3),
        replicates=3,
        base_seed=77,
    )


def test_task_payload_matches_local_row(eager_celery, config):
    reply = run_replicate_task.delay(config.model_dump(mode="json"), 1).get(timeout=10)
    assert reply["success"] is True
    assert reply["row"] == replicate_row(config, 1).to_dict()


def test_celery_executor_matches_local(eager_celery, config):
    remote = run_experiment(config, executor="celery")
    local = run_experiment(config, workers=1, executor="local")
    assert remote.to_dict() == local.to_dict()


def test_invalid_payload_reports_failure(eager_celery):
    reply = run_replicate_task.delay({"target": "sphere", "replicates": 0}, 0).get(timeout=10)
    assert reply["success"] is False
    assert "replicates" in reply["error"]


def test_worker_failure_surfaces_as_firefly_error(eager_celery, monkeypatch, config):
    import src.firefly.bench as bench

    def broken(experiment, index):
        raise RuntimeError("worker crashed")

    monkeypatch.setattr(bench, "replicate_row", broken)
    with pytest.raises(FireflyError, match="worker crashed"):
        run_experiment(config, executor="celery")


def test_routing():
    assert app.conf.task_routes["celery_worker.run_replicate_task"] == {"queue": "replicates"}
    assert app.conf.worker_prefetch_multiplier == 1
