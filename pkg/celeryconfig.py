"""
Celery configuration for the firefly replicate workers.
"""
import os

from kombu import Exchange, Queue  # type: ignore

broker_url = os.environ.get("REDIS_URL", "redis://localhost:6379/0")
result_backend = os.environ.get("REDIS_URL", "redis://localhost:6379/0")

enable_utc = True

task_serializer = "json"
result_serializer = "json"
accept_content = ["json"]

# One replicate at a time per worker process; replicates are CPU-bound.
worker_prefetch_multiplier = 1
task_acks_late = True

task_routes = {
    "celery_worker.run_replicate_task": {"queue": "replicates"},
}

task_queues = (
    Queue("celery", Exchange("celery"), routing_key="celery"),
    Queue("replicates", Exchange("replicates"), routing_key="replicates"),
)

# Set FIREFLY_CELERY_EAGER=1 to run tasks inline without a broker.
task_always_eager = os.environ.get("FIREFLY_CELERY_EAGER", "") == "1"
task_eager_propagates = False
