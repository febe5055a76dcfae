"""
Celery application for corpus sweeps.

Eager by default: tasks run in-process unless CELERY_TASK_ALWAYS_EAGER is
set to false and a broker is reachable.
"""

from celery import Celery

from app.config import Config


def make_celery(app_name=None):
    """Create and configure Celery application"""

    celery = Celery(
        app_name or 'ybe',
        broker=Config.CELERY_BROKER_URL,
        backend=Config.CELERY_RESULT_BACKEND,
        include=['app.tasks.sweep_tasks'],
    )

    celery.conf.update(
        task_serializer='json',
        accept_content=['json'],
        result_serializer='json',
        timezone='UTC',
        enable_utc=True,

        task_routes={
            'app.tasks.sweep_tasks.*': {'queue': 'sweeps'},
        },

        task_always_eager=Config.CELERY_TASK_ALWAYS_EAGER,
        task_eager_propagates=True,

        worker_prefetch_multiplier=1,
        task_acks_late=True,
        result_expires=3600,
    )

    return celery


celery = make_celery()

if __name__ == '__main__':
    celery.start()
