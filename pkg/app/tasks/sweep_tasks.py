"""
Celery tasks for invariant sweeps over a solution corpus
"""

from celery import Task, group
from celery.utils.log import get_task_logger

from app.celery_app import celery
from app.models.solution import Solution
from app.services import corpus

logger = get_task_logger(__name__)


class CallbackTask(Task):
    """Base task class with lifecycle logging"""

    def on_failure(self, exc, task_id, args, kwargs, einfo):
        logger.error(f'Task {task_id} failed: {exc}')
        logger.error(f'Exception info: {einfo}')

    def on_retry(self, exc, task_id, args, kwargs, einfo):
        logger.warning(f'Task {task_id} retrying: {exc}')

    def on_success(self, retval, task_id, args, kwargs):
        logger.debug(f'Task {task_id} completed successfully')


@celery.task(bind=True, base=CallbackTask)
def run_suite_task(self, suite, payload, label='', options=None):
    """Run one named suite on one solution given as its JSON payload"""
    sol = Solution.from_json(payload, label=label)
    return corpus.run_suite(suite, sol, options)


def sweep(suite, solutions, options=None):
    """Run a suite over every solution, merging results in corpus order"""
    if suite not in corpus.SUITES:
        raise ValueError(f"unknown suite {suite!r}; known: {', '.join(sorted(corpus.SUITES))}")
    signatures = [run_suite_task.s(suite, sol.to_json(), sol.label, options) for sol in solutions]
    logger.info(f'Sweeping {len(signatures)} solutions with suite {suite}')
    if celery.conf.task_always_eager:
        results = [signature.apply().get() for signature in signatures]
    else:
        results = group(signatures).apply_async().get() if signatures else []
    return corpus.aggregate(suite, results)
