from app.celery_app import celery
from app.models import catalog
from app.tasks import sweep_tasks


def test_tasks_run_eagerly_by_default():
    assert celery.conf.task_always_eager


def test_run_suite_task(example1_s):
    result = sweep_tasks.run_suite_task.apply(args=('cocycle-roundtrip', example1_s.to_json(), 'example1-s',
                                                    {'cocycle_degree': 3})).get()
    assert result['solution'] == 'example1-s'
    assert result['failures'] == []


def test_sweep_merges_in_corpus_order():
    solutions = [catalog.example5(), catalog.flip(2), catalog.example1_r()]
    report = sweep_tasks.sweep('rack-solution', solutions)
    assert report['solutions'] == 3
    assert report['passed'] == 3


def test_sweep_reports_failures_with_witnesses(monkeypatch):
    monkeypatch.setattr('app.services.spectrum.gk_dimension', lambda sol: sol.n)
    report = sweep_tasks.sweep('involutive-iff-gk-n', [catalog.flip(2), catalog.example1_r()])
    assert report['passed'] == 1
    assert report['failures'][0]['solution'] == 'example1-r'
    assert report['failures'][0]['failures'][0]['involutive'] is False
