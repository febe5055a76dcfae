import json

import pytest

from app.models import catalog


@pytest.fixture(scope='session')
def flip2():
    return catalog.flip(2)


@pytest.fixture(scope='session')
def flip3():
    return catalog.flip(3)


@pytest.fixture(scope='session')
def example1_r():
    return catalog.example1_r()


@pytest.fixture(scope='session')
def example1_s():
    return catalog.example1_s()


@pytest.fixture(scope='session')
def example2_n2():
    return catalog.example2(2, (1, 2))


@pytest.fixture(scope='session')
def example4():
    return catalog.example4()


@pytest.fixture(scope='session')
def example5():
    return catalog.example5()


@pytest.fixture
def write_solution(tmp_path):
    """Write a Solution (or a raw payload) to a JSON file and return its path"""
    def _write(solution_or_payload, name='solution.json'):
        path = tmp_path / name
        if isinstance(solution_or_payload, (dict, list)):
            path.write_text(json.dumps(solution_or_payload))
        elif isinstance(solution_or_payload, str):
            path.write_text(solution_or_payload)
        else:
            path.write_text(solution_or_payload.dumps())
        return path
    return _write
