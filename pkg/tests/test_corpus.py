import json

import pytest
from hypothesis import given, settings, strategies as st

from app.exceptions import SolutionParseError, YBEError
from app.models import catalog
from app.models.permutation import Permutation
from app.models.solution import Solution
from app.services import corpus, solution_core


class TestSolutionFiles:
    def test_round_trip(self, example1_s, tmp_path):
        path = corpus.save_solution(example1_s, tmp_path / 'example1.json')
        loaded = corpus.load_solution(path)
        assert loaded == example1_s
        assert loaded.label == 'example1'

    def test_malformed_json_reports_position(self):
        with pytest.raises(SolutionParseError) as excinfo:
            corpus.parse_solution('{"n": 2, "r": [')
        assert excinfo.value.location.startswith('line 1, column')

    def test_entry_out_of_range_reports_field(self):
        payload = {'n': 2, 'r': [[[0, 0], [0, 2]], [[1, 0], [1, 1]]]}
        with pytest.raises(SolutionParseError) as excinfo:
            corpus.parse_solution(json.dumps(payload))
        assert excinfo.value.location == 'r[0][1]'

    def test_row_count_must_match(self):
        with pytest.raises(SolutionParseError) as excinfo:
            corpus.parse_solution(json.dumps({'n': 3, 'r': [[[0, 0]]]}))
        assert excinfo.value.location == 'r'


class TestFingerprint:
    @settings(max_examples=6)
    @given(st.permutations(range(3)))
    def test_isomorphism_invariant(self, images):
        sol = catalog.example1_s()
        assert corpus.fingerprint(sol.relabel(Permutation(tuple(images)))) == corpus.fingerprint(sol)

    def test_distinguishes_classes(self, example1_r, example1_s):
        assert corpus.fingerprint(example1_r) != corpus.fingerprint(example1_s)


class TestCorpusDirectory:
    def test_write_is_idempotent(self, tmp_path):
        solutions = list(solution_core.enumerate_solutions(2))
        first = corpus.write_corpus(solutions, tmp_path, 2, 'all')
        files = sorted(p.name for p in tmp_path.iterdir())
        second = corpus.write_corpus(solutions, tmp_path, 2, 'all')
        assert first == second
        assert sorted(p.name for p in tmp_path.iterdir()) == files
        assert len(files) == len(solutions) + 1

    def test_load_follows_index_order(self, tmp_path, flip2, example2_n2):
        index = corpus.write_corpus([example2_n2, flip2], tmp_path, 2, 'all')
        loaded = corpus.load_corpus(tmp_path)
        assert [corpus.fingerprint(s) for s in loaded] == [e['fingerprint'] for e in index['solutions']]

    def test_missing_directory_is_empty(self, tmp_path):
        assert corpus.load_corpus(tmp_path / 'absent') == []


class TestAnalyze:
    def test_example1(self, example1_r):
        report = corpus.analyze(example1_r, max_degree=4, characteristics=[0], i_max=1, k_max=2)
        assert report['errors'] == []
        assert report['spectrum']['gk_dimension'] == 1
        assert len(report['spectrum']['z_family']) == 3
        assert len(report['spectrum']['spec_M']) == 3
        assert report['growth']['A'][:3] == [1, 3, 5]
        assert report['bounds'] == {'max_degree': 4, 'i_max': 1, 'k_max': 2,
                                    'word_budget': report['bounds']['word_budget']}
        assert report['constants']['q'] == 6

    def test_flip_growth_is_binomial(self, flip2):
        report = corpus.analyze(flip2, max_degree=6, characteristics=[0], i_max=1, k_max=2)
        assert report['spectrum']['gk_dimension'] == 2
        assert report['growth']['A'] == [1, 2, 3, 4, 5, 6, 7]
        assert report['growth']['M'] == report['growth']['A']

    def test_identity_suite_for_example4(self, example4):
        report = corpus.analyze(example4, max_degree=4, characteristics=[0, 2, 3], i_max=1, k_max=8)
        example4_entries = [e for e in report['identity_suite'] if e['example'] == 'example4']
        assert len(example4_entries) == 9
        assert all(e['status'] == 'pass' for e in example4_entries)

    def test_invalid_solution_stops_early(self):
        sol = Solution.from_rows([[(0, 0), (1, 0)], [(0, 0), (1, 0)]])
        report = corpus.analyze(sol, max_degree=2)
        assert report['errors'][0]['stage'] == 'validate'
        assert 'spectrum' not in report

    def test_budget_truncation_is_a_warning(self, monkeypatch):
        # degree 3 of the free commutative monoid on four letters needs 40 states
        monkeypatch.setenv('YBE_BUDGET_WORDS', '20')
        report = corpus.analyze(catalog.flip(4), max_degree=4, characteristics=[], i_max=1, k_max=2)
        assert any(error['error'] == 'BudgetExceeded' for error in report['errors'])
        assert any('budget' in warning for warning in report['warnings'])

    def test_deterministic(self, example1_s):
        kwargs = dict(max_degree=3, characteristics=[2], i_max=1, k_max=2)
        first = json.dumps(corpus.analyze(example1_s, **kwargs), sort_keys=True)
        assert first == json.dumps(corpus.analyze(example1_s, **kwargs), sort_keys=True)


class TestSuites:
    @pytest.mark.parametrize('suite', sorted(corpus.SUITES))
    @pytest.mark.parametrize('name', ['flip-2', 'example1-r', 'example1-s', 'example5'])
    def test_builtins_pass(self, suite, name):
        result = corpus.run_suite(suite, catalog.BUILTIN[name](), {'max_degree': 4, 'cocycle_degree': 3,
                                                                  'strata_degree': 3})
        assert result['failures'] == []

    def test_unknown_suite(self, flip2):
        with pytest.raises(YBEError):
            corpus.run_suite('no-such-suite', flip2)

    def test_failures_are_data(self, flip2, monkeypatch):
        monkeypatch.setattr('app.services.spectrum.gk_dimension', lambda sol: 0)
        result = corpus.run_suite('involutive-iff-gk-n', flip2)
        assert result['failures'] == [{'check': 'gk == n iff involutive', 'gk_dimension': 0, 'involutive': True}]

    def test_aggregate(self):
        report = corpus.aggregate('spectrum', [{'solution': 'a', 'failures': []},
                                               {'solution': 'b', 'failures': [{'check': 'x'}]}])
        assert (report['solutions'], report['passed']) == (2, 1)
        assert [r['solution'] for r in report['failures']] == ['b']


@pytest.fixture(scope='module')
def corpus3():
    return list(solution_core.enumerate_solutions(3))


class TestCorpusSweep:
    def test_size(self, corpus3):
        assert len(corpus3) == 26

    @pytest.mark.parametrize('suite', sorted(corpus.SUITES))
    def test_every_suite_passes_on_three_letters(self, corpus3, suite):
        failing = []
        for sol in corpus3:
            result = corpus.run_suite(suite, sol, {})
            if result['failures']:
                failing.append((sol.label, result['failures']))
        assert failing == []


class TestCancellationSuite:
    @pytest.mark.parametrize('name', ['flip-3', 'example1-r', 'example1-s', 'example2-n3'])
    def test_builtins(self, name):
        result = corpus.run_suite('cancellative-iff-involutive', catalog.BUILTIN[name]())
        assert result['failures'] == []

    def test_missing_witness_is_a_failure(self, example1_r, monkeypatch):
        monkeypatch.setattr('app.services.word_engine.WordEngine.cancellation_witness',
                            lambda self, max_degree: None)
        result = corpus.run_suite('cancellative-iff-involutive', example1_r, {'cancel_degree': 3})
        assert [f['check'] for f in result['failures']] == [
            'A has a cancellation witness up to degree 3',
            'M has a cancellation witness up to degree 3',
        ]

    def test_witness_on_involutive_is_a_failure(self, flip2, monkeypatch):
        monkeypatch.setattr('app.services.word_engine.WordEngine.cancellation_witness',
                            lambda self, max_degree: {'side': 'left', 'letter': 0, 'degree': 2,
                                                      'words': [(0,), (1,)]})
        result = corpus.run_suite('cancellative-iff-involutive', flip2)
        assert result['failures'][0] == {
            'check': 'A cancellative up to degree 4',
            'witness': {'side': 'left', 'letter': 0, 'degree': 2, 'words': ['x1', 'x2']},
        }
