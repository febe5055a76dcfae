import json

import pytest

from app.models import catalog
from app.models.solution import Solution
from main import main


def _run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestValidate:
    def test_example1(self, capsys, write_solution):
        code, output = _run(capsys, ['validate', str(write_solution(catalog.example1_r()))])
        assert code == 0
        assert output['flags']['is_ybe'] and output['flags']['bijective']

    def test_repeated_lambda_image(self, capsys, write_solution):
        sol = Solution.from_rows([[(0, 0), (0, 1)], [(1, 0), (1, 1)]])
        code, output = _run(capsys, ['validate', str(write_solution(sol))])
        assert code != 0
        assert output['flags']['left_nd'] is False

    def test_malformed_json(self, capsys, write_solution):
        code, output = _run(capsys, ['validate', str(write_solution('{"n": 2,'))])
        assert code != 0
        assert output['error'] == 'SolutionParseError'
        assert 'location' in output['context']

    def test_pretty_output(self, capsys, write_solution):
        main(['validate', '--pretty', str(write_solution(catalog.flip(2)))])
        assert capsys.readouterr().out.startswith('{\n  ')


class TestAnalyze:
    def test_flip(self, capsys, write_solution):
        path = write_solution(catalog.flip(2))
        code, report = _run(capsys, ['analyze', str(path), '--max-degree', '6', '--char', '0', '--imax', '1',
                                     '--kmax', '2'])
        assert code == 0
        assert report['spectrum']['gk_dimension'] == 2
        assert report['growth']['A'] == [1, 2, 3, 4, 5, 6, 7]

    def test_output_is_byte_stable(self, capsys, write_solution):
        path = str(write_solution(catalog.example1_r()))
        argv = ['analyze', path, '--max-degree', '3', '--char', '2', '--imax', '1', '--kmax', '2']
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_invalid_solution_exits_nonzero(self, capsys, write_solution):
        sol = Solution.from_rows([[(0, 0), (1, 0)], [(0, 0), (1, 0)]])
        code, report = _run(capsys, ['analyze', str(write_solution(sol))])
        assert code == 1
        assert report['errors'][0]['stage'] == 'validate'


class TestEnumerateAndSweep:
    def test_single_point(self, capsys, tmp_path):
        out = tmp_path / 'n1'
        code, index = _run(capsys, ['enumerate', '--n', '1', '--out', str(out)])
        assert code == 0
        assert index['count'] == 1
        assert len(list(out.glob('*.json'))) == 2

    def test_too_large(self, capsys, tmp_path):
        code, output = _run(capsys, ['enumerate', '--n', '4', '--out', str(tmp_path)])
        assert code == 1
        assert output['error'] == 'TooLarge'

    def test_lambda_filter(self, capsys, tmp_path):
        code, index = _run(capsys, ['enumerate', '--n', '2', '--filter', 'lambda', '--lambda', '[[0, 1], [0, 1]]',
                                    '--out', str(tmp_path)])
        assert code == 0
        assert index['count'] >= 1

    def test_sweep(self, capsys, tmp_path):
        main(['enumerate', '--n', '2', '--out', str(tmp_path)])
        capsys.readouterr()
        code, report = _run(capsys, ['sweep', str(tmp_path), '--suite', 'involutive-iff-gk-n'])
        assert code == 0
        assert report['solutions'] >= 2
        assert report['failures'] == []

    def test_sweep_of_empty_corpus(self, capsys, tmp_path):
        code, report = _run(capsys, ['sweep', str(tmp_path), '--suite', 'prop6-bijection'])
        assert code == 0
        assert report == {'suite': 'prop6-bijection', 'solutions': 0, 'passed': 0, 'failures': []}

    def test_unknown_suite_is_rejected(self, tmp_path):
        with pytest.raises(SystemExit):
            main(['sweep', str(tmp_path), '--suite', 'nope'])
