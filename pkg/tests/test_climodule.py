import csv
import io

import pytest

from yafet import (
    climodule,
    experiments,
    linalg,
)


QUADCOUNT = 'deg,stroud,tabulated\n1,1,\n2,4,\n3,4,\n'


def test_quadcount_stdout(capsys):
    assert climodule.run(['quadcount', '--dim', '2', '--degree', '1..3']) == 0
    assert capsys.readouterr().out == QUADCOUNT


def test_experiment_option_alias(capsys):
    argv = ['--dim', '2', '--experiment', 'quad_count', '--degree', '1..3']
    assert climodule.run(argv) == 0
    assert capsys.readouterr().out == QUADCOUNT


def test_output_file(tmp_path):
    out = tmp_path / 'q.csv'
    argv = ['quadcount', '--dim', '2', '--degree', '1..3', '--out', str(out)]
    assert climodule.run(argv) == 0
    assert out.read_text() == QUADCOUNT


def test_one_file_per_variant(tmp_path):
    out = tmp_path / 'c.csv'
    argv = ['conditioning', '--degree', '1..2', '--out', str(out)]
    assert climodule.run(argv) == 0
    assert (tmp_path / 'c.equispaced.csv').is_file()
    assert (tmp_path / 'c.spectral.csv').is_file()
    assert not out.exists()


def test_tabulate_points_file(tmp_path, capsys):
    points = tmp_path / 'points.txt'
    points.write_text('0.25\n0.5\n')
    argv = ['tabulate', '--element', 'lagrange', '--dim', '1',
            '--degree', '1', '--points', str(points)]
    assert climodule.run(argv) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ['point', 'psi0', 'psi1']
    assert [float(v) for v in rows[1][1:]] == pytest.approx([0.75, 0.25])
    assert len(rows) == 3


@pytest.mark.parametrize('argv', [
    [],
    ['bogus'],
    ['quadcount', '--degree', '3..1'],
    ['quadcount', '--dim', '4'],
    ['divergence', '--mesh', '0'],
    ['divergence', '--element', 'n1', '--mesh', '1'],
])
def test_usage_errors(argv):
    assert climodule.run(argv) == climodule.EXIT_USAGE


def test_missing_quadrature_tables(tmp_path):
    argv = ['quadcount', '--quad-tables', str(tmp_path / 'missing')]
    assert climodule.run(argv) == climodule.EXIT_USAGE


def test_numerical_failure(monkeypatch):
    def fail(config):
        raise linalg.SingularMatrixError('singular matrix: pivot 0', 0)

    monkeypatch.setitem(experiments.EXPERIMENTS, 'quadcount', fail)
    assert climodule.run(['quadcount']) == climodule.EXIT_NUMERICAL


def test_help_exits_cleanly(capsys):
    assert climodule.run(['--help']) == 0
    assert 'quadcount' in capsys.readouterr().out
