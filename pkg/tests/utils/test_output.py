import json

import pytest

from src.utils.cache import save_json
from src.utils.output import METRICS_COLUMNS, print_suite_table, read_metrics, truncate_metrics, write_metrics_row
from src.verification.suites import SuiteResult


def row(epoch):
    return {'epoch': epoch, 'train_loss': 1.5 / (epoch + 1), 'train_acc': 0.25, 'test_acc': 0.5,
            'lr': 0.1, 'seconds': 0.0}


def test_rows_append_under_one_header(tmp_path):
    path = str(tmp_path / 'metrics.csv')
    for epoch in range(3):
        write_metrics_row(path, row(epoch))
    lines = open(path).read().splitlines()
    assert lines[0] == ','.join(METRICS_COLUMNS)
    assert len(lines) == 4
    frame = read_metrics(path)
    assert frame['epoch'].tolist() == [0, 1, 2]
    assert frame['train_loss'].iloc[1] == pytest.approx(0.75)


def test_incomplete_row_is_rejected(tmp_path):
    with pytest.raises(ValueError, match='seconds'):
        write_metrics_row(str(tmp_path / 'metrics.csv'), {k: 0 for k in METRICS_COLUMNS[:-1]})


def test_json_is_sorted_and_creates_directories(tmp_path):
    path = save_json({'b': 1, 'a': [0.5]}, str(tmp_path / 'nested' / 'out.json'))
    text = open(path).read()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {'a': [0.5], 'b': 1}


def test_truncate_drops_later_epochs(tmp_path):
    path = str(tmp_path / 'metrics.csv')
    for epoch in range(4):
        write_metrics_row(path, row(epoch))
    assert truncate_metrics(path, 2) == 2
    assert read_metrics(path)['epoch'].tolist() == [0, 1]
    assert truncate_metrics(path, 5) == 0
    assert truncate_metrics(str(tmp_path / 'absent.csv'), 0) == 0


def test_truncate_keeps_exact_values(tmp_path):
    path = str(tmp_path / 'metrics.csv')
    values = row(0)
    values['train_loss'] = 0.1 + 0.2
    write_metrics_row(path, values)
    write_metrics_row(path, row(1))
    truncate_metrics(path, 1)
    assert read_metrics(path)['train_loss'].iloc[0] == 0.1 + 0.2


def test_suite_table(capsys):
    print_suite_table([SuiteResult('prox agreement', True, '10 instances'),
                       SuiteResult('gradients', False, 'failed: residual block')])
    out = capsys.readouterr().out
    assert 'FAIL' in out and 'pass' in out
    assert '1/2 suites passed' in out
