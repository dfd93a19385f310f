import logging
import os

import pandas as pd

from .cache import save_json

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ['epoch', 'train_loss', 'train_acc', 'test_acc', 'lr', 'seconds']


def write_metrics_row(path, row):
    """Append one epoch row; the header is written only when the file is new."""
    missing = [column for column in METRICS_COLUMNS if column not in row]
    if missing:
        raise ValueError(f"metrics row is missing {missing}")
    frame = pd.DataFrame([[row[column] for column in METRICS_COLUMNS]], columns=METRICS_COLUMNS)
    new_file = not os.path.exists(path)
    frame.to_csv(path, mode='a', header=new_file, index=False)
    return path


def read_metrics(path):
    """Metrics rows as a DataFrame, floats parsed without rounding."""
    return pd.read_csv(path, float_precision='round_trip')


def truncate_metrics(path, epoch):
    """Drop rows for ``epoch`` and later; returns how many were removed."""
    if not os.path.exists(path):
        return 0
    frame = read_metrics(path)
    stale = frame['epoch'] >= epoch
    if stale.any():
        frame[~stale].to_csv(path, index=False)
        logger.warning("dropped %d metrics rows from epoch %d on in %s", int(stale.sum()), epoch, path)
    return int(stale.sum())


def save_noise_sweep(result, path):
    save_json(result.to_dict(), path)
    logger.info("noise sweep saved to %s", path)
    return path


def print_suite_table(results):
    """Print one line per verification suite and a final verdict."""
    width = max([len(r.name) for r in results] + [5])
    print(f"\n{'suite'.ljust(width)}  result  detail")
    for r in results:
        status = 'pass' if r.passed else 'FAIL'
        print(f"{r.name.ljust(width)}  {status.ljust(6)}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"\n{len(results) - failed}/{len(results)} suites passed")
