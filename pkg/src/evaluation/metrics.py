from typing import NamedTuple

import numpy as np

EVAL_BATCH = 256


class EvalResult(NamedTuple):
    accuracy: float
    samples: int


def accuracy(predictions, labels):
    """Fraction of predictions equal to their labels."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape:
        raise ValueError(f"{predictions.shape[0]} predictions for {labels.shape[0]} labels")
    if labels.size == 0:
        return 0.0
    return float(np.mean(predictions == labels))


def evaluate(net, data, batch_size=EVAL_BATCH):
    """Clean accuracy of ``net`` on a dataset, inputs normalized with the dataset's stats."""
    predictions = net.predict(data.normalize(data.images), batch_size=batch_size)
    return EvalResult(accuracy=accuracy(predictions, data.labels), samples=len(data))
