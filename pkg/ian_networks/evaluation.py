"""Classification metrics with binomial confidence intervals."""

from math import sqrt
from typing import List

import numpy as np
from pydantic import BaseModel, Field
from sklearn.metrics import accuracy_score, confusion_matrix

from ian_networks.data import Dataset
from ian_networks.model import Network, ShapeError, predict_batch

CI_Z_SCORE = 1.96
CI_DESCRIPTION = "accuracy +- 1.96 * sqrt(acc * (1 - acc) / n_test), the binomial standard error at 95%"


class Metrics(BaseModel):
    """Accuracy of a network on a dataset together with its confusion matrix."""

    accuracy: float = Field(ge=0.0, le=1.0, description="Fraction of correctly predicted samples.")
    ci_halfwidth: float = Field(ge=0.0, description="Half width of the 95% confidence interval of the accuracy.")
    n_test: int = Field(gt=0, description="Number of evaluated samples.")
    confusion: List[List[int]] = Field(description="Counts indexed [true class][predicted class].")


def _check_dimensions(net: Network, data: Dataset) -> None:
    if net.input_dim != data.n_features:
        raise ShapeError(f"Network expects {net.input_dim} features, dataset has {data.n_features}")


def accuracy(net: Network, data: Dataset) -> float:
    _check_dimensions(net, data)
    return float(accuracy_score(data.y, predict_batch(net, data.X)))


def evaluate(net: Network, data: Dataset) -> Metrics:
    _check_dimensions(net, data)
    predictions = predict_batch(net, data.X)
    n_classes = max(data.n_classes, net.n_outputs if net.n_outputs > 1 else 2)
    confusion = confusion_matrix(data.y, predictions, labels=np.arange(n_classes))
    n_test = data.n_samples
    fraction = int(np.trace(confusion)) / n_test
    return Metrics(
        accuracy=fraction,
        ci_halfwidth=CI_Z_SCORE * sqrt(fraction * (1.0 - fraction) / n_test),
        n_test=n_test,
        confusion=confusion.tolist(),
    )
