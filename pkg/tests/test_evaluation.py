import numpy as np
from pytest import approx, raises

from ian_networks.data import Dataset, generate_monks2
from ian_networks.evaluation import accuracy, evaluate
from ian_networks.model import ProcessingKind, ShapeError, predict_batch
from ian_networks.training import init_network


def test_perfect_network_has_zero_interval(monks_network):
    metrics = evaluate(monks_network, generate_monks2())
    assert metrics.accuracy == 1.0
    assert metrics.ci_halfwidth == 0.0
    assert metrics.n_test == 4096
    assert sum(map(sum, metrics.confusion)) == 4096


def test_interval_of_half_accuracy(monks_network):
    positives = np.array([[1, 1, 2, 2, 2, 2]] * 50, dtype=float)
    negatives = np.array([[2, 2, 2, 2, 2, 2]] * 50, dtype=float)
    data = Dataset(X=np.vstack([positives, negatives]), y=np.array([0] * 50 + [0] * 50), n_classes=2)
    metrics = evaluate(monks_network, data)
    assert metrics.accuracy == approx(0.5)
    assert metrics.ci_halfwidth == approx(0.098, abs=1e-3)
    assert metrics.confusion == [[50, 50], [0, 0]]
    assert np.trace(metrics.confusion) == approx(metrics.accuracy * metrics.n_test)


def test_accuracy_checks_dimensions(monks_network, tiny_dataset):
    with raises(ShapeError):
        accuracy(monks_network, tiny_dataset)


def test_confusion_matrix_counts_every_class(three_class_dataset):
    net = init_network(ProcessingKind.SIGMOID, [2, 3], three_class_dataset.feature_ranges, seed=0)
    metrics = evaluate(net, three_class_dataset)
    predictions = predict_batch(net, three_class_dataset.X)
    assert len(metrics.confusion) == 3
    assert [sum(row) for row in metrics.confusion] == three_class_dataset.class_counts
    assert [sum(column) for column in zip(*metrics.confusion)] == np.bincount(predictions, minlength=3).tolist()
    assert metrics.accuracy == approx(accuracy(net, three_class_dataset))
