from itertools import product

import numpy as np
from pytest import fixture

from ian_networks.data import Dataset
from ian_networks.model import Head, Layer, Network, ProcessingKind


@fixture
def output_dir(tmp_path):
    """Fixture for writing results to. Can be changed to non temporary directory to review all results."""
    return tmp_path


def build_monks_network() -> Network:
    """Hand-built MONK-2 classifier: "exactly two of the six attributes equal 1"."""
    return Network(
        kind=ProcessingKind.HEAVISIDE,
        input_dim=6,
        head=Head.SIGMOID,
        layers=[
            Layer(w=[[-1.0] * 6], b=[[1.1] * 6]),
            Layer(w=[[1.0], [-1.0]], b=[[1.9], [2.1]]),
            Layer(w=[[1.0, 1.0]], b=[[0.5, 0.5]], alpha=[[1.0, 1.0]], out_bias=[1.9]),
        ],
    )


@fixture
def monks_network() -> Network:
    return build_monks_network()


@fixture
def monks_domain() -> np.ndarray:
    return np.array(list(product(range(1, 5), repeat=6)), dtype=np.float64)


@fixture
def tiny_dataset() -> Dataset:
    features = np.array([[0.0, 0.0], [0.1, 0.9], [0.9, 0.1], [1.0, 1.0], [0.2, 0.3], [0.8, 0.7]])
    return Dataset(X=features, y=np.array([0, 1, 1, 0, 0, 1]), n_classes=2)


@fixture
def three_class_dataset() -> Dataset:
    rng = np.random.default_rng(3)
    centers = np.array([[-1.0, -1.0], [1.0, -1.0], [0.0, 1.0]])
    labels = np.repeat(np.arange(3), 20)
    features = centers[labels] + rng.normal(0.0, 0.1, size=(60, 2))
    return Dataset(X=features, y=labels, n_classes=3, class_names=["a", "b", "c"])
