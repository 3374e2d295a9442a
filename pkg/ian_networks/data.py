"""Datasets: CSV ingestion, synthetic generators, MONK-2, stratified splits and class weights."""

import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from logging import getLogger
from pathlib import Path
from typing import List, Sequence, Tuple
from warnings import warn

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError

_logger = getLogger(__name__)

_DENSE_INTEGER_LABEL = re.compile(r"^\d+$")


class DatasetFormatError(ValueError):
    pass


class EmptyClassError(ValueError):
    pass


class SingleSampleClassWarning(RuntimeWarning):
    pass


class SyntheticKind(str, Enum):
    """Two-feature synthetic problems, each defined by an inequality over uniform(-1, 1) samples."""

    BISECTOR = "bisector"
    XOR = "xor"
    PARABOLA = "parabola"
    CIRCLE = "circle"


class MonksDomain(str, Enum):
    """Attribute cardinalities: four values everywhere, or the official (3, 3, 2, 3, 4, 2)."""

    UNIFORM = "uniform"
    OFFICIAL = "official"


_MONKS_CARDINALITIES = {
    MonksDomain.UNIFORM: (4, 4, 4, 4, 4, 4),
    MonksDomain.OFFICIAL: (3, 3, 2, 3, 4, 2),
}


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with dense integer class labels. Arrays are read-only after construction."""

    X: np.ndarray
    y: np.ndarray
    n_classes: int
    feature_names: List[str] = field(default_factory=list)
    class_names: List[str] = field(default_factory=list)

    def __post_init__(self):
        features = np.array(self.X, dtype=np.float64)
        labels = np.array(self.y, dtype=np.int64)
        if features.ndim != 2 or features.shape[0] < 1:
            raise DatasetFormatError(f"Expected a non-empty [samples, features] matrix, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise DatasetFormatError(f"Expected {features.shape[0]} labels, got shape {labels.shape}")
        if self.n_classes < 1 or labels.min() < 0 or labels.max() >= self.n_classes:
            raise DatasetFormatError(f"Labels must lie in [0, {self.n_classes})")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "X", features)
        object.__setattr__(self, "y", labels)
        if not self.feature_names:
            object.__setattr__(self, "feature_names", [f"x{i + 1}" for i in range(features.shape[1])])
        if not self.class_names:
            object.__setattr__(self, "class_names", [str(c) for c in range(self.n_classes)])

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def feature_ranges(self) -> List[Tuple[float, float]]:
        return [(float(low), float(high)) for low, high in zip(self.X.min(axis=0), self.X.max(axis=0))]

    @property
    def class_counts(self) -> List[int]:
        return np.bincount(self.y, minlength=self.n_classes).tolist()

    def subset(self, indices: Sequence[int]) -> "Dataset":
        index_array = np.asarray(indices, dtype=np.int64)
        return Dataset(
            X=self.X[index_array],
            y=self.y[index_array],
            n_classes=self.n_classes,
            feature_names=list(self.feature_names),
            class_names=list(self.class_names),
        )


def _synthetic_labels(kind: SyntheticKind, features: np.ndarray, xor_conjunction: bool) -> np.ndarray:
    x1, x2 = features[:, 0], features[:, 1]
    if kind is SyntheticKind.BISECTOR:
        positive = x1 > x2
    elif kind is SyntheticKind.XOR:
        positive = (x1 > 0) & (x2 > 0) if xor_conjunction else (x1 > 0) ^ (x2 > 0)
    elif kind is SyntheticKind.PARABOLA:
        positive = x2 < 2 * x1**2 - 0.5
    else:
        positive = x1**2 + x2**2 < 0.5
    return positive.astype(np.int64)


def generate_synthetic(kind: SyntheticKind, n_samples: int, seed: int, xor_conjunction: bool = False) -> Dataset:
    """Samples two uniform(-1, 1) features and labels them with the inequality of ``kind``.

    ``xor_conjunction`` swaps the xor labelling for the literal "x1 > 0 and x2 > 0" formula.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    rng = np.random.default_rng(seed)
    features = rng.uniform(-1.0, 1.0, size=(n_samples, 2))
    labels = _synthetic_labels(kind, features, xor_conjunction)
    return Dataset(X=features, y=labels, n_classes=2)


def monks2_label(attributes: np.ndarray) -> np.ndarray:
    """Class 1 iff exactly two attributes equal 1."""
    return (np.sum(np.asarray(attributes) == 1, axis=-1) == 2).astype(np.int64)


def generate_monks2(
    domain: MonksDomain = MonksDomain.UNIFORM,
    full_enumeration: bool = True,
    seed: int = 0,
    n_samples: int = 169,
) -> Dataset:
    cardinalities = _MONKS_CARDINALITIES[domain]
    if full_enumeration:
        attributes = np.array(list(product(*(range(1, c + 1) for c in cardinalities))), dtype=np.float64)
    else:
        rng = np.random.default_rng(seed)
        attributes = np.column_stack([rng.integers(1, c + 1, size=n_samples) for c in cardinalities]).astype(
            np.float64
        )
    return Dataset(
        X=attributes,
        y=monks2_label(attributes),
        n_classes=2,
        feature_names=[f"a{i + 1}" for i in range(len(cardinalities))],
    )


def load_csv(path: Path) -> Dataset:
    """Reads a header + rows CSV with numeric features and the label in the last column.

    Labels that already are the dense integers 0..C-1 are kept, anything else is mapped to class indices in order of
    first appearance.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[], skipinitialspace=True)
    except EmptyDataError as error:
        raise DatasetFormatError(f'"{path}" is empty') from error
    except ParserError as error:
        raise DatasetFormatError(f'Ragged rows in "{path}": {error}') from error

    if frame.shape[1] < 2:
        raise DatasetFormatError(f'"{path}" needs at least one feature column and a label column')
    if frame.shape[0] == 0:
        raise DatasetFormatError(f'"{path}" has a header but no rows')

    missing = frame.isna()
    if missing.to_numpy().any():
        row = int(np.argmax(missing.any(axis=1).to_numpy()))
        raise DatasetFormatError(f'Ragged row {row + 2} in "{path}": expected {frame.shape[1]} cells')

    columns = list(frame.columns)
    feature_columns = []
    for column in columns[:-1]:
        values = pd.to_numeric(frame[column], errors="coerce")
        invalid = values.isna().to_numpy() | ~np.isfinite(values.to_numpy(dtype=np.float64))
        if invalid.any():
            row = int(np.argmax(invalid))
            raise DatasetFormatError(
                f'Cannot parse "{frame[column].iloc[row]}" as a number in row {row + 2}, column "{column}" of "{path}"'
            )
        feature_columns.append(values.to_numpy(dtype=np.float64))

    raw_labels = frame[columns[-1]].str.strip()
    empty = (raw_labels == "").to_numpy()
    if empty.any():
        raise DatasetFormatError(f'Missing label in row {int(np.argmax(empty)) + 2} of "{path}"')
    codes, class_names = _encode_labels(raw_labels)
    _logger.info("Loaded %d samples with %d classes from %s", len(codes), len(class_names), path)
    return Dataset(
        X=np.column_stack(feature_columns),
        y=codes,
        n_classes=len(class_names),
        feature_names=[str(column) for column in columns[:-1]],
        class_names=class_names,
    )


def _encode_labels(labels: pd.Series) -> Tuple[np.ndarray, List[str]]:
    if labels.map(lambda label: bool(_DENSE_INTEGER_LABEL.match(label))).all():
        values = labels.astype(np.int64).to_numpy()
        n_classes = int(values.max()) + 1
        if set(values.tolist()) == set(range(n_classes)):
            return values, [str(c) for c in range(n_classes)]
    codes, uniques = pd.factorize(labels, sort=False)
    return codes.astype(np.int64), [str(label) for label in uniques]


def save_csv(data: Dataset, path: Path) -> None:
    frame = pd.DataFrame(data.X, columns=data.feature_names)
    frame["label"] = np.asarray(data.class_names, dtype=object)[data.y]
    frame.to_csv(path, index=False)
    _logger.info("Wrote %d samples to %s", data.n_samples, path)


def split(data: Dataset, train_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """Seeded stratified split. Each class contributes round(train_fraction * count) samples to the train side,
    keeping at least one sample on each side when the class has two or more."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_indices: List[int] = []
    test_indices: List[int] = []
    for class_index in range(data.n_classes):
        members = np.flatnonzero(data.y == class_index)
        if members.size == 0:
            continue
        members = rng.permutation(members)
        if members.size == 1:
            message = f'Class "{data.class_names[class_index]}" has a single sample, it goes to the train side'
            warn(message, SingleSampleClassWarning)
            _logger.warning(message)
            n_train = 1
        else:
            n_train = int(np.floor(train_fraction * members.size + 0.5))
            n_train = min(max(n_train, 1), members.size - 1)
        train_indices.extend(members[:n_train].tolist())
        test_indices.extend(members[n_train:].tolist())
    return data.subset(sorted(train_indices)), data.subset(sorted(test_indices))


def class_weights(data: Dataset) -> np.ndarray:
    """Inverse-frequency weights N / (C * n_c), so a balanced dataset gets all ones."""
    counts = np.asarray(data.class_counts, dtype=np.float64)
    if np.any(counts == 0):
        empty = [data.class_names[c] for c in np.flatnonzero(counts == 0)]
        raise EmptyClassError(f"Classes without samples: {empty}")
    return data.n_samples / (data.n_classes * counts)

