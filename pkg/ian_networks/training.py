"""Gradients, Adam and the early-stopped training loop.

Heaviside networks are trained with a straight-through surrogate: the forward pass keeps the step function while the
backward pass uses the derivative of the sigmoid of the same argument.
"""

from dataclasses import dataclass, replace
from logging import getLogger
from math import isfinite, sqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ian_networks.data import Dataset, class_weights
from ian_networks.evaluation import accuracy
from ian_networks.model import (
    ForwardTrace,
    InvalidArgumentError,
    LayerArrays,
    Network,
    Parameters,
    ProcessingKind,
    ShapeError,
    network_arrays,
    network_from_arrays,
    propagate,
    sigmoid,
    softmax,
)

_logger = getLogger(__name__)

_TINY = np.finfo(np.float64).tiny


class TrainingDivergedError(RuntimeError):
    def __init__(self, epoch: int, batch: int, value: float):
        super().__init__(f"Training loss became {value} in epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


class TrainConfig(BaseModel):
    """Hyper parameters of a training run."""

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.1, gt=0.0, description="Adam step size.")
    batch_size: int = Field(default=128, gt=0, description="Samples per minibatch, the last partial batch is kept.")
    max_epochs: int = Field(default=10000, gt=0, description="Hard limit on the number of epochs.")
    es_patience: int = Field(default=250, gt=0, description="Epochs without sufficient improvement before stopping.")
    es_min_delta: float = Field(default=0.01, ge=0.0, description="Loss decrease that counts as an improvement.")
    seed: int = Field(default=0, description="Seed of the epoch shuffling.")


class TrainReport(BaseModel):
    """Outcome of a training run."""

    epochs_run: int = Field(description="Number of completed epochs.")
    final_train_loss: float = Field(description="Training loss of the returned (best) parameters.")
    loss_history: List[float] = Field(
        description="Full training set loss of the parameters at the end of every epoch."
    )
    stopped_early: bool = Field(description="Whether early stopping ended the run before max_epochs.")
    best_epoch: int = Field(description="1-based epoch whose parameters are returned.")


Gradients = Parameters


def loss(probs: Sequence[float], target: int, class_weight: float = 1.0) -> float:
    """Weighted negative log-likelihood of ``target`` under a head output.

    A single probability is a sigmoid head output for class 1.
    """
    values = np.atleast_1d(np.asarray(probs, dtype=np.float64))
    if class_weight <= 0:
        raise InvalidArgumentError(f"class_weight must be positive, got {class_weight}")
    n_classes = 2 if values.size == 1 else values.size
    if not 0 <= target < n_classes:
        raise InvalidArgumentError(f"target {target} out of range for {n_classes} classes")
    if values.size == 1:
        probability = values[0] if target == 1 else 1.0 - values[0]
    else:
        probability = values[target]
    return float(class_weight * -np.log(max(probability, _TINY)))


def _negative_log_likelihood(z: np.ndarray, targets: np.ndarray) -> np.ndarray:
    if z.shape[1] == 1:
        logits = z[:, 0]
        return np.where(targets == 1, np.logaddexp(0.0, -logits), np.logaddexp(0.0, logits))
    peak = np.max(z, axis=1)
    log_normalizer = peak + np.log(np.sum(np.exp(z - peak[:, None]), axis=1))
    return log_normalizer - z[np.arange(z.shape[0]), targets]


def weighted_batch_loss(z: np.ndarray, targets: np.ndarray, sample_weights: np.ndarray) -> float:
    """Weighted mean of the sample losses, normalised by the total weight.

    A sample of weight k contributes exactly as k copies of weight 1. With unit weights this is the plain mean.
    """
    return float(np.sum(sample_weights * _negative_log_likelihood(z, targets)) / np.sum(sample_weights))


def batch_loss(net: Network, inputs: np.ndarray, targets: np.ndarray, sample_weights: np.ndarray) -> float:
    trace = propagate(net.kind, network_arrays(net), np.asarray(inputs, dtype=np.float64), raw=True)
    return weighted_batch_loss(trace.z, np.asarray(targets), np.asarray(sample_weights, dtype=np.float64))


def _processing_derivative(kind: ProcessingKind, u: np.ndarray) -> np.ndarray:
    if kind is not ProcessingKind.TANH_PROD:
        # The Heaviside kind borrows the sigmoid derivative.
        s = sigmoid(u)
        return s * (1.0 - s)
    t = np.tanh(u)
    derivative = np.empty_like(t)
    for factor in range(t.shape[-1]):
        others = np.prod(np.delete(t, factor, axis=-1), axis=-1)
        derivative[..., factor] = 0.5 * (1.0 - t[..., factor] ** 2) * others
    return derivative


def backward_batch(
    kind: ProcessingKind,
    params: Parameters,
    inputs: Sequence[np.ndarray],
    h_values: Sequence[np.ndarray],
    z: np.ndarray,
    targets: np.ndarray,
    sample_weights: np.ndarray,
    normalizer: Optional[float] = None,
) -> Gradients:
    """Gradients of the weighted batch loss with respect to every parameter array.

    The weighted sum of sample losses is divided by ``normalizer``, which defaults to the total weight.
    """
    n_samples = targets.shape[0]
    if normalizer is None:
        normalizer = float(np.sum(sample_weights))
    if z.shape[1] == 1:
        delta = (sigmoid(z[:, 0]) - targets)[:, None]
    else:
        delta = softmax(z)
        delta[np.arange(n_samples), targets] -= 1.0
    delta = delta * (sample_weights / normalizer)[:, None]

    gradients: List[LayerArrays] = []
    for index in reversed(range(len(params))):
        arrays = params[index]
        h = h_values[index]
        grad_alpha = None
        grad_out_bias = None
        if arrays.alpha is not None:
            grad_alpha = np.einsum("no,noi->oi", delta, h)
            grad_out_bias = -np.sum(delta, axis=0)
            delta_h = delta[:, :, None] * arrays.alpha[None, :, :]
        else:
            delta_h = np.broadcast_to(delta[:, :, None], h.shape)

        offsets = inputs[index][:, None, :, None] - arrays.b
        delta_u = delta_h[..., None] * _processing_derivative(kind, arrays.w * offsets)
        delta_times_w = delta_u * arrays.w
        gradients.append(
            LayerArrays(
                w=np.sum(delta_u * offsets, axis=0),
                b=-np.sum(delta_times_w, axis=0),
                alpha=grad_alpha,
                out_bias=grad_out_bias,
            )
        )
        delta = np.sum(delta_times_w, axis=(1, 3))
    gradients.reverse()
    return gradients


def backward(net: Network, trace: ForwardTrace, target: int, class_weight: float = 1.0) -> Gradients:
    params = network_arrays(net)
    stale = len(trace.h_values) != len(params) or any(
        h.shape != arrays.w.shape[:2] for h, arrays in zip(trace.h_values, params)
    )
    if stale or trace.inputs[0].shape != (net.input_dim,):
        raise InvalidArgumentError("Trace does not belong to this network")
    n_classes = 2 if net.n_outputs == 1 else net.n_outputs
    if not 0 <= target < n_classes:
        raise InvalidArgumentError(f"target {target} out of range for {n_classes} classes")
    return backward_batch(
        net.kind,
        params,
        [values[None, :] for values in trace.inputs],
        [h[None, ...] for h in trace.h_values],
        trace.z[None, :],
        np.array([target]),
        np.array([class_weight], dtype=np.float64),
        normalizer=1.0,
    )


@dataclass(frozen=True)
class AdamState:
    """First and second moment accumulators, one per parameter array, and the number of steps taken."""

    first_moments: List[np.ndarray]
    second_moments: List[np.ndarray]
    step: int = 0

    @classmethod
    def zeros_like(cls, params: Sequence[np.ndarray]) -> "AdamState":
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params])


def adam_step(
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    state: AdamState,
    learning_rate: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> Tuple[List[np.ndarray], AdamState]:
    if len(params) != len(grads) or any(p.shape != g.shape for p, g in zip(params, grads)):
        raise ShapeError("Parameters and gradients are not shape congruent")
    step = state.step + 1
    first = [beta1 * m + (1.0 - beta1) * g for m, g in zip(state.first_moments, grads)]
    second = [beta2 * v + (1.0 - beta2) * g * g for v, g in zip(state.second_moments, grads)]
    first_correction = 1.0 - beta1**step
    second_correction = 1.0 - beta2**step
    updated = [
        p - learning_rate * (m / first_correction) / (np.sqrt(v / second_correction) + epsilon)
        for p, m, v in zip(params, first, second)
    ]
    return updated, AdamState(first, second, step)


def flatten(params: Parameters) -> List[np.ndarray]:
    leaves = []
    for arrays in params:
        leaves.extend([arrays.w, arrays.b])
        if arrays.alpha is not None and arrays.out_bias is not None:
            leaves.extend([arrays.alpha, arrays.out_bias])
    return leaves


def unflatten(template: Parameters, leaves: Sequence[np.ndarray]) -> Parameters:
    rebuilt = []
    position = 0
    for arrays in template:
        if arrays.alpha is None:
            rebuilt.append(replace(arrays, w=leaves[position], b=leaves[position + 1]))
            position += 2
        else:
            rebuilt.append(LayerArrays(*leaves[position : position + 4]))
            position += 4
    return rebuilt


def init_network(
    kind: ProcessingKind,
    architecture: Sequence[int],
    feature_ranges: Sequence[Tuple[float, float]],
    seed: int,
    m: int = 2,
) -> Network:
    """Glorot-uniform slopes, first layer thresholds uniform over each feature's range, deeper thresholds uniform
    over [0, inputs of the layer], alpha 1 and out_bias 0. ``architecture`` lists every layer including the output.
    """
    if not architecture or any(size < 1 for size in architecture):
        raise InvalidArgumentError(f"Architecture needs positive layer sizes, got {list(architecture)}")
    factors = m if kind is ProcessingKind.TANH_PROD else 1
    rng = np.random.default_rng(seed)
    lows = np.array([low for low, _ in feature_ranges], dtype=np.float64)
    highs = np.array([high for _, high in feature_ranges], dtype=np.float64)

    params: List[LayerArrays] = []
    n_in = len(feature_ranges)
    for index, size in enumerate(architecture):
        shape = (size, n_in, factors)
        limit = sqrt(6.0 / (n_in + size))
        w = rng.uniform(-limit, limit, size=shape)
        if index == 0:
            b = rng.uniform(lows[None, :, None], highs[None, :, None], size=shape)
        else:
            b = rng.uniform(0.0, float(n_in), size=shape)
        is_output = index == len(architecture) - 1
        params.append(
            LayerArrays(
                w=w,
                b=b,
                alpha=np.ones((size, n_in)) if is_output else None,
                out_bias=np.zeros(size) if is_output else None,
            )
        )
        n_in = size
    return network_from_arrays(kind, len(feature_ranges), params)


class EarlyStopping:
    """Stops once the monitored loss failed to drop at least ``min_delta`` below the best value for ``patience``
    consecutive epochs."""

    def __init__(self, patience: int, min_delta: float):
        self._patience = patience
        self._min_delta = min_delta
        self._reference = float("inf")
        self._wait = 0

    def update(self, value: float) -> bool:
        if value <= self._reference - self._min_delta:
            self._reference = value
            self._wait = 0
            return False
        self._wait += 1
        return self._wait >= self._patience


def _check_compatible(net: Network, data: Dataset) -> None:
    if net.input_dim != data.n_features:
        raise ShapeError(f"Network expects {net.input_dim} features, dataset has {data.n_features}")
    expected_outputs = 1 if data.n_classes == 2 else data.n_classes
    if net.n_outputs != expected_outputs:
        raise ShapeError(f"{data.n_classes} classes need {expected_outputs} output neurons, got {net.n_outputs}")


def train(net: Network, data: Dataset, cfg: TrainConfig) -> Tuple[Network, TrainReport]:
    _check_compatible(net, data)
    params = network_arrays(net)
    sample_weights = class_weights(data)[data.y]
    rng = np.random.default_rng(cfg.seed)
    leaves = flatten(params)
    state = AdamState.zeros_like(leaves)
    stopper = EarlyStopping(cfg.es_patience, cfg.es_min_delta)

    history: List[float] = []
    best_loss = float("inf")
    best_params = params
    best_epoch = 0
    stopped_early = False
    _logger.info("Training %s network %s on %d samples", net.kind.value, net.layer_sizes, data.n_samples)
    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(data.n_samples)
        for batch_index, start in enumerate(range(0, data.n_samples, cfg.batch_size)):
            batch = order[start : start + cfg.batch_size]
            targets = data.y[batch]
            weights = sample_weights[batch]
            trace = propagate(net.kind, params, data.X[batch], raw=True)
            value = weighted_batch_loss(trace.z, targets, weights)
            if not isfinite(value):
                raise TrainingDivergedError(epoch, batch_index, value)
            grads = backward_batch(net.kind, params, trace.inputs, trace.h_values, trace.z, targets, weights)
            leaves, state = adam_step(leaves, flatten(grads), state, cfg.learning_rate)
            params = unflatten(params, leaves)
        # loss of the end-of-epoch parameters on the full training set
        epoch_loss = weighted_batch_loss(propagate(net.kind, params, data.X, raw=True).z, data.y, sample_weights)
        history.append(epoch_loss)
        _logger.debug("Epoch %d: loss %.6f", epoch, epoch_loss)
        if epoch_loss < best_loss:
            best_loss, best_params, best_epoch = epoch_loss, params, epoch
        if stopper.update(epoch_loss):
            stopped_early = True
            _logger.info("Early stop after %d epochs, best loss %.6f in epoch %d", epoch, best_loss, best_epoch)
            break

    report = TrainReport(
        epochs_run=len(history),
        final_train_loss=best_loss,
        loss_history=history,
        stopped_early=stopped_early,
        best_epoch=best_epoch,
    )
    return network_from_arrays(net.kind, net.input_dim, best_params), report


class BestOfRun(BaseModel):
    """Best network over several seeded training runs, judged by training accuracy."""

    network: Network
    report: TrainReport
    accuracy: float
    seed: int


def train_best_of(
    kind: ProcessingKind,
    architecture: Sequence[int],
    data: Dataset,
    cfg: TrainConfig,
    seeds: Sequence[int],
    target_accuracy: Optional[float] = None,
    m: int = 2,
) -> BestOfRun:
    """Trains one network per seed and keeps the most accurate; stops early once ``target_accuracy`` is reached."""
    best: Optional[BestOfRun] = None
    for seed in seeds:
        initial = init_network(kind, architecture, data.feature_ranges, seed, m=m)
        trained, report = train(initial, data, cfg.model_copy(update={"seed": seed}))
        run_accuracy = accuracy(trained, data)
        _logger.info("Seed %d reached training accuracy %.4f", seed, run_accuracy)
        if best is None or run_accuracy > best.accuracy:
            best = BestOfRun(network=trained, report=report, accuracy=run_accuracy, seed=seed)
        if target_accuracy is not None and run_accuracy >= target_accuracy:
            break
    if best is None:
        raise InvalidArgumentError("At least one seed is required")
    return best
