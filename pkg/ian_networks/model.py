"""Inverted artificial neuron (IAN) networks.

Every neuron applies a processing function to each of its inputs separately and sums the results. The output layer
scales each processed input by a trainable ``alpha`` and subtracts a trainable ``out_bias`` before the head turns the
sums into class probabilities.
"""

from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

_logger = getLogger(__name__)

Matrix = List[List[float]]
Tensor3 = List[List[List[float]]]


class InvalidArgumentError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class ModelDocumentError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f'Malformed model document at "{path}": {message}')
        self.path = path


class _ShapeViolation(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ProcessingKind(str, Enum):
    """Processing function applied to every input of a neuron before the summation."""

    HEAVISIDE = "heaviside"
    SIGMOID = "sigmoid"
    TANH_PROD = "tanh_prod"


class Head(str, Enum):
    """Maps the output layer sums to class probabilities."""

    SIGMOID = "sigmoid"
    SOFTMAX = "softmax"


class NeuronParams(BaseModel):
    """Processing parameters of a single neuron, one entry per input (a list of factors for tanh-prod)."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    w: Union[List[float], Matrix] = Field(description="Slopes of the processing functions.")
    b: Union[List[float], Matrix] = Field(description="Thresholds of the processing functions.")


class Layer(BaseModel):
    """One layer of neurons. Only the last layer of a network carries ``alpha`` and ``out_bias``."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    w: Union[Matrix, Tensor3] = Field(description="Slopes, indexed [neuron][input] or [neuron][input][factor].")
    b: Union[Matrix, Tensor3] = Field(description="Thresholds, same layout as w.")
    alpha: Optional[Matrix] = Field(default=None, description="Output scales [neuron][input], output layer only.")
    out_bias: Optional[List[float]] = Field(default=None, description="Output bias per neuron, output layer only.")

    @property
    def neurons(self) -> List[NeuronParams]:
        return [NeuronParams(w=w, b=b) for w, b in zip(self.w, self.b)]

    @property
    def size(self) -> int:
        return len(self.w)


class Network(BaseModel):
    """A layered IAN classifier with summation as aggregation and identity as inner activation."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kind: ProcessingKind = Field(description="Processing function used by every neuron.")
    m: int = Field(default=1, ge=1, description="Number of tanh factors, 1 unless kind is tanh_prod.")
    input_dim: int = Field(gt=0, description="Number of input features.")
    head: Head = Field(description="Output head, sigmoid for one output neuron, softmax otherwise.")
    layers: List[Layer] = Field(min_length=1, description="Layers from input to output.")

    @model_validator(mode="after")
    def _check_invariants(self) -> "Network":
        violation = _find_violation(self)
        if violation is not None:
            raise _ShapeViolation(*violation)
        return self

    @property
    def n_outputs(self) -> int:
        return self.layers[-1].size

    @property
    def layer_sizes(self) -> List[int]:
        return [layer.size for layer in self.layers]


def _find_violation(net: Network) -> Optional[Tuple[str, str]]:
    if net.kind is not ProcessingKind.TANH_PROD and net.m != 1:
        return "m", f"must be 1 for {net.kind.value} networks, got {net.m}"

    n_in = net.input_dim
    last_index = len(net.layers) - 1
    for layer_index, layer in enumerate(net.layers):
        path = f"layers.{layer_index}"
        if layer.size == 0:
            return f"{path}.w", "layer has no neurons"
        for name in ("w", "b"):
            values = getattr(layer, name)
            if len(values) != layer.size:
                return f"{path}.{name}", f"expected {layer.size} neurons, got {len(values)}"
            for neuron_index, neuron_values in enumerate(values):
                if len(neuron_values) != n_in:
                    return f"{path}.{name}.{neuron_index}", f"expected {n_in} inputs, got {len(neuron_values)}"
                for input_index, entry in enumerate(neuron_values):
                    entry_path = f"{path}.{name}.{neuron_index}.{input_index}"
                    if net.kind is ProcessingKind.TANH_PROD:
                        if not isinstance(entry, list) or len(entry) != net.m:
                            return entry_path, f"expected a list of {net.m} factors"
                    elif isinstance(entry, list):
                        return entry_path, "expected a single number"

        is_output = layer_index == last_index
        if is_output != (layer.alpha is not None):
            return f"{path}.alpha", "alpha must be present on exactly the output layer"
        if is_output != (layer.out_bias is not None):
            return f"{path}.out_bias", "out_bias must be present on exactly the output layer"
        if is_output:
            assert layer.alpha is not None and layer.out_bias is not None  # nosec: checked right above
            if len(layer.alpha) != layer.size or any(len(row) != n_in for row in layer.alpha):
                return f"{path}.alpha", f"expected shape [{layer.size}][{n_in}]"
            if len(layer.out_bias) != layer.size:
                return f"{path}.out_bias", f"expected {layer.size} entries"
        n_in = layer.size

    expected_head = Head.SIGMOID if net.layers[-1].size == 1 else Head.SOFTMAX
    if net.head is not expected_head:
        return "head", f"{net.layers[-1].size} output neurons require the {expected_head.value} head"
    return None


def validate_network(net: Network) -> None:
    """Re-checks the structural invariants of an already constructed network."""
    violation = _find_violation(net)
    if violation is not None:
        raise ShapeError(f"{violation[0]}: {violation[1]}")


@dataclass(frozen=True)
class LayerArrays:
    """Numeric view of a layer. ``w`` and ``b`` always carry a trailing factor axis: [neurons, inputs, factors]."""

    w: np.ndarray
    b: np.ndarray
    alpha: Optional[np.ndarray] = None
    out_bias: Optional[np.ndarray] = None


Parameters = List[LayerArrays]


def network_arrays(net: Network) -> Parameters:
    arrays = []
    n_in = net.input_dim
    for layer in net.layers:
        shape = (layer.size, n_in, net.m)
        arrays.append(
            LayerArrays(
                w=np.asarray(layer.w, dtype=np.float64).reshape(shape),
                b=np.asarray(layer.b, dtype=np.float64).reshape(shape),
                alpha=None if layer.alpha is None else np.asarray(layer.alpha, dtype=np.float64),
                out_bias=None if layer.out_bias is None else np.asarray(layer.out_bias, dtype=np.float64),
            )
        )
        n_in = layer.size
    return arrays


def network_from_arrays(kind: ProcessingKind, input_dim: int, params: Parameters) -> Network:
    m = params[0].w.shape[2]
    layers = []
    for arrays in params:
        w = arrays.w if kind is ProcessingKind.TANH_PROD else arrays.w[..., 0]
        b = arrays.b if kind is ProcessingKind.TANH_PROD else arrays.b[..., 0]
        layers.append(
            Layer(
                w=w.tolist(),
                b=b.tolist(),
                alpha=None if arrays.alpha is None else arrays.alpha.tolist(),
                out_bias=None if arrays.out_bias is None else arrays.out_bias.tolist(),
            )
        )
    head = Head.SIGMOID if params[-1].w.shape[0] == 1 else Head.SOFTMAX
    return Network(kind=kind, m=m, input_dim=input_dim, head=head, layers=layers)


def sigmoid(u: Any) -> np.ndarray:
    """Logistic function without overflow for large negative arguments."""
    values = np.asarray(u, dtype=np.float64)
    flat = values.reshape(-1)
    result = np.empty_like(flat)
    positive = flat >= 0
    result[positive] = 1.0 / (1.0 + np.exp(-flat[positive]))
    exp_negative = np.exp(flat[~positive])
    result[~positive] = exp_negative / (1.0 + exp_negative)
    return result.reshape(values.shape)


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = np.exp(z - np.max(z, axis=-1, keepdims=True))
    return shifted / np.sum(shifted, axis=-1, keepdims=True)


def processing_values(kind: ProcessingKind, w: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluates processing functions; the trailing factor axis of ``w``, ``b`` and ``x`` is reduced."""
    if kind is ProcessingKind.HEAVISIDE:
        # H(w(x - b)) with H(0) = 1, decided by comparison so tiny products cannot underflow to the wrong side.
        fires = np.where(w > 0, x >= b, np.where(w < 0, x <= b, True))
        return fires[..., 0].astype(np.float64)
    u = w * (x - b)
    if kind is ProcessingKind.SIGMOID:
        return sigmoid(u)[..., 0]
    return (np.prod(np.tanh(u), axis=-1) + 1.0) / 2.0


def eval_processing(kind: ProcessingKind, w: Any, b: Any, x: float) -> float:
    w_array = np.atleast_1d(np.asarray(w, dtype=np.float64))
    b_array = np.atleast_1d(np.asarray(b, dtype=np.float64))
    if w_array.ndim != 1 or w_array.shape != b_array.shape:
        raise ShapeError(f"w and b must be matching scalars or vectors, got {w_array.shape} and {b_array.shape}")
    if kind is not ProcessingKind.TANH_PROD and w_array.size != 1:
        raise ShapeError(f"{kind.value} processing takes scalar parameters, got {w_array.size} values")
    if not (np.all(np.isfinite(w_array)) and np.all(np.isfinite(b_array)) and np.isfinite(x)):
        raise InvalidArgumentError(f"Processing arguments must be finite, got w={w}, b={b}, x={x}")
    return float(processing_values(kind, w_array, b_array, np.full(w_array.shape, float(x))))


@dataclass(frozen=True)
class BatchTrace:
    """Values of a forward pass over a batch. Index 0 of every array is the sample."""

    inputs: List[np.ndarray]
    h_values: List[np.ndarray]
    sums: List[np.ndarray]
    z: np.ndarray
    probs: Optional[np.ndarray]


@dataclass(frozen=True)
class ForwardTrace:
    """Per layer inputs, processing values [neuron][input] and neuron sums of one sample, plus logits and
    probabilities."""

    inputs: List[np.ndarray]
    h_values: List[np.ndarray]
    sums: List[np.ndarray]
    z: np.ndarray
    probs: Optional[np.ndarray]


def weighted_sums(alpha: np.ndarray, h_values: np.ndarray) -> np.ndarray:
    return np.sum(alpha * h_values, axis=-1)


def propagate(kind: ProcessingKind, params: Parameters, inputs: np.ndarray, raw: bool = False) -> BatchTrace:
    """Forward pass of raw parameter arrays over a [samples, features] matrix."""
    layer_inputs = []
    all_h = []
    all_sums = []
    activations = inputs
    for arrays in params:
        layer_inputs.append(activations)
        h_values = processing_values(kind, arrays.w, arrays.b, activations[:, None, :, None])
        all_h.append(h_values)
        if arrays.alpha is None:
            sums = np.sum(h_values, axis=-1)
        else:
            sums = weighted_sums(arrays.alpha, h_values)
        all_sums.append(sums)
        activations = sums

    output = params[-1]
    assert output.out_bias is not None  # nosec: output layer invariant
    z = all_sums[-1] - output.out_bias
    probs = None
    if not raw:
        probs = sigmoid(z) if z.shape[1] == 1 else softmax(z)
    return BatchTrace(inputs=layer_inputs, h_values=all_h, sums=all_sums, z=z, probs=probs)


def _as_batch(net: Network, inputs: Any) -> np.ndarray:
    batch = np.asarray(inputs, dtype=np.float64)
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise ShapeError(f"Expected inputs of shape [samples, {net.input_dim}], got {batch.shape}")
    if not np.all(np.isfinite(batch)):
        raise InvalidArgumentError("Inputs must be finite")
    return batch


def forward_batch(net: Network, inputs: Any, raw: bool = False) -> BatchTrace:
    return propagate(net.kind, network_arrays(net), _as_batch(net, inputs), raw=raw)


def forward(net: Network, x: Sequence[float], raw: bool = False) -> ForwardTrace:
    sample = np.asarray(x, dtype=np.float64)
    if sample.ndim != 1:
        raise ShapeError(f"Expected a single sample vector, got shape {sample.shape}")
    trace = forward_batch(net, sample[None, :], raw=raw)
    return ForwardTrace(
        inputs=[values[0] for values in trace.inputs],
        h_values=[h[0] for h in trace.h_values],
        sums=[sums[0] for sums in trace.sums],
        z=trace.z[0],
        probs=None if trace.probs is None else trace.probs[0],
    )


def classes_from_logits(z: np.ndarray) -> np.ndarray:
    """Sigmoid head: class 1 iff sigma(z) > 0.5, i.e. z > 0, so a tie goes to class 0. Softmax head: argmax."""
    if z.shape[-1] == 1:
        return (z[..., 0] > 0).astype(np.int64)
    return np.argmax(z, axis=-1)


def predict_batch(net: Network, inputs: Any) -> np.ndarray:
    return classes_from_logits(forward_batch(net, inputs, raw=True).z)


def predict(net: Network, x: Sequence[float]) -> int:
    return int(classes_from_logits(forward(net, x, raw=True).z))


def raw_output(net: Network, inputs: Any) -> np.ndarray:
    """Pre-head output of the first output neuron for every sample."""
    return forward_batch(net, inputs, raw=True).z[:, 0]


def serialize(net: Network) -> str:
    return net.model_dump_json(indent=2)


def deserialize(document: str) -> Network:
    try:
        return Network.model_validate_json(document)
    except ValidationError as error:
        first = error.errors()[0]
        if first["type"] == "json_invalid":
            raise ModelDocumentError("$", first["msg"]) from error
        cause = first.get("ctx", {}).get("error")
        if isinstance(cause, _ShapeViolation):
            raise ModelDocumentError(cause.path, str(cause)) from error
        path = ".".join(str(part) for part in first["loc"]) or "$"
        raise ModelDocumentError(path, first["msg"]) from error


def save_network(net: Network, path: Path) -> None:
    path.write_text(serialize(net), encoding="utf-8")
    _logger.info("Wrote model to %s", path)


def load_network(path: Path) -> Network:
    return deserialize(path.read_text(encoding="utf-8"))
