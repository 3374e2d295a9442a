"""Rules and shape classes read off trained IAN networks.

Heaviside networks translate exactly: first layer processing functions become threshold atoms, deeper ones M-of-N
aggregates over the rules of the neuron feeding them, and the output layer a table over all activation patterns of
its processing functions. Sigmoid and tanh-prod networks go through the same translation after each processing
function is read as a threshold (or interval) rule, which makes the result an approximation.
"""

from dataclasses import dataclass
from logging import getLogger
from math import ceil, floor
from pathlib import Path
from typing import Annotated, Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union
from warnings import warn

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ian_networks.model import (
    Network,
    ProcessingKind,
    classes_from_logits,
    network_arrays,
    processing_values,
    weighted_sums,
)

_logger = getLogger(__name__)

Interval = Tuple[float, float]


class TruncatedEnumerationWarning(RuntimeWarning):
    pass


class ApproximateRuleWarning(RuntimeWarning):
    pass


class TruncatedRulesError(NotImplementedError):
    pass


class Atom(BaseModel):
    """Threshold test on a single input feature."""

    type: Literal["atom"] = "atom"
    feature: int = Field(ge=0, description="0-based index of the feature.")
    relation: Literal[">=", "<="] = Field(description="Comparison of the feature against the threshold.")
    threshold: float = Field(description="Threshold, the stored b parameter for Heaviside networks.")
    approximate: bool = Field(default=False, description="Read off a smooth processing function.")
    out_of_range: bool = Field(default=False, description="Threshold lies outside the analysed input interval.")


class ConstTrue(BaseModel):
    """Rule that always holds."""

    type: Literal["true"] = "true"


class ConstFalse(BaseModel):
    """Rule that never holds."""

    type: Literal["false"] = "false"


class Not(BaseModel):
    """Negation of a rule."""

    type: Literal["not"] = "not"
    rule: "Rule" = Field(description="Negated rule.")


class MofN(BaseModel):
    """Holds iff at least ``m`` of ``rules`` hold."""

    type: Literal["m_of_n"] = "m_of_n"
    m: int = Field(ge=1, description="Number of rules that must hold.")
    rules: List["Rule"] = Field(description="Constituent rules.")
    boundary: bool = Field(default=False, description="Threshold was an integer, so the bound itself activates.")
    approximate: bool = Field(default=False, description="Read off a smooth processing function.")

    @model_validator(mode="after")
    def _check_m(self) -> "MofN":
        if self.m > len(self.rules):
            raise ValueError(f"m={self.m} exceeds the {len(self.rules)} constituent rules")
        return self


class CaseEntry(BaseModel):
    """Class decided for one activation pattern of the output layer's processing functions."""

    mask: int = Field(ge=0, description="Bit j set iff processing function j (output-major order) is active.")
    weight_sums: List[float] = Field(description="Sum of the active alphas per output neuron.")
    predicted_class: int = Field(ge=0, description="Class the head assigns to this pattern.")


class CaseTable(BaseModel):
    """Every activation pattern of the output layer and the class it leads to."""

    type: Literal["case_table"] = "case_table"
    n_outputs: int = Field(gt=0, description="Number of output neurons.")
    inputs_per_output: int = Field(gt=0, description="Processing functions per output neuron.")
    inputs: List["Rule"] = Field(description="Rule of each processing function, output-major order.")
    entries: List[CaseEntry] = Field(description="One entry per mask, in mask order.")
    truncated: bool = Field(default=False, description="Enumeration was cut at the configured cap.")


Rule = Annotated[Union[Atom, ConstTrue, ConstFalse, Not, MofN, CaseTable], Field(discriminator="type")]

Not.model_rebuild()
MofN.model_rebuild()
CaseTable.model_rebuild()


class NetworkRules(BaseModel):
    """Rules of every processing function, indexed [layer][neuron][input], and the output case table."""

    kind: ProcessingKind = Field(description="Processing function of the source network.")
    approximate: bool = Field(description="Whether the rules only approximate the network.")
    feature_names: List[str] = Field(description="Names used when printing atoms.")
    hidden: List[List[List[Rule]]] = Field(description="Rules of the layers before the output layer.")
    output: CaseTable = Field(description="Output layer rules and case table.")

    def to_text(self) -> str:
        labels: Dict[int, str] = {}
        lines = []
        if self.approximate:
            lines.append("approximate rules: smooth processing functions read as thresholds")
        for layer_index, layer in enumerate(self.hidden):
            for neuron_index, neuron in enumerate(layer):
                for input_index, rule in enumerate(neuron):
                    label = f"R{layer_index + 1}.{neuron_index + 1}.{input_index + 1}"
                    lines.append(f"{label} = {rule_to_text(rule, self.feature_names, labels)}")
                    labels[id(rule)] = label
                prefix = f"{layer_index + 1}.{neuron_index + 1}"
                lines.append(f"y{prefix} = count of R{prefix}.*")
        output_layer = len(self.hidden) + 1
        for index, rule in enumerate(self.output.inputs):
            neuron, position = divmod(index, self.output.inputs_per_output)
            label = f"R{output_layer}.{neuron + 1}.{position + 1}"
            lines.append(f"{label} = {rule_to_text(rule, self.feature_names, labels)}")
        lines.append(case_table_text(self.output))
        return "\n".join(lines) + "\n"


class ShapeThresholds(BaseModel):
    """Cut-offs of the shape taxonomy."""

    tau_const: float = Field(default=0.05, gt=0.0, lt=1.0, description="Output span below which a curve is constant.")
    tau_steep: float = Field(
        default=0.05, gt=0.0, lt=1.0, description="Largest 0.1 to 0.9 transition width, relative to the interval."
    )
    r_squared: float = Field(default=0.99, gt=0.0, lt=1.0, description="Least squares fit needed for linear-like.")
    grid_points: int = Field(default=512, ge=8, description="Samples taken over the interval.")


class RuleExtractionConfig(BaseModel):
    """Settings of the rule extraction."""

    enumeration_cap: int = Field(
        default=20, gt=0, description="Most output processing functions whose patterns are enumerated."
    )
    shapes: ShapeThresholds = Field(default_factory=ShapeThresholds, description="Shape taxonomy settings.")


class Constant(BaseModel):
    """Processing function that barely changes over the interval."""

    type: Literal["constant"] = "constant"
    value: float = Field(description="Mean output over the interval.")


class StepLike(BaseModel):
    """Processing function that jumps between 0 and 1."""

    type: Literal["step"] = "step"
    direction: Literal["increasing", "decreasing"]
    threshold: Optional[float] = Field(description="Input where the output crosses 0.5.")
    out_of_range: bool = False


class LinearLike(BaseModel):
    """Processing function well fitted by a line."""

    type: Literal["linear"] = "linear"
    direction: Literal["increasing", "decreasing"]
    threshold: Optional[float] = Field(default=None, description="Input where the output crosses 0.5.")


class Bell(BaseModel):
    """Processing function with a single interior peak (or trough when inverted)."""

    type: Literal["bell"] = "bell"
    center: float = Field(description="Input of the extremum.")
    inverted: bool = Field(description="The extremum is a minimum.")
    lower: Optional[float] = Field(default=None, description="0.5 crossing left of the extremum.")
    upper: Optional[float] = Field(default=None, description="0.5 crossing right of the extremum.")


class FuzzyRule(BaseModel):
    """Monotone transition too gradual to be a step."""

    type: Literal["fuzzy"] = "fuzzy"
    direction: Literal["increasing", "decreasing"]
    threshold: Optional[float] = Field(description="Input where the output crosses 0.5.")
    sharpness: float = Field(description="Largest slope of the output over the interval.")
    out_of_range: bool = False


ShapeClass = Annotated[Union[Constant, StepLike, LinearLike, Bell, FuzzyRule], Field(discriminator="type")]

SHAPE_ORDER = {"constant": 0, "linear": 1, "fuzzy": 2, "step": 3, "bell": 4}


def sample_curve(
    kind: ProcessingKind, w: Sequence[float], b: Sequence[float], interval: Interval, k: int
) -> np.ndarray:
    """``k`` evenly spaced (x, h(x)) pairs including both interval ends."""
    if k < 2:
        raise ValueError(f"Need at least two samples, got {k}")
    w_array = np.atleast_1d(np.asarray(w, dtype=np.float64))
    b_array = np.atleast_1d(np.asarray(b, dtype=np.float64))
    xs = np.linspace(interval[0], interval[1], k)
    hs = processing_values(kind, w_array[None, :], b_array[None, :], xs[:, None])
    return np.column_stack([xs, hs])


def _crossing(
    xs: np.ndarray, hs: np.ndarray, level: float, start: int = 0, stop: Optional[int] = None
) -> Optional[float]:
    segment = slice(start, len(xs) if stop is None else stop)
    x, h = xs[segment], hs[segment] - level
    if h.size == 0:
        return None
    exact = np.flatnonzero(h == 0)
    changes = np.flatnonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0)
    candidates = []
    if exact.size:
        candidates.append((exact[0], float(x[exact[0]])))
    if changes.size:
        i = changes[0]
        candidates.append((i, float(x[i] - h[i] * (x[i + 1] - x[i]) / (h[i + 1] - h[i]))))
    if not candidates:
        return None
    return min(candidates)[1]


def _is_unimodal(hs: np.ndarray, peak: int) -> bool:
    steps = np.diff(hs)
    tolerance = 1e-12
    return bool(np.all(steps[:peak] >= -tolerance) and np.all(steps[peak:] <= tolerance))


def classify_shape(
    kind: ProcessingKind,
    w: Sequence[float],
    b: Sequence[float],
    interval: Interval,
    thresholds: Optional[ShapeThresholds] = None,
) -> ShapeClass:
    lo, hi = interval
    if not lo < hi:
        raise ValueError(f"Interval needs lo < hi, got {interval}")
    settings = thresholds or ShapeThresholds()
    curve = sample_curve(kind, w, b, interval, settings.grid_points)
    xs, hs = curve[:, 0], curve[:, 1]
    span = float(hs.max() - hs.min())
    if span < settings.tau_const:
        return Constant(value=float(hs.mean()))

    direction: Literal["increasing", "decreasing"] = "increasing" if hs[-1] >= hs[0] else "decreasing"
    midpoint = _crossing(xs, hs, 0.5)
    end_change = abs(float(hs[-1] - hs[0]))
    if end_change > 1.0 - settings.tau_const:
        low_level, high_level = (0.1, 0.9) if direction == "increasing" else (0.9, 0.1)
        start, end = _crossing(xs, hs, low_level), _crossing(xs, hs, high_level)
        if start is not None and end is not None and abs(end - start) < settings.tau_steep * (hi - lo):
            return StepLike(direction=direction, threshold=midpoint, out_of_range=midpoint is None)

    for inverted in (False, True):
        signed = -hs if inverted else hs
        peak = int(np.argmax(signed))
        rises = signed[peak] - max(signed[0], signed[-1]) > settings.tau_const
        if 0 < peak < len(hs) - 1 and rises and _is_unimodal(signed, peak):
            return Bell(
                center=float(xs[peak]),
                inverted=inverted,
                lower=_crossing(xs, hs, 0.5, 0, peak + 1),
                upper=_crossing(xs, hs, 0.5, peak),
            )

    slope, intercept = np.polyfit(xs, hs, 1)
    residual = float(np.sum((hs - (slope * xs + intercept)) ** 2))
    total = float(np.sum((hs - hs.mean()) ** 2))
    if 1.0 - residual / total > settings.r_squared:
        return LinearLike(direction="increasing" if slope >= 0 else "decreasing", threshold=midpoint)
    return FuzzyRule(
        direction=direction,
        threshold=midpoint,
        sharpness=float(np.max(np.abs(np.gradient(hs, xs)))),
        out_of_range=midpoint is None,
    )


@dataclass(frozen=True)
class _Decision:
    """Boolean reading of one processing function: 'always', 'ge', 'le', 'inside' or 'outside'."""

    form: str
    low: float = 0.0
    high: float = 0.0
    value: bool = True


def _decide(
    kind: ProcessingKind, w: np.ndarray, b: np.ndarray, interval: Interval, shapes: ShapeThresholds
) -> _Decision:
    if kind is not ProcessingKind.TANH_PROD:
        slope, threshold = float(w[0]), float(b[0])
        if slope > 0:
            return _Decision("ge", low=threshold)
        if slope < 0:
            return _Decision("le", low=threshold)
        # H(0) = 1, and a flat sigmoid sits at 0.5, read as active.
        return _Decision("always", value=True)

    shape = classify_shape(kind, w, b, interval, shapes)
    lo, hi = interval
    if isinstance(shape, Constant):
        return _Decision("always", value=shape.value >= 0.5)
    if isinstance(shape, Bell):
        if shape.lower is None and shape.upper is None:
            inside_active = not shape.inverted
            peak_value = float(processing_values(kind, w[None, :], b[None, :], np.array([[shape.center]]))[0])
            return _Decision("always", value=(peak_value >= 0.5) == inside_active)
        low = lo if shape.lower is None else shape.lower
        high = hi if shape.upper is None else shape.upper
        return _Decision("outside" if shape.inverted else "inside", low=low, high=high)
    direction, threshold = shape.direction, shape.threshold
    if threshold is None:
        middle = float(processing_values(kind, w[None, :], b[None, :], np.array([[(lo + hi) / 2]]))[0])
        return _Decision("always", value=middle >= 0.5)
    return _Decision("ge" if direction == "increasing" else "le", low=threshold)


def negate(rule: Rule) -> Rule:
    if isinstance(rule, ConstTrue):
        return ConstFalse()
    if isinstance(rule, ConstFalse):
        return ConstTrue()
    if isinstance(rule, Not):
        return rule.rule
    return Not(rule=rule)


def _both(first: Rule, second: Rule, approximate: bool) -> Rule:
    if isinstance(first, ConstFalse) or isinstance(second, ConstFalse):
        return ConstFalse()
    if isinstance(first, ConstTrue):
        return second
    if isinstance(second, ConstTrue):
        return first
    return MofN(m=2, rules=[first, second], approximate=approximate)


def _either(first: Rule, second: Rule, approximate: bool) -> Rule:
    if isinstance(first, ConstTrue) or isinstance(second, ConstTrue):
        return ConstTrue()
    if isinstance(first, ConstFalse):
        return second
    if isinstance(second, ConstFalse):
        return first
    return MofN(m=1, rules=[first, second], approximate=approximate)


def _feature_rule(decision: _Decision, feature: int, interval: Interval, approximate: bool) -> Rule:
    if decision.form == "always":
        return ConstTrue() if decision.value else ConstFalse()

    def atom(relation: Literal[">=", "<="], threshold: float) -> Atom:
        outside = not interval[0] <= threshold <= interval[1]
        return Atom(
            feature=feature, relation=relation, threshold=threshold, approximate=approximate, out_of_range=outside
        )

    if decision.form == "ge":
        return atom(">=", decision.low)
    if decision.form == "le":
        return atom("<=", decision.low)
    if decision.form == "inside":
        return _both(atom(">=", decision.low), atom("<=", decision.high), approximate)
    return _either(atom("<=", decision.low), atom(">=", decision.high), approximate)


def _count_rule(decision: _Decision, upstream: List[Rule], approximate: bool) -> Rule:
    """Rule over the number of true ``upstream`` rules, which is what a deeper neuron receives as input."""
    n = len(upstream)
    if decision.form == "always":
        return ConstTrue() if decision.value else ConstFalse()

    def at_least(threshold: float) -> Rule:
        m = ceil(threshold)
        if m <= 0:
            return ConstTrue()
        if m > n:
            return ConstFalse()
        return MofN(m=m, rules=list(upstream), boundary=float(threshold).is_integer(), approximate=approximate)

    def at_most(threshold: float) -> Rule:
        if threshold < 0:
            return ConstFalse()
        m = n - floor(threshold)
        if m <= 0:
            return ConstTrue()
        negated = [negate(rule) for rule in upstream]
        return MofN(m=m, rules=negated, boundary=float(threshold).is_integer(), approximate=approximate)

    if decision.form == "ge":
        return at_least(decision.low)
    if decision.form == "le":
        return at_most(decision.low)
    if decision.form == "inside":
        return _both(at_least(decision.low), at_most(decision.high), approximate)
    return _either(at_most(decision.low), at_least(decision.high), approximate)


def layer_intervals(net: Network, domain: Sequence[Interval], layer_index: int) -> List[Interval]:
    """Input range of every processing function in a layer: the feature ranges, or [0, n] for sums of n inputs."""
    if layer_index == 0:
        return [(float(lo), float(hi)) for lo, hi in domain]
    n_prev_inputs = net.input_dim if layer_index == 1 else net.layers[layer_index - 2].size
    return [(0.0, float(n_prev_inputs))] * net.layers[layer_index - 1].size


def _case_table(net: Network, rules: List[List[Rule]], cap: int) -> CaseTable:
    arrays = network_arrays(net)[-1]
    assert arrays.alpha is not None and arrays.out_bias is not None  # nosec: output layer invariant
    n_outputs, per_output = arrays.alpha.shape
    bits = n_outputs * per_output
    inputs = [rule for neuron in rules for rule in neuron]
    if bits > cap:
        message = f"Output layer has {bits} processing functions, enumeration is capped at {cap}"
        warn(message, TruncatedEnumerationWarning)
        _logger.warning(message)
        return CaseTable(n_outputs=n_outputs, inputs_per_output=per_output, inputs=inputs, entries=[], truncated=True)

    masks = np.arange(2**bits, dtype=np.int64)
    active = ((masks[:, None] >> np.arange(bits)) & 1).astype(np.float64).reshape(-1, n_outputs, per_output)
    sums = weighted_sums(arrays.alpha, active)
    classes = classes_from_logits(sums - arrays.out_bias)
    entries = [
        CaseEntry(mask=int(mask), weight_sums=sums[mask].tolist(), predicted_class=int(classes[mask])) for mask in masks
    ]
    return CaseTable(n_outputs=n_outputs, inputs_per_output=per_output, inputs=inputs, entries=entries)


def extract_rules(
    net: Network,
    domain: Sequence[Interval],
    config: Optional[RuleExtractionConfig] = None,
    feature_names: Optional[Sequence[str]] = None,
) -> NetworkRules:
    """Rules of every processing function of ``net``; exact for Heaviside networks, approximate otherwise."""
    settings = config or RuleExtractionConfig()
    if len(domain) != net.input_dim:
        raise ValueError(f"Expected {net.input_dim} feature ranges, got {len(domain)}")
    approximate = net.kind is not ProcessingKind.HEAVISIDE
    if approximate:
        message = f"Rules of a {net.kind.value} network only approximate its decisions"
        warn(message, ApproximateRuleWarning)
        _logger.warning(message)

    params = network_arrays(net)
    previous: List[List[Rule]] = []
    layers: List[List[List[Rule]]] = []
    for layer_index, arrays in enumerate(params):
        intervals = layer_intervals(net, domain, layer_index)
        layer_rules = []
        for neuron in range(arrays.w.shape[0]):
            neuron_rules = []
            for position, interval in enumerate(intervals):
                w, b = arrays.w[neuron, position], arrays.b[neuron, position]
                decision = _decide(net.kind, w, b, interval, settings.shapes)
                if layer_index == 0:
                    neuron_rules.append(_feature_rule(decision, position, interval, approximate))
                else:
                    neuron_rules.append(_count_rule(decision, previous[position], approximate))
            layer_rules.append(neuron_rules)
        layers.append(layer_rules)
        previous = layer_rules

    names = list(feature_names) if feature_names else [f"x{i + 1}" for i in range(net.input_dim)]
    return NetworkRules(
        kind=net.kind,
        approximate=approximate,
        feature_names=names,
        hidden=layers[:-1],
        output=_case_table(net, layers[-1], settings.enumeration_cap),
    )


def extract_heaviside_rules(
    net: Network, domain: Sequence[Interval], config: Optional[RuleExtractionConfig] = None
) -> NetworkRules:
    if net.kind is not ProcessingKind.HEAVISIDE:
        raise ValueError(f"Exact rules need a heaviside network, got {net.kind.value}")
    return extract_rules(net, domain, config)


def evaluate_rule(rule: Rule, inputs: np.ndarray, cache: Optional[Dict[int, np.ndarray]] = None) -> np.ndarray:
    """Truth value of ``rule`` for every row of ``inputs``. Shared sub-rules are evaluated once per cache."""
    memo = {} if cache is None else cache
    key = id(rule)
    if key in memo:
        return memo[key]
    if isinstance(rule, Atom):
        column = inputs[:, rule.feature]
        result = column >= rule.threshold if rule.relation == ">=" else column <= rule.threshold
    elif isinstance(rule, ConstTrue):
        result = np.ones(inputs.shape[0], dtype=bool)
    elif isinstance(rule, ConstFalse):
        result = np.zeros(inputs.shape[0], dtype=bool)
    elif isinstance(rule, Not):
        result = ~evaluate_rule(rule.rule, inputs, memo)
    elif isinstance(rule, MofN):
        counts = np.sum([evaluate_rule(child, inputs, memo) for child in rule.rules], axis=0)
        result = counts >= rule.m
    else:
        result = _case_table_classes(rule, inputs, memo) == 1
    memo[key] = result
    return result


def _case_table_classes(table: CaseTable, inputs: np.ndarray, memo: Dict[int, np.ndarray]) -> np.ndarray:
    if table.truncated:
        raise TruncatedRulesError("The case table was truncated, the rules cannot decide every input")
    masks = np.zeros(inputs.shape[0], dtype=np.int64)
    for bit, rule in enumerate(table.inputs):
        masks |= evaluate_rule(rule, inputs, memo).astype(np.int64) << bit
    classes = np.array([entry.predicted_class for entry in table.entries], dtype=np.int64)
    return classes[masks]


def rules_to_predictor(rules: Union[NetworkRules, Rule]) -> Callable[[np.ndarray], np.ndarray]:
    """Classifier over raw inputs. A bare rule predicts class 1 wherever it holds."""
    if isinstance(rules, NetworkRules) and rules.output.truncated:
        raise TruncatedRulesError("The case table was truncated, the rules cannot decide every input")

    def predictor(inputs: np.ndarray) -> np.ndarray:
        batch = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        if isinstance(rules, NetworkRules):
            return _case_table_classes(rules.output, batch, {})
        return evaluate_rule(rules, batch).astype(np.int64)

    return predictor


def _format_threshold(threshold: float) -> str:
    return f"{threshold:.2f}"


def rule_to_text(
    rule: Rule, feature_names: Optional[Sequence[str]] = None, labels: Optional[Dict[int, str]] = None
) -> str:
    """Human readable rule, e.g. "3-of-{x2 ≥ 3.08, x3 ≤ 5.14, x4 ≤ 1.74}". Sub-rules found in ``labels`` print as
    their label."""
    names = feature_names or []
    known = labels or {}

    def render(node: Rule, top: bool) -> str:
        if not top and id(node) in known:
            return known[id(node)]
        if isinstance(node, Atom):
            name = names[node.feature] if node.feature < len(names) else f"x{node.feature + 1}"
            relation = "≥" if node.relation == ">=" else "≤"
            return f"{name} {relation} {_format_threshold(node.threshold)}"
        if isinstance(node, ConstTrue):
            return "true"
        if isinstance(node, ConstFalse):
            return "false"
        if isinstance(node, Not):
            return f"¬{render(node.rule, False)}"
        if isinstance(node, MofN):
            inner = ", ".join(render(child, False) for child in node.rules)
            text = f"{node.m}-of-{{{inner}}}"
            return text + " [boundary]" if node.boundary else text
        return f"case table over {len(node.inputs)} processing functions"

    return render(rule, True)


def case_table_text(table: CaseTable) -> str:
    if table.truncated:
        return f"case table: truncated, {len(table.inputs)} processing functions exceed the enumeration cap"
    width = len(table.inputs)
    lines = ["case table (pattern of active output processing functions -> alpha sums -> class):"]
    for entry in table.entries:
        pattern = format(entry.mask, f"0{width}b")[::-1]
        sums = ", ".join(f"{value:.2f}" for value in entry.weight_sums)
        lines.append(f"  {pattern} -> ({sums}) -> class {entry.predicted_class}")
    return "\n".join(lines)


def curves_to_csv(net: Network, domain: Sequence[Interval], directory: Path, k: int = 101) -> List[Path]:
    """Writes the sampled curve of every processing function to ``layer{L}_neuron{J}_input{I}.csv``."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for layer_index, arrays in enumerate(network_arrays(net)):
        intervals = layer_intervals(net, domain, layer_index)
        for neuron in range(arrays.w.shape[0]):
            for position, interval in enumerate(intervals):
                curve = sample_curve(net.kind, arrays.w[neuron, position], arrays.b[neuron, position], interval, k)
                path = directory / f"layer{layer_index + 1}_neuron{neuron + 1}_input{position + 1}.csv"
                pd.DataFrame(curve, columns=["x", "h"]).to_csv(path, index=False)
                written.append(path)
    _logger.info("Wrote %d curves to %s", len(written), directory)
    return written
