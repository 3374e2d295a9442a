"""SVG diagrams of IAN networks: one curve plot per processing function, grouped by neuron."""

from logging import getLogger
from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np
from matplotlib.axes import Axes
from matplotlib.figure import Figure

from ian_networks.interpret import Interval, layer_intervals, sample_curve
from ian_networks.model import LayerArrays, Network, ProcessingKind, network_arrays

_logger = getLogger(__name__)

CURVE_SAMPLES = 101
_SVG_STYLE = {"svg.fonttype": "none", "svg.hashsalt": "ian-networks", "font.size": 7}


def _threshold_label(kind: ProcessingKind, b: np.ndarray) -> str:
    if kind is ProcessingKind.TANH_PROD:
        return "b=(" + ", ".join(f"{value:.2f}" for value in b) + ")"
    return f"b={b[0]:.2f}"


def _draw_curve(axes: Axes, kind: ProcessingKind, w: np.ndarray, b: np.ndarray, interval: Interval) -> None:
    curve = sample_curve(kind, w, b, interval, CURVE_SAMPLES)
    if kind is ProcessingKind.HEAVISIDE:
        axes.step(curve[:, 0], curve[:, 1], where="post", color="tab:blue", linewidth=1.0)
    else:
        axes.plot(curve[:, 0], curve[:, 1], color="tab:blue", linewidth=1.0)
    for threshold in b:
        if interval[0] <= threshold <= interval[1]:
            axes.axvline(threshold, color="tab:gray", linestyle=":", linewidth=0.8)
    axes.set_xlim(*interval)
    axes.set_ylim(-0.05, 1.05)
    axes.set_yticks([0.0, 1.0])
    axes.tick_params(length=2, pad=1)


def _draw_neuron(
    figure: Figure,
    grid_rows: int,
    grid_columns: int,
    column: int,
    kind: ProcessingKind,
    arrays: LayerArrays,
    neuron: int,
    intervals: Sequence[Interval],
    title: str,
) -> None:
    for position, interval in enumerate(intervals):
        axes = figure.add_subplot(grid_rows, grid_columns, position * grid_columns + column + 1)
        axes.set_gid(f"curve-{title}-input{position + 1}")
        w, b = arrays.w[neuron, position], arrays.b[neuron, position]
        _draw_curve(axes, kind, w, b, interval)
        label = _threshold_label(kind, b)
        if arrays.alpha is not None:
            label += f"  α={arrays.alpha[neuron, position]:.2f}"
        axes.set_title(label, fontsize=6, pad=2)
        if position == 0:
            axes.annotate(title, (0.5, 1.35), xycoords="axes fraction", ha="center", fontweight="bold")
    summary = "Σ"
    if arrays.out_bias is not None:
        summary += f" − b*={arrays.out_bias[neuron]:.2f}"
    last = figure.axes[-1]
    last.annotate(summary, (0.5, -0.45), xycoords="axes fraction", ha="center", color="tab:red")


def render_network(net: Network, domain: Sequence[Interval], output_path: Path) -> Path:
    """Draws every processing function of ``net`` over its input range into a byte-stable SVG file.

    Columns are neurons from the input side to the output side, rows are the inputs of each neuron. Every plot is
    labelled with its thresholds (and ``alpha`` in the output layer), and every neuron with its aggregation
    (``Σ`` minus ``b*`` for output neurons).
    """
    params = network_arrays(net)
    grid_columns = sum(net.layer_sizes)
    grid_rows = max(arrays.w.shape[1] for arrays in params)
    with matplotlib.rc_context(_SVG_STYLE):
        figure = Figure(figsize=(1.8 * grid_columns + 0.5, 1.3 * grid_rows + 0.8))
        column = 0
        for layer_index, arrays in enumerate(params):
            intervals = layer_intervals(net, domain, layer_index)
            for neuron in range(arrays.w.shape[0]):
                title = f"layer{layer_index + 1}-neuron{neuron + 1}"
                _draw_neuron(figure, grid_rows, grid_columns, column, net.kind, arrays, neuron, intervals, title)
                column += 1
        figure.suptitle(f"{net.kind.value} network, layers {net.layer_sizes}, {net.head.value} head")
        figure.subplots_adjust(hspace=1.0, wspace=0.5)
        figure.savefig(output_path, format="svg", metadata={"Date": None})
    _logger.info("Wrote diagram to %s", output_path)
    return output_path
