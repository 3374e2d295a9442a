"""Heaviside IAN networks built by hand: orthant and box indicators, step sums and uniform approximators.

An orthant ``x >= a`` is one hidden neuron with processing functions ``H(x_i - a_i)`` whose count is compared to
``n - 0.5`` by the output neuron. A right-open box is the signed sum of the orthants anchored at its corners, and a
step function a weighted sum of boxes, all sharing one hidden layer and one output neuron.
"""

from itertools import product
from logging import getLogger
from math import isfinite
from pathlib import Path
from typing import Callable, Dict, List, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ian_networks.model import Head, InvalidArgumentError, Layer, Network, ProcessingKind, raw_output

_logger = getLogger(__name__)

Oracle = Callable[[np.ndarray], np.ndarray]

MAX_BOX_DIMENSION = 12
MAX_APPROXIMATOR_DIMENSION = 3
TOP_FACE_SHIFT = 1e-9
GRID_CHUNK_SIZE = 2048
UNIT_CUBE_NOTE = "sup error on a uniform grid of the unit cube only"


class UnsupportedSizeError(NotImplementedError):
    pass


class BoxSpec(BaseModel):
    """Right-open box, the product of the intervals [lows[i], highs[i])."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    lows: List[float] = Field(min_length=1, description="Closed lower bound per coordinate.")
    highs: List[float] = Field(min_length=1, description="Open upper bound per coordinate.")

    @model_validator(mode="after")
    def _check_bounds(self) -> "BoxSpec":
        if len(self.lows) != len(self.highs):
            raise ValueError(f"lows has {len(self.lows)} entries, highs {len(self.highs)}")
        for index, (low, high) in enumerate(zip(self.lows, self.highs)):
            if not low < high:
                raise ValueError(f"Coordinate {index} needs low < high, got [{low}, {high})")
        return self

    @property
    def dimension(self) -> int:
        return len(self.lows)


class StepTerm(BaseModel):
    """Box indicator scaled by a coefficient."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    coefficient: float = Field(description="Value the step function adds on the box.")
    box: BoxSpec = Field(description="Support of the term.")


class StepSum(BaseModel):
    """Finite sum of scaled box indicators."""

    model_config = ConfigDict(frozen=True)

    terms: List[StepTerm] = Field(min_length=1, description="Terms of the sum.")

    @model_validator(mode="after")
    def _check_dimensions(self) -> "StepSum":
        dimensions = {term.box.dimension for term in self.terms}
        if len(dimensions) != 1:
            raise ValueError(f"All boxes need the same dimension, got {sorted(dimensions)}")
        return self

    @property
    def dimension(self) -> int:
        return self.terms[0].box.dimension


class ApproximationRow(BaseModel):
    """Sup error of one uniform approximator."""

    m_tilde: int = Field(description="Cubes per axis.")
    grid_points_per_dim: int = Field(description="Verification grid resolution.")
    sup_error: float = Field(description="Largest absolute error over the grid.")
    note: str = Field(default=UNIT_CUBE_NOTE, description="Scope of the verification.")


def box_contains(box: BoxSpec, inputs: np.ndarray) -> np.ndarray:
    """Direct membership test of every row of ``inputs``."""
    points = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    return np.all((points >= np.asarray(box.lows)) & (points < np.asarray(box.highs)), axis=1)


def _corners(box: BoxSpec) -> List[tuple]:
    """(anchor, sign) of each orthant of the inclusion-exclusion; the sign is -1 per upper bound used."""
    corners = []
    for choice in product((False, True), repeat=box.dimension):
        anchor = [high if use_high else low for use_high, low, high in zip(choice, box.lows, box.highs)]
        corners.append((anchor, -1.0 if sum(choice) % 2 else 1.0))
    return corners


def _orthant_network(anchors: Sequence[Sequence[float]], coefficients: Sequence[float]) -> Network:
    n = len(anchors[0])
    hidden = Layer(w=[[1.0] * n for _ in anchors], b=[[float(value) for value in anchor] for anchor in anchors])
    output = Layer(
        w=[[1.0] * len(anchors)],
        b=[[n - 0.5] * len(anchors)],
        alpha=[[float(value) for value in coefficients]],
        out_bias=[0.0],
    )
    return Network(kind=ProcessingKind.HEAVISIDE, input_dim=n, head=Head.SIGMOID, layers=[hidden, output])


def build_orthant(anchor: Sequence[float]) -> Network:
    """Raw output 1 iff ``x_i >= anchor_i`` for every coordinate, else 0."""
    values = [float(value) for value in anchor]
    if not values or not all(isfinite(value) for value in values):
        raise InvalidArgumentError(f"Anchor must be a non-empty finite vector, got {anchor}")
    return _orthant_network([values], [1.0])


def _check_box_dimension(dimension: int) -> None:
    if dimension > MAX_BOX_DIMENSION:
        raise UnsupportedSizeError(
            f"Boxes of dimension {dimension} need 2^{dimension} orthants, at most {MAX_BOX_DIMENSION} are supported"
        )


def build_box_indicator(box: BoxSpec) -> Network:
    """Raw output 1 exactly on [lows, highs), 0 elsewhere."""
    return build_step_sum(StepSum(terms=[StepTerm(coefficient=1.0, box=box)]))


def build_step_sum(terms: StepSum) -> Network:
    """Raw output equals the sum of ``coefficient * indicator(box)`` over all terms."""
    _check_box_dimension(terms.dimension)
    anchors: List[List[float]] = []
    coefficients: List[float] = []
    for term in terms.terms:
        for anchor, sign in _corners(term.box):
            anchors.append(anchor)
            coefficients.append(sign * term.coefficient)
    _logger.debug("Step sum of %d terms uses %d orthants", len(terms.terms), len(anchors))
    return _orthant_network(anchors, coefficients)


def build_uniform_approximator(g: Oracle, m_tilde: int, n: int = 2) -> Network:
    """Step approximant of ``g`` on the unit cube: ``m_tilde^n`` cubes, each valued ``g`` at its center.

    Cubes are right-open except on the top faces, whose bounds are shifted to ``1 + TOP_FACE_SHIFT`` so the closed
    unit cube is covered.
    """
    if m_tilde < 1:
        raise InvalidArgumentError(f"m_tilde must be at least 1, got {m_tilde}")
    if n < 1:
        raise InvalidArgumentError(f"Dimension must be at least 1, got {n}")
    if n > MAX_APPROXIMATOR_DIMENSION:
        raise UnsupportedSizeError(
            f"Uniform approximators support up to {MAX_APPROXIMATOR_DIMENSION} dimensions, got {n}"
        )

    edges = [index / m_tilde for index in range(m_tilde)] + [1.0 + TOP_FACE_SHIFT]
    cells = list(product(range(m_tilde), repeat=n))
    centers = (np.asarray(cells, dtype=np.float64) + 0.5) / m_tilde
    values = np.asarray(g(centers), dtype=np.float64).reshape(-1)
    if values.shape[0] != len(cells):
        raise InvalidArgumentError(f"Oracle returned {values.shape[0]} values for {len(cells)} cube centers")

    terms = []
    for cell, center, value in zip(cells, centers, values):
        if not isfinite(value):
            raise InvalidArgumentError(f"Oracle is not finite at the center {center.tolist()} of cube {list(cell)}")
        box = BoxSpec(lows=[edges[index] for index in cell], highs=[edges[index + 1] for index in cell])
        terms.append(StepTerm(coefficient=float(value), box=box))
    return build_step_sum(StepSum(terms=terms))


def unit_grid(grid_points_per_dim: int, n: int) -> np.ndarray:
    axis = np.linspace(0.0, 1.0, grid_points_per_dim)
    return np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)


def grid_max_error(net: Network, oracle: Oracle, grid_points_per_dim: int, chunk_size: int = GRID_CHUNK_SIZE) -> float:
    """Largest ``|raw_output(net, x) - oracle(x)|`` over a uniform grid of the unit cube, endpoints included."""
    if grid_points_per_dim < 2:
        raise InvalidArgumentError(f"Need at least 2 grid points per dimension, got {grid_points_per_dim}")
    points = unit_grid(grid_points_per_dim, net.input_dim)
    worst = 0.0
    for start in range(0, points.shape[0], chunk_size):
        chunk = points[start : start + chunk_size]
        expected = np.asarray(oracle(chunk), dtype=np.float64).reshape(-1)
        worst = max(worst, float(np.max(np.abs(raw_output(net, chunk) - expected))))
    return worst


def approximation_report(
    g: Oracle, n: int, m_values: Sequence[int], grid_points_per_dim: int = 201
) -> List[ApproximationRow]:
    rows = []
    for m_tilde in m_values:
        net = build_uniform_approximator(g, m_tilde, n)
        error = grid_max_error(net, g, grid_points_per_dim)
        _logger.info("m_tilde=%d: sup error %.6g", m_tilde, error)
        rows.append(ApproximationRow(m_tilde=m_tilde, grid_points_per_dim=grid_points_per_dim, sup_error=error))
    return rows


def approximation_report_to_csv(rows: Sequence[ApproximationRow], path: Path) -> None:
    pd.DataFrame([row.model_dump() for row in rows]).to_csv(path, index=False)
    _logger.info("Wrote approximation report to %s", path)


def _mean(points: np.ndarray) -> np.ndarray:
    return np.mean(points, axis=1)


def _product(points: np.ndarray) -> np.ndarray:
    return np.prod(points, axis=1)


def _wave(points: np.ndarray) -> np.ndarray:
    return np.sin(2.0 * np.pi * points[:, 0]) * np.cos(np.pi * np.sum(points[:, 1:], axis=1))


TARGETS: Dict[str, Oracle] = {"mean": _mean, "product": _product, "wave": _wave}
