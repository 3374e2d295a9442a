import numpy as np
import pandas as pd
from pydantic import ValidationError
from pytest import approx, raises

from ian_networks.model import InvalidArgumentError, ProcessingKind, raw_output
from ian_networks.universality import (
    TARGETS,
    BoxSpec,
    StepSum,
    StepTerm,
    UnsupportedSizeError,
    approximation_report,
    approximation_report_to_csv,
    box_contains,
    build_box_indicator,
    build_orthant,
    build_step_sum,
    build_uniform_approximator,
    grid_max_error,
)


def test_orthant():
    net = build_orthant([0.5, 0.5])
    assert net.kind is ProcessingKind.HEAVISIDE
    assert raw_output(net, [[0.7, 0.6], [0.5, 0.5], [0.4, 0.9]]).tolist() == [1.0, 1.0, 0.0]
    with raises(InvalidArgumentError):
        build_orthant([0.0, float("nan")])


def test_box_indicator():
    net = build_box_indicator(BoxSpec(lows=[0.0, 0.0], highs=[1.0, 1.0]))
    assert net.layer_sizes == [4, 1]
    inputs = [[0.5, 0.5], [1.0, 0.5], [0.0, 0.0], [0.5, 1.0], [-0.1, 0.5]]
    assert raw_output(net, inputs).tolist() == [1.0, 0.0, 1.0, 0.0, 0.0]


def test_box_spec_validation():
    with raises(ValidationError):
        BoxSpec(lows=[0.0], highs=[0.0])
    with raises(ValidationError):
        BoxSpec(lows=[0.0, 0.0], highs=[1.0])
    with raises(ValidationError):
        StepSum(
            terms=[
                StepTerm(coefficient=1.0, box=BoxSpec(lows=[0.0], highs=[1.0])),
                StepTerm(coefficient=1.0, box=BoxSpec(lows=[0.0, 0.0], highs=[1.0, 1.0])),
            ]
        )


def _random_box(rng, dimension):
    corners = np.sort(rng.uniform(-1.0, 1.0, size=(2, dimension)), axis=0)
    return BoxSpec(lows=corners[0].tolist(), highs=corners[1].tolist())


def test_random_boxes_match_membership():
    rng = np.random.default_rng(11)
    for dimension, count in ((2, 50), (3, 20)):
        for _ in range(count):
            box = _random_box(rng, dimension)
            points = rng.uniform(-1.2, 1.2, size=(10_000, dimension))
            points[:10] = np.array(box.lows)
            points[10:20] = np.array(box.highs)
            expected = box_contains(box, points).astype(np.float64)
            assert np.array_equal(raw_output(build_box_indicator(box), points), expected)


def test_step_sum():
    low = BoxSpec(lows=[0.0, 0.0], highs=[0.5, 1.0])
    high = BoxSpec(lows=[0.25, 0.0], highs=[1.0, 1.0])
    net = build_step_sum(StepSum(terms=[StepTerm(coefficient=2.0, box=low), StepTerm(coefficient=-3.0, box=high)]))
    outputs = raw_output(net, [[0.1, 0.5], [0.3, 0.5], [0.7, 0.5], [1.5, 0.5]])
    assert outputs.tolist() == approx([2.0, -1.0, -3.0, 0.0])


def test_step_sum_is_linear_in_coefficients():
    rng = np.random.default_rng(5)
    boxes = [_random_box(rng, 2) for _ in range(4)]
    points = rng.uniform(-1.0, 1.0, size=(500, 2))
    first, second = rng.normal(size=4), rng.normal(size=4)

    def evaluate(coefficients):
        terms = [StepTerm(coefficient=float(c), box=box) for c, box in zip(coefficients, boxes)]
        return raw_output(build_step_sum(StepSum(terms=terms)), points)

    assert evaluate(first + second) == approx(evaluate(first) + evaluate(second))
    expected = sum(c * box_contains(box, points) for c, box in zip(first, boxes))
    assert evaluate(first) == approx(expected)


def test_unsupported_sizes():
    with raises(UnsupportedSizeError):
        build_box_indicator(BoxSpec(lows=[0.0] * 13, highs=[1.0] * 13))
    with raises(UnsupportedSizeError):
        build_uniform_approximator(TARGETS["mean"], 2, n=4)
    with raises(InvalidArgumentError):
        build_uniform_approximator(TARGETS["mean"], 0)


def test_uniform_approximation_converges():
    rows = approximation_report(TARGETS["mean"], 2, [1, 2, 4, 8, 16, 20])
    errors = [row.sup_error for row in rows]
    for row in rows:
        assert row.sup_error <= 1.0 / row.m_tilde + 1e-9
        assert row.grid_points_per_dim == 201
    assert errors == sorted(errors, reverse=True)
    assert errors[0] == approx(0.5)
    assert errors[-1] <= 0.05


def test_uniform_approximation_of_a_constant_is_exact():
    net = build_uniform_approximator(lambda points: np.full(points.shape[0], 0.3), 4, n=3)
    assert grid_max_error(net, lambda points: np.full(points.shape[0], 0.3), 11) <= 1e-12


def test_approximator_covers_the_closed_cube():
    net = build_uniform_approximator(TARGETS["product"], 3)
    corners = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    assert raw_output(net, corners) == approx([1 / 36, 25 / 36, 5 / 36, 5 / 36])


def test_non_finite_oracle_names_the_cube():
    def broken(points):
        values = points[:, 0].copy()
        values[-1] = np.inf
        return values

    with raises(InvalidArgumentError, match=r"cube \[1, 1\]"):
        build_uniform_approximator(broken, 2)


def test_report_csv(output_dir):
    path = output_dir / "approx.csv"
    approximation_report_to_csv(approximation_report(TARGETS["wave"], 1, [2, 4], grid_points_per_dim=51), path)
    frame = pd.read_csv(path)
    assert frame["m_tilde"].tolist() == [2, 4]
    assert list(frame.columns) == ["m_tilde", "grid_points_per_dim", "sup_error", "note"]
