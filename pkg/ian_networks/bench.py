"""Benchmark suites: train IAN networks on known datasets and report accuracies with confidence intervals."""

from logging import getLogger
from pathlib import Path
from typing import List, Literal, Optional, TextIO, Tuple

from pydantic import BaseModel, Field

from ian_networks import CURRENT_VERSION
from ian_networks.data import Dataset, MonksDomain, SyntheticKind, generate_monks2, generate_synthetic, load_csv, split
from ian_networks.evaluation import CI_DESCRIPTION, evaluate
from ian_networks.io import ReportWriter, format_accuracy
from ian_networks.model import ProcessingKind
from ian_networks.search import SearchConfig, bfs_search, format_architecture
from ian_networks.training import TrainConfig, train_best_of

_logger = getLogger(__name__)

AGGREGATION_NOTE = (
    "Reference accuracies come from published results whose +- aggregation (folds or test set) is not stated; "
    "the intervals here are per test set."
)


class BenchCase(BaseModel):
    """One dataset / processing function / architecture combination."""

    dataset: str = Field(description="Dataset name, a synthetic kind, monks2 or a CSV file stem.")
    kind: ProcessingKind = Field(description="Processing function of the trained networks.")
    architecture: Optional[List[int]] = Field(description="Layer sizes including the output layer, searched if empty.")
    reference_accuracy: Optional[float] = Field(default=None, description="Published accuracy to compare against.")


class BenchConfig(BaseModel):
    """Settings of a benchmark run."""

    suite: Literal["synthetic", "monks2", "csv"] = Field(default="synthetic", description="Cases to run.")
    seeds: List[int] = Field(default=[0, 1, 2, 3, 4], min_length=1, description="Seeds, the best run is reported.")
    n_samples: int = Field(default=1000, gt=0, description="Samples per synthetic dataset.")
    train_fraction: float = Field(default=0.8, gt=0.0, lt=1.0, description="Stratified training share.")
    data: List[Path] = Field(default=[], description="CSV files of the csv suite.")
    kinds: List[ProcessingKind] = Field(
        default=[ProcessingKind.SIGMOID], min_length=1, description="Processing functions tried on csv files."
    )
    train: TrainConfig = Field(default_factory=TrainConfig, description="Training settings of every run.")


class BenchRow(BaseModel):
    """Result of one benchmark case."""

    dataset: str = Field(description="Dataset name.")
    kind: ProcessingKind = Field(description="Processing function.")
    architecture: List[int] = Field(description="Layer sizes of the reported network.")
    seed: int = Field(description="Seed of the reported run.")
    accuracy: float = Field(description="Test accuracy of the reported run.")
    ci_halfwidth: float = Field(description="Half width of the 95% confidence interval.")
    n_test: int = Field(description="Number of test samples.")
    reference_accuracy: Optional[float] = Field(description="Published accuracy, if any.")


class BenchReport(BaseModel):
    """Rows of a benchmark run and how to read their intervals."""

    suite: str = Field(description="Name of the suite that ran.")
    version: str = Field(default=str(CURRENT_VERSION), description="ian_networks version that produced the report.")
    ci_description: str = Field(default=CI_DESCRIPTION, description="Formula of the confidence intervals.")
    note: str = Field(default=AGGREGATION_NOTE, description="Caveat about the reference accuracies.")
    rows: List[BenchRow] = Field(description="One row per case.")


SYNTHETIC_CASES = [
    BenchCase(dataset="xor", kind=ProcessingKind.SIGMOID, architecture=[2, 1], reference_accuracy=1.0),
    BenchCase(dataset="circle", kind=ProcessingKind.TANH_PROD, architecture=[1], reference_accuracy=0.996),
    BenchCase(dataset="parabola", kind=ProcessingKind.SIGMOID, architecture=[4, 1], reference_accuracy=1.0),
    BenchCase(dataset="bisector", kind=ProcessingKind.SIGMOID, architecture=[1], reference_accuracy=0.989),
]
MONKS2_CASE = BenchCase(dataset="monks2", kind=ProcessingKind.HEAVISIDE, architecture=[1, 2, 1], reference_accuracy=1.0)


def _run_case(case: BenchCase, fit: Dataset, test: Dataset, config: BenchConfig) -> BenchRow:
    architecture = case.architecture
    if architecture is None:
        search_config = SearchConfig(selection="holdout", seed=config.seeds[0])
        _, result = bfs_search(case.kind, fit, config.train, search_config)
        output_size = 1 if fit.n_classes == 2 else fit.n_classes
        architecture = result.best_architecture + [output_size]
        _logger.info("Search picked [%s] for %s", format_architecture(architecture), case.dataset)
    best = train_best_of(case.kind, architecture, fit, config.train, config.seeds, target_accuracy=1.0)
    metrics = evaluate(best.network, test)
    _logger.info("%s / %s: accuracy %.4f with seed %d", case.dataset, case.kind.value, metrics.accuracy, best.seed)
    return BenchRow(
        dataset=case.dataset,
        kind=case.kind,
        architecture=architecture,
        seed=best.seed,
        accuracy=metrics.accuracy,
        ci_halfwidth=metrics.ci_halfwidth,
        n_test=metrics.n_test,
        reference_accuracy=case.reference_accuracy,
    )


def _cases(config: BenchConfig) -> List[Tuple[BenchCase, Dataset, Dataset]]:
    if config.suite == "synthetic":
        cases = []
        for case in SYNTHETIC_CASES:
            data = generate_synthetic(SyntheticKind(case.dataset), config.n_samples, config.seeds[0])
            cases.append((case, *split(data, config.train_fraction, config.seeds[0])))
        return cases
    if config.suite == "monks2":
        # The whole enumerated domain is both training and test data, as in the published protocol.
        data = generate_monks2(MonksDomain.UNIFORM, full_enumeration=True)
        return [(MONKS2_CASE, data, data)]
    if not config.data:
        raise ValueError("The csv suite needs at least one data file")
    cases = []
    for path in config.data:
        fit, test = split(load_csv(path), config.train_fraction, config.seeds[0])
        for kind in config.kinds:
            cases.append((BenchCase(dataset=path.stem, kind=kind, architecture=None), fit, test))
    return cases


def run_bench(config: BenchConfig) -> BenchReport:
    rows = [_run_case(case, fit, test, config) for case, fit, test in _cases(config)]
    return BenchReport(suite=config.suite, rows=rows)


def write_report(report: BenchReport, text_io: TextIO) -> None:
    writer = ReportWriter(text_io)
    writer.print_header(f"IAN benchmark: {report.suite} (ian_networks {report.version})", 0)
    writer.print_description(f"Accuracy in percent, {report.ci_description}.\n{report.note}")
    writer.print_table(
        ["dataset", "kind", "architecture", "seed", "accuracy", "n_test", "reference"],
        (
            [
                row.dataset,
                row.kind.value,
                format_architecture(row.architecture),
                str(row.seed),
                format_accuracy(row.accuracy, row.ci_halfwidth),
                str(row.n_test),
                "-" if row.reference_accuracy is None else f"{100.0 * row.reference_accuracy:.1f}",
            ]
            for row in report.rows
        ),
    )
