"""Command line interface: ``ian_networks <subcommand> [options]``.

Exit codes: 0 on success, 1 on usage errors, 2 when the command itself fails.
"""

import sys
from logging import basicConfig, getLogger
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, CliSubCommand, SettingsConfigDict, SettingsError, get_subcommand

from ian_networks.bench import BenchConfig, run_bench, write_report
from ian_networks.data import (
    MonksDomain,
    SyntheticKind,
    generate_monks2,
    generate_synthetic,
    load_csv,
    save_csv,
)
from ian_networks.evaluation import evaluate
from ian_networks.interpret import Interval, curves_to_csv, extract_rules
from ian_networks.model import Network, ProcessingKind, load_network, network_arrays, save_network
from ian_networks.render import render_network
from ian_networks.search import SearchConfig, bfs_search
from ian_networks.training import TrainConfig, init_network, train
from ian_networks.universality import TARGETS, approximation_report, approximation_report_to_csv

_logger = getLogger(__name__)

USAGE_ERROR = 1
RUNTIME_ERROR = 2


def _write_json(path: Path, content: BaseModel) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content.model_dump_json(indent=2) + "\n", encoding="utf-8")
    _logger.info("Wrote %s", path)


class GenCommand(BaseModel):
    """Generates a synthetic or MONK-2 dataset as CSV."""

    kind: Literal["bisector", "xor", "parabola", "circle", "monks2"] = Field(description="Dataset to generate.")
    n_samples: int = Field(
        default=1000, gt=0, description="Number of samples (also --n), ignored for an enumerated monks2 domain."
    )
    seed: int = Field(default=0, description="Random seed.")
    out: Path = Field(description="CSV file to write.")
    xor_conjunction: bool = Field(default=False, description='Label xor as "x1 > 0 and x2 > 0".')
    domain: MonksDomain = Field(default=MonksDomain.UNIFORM, description="Attribute cardinalities of monks2.")
    enumerate_domain: bool = Field(default=True, description="Enumerate every monks2 point instead of sampling n.")

    def cli_cmd(self) -> None:
        if self.kind == "monks2":
            data = generate_monks2(self.domain, self.enumerate_domain, self.seed, self.n_samples)
        else:
            data = generate_synthetic(SyntheticKind(self.kind), self.n_samples, self.seed, self.xor_conjunction)
        save_csv(data, self.out)


class TrainCommand(BaseModel):
    """Trains one network and writes the model document and a training report."""

    kind: ProcessingKind = Field(description="Processing function.")
    arch: List[int] = Field(min_length=1, description='Layer sizes including the output layer, e.g. "2,1".')
    data: Path = Field(description="Training CSV.")
    seed: int = Field(default=0, description="Seed of initialisation and shuffling.")
    out: Path = Field(default=Path("model.json"), description="Model document to write.")
    report: Optional[Path] = Field(default=None, description='Report file, defaults to "<out>.report.json".')
    factors: int = Field(default=2, ge=1, description="Number of tanh factors for tanh_prod (also --m).")
    learning_rate: float = Field(default=0.1, gt=0.0, description="Adam learning rate.")
    batch_size: int = Field(default=128, gt=0, description="Mini-batch size.")
    max_epochs: int = Field(default=10000, gt=0, description="Upper bound on epochs.")

    def cli_cmd(self) -> None:
        data = load_csv(self.data)
        config = TrainConfig(
            learning_rate=self.learning_rate, batch_size=self.batch_size, max_epochs=self.max_epochs, seed=self.seed
        )
        initial = init_network(self.kind, self.arch, data.feature_ranges, self.seed, m=self.factors)
        trained, report = train(initial, data, config)
        save_network(trained, self.out)
        _write_json(self.report or self.out.with_suffix(".report.json"), report)


class SearchCommand(BaseModel):
    """Searches an architecture breadth-first and writes the best model and the search log."""

    kind: ProcessingKind = Field(description="Processing function.")
    data: Path = Field(description="Training CSV.")
    seed: int = Field(default=0, description="Base seed of the search.")
    out: Path = Field(default=Path("model.json"), description="Model document of the best node.")
    log: Path = Field(default=Path("search_log.json"), description="JSON log of every trained node.")
    patience: int = Field(default=5, ge=0, le=5, description="Patience of the start node.")
    max_nodes: int = Field(default=200, gt=0, description="Cap on trained architectures.")
    selection: Literal["train", "holdout"] = Field(default="train", description="Data the nodes are scored on.")
    workers: int = Field(default=1, gt=0, description="Threads per breadth-first level.")
    max_epochs: int = Field(default=10000, gt=0, description="Upper bound on epochs per node.")

    def cli_cmd(self) -> None:
        data = load_csv(self.data)
        search_config = SearchConfig(
            initial_patience=self.patience,
            max_nodes=self.max_nodes,
            selection=self.selection,
            workers=self.workers,
            seed=self.seed,
        )
        best, result = bfs_search(self.kind, data, TrainConfig(max_epochs=self.max_epochs), search_config)
        save_network(best, self.out)
        self.log.write_text(result.to_log(), encoding="utf-8")
        _logger.info("Wrote search log to %s", self.log)


def _threshold_domain(net: Network) -> List[Interval]:
    """Feature ranges guessed from the first layer thresholds, one unit beyond the extremes."""
    thresholds = network_arrays(net)[0].b
    lows = thresholds.min(axis=(0, 2)) - 1.0
    highs = thresholds.max(axis=(0, 2)) + 1.0
    return [(float(low), float(high)) for low, high in zip(lows, highs)]


class ExplainCommand(BaseModel):
    """Writes rules (text and JSON), an SVG diagram and the curves of every processing function."""

    model: Path = Field(description="Model document.")
    data: Optional[Path] = Field(
        default=None, description="CSV whose feature ranges bound the curves, else the thresholds are used."
    )
    out_dir: Path = Field(default=Path("explain"), description="Directory receiving the artifacts.")
    curve_samples: int = Field(default=101, ge=2, description="Points per sampled curve.")

    def cli_cmd(self) -> None:
        net = load_network(self.model)
        feature_names = None
        if self.data is None:
            domain = _threshold_domain(net)
        else:
            dataset = load_csv(self.data)
            domain, feature_names = dataset.feature_ranges, dataset.feature_names
        self.out_dir.mkdir(parents=True, exist_ok=True)
        rules = extract_rules(net, domain, feature_names=feature_names)
        (self.out_dir / "rules.txt").write_text(rules.to_text(), encoding="utf-8")
        _write_json(self.out_dir / "rules.json", rules)
        render_network(net, domain, self.out_dir / "network.svg")
        curves_to_csv(net, domain, self.out_dir / "curves", self.curve_samples)


class ApproxCommand(BaseModel):
    """Builds uniform step approximators of a target function and reports their grid errors."""

    target: Literal["mean", "product", "wave"] = Field(default="mean", description="Function on the unit cube.")
    dimension: int = Field(default=2, ge=1, le=3, description="Input dimension (also --n).")
    cubes: List[int] = Field(
        default=[1, 2, 4, 8, 16, 20], min_length=1, description="Cubes per axis to try (also --m)."
    )
    grid: int = Field(default=201, ge=2, description="Verification grid points per dimension.")
    out: Path = Field(default=Path("approximation.csv"), description="CSV report to write.")

    def cli_cmd(self) -> None:
        rows = approximation_report(TARGETS[self.target], self.dimension, self.cubes, self.grid)
        approximation_report_to_csv(rows, self.out)


class EvalCommand(BaseModel):
    """Evaluates a model on a CSV and writes the metrics as JSON."""

    model: Path = Field(description="Model document.")
    data: Path = Field(description="Test CSV.")
    out: Optional[Path] = Field(default=None, description="Metrics file, printed to stdout if empty.")

    def cli_cmd(self) -> None:
        metrics = evaluate(load_network(self.model), load_csv(self.data))
        if self.out is None:
            sys.stdout.write(metrics.model_dump_json(indent=2) + "\n")
        else:
            _write_json(self.out, metrics)


class BenchCommand(BaseModel):
    """Runs a benchmark suite and writes a JSON and a markdown report."""

    suite: Literal["synthetic", "monks2", "csv"] = Field(default="synthetic", description="Cases to run.")
    seeds: List[int] = Field(default=[0, 1, 2, 3, 4], min_length=1, description="Seeds, best run reported.")
    data: List[Path] = Field(default=[], description="CSV files of the csv suite.")
    kinds: List[ProcessingKind] = Field(default=[ProcessingKind.SIGMOID], description="Kinds tried on csv files.")
    n_samples: int = Field(default=1000, gt=0, description="Samples per synthetic dataset.")
    max_epochs: int = Field(default=10000, gt=0, description="Upper bound on epochs per run.")
    out_dir: Path = Field(default=Path("bench"), description="Directory receiving report.json and report.md.")

    def cli_cmd(self) -> None:
        config = BenchConfig(
            suite=self.suite,
            seeds=self.seeds,
            data=self.data,
            kinds=self.kinds,
            n_samples=self.n_samples,
            train=TrainConfig(max_epochs=self.max_epochs),
        )
        report = run_bench(config)
        _write_json(self.out_dir / "report.json", report)
        with open(self.out_dir / "report.md", "wt", encoding="utf-8") as file:
            write_report(report, file)


class Configuration(BaseSettings):
    """Configuration of the ian_networks tool."""

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="WARNING", description="Logging level.")
    gen: CliSubCommand[GenCommand] = Field(description="Generate a dataset.")
    train: CliSubCommand[TrainCommand] = Field(description="Train a network.")
    search: CliSubCommand[SearchCommand] = Field(description="Search an architecture.")
    explain: CliSubCommand[ExplainCommand] = Field(description="Explain a network.")
    approx: CliSubCommand[ApproxCommand] = Field(description="Check uniform approximators.")
    eval: CliSubCommand[EvalCommand] = Field(description="Evaluate a network.")
    bench: CliSubCommand[BenchCommand] = Field(description="Run a benchmark suite.")
    model_config = SettingsConfigDict(cli_prog_name="ian_networks", cli_exit_on_error=False)


# Short spellings of long options. Recent pydantic-settings releases turn one-letter fields into "-n" style flags,
# so the one-letter options are mapped to named fields before parsing.
_OPTION_SPELLINGS: Dict[str, Dict[str, str]] = {
    "gen": {"--n": "--n_samples"},
    "train": {"--m": "--factors"},
    "approx": {"--n": "--dimension", "--m": "--cubes"},
}


def _normalize_options(arguments: List[str]) -> List[str]:
    subcommand = next((argument for argument in arguments if argument in Configuration.model_fields), None)
    spellings = _OPTION_SPELLINGS.get(subcommand or "", {})
    if not spellings:
        return arguments
    normalized = []
    for argument in arguments:
        option, separator, value = argument.partition("=")
        normalized.append(spellings[option] + separator + value if option in spellings else argument)
    return normalized


def main(argv: Optional[Sequence[str]] = None) -> int:
    arguments = _normalize_options(list(sys.argv[1:] if argv is None else argv))
    try:
        config = Configuration(_cli_parse_args=arguments)
        command = get_subcommand(config, is_required=True, cli_exit_on_error=False)
    except (SettingsError, ValidationError) as error:
        sys.stderr.write(f"ian_networks: {error}\n")
        return USAGE_ERROR
    except SystemExit as error:
        return 0 if error.code in (0, None) else USAGE_ERROR

    basicConfig(level=config.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        command.cli_cmd()
    except Exception as error:
        _logger.error("%s failed: %s", type(command).__name__, error)
        sys.stderr.write(f"ian_networks: {error}\n")
        return RUNTIME_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
