"""Breadth-first architecture search with patience inherited from parent to child."""

from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple
from warnings import warn

import numpy as np
from anytree import LevelOrderIter, NodeMixin
from pydantic import BaseModel, ConfigDict, Field

from ian_networks.data import Dataset, split
from ian_networks.evaluation import accuracy
from ian_networks.model import Network, ProcessingKind
from ian_networks.training import TrainConfig, init_network, train

_logger = getLogger(__name__)

Architecture = Tuple[int, ...]
Trainer = Callable[[Architecture, int], Tuple[Network, float]]


class SearchNodeFailedWarning(RuntimeWarning):
    pass


class SearchConfig(BaseModel):
    """Settings of the breadth-first architecture search."""

    model_config = ConfigDict(frozen=True)

    initial_patience: int = Field(default=5, ge=0, le=5, description="Patience of the start node.")
    min_improvement: float = Field(
        default=0.01, ge=0.0, description="Accuracy gain over the parent below which a child loses one patience."
    )
    max_nodes: int = Field(default=200, gt=0, description="Hard cap on the number of trained architectures.")
    selection: Literal["train", "holdout"] = Field(
        default="train", description="Score nodes on the training data or on a stratified held-out part."
    )
    holdout_fraction: float = Field(default=0.2, gt=0.0, lt=1.0, description="Held-out share for holdout selection.")
    workers: int = Field(default=1, gt=0, description="Threads training the nodes of one breadth-first level.")
    seed: int = Field(default=0, description="Base seed, mixed with each architecture.")
    m: int = Field(default=2, ge=1, description="Number of tanh factors for tanh-prod networks.")


class SearchNode(NodeMixin):
    """A visited architecture. Children are the architectures it spawned."""

    def __init__(
        self,
        arch: Architecture,
        patience_left: int,
        parent_accuracy: Optional[float],
        seed: int,
        parent: Optional["SearchNode"] = None,
    ):
        super().__init__()
        self.arch = arch
        self.patience_left = patience_left
        self.parent_accuracy = parent_accuracy
        self.seed = seed
        self.accuracy: Optional[float] = None
        self.network: Optional[Network] = None
        self.failed = False
        self.order = 0
        self.parent = parent

    @property
    def name(self) -> str:
        return format_architecture(self.arch)

    @property
    def total_neurons(self) -> int:
        return sum(self.arch)


class SearchLogEntry(BaseModel):
    """One trained node of the search."""

    order: int = Field(description="Position in breadth-first order.")
    architecture: List[int] = Field(description="Hidden layer widths.")
    seed: int = Field(description="Seed used to initialise and train the node.")
    accuracy: Optional[float] = Field(description="Score of the node, empty when training failed.")
    patience: int = Field(description="Patience left at this node.")
    parent: Optional[List[int]] = Field(description="Architecture of the parent node.")
    failed: bool = Field(description="Whether training this node raised an error.")


class SearchResult(BaseModel):
    """Best network found and the log of every trained node."""

    best_architecture: List[int] = Field(description="Hidden layer widths of the selected node.")
    best_accuracy: float = Field(description="Score of the selected node.")
    best_network: Network = Field(description="Trained network of the selected node.")
    log: List[SearchLogEntry] = Field(description="Trained nodes in breadth-first order.")

    def to_log(self) -> str:
        return "[" + ",\n".join(entry.model_dump_json() for entry in self.log) + "]\n"


def format_architecture(arch: Sequence[int]) -> str:
    return ",".join(str(width) for width in arch)


def successors(arch: Sequence[int]) -> List[Architecture]:
    """Doubles each hidden layer in turn, then appends a one-neuron hidden layer."""
    candidates: List[Architecture] = []
    for index in range(len(arch)):
        doubled = list(arch)
        doubled[index] *= 2
        candidates.append(tuple(doubled))
    candidates.append(tuple(arch) + (1,))
    unique: List[Architecture] = []
    for candidate in candidates:
        if candidate not in unique:
            unique.append(candidate)
    return unique


def node_seed(base_seed: int, arch: Sequence[int]) -> int:
    return int(np.random.SeedSequence([base_seed, len(arch), *arch]).generate_state(1)[0])


def child_patience(parent_patience: int, parent_accuracy: float, child_accuracy: float, min_improvement: float) -> int:
    if child_accuracy - parent_accuracy < min_improvement:
        return parent_patience - 1
    return parent_patience


def make_trainer(kind: ProcessingKind, data: Dataset, train_cfg: TrainConfig, search_cfg: SearchConfig) -> Trainer:
    """Trains a freshly initialised network for an architecture and scores it per ``search_cfg.selection``."""
    if search_cfg.selection == "holdout":
        fit_data, score_data = split(data, 1.0 - search_cfg.holdout_fraction, search_cfg.seed)
    else:
        fit_data, score_data = data, data
    output_size = 1 if data.n_classes == 2 else data.n_classes

    def trainer(arch: Architecture, seed: int) -> Tuple[Network, float]:
        initial = init_network(kind, list(arch) + [output_size], fit_data.feature_ranges, seed, m=search_cfg.m)
        trained, _ = train(initial, fit_data, train_cfg.model_copy(update={"seed": seed}))
        return trained, accuracy(trained, score_data)

    return trainer


def _run_node(node: SearchNode, trainer: Trainer) -> Optional[str]:
    """Trains one node and returns the failure message instead of raising."""
    try:
        node.network, node.accuracy = trainer(node.arch, node.seed)
        _logger.debug("Architecture %s scored %.4f", node.name, node.accuracy)
    except Exception as error:
        node.failed = True
        return f"Training architecture [{node.name}] failed: {error}"
    return None


def _selection_key(node: SearchNode) -> Tuple[float, int, int, int]:
    assert node.accuracy is not None  # nosec: only scored nodes are ranked
    return (-node.accuracy, node.total_neurons, len(node.arch), node.order)


def bfs_search(
    kind: ProcessingKind,
    data: Dataset,
    train_cfg: TrainConfig,
    search_cfg: SearchConfig,
    trainer: Optional[Trainer] = None,
) -> Tuple[Network, SearchResult]:
    """Expands architectures level by level from a single hidden neuron.

    A child inherits its parent's patience and loses one when it does not beat the parent's accuracy by
    ``min_improvement``; nodes without patience spawn nothing and already visited architectures are skipped.
    """
    if trainer is None:
        trainer = make_trainer(kind, data, train_cfg, search_cfg)

    root = SearchNode((1,), search_cfg.initial_patience, None, node_seed(search_cfg.seed, (1,)))
    visited: Dict[Architecture, SearchNode] = {root.arch: root}
    frontier = [root]
    trained: List[SearchNode] = []

    with ThreadPoolExecutor(max_workers=search_cfg.workers) as pool:
        while frontier and len(trained) < search_cfg.max_nodes:
            frontier = frontier[: search_cfg.max_nodes - len(trained)]
            # warn on the calling thread
            for message in pool.map(lambda node: _run_node(node, trainer), frontier):
                if message is not None:
                    warn(message, SearchNodeFailedWarning)
                    _logger.warning(message)
            trained.extend(frontier)

            next_frontier: List[SearchNode] = []
            for node in frontier:
                if node.failed:
                    continue
                if node.parent_accuracy is not None:
                    assert node.accuracy is not None  # nosec: set by a successful run
                    node.patience_left = child_patience(
                        node.patience_left, node.parent_accuracy, node.accuracy, search_cfg.min_improvement
                    )
                if node.patience_left <= 0:
                    continue
                for arch in successors(node.arch):
                    if arch in visited:
                        continue
                    child = SearchNode(
                        arch, node.patience_left, node.accuracy, node_seed(search_cfg.seed, arch), parent=node
                    )
                    visited[arch] = child
                    next_frontier.append(child)
            frontier = next_frontier

    for order, node in enumerate(LevelOrderIter(root)):
        node.order = order
    scored = [node for node in trained if node.accuracy is not None and not node.failed]
    if not scored:
        raise RuntimeError("Every architecture failed to train")
    best = min(scored, key=_selection_key)
    assert best.network is not None  # nosec: scored nodes carry their network
    _logger.info("Best architecture [%s] with accuracy %.4f", best.name, best.accuracy)

    log = [
        SearchLogEntry(
            order=node.order,
            architecture=list(node.arch),
            seed=node.seed,
            accuracy=node.accuracy,
            patience=node.patience_left,
            parent=None if node.parent is None else list(node.parent.arch),
            failed=node.failed,
        )
        for node in sorted(trained, key=lambda node: node.order)
    ]
    result = SearchResult(
        best_architecture=list(best.arch),
        best_accuracy=best.accuracy,
        best_network=best.network,
        log=log,
    )
    return best.network, result
