import json

from pytest import fixture, warns

from ian_networks.data import SyntheticKind, generate_synthetic
from ian_networks.model import ProcessingKind, serialize
from ian_networks.search import (
    SearchConfig,
    SearchNodeFailedWarning,
    bfs_search,
    child_patience,
    node_seed,
    successors,
)
from ian_networks.training import TrainConfig, init_network


@fixture
def xor_data():
    return generate_synthetic(SyntheticKind.XOR, 60, seed=0)


def scripted_trainer(scores, default=0.5, failing=()):
    placeholder = init_network(ProcessingKind.SIGMOID, [1], [(-1.0, 1.0)] * 2, seed=0)
    calls = []

    def trainer(arch, seed):
        calls.append(arch)
        if arch in failing:
            raise RuntimeError("scripted failure")
        return placeholder, scores.get(arch, default)

    trainer.calls = calls
    return trainer


def test_successors():
    assert successors([2, 1]) == [(4, 1), (2, 2), (2, 1, 1)]
    assert successors([1]) == [(2,), (1, 1)]


def test_child_patience_decrements_below_one_percent():
    assert child_patience(3, 0.80, 0.805, 0.01) == 2
    assert child_patience(3, 0.80, 0.81, 0.01) == 3
    assert child_patience(3, 0.80, 0.70, 0.01) == 2


def test_node_seed_is_stable():
    assert node_seed(0, (2, 1)) == node_seed(0, (2, 1))
    assert node_seed(0, (2, 1)) != node_seed(0, (1, 2))
    assert node_seed(0, (2, 1)) != node_seed(1, (2, 1))


def test_flat_accuracy_exhausts_patience(xor_data):
    trainer = scripted_trainer({})
    config = SearchConfig(initial_patience=2)
    _, result = bfs_search(ProcessingKind.SIGMOID, xor_data, TrainConfig(), config, trainer=trainer)
    architectures = [tuple(entry.architecture) for entry in result.log]
    assert architectures == [(1,), (2,), (1, 1), (4,), (2, 1), (1, 2), (1, 1, 1)]
    patience = {tuple(entry.architecture): entry.patience for entry in result.log}
    assert patience[(1,)] == 2
    assert patience[(2,)] == 1
    assert patience[(4,)] == 0
    assert len(trainer.calls) == 7


def test_improving_children_keep_patience_until_max_nodes(xor_data):
    class Improving(dict):
        def get(self, arch, default=None):
            return min(1.0, 0.05 * sum(arch) + 0.02 * len(arch))

    trainer = scripted_trainer(Improving())
    config = SearchConfig(initial_patience=1, max_nodes=15)
    _, result = bfs_search(ProcessingKind.SIGMOID, xor_data, TrainConfig(), config, trainer=trainer)
    assert len(result.log) == 15
    assert all(entry.patience == 1 for entry in result.log)
    assert [entry.order for entry in result.log] == list(range(15))


def test_best_node_prefers_fewer_neurons_then_layers(xor_data):
    trainer = scripted_trainer({(1,): 0.5}, default=0.9)
    config = SearchConfig(initial_patience=1)
    _, result = bfs_search(ProcessingKind.SIGMOID, xor_data, TrainConfig(), config, trainer=trainer)
    assert result.best_architecture == [2]
    assert result.best_accuracy == 0.9
    parents = {tuple(entry.architecture): entry.parent for entry in result.log}
    assert parents[(1,)] is None
    assert parents[(2, 1)] == [2]


def test_failed_nodes_are_logged_and_not_expanded(xor_data):
    trainer = scripted_trainer({(2,): 0.9}, default=0.5, failing=[(1, 1)])
    config = SearchConfig(initial_patience=1)
    with warns(SearchNodeFailedWarning):
        _, result = bfs_search(ProcessingKind.SIGMOID, xor_data, TrainConfig(), config, trainer=trainer)
    failed = [entry for entry in result.log if entry.failed]
    assert [entry.architecture for entry in failed] == [[1, 1]]
    assert failed[0].accuracy is None
    assert (1, 1, 1) not in trainer.calls
    assert result.best_architecture == [2]


def test_search_log_is_json(xor_data):
    _, result = bfs_search(
        ProcessingKind.SIGMOID, xor_data, TrainConfig(), SearchConfig(initial_patience=1), trainer=scripted_trainer({})
    )
    entries = json.loads(result.to_log())
    assert [entry["architecture"] for entry in entries] == [[1], [2], [1, 1]]


def test_real_search_is_deterministic(xor_data):
    train_config = TrainConfig(max_epochs=5)
    search_config = SearchConfig(initial_patience=1, max_nodes=3, selection="holdout", workers=2)
    first, first_result = bfs_search(ProcessingKind.SIGMOID, xor_data, train_config, search_config)
    second, second_result = bfs_search(ProcessingKind.SIGMOID, xor_data, train_config, search_config)
    assert serialize(first) == serialize(second)
    assert first_result.to_log() == second_result.to_log()
    assert len(first_result.log) == 3
