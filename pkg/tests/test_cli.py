import json

import pandas as pd
from pytest import approx

from ian_networks.cli import RUNTIME_ERROR, USAGE_ERROR, main
from ian_networks.model import ProcessingKind, load_network, save_network


def _generate(output_dir, kind="xor", n=200):
    path = output_dir / f"{kind}.csv"
    assert main(["gen", "--kind", kind, "--n", str(n), "--seed", "1", "--out", str(path)]) == 0
    return path


def _train(output_dir, data, name, kind="heaviside", arch="[2,1]"):
    out = output_dir / f"{name}.json"
    arguments = ["train", "--kind", kind, "--arch", arch, "--data", str(data), "--max_epochs", "20", "--out", str(out)]
    assert main(arguments) == 0
    return out


def test_gen_writes_csv(output_dir):
    frame = pd.read_csv(_generate(output_dir))
    assert list(frame.columns) == ["x1", "x2", "label"]
    assert len(frame) == 200


def test_gen_monks2(output_dir):
    path = output_dir / "monks.csv"
    assert main(["gen", "--kind", "monks2", "--domain", "official", "--out", str(path)]) == 0
    assert len(pd.read_csv(path)) == 3 * 3 * 2 * 3 * 4 * 2


def test_train_is_deterministic(output_dir):
    data = _generate(output_dir)
    first = _train(output_dir, data, "first")
    second = _train(output_dir, data, "second")
    assert first.read_bytes() == second.read_bytes()
    assert load_network(first).kind is ProcessingKind.HEAVISIDE
    report = json.loads((output_dir / "first.report.json").read_text(encoding="utf-8"))
    assert report["epochs_run"] <= 20


def test_eval_prints_metrics(output_dir, capsys):
    data = _generate(output_dir)
    model = _train(output_dir, data, "model", kind="sigmoid")
    capsys.readouterr()
    assert main(["eval", "--model", str(model), "--data", str(data)]) == 0
    metrics = json.loads(capsys.readouterr().out)
    assert metrics["n_test"] == 200
    assert 0.0 <= metrics["accuracy"] <= 1.0


def test_explain_writes_artifacts(output_dir):
    data = _generate(output_dir)
    model = _train(output_dir, data, "model")
    out_dir = output_dir / "explain"
    assert main(["explain", "--model", str(model), "--data", str(data), "--out_dir", str(out_dir)]) == 0
    assert (out_dir / "rules.txt").read_text(encoding="utf-8").startswith("R1.1.1 = x1")
    assert json.loads((out_dir / "rules.json").read_text(encoding="utf-8"))["kind"] == "heaviside"
    assert (out_dir / "network.svg").exists()
    assert len(list((out_dir / "curves").glob("*.csv"))) == 2 * 2 + 2


def test_explain_without_data_uses_thresholds(output_dir, monks_network):
    model = output_dir / "monks.json"
    save_network(monks_network, model)
    out_dir = output_dir / "explain"
    assert main(["explain", "--model", str(model), "--out_dir", str(out_dir)]) == 0
    curve = pd.read_csv(out_dir / "curves" / "layer1_neuron1_input1.csv")
    assert curve["x"].iloc[0] == approx(0.1)
    assert curve["x"].iloc[-1] == approx(2.1)


def test_approx_writes_report(output_dir):
    out = output_dir / "approx.csv"
    assert main(["approx", "--target", "product", "--m", "[1,4]", "--grid", "21", "--out", str(out)]) == 0
    frame = pd.read_csv(out)
    assert frame["m_tilde"].tolist() == [1, 4]
    assert frame["sup_error"].iloc[1] <= 0.25 + 1e-9


def test_usage_errors(output_dir):
    assert main([]) == USAGE_ERROR
    assert main(["gen", "--kind", "xor", "--out", str(output_dir / "x.csv"), "--colour", "red"]) == USAGE_ERROR
    assert main(["gen", "--kind", "spiral", "--out", str(output_dir / "x.csv")]) == USAGE_ERROR


def test_runtime_errors(output_dir, capsys):
    missing = output_dir / "missing.csv"
    assert main(["train", "--kind", "sigmoid", "--arch", "[1]", "--data", str(missing)]) == RUNTIME_ERROR
    assert "missing.csv" in capsys.readouterr().err


def test_one_letter_options_are_accepted(output_dir):
    path = output_dir / "circle.csv"
    assert main(["gen", "--kind", "circle", "--n=150", "--seed", "7", "--out", str(path)]) == 0
    assert len(pd.read_csv(path)) == 150
    assert main(["gen", "--kind", "circle", "--n_samples", "120", "--out", str(path)]) == 0
    assert len(pd.read_csv(path)) == 120

    model = output_dir / "tanh.json"
    arguments = ["train", "--kind", "tanh_prod", "--arch", "[1]", "--m", "3", "--max_epochs", "2"]
    assert main([*arguments, "--data", str(path), "--out", str(model)]) == 0
    assert load_network(model).m == 3

    out = output_dir / "approx.csv"
    assert main(["approx", "--n", "1", "--m", "[2]", "--grid", "11", "--out", str(out)]) == 0
    assert pd.read_csv(out)["m_tilde"].tolist() == [2]
