from xml.etree import ElementTree

from ian_networks.model import ProcessingKind
from ian_networks.render import render_network
from ian_networks.training import init_network


def test_single_neuron_diagram(output_dir):
    net = init_network(ProcessingKind.SIGMOID, [1], [(-1.0, 1.0)] * 3, seed=0)
    path = render_network(net, [(-1.0, 1.0)] * 3, output_dir / "single.svg")
    svg = path.read_text(encoding="utf-8")
    assert svg.count('id="curve-') == 3
    assert 'id="curve-layer1-neuron1-input3"' in svg
    assert ElementTree.fromstring(path.read_bytes()).tag.endswith("svg")


def test_monks_diagram_labels(monks_network, output_dir):
    svg = render_network(monks_network, [(1.0, 4.0)] * 6, output_dir / "monks.svg").read_text(encoding="utf-8")
    assert svg.count('id="curve-') == 6 + 2 + 2
    assert "b=1.10" in svg
    assert "α=1.00" in svg
    assert "b*=1.90" in svg


def test_diagram_is_byte_stable(monks_network, output_dir):
    first = render_network(monks_network, [(1.0, 4.0)] * 6, output_dir / "first.svg")
    second = render_network(monks_network, [(1.0, 4.0)] * 6, output_dir / "second.svg")
    assert first.read_bytes() == second.read_bytes()


def test_tanh_prod_diagram(output_dir):
    net = init_network(ProcessingKind.TANH_PROD, [2, 1], [(0.0, 1.0)] * 2, seed=1, m=2)
    svg = render_network(net, [(0.0, 1.0)] * 2, output_dir / "tanh.svg").read_text(encoding="utf-8")
    assert svg.count('id="curve-') == 2 * 2 + 2
    assert "b=(" in svg
