"""Netlist serialization round trips."""

from fractions import Fraction

import pytest

from spikelogic import netlist
from spikelogic.blocks import build_decoder
from spikelogic.gates import build_css, drive
from spikelogic.sim import Network, NeuronParams


def decoder_net():
    net = Network()
    css = build_css(net)
    decoder = build_decoder(net, 2, "fast", css)
    for b in range(2):
        drive(net, decoder, f"s{b}", net.add_source([1 + b, 4]))
    net.record(*(decoder.output(f"ch{j}") for j in range(4)))
    return net


def test_round_trip_simulates_identically():
    net = decoder_net()
    rebuilt, annotations = netlist.loads(netlist.dumps(net, {"note": "x"}))
    assert annotations == {"note": "x"}
    assert rebuilt.run(12) == net.run(12)


def test_decoder_fast_n2_has_eight_neuron_entries():
    doc = netlist.to_document(decoder_net())
    assert len(doc["neurons"]) == 8
    assert len(doc["sources"]) == 3  # CSS bootstrap + two selects
    assert doc["format"] == netlist.FORMAT
    assert doc["version"] == netlist.VERSION


def test_synapse_count_matches_network():
    net = decoder_net()
    doc = netlist.to_document(net)
    assert len(doc["synapses"]) == len(net.synapses)


def test_carryover_fraction_round_trip():
    net = Network()
    nid = net.add_neuron(NeuronParams(threshold_quanta=2,
                                      carryover_factor=Fraction(1, 3)))
    net.connect(net.add_source([0, 2]), nid, 2, 1)
    net.record(nid)
    rebuilt, _ = netlist.loads(netlist.dumps(net))
    params = rebuilt.neurons[nid]
    assert params.carryover_factor == Fraction(1, 3)
    assert rebuilt.run(6) == net.run(6)


def test_rejects_foreign_documents():
    doc = netlist.to_document(decoder_net())
    with pytest.raises(ValueError):
        netlist.from_document({**doc, "format": "other"})
    with pytest.raises(ValueError):
        netlist.from_document({**doc, "version": 99})


def test_rejects_sparse_ids():
    doc = netlist.to_document(decoder_net())
    broken = dict(doc)
    broken["neurons"] = [dict(entry, id=entry["id"] + 100)
                         for entry in doc["neurons"]]
    with pytest.raises(ValueError):
        netlist.from_document(broken)


def test_save_and_load(tmp_path):
    net = decoder_net()
    path = tmp_path / "net.json"
    netlist.save(net, path, {"experiment": "demo"})
    rebuilt, annotations = netlist.load(path)
    assert annotations == {"experiment": "demo"}
    assert rebuilt.run(10) == net.run(10)
    assert path.read_text(encoding="ascii").endswith("\n")
