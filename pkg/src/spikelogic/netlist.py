"""Versioned JSON serialization of a network.

The document records everything a simulation depends on: every neuron
with its parameters, every source with its schedule, every synapse, and
which ids are recorded. Ids are written out explicitly and entities are
recreated in ascending id order on import, so an imported network is
simulation-identical to the original, synapse for synapse. A free-form
annotations object rides along for block and port metadata; it is
preserved verbatim and never interpreted here.

Carryover factors are exact rationals and are stored as strings such as
"0" or "1/4" to survive JSON without precision loss.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .sim import Network, NeuronParams

FORMAT = "spiking-netlist"
VERSION = 1


def to_document(net: Network, annotations: dict | None = None) -> dict:
    neurons = [
        {
            "id": nid,
            "threshold_quanta": params.threshold_quanta,
            "refractory_ms": params.refractory_ms,
            "carryover_factor": str(params.carryover_factor),
        }
        for nid, params in sorted(net.neurons.items())
    ]
    sources = [
        {"id": sid, "times": list(times)}
        for sid, times in sorted(net.sources.items())
    ]
    synapses = [
        {
            "source": syn.source,
            "target": syn.target,
            "weight_quanta": syn.weight_quanta,
            "delay_ms": syn.delay_ms,
        }
        for syn in net.synapses
    ]
    return {
        "format": FORMAT,
        "version": VERSION,
        "neurons": neurons,
        "sources": sources,
        "synapses": synapses,
        "recorded": list(net.recorded),
        "annotations": annotations or {},
    }


def from_document(doc: dict) -> tuple[Network, dict]:
    """Rebuild a network from a document; returns (net, annotations)."""
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported netlist version {doc.get('version')!r}")
    neuron_entries = {entry["id"]: entry for entry in doc["neurons"]}
    source_entries = {entry["id"]: entry for entry in doc["sources"]}
    if neuron_entries.keys() & source_entries.keys():
        raise ValueError("an id appears as both neuron and source")
    total = len(neuron_entries) + len(source_entries)
    if set(neuron_entries) | set(source_entries) != set(range(total)):
        raise ValueError("entity ids must be dense from 0")
    net = Network()
    for eid in range(total):
        if eid in neuron_entries:
            entry = neuron_entries[eid]
            net.add_neuron(NeuronParams(
                threshold_quanta=entry["threshold_quanta"],
                refractory_ms=entry["refractory_ms"],
                carryover_factor=Fraction(entry["carryover_factor"]),
            ))
        else:
            net.add_source(source_entries[eid]["times"])
    for syn in doc["synapses"]:
        net.connect(syn["source"], syn["target"],
                    syn["weight_quanta"], syn["delay_ms"])
    net.record(*doc["recorded"])
    return net, doc.get("annotations", {})


def dumps(net: Network, annotations: dict | None = None) -> str:
    return json.dumps(to_document(net, annotations), indent=2) + "\n"


def loads(text: str) -> tuple[Network, dict]:
    return from_document(json.loads(text))


def save(net: Network, path, annotations: dict | None = None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(net, annotations))


def load(path) -> tuple[Network, dict]:
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read())
