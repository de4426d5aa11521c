"""Combinational and sequential blocks composed from the spiking gates.

Every block follows the same recipe: invert what needs inverting, feed
coincidence (AND) gates according to the binary truth table, and pad
the non-inverted paths so all inputs of an AND arrive in the same
millisecond. A direct input therefore carries one extra millisecond of
delay to match its sibling that went through a NOT.

Blocks accept either AND flavor. The classic AND spends two neurons and
2 ms; the fast AND spends one neuron and 1 ms but leans on the shared
constant spike source for its per-millisecond veto. Block latencies are
fixed by construction: decoder 3/2 ms (classic/fast), encoder 1 ms,
multiplexer 4/3, demultiplexer 3/2, D latch 3/2 (one more from data
when the input inverter is built in), memory 6/4.

Resource accounting: a handle's report counts the synapses the block
created, tagged by category, plus one synapse per input tap (each input
port is meant to be wired from exactly one driver). Decoder, mux, demux
and memory reports include the CSS they were handed; the D latch report
deliberately excludes CSS hookups and its optional input inverter so it
composes cleanly into the memory totals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .gates import (
    GateHandle,
    InputTap,
    PortMap,
    build_not,
    build_or,
    build_sr_latch,
    _build_and_classic,
    _build_and_fast,
    _require_css,
    padded,
    retagged,
    wire,
)
from .resources import ResourceReport, expected_latency, _dlatch_items
from .sim import Network


class AndKind(str, Enum):
    CLASSIC = "classic"
    FAST = "fast"


@dataclass(frozen=True)
class MemoryGeometry:
    """Registers r, bits per word c, and select depth n.

    The address spans ceil(log2(r + 1)) select lines; channel 0 is the
    non-operation channel and has no register, so up to 2^n - 1
    registers fit. Smaller r leaves the surplus channels unbuilt.
    """

    registers: int
    bits: int
    depth: int

    def __post_init__(self) -> None:
        if self.registers < 1:
            raise ValueError("memory needs at least 1 register")
        if self.bits < 1:
            raise ValueError("memory words need at least 1 bit")
        if self.registers > 2 ** self.depth - 1:
            raise ValueError("register count exceeds select capacity")


@dataclass
class BlockHandle:
    kind: str
    and_kind: AndKind | None
    params: dict[str, int]
    ports: PortMap
    latency_ms: int
    owned_synapses: dict[int, str]
    sub_handles: tuple
    resources: ResourceReport
    css: GateHandle | None = None
    data_latency_ms: int | None = None
    geometry: MemoryGeometry | None = None
    decoder: "BlockHandle | None" = None

    def output(self, name: str) -> int:
        try:
            return self.ports.outputs[name]
        except KeyError:
            raise ValueError(f"{self.kind} has no output port {name!r}") from None

    def input_taps(self, name: str) -> tuple[InputTap, ...]:
        try:
            return self.ports.inputs[name]
        except KeyError:
            raise ValueError(f"{self.kind} has no input port {name!r}") from None


def _coerce_kind(and_kind) -> AndKind:
    try:
        return AndKind(and_kind)
    except ValueError:
        raise ValueError(f"unknown AND kind {and_kind!r}") from None


def _and_gate(net: Network, and_kind: AndKind, css, fan_in: int) -> GateHandle:
    if and_kind is AndKind.CLASSIC:
        return _build_and_classic(net, fan_in)
    return _build_and_fast(net, css, fan_in)


def _tree_counts(handle) -> tuple[int, Counter]:
    neurons = len(getattr(handle, "owned_neurons", ()))
    categories = Counter(handle.owned_synapses.values())
    for sub in getattr(handle, "sub_handles", ()):
        sub_neurons, sub_categories = _tree_counts(sub)
        neurons += sub_neurons
        categories.update(sub_categories)
    return neurons, categories


def _measure(handle, *, include_css: bool, whitelist=None,
             neuron_count: int | None = None) -> ResourceReport:
    """Resource report for a built handle: owned synapses plus one per
    input tap, optionally restricted to a category whitelist."""
    neurons, categories = _tree_counts(handle)
    for taps in handle.ports.inputs.values():
        for tap in taps:
            categories[tap.category] += 1
    if include_css:
        neurons += 2
        categories["Internal CSS"] += 2
    if whitelist is not None:
        categories = Counter({k: v for k, v in categories.items() if k in whitelist})
    if neuron_count is not None:
        neurons = neuron_count
    return ResourceReport(neurons, sum(categories.values()),
                          dict(sorted(categories.items())))


def _select_stage(net: Network, n: int, and_kind: AndKind, css,
                  fan_in: int) -> tuple[list, list, dict[int, str], dict]:
    """n inverters plus 2^n coincidence gates wired per the binary
    truth table: channel j's input b sees the direct line when bit b of
    j is set, the inverted line otherwise."""
    if n < 1:
        raise ValueError("select width n must be >= 1")
    _require_css(css)
    inverters = [build_not(net, css) for _ in range(n)]
    gates = [_and_gate(net, and_kind, css, fan_in) for _ in range(2 ** n)]
    owned: dict[int, str] = {}
    select_ports: dict[str, tuple[InputTap, ...]] = {}
    for b in range(n):
        taps = list(inverters[b].input_taps("in"))
        for j, gate in enumerate(gates):
            gate_taps = gate.input_taps(f"in{b}")
            if (j >> b) & 1:
                taps.extend(padded(gate_taps, 1))
            else:
                owned.update(wire(net, inverters[b].output(), gate_taps,
                                  category=f"NOT to AND ({and_kind.value})"))
        select_ports[f"s{b}"] = tuple(taps)
    return inverters, gates, owned, select_ports


def build_decoder(net: Network, n: int, and_kind, css) -> BlockHandle:
    """n select lines to 2^n one-hot channels; channel 0 fires when no
    select line does (the non-operation channel)."""
    kind = _coerce_kind(and_kind)
    inverters, gates, owned, select_ports = _select_stage(net, n, kind, css, n)
    outputs = {f"ch{j}": gate.output() for j, gate in enumerate(gates)}
    handle = BlockHandle(
        kind="decoder",
        and_kind=kind,
        params={"n": n},
        ports=PortMap(select_ports, outputs),
        latency_ms=expected_latency("decoder", kind.value),
        owned_synapses=owned,
        sub_handles=(*inverters, *gates),
        resources=ResourceReport(0, 0, {}),
        css=css,
    )
    handle.resources = _measure(handle, include_css=True)
    return handle


def build_encoder(net: Network, num_inputs: int) -> BlockHandle:
    """Inputs d0..d{num_inputs-1} to a binary index on output bits
    b0..b{w-1}: input i excites the OR gate of every set bit of i.
    Input 0 is deliberately unconnected, so driving it changes nothing
    and an all-silent input reads as index 0. Simultaneously active
    inputs combine as the bitwise OR of their indices."""
    if num_inputs < 2:
        raise ValueError("encoder needs at least 2 inputs")
    width = (num_inputs - 1).bit_length()
    fan_ins = [
        sum(1 for i in range(1, num_inputs) if (i >> b) & 1)
        for b in range(width)
    ]
    or_gates = [build_or(net, fan_ins[b]) for b in range(width)]
    next_slot = [0] * width
    inputs: dict[str, tuple[InputTap, ...]] = {"d0": ()}
    for i in range(1, num_inputs):
        taps: list[InputTap] = []
        for b in range(width):
            if (i >> b) & 1:
                taps.extend(or_gates[b].input_taps(f"in{next_slot[b]}"))
                next_slot[b] += 1
        inputs[f"d{i}"] = tuple(taps)
    outputs = {f"or{b}": or_gates[b].output() for b in range(width)}
    handle = BlockHandle(
        kind="encoder",
        and_kind=None,
        params={"num_inputs": num_inputs},
        ports=PortMap(inputs, outputs),
        latency_ms=expected_latency("encoder"),
        owned_synapses={},
        sub_handles=tuple(or_gates),
        resources=ResourceReport(0, 0, {}),
    )
    handle.resources = _measure(handle, include_css=False)
    return handle


def build_multiplexer(net: Network, n: int, and_kind, css) -> BlockHandle:
    """2^n data lines, n select lines, one output: the selected data
    line is forwarded, everything else is dropped."""
    kind = _coerce_kind(and_kind)
    inverters, gates, owned, ports_in = _select_stage(net, n, kind, css, n + 1)
    collector = build_or(net, 2 ** n)
    for j, gate in enumerate(gates):
        ports_in[f"d{j}"] = retagged(padded(gate.input_taps(f"in{n}"), 1),
                                     f"Data inputs to AND ({kind.value})")
        owned.update(wire(net, gate.output(), collector.input_taps(f"in{j}"),
                          category="AND to OR"))
    handle = BlockHandle(
        kind="multiplexer",
        and_kind=kind,
        params={"n": n},
        ports=PortMap(ports_in, {"out": collector.output()}),
        latency_ms=expected_latency("multiplexer", kind.value),
        owned_synapses=owned,
        sub_handles=(*inverters, *gates, collector),
        resources=ResourceReport(0, 0, {}),
        css=css,
    )
    handle.resources = _measure(handle, include_css=True)
    return handle


def build_demultiplexer(net: Network, n: int, and_kind, css) -> BlockHandle:
    """One data line routed to the channel named by the n select lines."""
    kind = _coerce_kind(and_kind)
    inverters, gates, owned, ports_in = _select_stage(net, n, kind, css, n + 1)
    data_taps: list[InputTap] = []
    for gate in gates:
        data_taps.extend(retagged(padded(gate.input_taps(f"in{n}"), 1),
                                  f"Data inputs to AND ({kind.value})"))
    ports_in["d"] = tuple(data_taps)
    outputs = {f"ch{j}": gate.output() for j, gate in enumerate(gates)}
    handle = BlockHandle(
        kind="demultiplexer",
        and_kind=kind,
        params={"n": n},
        ports=PortMap(ports_in, outputs),
        latency_ms=expected_latency("demultiplexer", kind.value),
        owned_synapses=owned,
        sub_handles=(*inverters, *gates),
        resources=ResourceReport(0, 0, {}),
        css=css,
    )
    handle.resources = _measure(handle, include_css=True)
    return handle


def build_d_latch(net: Network, and_kind, css,
                  with_input_not: bool = False) -> BlockHandle:
    """Level-sensitive latch: on a store spike, q tracks data; without
    store, q holds.

    Two AND gates gate the data path: store AND data sets the SR
    neuron, store AND inverted-data resets it (a stored 0 is an active
    reset, and reset wins over set by construction). By default the
    caller supplies the inverted data line on the data_not port;
    with_input_not=True builds the inverter and pads store and data one
    extra millisecond to stay aligned with it, which raises the
    data-to-q delay by 1 ms over the block latency.
    """
    kind = _coerce_kind(and_kind)
    ak = kind.value
    set_and = _and_gate(net, kind, css, 2)
    reset_and = _and_gate(net, kind, css, 2)
    sr = build_sr_latch(net)
    owned: dict[int, str] = {}
    owned.update(wire(net, set_and.output(), sr.input_taps("set"),
                      category="AND to SR Latch (set)"))
    owned.update(wire(net, reset_and.output(), sr.input_taps("reset"),
                      category="AND to SR Latch (reset)"))
    store_taps = retagged(set_and.input_taps("in0") + reset_and.input_taps("in0"),
                          f"Store to AND ({ak})")
    data_taps = retagged(set_and.input_taps("in1"), f"Data to AND ({ak})")
    latency = expected_latency("d_latch", ak)
    if with_input_not:
        inverter = build_not(net, css)
        owned.update(wire(net, inverter.output(), reset_and.input_taps("in1"),
                          category=f"Inverted data to AND ({ak})"))
        inputs = {
            "store": padded(store_taps, 1),
            "data": padded(data_taps, 1) + retagged(inverter.input_taps("in"),
                                                    "Data to NOT"),
        }
        subs: tuple = (set_and, reset_and, sr, inverter)
        data_latency = latency + 1
    else:
        inverted_taps = retagged(reset_and.input_taps("in1"),
                                 f"Inverted data to AND ({ak})")
        inputs = {"store": store_taps, "data": data_taps,
                  "data_not": inverted_taps}
        subs = (set_and, reset_and, sr)
        data_latency = latency
    handle = BlockHandle(
        kind="d_latch",
        and_kind=kind,
        params={"with_input_not": int(with_input_not)},
        ports=PortMap(inputs, {"q": sr.output("q")}),
        latency_ms=latency,
        owned_synapses=owned,
        sub_handles=subs,
        resources=ResourceReport(0, 0, {}),
        css=css,
        data_latency_ms=data_latency,
    )
    core_neurons = sum(len(h.owned_neurons) for h in (set_and, reset_and, sr))
    handle.resources = _measure(handle, include_css=False,
                                whitelist=set(_dlatch_items(ak)),
                                neuron_count=core_neurons)
    return handle


def build_memory(net: Network, registers: int, bits: int, and_kind,
                 css) -> BlockHandle:
    """Addressable register file of D latches, written by spikes.

    A decoder turns the address lines into one-hot store strobes for a
    registers x bits grid of latches; channel 0 strobes nothing, so an
    all-zero address is a no-op. With fewer registers than the decoder
    has channels, the surplus channels exist but strobe nothing. One
    inverter per data column is shared by the whole column. Data paths
    are padded by the decoder latency (inverted data by one less) so
    strobe and data meet at each latch in the same millisecond; a write
    becomes visible on the q outputs after the block latency.
    """
    kind = _coerce_kind(and_kind)
    ak = kind.value
    geometry = MemoryGeometry(registers, bits, registers.bit_length())
    decoder = build_decoder(net, geometry.depth, kind, css)
    column_nots = [build_not(net, css) for _ in range(bits)]
    owned: dict[int, str] = {}
    grid: list[list[BlockHandle]] = []
    for i in range(1, registers + 1):
        row: list[BlockHandle] = []
        strobe = decoder.output(f"ch{i}")
        for j in range(bits):
            latch = build_d_latch(net, kind, css, with_input_not=False)
            owned.update(wire(net, strobe, latch.input_taps("store")))
            owned.update(wire(net, column_nots[j].output(),
                              latch.input_taps("data_not"),
                              extra_delay_ms=decoder.latency_ms - 1))
            row.append(latch)
        grid.append(row)
    inputs = dict(decoder.ports.inputs)
    for j in range(bits):
        taps = list(retagged(column_nots[j].input_taps("in"), "Data to NOT"))
        for row in grid:
            taps.extend(padded(row[j].input_taps("data"), decoder.latency_ms))
        inputs[f"d{j}"] = tuple(taps)
    outputs = {
        f"q{i}_{j}": grid[i - 1][j].output("q")
        for i in range(1, registers + 1)
        for j in range(bits)
    }
    handle = BlockHandle(
        kind="memory",
        and_kind=kind,
        params={"r": registers, "c": bits},
        ports=PortMap(inputs, outputs),
        latency_ms=expected_latency("memory", ak),
        owned_synapses=owned,
        sub_handles=(decoder, *column_nots,
                     *(latch for row in grid for latch in row)),
        resources=ResourceReport(0, 0, {}),
        css=css,
        geometry=geometry,
        decoder=decoder,
    )
    handle.resources = _measure(handle, include_css=True)
    return handle
