"""Experiments, verification sweeps and spike/stimulus file plumbing.

Four canned experiments exercise the blocks end to end, each with a
canonical deterministic stimulus and built-in oracle checks:

  decoder-encoder  ascending binary words through a decoder feeding an
                   encoder; the output reproduces the input stream
                   delayed by decoder latency + 1 ms.
  mux-demux        chunked select words (boundaries at t=10/40/60/90,
                   later chunks drawn from the seeded generator) with
                   data line d_j spiking every 2^j ms; the demultiplexer
                   reproduces every data input on its own channel after
                   mux + demux latency.
  d-latch          six latches in two banks sharing external data
                   inverters, driven by the store={1,2,3,8},
                   data={1,3,4}/{3,5} schedule over 16 ms.
  memory           ascending count written through a cycling address,
                   register rows decoded back out of the q spike trains.

Checks compare spike sets only from (path latency + 1) onward: earlier
timesteps fall into CSS warmup, where inverter outputs are not yet
meaningful. A user stimulus file replaces the canonical input schedules
wholesale; signals it does not mention stay silent, and names that do
not match the experiment's input ports are rejected.

verify_block() packages per-block truth-table sweeps, seeded fuzzing,
latency measurement and resource reconciliation into one report, which
is what the command-line verify subcommand prints.
"""

from __future__ import annotations

import csv
import io
import json
import operator
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import netlist
from .blocks import (
    AndKind,
    build_d_latch,
    build_decoder,
    build_demultiplexer,
    build_encoder,
    build_memory,
    build_multiplexer,
)
from .gates import build_css, build_not, drive, wire, padded
from .oracles import latch_states, memory_states
from .resources import (
    BLOCK_KINDS,
    FormulaQuery,
    expected_latency,
    reconcile,
)
from .sim import Network, SpikeRecord
from .trace import Trace, hex_word_row, spike_row, value_row

EXPERIMENTS = ("decoder-encoder", "mux-demux", "d-latch", "memory")

# Default seed for the randomized chunks of the mux-demux control
# schedule and for fuzzing; fixed so canonical runs are reproducible.
DEFAULT_SEED = 7


@dataclass(frozen=True)
class ExperimentConfig:
    """Options for run_experiment; None picks the experiment default."""

    and_kind: str | None = None
    n: int | None = None
    registers: int | None = None
    bits: int | None = None
    duration_ms: int | None = None
    seed: int = DEFAULT_SEED
    stimulus: Mapping[str, Sequence[int]] | None = None


@dataclass(frozen=True)
class Check:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class ExperimentResult:
    name: str
    and_kind: str
    params: dict
    duration_ms: int
    net: Network
    record: SpikeRecord
    trace: Trace
    signal_times: dict[str, tuple[int, ...]]
    checks: tuple[Check, ...]
    handles: dict[str, object]

    @property
    def passed(self) -> bool:
        return all(check.ok for check in self.checks)


@dataclass
class VerifyReport:
    kind: str
    and_kind: str | None
    params: dict
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(check.ok for check in self.checks)


def render_checks(checks: Iterable[Check]) -> str:
    lines = []
    for check in checks:
        status = "PASS" if check.ok else "FAIL"
        suffix = f": {check.detail}" if check.detail else ""
        lines.append(f"{status}  {check.label}{suffix}")
    return "\n".join(lines) + "\n"


def _clean_times(times: Iterable[int]) -> tuple[int, ...]:
    cleaned = sorted({operator.index(t) for t in times})
    if cleaned and cleaned[0] < 0:
        raise ValueError("stimulus times must be >= 0")
    return tuple(cleaned)


def _resolve_inputs(canonical: dict[str, tuple[int, ...]],
                    stimulus: Mapping[str, Sequence[int]] | None,
                    ) -> dict[str, tuple[int, ...]]:
    if stimulus is None:
        return canonical
    unknown = set(stimulus) - set(canonical)
    if unknown:
        raise ValueError(
            f"stimulus signals {sorted(unknown)} do not match the "
            f"experiment inputs {sorted(canonical)}")
    return {name: _clean_times(stimulus.get(name, ()))
            for name in canonical}


def _words_from_bits(bit_times: Sequence[Iterable[int]],
                     duration_ms: int) -> list[int]:
    words = [0] * duration_ms
    for b, times in enumerate(bit_times):
        for t in times:
            if 0 <= t < duration_ms:
                words[t] |= 1 << b
    return words


def _set_in_window(times: Iterable[int], start: int, stop: int) -> set[int]:
    return {t for t in times if start <= t < stop}


def _diff_detail(signal: str, got: set[int], want: set[int]) -> str:
    spurious = sorted(got - want)[:5]
    missing = sorted(want - got)[:5]
    parts = [f"signal {signal}"]
    if spurious:
        parts.append(f"unexpected at {spurious}")
    if missing:
        parts.append(f"missing at {missing}")
    return ", ".join(parts)


def _compare_sets(label: str, pairs: Sequence[tuple[str, set[int], set[int]]],
                  ok_detail: str = "") -> Check:
    for signal, got, want in pairs:
        if got != want:
            return Check(label, False, _diff_detail(signal, got, want))
    return Check(label, True, ok_detail)


def _and_value(and_kind) -> str:
    return AndKind(and_kind).value


# ---------------------------------------------------------------------------
# Experiments


def _run_decoder_encoder(cfg: ExperimentConfig) -> ExperimentResult:
    ak = _and_value(cfg.and_kind or "fast")
    n = cfg.n or 2
    dec_latency = expected_latency("decoder", ak)
    total = dec_latency + 1
    duration = cfg.duration_ms or max(16, 2 * 2 ** n + total + 2)

    canonical = {
        f"s{b}": tuple(t for t in range(1, duration)
                       if (((t - 1) % 2 ** n) >> b) & 1)
        for b in range(n)
    }
    inputs = _resolve_inputs(canonical, cfg.stimulus)
    words = _words_from_bits([inputs[f"s{b}"] for b in range(n)], duration)

    net = Network()
    css = build_css(net)
    decoder = build_decoder(net, n, ak, css)
    encoder = build_encoder(net, 2 ** n)
    for j in range(2 ** n):
        wire(net, decoder.output(f"ch{j}"), encoder.input_taps(f"d{j}"))
    for b in range(n):
        drive(net, decoder, f"s{b}", net.add_source(inputs[f"s{b}"]))
    width = (2 ** n - 1).bit_length()
    channel_ids = [decoder.output(f"ch{j}") for j in range(2 ** n)]
    or_ids = [encoder.output(f"or{b}") for b in range(width)]
    net.record(*channel_ids, *or_ids)
    record = net.run(duration)

    checks = []
    pairs = []
    for b in range(width):
        want = {t + total for t in range(1, duration)
                if (words[t] >> b) & 1 and t + total < duration}
        got = _set_in_window(record.times(or_ids[b]), total + 1, duration)
        pairs.append((f"or{b}", got, want))
    checks.append(_compare_sets(
        "encoder output equals input words delayed by "
        f"{total} ms", pairs, f"delay {total} ms over {duration} ms"))

    pairs = []
    for j in range(2 ** n):
        want = {t + dec_latency for t in range(1, duration)
                if words[t] == j and t + dec_latency < duration}
        got = _set_in_window(record.times(channel_ids[j]),
                             dec_latency + 1, duration)
        pairs.append((f"ch{j}", got, want))
    checks.append(_compare_sets(
        "decoder channels one-hot per input word", pairs))

    rows = [spike_row(f"s{b}", inputs[f"s{b}"], duration) for b in range(n)]
    rows += [spike_row(f"ch{j}", record.times(channel_ids[j]), duration,
                       valid_from=dec_latency + 1) for j in range(2 ** n)]
    rows += [spike_row(f"or{b}", record.times(or_ids[b]), duration,
                       valid_from=total + 1) for b in range(width)]

    signal_times = {f"s{b}": inputs[f"s{b}"] for b in range(n)}
    signal_times.update({f"ch{j}": record.times(channel_ids[j])
                         for j in range(2 ** n)})
    signal_times.update({f"or{b}": record.times(or_ids[b])
                         for b in range(width)})
    return ExperimentResult(
        name="decoder-encoder", and_kind=ak, params={"n": n},
        duration_ms=duration, net=net, record=record,
        trace=Trace(duration, tuple(rows)), signal_times=signal_times,
        checks=tuple(checks),
        handles={"decoder": decoder, "encoder": encoder})


def _control_chunks(n: int, duration_ms: int, seed: int) -> list[int]:
    """Per-ms select words: 0 until t=10, then all-ones until t=40, then
    seeded random words per chunk, each different from its predecessor."""
    bounds = [b for b in (1, 10, 40, 60, 90) if b < duration_ms]
    bounds.append(duration_ms)
    rng = random.Random(seed)
    words = [0] * duration_ms
    previous = None
    for i in range(len(bounds) - 1):
        if i == 0:
            value = 0
        elif i == 1:
            value = 2 ** n - 1
        else:
            value = rng.randrange(2 ** n)
            while value == previous:
                value = rng.randrange(2 ** n)
        for t in range(bounds[i], bounds[i + 1]):
            words[t] = value
        previous = value
    return words


def _run_mux_demux(cfg: ExperimentConfig) -> ExperimentResult:
    ak = _and_value(cfg.and_kind or "fast")
    n = cfg.n or 2
    mux_latency = expected_latency("multiplexer", ak)
    demux_latency = expected_latency("demultiplexer", ak)
    total = mux_latency + demux_latency
    duration = cfg.duration_ms or 110

    sel_words = _control_chunks(n, duration, cfg.seed)
    canonical = {
        f"s{b}": tuple(t for t in range(1, duration)
                       if (sel_words[t] >> b) & 1)
        for b in range(n)
    }
    for j in range(2 ** n):
        canonical[f"d{j}"] = tuple(t for t in range(1, duration)
                                   if (t - 1) % 2 ** j == 0)
    inputs = _resolve_inputs(canonical, cfg.stimulus)
    sel_words = _words_from_bits([inputs[f"s{b}"] for b in range(n)], duration)
    data_sets = [set(inputs[f"d{j}"]) for j in range(2 ** n)]

    net = Network()
    css = build_css(net)
    mux = build_multiplexer(net, n, ak, css)
    demux = build_demultiplexer(net, n, ak, css)
    wire(net, mux.output("out"), demux.input_taps("d"))
    for b in range(n):
        source = net.add_source(inputs[f"s{b}"])
        drive(net, mux, f"s{b}", source)
        # the demux sees the same controls, delayed to match the data
        # that is still in flight through the mux
        drive(net, demux, f"s{b}", source, extra_delay_ms=mux_latency)
    for j in range(2 ** n):
        drive(net, mux, f"d{j}", net.add_source(inputs[f"d{j}"]))
    out_id = mux.output("out")
    channel_ids = [demux.output(f"ch{j}") for j in range(2 ** n)]
    net.record(out_id, *channel_ids)
    record = net.run(duration)

    checks = []
    want_out = {t + mux_latency for t in range(1, duration)
                if t in data_sets[sel_words[t]]
                and t + mux_latency < duration}
    got_out = _set_in_window(record.times(out_id), mux_latency + 1, duration)
    checks.append(_compare_sets(
        f"multiplexer forwards the selected data line after {mux_latency} ms",
        [("out", got_out, want_out)]))

    pairs = []
    for j in range(2 ** n):
        want = {t + total for t in range(1, duration)
                if sel_words[t] == j and t in data_sets[j]
                and t + total < duration}
        got = _set_in_window(record.times(channel_ids[j]), total + 1, duration)
        pairs.append((f"ch{j}", got, want))
    checks.append(_compare_sets(
        f"demultiplexer reproduces each data input after {total} ms", pairs))

    rows = [spike_row(f"s{b}", inputs[f"s{b}"], duration) for b in range(n)]
    rows += [spike_row(f"d{j}", inputs[f"d{j}"], duration)
             for j in range(2 ** n)]
    rows.append(spike_row("mux out", record.times(out_id), duration,
                          valid_from=mux_latency + 1))
    rows += [spike_row(f"ch{j}", record.times(channel_ids[j]), duration,
                       valid_from=total + 1) for j in range(2 ** n)]

    signal_times = {name: inputs[name] for name in canonical}
    signal_times["mux_out"] = record.times(out_id)
    signal_times.update({f"ch{j}": record.times(channel_ids[j])
                         for j in range(2 ** n)})
    return ExperimentResult(
        name="mux-demux", and_kind=ak, params={"n": n},
        duration_ms=duration, net=net, record=record,
        trace=Trace(duration, tuple(rows)), signal_times=signal_times,
        checks=tuple(checks),
        handles={"multiplexer": mux, "demultiplexer": demux})


def _run_d_latch(cfg: ExperimentConfig) -> ExperimentResult:
    ak = _and_value(cfg.and_kind or "classic")
    duration = cfg.duration_ms or 16
    latency = expected_latency("d_latch", ak)
    data_latency = latency + 1  # external inverter in the data path

    canonical = {
        "store": (1, 2, 3, 8),
        "data1": (1, 3, 4),
        "data2": (3, 5),
    }
    canonical = {k: tuple(t for t in v if t < duration)
                 for k, v in canonical.items()}
    inputs = _resolve_inputs(canonical, cfg.stimulus)

    net = Network()
    css = build_css(net)
    store_source = net.add_source(inputs["store"])
    latches = []
    inverters = []
    for name in ("data1", "data2"):
        inverter = build_not(net, css)
        inverters.append(inverter)
        data_source = net.add_source(inputs[name])
        wire(net, data_source, inverter.input_taps("in"))
        for _ in range(3):
            latch = build_d_latch(net, ak, css)
            # store and data are padded one ms to meet the inverted data
            wire(net, store_source, padded(latch.input_taps("store"), 1))
            wire(net, data_source, padded(latch.input_taps("data"), 1))
            wire(net, inverter.output(), latch.input_taps("data_not"))
            latches.append(latch)
    q_ids = [latch.output("q") for latch in latches]
    net.record(*q_ids)
    record = net.run(duration)

    store_bits = [t in set(inputs["store"]) for t in range(1, duration)]
    checks = []
    for group, name in enumerate(("data1", "data2")):
        data_bits = [t in set(inputs[name]) for t in range(1, duration)]
        states = latch_states(store_bits, data_bits)
        want = {t for t in range(data_latency + 1, duration)
                if states[t - data_latency - 1]}
        pairs = []
        for k in range(group * 3, group * 3 + 3):
            got = _set_in_window(record.times(q_ids[k]),
                                 data_latency + 1, duration)
            pairs.append((f"q{k}", got, want))
        checks.append(_compare_sets(
            f"latches {group * 3}-{group * 3 + 2} track store/{name} "
            f"with {data_latency} ms delay", pairs))

    rows = [spike_row(name, inputs[name], duration)
            for name in ("store", "data1", "data2")]
    rows += [spike_row(f"q{k}", record.times(q_ids[k]), duration,
                       valid_from=data_latency + 1)
             for k in range(len(latches))]

    signal_times = dict(inputs)
    signal_times.update({f"q{k}": record.times(q_ids[k])
                         for k in range(len(latches))})
    return ExperimentResult(
        name="d-latch", and_kind=ak, params={"latches": len(latches)},
        duration_ms=duration, net=net, record=record,
        trace=Trace(duration, tuple(rows)), signal_times=signal_times,
        checks=tuple(checks),
        handles={"latches": tuple(latches), "inverters": tuple(inverters)})


def _channel_mark(j: int) -> str:
    # the non-operation channel is called out explicitly in traces
    return "0*" if j == 0 else str(j)


def _run_memory(cfg: ExperimentConfig) -> ExperimentResult:
    ak = _and_value(cfg.and_kind or "fast")
    registers = cfg.registers or 3
    bits = cfg.bits or 3
    duration = cfg.duration_ms or 30
    latency = expected_latency("memory", ak)
    depth = registers.bit_length()

    canonical = {
        f"s{b}": tuple(t for t in range(1, duration)
                       if ((t % (registers + 1)) >> b) & 1)
        for b in range(depth)
    }
    for j in range(bits):
        canonical[f"d{j}"] = tuple(t for t in range(1, duration)
                                   if ((t % 2 ** bits) >> j) & 1)
    inputs = _resolve_inputs(canonical, cfg.stimulus)
    addresses = _words_from_bits([inputs[f"s{b}"] for b in range(depth)],
                                 duration)
    data_words = _words_from_bits([inputs[f"d{j}"] for j in range(bits)],
                                  duration)

    net = Network()
    css = build_css(net)
    memory = build_memory(net, registers, bits, ak, css)
    for name in inputs:
        drive(net, memory, name, net.add_source(inputs[name]))
    q_ids = {(i, j): memory.output(f"q{i}_{j}")
             for i in range(1, registers + 1) for j in range(bits)}
    decoder = memory.decoder
    channel_ids = [decoder.output(f"ch{j}")
                   for j in range(2 ** decoder.params["n"])]
    net.record(*q_ids.values(), *channel_ids)
    record = net.run(duration)

    states = memory_states(addresses[1:], data_words[1:], registers, bits)
    checks = []
    pairs = []
    for (i, j), qid in q_ids.items():
        want = {t for t in range(latency + 1, duration)
                if (states[t - latency - 1][i - 1] >> j) & 1}
        got = _set_in_window(record.times(qid), latency + 1, duration)
        pairs.append((f"q{i}_{j}", got, want))
    checks.append(_compare_sets(
        f"register contents match the write oracle after {latency} ms",
        pairs))

    dec_latency = decoder.latency_ms
    pairs = []
    for j, cid in enumerate(channel_ids):
        want = {t + dec_latency for t in range(1, duration)
                if addresses[t] == j and t + dec_latency < duration}
        got = _set_in_window(record.times(cid), dec_latency + 1, duration)
        pairs.append((f"ch{j}", got, want))
    checks.append(_compare_sets(
        "address decoder one-hot, channel 0 on idle input", pairs))

    rows = [spike_row(name, inputs[name], duration) for name in inputs]
    expected_cells = ["" if t < dec_latency + 1
                      else _channel_mark(addresses[t - dec_latency])
                      for t in range(duration)]
    rows.append(value_row("Channel (Expected)", expected_cells,
                          valid_from=dec_latency + 1))
    decoded_cells = [""] * duration
    for j, cid in enumerate(channel_ids):
        for t in record.times(cid):
            decoded_cells[t] = _channel_mark(j)
    rows.append(value_row("Channel (Decoder)", decoded_cells,
                          valid_from=dec_latency + 1))
    for i in range(1, registers + 1):
        for j in range(bits):
            rows.append(spike_row(f"q{i}_{j}", record.times(q_ids[(i, j)]),
                                  duration, valid_from=latency + 1))
        rows.append(hex_word_row(
            f"Register {i}",
            [record.times(q_ids[(i, j)]) for j in range(bits)],
            duration, valid_from=latency + 1))

    signal_times = dict(inputs)
    signal_times.update({f"ch{j}": record.times(cid)
                         for j, cid in enumerate(channel_ids)})
    signal_times.update({f"q{i}_{j}": record.times(qid)
                         for (i, j), qid in q_ids.items()})
    return ExperimentResult(
        name="memory", and_kind=ak,
        params={"registers": registers, "bits": bits},
        duration_ms=duration, net=net, record=record,
        trace=Trace(duration, tuple(rows)), signal_times=signal_times,
        checks=tuple(checks), handles={"memory": memory})


_RUNNERS = {
    "decoder-encoder": _run_decoder_encoder,
    "mux-demux": _run_mux_demux,
    "d-latch": _run_d_latch,
    "memory": _run_memory,
}


def run_experiment(name: str,
                   config: ExperimentConfig | None = None) -> ExperimentResult:
    """Build, stimulate and check one canned experiment."""
    if name not in _RUNNERS:
        raise ValueError(
            f"unknown experiment {name!r}; expected one of {EXPERIMENTS}")
    return _RUNNERS[name](config or ExperimentConfig())


# ---------------------------------------------------------------------------
# Verification sweeps


def sweep_decoder(n: int, and_kind: str,
                  words: Sequence[int] | None = None) -> Check:
    """Pipelined truth-table sweep; silence decodes as word 0."""
    ak = _and_value(and_kind)
    if words is None:
        words = list(range(2 ** n))
    latency = expected_latency("decoder", ak)
    duration = len(words) + latency + 3
    stream = [0] * duration
    for i, word in enumerate(words):
        stream[1 + i] = word
    net = Network()
    css = build_css(net)
    decoder = build_decoder(net, n, ak, css)
    for b in range(n):
        drive(net, decoder, f"s{b}",
              net.add_source([t for t in range(1, duration)
                              if (stream[t] >> b) & 1]))
    channel_ids = [decoder.output(f"ch{j}") for j in range(2 ** n)]
    net.record(*channel_ids)
    record = net.run(duration)
    pairs = []
    for j in range(2 ** n):
        want = {t + latency for t in range(1, duration)
                if stream[t] == j and t + latency < duration}
        got = _set_in_window(record.times(channel_ids[j]),
                             latency + 1, duration)
        pairs.append((f"ch{j}", got, want))
    return _compare_sets(
        f"decoder n={n} {ak}: {len(words)} pipelined words", pairs,
        f"{len(words)} words, latency {latency} ms")


def sweep_encoder(num_inputs: int,
                  subsets: Sequence[int] | None = None) -> Check:
    """Pipelined sweep of input subsets (bitmask per ms); expected output
    is the bitwise OR of the active indices."""
    if subsets is None:
        subsets = list(range(2 ** num_inputs))
    latency = expected_latency("encoder")
    duration = len(subsets) + latency + 2
    width = (num_inputs - 1).bit_length()
    net = Network()
    encoder = build_encoder(net, num_inputs)
    for i in range(num_inputs):
        times = [1 + k for k, subset in enumerate(subsets)
                 if (subset >> i) & 1]
        if times:
            drive(net, encoder, f"d{i}", net.add_source(times))
    or_ids = [encoder.output(f"or{b}") for b in range(width)]
    net.record(*or_ids)
    record = net.run(duration)
    values = []
    for subset in subsets:
        value = 0
        for i in range(num_inputs):
            if (subset >> i) & 1:
                value |= i
        values.append(value)
    pairs = []
    for b in range(width):
        want = {1 + k + latency for k, value in enumerate(values)
                if (value >> b) & 1 and 1 + k + latency < duration}
        got = set(record.times(or_ids[b]))
        pairs.append((f"or{b}", got, want))
    return _compare_sets(
        f"encoder {num_inputs} inputs: {len(subsets)} pipelined subsets",
        pairs, f"{len(subsets)} subsets")


def sweep_multiplexer(n: int, and_kind: str,
                      cases: Sequence[tuple[int, int]] | None = None) -> Check:
    """Pipelined (select word, data mask) cases; default visits every
    select word against selected/other lines on and off."""
    ak = _and_value(and_kind)
    if cases is None:
        cases = []
        everyone = 2 ** 2 ** n - 1
        for select in range(2 ** n):
            for d_sel in (0, 1):
                for d_others in (0, 1):
                    mask = (d_sel << select) | (
                        (everyone & ~(1 << select)) if d_others else 0)
                    cases.append((select, mask))
    latency = expected_latency("multiplexer", ak)
    duration = len(cases) + latency + 3
    net = Network()
    css = build_css(net)
    mux = build_multiplexer(net, n, ak, css)
    for b in range(n):
        drive(net, mux, f"s{b}",
              net.add_source([1 + k for k, (select, _) in enumerate(cases)
                              if (select >> b) & 1]))
    for j in range(2 ** n):
        times = [1 + k for k, (_, mask) in enumerate(cases)
                 if (mask >> j) & 1]
        if times:
            drive(net, mux, f"d{j}", net.add_source(times))
    out_id = mux.output("out")
    net.record(out_id)
    record = net.run(duration)
    want = {1 + k + latency for k, (select, mask) in enumerate(cases)
            if (mask >> select) & 1 and 1 + k + latency < duration}
    got = _set_in_window(record.times(out_id), latency + 1, duration)
    return _compare_sets(
        f"multiplexer n={n} {ak}: {len(cases)} pipelined cases",
        [("out", got, want)], f"{len(cases)} cases")


def sweep_demultiplexer(n: int, and_kind: str,
                        cases: Sequence[tuple[int, int]] | None = None) -> Check:
    """Pipelined (select word, data bit) cases; default visits every
    select word with data present and absent."""
    ak = _and_value(and_kind)
    if cases is None:
        cases = [(select, d) for select in range(2 ** n) for d in (0, 1)]
    latency = expected_latency("demultiplexer", ak)
    duration = len(cases) + latency + 3
    net = Network()
    css = build_css(net)
    demux = build_demultiplexer(net, n, ak, css)
    for b in range(n):
        drive(net, demux, f"s{b}",
              net.add_source([1 + k for k, (select, _) in enumerate(cases)
                              if (select >> b) & 1]))
    data_times = [1 + k for k, (_, d) in enumerate(cases) if d]
    if data_times:
        drive(net, demux, "d", net.add_source(data_times))
    channel_ids = [demux.output(f"ch{j}") for j in range(2 ** n)]
    net.record(*channel_ids)
    record = net.run(duration)
    pairs = []
    for j in range(2 ** n):
        want = {1 + k + latency for k, (select, d) in enumerate(cases)
                if select == j and d and 1 + k + latency < duration}
        got = _set_in_window(record.times(channel_ids[j]),
                             latency + 1, duration)
        pairs.append((f"ch{j}", got, want))
    return _compare_sets(
        f"demultiplexer n={n} {ak}: {len(cases)} pipelined cases", pairs,
        f"{len(cases)} cases")


def fuzz_d_latch(and_kind: str, steps: int = 64,
                 seed: int = DEFAULT_SEED) -> Check:
    """Random store/data schedule against the hold/track oracle. The
    inverted data line is supplied as an ideal complement source."""
    ak = _and_value(and_kind)
    rng = random.Random(seed)
    latency = expected_latency("d_latch", ak)
    duration = steps + latency + 2
    store_bits = [rng.random() < 0.4 for _ in range(steps)]
    data_bits = [rng.random() < 0.5 for _ in range(steps)]
    # silence after the schedule: store stays down, the latch must hold
    store_all = store_bits + [False] * (duration - 1 - steps)
    data_all = data_bits + [False] * (duration - 1 - steps)
    net = Network()
    css = build_css(net)
    latch = build_d_latch(net, ak, css)
    wire(net, net.add_source([t + 1 for t, bit in enumerate(store_all) if bit]),
         latch.input_taps("store"))
    wire(net, net.add_source([t + 1 for t, bit in enumerate(data_all) if bit]),
         latch.input_taps("data"))
    wire(net, net.add_source([t + 1 for t, bit in enumerate(data_all) if not bit]),
         latch.input_taps("data_not"))
    q_id = latch.output("q")
    net.record(q_id)
    record = net.run(duration)
    states = latch_states(store_all, data_all)
    want = {t for t in range(latency + 1, duration)
            if states[t - latency - 1]}
    got = _set_in_window(record.times(q_id), latency + 1, duration)
    return _compare_sets(
        f"d_latch {ak}: {steps} random store/data steps",
        [("q", got, want)], f"{steps} steps, seed {seed}")


def fuzz_memory(registers: int, bits: int, and_kind: str, writes: int = 64,
                seed: int = DEFAULT_SEED) -> Check:
    """Random write stream (addresses may hit the non-operation channel
    and, at partial occupancy, register-free channels) against the
    array-write oracle, checked on the full q timelines."""
    ak = _and_value(and_kind)
    rng = random.Random(seed)
    latency = expected_latency("memory", ak)
    depth = registers.bit_length()
    duration = writes + latency + 2
    addresses = [rng.randrange(2 ** depth) for _ in range(writes)]
    words = [rng.randrange(2 ** bits) for _ in range(writes)]
    addr_all = addresses + [0] * (duration - 1 - writes)
    word_all = words + [0] * (duration - 1 - writes)
    net = Network()
    css = build_css(net)
    memory = build_memory(net, registers, bits, ak, css)
    for b in range(depth):
        times = [t + 1 for t, a in enumerate(addr_all) if (a >> b) & 1]
        if times:
            drive(net, memory, f"s{b}", net.add_source(times))
    for j in range(bits):
        times = [t + 1 for t, w in enumerate(word_all) if (w >> j) & 1]
        if times:
            drive(net, memory, f"d{j}", net.add_source(times))
    q_ids = {(i, j): memory.output(f"q{i}_{j}")
             for i in range(1, registers + 1) for j in range(bits)}
    net.record(*q_ids.values())
    record = net.run(duration)
    states = memory_states(addr_all, word_all, registers, bits)
    pairs = []
    for (i, j), qid in q_ids.items():
        want = {t for t in range(latency + 1, duration)
                if (states[t - latency - 1][i - 1] >> j) & 1}
        got = _set_in_window(record.times(qid), latency + 1, duration)
        pairs.append((f"q{i}_{j}", got, want))
    final = states[-1]
    return _compare_sets(
        f"memory r={registers} c={bits} {ak}: {writes} random writes",
        pairs, f"final contents {list(final)}")


def measure_latency(kind: str, and_kind: str | None = None, *, n: int = 2,
                    num_inputs: int = 4, registers: int = 3,
                    bits: int = 3) -> int:
    """Empirical input-to-output delay: present one probe word at t=4
    (safely past CSS warmup) and time the first response spike."""
    probe = 4
    net = Network()
    if kind == "encoder":
        encoder = build_encoder(net, num_inputs)
        drive(net, encoder, "d1", net.add_source([probe]))
        out = encoder.output("or0")
    else:
        ak = _and_value(and_kind)
        css = build_css(net)
        if kind == "decoder":
            block = build_decoder(net, n, ak, css)
            drive(net, block, "s0", net.add_source([probe]))
            out = block.output("ch1")
        elif kind == "multiplexer":
            block = build_multiplexer(net, n, ak, css)
            drive(net, block, "s0", net.add_source([probe]))
            drive(net, block, "d1", net.add_source([probe]))
            out = block.output("out")
        elif kind == "demultiplexer":
            block = build_demultiplexer(net, n, ak, css)
            drive(net, block, "s0", net.add_source([probe]))
            drive(net, block, "d", net.add_source([probe]))
            out = block.output("ch1")
        elif kind == "d_latch":
            block = build_d_latch(net, ak, css)
            drive(net, block, "store", net.add_source([probe]))
            drive(net, block, "data", net.add_source([probe]))
            out = block.output("q")
        elif kind == "memory":
            block = build_memory(net, registers, bits, ak, css)
            drive(net, block, "s0", net.add_source([probe]))
            drive(net, block, "d0", net.add_source([probe]))
            out = block.output("q1_0")
        else:
            raise ValueError(f"unknown block kind {kind!r}")
    net.record(out)
    record = net.run(probe + 12)
    times = record.times(out)
    if not times:
        raise RuntimeError(f"{kind}: probe produced no output spike")
    return times[0] - probe


def _reconcile_checks(kind: str, ak: str | None, *, n: int | None = None,
                      num_inputs: int | None = None,
                      registers: int | None = None,
                      bits: int | None = None) -> list[Check]:
    net = Network()
    checks = []
    if kind == "encoder":
        handle = build_encoder(net, num_inputs)
        queries = [FormulaQuery("encoder", form="n", n=num_inputs)]
    else:
        css = build_css(net)
        if kind == "decoder":
            handle = build_decoder(net, n, ak, css)
            queries = [FormulaQuery("decoder", ak, "n", n=n),
                       FormulaQuery("decoder", ak, "m", m=2 ** n)]
        elif kind == "multiplexer":
            handle = build_multiplexer(net, n, ak, css)
            queries = [FormulaQuery("multiplexer", ak, "n", n=n),
                       FormulaQuery("multiplexer", ak, "m", m=2 ** n)]
        elif kind == "demultiplexer":
            handle = build_demultiplexer(net, n, ak, css)
            queries = [FormulaQuery("demultiplexer", ak, "n", n=n),
                       FormulaQuery("demultiplexer", ak, "m", m=2 ** n)]
        elif kind == "d_latch":
            handle = build_d_latch(net, ak, css)
            queries = [FormulaQuery("d_latch", ak)]
        elif kind == "memory":
            depth = registers.bit_length()
            handle = build_memory(net, registers, bits, ak, css)
            if registers == 2 ** depth - 1:
                queries = [
                    FormulaQuery("memory", ak, "n", n=depth, c=bits),
                    FormulaQuery("memory", ak, "m", r=registers, c=bits),
                ]
            else:
                checks.append(Check(
                    "resource formulas skipped", True,
                    f"closed forms assume full occupancy r = 2^n - 1, "
                    f"got r={registers}"))
                queries = []
        else:
            raise ValueError(f"unknown block kind {kind!r}")
    for query in queries:
        result = reconcile(handle, query)
        label = (f"measured resources match the {query.form}-form "
                 f"({handle.resources.neurons} neurons, "
                 f"{handle.resources.synapses} synapses)")
        detail = "" if result.ok else "; ".join(result.diffs)
        checks.append(Check(label, result.ok, detail))
    return checks


def verify_block(kind: str, and_kind: str | None = None, *,
                 n: int | None = None, registers: int | None = None,
                 bits: int | None = None, trials: int = 64,
                 seed: int = DEFAULT_SEED) -> VerifyReport:
    """Sweep, fuzz, time and reconcile one block; everything a quick
    confidence pass needs, as a printable report."""
    if kind not in BLOCK_KINDS:
        raise ValueError(f"unknown block kind {kind!r}")
    ak = None if kind == "encoder" else _and_value(and_kind or "fast")
    rng = random.Random(seed)
    checks: list[Check] = []
    params: dict = {}
    if kind == "decoder":
        n = n or 2
        params = {"n": n}
        checks.append(sweep_decoder(n, ak))
        checks.append(sweep_decoder(
            n, ak, [rng.randrange(2 ** n) for _ in range(trials)]))
        checks.extend(_reconcile_checks(kind, ak, n=n))
    elif kind == "encoder":
        num_inputs = n or 4
        params = {"num_inputs": num_inputs}
        if num_inputs <= 10:
            checks.append(sweep_encoder(num_inputs))
        else:
            subsets = [rng.randrange(2 ** num_inputs) for _ in range(trials)]
            checks.append(sweep_encoder(num_inputs, subsets))
        checks.extend(_reconcile_checks(kind, None, num_inputs=num_inputs))
    elif kind == "multiplexer":
        n = n or 2
        params = {"n": n}
        checks.append(sweep_multiplexer(n, ak))
        checks.append(sweep_multiplexer(
            n, ak, [(rng.randrange(2 ** n), rng.randrange(2 ** 2 ** n))
                    for _ in range(trials)]))
        checks.extend(_reconcile_checks(kind, ak, n=n))
    elif kind == "demultiplexer":
        n = n or 2
        params = {"n": n}
        checks.append(sweep_demultiplexer(n, ak))
        checks.append(sweep_demultiplexer(
            n, ak, [(rng.randrange(2 ** n), rng.randrange(2))
                    for _ in range(trials)]))
        checks.extend(_reconcile_checks(kind, ak, n=n))
    elif kind == "d_latch":
        checks.append(fuzz_d_latch(ak, steps=trials, seed=seed))
        checks.extend(_reconcile_checks(kind, ak))
    elif kind == "memory":
        registers = registers or 3
        bits = bits or 3
        params = {"registers": registers, "bits": bits}
        checks.append(fuzz_memory(registers, bits, ak, writes=trials,
                                  seed=seed))
        checks.extend(_reconcile_checks(kind, ak, registers=registers,
                                        bits=bits))
    if kind == "encoder":
        measured = measure_latency("encoder", num_inputs=params["num_inputs"])
        wanted = expected_latency("encoder")
    else:
        measured = measure_latency(kind, ak, n=params.get("n", 2),
                                   registers=params.get("registers", 3),
                                   bits=params.get("bits", 3))
        wanted = expected_latency(kind, ak)
    checks.append(Check(f"measured latency {measured} ms equals table value",
                        measured == wanted,
                        "" if measured == wanted else f"expected {wanted}"))
    return VerifyReport(kind, ak, params, tuple(checks))


# ---------------------------------------------------------------------------
# Files


def export_spikes(signal_times: Mapping[str, Iterable[int]],
                  format: str = "csv") -> str:
    """Spike data as text: CSV rows "signal,time_ms" sorted by
    (time, signal), or a JSON object keyed by signal."""
    if format == "csv":
        rows = sorted(
            ((int(t), name) for name, times in signal_times.items()
             for t in times),
        )
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["signal", "time_ms"])
        for t, name in rows:
            writer.writerow([name, t])
        return out.getvalue()
    if format == "structured":
        payload = {name: [int(t) for t in times]
                   for name, times in sorted(signal_times.items())}
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown spike export format {format!r}")


def parse_stimulus(text: str) -> dict[str, tuple[int, ...]]:
    """Parse a stimulus CSV of "signal,time_ms" rows; a header line is
    tolerated. Times are deduplicated and sorted per signal."""
    collected: dict[str, set[int]] = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise ValueError(f"stimulus line {lineno}: expected 2 columns")
        name, raw_time = row[0].strip(), row[1].strip()
        if lineno == 1 and not raw_time.lstrip("-").isdigit():
            continue  # header
        if not name:
            raise ValueError(f"stimulus line {lineno}: empty signal name")
        try:
            time = int(raw_time)
        except ValueError:
            raise ValueError(
                f"stimulus line {lineno}: bad time {raw_time!r}") from None
        if time < 0:
            raise ValueError(f"stimulus line {lineno}: negative time")
        collected.setdefault(name, set()).add(time)
    return {name: tuple(sorted(times)) for name, times in collected.items()}


def shuffle_synapses(net: Network, seed: int) -> Network:
    """Rebuild the network with its synapse list randomly permuted;
    entity ids are unchanged, so spike records stay comparable."""
    doc = netlist.to_document(net)
    random.Random(seed).shuffle(doc["synapses"])
    rebuilt, _ = netlist.from_document(doc)
    return rebuilt
