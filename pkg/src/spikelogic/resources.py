"""Closed-form resource and latency accounting for the spiking blocks.

Every block has two published cost shapes: one parameterized by the
number of select inputs n, and one by the number of output channels m
(or by registers r and word width c for the memory). Both shapes agree
wherever both apply (m = 2^n, r = 2^n - 1). Totals come with a
per-category itemization under the same labels the builders use to tag
synapses, so a measured handle can be reconciled against the formulas
category by category.

Conventions baked into the tables: decoder, multiplexer, demultiplexer
and memory totals include the constant spike source (two neurons, two
internal synapses); the D latch totals exclude the CSS and any input
inverter; the CSS bootstrap source never counts anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

BLOCK_KINDS = ("decoder", "encoder", "multiplexer", "demultiplexer",
               "d_latch", "memory")
AND_KINDS = ("classic", "fast")

# Input-to-output delay in milliseconds, by (block, AND kind).
_LATENCY = {
    ("decoder", "classic"): 3,
    ("decoder", "fast"): 2,
    ("encoder", None): 1,
    ("multiplexer", "classic"): 4,
    ("multiplexer", "fast"): 3,
    ("demultiplexer", "classic"): 3,
    ("demultiplexer", "fast"): 2,
    ("d_latch", "classic"): 3,
    ("d_latch", "fast"): 2,
    ("memory", "classic"): 6,
    ("memory", "fast"): 4,
}


def _clog2(x: int) -> int:
    """Ceil of log2 for x >= 1 (0 for x = 1), exact integer arithmetic."""
    if x < 1:
        raise ValueError("argument must be >= 1")
    return (x - 1).bit_length()


def _and_kind(value) -> str:
    if value is None:
        raise ValueError("an AND kind ('classic' or 'fast') is required")
    name = getattr(value, "value", value)
    if name not in AND_KINDS:
        raise ValueError(f"unknown AND kind {value!r}")
    return name


def expected_latency(kind: str, and_kind=None) -> int:
    """Block delay in ms from input presentation to output spike."""
    if kind == "encoder":
        return _LATENCY[("encoder", None)]
    key = (kind, _and_kind(and_kind))
    if key not in _LATENCY:
        raise ValueError(f"unknown block kind {kind!r}")
    return _LATENCY[key]


def encoder_synapse_sum(num_inputs: int) -> int:
    """Synapses of an encoder: one per set bit of each input index >= 1."""
    if num_inputs < 2:
        raise ValueError("num_inputs must be >= 2")
    return sum(bin(i - 1).count("1") for i in range(2, num_inputs + 1))


@dataclass(frozen=True)
class ResourceReport:
    """Neuron and synapse totals plus a per-category synapse breakdown."""

    neurons: int
    synapses: int
    by_category: Mapping[str, int]

    def category(self, label: str) -> int:
        return self.by_category.get(label, 0)


@dataclass(frozen=True)
class FormulaQuery:
    """Selects one closed form: block kind, AND kind and size parameters.

    form "n" uses the select-input parameterization (n; the encoder's n
    is its input count). form "m" uses output channels m, or (r, c) for
    the memory.
    """

    kind: str
    and_kind: str | None = None
    form: str = "n"
    n: int | None = None
    m: int | None = None
    r: int | None = None
    c: int | None = None


def _decoder_items(n: int, ak: str) -> dict[str, int]:
    if ak == "classic":
        return {
            "Input to NOT": n,
            "Input to AND (classic)": n * 2 ** n,
            "NOT to AND (classic)": n * 2 ** n,
            "Internal AND (classic)": 2 ** n,
            "Internal CSS": 2,
            "CSS to NOT": 2 * n,
        }
    return {
        "Input to NOT": n,
        "Input to AND (fast)": n * 2 ** (n - 1),
        "NOT to AND (fast)": n * 2 ** (n - 1),
        "CSS to AND (fast)": 2 ** (n + 1),
        "Internal CSS": 2,
        "CSS to NOT": 2 * n,
    }


def _dlatch_items(ak: str) -> dict[str, int]:
    items = {
        f"Store to AND ({ak})": 4 if ak == "classic" else 2,
        f"Data to AND ({ak})": 2 if ak == "classic" else 1,
        f"Inverted data to AND ({ak})": 2 if ak == "classic" else 1,
        "AND to SR Latch (set)": 1,
        "AND to SR Latch (reset)": 1,
        "Internal SR Latch": 1,
    }
    if ak == "classic":
        items["Internal AND (classic)"] = 2
    return items


def _add_items(total: dict[str, int], extra: Mapping[str, int], scale: int = 1) -> None:
    for label, count in extra.items():
        total[label] = total.get(label, 0) + scale * count


def _memory_items(n: int, c: int, ak: str) -> dict[str, int]:
    r = 2 ** n - 1
    items = _decoder_items(n, ak)
    _add_items(items, {"Data to NOT": c, "CSS to NOT": 2 * c})
    _add_items(items, _dlatch_items(ak), scale=r * c)
    if ak == "fast":
        _add_items(items, {"CSS to AND (fast)": 4 * r * c})
    return items


def _mux_items(n: int, ak: str) -> dict[str, int]:
    items = _decoder_items(n, ak)
    per_and = 2 if ak == "classic" else 1
    _add_items(items, {
        f"Data inputs to AND ({ak})": per_and * 2 ** n,
        "AND to OR": 2 ** n,
    })
    return items


def _demux_items(n: int, ak: str) -> dict[str, int]:
    items = _decoder_items(n, ak)
    per_and = 2 if ak == "classic" else 1
    _add_items(items, {f"Data inputs to AND ({ak})": per_and * 2 ** n})
    return items


def _report(neurons: int, synapses: int, items: Mapping[str, int] | None) -> ResourceReport:
    if items is None:
        items = {"total": synapses}
    return ResourceReport(neurons, synapses, dict(sorted(items.items())))


def _n_form(query: FormulaQuery) -> ResourceReport:
    kind = query.kind
    if kind == "d_latch":
        ak = _and_kind(query.and_kind)
        neurons = 5 if ak == "classic" else 3
        synapses = 13 if ak == "classic" else 7
        return _report(neurons, synapses, _dlatch_items(ak))
    n = query.n
    if n is None:
        raise ValueError("form 'n' requires the n parameter")
    if kind == "encoder":
        if n < 2:
            raise ValueError("encoder needs at least 2 inputs")
        syn = encoder_synapse_sum(n)
        return _report(_clog2(n), syn, {"Input to OR": syn})
    if kind == "memory":
        if n < 1 or query.c is None or query.c < 1:
            raise ValueError("memory needs n >= 1 and c >= 1")
        ak = _and_kind(query.and_kind)
        c = query.c
        if ak == "classic":
            neurons = 2 ** n * (5 * c + 2) + n - 4 * c + 2
            synapses = 2 ** n * (2 * n + 13 * c + 1) + 3 * n - 10 * c + 2
        else:
            neurons = 2 ** n * (3 * c + 1) + n - 2 * c + 2
            synapses = 2 ** n * (n + 11 * c + 2) + 3 * n - 8 * c + 2
        return _report(neurons, synapses, _memory_items(n, c, ak))
    if n < 1:
        raise ValueError("n must be >= 1")
    ak = _and_kind(query.and_kind)
    if kind == "decoder":
        if ak == "classic":
            return _report(2 ** (n + 1) + n + 2,
                           2 ** n * (2 * n + 1) + 3 * n + 2,
                           _decoder_items(n, ak))
        return _report(2 ** n + n + 2,
                       2 ** n * (n + 2) + 3 * n + 2,
                       _decoder_items(n, ak))
    if kind == "multiplexer":
        if ak == "classic":
            return _report(2 ** (n + 1) + n + 3,
                           2 ** n * (2 * n + 4) + 3 * n + 2,
                           _mux_items(n, ak))
        return _report(2 ** n + n + 3,
                       2 ** n * (n + 4) + 3 * n + 2,
                       _mux_items(n, ak))
    if kind == "demultiplexer":
        if ak == "classic":
            return _report(2 ** (n + 1) + n + 2,
                           2 ** n * (2 * n + 3) + 3 * n + 2,
                           _demux_items(n, ak))
        return _report(2 ** n + n + 2,
                       2 ** n * (n + 3) + 3 * n + 2,
                       _demux_items(n, ak))
    raise ValueError(f"unknown block kind {kind!r}")


def _m_form(query: FormulaQuery) -> ResourceReport:
    kind = query.kind
    if kind == "d_latch":
        return _n_form(FormulaQuery("d_latch", query.and_kind))
    if kind == "memory":
        r, c = query.r, query.c
        if r is None or c is None or r < 1 or c < 1:
            raise ValueError("memory needs r >= 1 and c >= 1")
        ak = _and_kind(query.and_kind)
        depth = _clog2(r + 1)
        if ak == "classic":
            neurons = 2 * r + c + 5 * r * c + depth + 4
            synapses = r + 3 * c + 13 * r * c + (2 * r + 5) * depth + 3
        else:
            neurons = r + c + 3 * r * c + depth + 3
            synapses = 2 * r + 3 * c + 11 * r * c + (r + 4) * depth + 4
        items = _memory_items(depth, c, ak) if r == 2 ** depth - 1 else None
        return _report(neurons, synapses, items)
    m = query.m
    if m is None or m < 1:
        raise ValueError("form 'm' requires m >= 1")
    if kind == "encoder":
        raise ValueError("encoder synapses have no m-form closed expression")
    ak = _and_kind(query.and_kind)
    depth = _clog2(m)
    exact = depth >= 1 and m == 2 ** depth
    if kind == "decoder":
        if ak == "classic":
            neurons = 2 * m + depth + 2
            synapses = m + (2 * m + 3) * depth + 2
        else:
            neurons = m + depth + 2
            synapses = 2 * m + (m + 3) * depth + 2
        return _report(neurons, synapses, _decoder_items(depth, ak) if exact else None)
    if kind == "multiplexer":
        if ak == "classic":
            neurons = 2 * m + depth + 3
            synapses = 4 * m + (2 * m + 3) * depth + 2
        else:
            neurons = m + depth + 3
            synapses = 4 * m + (m + 3) * depth + 2
        return _report(neurons, synapses, _mux_items(depth, ak) if exact else None)
    if kind == "demultiplexer":
        if ak == "classic":
            neurons = 2 * m + depth + 2
            synapses = 3 * m + (2 * m + 3) * depth + 2
        else:
            neurons = m + depth + 2
            synapses = 3 * m + (m + 3) * depth + 2
        return _report(neurons, synapses, _demux_items(depth, ak) if exact else None)
    raise ValueError(f"unknown block kind {kind!r}")


def formula_resources(query: FormulaQuery) -> ResourceReport:
    """Evaluate the published closed form selected by the query."""
    if query.kind not in BLOCK_KINDS:
        raise ValueError(f"unknown block kind {query.kind!r}")
    if query.form == "n":
        return _n_form(query)
    if query.form == "m":
        return _m_form(query)
    raise ValueError(f"unknown form {query.form!r} (expected 'n' or 'm')")


@dataclass(frozen=True)
class ReconcileReport:
    ok: bool
    diffs: tuple[str, ...]
    measured: ResourceReport
    expected: ResourceReport


def _itemized(report: ResourceReport) -> bool:
    return set(report.by_category) != {"total"}


def _check_params(handle, query: FormulaQuery) -> None:
    if handle.kind != query.kind:
        raise ValueError(f"handle is a {handle.kind}, query asks for {query.kind}")
    handle_ak = None if handle.and_kind is None else _and_kind(handle.and_kind)
    query_ak = None if query.and_kind is None else _and_kind(query.and_kind)
    if handle.kind != "encoder" and handle_ak != query_ak:
        raise ValueError(f"AND kind mismatch: handle {handle_ak}, query {query_ak}")
    params = handle.params
    if handle.kind in ("decoder", "multiplexer", "demultiplexer"):
        n = params["n"]
        if query.form == "n":
            ok = query.n == n
        else:
            ok = query.m == 2 ** n
    elif handle.kind == "encoder":
        num = params["num_inputs"]
        if query.form == "n":
            ok = query.n == num
        else:
            ok = query.m is not None and num == 2 ** query.m
    elif handle.kind == "memory":
        r, c = params["r"], params["c"]
        if query.form == "n":
            ok = query.c == c and query.n is not None and r == 2 ** query.n - 1
        else:
            ok = query.r == r and query.c == c
    else:
        ok = True
    if not ok:
        raise ValueError("size parameters of handle and query do not match")


def reconcile(measured, query: FormulaQuery) -> ReconcileReport:
    """Compare a handle's measured resources against the closed form.

    Accepts a block handle (whose parameters must match the query) or a
    bare ResourceReport. Category-level differences are reported when
    both sides carry an itemization.
    """
    if isinstance(measured, ResourceReport):
        report = measured
    else:
        _check_params(measured, query)
        report = measured.resources
    expected = formula_resources(query)
    diffs: list[str] = []
    if report.neurons != expected.neurons:
        diffs.append(f"neurons: measured {report.neurons}, formula {expected.neurons}")
    if report.synapses != expected.synapses:
        diffs.append(f"synapses: measured {report.synapses}, formula {expected.synapses}")
    if _itemized(report) and _itemized(expected):
        for label in sorted(set(report.by_category) | set(expected.by_category)):
            got = report.by_category.get(label, 0)
            want = expected.by_category.get(label, 0)
            if got != want:
                diffs.append(f"category {label!r}: measured {got}, formula {want}")
    return ReconcileReport(not diffs, tuple(diffs), report, expected)
