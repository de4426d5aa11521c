"""Millisecond-grid trace assembly and text rendering.

A trace is a bundle of named rows over a shared time axis. Spike rows
show a 1 in every millisecond the signal fired; derived rows carry
arbitrary cell text, e.g. a register's contents as hex computed by
binary-weighting its bit rows. Each row masks everything before its
valid_from timestep, which is how start-up transients of CSS-driven
outputs are kept out of rendered output and golden files.

Two styles: "table" is a fixed-width grid, one column per millisecond;
"raster" is one line per row with a character per millisecond (| spike,
. quiet, space masked), and value rows listed as their changes.

Rendering is a pure function of the trace, so repeated runs of a
deterministic experiment produce byte-identical text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class TraceRow:
    label: str
    cells: tuple[str, ...]
    valid_from: int = 0


@dataclass(frozen=True)
class Trace:
    duration_ms: int
    rows: tuple[TraceRow, ...] = ()

    def row(self, label: str) -> TraceRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)


def spike_row(label: str, times: Iterable[int], duration_ms: int,
              valid_from: int = 0) -> TraceRow:
    marks = set(times)
    cells = tuple("1" if t in marks else "" for t in range(duration_ms))
    return TraceRow(label, cells, valid_from)


def value_row(label: str, values: Sequence[object],
              valid_from: int = 0) -> TraceRow:
    cells = tuple("" if v is None else str(v) for v in values)
    return TraceRow(label, cells, valid_from)


def hex_word_row(label: str, bit_times: Sequence[Iterable[int]],
                 duration_ms: int, valid_from: int = 0) -> TraceRow:
    """Register contents per ms from its bit rows, least significant
    first; shown in hex, blank while the register holds 0."""
    sets = [set(times) for times in bit_times]
    cells = []
    for t in range(duration_ms):
        word = sum(1 << j for j, s in enumerate(sets) if t in s)
        cells.append(f"0x{word:02X}" if word else "")
    return TraceRow(label, tuple(cells), valid_from)


def masked_cells(row: TraceRow) -> tuple[str, ...]:
    return tuple("" if t < row.valid_from else cell
                 for t, cell in enumerate(row.cells))


def _is_spike_row(row: TraceRow) -> bool:
    return all(cell in ("", "1") for cell in row.cells)


def render_table(trace: Trace) -> str:
    label_width = max([len("t (ms)")] + [len(r.label) for r in trace.rows])
    grid = [masked_cells(row) for row in trace.rows]
    widths = [
        max([len(str(t))] + [len(cells[t]) for cells in grid])
        for t in range(trace.duration_ms)
    ]
    lines = [" ".join(
        ["t (ms)".ljust(label_width)]
        + [str(t).rjust(widths[t]) for t in range(trace.duration_ms)])]
    for row, cells in zip(trace.rows, grid):
        lines.append(" ".join(
            [row.label.ljust(label_width)]
            + [cells[t].rjust(widths[t]) for t in range(trace.duration_ms)]))
    return "\n".join(lines) + "\n"


def _describe_changes(row: TraceRow) -> str:
    cells = masked_cells(row)
    parts = []
    previous = ""
    for t in range(row.valid_from, len(cells)):
        if cells[t] != previous:
            parts.append(f"t={t}: {cells[t] or '(blank)'}")
            previous = cells[t]
    return ", ".join(parts) if parts else "(blank throughout)"


def render_raster(trace: Trace) -> str:
    label_width = max([0] + [len(r.label) for r in trace.rows])
    lines = []
    for row in trace.rows:
        if _is_spike_row(row):
            chars = "".join(
                " " if t < row.valid_from else ("|" if cell else ".")
                for t, cell in enumerate(row.cells))
            lines.append(f"{row.label.ljust(label_width)} {chars}")
        else:
            lines.append(f"{row.label.ljust(label_width)} {_describe_changes(row)}")
    return "\n".join(lines) + "\n"


def render_trace(trace: Trace, style: str = "table") -> str:
    if style == "table":
        return render_table(trace)
    if style == "raster":
        return render_raster(trace)
    raise ValueError(f"unknown trace style {style!r}")
