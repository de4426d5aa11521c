"""Discrete-time spiking boolean circuits.

Neurons integrate weighted integer charge and fire the same millisecond
a threshold-reaching packet arrives. On that substrate the package
builds logic gates (NOT, OR, two AND realizations, an SR latch), block
generators (decoder, encoder, multiplexer, demultiplexer, D latch,
register-file memory), closed-form resource and latency accounting, and
a verification harness with canned end-to-end experiments.
"""

from .sim import Network, NeuronParams, SpikeRecord, Synapse
from .gates import (
    GateHandle,
    build_and_classic,
    build_and_fast,
    build_css,
    build_not,
    build_or,
    build_sr_latch,
    drive,
    wire,
)
from .blocks import (
    AndKind,
    BlockHandle,
    MemoryGeometry,
    build_d_latch,
    build_decoder,
    build_demultiplexer,
    build_encoder,
    build_memory,
    build_multiplexer,
)
from .resources import (
    AND_KINDS,
    BLOCK_KINDS,
    FormulaQuery,
    ReconcileReport,
    ResourceReport,
    encoder_synapse_sum,
    expected_latency,
    formula_resources,
    reconcile,
)
from .oracles import (
    decoder_channel,
    demux_channels,
    encoder_value,
    latch_states,
    memory_final,
    memory_states,
    mux_output,
)
from .trace import Trace, TraceRow, render_trace
from .harness import (
    DEFAULT_SEED,
    EXPERIMENTS,
    Check,
    ExperimentConfig,
    ExperimentResult,
    VerifyReport,
    export_spikes,
    measure_latency,
    parse_stimulus,
    run_experiment,
    verify_block,
)

__version__ = "0.1.0"

__all__ = [
    "AND_KINDS",
    "AndKind",
    "BLOCK_KINDS",
    "BlockHandle",
    "Check",
    "DEFAULT_SEED",
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentResult",
    "FormulaQuery",
    "GateHandle",
    "MemoryGeometry",
    "Network",
    "NeuronParams",
    "ReconcileReport",
    "ResourceReport",
    "SpikeRecord",
    "Synapse",
    "Trace",
    "TraceRow",
    "VerifyReport",
    "build_and_classic",
    "build_and_fast",
    "build_css",
    "build_d_latch",
    "build_decoder",
    "build_demultiplexer",
    "build_encoder",
    "build_memory",
    "build_multiplexer",
    "build_not",
    "build_or",
    "build_sr_latch",
    "decoder_channel",
    "demux_channels",
    "drive",
    "encoder_synapse_sum",
    "encoder_value",
    "expected_latency",
    "export_spikes",
    "formula_resources",
    "latch_states",
    "measure_latency",
    "memory_final",
    "memory_states",
    "mux_output",
    "parse_stimulus",
    "reconcile",
    "render_trace",
    "run_experiment",
    "verify_block",
    "wire",
    "__version__",
]
