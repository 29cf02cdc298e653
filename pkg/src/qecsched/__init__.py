"""Syndrome-measurement circuit scheduling for CSS codes with few ancillas."""

from .codes import (
    CssCode,
    GeneratorLabel,
    PauliType,
    default_logical_z,
    repetition_code,
    rotated_surface_code,
    validate_css,
)
from .layout import (
    ConnectivityGraph,
    Placement,
    graph_distance,
    layout_from_json,
    layout_to_json,
    line_layout,
    surround_layout,
)
from .scheduler import (
    CnotCouple,
    GuardExceeded,
    InternalStall,
    MeasureReset,
    ScheduledCircuit,
    ScheduleTelemetry,
    Swap,
    Timestep,
    decide_actions,
    get_candidate,
    get_target,
    remove_unnecessary_gates,
    replay,
    schedule,
    situation_of,
    tie_break,
)
from .circuit import (
    CircuitMetrics,
    MemoryExperiment,
    Round,
    build_memory_experiment,
    compose_round,
    default_rounds,
    metrics,
    reverse_sequence,
)
from .verify import (
    FrameMismatch,
    TableauReport,
    TableauSim,
    gf2_parity_check,
    sample_emitted_text,
    tableau_verify,
)
from .emit import DetectorPlan, NoiseParams, build_detector_plan, emit_noisy_circuit

__all__ = [
    "CssCode",
    "GeneratorLabel",
    "PauliType",
    "default_logical_z",
    "repetition_code",
    "rotated_surface_code",
    "validate_css",
    "ConnectivityGraph",
    "Placement",
    "graph_distance",
    "layout_from_json",
    "layout_to_json",
    "line_layout",
    "surround_layout",
    "CnotCouple",
    "GuardExceeded",
    "InternalStall",
    "MeasureReset",
    "ScheduledCircuit",
    "ScheduleTelemetry",
    "Swap",
    "Timestep",
    "decide_actions",
    "get_candidate",
    "get_target",
    "remove_unnecessary_gates",
    "replay",
    "schedule",
    "situation_of",
    "tie_break",
    "CircuitMetrics",
    "MemoryExperiment",
    "Round",
    "build_memory_experiment",
    "compose_round",
    "default_rounds",
    "metrics",
    "reverse_sequence",
    "FrameMismatch",
    "TableauReport",
    "TableauSim",
    "gf2_parity_check",
    "sample_emitted_text",
    "tableau_verify",
    "DetectorPlan",
    "NoiseParams",
    "build_detector_plan",
    "emit_noisy_circuit",
]
