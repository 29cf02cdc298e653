"""Round composition and memory experiments built from scheduled runs.

A full syndrome round plays the Z-basis run, its reversal, then the
X-basis run and its reversal. Reversal re-uses the same couplings in
opposite order, so the ancillas retrace their walks and the placement
returns to where the round started; every round of a memory experiment
is therefore the same circuit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .codes import CssCode, GeneratorLabel, PauliType, default_logical_z, validate_css
from .layout import ConnectivityGraph, Placement
from .scheduler import (
    CnotCouple,
    MeasureReset,
    ScheduledCircuit,
    Timestep,
    schedule,
)

PHASE_NAMES = ("z", "z_reverse", "x", "x_reverse")


@dataclass(frozen=True)
class CircuitMetrics:
    depth: int
    volume: int
    ancilla_volume: int


def metrics(circuit: ScheduledCircuit) -> CircuitMetrics:
    """Depth counts timesteps holding at least one two-qubit action."""
    depth = sum(1 for ts in circuit.timesteps if ts.two_qubit_actions())
    return CircuitMetrics(
        depth=depth,
        volume=depth * (circuit.n + circuit.m),
        ancilla_volume=depth * circuit.m,
    )


def reverse_sequence(circuit: ScheduledCircuit) -> ScheduledCircuit:
    """Time-reverse a run, keeping it a valid measurement circuit.

    CNOT and SWAP are self-inverse and within a timestep act on disjoint
    qubits, so reversing the timestep order preserves adjacency. Each
    measurement moves to the reversed position of its cycle's first CNOT,
    which is where the reversed accumulation completes.
    """
    total = len(circuit.timesteps)
    open_cycles: dict[int, int] = {}
    relocated: dict[int, list[MeasureReset]] = {}
    for t, ts in enumerate(circuit.timesteps):
        for a in ts.actions:
            if isinstance(a, CnotCouple) and a.ancilla not in open_cycles:
                open_cycles[a.ancilla] = t
        for mr in ts.measurements():
            first = open_cycles.pop(mr.ancilla, None)
            if first is None:
                raise ValueError(f"measurement of ancilla {mr.ancilla} without accumulation")
            relocated.setdefault(total - 1 - first, []).append(mr)
    if open_cycles:
        raise ValueError(f"unfinished accumulation on ancillas {sorted(open_cycles)}")

    steps = []
    for k in range(total):
        src = circuit.timesteps[total - 1 - k]
        actions = list(src.two_qubit_actions())
        # Keep the measurement right behind its ancilla's coupling, the
        # same shape the scheduler produces.
        for mr in relocated.get(k, ()):
            at = next(
                idx
                for idx, a in enumerate(actions)
                if isinstance(a, CnotCouple) and a.ancilla == mr.ancilla
            )
            actions.insert(at + 1, mr)
        steps.append(Timestep(tuple(actions)))
    return ScheduledCircuit(
        basis=circuit.basis,
        n=circuit.n,
        m=circuit.m,
        timesteps=tuple(steps),
        start_placement=circuit.end_placement,
        end_placement=circuit.start_placement,
        telemetry=None,
    )


@dataclass(frozen=True)
class Round:
    """One syndrome round: Z run, reversed Z run, X run, reversed X run.
    Codes without X generators use only the first two segments."""

    segments: tuple[ScheduledCircuit, ...]
    phases: tuple[str, ...]

    def journal(self) -> list[tuple[str, int, GeneratorLabel]]:
        """(phase, ancilla, label) per measurement, in emission order."""
        out = []
        for phase, seg in zip(self.phases, self.segments):
            for ts in seg.timesteps:
                for mr in ts.measurements():
                    out.append((phase, mr.ancilla, mr.label))
        return out

    def depth(self) -> int:
        return sum(metrics(seg).depth for seg in self.segments)


def compose_round(s_z: ScheduledCircuit, s_x: ScheduledCircuit | None) -> Round:
    """Chain the four segments, checking placement continuity throughout."""
    if s_z.basis is not PauliType.Z:
        raise ValueError("first segment must be a Z-basis run")
    segments: list[ScheduledCircuit] = [s_z, reverse_sequence(s_z)]
    phases = ["z", "z_reverse"]
    if s_x is not None and s_x.timesteps:
        if s_x.basis is not PauliType.X:
            raise ValueError("second run must be an X-basis run")
        if s_x.start_placement != s_z.start_placement:
            raise ValueError("X run must start from the round's initial placement")
        segments += [s_x, reverse_sequence(s_x)]
        phases += ["x", "x_reverse"]
    for a, b in zip(segments, segments[1:]):
        if a.end_placement != b.start_placement:
            raise ValueError("placement mismatch between round segments")
    if segments[-1].end_placement != segments[0].start_placement:
        raise ValueError("round does not return to its initial placement")
    return Round(segments=tuple(segments), phases=tuple(phases))


@dataclass(frozen=True)
class MemoryExperiment:
    """R identical syndrome rounds between noiseless preparation and a
    final transversal Z readout of the data qubits."""

    code: CssCode
    graph: ConnectivityGraph
    placement: Placement
    rounds: int
    round: Round
    logical_support: tuple[int, ...]

    def journal(self) -> list[tuple[int, str, int, GeneratorLabel]]:
        """(round, phase, ancilla, label) per measurement, in order."""
        per_round = self.round.journal()
        return [
            (r, phase, ancilla, label)
            for r in range(self.rounds)
            for (phase, ancilla, label) in per_round
        ]

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.code.n,
                "m": self.placement.m,
                "rounds": self.rounds,
                "logical_support": list(self.logical_support),
                "phases": list(self.round.phases),
                "segments": [json.loads(seg.to_json()) for seg in self.round.segments],
            },
            indent=2,
        )


def default_rounds(distance: int) -> int:
    return max(distance - 2, 1)


def build_memory_experiment(
    code: CssCode,
    graph: ConnectivityGraph,
    placement: Placement,
    rounds: int,
    logical_support: tuple[int, ...] | None = None,
    guard: int | None = None,
) -> MemoryExperiment:
    """Schedule both basis runs once and repeat them for `rounds` rounds."""
    report = validate_css(code)
    if not report.ok:
        raise ValueError(f"invalid code: {report.violation} ({report.detail})")
    if rounds < 1:
        raise ValueError("need at least one round")
    if placement.n != code.n:
        raise ValueError("placement data count does not match the code")

    s_z, _ = schedule(graph, placement, list(code.z_generators), guard=guard)
    s_x = None
    if code.x_generators:
        s_x, _ = schedule(
            graph, placement, list(code.x_generators), guard=guard, basis=PauliType.X
        )
    rnd = compose_round(s_z, s_x)
    support = tuple(logical_support) if logical_support else default_logical_z(code)
    return MemoryExperiment(
        code=code,
        graph=graph,
        placement=placement.copy(),
        rounds=rounds,
        round=rnd,
        logical_support=support,
    )
