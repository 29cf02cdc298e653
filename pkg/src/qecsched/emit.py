"""Emission of memory experiments as circuit text.

The output uses a small instruction vocabulary (R, RX, M, MX, MR, CX,
SWAP, DEPOLARIZE1, DEPOLARIZE2, DETECTOR, OBSERVABLE_INCLUDE) with graph
vertices as qubit ids, so it loads directly into standard stabilizer
samplers. Two-qubit depolarizing noise follows every CNOT and SWAP;
single-qubit depolarizing noise hits every vertex not touched by a
two-qubit gate in that timestep. Preparation, measurement and reset are
depth-free and noiseless.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import MemoryExperiment
from .codes import PauliType
from .scheduler import CnotCouple, Swap


@dataclass(frozen=True)
class NoiseParams:
    p_cnot: float = 0.0
    p_swap: float = 0.0
    p_idle: float = 0.0

    def __post_init__(self) -> None:
        for name, p in (("p_cnot", self.p_cnot), ("p_swap", self.p_swap), ("p_idle", self.p_idle)):
            if not 0.0 <= p < 1.0:
                raise ValueError(f"{name}={p} outside [0, 1)")

    @property
    def noiseless(self) -> bool:
        return self.p_cnot == 0.0 and self.p_swap == 0.0 and self.p_idle == 0.0


@dataclass(frozen=True)
class DetectorPlan:
    """Comparison structure over the measurement record.

    Each entry in `detectors` is a tuple of absolute record indices whose
    XOR is deterministic without noise. Z-label chains open with their
    first record, continue with consecutive pairs and close against the
    final data readout; X-label chains carry consecutive pairs only, since
    a label's first X record is random. `observable` holds the final data
    records of the logical support.
    """

    detectors: tuple[tuple[int, ...], ...]
    observable: tuple[int, ...]
    total_records: int


def build_detector_plan(experiment: MemoryExperiment) -> DetectorPlan:
    journal = experiment.journal()
    chains: dict = {}
    for rec, (_, _, _, label) in enumerate(journal):
        chains.setdefault(label, []).append(rec)
    base = len(journal)
    data_record = {j: base + j - 1 for j in range(1, experiment.code.n + 1)}

    detectors: list[tuple[int, ...]] = []
    for label in experiment.code.generators:
        recs = chains.get(label)
        if not recs:
            continue
        if label.pauli is PauliType.Z:
            detectors.append((recs[0],))
        for a, b in zip(recs, recs[1:]):
            detectors.append((a, b))
        if label.pauli is PauliType.Z:
            detectors.append(tuple([recs[-1]] + [data_record[q] for q in label.qubits]))
    observable = tuple(data_record[q] for q in experiment.logical_support)
    return DetectorPlan(
        detectors=tuple(detectors),
        observable=observable,
        total_records=base + experiment.code.n,
    )


def emit_noisy_circuit(experiment: MemoryExperiment, noise: NoiseParams) -> str:
    """Render the experiment to circuit text, deterministically."""
    graph = experiment.graph
    n = experiment.code.n
    m = experiment.placement.m
    plan = build_detector_plan(experiment)
    lines: list[str] = []

    placement = experiment.placement.copy()
    if graph.coords is not None:
        for v, coord in enumerate(graph.coords):
            ref = placement.occupant(v)
            name = f"d{ref}" if ref > 0 else f"a{-ref}"
            lines.append(f"# qubit {v} at {tuple(coord)}: {name}")
    lines.append(f"# rounds={experiment.rounds} n={n} m={m}")
    lines.append(
        f"# noise p_cnot={noise.p_cnot!r} p_swap={noise.p_swap!r} p_idle={noise.p_idle!r}"
    )

    all_vertices = " ".join(str(v) for v in range(graph.vertex_count))
    lines.append(f"R {all_vertices}")
    prepared = {i: PauliType.Z for i in range(1, m + 1)}
    records_emitted = 0

    for _ in range(experiment.rounds):
        for seg in experiment.round.segments:
            coupled = {
                a.ancilla
                for ts in seg.timesteps
                for a in ts.actions
                if isinstance(a, CnotCouple)
            }
            flips = [i for i in sorted(coupled) if prepared[i] is not seg.basis]
            if flips:
                op = "RX" if seg.basis is PauliType.X else "R"
                targets = " ".join(str(placement.vertex_of(-i)) for i in flips)
                lines.append(f"{op} {targets}")
                for i in flips:
                    prepared[i] = seg.basis
            for ts in seg.timesteps:
                cnot_pairs: list[int] = []
                swap_pairs: list[int] = []
                busy: set[int] = set()
                gate_lines: list[str] = []
                mr_lines: list[str] = []
                swaps_to_apply = []
                for a in ts.actions:
                    if isinstance(a, CnotCouple):
                        vd = placement.vertex_of(a.data)
                        va = placement.vertex_of(-a.ancilla)
                        pair = (vd, va) if seg.basis is PauliType.Z else (va, vd)
                        gate_lines.append(f"CX {pair[0]} {pair[1]}")
                        cnot_pairs += list(pair)
                        busy.update(pair)
                    elif isinstance(a, Swap):
                        v1 = placement.vertex_of(a.q1)
                        v2 = placement.vertex_of(a.q2)
                        gate_lines.append(f"SWAP {v1} {v2}")
                        swap_pairs += [v1, v2]
                        busy.update((v1, v2))
                        swaps_to_apply.append(a)
                for a in swaps_to_apply:
                    placement.swap(a.q1, a.q2)
                for mr in ts.measurements():
                    va = placement.vertex_of(-mr.ancilla)
                    if seg.basis is PauliType.Z:
                        mr_lines.append(f"MR {va}")
                    else:
                        mr_lines.append(f"MX {va}")
                        mr_lines.append(f"RX {va}")
                    records_emitted += 1
                lines.extend(gate_lines)
                if noise.p_cnot > 0 and cnot_pairs:
                    lines.append(
                        f"DEPOLARIZE2({noise.p_cnot!r}) " + " ".join(map(str, cnot_pairs))
                    )
                if noise.p_swap > 0 and swap_pairs:
                    lines.append(
                        f"DEPOLARIZE2({noise.p_swap!r}) " + " ".join(map(str, swap_pairs))
                    )
                if noise.p_idle > 0:
                    idle = sorted(set(range(graph.vertex_count)) - busy)
                    if len(idle) != graph.vertex_count - 2 * len(ts.two_qubit_actions()):
                        raise AssertionError("idle accounting is off")
                    if idle:
                        lines.append(
                            f"DEPOLARIZE1({noise.p_idle!r}) " + " ".join(map(str, idle))
                        )
                lines.extend(mr_lines)

    if placement != experiment.placement:
        raise AssertionError("experiment does not return to its initial placement")
    data_targets = " ".join(str(placement.vertex_of(j)) for j in range(1, n + 1))
    lines.append(f"M {data_targets}")
    records_emitted += n
    if records_emitted != plan.total_records:
        raise AssertionError("measurement journal does not match emission")

    for refs in plan.detectors:
        terms = " ".join(f"rec[-{plan.total_records - ref}]" for ref in refs)
        lines.append(f"DETECTOR {terms}")
    obs = " ".join(f"rec[-{plan.total_records - ref}]" for ref in plan.observable)
    lines.append(f"OBSERVABLE_INCLUDE(0) {obs}")
    return "\n".join(lines) + "\n"
