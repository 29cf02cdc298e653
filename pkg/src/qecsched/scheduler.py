"""Greedy scheduling of syndrome-extraction circuits with reusable ancillas.

State during scheduling is the triple (parity, placement, pending):

* parity: m x n uint8 matrix; parity[i-1, j-1] = 1 when ancilla i has
  accumulated data qubit j since its last measurement.
* placement: current qubit-to-vertex bijection (mutated by SWAPs).
* pending: labels not yet measured, in a stable order that tie-breaking
  depends on.

Each timestep every ancilla gets one of four cases: 1 accumulate with a
pending row (measure on completion), 2 walk toward a qubit that can extend
the row, 3 start a fresh row, 4 idle. If nobody acts, a tie-break pass
moves idle-row ancillas toward the nearest pending label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .codes import GeneratorLabel, PauliType
from .layout import ConnectivityGraph, Placement


@dataclass(frozen=True)
class CnotCouple:
    """CNOT coupling ancilla `ancilla` with data qubit `data` (1-based)."""

    ancilla: int
    data: int

    def refs(self) -> tuple[int, int]:
        return (-self.ancilla, self.data)


@dataclass(frozen=True)
class Swap:
    """SWAP between two qubits given as signed refs (+data / -ancilla)."""

    q1: int
    q2: int

    def refs(self) -> tuple[int, int]:
        return (self.q1, self.q2)


@dataclass(frozen=True)
class MeasureReset:
    """Measure-and-reset of ancilla `ancilla`, committing `label`."""

    ancilla: int
    label: GeneratorLabel

    def refs(self) -> tuple[int]:
        return (-self.ancilla,)


Action = CnotCouple | Swap | MeasureReset


@dataclass(frozen=True)
class Timestep:
    """One parallel layer. Two-qubit supports must be pairwise disjoint and
    every MeasureReset must share the step with a CNOT on its ancilla."""

    actions: tuple

    def __post_init__(self) -> None:
        seen: set[int] = set()
        cnot_ancillas: set[int] = set()
        for a in self.actions:
            if isinstance(a, (CnotCouple, Swap)):
                r1, r2 = a.refs()
                if r1 in seen or r2 in seen or r1 == r2:
                    raise ValueError(f"overlapping two-qubit supports in {self.actions}")
                seen.update((r1, r2))
                if isinstance(a, CnotCouple):
                    cnot_ancillas.add(a.ancilla)
        for a in self.actions:
            if isinstance(a, MeasureReset) and a.ancilla not in cnot_ancillas:
                raise ValueError(f"measurement of ancilla {a.ancilla} without its CNOT")

    def two_qubit_actions(self) -> list:
        return [a for a in self.actions if isinstance(a, (CnotCouple, Swap))]

    def measurements(self) -> list[MeasureReset]:
        return [a for a in self.actions if isinstance(a, MeasureReset)]


@dataclass(frozen=True)
class Situation:
    """Per-step classification. Flags record which cases occurred; the tag
    is A when anything was measured-toward (case 1), B when the step came
    from the tie-break pass, D when a fresh row started (case 3, no case 1),
    C when only walking happened."""

    tag: str
    case_flags: tuple[bool, bool, bool, bool]


def situation_of(cases: list[int | None], tie_broken: bool = False) -> Situation:
    flags = tuple(any(c == k for c in cases) for k in (1, 2, 3, 4))
    if tie_broken:
        tag = "B"
    elif flags[0]:
        tag = "A"
    elif flags[2]:
        tag = "D"
    elif flags[1]:
        tag = "C"
    else:
        tag = "B"
    return Situation(tag, flags)


@dataclass(frozen=True)
class StepRecord:
    situation: str
    cases: tuple
    measured: int
    labels_left: int


@dataclass
class ScheduleTelemetry:
    steps: list[StepRecord] = field(default_factory=list)

    def situations(self) -> str:
        return "".join(rec.situation for rec in self.steps)

    def to_json(self) -> str:
        return json.dumps(
            [
                {
                    "situation": r.situation,
                    "cases": list(r.cases),
                    "measured": r.measured,
                    "labels_left": r.labels_left,
                }
                for r in self.steps
            ],
            indent=2,
        )


@dataclass(frozen=True)
class ScheduledCircuit:
    basis: PauliType
    n: int
    m: int
    timesteps: tuple[Timestep, ...]
    start_placement: Placement
    end_placement: Placement
    telemetry: ScheduleTelemetry | None = None

    def measured_labels(self) -> list[GeneratorLabel]:
        out = []
        for ts in self.timesteps:
            out.extend(mr.label for mr in ts.measurements())
        return out

    def to_json(self) -> str:
        def doc(a) -> dict:
            if isinstance(a, CnotCouple):
                return {"op": "cnot", "a": a.ancilla, "d": a.data, "label": None}
            if isinstance(a, Swap):
                return {"op": "swap", "a": a.q1, "d": a.q2, "label": None}
            return {"op": "mr", "a": a.ancilla, "d": None, "label": list(a.label.qubits)}

        return json.dumps(
            {
                "basis": self.basis.value,
                "n": self.n,
                "m": self.m,
                "timesteps": [[doc(a) for a in ts.actions] for ts in self.timesteps],
                "start_placement": self.start_placement.as_list(),
                "end_placement": self.end_placement.as_list(),
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "ScheduledCircuit":
        raw = json.loads(text)
        basis = PauliType(raw["basis"])
        steps = []
        for ts in raw["timesteps"]:
            actions = []
            for a in ts:
                if a["op"] == "cnot":
                    actions.append(CnotCouple(int(a["a"]), int(a["d"])))
                elif a["op"] == "swap":
                    actions.append(Swap(int(a["a"]), int(a["d"])))
                elif a["op"] == "mr":
                    actions.append(
                        MeasureReset(int(a["a"]), GeneratorLabel(tuple(a["label"]), basis))
                    )
                else:
                    raise ValueError(f"unknown op {a['op']!r}")
            steps.append(Timestep(tuple(actions)))
        n, m = int(raw["n"]), int(raw["m"])
        return ScheduledCircuit(
            basis=basis,
            n=n,
            m=m,
            timesteps=tuple(steps),
            start_placement=Placement(n, m, raw["start_placement"]),
            end_placement=Placement(n, m, raw["end_placement"]),
        )


class SchedulingError(Exception):
    pass


class GuardExceeded(SchedulingError):
    def __init__(self, guard: int, telemetry: ScheduleTelemetry) -> None:
        super().__init__(f"no termination within {guard} timesteps")
        self.guard = guard
        self.telemetry = telemetry


class InternalStall(SchedulingError):
    def __init__(self, telemetry: ScheduleTelemetry) -> None:
        super().__init__("tie-break produced no movement while labels remain")
        self.telemetry = telemetry


def _row_support(parity: np.ndarray, i: int) -> set[int]:
    return {int(j) + 1 for j in np.nonzero(parity[i - 1])[0]}


def _approach_vertices(
    graph: ConnectivityGraph,
    placement: Placement,
    used: set[int],
    q_from: int,
    q_to: int,
) -> list[int]:
    """Vertices adjacent to q_from whose unused occupant sits strictly
    closer to q_to, in ascending vertex order."""
    v_from = placement.vertex_of(q_from)
    v_to = placement.vertex_of(q_to)
    base = graph.distance(v_from, v_to)
    out = []
    for v in graph.neighbors(v_from):
        if placement.occupant(v) in used:
            continue
        if graph.distance(v, v_to) < base:
            out.append(v)
    return out


def get_candidate(
    i: int,
    parity: np.ndarray,
    placement: Placement,
    pending: list[GeneratorLabel],
    graph: ConnectivityGraph,
    used: set[int],
) -> int | None:
    """Smallest-index data qubit ancilla i can absorb right now.

    The qubit must be unused this step, adjacent to the ancilla, not
    already in the row, and some pending label must contain the row plus
    the qubit.
    """
    row = _row_support(parity, i)
    best: int | None = None
    for v in graph.neighbors(placement.vertex_of(-i)):
        occ = placement.occupant(v)
        if occ <= 0 or occ in used or occ in row:
            continue
        grown = row | {occ}
        if any(grown <= l.support for l in pending):
            if best is None or occ < best:
                best = occ
    return best


def get_target(
    i: int,
    parity: np.ndarray,
    placement: Placement,
    pending: list[GeneratorLabel],
    graph: ConnectivityGraph,
    used: set[int],
) -> tuple[int, int] | None:
    """Walk decision for ancilla i: (neighbor ref to swap with, data target).

    Picks the largest pending label strictly containing the row (first in
    pending order on ties), targets its first still-missing qubit, and
    steps onto the lowest-index adjacent vertex that gets strictly closer.
    """
    row = _row_support(parity, i)
    best_label: GeneratorLabel | None = None
    for l in pending:
        if row < l.support and (best_label is None or l.weight > best_label.weight):
            best_label = l
    if best_label is None:
        return None
    target = next(q for q in best_label.qubits if q not in row)
    options = _approach_vertices(graph, placement, used, -i, target)
    if not options:
        return None
    return placement.occupant(options[0]), target


def decide_actions(
    parity: np.ndarray,
    placement: Placement,
    pending: list[GeneratorLabel],
    graph: ConnectivityGraph,
) -> tuple[Timestep, list[int | None]]:
    """One greedy pass over ancillas in index order. Mutates parity,
    placement and pending in place; returns the step and per-ancilla cases
    (None for ancillas already used by an earlier action this step)."""
    m = parity.shape[0]
    used: set[int] = set()
    actions: list = []
    cases: list[int | None] = [None] * m
    may_pin_target = True
    for i in range(1, m + 1):
        if -i in used:
            continue
        row_nonempty = bool(parity[i - 1].any())
        cand = get_candidate(i, parity, placement, pending, graph, used)
        if cand is not None:
            cases[i - 1] = 1 if row_nonempty else 3
            if parity[i - 1, cand - 1]:
                raise AssertionError(f"ancilla {i} would re-accumulate qubit {cand}")
            actions.append(CnotCouple(i, cand))
            used.update((-i, cand))
            parity[i - 1, cand - 1] = 1
            grown = _row_support(parity, i)
            done = next((l for l in pending if l.support == grown), None)
            if done is not None:
                actions.append(MeasureReset(i, done))
                pending.remove(done)
                parity[i - 1, :] = 0
        elif row_nonempty:
            cases[i - 1] = 2
            found = get_target(i, parity, placement, pending, graph, used)
            if found is not None:
                partner, target = found
                actions.append(Swap(-i, partner))
                placement.swap(-i, partner)
                used.update((-i, partner))
                # Reserve the walk target once per step so later ancillas
                # do not absorb or displace it.
                if may_pin_target:
                    used.add(target)
                    may_pin_target = False
        else:
            cases[i - 1] = 4
    return Timestep(tuple(actions)), cases


def tie_break(
    parity: np.ndarray,
    placement: Placement,
    pending: list[GeneratorLabel],
    graph: ConnectivityGraph,
) -> Timestep:
    """Move empty-row ancillas toward pending labels when nobody acted.

    For each pending label, the closest (data, ancilla) pair is found over
    empty-row ancillas, ties broken by data then ancilla index. Labels are
    served in ascending distance (stable). Each served pair gets up to two
    SWAPs: ancilla toward data, then data toward the ancilla's new spot.
    """
    m = parity.shape[0]
    fresh = [i for i in range(1, m + 1) if not parity[i - 1].any()]
    actions: list = []
    used: set[int] = set()
    if not fresh:
        return Timestep(())
    entries = []
    for l in pending:
        best: tuple[int, int, int] | None = None
        for q in l.qubits:
            vq = placement.vertex_of(q)
            for i in fresh:
                key = (graph.distance(vq, placement.vertex_of(-i)), q, i)
                if best is None or key < best:
                    best = key
        entries.append(best)
    entries.sort(key=lambda e: e[0])
    for _, q, i in entries:
        if -i not in used:
            options = _approach_vertices(graph, placement, used, -i, q)
            if options:
                partner = placement.occupant(options[0])
                actions.append(Swap(-i, partner))
                placement.swap(-i, partner)
                used.update((-i, partner))
        if q not in used:
            options = _approach_vertices(graph, placement, used, q, -i)
            if options:
                partner = placement.occupant(options[0])
                actions.append(Swap(q, partner))
                placement.swap(q, partner)
                used.update((q, partner))
    return Timestep(tuple(actions))


def schedule(
    graph: ConnectivityGraph,
    placement: Placement,
    labels: list[GeneratorLabel],
    guard: int | None = None,
    basis: PauliType = PauliType.Z,
) -> tuple[ScheduledCircuit, Placement]:
    """Schedule measurement of every label, then strip unnecessary gates.

    Labels must share one basis. The guard bounds timesteps (default
    64*(n+m)*len(labels)); exceeding it raises GuardExceeded, and a
    tie-break round that cannot move anything raises InternalStall.
    """
    labels = list(labels)
    n, m = placement.n, placement.m
    if labels:
        bases = {l.pauli for l in labels}
        if len(bases) != 1:
            raise ValueError("labels must share a single basis")
        basis = labels[0].pauli
        for l in labels:
            if l.qubits[-1] > n:
                raise ValueError(f"label {l.qubits} exceeds n={n}")
    if graph.vertex_count != n + m:
        raise ValueError("placement does not fill the graph")
    if guard is None:
        guard = 64 * (n + m) * max(len(labels), 1)
    if guard < 1:
        raise ValueError("guard must be positive")

    start = placement.copy()
    work = placement.copy()
    parity = np.zeros((m, n), dtype=np.uint8)
    pending = list(labels)
    telemetry = ScheduleTelemetry()
    steps: list[Timestep] = []
    while pending:
        if len(steps) >= guard:
            raise GuardExceeded(guard, telemetry)
        ts, cases = decide_actions(parity, work, pending, graph)
        tie_broken = not ts.actions
        if tie_broken:
            ts = tie_break(parity, work, pending, graph)
            if not ts.actions:
                raise InternalStall(telemetry)
        sit = situation_of(cases, tie_broken=tie_broken)
        steps.append(ts)
        telemetry.steps.append(
            StepRecord(
                situation=sit.tag,
                cases=tuple(cases),
                measured=len(ts.measurements()),
                labels_left=len(pending),
            )
        )
    raw = ScheduledCircuit(
        basis=basis,
        n=n,
        m=m,
        timesteps=tuple(steps),
        start_placement=start,
        end_placement=work.copy(),
        telemetry=telemetry,
    )
    return remove_unnecessary_gates(raw, parity), work.copy()


def remove_unnecessary_gates(
    circuit: ScheduledCircuit, final_parity: np.ndarray
) -> ScheduledCircuit:
    """Drop gates that cannot influence any committed measurement.

    First, for each ancilla, the CNOTs still visible in its final parity
    row are deleted scanning from the end (each such bit comes from exactly
    one accumulation after the ancilla's last measurement). Second, SWAP
    pairs on the same qubit pair that are adjacent in both qubits' action
    streams cancel, repeatedly. Empty timesteps are dropped.
    """
    steps: list[list] = [list(ts.actions) for ts in circuit.timesteps]
    mm = final_parity.shape[0] if final_parity.size else circuit.m
    for i in range(1, mm + 1):
        need = {int(j) + 1 for j in np.nonzero(final_parity[i - 1])[0]} if final_parity.size else set()
        if not need:
            continue
        for t in range(len(steps) - 1, -1, -1):
            kept = []
            for a in steps[t]:
                if (
                    need
                    and isinstance(a, CnotCouple)
                    and a.ancilla == i
                    and a.data in need
                ):
                    need.discard(a.data)
                else:
                    kept.append(a)
            steps[t] = kept
            if not need:
                break
        if need:
            raise AssertionError(f"unmatched parity bits {need} for ancilla {i}")

    while True:
        streams: dict[int, list[tuple[int, object]]] = {}
        for t, acts in enumerate(steps):
            for a in acts:
                if isinstance(a, (CnotCouple, Swap, MeasureReset)):
                    for r in a.refs():
                        streams.setdefault(r, []).append((t, a))
        doomed: set[int] = set()
        for t, acts in enumerate(steps):
            for a in acts:
                if not isinstance(a, Swap) or id(a) in doomed:
                    continue
                nexts = []
                for r in a.refs():
                    stream = streams[r]
                    k = next(idx for idx, (_, obj) in enumerate(stream) if obj is a)
                    nexts.append(stream[k + 1][1] if k + 1 < len(stream) else None)
                follow = nexts[0]
                if (
                    follow is not None
                    and follow is nexts[1]
                    and isinstance(follow, Swap)
                    and set(follow.refs()) == set(a.refs())
                    and id(follow) not in doomed
                ):
                    doomed.update((id(a), id(follow)))
        if not doomed:
            break
        steps = [[a for a in acts if id(a) not in doomed] for acts in steps]

    kept_steps = tuple(Timestep(tuple(acts)) for acts in steps if acts)
    return ScheduledCircuit(
        basis=circuit.basis,
        n=circuit.n,
        m=circuit.m,
        timesteps=kept_steps,
        start_placement=circuit.start_placement,
        end_placement=circuit.end_placement,
        telemetry=circuit.telemetry,
    )


def replay(
    circuit: ScheduledCircuit, graph: ConnectivityGraph | None = None
) -> np.ndarray:
    """Re-run a circuit's actions structurally and return the final parity.

    Checks adjacency (when a graph is given), the accumulation rules, and
    that every MeasureReset fires with the row exactly matching its label.
    """
    placement = circuit.start_placement.copy()
    parity = np.zeros((circuit.m, circuit.n), dtype=np.uint8)
    for t, ts in enumerate(circuit.timesteps):
        for a in ts.two_qubit_actions():
            r1, r2 = a.refs()
            if graph is not None:
                v1, v2 = placement.vertex_of(r1), placement.vertex_of(r2)
                if not graph.adjacent(v1, v2):
                    raise AssertionError(f"step {t}: {a} acts on non-adjacent vertices")
            if isinstance(a, CnotCouple):
                if parity[a.ancilla - 1, a.data - 1]:
                    raise AssertionError(f"step {t}: {a} re-accumulates")
                parity[a.ancilla - 1, a.data - 1] = 1
            else:
                placement.swap(r1, r2)
        for mr in ts.measurements():
            row = _row_support(parity, mr.ancilla)
            if row != set(mr.label.qubits):
                raise AssertionError(
                    f"step {t}: ancilla {mr.ancilla} measures {sorted(row)} "
                    f"but commits {mr.label.qubits}"
                )
            parity[mr.ancilla - 1, :] = 0
    if placement != circuit.end_placement:
        raise AssertionError("end placement does not match replay")
    return parity
