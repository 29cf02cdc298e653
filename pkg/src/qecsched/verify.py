"""Independent checks of scheduled circuits.

Two routes that share no code with the scheduler:

* GF(2) frame tracking follows, per ancilla, which initial data values
  XOR into its next measurement. Frames ride on qubit labels, so SWAPs
  are no-ops; a measurement whose frame is not exactly its label's
  support is a scheduling defect.
* A stabilizer tableau simulation checks the quantum side: measurement
  determinism where theory demands it, ancillas disentangled at the end,
  and the code's generators still stabilizing the data.

The module also carries a noiseless sampler for emitted circuit text, so
emission can be validated end to end without external tooling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import CssCode, GeneratorLabel, PauliType
from .scheduler import CnotCouple, MeasureReset, ScheduledCircuit, Swap


class FrameMismatch(Exception):
    def __init__(self, ancilla: int, step: int, frame: set[int], label: GeneratorLabel):
        super().__init__(
            f"ancilla {ancilla} at step {step} holds frame {sorted(frame)} "
            f"but measures label {label.qubits}"
        )
        self.ancilla = ancilla
        self.step = step
        self.frame = frame
        self.label = label


def gf2_parity_check(
    circuit: ScheduledCircuit, bits: list[int]
) -> list[tuple[GeneratorLabel, int]]:
    """Propagate input bits through the run and return (label, outcome) pairs.

    For Z-basis runs `bits` are the data qubits' Z values; for X-basis runs
    their X values. In both bases the ancilla accumulates the data qubit's
    frame at each coupling. Raises FrameMismatch when a measurement fires
    with the wrong frame.
    """
    if len(bits) != circuit.n:
        raise ValueError("need one input bit per data qubit")
    frames: dict[int, set[int]] = {-i: set() for i in range(1, circuit.m + 1)}
    outcomes: list[tuple[GeneratorLabel, int]] = []
    for t, ts in enumerate(circuit.timesteps):
        for a in ts.actions:
            if isinstance(a, CnotCouple):
                frames[-a.ancilla] ^= {a.data}
            elif isinstance(a, MeasureReset):
                frame = frames[-a.ancilla]
                if frame != a.label.support:
                    raise FrameMismatch(a.ancilla, t, frame, a.label)
                value = 0
                for q in frame:
                    value ^= bits[q - 1] & 1
                outcomes.append((a.label, value))
                frames[-a.ancilla] = set()
    return outcomes


class TableauSim:
    """Stabilizer-state simulator on dense numpy bit matrices.

    Rows 0..n-1 are destabilizers, n..2n-1 stabilizers, plus one scratch
    row. Measurement reports whether the outcome was forced; peeks never
    collapse the state.
    """

    def __init__(self, num_qubits: int, rng: np.random.Generator | None = None):
        n = num_qubits
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.r = np.zeros(2 * n + 1, dtype=np.uint8)
        for k in range(n):
            self.x[k, k] = 1
            self.z[n + k, k] = 1
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def _rowsum(self, h: int, i: int) -> None:
        x1 = self.x[i].astype(np.int16)
        z1 = self.z[i].astype(np.int16)
        x2 = self.x[h].astype(np.int16)
        z2 = self.z[h].astype(np.int16)
        g = (
            (x1 & z1) * (z2 - x2)
            + (x1 & (1 - z1)) * (z2 * (2 * x2 - 1))
            + ((1 - x1) & z1) * (x2 * (1 - 2 * z2))
        )
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(g.sum())
        # Destabilizer rows may pick up an imaginary phase (their partner
        # anticommutes); their phase bit is never read, so only stabilizer
        # and scratch rows must stay real.
        if total % 2 and h >= self.n:
            raise AssertionError("rowsum produced an imaginary phase")
        self.r[h] = (total % 4) // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def h(self, q: int) -> None:
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def s(self, q: int) -> None:
        self.r ^= self.x[:, q] & self.z[:, q]
        self.z[:, q] ^= self.x[:, q]

    def cx(self, c: int, t: int) -> None:
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def swap(self, a: int, b: int) -> None:
        self.x[:, [a, b]] = self.x[:, [b, a]]
        self.z[:, [a, b]] = self.z[:, [b, a]]

    def x_gate(self, q: int) -> None:
        self.r ^= self.z[:, q]

    def z_gate(self, q: int) -> None:
        self.r ^= self.x[:, q]

    def measure_z(self, q: int, force: int | None = None) -> tuple[int, bool]:
        n = self.n
        stab_hits = np.nonzero(self.x[n : 2 * n, q])[0]
        if stab_hits.size:
            p = n + int(stab_hits[0])
            for row in np.nonzero(self.x[: 2 * n, q])[0]:
                if row != p:
                    self._rowsum(int(row), p)
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            outcome = int(force) if force is not None else int(self.rng.integers(2))
            self.r[p] = outcome
            return outcome, False
        scratch = 2 * n
        self.x[scratch] = 0
        self.z[scratch] = 0
        self.r[scratch] = 0
        for k in np.nonzero(self.x[:n, q])[0]:
            self._rowsum(scratch, n + int(k))
        return int(self.r[scratch]), True

    def measure_x(self, q: int, force: int | None = None) -> tuple[int, bool]:
        self.h(q)
        out = self.measure_z(q, force=force)
        self.h(q)
        return out

    def reset_z(self, q: int) -> None:
        bit, _ = self.measure_z(q)
        if bit:
            self.x_gate(q)

    def reset_x(self, q: int) -> None:
        bit, _ = self.measure_x(q)
        if bit:
            self.z_gate(q)

    def peek_pauli(
        self, x_support: list[int], z_support: list[int]
    ) -> tuple[int | None, bool]:
        """Outcome of measuring a +1-phase Pauli product, without collapse.

        Returns (bit, True) when the outcome is forced, (None, False) when
        it would be random.
        """
        n = self.n
        qx = np.zeros(n, dtype=np.uint8)
        qz = np.zeros(n, dtype=np.uint8)
        qx[list(x_support)] = 1
        qz[list(z_support)] = 1
        anti_stab = ((self.x[n : 2 * n] @ qz) + (self.z[n : 2 * n] @ qx)) % 2
        if anti_stab.any():
            return None, False
        scratch = 2 * n
        self.x[scratch] = 0
        self.z[scratch] = 0
        self.r[scratch] = 0
        anti_destab = ((self.x[:n] @ qz) + (self.z[:n] @ qx)) % 2
        for k in np.nonzero(anti_destab)[0]:
            self._rowsum(scratch, n + int(k))
        if not (np.array_equal(self.x[scratch], qx) and np.array_equal(self.z[scratch], qz)):
            raise AssertionError("pauli does not lie in the stabilizer span")
        return int(self.r[scratch]), True


@dataclass
class TableauReport:
    ok: bool
    failures: list[str] = field(default_factory=list)
    outcomes: list[tuple[GeneratorLabel, int, bool]] = field(default_factory=list)


def _segments_of(target) -> tuple[list[ScheduledCircuit], CssCode | None, int, int]:
    from .circuit import MemoryExperiment  # local to avoid an import cycle

    if isinstance(target, ScheduledCircuit):
        return [target], None, target.n, target.m
    if isinstance(target, MemoryExperiment):
        segs = list(target.round.segments) * target.rounds
        return segs, target.code, target.code.n, target.placement.m
    raise TypeError(f"cannot verify {type(target).__name__}")


def tableau_verify(target, code: CssCode | None = None) -> TableauReport:
    """Simulate a run or memory experiment on label wires from the all-zeros
    data state and check measurement behaviour.

    Z-basis measurements must be forced to 0. X-basis measurements may be
    random the first time a label is measured, then must repeat their
    previous value deterministically. At the end every ancilla must sit
    disentangled in its prepared basis and the code's Z generators (plus
    any X generator that was measured) must still stabilize the data.
    """
    segments, exp_code, n, m = _segments_of(target)
    if code is None:
        code = exp_code
    report = TableauReport(ok=True)

    sim = TableauSim(n + m)
    prepared = {i: PauliType.Z for i in range(1, m + 1)}
    last_seen: dict[GeneratorLabel, int] = {}

    def wire(ref: int) -> int:
        return ref - 1 if ref > 0 else n - ref - 1

    for seg_idx, seg in enumerate(segments):
        coupled = {
            a.ancilla
            for ts in seg.timesteps
            for a in ts.actions
            if isinstance(a, CnotCouple)
        }
        for i in sorted(coupled):
            if prepared[i] is not seg.basis:
                if seg.basis is PauliType.X:
                    sim.reset_x(wire(-i))
                else:
                    sim.reset_z(wire(-i))
                prepared[i] = seg.basis
        for ts in seg.timesteps:
            for a in ts.actions:
                if isinstance(a, CnotCouple):
                    if seg.basis is PauliType.Z:
                        sim.cx(wire(a.data), wire(-a.ancilla))
                    else:
                        sim.cx(wire(-a.ancilla), wire(a.data))
                elif isinstance(a, Swap):
                    pass  # labels do not move
                elif isinstance(a, MeasureReset):
                    w = wire(-a.ancilla)
                    if seg.basis is PauliType.Z:
                        bit, forced = sim.measure_z(w)
                        if bit:
                            sim.x_gate(w)
                        if not forced or bit != 0:
                            report.failures.append(
                                f"segment {seg_idx}: Z measurement of {a.label.qubits} "
                                f"was {'random' if not forced else bit}"
                            )
                    else:
                        bit, forced = sim.measure_x(w)
                        if bit:
                            sim.z_gate(w)
                        prev = last_seen.get(a.label)
                        if prev is not None and (not forced or bit != prev):
                            report.failures.append(
                                f"segment {seg_idx}: repeated X measurement of "
                                f"{a.label.qubits} did not reproduce {prev}"
                            )
                    last_seen[a.label] = bit
                    report.outcomes.append((a.label, bit, forced))

    for i in range(1, m + 1):
        w = wire(-i)
        if prepared[i] is PauliType.Z:
            value, forced = sim.peek_pauli([], [w])
        else:
            value, forced = sim.peek_pauli([w], [])
        if not forced or value != 0:
            report.failures.append(
                f"ancilla {i} not disentangled in its {prepared[i].value} basis"
            )

    if code is not None:
        for g in code.generators:
            wires = [wire(q) for q in g.qubits]
            if g.pauli is PauliType.Z:
                value, forced = sim.peek_pauli([], wires)
                if not forced or value != 0:
                    report.failures.append(f"Z generator {g.qubits} no longer forced to 0")
            elif g in last_seen:
                value, forced = sim.peek_pauli(wires, [])
                if not forced or value != last_seen[g]:
                    report.failures.append(
                        f"X generator {g.qubits} no longer matches its last outcome"
                    )
    report.ok = not report.failures
    return report


_MEASURE_OPS = {"M", "MX", "MR"}
_RESET_OPS = {"R", "RX"}


def _parse_emitted(text: str):
    ops: list[tuple[str, list[int]]] = []
    detectors: list[list[int]] = []
    observable: list[int] = []
    record_count = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *targets = line.split()
        name, _, arg = head.partition("(")
        arg = arg.rstrip(")")
        if name in ("DEPOLARIZE1", "DEPOLARIZE2"):
            if float(arg) != 0.0:
                raise ValueError("sampler handles noiseless circuits only")
            continue
        if name == "DETECTOR":
            detectors.append([record_count + int(t[4:-1]) for t in targets])
            continue
        if name == "OBSERVABLE_INCLUDE":
            if int(arg) != 0:
                raise ValueError("only observable 0 is supported")
            observable.extend(record_count + int(t[4:-1]) for t in targets)
            continue
        if name in ("CX", "SWAP"):
            vals = [int(t) for t in targets]
            if len(vals) % 2:
                raise ValueError(f"{name} needs target pairs")
            for k in range(0, len(vals), 2):
                ops.append((name, vals[k : k + 2]))
            continue
        if name in _MEASURE_OPS | _RESET_OPS:
            vals = [int(t) for t in targets]
            for v in vals:
                ops.append((name, [v]))
                if name in _MEASURE_OPS:
                    record_count += 1
            continue
        raise ValueError(f"unsupported instruction {name!r}")
    for refs in detectors:
        if any(r < 0 or r >= record_count for r in refs):
            raise ValueError("detector references a record out of range")
    if any(r < 0 or r >= record_count for r in observable):
        raise ValueError("observable references a record out of range")
    num_qubits = 1 + max(
        (t for _, targets in ops for t in targets), default=0
    )
    return ops, detectors, observable, record_count, num_qubits


def sample_emitted_text(
    text: str, shots: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Sample detector and observable values of emitted noiseless text.

    Returns (detectors, observables) as uint8 arrays of shape
    (shots, num_detectors) and (shots,).
    """
    ops, detectors, observable, record_count, num_qubits = _parse_emitted(text)
    det_out = np.zeros((shots, len(detectors)), dtype=np.uint8)
    obs_out = np.zeros(shots, dtype=np.uint8)
    seeds = np.random.SeedSequence(seed).spawn(shots)
    for s in range(shots):
        sim = TableauSim(num_qubits, rng=np.random.default_rng(seeds[s]))
        records = np.zeros(record_count, dtype=np.uint8)
        cursor = 0
        for name, targets in ops:
            if name == "CX":
                sim.cx(targets[0], targets[1])
            elif name == "SWAP":
                sim.swap(targets[0], targets[1])
            elif name == "R":
                sim.reset_z(targets[0])
            elif name == "RX":
                sim.reset_x(targets[0])
            elif name == "M":
                records[cursor], _ = sim.measure_z(targets[0])
                cursor += 1
            elif name == "MX":
                records[cursor], _ = sim.measure_x(targets[0])
                cursor += 1
            elif name == "MR":
                bit, _ = sim.measure_z(targets[0])
                if bit:
                    sim.x_gate(targets[0])
                records[cursor] = bit
                cursor += 1
        for d, refs in enumerate(detectors):
            value = 0
            for ref in refs:
                value ^= int(records[ref])
            det_out[s, d] = value
        value = 0
        for ref in observable:
            value ^= int(records[ref])
        obs_out[s] = value
    return det_out, obs_out
