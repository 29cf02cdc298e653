"""Logical-error-rate estimation over emitted circuit files.

Circuit files are the only interface to the upstream scheduler: metadata
(n, m, rounds, noise rates) is recovered from the emitted header comments
and, for d/m, from the conventional `*_d<d>_m<m>.stim` file name. Shots
are sampled with stim's detector sampler and decoded with PyMatching's
minimum-weight perfect matching on the circuit's detector error model.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pymatching
import stim

_HEADER_RE = re.compile(r"#\s*rounds=(\d+)\s+n=(\d+)\s+m=(\d+)")
_NOISE_RE = re.compile(
    r"#\s*noise\s+p_cnot=(\S+)\s+p_swap=(\S+)\s+p_idle=(\S+)"
)
_NAME_RE = re.compile(r"d(\d+)_m(\d+)")

CSV_HEADER = "path,d,m,p_cnot,p_swap,p_idle,shots,seed,failures,rate,stderr"


@dataclass(frozen=True)
class CircuitMetadata:
    d: int | None = None
    m: int | None = None
    n: int | None = None
    rounds: int | None = None
    p_cnot: float | None = None
    p_swap: float | None = None
    p_idle: float | None = None


@dataclass(frozen=True)
class LerRecord:
    path: str
    d: int | None
    m: int | None
    p_cnot: float | None
    p_swap: float | None
    p_idle: float | None
    shots: int
    seed: int
    failures: int
    rate: float
    stderr: float

    def csv_row(self) -> str:
        def cell(v):
            return "" if v is None else repr(v) if isinstance(v, float) else str(v)

        return ",".join(
            [
                self.path,
                cell(self.d),
                cell(self.m),
                cell(self.p_cnot),
                cell(self.p_swap),
                cell(self.p_idle),
                str(self.shots),
                str(self.seed),
                str(self.failures),
                repr(self.rate),
                repr(self.stderr),
            ]
        )


def read_metadata(path: str | Path) -> CircuitMetadata:
    """Recover instance metadata from a circuit file's header and name."""
    text = Path(path).read_text()
    fields: dict = {}
    header = _HEADER_RE.search(text)
    if header:
        fields["rounds"] = int(header.group(1))
        fields["n"] = int(header.group(2))
        fields["m"] = int(header.group(3))
    noise = _NOISE_RE.search(text)
    if noise:
        fields["p_cnot"] = float(noise.group(1))
        fields["p_swap"] = float(noise.group(2))
        fields["p_idle"] = float(noise.group(3))
    name = _NAME_RE.search(Path(path).stem)
    if name:
        fields["d"] = int(name.group(1))
        fields.setdefault("m", int(name.group(2)))
    return CircuitMetadata(**fields)


def load_circuit(path: str | Path) -> stim.Circuit:
    """Parse a circuit file, pointing at the first offending line on failure."""
    text = Path(path).read_text()
    try:
        return stim.Circuit(text)
    except ValueError as exc:
        lines = text.splitlines()
        lo, hi = 1, len(lines)
        bad = hi
        while lo <= hi:
            mid = (lo + hi) // 2
            try:
                stim.Circuit("\n".join(lines[:mid]))
            except ValueError:
                bad = mid
                hi = mid - 1
            else:
                lo = mid + 1
        raise ValueError(f"{path}:{bad}: {exc}") from exc


def default_shots(d: int | None) -> int:
    return 100_000 if d is None or d <= 7 else 10_000


def estimate_ler(
    path: str | Path,
    shots: int,
    seed: int = 0,
    batch: int = 20_000,
    d: int | None = None,
    m: int | None = None,
) -> LerRecord:
    """Sample `shots` detection events, decode them, and count observable
    mispredictions. Identical (path, shots, seed, batch) runs reproduce the
    same failure count."""
    if shots < 1:
        raise ValueError("shots must be positive")
    circuit = load_circuit(path)
    if circuit.num_observables != 1:
        raise ValueError(f"{path}: expected exactly one observable")
    meta = read_metadata(path)

    dem = circuit.detector_error_model(decompose_errors=True)
    has_errors = any(inst.type == "error" for inst in dem.flattened())
    matcher = pymatching.Matching.from_detector_error_model(dem) if has_errors else None
    sampler = circuit.compile_detector_sampler(seed=seed)

    failures = 0
    remaining = shots
    while remaining:
        take = min(batch, remaining)
        dets, obs = sampler.sample(take, separate_observables=True)
        if matcher is None:
            predictions = np.zeros_like(obs)
        else:
            predictions = matcher.decode_batch(dets)
        failures += int((predictions[:, 0].astype(bool) != obs[:, 0]).sum())
        remaining -= take

    rate = failures / shots
    stderr = math.sqrt(rate * (1.0 - rate) / shots)
    return LerRecord(
        path=str(path),
        d=d if d is not None else meta.d,
        m=m if m is not None else meta.m,
        p_cnot=meta.p_cnot,
        p_swap=meta.p_swap,
        p_idle=meta.p_idle,
        shots=shots,
        seed=seed,
        failures=failures,
        rate=rate,
        stderr=stderr,
    )


def write_csv(records: list[LerRecord], path: str | Path, append: bool = False) -> None:
    target = Path(path)
    new_file = not (append and target.exists() and target.stat().st_size > 0)
    rows = [r.csv_row() for r in records]
    if new_file:
        target.write_text("\n".join([CSV_HEADER] + rows) + "\n")
    else:
        with target.open("a") as fh:
            fh.write("\n".join(rows) + "\n")


def read_csv(path: str | Path) -> list[dict]:
    """LER rows as dicts with numeric fields coerced; blank cells become None."""
    import csv

    out = []
    with Path(path).open() as fh:
        for row in csv.DictReader(fh):
            parsed: dict = {"path": row["path"]}
            for key in ("d", "m", "shots", "seed", "failures"):
                parsed[key] = int(row[key]) if row.get(key) else None
            for key in ("p_cnot", "p_swap", "p_idle", "rate", "stderr"):
                parsed[key] = float(row[key]) if row.get(key) else None
            out.append(parsed)
    return out
