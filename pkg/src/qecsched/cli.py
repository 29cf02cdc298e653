"""Command line front end.

Exit codes: 0 success, 2 usage or input errors, 3 verification failure,
4 scheduling guard exceeded.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from pathlib import Path

import numpy as np

from .circuit import build_memory_experiment, default_rounds, metrics
from .codes import CssCode, PauliType, repetition_code, rotated_surface_code, validate_css
from .emit import NoiseParams, emit_noisy_circuit
from .layout import layout_from_json, layout_to_json, line_layout, surround_layout
from .scheduler import GuardExceeded, InternalStall, ScheduledCircuit, schedule
from .verify import FrameMismatch, gf2_parity_check, tableau_verify

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_GUARD = 4

TABLEAU_LIMIT = 64
EXHAUSTIVE_LIMIT = 10


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text)


def _build_code(family: str, distance: int) -> CssCode:
    if family == "repetition":
        return repetition_code(distance)
    if family == "surface":
        return rotated_surface_code(distance)
    raise ValueError(f"unknown code family {family!r}")


def _build_layout(family: str, distance: int, m: int):
    if family == "repetition":
        return line_layout(distance, m)
    return surround_layout(distance, m)


def _verify_circuit(
    circuit: ScheduledCircuit, code: CssCode | None, inputs: int, seed: int
) -> list[str]:
    """Frame-check the run over a bank of inputs, then tableau-check it.
    Returns failure strings (empty on success)."""
    failures: list[str] = []
    n = circuit.n
    if n <= EXHAUSTIVE_LIMIT:
        bank = [[(k >> j) & 1 for j in range(n)] for k in range(2**n)]
    else:
        rng = np.random.default_rng(seed)
        bank = [list(map(int, rng.integers(0, 2, n))) for _ in range(inputs)]
    try:
        for bits in bank:
            for label, outcome in gf2_parity_check(circuit, bits):
                expected = 0
                for q in label.qubits:
                    expected ^= bits[q - 1]
                if outcome != expected:
                    failures.append(f"wrong parity for label {label.qubits}")
    except FrameMismatch as exc:
        failures.append(str(exc))
    if circuit.n + circuit.m <= TABLEAU_LIMIT:
        report = tableau_verify(circuit, code)
        failures.extend(report.failures)
    return failures


def _cmd_gen_code(args: argparse.Namespace) -> int:
    code = _build_code(args.family, args.distance)
    _write(args.out, code.to_json())
    return EXIT_OK


def _cmd_gen_layout(args: argparse.Namespace) -> int:
    if args.family == "line":
        if args.n is None:
            raise ValueError("line layout needs --n")
        graph, placement = line_layout(args.n, args.m)
    elif args.family == "surround":
        if args.distance is None:
            raise ValueError("surround layout needs --distance")
        graph, placement = surround_layout(args.distance, args.m)
    else:
        raise ValueError(f"unknown layout family {args.family!r}")
    _write(args.out, layout_to_json(graph, placement))
    return EXIT_OK


def _cmd_schedule(args: argparse.Namespace) -> int:
    code = CssCode.from_json(Path(args.code).read_text())
    report = validate_css(code)
    if not report.ok:
        raise ValueError(f"invalid code: {report.violation} ({report.detail})")
    graph, placement = layout_from_json(Path(args.layout).read_text(), code.n)
    basis = PauliType(args.basis)
    labels = list(code.z_generators if basis is PauliType.Z else code.x_generators)
    try:
        circuit, _ = schedule(graph, placement, labels, guard=args.guard, basis=basis)
    except (GuardExceeded, InternalStall) as exc:
        print(f"scheduling failed: {exc}", file=sys.stderr)
        return EXIT_GUARD
    _write(args.out, circuit.to_json())
    if args.telemetry and circuit.telemetry is not None:
        _write(args.telemetry, circuit.telemetry.to_json())
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    circuit = ScheduledCircuit.from_json(Path(args.circuit).read_text())
    code = CssCode.from_json(Path(args.code).read_text()) if args.code else None
    failures = _verify_circuit(circuit, code, args.inputs, args.seed)
    if failures:
        for f in failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"ok: {len(circuit.timesteps)} timesteps, basis {circuit.basis.value}")
    return EXIT_OK


def _cmd_metrics(args: argparse.Namespace) -> int:
    circuit = ScheduledCircuit.from_json(Path(args.circuit).read_text())
    got = metrics(circuit)
    _write(
        args.out,
        json.dumps(
            {
                "depth": got.depth,
                "volume": got.volume,
                "ancilla_volume": got.ancilla_volume,
            },
            indent=2,
        ),
    )
    return EXIT_OK


def _resolve_rounds(text: str, distance: int) -> int:
    if text == "auto":
        return default_rounds(distance)
    return int(text)


def _cmd_emit(args: argparse.Namespace) -> int:
    code = _build_code(args.family, args.distance)
    graph, placement = _build_layout(args.family, args.distance, args.m)
    rounds = _resolve_rounds(args.rounds, args.distance)
    try:
        experiment = build_memory_experiment(code, graph, placement, rounds, guard=args.guard)
    except (GuardExceeded, InternalStall) as exc:
        print(f"scheduling failed: {exc}", file=sys.stderr)
        return EXIT_GUARD
    noise = NoiseParams(p_cnot=args.p_cnot, p_swap=args.p_swap, p_idle=args.p_idle)
    _write(args.out, emit_noisy_circuit(experiment, noise))
    return EXIT_OK


def _load_config(path: str) -> dict:
    """Parse a flat key = value config. Values use JSON syntax (numbers,
    strings, booleans, arrays); full TOML is deliberately out of scope."""
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{lineno}: bad value {value!r}") from exc
    return out


def _sweep_points(family: str, distances: list[int], m_list: list[int] | None, m_rule: str | None):
    points = []
    for d in distances:
        if m_list:
            ms = list(m_list)
        elif m_rule and m_rule.startswith("budget:"):
            budget = int(m_rule.split(":", 1)[1])
            cap = 4 * d if family == "surface" else 3
            n = d * d if family == "surface" else d
            m = min(budget - n, cap)
            if m < 1:
                continue
            ms = [m]
        else:
            raise ValueError("sweep needs m_list or m_rule")
        points.extend((d, m) for m in ms)
    return points


def _sweep_worker(task: dict) -> dict:
    family = task["family"]
    d, m = task["d"], task["m"]
    code = _build_code(family, d)
    graph, placement = _build_layout(family, d, m)
    row: dict = {"d": d, "m": m}
    try:
        s_z, _ = schedule(graph, placement, list(code.z_generators), guard=task["guard"])
        failures = _verify_circuit(s_z, code, task["inputs"], task["seed"])
        if code.x_generators:
            s_x, _ = schedule(
                graph, placement, list(code.x_generators),
                guard=task["guard"], basis=PauliType.X,
            )
            failures += _verify_circuit(s_x, code, task["inputs"], task["seed"])
    except (GuardExceeded, InternalStall) as exc:
        row.update(error=f"guard: {exc}")
        return row
    got = metrics(s_z)
    row.update(
        depth=got.depth,
        volume=got.volume,
        ancilla_volume=got.ancilla_volume,
        verify_pass=not failures,
        failures=failures,
        circuit_path="",
    )
    if task["emit_dir"] and not failures:
        rounds = _resolve_rounds(task["rounds"], d)
        experiment = build_memory_experiment(
            code, graph, placement, rounds, guard=task["guard"]
        )
        noise = NoiseParams(*task["noise"])
        path = Path(task["emit_dir"]) / f"{family}_d{d}_m{m}.stim"
        path.write_text(emit_noisy_circuit(experiment, noise))
        row["circuit_path"] = str(path)
    return row


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config) if args.config else {}

    def pick(flag, key, fallback):
        return flag if flag is not None else cfg.get(key, fallback)

    family = pick(args.family, "family", "surface")
    distances = pick(
        [int(x) for x in args.distances.split(",")] if args.distances else None,
        "distances",
        None,
    )
    if not distances:
        raise ValueError("sweep needs distances")
    m_list = pick(
        [int(x) for x in args.m_list.split(",")] if args.m_list else None,
        "m_list",
        None,
    )
    m_rule = pick(args.m_rule, "m_rule", None)
    out_csv = pick(args.out_csv, "out_csv", None)
    if not out_csv:
        raise ValueError("sweep needs --out-csv")
    emit_dir = pick(args.emit_dir, "emit_dir", None)
    if emit_dir:
        Path(emit_dir).mkdir(parents=True, exist_ok=True)
    noise = (
        float(pick(args.p_cnot, "p_cnot", 0.0)),
        float(pick(args.p_swap, "p_swap", 0.0)),
        float(pick(args.p_idle, "p_idle", 0.0)),
    )
    rounds = str(pick(args.rounds, "rounds", "auto"))
    guard = pick(args.guard, "guard", None)

    env_cap = os.environ.get("QEC_SCHED_THREADS")
    workers = pick(args.workers, "workers", None)
    if workers is None:
        workers = int(env_cap) if env_cap else 1
    elif env_cap:
        workers = min(int(workers), int(env_cap))
    workers = max(1, int(workers))

    tasks = [
        {
            "family": family,
            "d": d,
            "m": m,
            "guard": guard,
            "inputs": args.inputs,
            "seed": args.seed,
            "emit_dir": emit_dir,
            "rounds": rounds,
            "noise": noise,
        }
        for d, m in _sweep_points(family, distances, m_list, m_rule)
    ]
    if workers == 1 or len(tasks) <= 1:
        rows = [_sweep_worker(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_worker, tasks))
    rows.sort(key=lambda r: (r["d"], r["m"]))

    bad = [r for r in rows if r.get("error") or not r.get("verify_pass", False)]
    header = "d,m,depth,volume,ancilla_volume,verify_pass,circuit_path"
    body = [
        f"{r['d']},{r['m']},{r.get('depth','')},{r.get('volume','')},"
        f"{r.get('ancilla_volume','')},{str(r.get('verify_pass', False)).lower()},"
        f"{r.get('circuit_path','')}"
        for r in rows
    ]
    _write(out_csv, "\n".join([header] + body))
    if bad:
        repro = Path(out_csv).with_suffix(".failed.json")
        repro.write_text(json.dumps(bad, indent=2, default=str))
        first = bad[0]
        print(
            f"verification failed for d={first['d']} m={first['m']}; see {repro}",
            file=sys.stderr,
        )
        return EXIT_GUARD if first.get("error", "").startswith("guard") else EXIT_VERIFY
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qecsched")
    sub = p.add_subparsers(dest="command", required=True)

    gc = sub.add_parser("gen-code", help="write a code description as JSON")
    gc.add_argument("--family", required=True, choices=["repetition", "surface"])
    gc.add_argument("--distance", required=True, type=int)
    gc.add_argument("-o", "--out", default=None)
    gc.set_defaults(func=_cmd_gen_code)

    gl = sub.add_parser("gen-layout", help="write a layout as JSON")
    gl.add_argument("--family", required=True, choices=["line", "surround"])
    gl.add_argument("--n", type=int, default=None)
    gl.add_argument("--distance", type=int, default=None)
    gl.add_argument("--m", required=True, type=int)
    gl.add_argument("-o", "--out", default=None)
    gl.set_defaults(func=_cmd_gen_layout)

    sc = sub.add_parser("schedule", help="schedule one basis run")
    sc.add_argument("--code", required=True)
    sc.add_argument("--layout", required=True)
    sc.add_argument("--basis", default="Z", choices=["Z", "X"])
    sc.add_argument("--guard", type=int, default=None)
    sc.add_argument("-o", "--out", default=None)
    sc.add_argument("--telemetry", default=None)
    sc.set_defaults(func=_cmd_schedule)

    ve = sub.add_parser("verify", help="check a scheduled circuit")
    ve.add_argument("--circuit", required=True)
    ve.add_argument("--code", default=None)
    ve.add_argument("--inputs", type=int, default=100)
    ve.add_argument("--seed", type=int, default=0)
    ve.set_defaults(func=_cmd_verify)

    me = sub.add_parser("metrics", help="depth and volume of a circuit")
    me.add_argument("--circuit", required=True)
    me.add_argument("-o", "--out", default=None)
    me.set_defaults(func=_cmd_metrics)

    em = sub.add_parser("emit", help="emit a memory experiment as circuit text")
    em.add_argument("--family", required=True, choices=["repetition", "surface"])
    em.add_argument("--distance", required=True, type=int)
    em.add_argument("--m", required=True, type=int)
    em.add_argument("--rounds", default="auto")
    em.add_argument("--p-cnot", dest="p_cnot", type=float, default=0.0)
    em.add_argument("--p-swap", dest="p_swap", type=float, default=0.0)
    em.add_argument("--p-idle", dest="p_idle", type=float, default=0.0)
    em.add_argument("--guard", type=int, default=None)
    em.add_argument("-o", "--out", default=None)
    em.set_defaults(func=_cmd_emit)

    sw = sub.add_parser("sweep", help="schedule, verify and measure a grid of instances")
    sw.add_argument("--config", default=None)
    sw.add_argument("--family", default=None, choices=["repetition", "surface"])
    sw.add_argument("--distances", default=None, help="comma separated")
    sw.add_argument("--m-list", dest="m_list", default=None, help="comma separated")
    sw.add_argument("--m-rule", dest="m_rule", default=None, help="budget:<n+m total>")
    sw.add_argument("--out-csv", dest="out_csv", default=None)
    sw.add_argument("--emit-dir", dest="emit_dir", default=None)
    sw.add_argument("--rounds", default=None)
    sw.add_argument("--p-cnot", dest="p_cnot", type=float, default=None)
    sw.add_argument("--p-swap", dest="p_swap", type=float, default=None)
    sw.add_argument("--p-idle", dest="p_idle", type=float, default=None)
    sw.add_argument("--guard", type=int, default=None)
    sw.add_argument("--inputs", type=int, default=100)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--workers", type=int, default=None)
    sw.set_defaults(func=_cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
