import json

import numpy as np
import pytest

from qecsched import (
    CnotCouple,
    GeneratorLabel,
    MeasureReset,
    PauliType,
    ScheduledCircuit,
    Swap,
    Timestep,
    build_memory_experiment,
    compose_round,
    default_rounds,
    line_layout,
    metrics,
    repetition_code,
    replay,
    reverse_sequence,
    rotated_surface_code,
    schedule,
    surround_layout,
)


def zlabel(*qubits):
    return GeneratorLabel(tuple(qubits), PauliType.Z)


def golden():
    graph, placement = line_layout(3, 1)
    code = repetition_code(3)
    circuit, _ = schedule(graph, placement, list(code.generators))
    return graph, circuit


def test_reverse_golden_trace():
    graph, circuit = golden()
    rev = reverse_sequence(circuit)
    assert rev.timesteps == (
        Timestep((CnotCouple(1, 3),)),
        Timestep((Swap(-1, 2),)),
        Timestep((CnotCouple(1, 2), MeasureReset(1, zlabel(2, 3)))),
        Timestep((CnotCouple(1, 2),)),
        Timestep((CnotCouple(1, 1), MeasureReset(1, zlabel(1, 2)))),
    )
    assert rev.start_placement == circuit.end_placement
    assert rev.end_placement == circuit.start_placement
    assert np.count_nonzero(replay(rev, graph)) == 0


@pytest.mark.parametrize(
    "build",
    [
        lambda: (line_layout(3, 1), repetition_code(3)),
        lambda: (surround_layout(3, 2), rotated_surface_code(3)),
        lambda: (surround_layout(5, 3), rotated_surface_code(5)),
    ],
)
@pytest.mark.parametrize("basis", [PauliType.Z, PauliType.X])
def test_reverse_is_an_involution(build, basis):
    (graph, placement), code = build()
    labels = [g for g in code.generators if g.pauli is basis]
    if not labels:
        pytest.skip("code has no generators in this basis")
    circuit, _ = schedule(graph, placement, labels)
    rev = reverse_sequence(circuit)
    back = reverse_sequence(rev)
    assert back.timesteps == circuit.timesteps
    assert back.start_placement == circuit.start_placement
    assert back.end_placement == circuit.end_placement
    assert np.count_nonzero(replay(rev, graph)) == 0


def test_reverse_rejects_open_cycles():
    placement = line_layout(2, 1)[1]
    circuit = ScheduledCircuit(
        basis=PauliType.Z,
        n=2,
        m=1,
        timesteps=(Timestep((CnotCouple(1, 1),)),),
        start_placement=placement,
        end_placement=placement.copy(),
    )
    with pytest.raises(ValueError):
        reverse_sequence(circuit)


def test_compose_round_journal_counts():
    graph, placement = surround_layout(3, 2)
    code = rotated_surface_code(3)
    s_z, _ = schedule(graph, placement, list(code.z_generators))
    s_x, _ = schedule(graph, placement, list(code.x_generators))
    rnd = compose_round(s_z, s_x)
    assert rnd.phases == ("z", "z_reverse", "x", "x_reverse")
    journal = rnd.journal()
    assert len(journal) == 2 * len(code.z_generators) + 2 * len(code.x_generators)
    by_phase = {}
    for phase, _, label in journal:
        by_phase.setdefault(phase, []).append(label.qubits)
    assert sorted(by_phase["z"]) == sorted(g.qubits for g in code.z_generators)
    assert sorted(by_phase["z"]) == sorted(by_phase["z_reverse"])
    assert sorted(by_phase["x"]) == sorted(by_phase["x_reverse"])


def test_compose_round_closes_placement():
    graph, placement = surround_layout(3, 2)
    code = rotated_surface_code(3)
    s_z, _ = schedule(graph, placement, list(code.z_generators))
    s_x, _ = schedule(graph, placement, list(code.x_generators))
    rnd = compose_round(s_z, s_x)
    assert rnd.segments[-1].end_placement == rnd.segments[0].start_placement
    for a, b in zip(rnd.segments, rnd.segments[1:]):
        assert a.end_placement == b.start_placement


def test_compose_round_rejects_wrong_bases():
    graph, placement = surround_layout(3, 2)
    code = rotated_surface_code(3)
    s_z, _ = schedule(graph, placement, list(code.z_generators))
    s_x, _ = schedule(graph, placement, list(code.x_generators))
    with pytest.raises(ValueError):
        compose_round(s_x, s_z)
    with pytest.raises(ValueError):
        compose_round(s_z, s_z)


def test_repetition_round_has_two_segments():
    graph, placement = line_layout(3, 2)
    code = repetition_code(3)
    s_z, _ = schedule(graph, placement, list(code.generators))
    rnd = compose_round(s_z, None)
    assert rnd.phases == ("z", "z_reverse")


def test_metrics_golden():
    _, circuit = golden()
    got = metrics(circuit)
    assert got.depth == 5
    assert got.volume == 20
    assert got.ancilla_volume == 5


def test_metrics_counts_only_busy_steps():
    placement = line_layout(2, 1)[1]
    circuit = ScheduledCircuit(
        basis=PauliType.Z,
        n=2,
        m=1,
        timesteps=(
            Timestep((CnotCouple(1, 1),)),
            Timestep((CnotCouple(1, 2), MeasureReset(1, zlabel(1, 2)))),
        ),
        start_placement=placement,
        end_placement=placement.copy(),
    )
    got = metrics(circuit)
    assert got.depth == 2
    assert got.volume == 6
    assert got.ancilla_volume == 2


def test_default_rounds():
    assert default_rounds(3) == 1
    assert default_rounds(5) == 3
    assert default_rounds(7) == 5
    assert default_rounds(2) == 1


def test_build_memory_experiment_journal():
    graph, placement = surround_layout(3, 6)
    code = rotated_surface_code(3)
    exp = build_memory_experiment(code, graph, placement, rounds=2)
    assert exp.rounds == 2
    assert exp.logical_support == (1, 2, 3)
    journal = exp.journal()
    assert len(journal) == 2 * (2 * 4 + 2 * 4)
    assert {r for r, _, _, _ in journal} == {0, 1}
    # both rounds replay the same measurement order
    first = [(p, a, l) for r, p, a, l in journal if r == 0]
    second = [(p, a, l) for r, p, a, l in journal if r == 1]
    assert first == second


def test_build_memory_experiment_validates():
    graph, placement = surround_layout(3, 2)
    code = rotated_surface_code(3)
    with pytest.raises(ValueError):
        build_memory_experiment(code, graph, placement, rounds=0)
    with pytest.raises(ValueError):
        build_memory_experiment(repetition_code(3), graph, placement, rounds=1)


def test_memory_experiment_json_shape():
    graph, placement = line_layout(3, 1)
    exp = build_memory_experiment(repetition_code(3), graph, placement, rounds=1)
    doc = json.loads(exp.to_json())
    assert doc["n"] == 3
    assert doc["m"] == 1
    assert doc["rounds"] == 1
    assert doc["phases"] == ["z", "z_reverse"]
    assert doc["logical_support"] == [1]
    assert len(doc["segments"]) == 2
