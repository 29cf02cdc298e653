import itertools
import json

import numpy as np
import pytest

from qecsched import (
    CssCode,
    GeneratorLabel,
    PauliType,
    default_logical_z,
    repetition_code,
    rotated_surface_code,
    validate_css,
)


def span_size(rows: list[tuple[int, ...]], n: int) -> int:
    """Number of distinct GF(2) combinations of the rows, by enumeration."""
    masks = []
    for row in rows:
        mask = 0
        for q in row:
            mask |= 1 << (q - 1)
        masks.append(mask)
    seen = set()
    for bits in itertools.product((0, 1), repeat=len(masks)):
        acc = 0
        for b, mask in zip(bits, masks):
            if b:
                acc ^= mask
        seen.add(acc)
    return len(seen)


def overlap(a: GeneratorLabel, b: GeneratorLabel) -> int:
    return len(a.support & b.support)


def test_pauli_order():
    assert PauliType.Z < PauliType.X
    assert not PauliType.X < PauliType.Z
    assert sorted([PauliType.X, PauliType.Z]) == [PauliType.Z, PauliType.X]


def test_repetition_d3_generators():
    code = repetition_code(3)
    assert code.n == 3
    assert [g.qubits for g in code.generators] == [(1, 2), (2, 3)]
    assert all(g.pauli is PauliType.Z for g in code.generators)
    assert code.x_generators == ()


@pytest.mark.parametrize("d", [2, 5, 9, 15])
def test_repetition_chain(d):
    code = repetition_code(d)
    assert code.n == d
    assert len(code.generators) == d - 1
    assert [g.qubits for g in code.generators] == [(i, i + 1) for i in range(1, d)]
    assert validate_css(code).ok


def test_repetition_rejects_d1():
    with pytest.raises(ValueError):
        repetition_code(1)


def test_surface_d3_exact():
    code = rotated_surface_code(3)
    assert code.n == 9
    z = [g.qubits for g in code.z_generators]
    x = [g.qubits for g in code.x_generators]
    assert z == [(1, 2, 4, 5), (5, 6, 8, 9), (4, 7), (3, 6)]
    assert x == [(2, 3, 5, 6), (4, 5, 7, 8), (1, 2), (8, 9)]


@pytest.mark.parametrize("d", [3, 5, 7])
def test_surface_counts(d):
    code = rotated_surface_code(d)
    assert code.n == d * d
    assert len(code.generators) == d * d - 1
    assert len(code.z_generators) == (d * d - 1) // 2
    assert len(code.x_generators) == (d * d - 1) // 2
    weights = [g.weight for g in code.generators]
    assert weights.count(4) == (d - 1) ** 2
    assert weights.count(2) == 2 * (d - 1)
    # each data qubit is touched by at most two checks per basis
    for block in (code.z_generators, code.x_generators):
        touch = np.zeros(code.n + 1, dtype=int)
        for g in block:
            for q in g.qubits:
                touch[q] += 1
        assert touch[1:].max() <= 2
    assert validate_css(code).ok


@pytest.mark.parametrize("d", [3, 5, 7])
def test_surface_commutation_oracle(d):
    code = rotated_surface_code(d)
    for gz in code.z_generators:
        for gx in code.x_generators:
            assert overlap(gz, gx) % 2 == 0, (gz.qubits, gx.qubits)


@pytest.mark.parametrize("d", [3, 5])
def test_surface_independence_by_enumeration(d):
    code = rotated_surface_code(d)
    for block in (code.z_generators, code.x_generators):
        rows = [g.qubits for g in block]
        assert span_size(rows, code.n) == 2 ** len(rows)


def test_surface_rejects_even_or_small():
    for d in (1, 2, 4):
        with pytest.raises(ValueError):
            rotated_surface_code(d)


def _code(n, z_rows, x_rows):
    gens = tuple(GeneratorLabel(tuple(r), PauliType.Z) for r in z_rows) + tuple(
        GeneratorLabel(tuple(r), PauliType.X) for r in x_rows
    )
    return CssCode(n=n, generators=gens)


def test_validate_reports_first_violation():
    assert validate_css(_code(3, [(1, 4)], [])).violation == "index-bounds"
    assert validate_css(_code(3, [(2, 2)], [])).violation == "index-bounds"
    assert validate_css(_code(3, [(2, 1)], [])).violation == "index-bounds"
    bad_weight = CssCode(3, (GeneratorLabel((2,), PauliType.Z),))
    assert validate_css(bad_weight).violation == "weight"
    assert validate_css(_code(3, [(1, 2)], [(2, 3)])).violation == "commutation"
    dependent = _code(4, [(1, 2), (2, 3), (1, 3)], [])
    assert validate_css(dependent).violation == "independence"
    swapped = CssCode(
        3,
        (GeneratorLabel((1, 2), PauliType.X), GeneratorLabel((1, 2), PauliType.Z)),
    )
    assert validate_css(swapped).violation == "block-order"
    assert validate_css(_code(3, [(1, 2), (2, 3)], [])).ok


def test_json_round_trip():
    code = rotated_surface_code(3)
    doc = json.loads(code.to_json())
    assert doc["n"] == 9
    assert doc["generators"][0] == {"pauli": "Z", "qubits": [1, 2, 4, 5]}
    again = CssCode.from_json(code.to_json())
    assert again == code


def test_default_logical_surface_is_top_row():
    for d in (3, 5):
        code = rotated_surface_code(d)
        support = default_logical_z(code)
        assert support == tuple(range(1, d + 1))
        # oracle: even overlap with every X generator
        for gx in code.x_generators:
            assert len(set(support) & gx.support) % 2 == 0
        # oracle: not a product of Z generators (enumerate the Z span)
        rows = [g.qubits for g in code.z_generators]
        if d == 3:
            mask = sum(1 << (q - 1) for q in support)
            spans = set()
            for bits in itertools.product((0, 1), repeat=len(rows)):
                acc = 0
                for b, row in zip(bits, rows):
                    if b:
                        acc ^= sum(1 << (q - 1) for q in row)
                spans.add(acc)
            assert mask not in spans


def test_default_logical_repetition():
    assert default_logical_z(repetition_code(5)) == (1,)


def test_default_logical_kernel_fallback():
    # two-qubit code: Z1Z2 and X1X2 commute (overlap 2); logical Z is Z1Z2's
    # complement partner, found by elimination rather than by family shape
    code = _code(2, [], [(1, 2)])
    support = default_logical_z(code)
    assert len(set(support) & {1, 2}) % 2 == 0
