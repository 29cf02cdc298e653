"""CSS code descriptions: generator labels, construction, validation."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import gf2


class PauliType(enum.Enum):
    """Basis tag for a stabilizer generator. Z sorts before X."""

    Z = "Z"
    X = "X"

    def __lt__(self, other: "PauliType") -> bool:
        if not isinstance(other, PauliType):
            return NotImplemented
        order = {"Z": 0, "X": 1}
        return order[self.value] < order[other.value]


@dataclass(frozen=True)
class GeneratorLabel:
    """One stabilizer generator: the data qubits it acts on, plus its basis.

    Qubit indices are 1-based and strictly increasing. Weight must be at
    least 2; single-qubit checks are rejected at validation.
    """

    qubits: tuple[int, ...]
    pauli: PauliType
    support: frozenset[int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "support", frozenset(self.qubits))

    @property
    def weight(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class CssCode:
    """A CSS code on n data qubits.

    Generators are stored with the Z block first, then the X block, each
    block in a fixed construction order. Scheduling and detector layout
    rely on that order being stable.
    """

    n: int
    generators: tuple[GeneratorLabel, ...]

    @property
    def z_generators(self) -> tuple[GeneratorLabel, ...]:
        return tuple(g for g in self.generators if g.pauli is PauliType.Z)

    @property
    def x_generators(self) -> tuple[GeneratorLabel, ...]:
        return tuple(g for g in self.generators if g.pauli is PauliType.X)

    def parity_matrix(self, pauli: PauliType) -> np.ndarray:
        """Binary support matrix of one block, one row per generator."""
        block = [g for g in self.generators if g.pauli is pauli]
        mat = np.zeros((len(block), self.n), dtype=np.uint8)
        for i, g in enumerate(block):
            for q in g.qubits:
                mat[i, q - 1] = 1
        return mat

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "generators": [
                {"pauli": g.pauli.value, "qubits": list(g.qubits)}
                for g in self.generators
            ],
        }
        return json.dumps(doc, indent=2)

    @staticmethod
    def from_json(text: str) -> "CssCode":
        doc = json.loads(text)
        gens = tuple(
            GeneratorLabel(tuple(entry["qubits"]), PauliType(entry["pauli"]))
            for entry in doc["generators"]
        )
        return CssCode(n=int(doc["n"]), generators=gens)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_css. On failure, `violation` names the first
    constraint that broke and `detail` pins the offending generator."""

    ok: bool
    violation: str | None = None
    detail: str | None = None


def validate_css(code: CssCode) -> ValidationReport:
    """Check index bounds, weights, block ordering, commutation, independence.

    Checks run in that order and the first failure is reported.
    """
    if code.n < 1:
        return ValidationReport(False, "index-bounds", f"n={code.n}")
    seen_x = False
    for k, g in enumerate(code.generators):
        for q in g.qubits:
            if not 1 <= q <= code.n:
                return ValidationReport(
                    False, "index-bounds", f"generator {k} touches qubit {q}"
                )
        if len(set(g.qubits)) != len(g.qubits):
            return ValidationReport(
                False, "index-bounds", f"generator {k} repeats a qubit"
            )
        if tuple(sorted(g.qubits)) != g.qubits:
            return ValidationReport(
                False, "index-bounds", f"generator {k} is not sorted"
            )
        if g.weight < 2:
            return ValidationReport(False, "weight", f"generator {k} has weight {g.weight}")
        if g.pauli is PauliType.X:
            seen_x = True
        elif seen_x:
            return ValidationReport(False, "block-order", f"Z generator {k} after X block")

    hz = code.parity_matrix(PauliType.Z)
    hx = code.parity_matrix(PauliType.X)
    if hz.size and hx.size:
        prod = (hz @ hx.T) % 2
        bad = np.argwhere(prod != 0)
        if bad.size:
            i, j = bad[0]
            return ValidationReport(
                False, "commutation", f"Z generator {i} anticommutes with X generator {j}"
            )
    for name, mat in (("Z", hz), ("X", hx)):
        if mat.size and gf2.rank(mat) != mat.shape[0]:
            return ValidationReport(False, "independence", f"{name} block is rank deficient")
    return ValidationReport(True)


def repetition_code(d: int) -> CssCode:
    """Distance-d repetition code: Z checks on neighbouring pairs, no X block."""
    if d < 2:
        raise ValueError("repetition code needs d >= 2")
    gens = tuple(
        GeneratorLabel((i, i + 1), PauliType.Z) for i in range(1, d)
    )
    return CssCode(n=d, generators=gens)


def rotated_surface_code(d: int) -> CssCode:
    """Distance-d rotated surface code on a d x d data grid.

    Data qubit at grid cell (r, c) gets index r*d + c + 1. Interior faces
    (i, j) with i, j in 0..d-2 carry weight-4 checks, Z when i+j is even.
    Weight-2 boundary checks alternate so every X/Z overlap stays even:
    top row X at even j, bottom row X at odd j, left column Z at odd i,
    right column Z at even i. Within each block, interior faces come
    first in row-major order, then the boundary checks.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError("rotated surface code needs odd d >= 3")

    def q(r: int, c: int) -> int:
        return r * d + c + 1

    z_gens: list[GeneratorLabel] = []
    x_gens: list[GeneratorLabel] = []
    for i in range(d - 1):
        for j in range(d - 1):
            face = tuple(sorted((q(i, j), q(i, j + 1), q(i + 1, j), q(i + 1, j + 1))))
            label = GeneratorLabel(face, PauliType.Z if (i + j) % 2 == 0 else PauliType.X)
            (z_gens if label.pauli is PauliType.Z else x_gens).append(label)
    for j in range(0, d - 1, 2):
        x_gens.append(GeneratorLabel((q(0, j), q(0, j + 1)), PauliType.X))
    for j in range(1, d - 1, 2):
        x_gens.append(GeneratorLabel((q(d - 1, j), q(d - 1, j + 1)), PauliType.X))
    for i in range(1, d - 1, 2):
        z_gens.append(GeneratorLabel(tuple(sorted((q(i, 0), q(i + 1, 0)))), PauliType.Z))
    for i in range(0, d - 1, 2):
        z_gens.append(GeneratorLabel(tuple(sorted((q(i, d - 1), q(i + 1, d - 1)))), PauliType.Z))
    return CssCode(n=d * d, generators=tuple(z_gens) + tuple(x_gens))


def default_logical_z(code: CssCode) -> tuple[int, ...]:
    """Deterministic Z-logical support for memory experiments.

    For the rotated surface code this is the top grid row; for a code with
    an empty X block (repetition) a single qubit suffices. Anything else
    falls back to GF(2) elimination: the first kernel vector of the X
    block that is independent of the Z block. The result is always checked
    to commute with every X generator and to lie outside the Z span.
    """
    support: tuple[int, ...] | None = None
    if not code.x_generators:
        support = (1,)
    else:
        root = math.isqrt(code.n)
        if root * root == code.n and root % 2 == 1 and root >= 3:
            if code == rotated_surface_code(root):
                support = tuple(range(1, root + 1))
    if support is None:
        support = _kernel_logical(code)

    vec = np.zeros(code.n, dtype=np.uint8)
    vec[[s - 1 for s in support]] = 1
    hx = code.parity_matrix(PauliType.X)
    if hx.size and np.any((hx @ vec) % 2):
        raise ValueError("candidate logical anticommutes with an X generator")
    hz = code.parity_matrix(PauliType.Z)
    stacked = np.vstack([hz, vec[None, :]]) if hz.size else vec[None, :]
    if gf2.rank(stacked) == gf2.rank(hz):
        raise ValueError("candidate logical lies in the Z stabilizer span")
    return support


def _kernel_logical(code: CssCode) -> tuple[int, ...]:
    hx = code.parity_matrix(PauliType.X)
    hz = code.parity_matrix(PauliType.Z)
    echelon, pivots = gf2.row_echelon(hx)
    free_cols = [c for c in range(code.n) if c not in pivots]
    base_rank = gf2.rank(hz)
    for free in free_cols:
        vec = np.zeros(code.n, dtype=np.uint8)
        vec[free] = 1
        # Back-substitute so that hx @ vec = 0.
        for row in range(len(pivots) - 1, -1, -1):
            if (echelon[row] @ vec) % 2:
                vec[pivots[row]] ^= 1
        stacked = np.vstack([hz, vec[None, :]]) if hz.size else vec[None, :]
        if gf2.rank(stacked) > base_rank:
            return tuple(int(q) + 1 for q in np.nonzero(vec)[0])
    raise ValueError("code has no Z logical outside the stabilizer span")
