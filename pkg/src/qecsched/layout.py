"""Hardware connectivity graphs and qubit placements.

Qubit references are signed integers throughout the package: +j is data
qubit j (1-based), -i is ancilla i (1-based). Slot order in serialized
placements is d_1..d_n followed by a_1..a_m.
"""

from __future__ import annotations

import json
from collections import deque

import numpy as np


class ConnectivityGraph:
    """Undirected connected graph on vertices 0..vertex_count-1.

    Distances are shortest-path hop counts, computed by BFS and cached
    as a full table on first use.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: list[tuple[int, int]],
        coords: list[tuple[int, int]] | None = None,
    ) -> None:
        if vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        canon: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            canon.add((min(u, v), max(u, v)))
        self.vertex_count = vertex_count
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(canon))
        adj: list[list[int]] = [[] for _ in range(vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adjacency: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(nbrs)) for nbrs in adj
        )
        self._edge_set = canon
        self.coords = (
            tuple(tuple(c) for c in coords) if coords is not None else None
        )
        self._dist: np.ndarray | None = None
        if self._bfs_reach(0) != vertex_count:
            raise ValueError("graph is not connected")

    def _bfs_reach(self, start: int) -> int:
        seen = bytearray(self.vertex_count)
        seen[start] = 1
        queue = deque([start])
        count = 1
        while queue:
            u = queue.popleft()
            for v in self._adjacency[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    queue.append(v)
        return count

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency[v]

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set

    def _distance_table(self) -> np.ndarray:
        if self._dist is None:
            n = self.vertex_count
            table = np.full((n, n), -1, dtype=np.int32)
            for s in range(n):
                table[s, s] = 0
                queue = deque([s])
                while queue:
                    u = queue.popleft()
                    for v in self._adjacency[u]:
                        if table[s, v] < 0:
                            table[s, v] = table[s, u] + 1
                            queue.append(v)
            self._dist = table
        return self._dist

    def distance(self, u: int, v: int) -> int:
        return int(self._distance_table()[u, v])


def graph_distance(graph: ConnectivityGraph, u: int, v: int) -> int:
    """Shortest-path hop count between two vertices."""
    return graph.distance(u, v)


class Placement:
    """Bijection between the n+m qubits and graph vertices."""

    __slots__ = ("n", "m", "_slot_to_vertex", "_vertex_to_slot")

    def __init__(self, n: int, m: int, to_vertex: list[int]) -> None:
        if len(to_vertex) != n + m:
            raise ValueError("placement length must be n+m")
        if len(set(to_vertex)) != len(to_vertex):
            raise ValueError("placement must be injective")
        self.n = n
        self.m = m
        self._slot_to_vertex = list(int(v) for v in to_vertex)
        self._vertex_to_slot = {v: s for s, v in enumerate(self._slot_to_vertex)}

    def _slot(self, ref: int) -> int:
        if ref > 0:
            if ref > self.n:
                raise KeyError(f"no data qubit {ref}")
            return ref - 1
        if ref < 0:
            if -ref > self.m:
                raise KeyError(f"no ancilla {-ref}")
            return self.n - ref - 1
        raise KeyError("qubit reference 0 is invalid")

    @staticmethod
    def _ref_of_slot(slot: int, n: int) -> int:
        return slot + 1 if slot < n else -(slot - n + 1)

    def vertex_of(self, ref: int) -> int:
        return self._slot_to_vertex[self._slot(ref)]

    def occupant(self, vertex: int) -> int:
        return self._ref_of_slot(self._vertex_to_slot[vertex], self.n)

    def swap(self, ref_a: int, ref_b: int) -> None:
        sa, sb = self._slot(ref_a), self._slot(ref_b)
        va, vb = self._slot_to_vertex[sa], self._slot_to_vertex[sb]
        self._slot_to_vertex[sa], self._slot_to_vertex[sb] = vb, va
        self._vertex_to_slot[va], self._vertex_to_slot[vb] = sb, sa

    def as_list(self) -> list[int]:
        return list(self._slot_to_vertex)

    def copy(self) -> "Placement":
        return Placement(self.n, self.m, self._slot_to_vertex)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and self._slot_to_vertex == other._slot_to_vertex
        )

    def __repr__(self) -> str:
        return f"Placement(n={self.n}, m={self.m}, {self._slot_to_vertex})"


def line_layout(n: int, m: int) -> tuple[ConnectivityGraph, Placement]:
    """Path graph with ancillas interleaved between the data qubits.

    The chain order is d_1, a_1, d_2, a_2, ... while both kinds remain,
    then whichever kind is left over continues the chain. Vertex k is the
    k-th chain position.
    """
    if n < 1 or m < 1:
        raise ValueError("line layout needs n >= 1 and m >= 1")
    order: list[int] = []
    for k in range(max(n, m)):
        if k < n:
            order.append(k + 1)
        if k < m:
            order.append(-(k + 1))
    total = n + m
    to_vertex = [0] * total
    for vertex, ref in enumerate(order):
        slot = ref - 1 if ref > 0 else n - ref - 1
        to_vertex[slot] = vertex
    edges = [(k, k + 1) for k in range(total - 1)]
    coords = [(0, k) for k in range(total)]
    graph = ConnectivityGraph(total, edges, coords=coords)
    return graph, Placement(n, m, to_vertex)


def surround_layout(d: int, m: int) -> tuple[ConnectivityGraph, Placement]:
    """Square-grid layout for a d x d data patch with a boundary ancilla ring.

    The patch sits inside a (d+2) x (d+2) grid; data qubit at code cell
    (r, c) occupies grid cell (r+1, c+1). The 4d non-corner boundary cells
    form a clockwise ring starting at (0, 1); ancilla a_k takes ring
    position floor((k-1) * 4d / m). Unused boundary cells are removed, the
    rest keep 4-neighbour adjacency, and vertices are renumbered row-major.
    """
    if d < 1:
        raise ValueError("surround layout needs d >= 1")
    if not 1 <= m <= 4 * d:
        raise ValueError("surround layout needs 1 <= m <= 4d")
    side = d + 2
    ring: list[tuple[int, int]] = []
    ring += [(0, j) for j in range(1, d + 1)]
    ring += [(i, side - 1) for i in range(1, d + 1)]
    ring += [(side - 1, j) for j in range(d, 0, -1)]
    ring += [(i, 0) for i in range(d, 0, -1)]

    cells: dict[tuple[int, int], int] = {}
    for r in range(d):
        for c in range(d):
            cells[(r + 1, c + 1)] = r * d + c + 1
    for k in range(m):
        pos = ring[(k * 4 * d) // m]
        if pos in cells:
            raise ValueError("ancilla ring positions collide")
        cells[pos] = -(k + 1)

    ordered = sorted(cells)
    vertex_of_cell = {cell: idx for idx, cell in enumerate(ordered)}
    edges = []
    for (r, c), u in vertex_of_cell.items():
        for nbr in ((r + 1, c), (r, c + 1)):
            if nbr in vertex_of_cell:
                edges.append((u, vertex_of_cell[nbr]))
    graph = ConnectivityGraph(len(ordered), edges, coords=ordered)

    n = d * d
    to_vertex = [0] * (n + m)
    for cell, ref in cells.items():
        slot = ref - 1 if ref > 0 else n - ref - 1
        to_vertex[slot] = vertex_of_cell[cell]
    return graph, Placement(n, m, to_vertex)


def layout_to_json(graph: ConnectivityGraph, placement: Placement) -> str:
    doc = {
        "vertices": graph.vertex_count,
        "edges": [list(e) for e in graph.edges],
        "placement": placement.as_list(),
    }
    if graph.coords is not None:
        doc["coords"] = [list(c) for c in graph.coords]
    return json.dumps(doc, indent=2)


def layout_from_json(text: str, n: int) -> tuple[ConnectivityGraph, Placement]:
    """Rebuild a layout; n splits the placement array into data and ancilla."""
    doc = json.loads(text)
    coords = [tuple(c) for c in doc["coords"]] if "coords" in doc else None
    graph = ConnectivityGraph(
        int(doc["vertices"]),
        [tuple(e) for e in doc["edges"]],
        coords=coords,
    )
    to_vertex = [int(v) for v in doc["placement"]]
    m = len(to_vertex) - n
    if m < 0:
        raise ValueError("placement shorter than data count")
    return graph, Placement(n, m, to_vertex)
