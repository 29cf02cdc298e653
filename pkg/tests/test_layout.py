import json

import numpy as np
import pytest

from qecsched import (
    ConnectivityGraph,
    Placement,
    graph_distance,
    layout_from_json,
    layout_to_json,
    line_layout,
    surround_layout,
)


def floyd_warshall(graph: ConnectivityGraph) -> np.ndarray:
    v = graph.vertex_count
    dist = np.full((v, v), 10**6, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    for a, b in graph.edges:
        dist[a, b] = dist[b, a] = 1
    for k in range(v):
        dist = np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :])
    return dist


def occupant_names(graph, placement):
    return [placement.occupant(v) for v in range(graph.vertex_count)]


def test_line_3_1_order():
    graph, placement = line_layout(3, 1)
    assert graph.vertex_count == 4
    assert graph.edges == ((0, 1), (1, 2), (2, 3))
    assert occupant_names(graph, placement) == [1, -1, 2, 3]
    assert graph.coords == ((0, 0), (0, 1), (0, 2), (0, 3))


def test_line_interleaves_then_appends():
    graph, placement = line_layout(4, 2)
    assert occupant_names(graph, placement) == [1, -1, 2, -2, 3, 4]
    graph, placement = line_layout(2, 4)
    assert occupant_names(graph, placement) == [1, -1, 2, -2, -3, -4]
    graph, placement = line_layout(1, 1)
    assert occupant_names(graph, placement) == [1, -1]


def test_line_rejects_empty_sides():
    with pytest.raises(ValueError):
        line_layout(0, 1)
    with pytest.raises(ValueError):
        line_layout(3, 0)


@pytest.mark.parametrize("build", [lambda: line_layout(5, 2), lambda: surround_layout(3, 6)])
def test_distance_matches_floyd_warshall(build):
    graph, _ = build()
    want = floyd_warshall(graph)
    for u in range(graph.vertex_count):
        for v in range(graph.vertex_count):
            assert graph.distance(u, v) == want[u, v]
            assert graph_distance(graph, u, v) == want[u, v]


def test_surround_d3_m6_ring_cells():
    graph, placement = surround_layout(3, 6)
    assert graph.vertex_count == 15
    ancilla_cells = {graph.coords[placement.vertex_of(-i)] for i in range(1, 7)}
    assert ancilla_cells == {(0, 1), (0, 3), (2, 4), (4, 3), (4, 1), (2, 0)}
    data_cells = [graph.coords[placement.vertex_of(j)] for j in range(1, 10)]
    assert data_cells == [
        (1, 1), (1, 2), (1, 3),
        (2, 1), (2, 2), (2, 3),
        (3, 1), (3, 2), (3, 3),
    ]


def test_surround_vertex_counts():
    graph, _ = surround_layout(3, 1)
    assert graph.vertex_count == 10
    graph, _ = surround_layout(3, 12)
    assert graph.vertex_count == 21
    graph, _ = surround_layout(5, 20)
    assert graph.vertex_count == 45


def test_surround_full_ring_order():
    # m = 4d fills every non-corner boundary cell, clockwise from (0, 1)
    d = 3
    graph, placement = surround_layout(d, 4 * d)
    ring = [graph.coords[placement.vertex_of(-i)] for i in range(1, 4 * d + 1)]
    assert ring == [
        (0, 1), (0, 2), (0, 3),
        (1, 4), (2, 4), (3, 4),
        (4, 3), (4, 2), (4, 1),
        (3, 0), (2, 0), (1, 0),
    ]


def test_surround_rejects_overfull():
    with pytest.raises(ValueError):
        surround_layout(3, 13)
    with pytest.raises(ValueError):
        surround_layout(3, 0)


def test_surround_connected_and_adjacent_to_data():
    graph, placement = surround_layout(5, 7)
    # ring cells with all four corners cut still reach each other through the grid
    for i in range(1, 8):
        v = placement.vertex_of(-i)
        assert any(placement.occupant(u) > 0 for u in graph.neighbors(v))


def test_placement_swap_and_copy():
    graph, placement = line_layout(3, 1)
    other = placement.copy()
    placement.swap(-1, 2)
    assert placement.vertex_of(-1) == 2
    assert placement.vertex_of(2) == 1
    assert other.vertex_of(-1) == 1
    assert placement != other
    placement.swap(-1, 2)
    assert placement == other


def test_placement_as_list_is_slot_ordered():
    graph, placement = line_layout(3, 2)
    assert placement.as_list() == [0, 2, 4, 1, 3]


def test_graph_requires_connected():
    with pytest.raises(ValueError):
        ConnectivityGraph(4, ((0, 1), (2, 3)))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        ConnectivityGraph(3, ((0, 0), (0, 1), (1, 2)))
    with pytest.raises(ValueError):
        ConnectivityGraph(3, ((0, 3), (0, 1), (1, 2)))


def test_layout_json_round_trip():
    graph, placement = surround_layout(3, 6)
    text = layout_to_json(graph, placement)
    doc = json.loads(text)
    assert doc["vertices"] == 15
    assert len(doc["placement"]) == 15
    graph2, placement2 = layout_from_json(text, n=9)
    assert graph2.edges == graph.edges
    assert graph2.coords == graph.coords
    assert placement2 == placement
