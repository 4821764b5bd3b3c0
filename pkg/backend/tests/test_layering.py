"""
Pruebas de la reforma por capas: capas, regiones, libro de aristas
borradas y conservación de aristas.
"""

import pytest
from hypothesis import given, strategies as st

from conftest import PROPERTY_SETTINGS, cycle_graph
from ladder.errors import EmbeddingInvalid, NotTriangulated, RootNotFound
from ladder.generators import random_triangulation
from ladder.layering import (
    OUTER,
    DownTriangle,
    Region,
    check_edge_conservation,
    enumerate_regions,
    reform,
    row_crossings,
)
from ladder.plane_graph import PlaneGraph, contract, triangulate, validate_embedding

# Dos ciclos internos (10,11,9) y (7,8,6) unidos por el puente (7,9) bajo un
# hexágono externo; el vértice 0 ve a los dos ciclos.
TWO_BOWLS_FACES = [
    (0, 5, 6), (0, 6, 7), (0, 7, 9), (0, 9, 10), (0, 10, 1),
    (5, 4, 6), (4, 8, 6), (4, 3, 8), (6, 8, 7),
    (8, 3, 7), (7, 3, 9), (9, 3, 11), (9, 11, 10),
    (1, 10, 2), (2, 10, 11), (2, 11, 3),
]


@pytest.fixture
def two_bowls():
    return PlaneGraph.from_faces(12, TWO_BOWLS_FACES, (0, 1, 2, 3, 4, 5))


class TestReform:
    def test_k4(self, k4):
        rr = reform(k4)
        assert rr.cl.layers == [(0, 2, 1), (3,)]
        assert rr.batches == 0
        assert rr.cl.parent[3] == 2
        assert rr.cl.triangles == [DownTriangle((0, 2, 1), 3)]
        assert rr.cl.bad_vertices == {0, 3}
        assert rr.ledger.wires == {0: {(0, 3)}}
        assert not rr.ledger.bridges and not rr.ledger.dummy_added
        assert rr.cl.kept_edges == k4.edge_set - {(0, 3)}
        assert row_crossings(rr.cl) == []
        assert check_edge_conservation(rr.cl, rr.ledger, rr.graph.edges) == []

    def test_wheel(self, w6):
        rr = reform(w6)
        assert rr.cl.layers == [(1, 5, 4, 3, 2), (0,)]
        assert rr.cl.parent[0] == 5
        assert rr.cl.children[5] == (0,)
        assert rr.cl.children[OUTER] == (1, 5, 4, 3, 2)
        assert rr.cl.bad_vertices == {1, 0}
        assert rr.ledger.wires == {1: {(0, 1)}}
        assert rr.cl.upper_neighbors(0) == [1, 5, 4, 3, 2]

    def test_two_bowls_under_a_hexagon(self, two_bowls):
        rr = reform(two_bowls)
        cl, ledger = rr.cl, rr.ledger
        assert rr.batches == 0
        assert cl.layers == [(0, 1, 2, 3, 4, 5), (10, 11, 9, 7, 8, 6)]
        assert {v: cl.parent[v] for v in range(6, 12)} == {6: 4, 7: 3, 8: 3, 9: 3, 10: 1, 11: 2}
        assert ledger.spines[2].groups == ((10, 11, 9), (7, 8, 6))
        assert [b.cycle for b in cl.bowls] == [(10, 11, 9), (7, 8, 6)]
        assert ledger.wires == {0: {(0, 6), (0, 7), (0, 9), (0, 10)}}
        assert ledger.bridges == [((2, 0), (7, 9))]
        assert not ledger.piles_left and not ledger.piles_right
        assert not ledger.dummy_added
        assert [(t.upper_path, t.lower_vertex) for t in cl.triangles] == [
            ((0, 1, 2), 10), ((2, 3), 11), ((3, 4), 8),
        ]
        assert cl.bad_vertices == {0, 7, 8, 10, 11}
        assert row_crossings(cl) == []
        assert check_edge_conservation(cl, ledger, rr.graph.edges) == []

    def test_wires_join_consecutive_layers(self, two_bowls):
        rr = reform(two_bowls)
        for m, edges in rr.ledger.wires.items():
            for e in edges:
                assert m in e
                other = e[0] if e[1] == m else e[1]
                assert rr.cl.layer(other) == rr.cl.layer(m) + 1
                assert rr.cl.parent[other] != m

    def test_outer_chord_is_subdivided(self, c4):
        tg, tmap = triangulate(c4)
        rr = reform(tg)
        assert rr.batches == 1
        assert rr.graph.vertex_count == 5
        assert rr.cl.layers[1] == (4,)
        assert rr.smap.subdivision_vertices == {4: (0, 2)}
        assert contract(rr.graph, rr.smap) == tg.edge_set
        total = tmap.then(rr.smap)
        assert total.real_edges(rr.graph.edges) == c4.edge_set

    def test_rejects_untriangulated(self, c4):
        with pytest.raises(NotTriangulated):
            reform(c4)

    def test_rejects_bad_embedding(self, k4):
        rotation = list(k4.rotation)
        rotation[3] = tuple(reversed(rotation[3]))
        with pytest.raises(EmbeddingInvalid):
            reform(PlaneGraph(4, k4.edges, tuple(rotation), k4.outer_face))

    def test_serializes(self, w6):
        data = reform(w6).to_dict()
        assert data['layers'] == [[1, 5, 4, 3, 2], [0]]
        assert data['bad_vertices'] == [0, 1]
        assert set(data) >= {'layers', 'frames', 'kept_edges', 'ledger', 'subdivision'}


class TestRegions:
    def test_maximum_region_of_k4(self, k4):
        cl = reform(k4).cl
        assert enumerate_regions(cl, OUTER) == [Region(OUTER, (OUTER, 0), (OUTER, 1), frozenset({2, 3}))]

    def test_maximum_region_of_wheel(self, w6):
        cl = reform(w6).cl
        assert enumerate_regions(cl, OUTER) == [
            Region(OUTER, (OUTER, 1), (OUTER, 2), frozenset({5, 4, 3, 0}))
        ]

    def test_leaf_root_has_empty_region(self, w6):
        cl = reform(w6).cl
        (region,) = enumerate_regions(cl, 3)
        assert not region.members

    def test_unknown_root(self, k4):
        with pytest.raises(RootNotFound):
            enumerate_regions(reform(k4).cl, 99)


@PROPERTY_SETTINGS
@given(n=st.integers(min_value=4, max_value=40), seed=st.integers(min_value=0, max_value=10_000))
def test_reform_invariants(n, seed):
    g = random_triangulation(n, seed)
    rr = reform(g)
    assert validate_embedding(rr.graph).passed
    assert contract(rr.graph, rr.smap) == g.edge_set
    assert row_crossings(rr.cl) == []
    assert check_edge_conservation(rr.cl, rr.ledger, rr.graph.edges) == []
    assert sorted(rr.cl.vertices) == list(range(rr.graph.vertex_count))
    for v in rr.cl.vertices:
        assert rr.cl.layer(rr.cl.parent[v]) == rr.cl.layer(v) - 1
    assert set(rr.ledger.wires) <= rr.cl.bad_vertices
    for m, edges in rr.ledger.wires.items():
        assert all(rr.cl.layer(u) != rr.cl.layer(v) for u, v in edges)


def test_some_triangulation_has_wires():
    assert any(reform(random_triangulation(30, seed)).ledger.wires for seed in range(10))


def test_contract_round_trip_on_many_instances():
    for seed in range(1000):
        g = random_triangulation(4 + seed % 9, seed)
        rr = reform(g)
        assert contract(rr.graph, rr.smap) == g.edge_set, seed


def test_cycle_reform_after_triangulation():
    tg, _ = triangulate(cycle_graph(6))
    rr = reform(tg)
    assert check_edge_conservation(rr.cl, rr.ledger, rr.graph.edges) == []
    assert contract(rr.graph, rr.smap) == tg.edge_set
