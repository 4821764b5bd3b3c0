"""
Pruebas de los generadores deterministas.
"""

import pytest

from ladder.errors import BadParams
from ladder.formats import write_graph
from ladder.generators import generate, grid, random_triangulation, wheel
from ladder.plane_graph import validate_embedding


@pytest.mark.parametrize('n', [3, 4, 10, 50])
def test_random_triangulation_is_maximal_planar(n):
    g = random_triangulation(n, 7)
    report = validate_embedding(g)
    assert report.passed
    assert len(g.edges) == 3 * n - 6
    assert all(len(f) == 3 for f in report.faces)
    assert g.outer_face == (0, 2, 1)


def test_random_triangulation_is_deterministic():
    assert write_graph(random_triangulation(50, 7)) == write_graph(random_triangulation(50, 7))
    assert random_triangulation(50, 7) != random_triangulation(50, 8)


def test_wheel(w6):
    assert w6.vertex_count == 6
    assert len(w6.edges) == 10
    assert len(w6.adjacency[0]) == 5
    assert w6.outer_face == (5, 4, 3, 2, 1)
    assert validate_embedding(w6).passed


def test_grid():
    g = grid(4)
    assert g.vertex_count == 16
    assert len(g.edges) == 24
    report = validate_embedding(g)
    assert report.passed
    assert report.face_count == 10


@pytest.mark.parametrize('kind, n', [('wheel', 3), ('grid', 1), ('triangulation', 2), ('star', 5)])
def test_bad_params(kind, n):
    with pytest.raises(BadParams):
        generate(kind, n, 0)
