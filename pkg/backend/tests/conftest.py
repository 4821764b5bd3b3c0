"""
Configuración común de pytest: pone backend/src en el path y define
grafos pequeños reutilizados por varios módulos de prueba.
"""

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from ladder.generators import random_triangulation, wheel  # noqa: E402
from ladder.layering import OUTER, CompositeLayerlike  # noqa: E402
from ladder.plane_graph import PlaneGraph, norm  # noqa: E402

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


def cycle_graph(n: int) -> PlaneGraph:
    """Ciclo C_n: una cara interna y la externa"""
    inner = tuple(range(n))
    return PlaneGraph.from_faces(n, [inner], tuple(reversed(inner)))


def layered(rows, edges) -> CompositeLayerlike:
    """
    Estructura por capas escrita a mano: filas de vértices y aristas.
    El padre de cada vértice es su vecino superior más a la izquierda.
    """
    layer_of = {v: k for k, row in enumerate(rows, start=1) for v in row}
    position = {v: i for row in rows for i, v in enumerate(row)}
    adjacency = {v: set() for v in layer_of}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    parent = {v: OUTER for v in rows[0]}
    children = {OUTER: tuple(rows[0])}
    for k, row in enumerate(rows[1:], start=2):
        for v in row:
            ups = sorted((u for u in adjacency[v] if layer_of[u] == k - 1), key=position.get)
            parent[v] = ups[0]
    for v in layer_of:
        children[v] = tuple(x for row in rows for x in row if parent.get(x) == v)
    return CompositeLayerlike(
        layer_of=layer_of,
        layers=[tuple(row) for row in rows],
        position=position,
        parent=parent,
        children=children,
        frames=[],
        kept_edges=frozenset(norm(u, v) for u, v in edges),
        triangles=[],
        bowls=[],
        adjacency={v: frozenset(s) for v, s in adjacency.items()},
        graph=None,
    )


@pytest.fixture
def k4():
    return random_triangulation(4, 0)


@pytest.fixture
def w6():
    return wheel(6)


@pytest.fixture
def c4():
    return cycle_graph(4)
