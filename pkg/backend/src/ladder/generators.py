# backend/src/ladder/generators.py
"""
Generadores deterministas de grafos planos (triangulaciones aleatorias,
ruedas y rejillas). Toda la aleatoriedad pasa por random.Random(seed).
"""

import logging
import random
from typing import Dict, List, Tuple

from .errors import BadParams
from .plane_graph import PlaneGraph

logger = logging.getLogger(__name__)

KINDS = ('triangulation', 'grid', 'wheel')


def random_triangulation(n: int, seed: int) -> PlaneGraph:
    """
    Triangulación aleatoria de n vértices.

    Parte del triángulo (0,1,2), inserta cada vértice nuevo en una cara
    interna elegida al azar y termina con unas 2n vueltas de flips.

    Raises:
        BadParams: n < 3
    """
    if n < 3:
        raise BadParams(f"A triangulation needs n >= 3, got {n}")
    rng = random.Random(seed)
    faces: List[Tuple[int, int, int]] = [(0, 1, 2)]
    for v in range(3, n):
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        faces[i] = (a, b, v)
        faces.append((b, c, v))
        faces.append((c, a, v))

    adjacency = {v: set() for v in range(n)}
    for face in faces:
        for i in range(3):
            a, b = face[i], face[(i + 1) % 3]
            adjacency[a].add(b)
            adjacency[b].add(a)

    flips = 0
    for _ in range(2 * n):
        owner: Dict[Tuple[int, int], int] = {}
        for fi, face in enumerate(faces):
            for i in range(3):
                owner[(face[i], face[(i + 1) % 3])] = fi
        fi = rng.randrange(len(faces))
        k = rng.randrange(3)
        face = faces[fi]
        a, b, c = face[k], face[(k + 1) % 3], face[(k + 2) % 3]
        other = owner.get((b, a))
        if other is None:
            continue
        d = next(x for x in faces[other] if x not in (a, b))
        if c == d or d in adjacency[c]:
            continue
        faces[fi] = (a, d, c)
        faces[other] = (d, b, c)
        adjacency[a].discard(b)
        adjacency[b].discard(a)
        adjacency[c].add(d)
        adjacency[d].add(c)
        flips += 1

    g = PlaneGraph.from_faces(n, faces, (0, 2, 1))
    logger.debug(f"[CORPUS] Triangulation n={n} seed={seed}: {len(g.edges)} edges, {flips} flips")
    return g


def wheel(n: int) -> PlaneGraph:
    """
    Rueda de n vértices: eje 0 y aro 1..n-1.

    Raises:
        BadParams: n < 4
    """
    if n < 4:
        raise BadParams(f"A wheel needs n >= 4, got {n}")
    rim = list(range(1, n))
    faces = [(0, rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
    return PlaneGraph.from_faces(n, faces, tuple(reversed(rim)))


def grid(side: int) -> PlaneGraph:
    """
    Rejilla side x side; el vértice (i, j) tiene id i*side + j.

    Raises:
        BadParams: side < 2
    """
    if side < 2:
        raise BadParams(f"A grid needs side >= 2, got {side}")

    def vid(i: int, j: int) -> int:
        return i * side + j

    faces = [
        (vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j))
        for i in range(side - 1)
        for j in range(side - 1)
    ]
    boundary = (
        [vid(0, j) for j in range(side)]
        + [vid(i, side - 1) for i in range(1, side)]
        + [vid(side - 1, j) for j in range(side - 2, -1, -1)]
        + [vid(i, 0) for i in range(side - 2, 0, -1)]
    )
    return PlaneGraph.from_faces(side * side, faces, tuple(reversed(boundary)))


def generate(kind: str, n: int, seed: int) -> PlaneGraph:
    """
    Punto de entrada por tipo; para 'grid', n es el lado.

    Raises:
        BadParams: Tipo desconocido o n inválido
    """
    if kind == 'triangulation':
        return random_triangulation(n, seed)
    if kind == 'wheel':
        return wheel(n)
    if kind == 'grid':
        return grid(n)
    raise BadParams(f"Unknown generator '{kind}', expected one of {', '.join(KINDS)}")

