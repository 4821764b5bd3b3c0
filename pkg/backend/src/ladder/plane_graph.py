# backend/src/ladder/plane_graph.py
"""
Grafos planos con encaje combinatorio.

El encaje se da como sistema de rotación: para cada vértice, sus aristas
incidentes en orden horario. El recorrido de caras sigue el dardo (u→v)
hacia (v→w), donde w es el sucesor horario de u alrededor de v; con esta
regla las caras internas se recorren en sentido antihorario y la cara
externa en sentido horario.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import (
    Disconnected,
    MalformedRotation,
    NoHostTriangle,
    NotPlanarEmbedding,
    TooSmall,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Face = Tuple[int, ...]


def norm(u: int, v: int) -> Edge:
    """Arista no dirigida en forma canónica (menor, mayor)"""
    return (u, v) if u < v else (v, u)


def same_cycle(a: Sequence[int], b: Sequence[int], oriented: bool = False) -> bool:
    """True si a y b son la misma secuencia cíclica (en cualquier sentido salvo oriented)."""
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = list(b) + list(b)
    k = len(a)
    forward = list(a)
    backward = list(reversed(a))
    for start in range(k):
        window = doubled[start:start + k]
        if window == forward or (not oriented and window == backward):
            return True
    return False


@dataclass(frozen=True)
class PlaneGraph:
    """Grafo plano: aristas, rotación horaria (ids de arista) y cara externa"""
    vertex_count: int
    edges: Tuple[Edge, ...]
    rotation: Tuple[Tuple[int, ...], ...]
    outer_face: Tuple[int, ...]

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {norm(u, v): i for i, (u, v) in enumerate(self.edges)}

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(norm(u, v) for u, v in self.edges)

    @cached_property
    def cw_neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        """Rotación expresada como vecinos (el grafo es simple)."""
        result = []
        for v, ids in enumerate(self.rotation):
            row = []
            for eid in ids:
                a, b = self.edges[eid]
                row.append(b if a == v else a)
            result.append(tuple(row))
        return tuple(result)

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adj: List[set] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph

    @classmethod
    def from_neighbor_rotation(
        cls,
        vertex_count: int,
        neighbors: Sequence[Sequence[int]],
        outer_face: Sequence[int],
    ) -> 'PlaneGraph':
        """
        Construye el grafo a partir de rotaciones expresadas como vecinos.

        Los ids de arista son posiciones en la lista ordenada de aristas, así
        que el resultado no depende del orden de construcción.
        """
        edge_list = sorted({norm(v, u) for v, row in enumerate(neighbors) for u in row})
        index = {e: i for i, e in enumerate(edge_list)}
        rotation = tuple(
            tuple(index[norm(v, u)] for u in neighbors[v]) for v in range(vertex_count)
        )
        return cls(vertex_count, tuple(edge_list), rotation, tuple(outer_face))

    @classmethod
    def from_faces(
        cls,
        vertex_count: int,
        inner_faces: Sequence[Sequence[int]],
        outer_face: Sequence[int],
    ) -> 'PlaneGraph':
        """
        Construye la rotación desde una lista de caras.

        Args:
            vertex_count: Número de vértices
            inner_faces: Caras internas en sentido antihorario
            outer_face: Cara externa en sentido horario

        Raises:
            MalformedRotation: Si las caras no cierran una rotación por vértice
        """
        successor: List[Dict[int, int]] = [dict() for _ in range(vertex_count)]
        for face in list(inner_faces) + [outer_face]:
            k = len(face)
            for i in range(k):
                prev, mid, nxt = face[i - 1], face[i], face[(i + 1) % k]
                if prev in successor[mid]:
                    raise MalformedRotation(f"Dart ({prev},{mid}) used by two faces")
                successor[mid][prev] = nxt
        neighbors = []
        for v in range(vertex_count):
            succ = successor[v]
            if not succ:
                neighbors.append([])
                continue
            start = min(succ)
            row = [start]
            current = succ[start]
            while current != start:
                row.append(current)
                if current not in succ or len(row) > len(succ):
                    raise MalformedRotation(f"Faces do not close a rotation at vertex {v}")
                current = succ[current]
            if len(row) != len(succ):
                raise MalformedRotation(f"Faces leave vertex {v} with a split rotation")
            neighbors.append(row)
        return cls.from_neighbor_rotation(vertex_count, neighbors, outer_face)

    def to_dict(self) -> dict:
        return {
            'n': self.vertex_count,
            'edges': [list(e) for e in self.edges],
            'rotation': [list(r) for r in self.rotation],
            'outer_face': list(self.outer_face),
        }


@dataclass(frozen=True)
class SubdivisionMap:
    """Bitácora de subdivisiones y aristas ficticias para poder contraer"""
    original_edges: FrozenSet[Edge]
    subdivision_vertices: Mapping[int, Edge] = field(default_factory=dict)
    dummy_edges: FrozenSet[Edge] = frozenset()

    def then(self, other: 'SubdivisionMap') -> 'SubdivisionMap':
        """Compone con el mapa de la etapa siguiente"""
        merged = dict(self.subdivision_vertices)
        merged.update(other.subdivision_vertices)
        return SubdivisionMap(
            original_edges=self.original_edges,
            subdivision_vertices=merged,
            dummy_edges=self.dummy_edges | other.dummy_edges,
        )

    def real_edges(self, edges: Iterable[Edge]) -> FrozenSet[Edge]:
        """
        Aristas que forman parte del camino de alguna arista original.

        Una arista creada al subdividir pertenece a la arista subdividida por
        su extremo más reciente (el de id mayor); las ficticias y todo lo que
        desciende de ellas se descarta.
        """
        memo: Dict[Edge, bool] = {}

        def real(e: Edge) -> bool:
            if e not in memo:
                w = max(e)
                if e in self.dummy_edges:
                    memo[e] = False
                elif w in self.subdivision_vertices:
                    memo[e] = real(self.subdivision_vertices[w])
                else:
                    memo[e] = True
            return memo[e]

        return frozenset(e for e in (norm(u, v) for u, v in edges) if real(e))

    def to_dict(self) -> dict:
        return {
            'original_edges': sorted(list(e) for e in self.original_edges),
            'subdivision_vertices': {
                str(w): list(e) for w, e in sorted(self.subdivision_vertices.items())
            },
            'dummy_edges': sorted(list(e) for e in self.dummy_edges),
        }


@dataclass
class EmbeddingReport:
    """Resultado de validate_embedding"""
    faces: List[Face]
    outer_index: Optional[int]
    component_count: int
    euler_ok: bool
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.euler_ok and (self.outer_index is not None or not self.faces)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def raise_for_verdict(self):
        if not self.passed:
            raise NotPlanarEmbedding(self.reason or "embedding rejected")


# ============================================================================
# RECORRIDO DE CARAS
# ============================================================================

def _trace(vertex_count: int, neighbors: Sequence[Sequence[int]]) -> List[Face]:
    position = [{u: i for i, u in enumerate(row)} for row in neighbors]
    seen = set()
    faces: List[Face] = []
    for u in range(vertex_count):
        for v in sorted(neighbors[u]):
            if (u, v) in seen:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append(a)
                row = neighbors[b]
                c = row[(position[b][a] + 1) % len(row)]
                a, b = b, c
            faces.append(tuple(walk))
    return faces


def trace_faces(g: PlaneGraph) -> List[Face]:
    """Caras del encaje como recorridos de vértices"""
    return _trace(g.vertex_count, g.cw_neighbors)


def _check_structure(g: PlaneGraph):
    n = g.vertex_count
    if len(g.rotation) != n:
        raise MalformedRotation(f"Rotation lists {len(g.rotation)} vertices, expected {n}")
    seen_edges = set()
    for eid, (u, v) in enumerate(g.edges):
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedRotation(f"Edge {eid} ({u},{v}) out of range")
        if u == v:
            raise MalformedRotation(f"Edge {eid} is a self-loop at vertex {u}")
        key = norm(u, v)
        if key in seen_edges:
            raise MalformedRotation(f"Edge {eid} ({u},{v}) is a parallel edge")
        seen_edges.add(key)
    incident: List[List[int]] = [[] for _ in range(n)]
    for eid, (u, v) in enumerate(g.edges):
        incident[u].append(eid)
        incident[v].append(eid)
    for v, ids in enumerate(g.rotation):
        for eid in ids:
            if not 0 <= eid < len(g.edges) or v not in g.edges[eid]:
                raise MalformedRotation(f"Vertex {v} lists edge {eid}, which is not incident to it")
        if len(set(ids)) != len(ids):
            raise MalformedRotation(f"Vertex {v} lists an edge twice")
        missing = set(incident[v]) - set(ids)
        if missing:
            raise MalformedRotation(f"Edge {min(missing)} missing from the rotation of vertex {v}")
    for v in g.outer_face:
        if not 0 <= v < n:
            raise MalformedRotation(f"Outer face vertex {v} out of range")


def validate_embedding(g: PlaneGraph) -> EmbeddingReport:
    """
    Valida el sistema de rotación y la cara externa.

    Args:
        g: Grafo plano de entrada

    Returns:
        EmbeddingReport: Caras trazadas y veredicto (Euler por componente y
        cara externa presente entre las caras)

    Raises:
        MalformedRotation: Rotación estructuralmente inválida
    """
    _check_structure(g)
    faces = trace_faces(g)

    graph = g.to_networkx()
    components = list(nx.connected_components(graph))
    face_owner: Dict[int, int] = {}
    for ci, comp in enumerate(components):
        for v in comp:
            face_owner[v] = ci
    faces_per_component = [0] * len(components)
    for face in faces:
        faces_per_component[face_owner[face[0]]] += 1

    euler_ok = True
    reason = ""
    for ci, comp in enumerate(components):
        edge_count = graph.subgraph(comp).number_of_edges()
        if edge_count == 0:
            continue
        total = len(comp) - edge_count + faces_per_component[ci]
        if total != 2:
            euler_ok = False
            reason = f"Euler count V-E+F={total} on the component of vertex {min(comp)}"
            break

    outer_index = None
    for oriented in (True, False):
        for i, face in enumerate(faces):
            if same_cycle(face, g.outer_face, oriented=oriented):
                outer_index = i
                break
        if outer_index is not None:
            break
    if euler_ok and outer_index is None and faces:
        reason = f"Outer face {list(g.outer_face)} is not a traced face"

    report = EmbeddingReport(faces, outer_index, len(components), euler_ok, reason)
    logger.debug(f"[EMBED] {len(faces)} faces, verdict={'pass' if report.passed else 'fail'}")
    return report


# ============================================================================
# TRIANGULACIÓN
# ============================================================================

def _insert_chord(neighbors: List[List[int]], walk: Face, i: int, j: int):
    """Inserta la diagonal (walk[i], walk[j]) dentro de la cara walk."""
    a, b = walk[i], walk[j]
    before_a = walk[i - 1]
    before_b = walk[j - 1]
    row = neighbors[a]
    row.insert(row.index(before_a) + 1, b)
    row = neighbors[b]
    row.insert(row.index(before_b) + 1, a)


def _pick_diagonal(walk: Face, adjacency: List[set]) -> Tuple[int, int]:
    k = len(walk)
    apex = min(walk)
    i = walk.index(apex)
    j = (i + 2) % k
    if walk[j] != apex and walk[j] not in adjacency[apex]:
        return i, j
    best = None
    for p in range(k):
        for q in range(p + 2, k):
            if p == 0 and q == k - 1:
                continue
            x, y = walk[p], walk[q]
            if x == y or y in adjacency[x]:
                continue
            key = (min(x, y), max(x, y), p, q)
            if best is None or key < best:
                best = key
    if best is None:
        raise NotPlanarEmbedding(f"Face {list(walk)} admits no diagonal")
    return best[2], best[3]


def _close_outer_walk(neighbors: List[List[int]], adjacency: List[set], walk: Face) -> Tuple[Face, List[Edge]]:
    """
    Convierte el recorrido externo en un ciclo simple.

    Mientras un vértice w[i] se repita en el recorrido, se une w[i-1] con
    w[i+1] por la cara externa; el triángulo (w[i-1], w[i], w[i+1]) pasa a
    ser una cara interna y esa aparición de w[i] sale del recorrido.

    Raises:
        NotPlanarEmbedding: No hay ninguna aparición repetida que se pueda puentear
    """
    walk = list(walk)
    added: List[Edge] = []
    while len(set(walk)) != len(walk):
        k = len(walk)
        for i in range(k):
            prev, mid, nxt = walk[i - 1], walk[i], walk[(i + 1) % k]
            if walk.count(mid) > 1 and prev != nxt and nxt not in adjacency[prev]:
                break
        else:
            raise NotPlanarEmbedding(f"Outer walk {walk} cannot be closed into a simple cycle")
        row = neighbors[nxt]
        row.insert(row.index(mid) + 1, prev)
        row = neighbors[prev]
        row.insert(row.index(mid), nxt)
        adjacency[prev].add(nxt)
        adjacency[nxt].add(prev)
        added.append(norm(prev, nxt))
        del walk[i]
    return tuple(walk), added


def triangulate(g: PlaneGraph) -> Tuple[PlaneGraph, SubdivisionMap]:
    """
    Triangula todas las caras internas con abanicos desde el vértice menor.

    Si el recorrido de la cara externa repite vértices (árboles, vértices
    de corte) primero se cierra en un ciclo simple; fuera de eso la cara
    externa no se toca. Las aristas añadidas quedan registradas como
    dummy_edges del mapa devuelto.

    Raises:
        TooSmall: Menos de 3 vértices
        Disconnected: El grafo no es conexo
        NotPlanarEmbedding: El encaje no pasa la validación
    """
    if g.vertex_count < 3:
        raise TooSmall(f"Graph has {g.vertex_count} vertices, need at least 3")
    report = validate_embedding(g)
    if report.component_count != 1:
        raise Disconnected(f"Graph has {report.component_count} connected components")
    report.raise_for_verdict()

    neighbors = [list(row) for row in g.cw_neighbors]
    adjacency = [set(row) for row in neighbors]
    pending = [f for i, f in enumerate(report.faces) if i != report.outer_index]
    pending.reverse()
    outer_face = tuple(g.outer_face)
    traced = report.faces[report.outer_index]
    dummies: List[Edge] = []
    if len(set(traced)) != len(traced):
        outer_face, dummies = _close_outer_walk(neighbors, adjacency, traced)
        logger.info(f"[TRIANG] Outer walk closed with {len(dummies)} edges")

    while pending:
        walk = pending.pop()
        if len(walk) <= 3:
            continue
        i, j = _pick_diagonal(walk, adjacency)
        if i > j:
            i, j = j, i
        _insert_chord(neighbors, walk, i, j)
        a, b = walk[i], walk[j]
        adjacency[a].add(b)
        adjacency[b].add(a)
        dummies.append(norm(a, b))
        first = walk[i:j + 1]
        second = walk[j:] + walk[:i + 1]
        pending.append(tuple(second))
        pending.append(tuple(first))

    result = PlaneGraph.from_neighbor_rotation(g.vertex_count, neighbors, outer_face)
    logger.info(f"[TRIANG] Added {len(dummies)} dummy edges")
    return result, SubdivisionMap(original_edges=g.edge_set, dummy_edges=frozenset(dummies))


# ============================================================================
# ELIMINACIÓN DE CUERDAS
# ============================================================================

def find_chords(g: PlaneGraph, cycles: Sequence[Sequence[int]]) -> List[Edge]:
    """Aristas que unen vértices no consecutivos de alguno de los ciclos dados"""
    found = set()
    for cycle in cycles:
        k = len(cycle)
        if k < 4:
            continue
        position = {v: i for i, v in enumerate(cycle)}
        for v in cycle:
            for u in g.adjacency[v]:
                if u <= v or u not in position:
                    continue
                delta = abs(position[u] - position[v])
                if delta not in (1, k - 1):
                    found.add(norm(u, v))
    return sorted(found)


def _outer_darts(g: PlaneGraph) -> set:
    """Dardos de la cara externa tal como la recorre el trazado"""
    faces = trace_faces(g)
    for oriented in (True, False):
        for face in faces:
            if same_cycle(face, g.outer_face, oriented=oriented):
                return {(face[i], face[(i + 1) % len(face)]) for i in range(len(face))}
    return set()


def _host_face(neighbors: List[List[int]], a: int, b: int, outer_darts: set):
    """
    Cara interna incidente a (a,b) en la que colocar el vértice nuevo,
    devuelta como (x, y, c) con c el vértice que sigue a y en la cara.
    Se prefieren las caras triangulares.
    """
    candidates = []
    for x, y in ((a, b), (b, a)):
        if (x, y) in outer_darts:
            continue
        row_y = neighbors[y]
        c = row_y[(row_y.index(x) + 1) % len(row_y)]
        if c == x:
            continue
        row_c = neighbors[c]
        triangle = row_c[(row_c.index(y) + 1) % len(row_c)] == x
        candidates.append((not triangle, c, x, y))
    if not candidates:
        return None
    _, c, x, y = min(candidates)
    return x, y, c


def subdivide_chords(
    g: PlaneGraph, layering_cycles: Sequence[Sequence[int]]
) -> Tuple[PlaneGraph, SubdivisionMap]:
    """
    Reemplaza cada cuerda de los ciclos dados por un camino de longitud 2.

    El vértice nuevo w' se coloca dentro de una cara interna incidente a
    la cuerda (un triángulo si lo hay) y se une a sus extremos y al vértice c
    que sigue en la cara; la arista (c, w') se registra como ficticia.

    Args:
        g: Grafo plano validado
        layering_cycles: Ciclos (listas de vértices) a limpiar

    Returns:
        Tuple[PlaneGraph, SubdivisionMap]: Grafo sin cuerdas en los ciclos y
        la bitácora de reemplazos

    Raises:
        NoHostTriangle: Una cuerda no bordea ninguna cara interna
    """
    chords = find_chords(g, layering_cycles)
    if not chords:
        return g, SubdivisionMap(original_edges=g.edge_set)

    neighbors = [list(row) for row in g.cw_neighbors]
    n = g.vertex_count
    outer_darts = _outer_darts(g)
    subdivisions: Dict[int, Edge] = {}
    dummies: List[Edge] = []
    for a, b in chords:
        host = _host_face(neighbors, a, b, outer_darts)
        if host is None:
            raise NoHostTriangle(f"Chord ({a},{b}) has no incident inner face")
        x, y, c = host
        w = n
        n += 1
        row = neighbors[x]
        row[row.index(y)] = w
        row = neighbors[y]
        row[row.index(x)] = w
        row = neighbors[c]
        row.insert(row.index(y) + 1, w)
        neighbors.append([x, c, y])
        subdivisions[w] = norm(a, b)
        dummies.append(norm(c, w))
        logger.debug(f"[CHORD] Chord ({a},{b}) replaced through {w} inside ({x},{y},{c})")

    result = PlaneGraph.from_neighbor_rotation(n, neighbors, g.outer_face)
    logger.info(f"[CHORD] Subdivided {len(chords)} chords")
    return result, SubdivisionMap(
        original_edges=g.edge_set,
        subdivision_vertices=subdivisions,
        dummy_edges=frozenset(dummies),
    )


def contract(g: PlaneGraph, smap: SubdivisionMap) -> FrozenSet[Edge]:
    """
    Deshace subdivisiones (la más reciente primero) y borra las ficticias.

    Returns:
        FrozenSet[Edge]: Conjunto de aristas original
    """
    edges = set(g.edge_set)
    for w in reversed(list(smap.subdivision_vertices)):
        a, b = smap.subdivision_vertices[w]
        edges = {e for e in edges if w not in e}
        edges.add(norm(a, b))
    edges -= set(smap.dummy_edges)
    return frozenset(edges)
