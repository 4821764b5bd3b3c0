# backend/src/ladder/layering.py
"""
Reforma de un grafo plano triangulado en un grafo compuesto por capas.

Capa 1 es el ciclo externo en orden horario desde su vértice menor; las
demás capas salen de la distancia BFS al ciclo externo. Cada capa se ordena
concatenando las listas de hijos de la capa anterior y se parte en ciclos
internos maximales unidos por puentes. Las aristas que no se conservan van
al libro de aristas borradas y se añaden aristas ficticias donde hace falta:

- wires: aristas hacia abajo de un vértice malo (inicio de ciclo o vértice
  inferior de un triángulo) que no son aristas del árbol
- bridges: aristas de una capa que no unen vecinos de fila de un grupo
- piles: aristas entre capas que cruzarían otra conservada
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import EmbeddingInvalid, NonTermination, NotTriangulated, RootNotFound
from .plane_graph import (
    Edge,
    PlaneGraph,
    SubdivisionMap,
    find_chords,
    norm,
    subdivide_chords,
    validate_embedding,
)

logger = logging.getLogger(__name__)

OUTER = -1


# ============================================================================
# TIPOS
# ============================================================================

@dataclass(frozen=True)
class DownTriangle:
    """Camino superior (l, ..., r) y vértice inferior m"""
    upper_path: Tuple[int, ...]
    lower_vertex: int

    @property
    def bad_vertex(self) -> int:
        return self.lower_vertex


@dataclass(frozen=True)
class Bowl:
    cycle: Tuple[int, ...]
    layer: int


@dataclass(frozen=True)
class Frame:
    """Marco por capas: exterior, de un bowl o de un triángulo"""
    index: int
    kind: str
    first_layer: Tuple[int, ...]
    layer: int
    last_layer: int
    parent: Optional[int]

    def to_dict(self) -> dict:
        return {
            'index': self.index,
            'kind': self.kind,
            'first_layer': list(self.first_layer),
            'layers': [self.layer, self.last_layer],
            'parent': self.parent,
        }


@dataclass(frozen=True)
class Spine:
    """Grupos de una capa con sus joints (extremos) y hoops (padres de los joints)"""
    layer: int
    groups: Tuple[Tuple[int, ...], ...]
    joints: Tuple[Tuple[int, int], ...]
    hoops: Tuple[Tuple[int, int], ...]


@dataclass
class DeletedEdgeLedger:
    wires: Dict[int, Set[Edge]] = field(default_factory=dict)
    bridges: List[Tuple[Tuple[int, int], Edge]] = field(default_factory=list)
    piles_left: Dict[int, Set[Edge]] = field(default_factory=dict)
    piles_right: Dict[int, Set[Edge]] = field(default_factory=dict)
    dummy_added: Set[Edge] = field(default_factory=set)
    spines: Dict[int, Spine] = field(default_factory=dict)

    def wire_edges(self) -> Set[Edge]:
        return {e for edges in self.wires.values() for e in edges}

    def bridge_edges(self) -> Set[Edge]:
        return {e for _, e in self.bridges}

    def pile_edges(self) -> Set[Edge]:
        left = {e for edges in self.piles_left.values() for e in edges}
        right = {e for edges in self.piles_right.values() for e in edges}
        return left | right

    def deleted_edges(self) -> Set[Edge]:
        return self.wire_edges() | self.bridge_edges() | self.pile_edges()

    @property
    def is_empty(self) -> bool:
        return not (self.wires or self.bridges or self.piles_left or self.piles_right or self.dummy_added)

    def to_dict(self) -> dict:
        def keyed(table):
            return {str(k): sorted(list(e) for e in v) for k, v in sorted(table.items())}

        return {
            'wires': keyed(self.wires),
            'bridges': [
                {'spine': list(key), 'edge': list(e)} for key, e in sorted(self.bridges)
            ],
            'piles_left': keyed(self.piles_left),
            'piles_right': keyed(self.piles_right),
            'dummies': sorted(list(e) for e in self.dummy_added),
            'spines': {
                str(k): {
                    'groups': [list(g) for g in s.groups],
                    'joints': [list(j) for j in s.joints],
                    'hoops': [list(h) for h in s.hoops],
                }
                for k, s in sorted(self.spines.items())
            },
        }


@dataclass
class CompositeLayerlike:
    layer_of: Dict[int, int]
    layers: List[Tuple[int, ...]]
    position: Dict[int, int]
    parent: Dict[int, int]
    children: Dict[int, Tuple[int, ...]]
    frames: List[Frame]
    kept_edges: FrozenSet[Edge]
    triangles: List[DownTriangle]
    bowls: List[Bowl]
    adjacency: Dict[int, FrozenSet[int]]
    graph: PlaneGraph
    bad_vertices: FrozenSet[int] = frozenset()

    @property
    def order_in_layer(self) -> List[Tuple[int, ...]]:
        return self.layers

    @property
    def vertices(self) -> List[int]:
        return [v for row in self.layers for v in row]

    def layer(self, v: int) -> int:
        return 0 if v == OUTER else self.layer_of[v]

    def pos(self, v: int) -> int:
        return 0 if v == OUTER else self.position[v]

    def key(self, v: int) -> Tuple[int, int]:
        """Clave (capa, posición) para ordenar de arriba abajo, de izquierda a derecha"""
        return (self.layer(v), self.pos(v))

    def upper_neighbors(self, v: int) -> List[int]:
        k = self.layer_of[v]
        return sorted((u for u in self.adjacency[v] if self.layer_of[u] == k - 1), key=self.pos)

    def lower_neighbors(self, v: int) -> List[int]:
        k = self.layer_of[v]
        return sorted((u for u in self.adjacency[v] if self.layer_of[u] == k + 1), key=self.pos)

    def to_dict(self) -> dict:
        return {
            'layers': [list(row) for row in self.layers],
            'frames': [f.to_dict() for f in self.frames],
            'kept_edges': sorted(list(e) for e in self.kept_edges),
            'triangles': [
                {'upper_path': list(t.upper_path), 'lower_vertex': t.lower_vertex}
                for t in self.triangles
            ],
            'bowls': [list(b.cycle) for b in self.bowls],
            'bad_vertices': sorted(self.bad_vertices),
        }


@dataclass(frozen=True)
class Region:
    """Región entre dos caminos descendentes desde una raíz"""
    root: int
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    members: FrozenSet[int]

    def boundary(self) -> FrozenSet[int]:
        return frozenset(self.left) | frozenset(self.right)

    def to_dict(self) -> dict:
        return {
            'root': self.root,
            'left': list(self.left),
            'right': list(self.right),
            'members': sorted(self.members),
        }


@dataclass
class ReformResult:
    graph: PlaneGraph
    cl: CompositeLayerlike
    ledger: DeletedEdgeLedger
    smap: SubdivisionMap
    batches: int = 0

    def to_dict(self) -> dict:
        data = self.cl.to_dict()
        data['ledger'] = self.ledger.to_dict()
        data['subdivision'] = self.smap.to_dict()
        return data


# ============================================================================
# CAPAS Y ORDEN
# ============================================================================

def _outer_cycle(g: PlaneGraph, check_faces: bool = True) -> List[int]:
    report = validate_embedding(g)
    if not report.passed:
        raise EmbeddingInvalid(report.reason)
    for i, face in enumerate(report.faces):
        if check_faces and i != report.outer_index and len(face) != 3:
            raise NotTriangulated(f"Internal face {list(face)} has {len(face)} sides")
    walk = report.faces[report.outer_index]
    if len(set(walk)) != len(walk):
        raise NotTriangulated(f"Outer walk {list(walk)} repeats vertices")
    start = walk.index(min(walk))
    return list(walk[start:] + walk[:start])


def _crosses(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    """Segmentos entre dos filas dados como (pos superior, pos inferior)"""
    return (a[0] - b[0]) * (a[1] - b[1]) < 0


def _interleave(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    (p, q), (r, s) = sorted(a), sorted(b)
    return p < r < q < s or r < p < s < q


def _groups(row: Sequence[int], edges: Set[Edge]) -> List[Tuple[int, ...]]:
    groups: List[List[int]] = []
    for v in row:
        if groups and norm(groups[-1][-1], v) in edges:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [tuple(gr) for gr in groups]


def _closed(group: Tuple[int, ...], edges: Set[Edge]) -> bool:
    return len(group) >= 3 and norm(group[0], group[-1]) in edges


def _spine(graph: nx.Graph, row: Sequence[int], edges: Set[Edge]) -> Tuple[List[Tuple[int, ...]], Set[Edge]]:
    """
    Grupos de una fila y puentes entre sus ciclos.

    Un puente es una arista de corte del subgrafo inducido por la capa cuyos
    dos extremos están en ciclos de esa capa. Los grupos son los tramos de
    la fila unidos por aristas que no son puentes; un grupo cerrado es un
    ciclo interno maximal de la capa.
    """
    sub = graph.subgraph(row)
    cyclic = {v for comp in nx.biconnected_components(sub) if len(comp) >= 3 for v in comp}
    bridges = {norm(u, v) for u, v in nx.bridges(sub) if u in cyclic and v in cyclic}
    return _groups(row, edges - bridges), bridges


def _build_layers(g: PlaneGraph, outer: List[int]):
    """
    Capas BFS ordenadas por barrido de hijos.

    El padre de cada vértice es su vecino superior más a la izquierda,
    saltándose el vértice inicial de un ciclo de la capa superior mientras
    haya otro vecino superior; las aristas que ese vértice inicial pierde
    pasan a ser wires.
    """
    graph = g.to_networkx()
    edges = set(g.edge_set)
    distance = nx.multi_source_dijkstra_path_length(graph, set(outer))
    layer_of = {v: d + 1 for v, d in distance.items()}
    neighbors = g.cw_neighbors

    layers: List[Tuple[int, ...]] = [tuple(outer)]
    position = {v: i for i, v in enumerate(outer)}
    parent = {v: OUTER for v in outer}
    children: Dict[int, Tuple[int, ...]] = {OUTER: tuple(outer)}
    starts: Set[int] = set()
    depth = max(layer_of.values())

    for k in range(1, depth + 1):
        row = layers[k - 1]
        groups, _ = _spine(graph, row, edges)
        row_starts = {gr[0] for gr in groups if _closed(gr, edges)}
        starts |= row_starts
        lower = [v for v, lv in layer_of.items() if lv == k + 1]
        for x in lower:
            uppers = [u for u in neighbors[x] if layer_of[u] == k]
            free = [u for u in uppers if u not in row_starts] or uppers
            parent[x] = min(free, key=lambda u: position[u])
        next_row: List[int] = []
        for i, v in enumerate(row):
            ring = neighbors[v]
            reference = row[i - 1] if k == 1 else parent[v]
            kids: List[int] = []
            if ring:
                start = ring.index(reference) if reference in ring else 0
                for step in range(1, len(ring) + 1):
                    x = ring[(start - step) % len(ring)]
                    if layer_of[x] == k + 1 and parent[x] == v and x not in kids:
                        kids.append(x)
            children[v] = tuple(kids)
            next_row.extend(kids)
        if next_row:
            for i, v in enumerate(next_row):
                position[v] = i
            layers.append(tuple(next_row))
    return graph, layer_of, layers, position, parent, children, starts


def _layer_graph(g: PlaneGraph, check_faces: bool = True) -> Tuple[CompositeLayerlike, DeletedEdgeLedger]:
    outer = _outer_cycle(g, check_faces)
    graph, layer_of, layers, position, parent, children, starts = _build_layers(g, outer)
    edges = set(g.edge_set)
    ledger = DeletedEdgeLedger()
    kept: Set[Edge] = set()

    # aristas dentro de una capa
    group_index: Dict[int, int] = {}
    bowls: List[Bowl] = []
    for k, row in enumerate(layers, start=1):
        groups, bridges = _spine(graph, row, edges)
        for gi, gr in enumerate(groups):
            for v in gr:
                group_index[v] = gi
            for a, b in zip(gr, gr[1:]):
                kept.add(norm(a, b))
            if _closed(gr, edges):
                kept.add(norm(gr[0], gr[-1]))
                if k >= 2:
                    bowls.append(Bowl(gr, k))
        ledger.spines[k] = Spine(
            layer=k,
            groups=tuple(groups),
            joints=tuple((gr[0], gr[-1]) for gr in groups),
            hoops=tuple((parent[gr[0]], parent[gr[-1]]) for gr in groups),
        )

    same_layer = sorted(
        (e for e in edges if layer_of[e[0]] == layer_of[e[1]] and e not in kept),
        key=lambda e: (layer_of[e[0]], min(position[e[0]], position[e[1]]), max(position[e[0]], position[e[1]])),
    )
    for u, v in same_layer:
        key = (layer_of[u], min(group_index[u], group_index[v]))
        ledger.bridges.append((key, norm(u, v)))

    # vértices malos: inicio de cada ciclo y vértice inferior de cada triángulo
    triangles = _down_triangles(layers, layer_of, position, g.adjacency, edges)
    bad = frozenset(starts | {t.bad_vertex for t in triangles})
    for m in sorted(bad, key=lambda v: (layer_of[v], position[v])):
        below = {
            norm(m, x) for x in g.adjacency[m]
            if layer_of[x] == layer_of[m] + 1 and parent[x] != m
        }
        if below:
            ledger.wires[m] = below
    wired = ledger.wire_edges()

    # aristas entre capas contiguas
    segments: Dict[int, List[Tuple[int, int]]] = {}

    def try_keep(upper: int, lower: int) -> bool:
        k = layer_of[upper]
        seg = (position[upper], position[lower])
        if any(_crosses(seg, other) for other in segments.get(k, [])):
            return False
        segments.setdefault(k, []).append(seg)
        return True

    for x, p in parent.items():
        if p != OUTER:
            kept.add(norm(p, x))
            segments.setdefault(layer_of[p], []).append((position[p], position[x]))

    inter = []
    for u, v in edges:
        if layer_of[u] == layer_of[v] or norm(u, v) in kept or norm(u, v) in wired:
            continue
        upper, lower = (u, v) if layer_of[u] < layer_of[v] else (v, u)
        inter.append((layer_of[upper], position[lower], position[upper], upper, lower))
    inter.sort()
    rejected = []
    for _, _, _, upper, lower in inter:
        if try_keep(upper, lower):
            kept.add(norm(upper, lower))
        else:
            rejected.append((upper, lower))

    for upper, lower in rejected:
        kept_uppers = [
            u for u in g.adjacency[lower] if layer_of[u] == layer_of[lower] - 1 and norm(u, lower) in kept
        ]
        anchor = max(kept_uppers, key=lambda u: position[u])
        side = ledger.piles_left if position[upper] < position[anchor] else ledger.piles_right
        side.setdefault(lower, set()).add(norm(upper, lower))

    # aristas ficticias desde vértices sin hijos
    for k, row in enumerate(layers[:-1], start=1):
        below = layers[k]
        for v in row:
            if children[v]:
                continue
            left_lower = [x for x in below if position[parent[x]] < position[v]]
            if not left_lower:
                continue
            x = left_lower[-1]
            e = norm(v, x)
            if e in edges or e in kept:
                continue
            if try_keep(v, x):
                kept.add(e)
                ledger.dummy_added.add(e)

    adjacency_sets: Dict[int, Set[int]] = {v: set(g.adjacency[v]) for v in range(g.vertex_count)}
    for a, b in ledger.dummy_added:
        adjacency_sets[a].add(b)
        adjacency_sets[b].add(a)
    adjacency = {v: frozenset(s) for v, s in adjacency_sets.items()}

    frames = _frames(layers, layer_of, parent, children, bowls, triangles)

    cl = CompositeLayerlike(
        layer_of=layer_of,
        layers=layers,
        position=position,
        parent=parent,
        children=children,
        frames=frames,
        kept_edges=frozenset(kept),
        triangles=triangles,
        bowls=bowls,
        adjacency=adjacency,
        graph=g,
        bad_vertices=bad,
    )
    return cl, ledger


def _down_triangles(layers, layer_of, position, adjacency, edges) -> List[DownTriangle]:
    triangles = []
    for k in range(2, len(layers) + 1):
        row_above = layers[k - 2]
        for m in layers[k - 1]:
            ups = sorted((position[u] for u in adjacency[m] if layer_of[u] == k - 1))
            if len(ups) < 2 or ups[-1] - ups[0] + 1 != len(ups):
                continue
            path = tuple(row_above[i] for i in range(ups[0], ups[-1] + 1))
            if all(norm(a, b) in edges for a, b in zip(path, path[1:])):
                triangles.append(DownTriangle(path, m))
    return triangles


def _frames(layers, layer_of, parent, children, bowls, triangles) -> List[Frame]:
    def ancestors(v: int) -> List[int]:
        chain = [v]
        while parent.get(chain[-1], OUTER) != OUTER:
            chain.append(parent[chain[-1]])
        return chain

    def last_layer(roots: Iterable[int]) -> int:
        deepest = 0
        stack = list(roots)
        while stack:
            v = stack.pop()
            deepest = max(deepest, layer_of[v])
            stack.extend(children.get(v, ()))
        return deepest

    frames = [Frame(0, 'outer', tuple(layers[0]), 1, len(layers), None)]
    owner: Dict[int, int] = {}
    specs = [('bowl', b.cycle, b.layer) for b in bowls]
    specs += [('triangle', t.upper_path, layer_of[t.upper_path[0]]) for t in triangles]
    for kind, first, layer in specs:
        index = len(frames)
        host = None
        best_layer = 0
        for a in ancestors(first[0]):
            if a in owner and layer_of[a] > best_layer and owner[a] != index:
                host, best_layer = owner[a], layer_of[a]
        frames.append(Frame(index, kind, tuple(first), layer, last_layer(first), host if host is not None else 0))
        if kind == 'bowl':
            for v in first:
                owner.setdefault(v, index)
    return frames


# ============================================================================
# OPERACIONES PÚBLICAS
# ============================================================================

def reform(g: PlaneGraph) -> ReformResult:
    """
    Reforma G en un grafo compuesto por capas sobre una 1-subdivisión G¹.

    Cada pasada construye las capas, busca cuerdas en el ciclo externo y en
    los bowls, y subdivide todas las encontradas en un solo lote. Se repite
    hasta que no quedan cuerdas.

    Args:
        g: Grafo triangulado y validado

    Returns:
        ReformResult: G¹, la estructura por capas, el libro de aristas
        borradas y el mapa de subdivisión acumulado

    Raises:
        EmbeddingInvalid: El encaje no pasa la validación
        NotTriangulated: Alguna cara interna no es un triángulo
        NonTermination: Se agotaron los lotes permitidos
    """
    smap = SubdivisionMap(original_edges=g.edge_set)
    limit = max(1, len(g.edges))
    batches = 0
    while True:
        cl, ledger = _layer_graph(g, check_faces=batches == 0)
        cycles = [list(cl.layers[0])] + [list(b.cycle) for b in cl.bowls]
        chords = find_chords(g, cycles)
        if not chords:
            break
        if batches >= limit:
            raise NonTermination(f"Chord elimination did not settle after {limit} batches", stage="reform")
        logger.info(f"[REFORM] Pass {batches + 1}: {len(chords)} chords on layer cycles")
        g, step = subdivide_chords(g, cycles)
        smap = smap.then(step)
        batches += 1

    logger.info(
        f"[REFORM] {len(cl.layers)} layers, {len(cl.bowls)} bowls, {len(cl.triangles)} triangles, "
        f"{len(ledger.deleted_edges())} deleted edges, {len(ledger.dummy_added)} dummies"
    )
    return ReformResult(graph=g, cl=cl, ledger=ledger, smap=smap, batches=batches)


def enumerate_regions(cl: CompositeLayerlike, root: int) -> List[Region]:
    """
    Región máxima bajo una raíz.

    Los bordes son el camino descendente más a la izquierda y el más a la
    derecha; los miembros son los descendientes que no están en los bordes.
    Con root=OUTER se obtiene la región máxima del grafo.

    Raises:
        RootNotFound: root no pertenece a ninguna capa
    """
    if root != OUTER and root not in cl.layer_of:
        raise RootNotFound(f"Vertex {root} is not on any layer")
    if not cl.children.get(root):
        return [Region(root, (root,), (root,), frozenset())]

    def descend(pick) -> Tuple[int, ...]:
        path = [root]
        while cl.children.get(path[-1]):
            path.append(pick(cl.children[path[-1]]))
        return tuple(path)

    left = descend(lambda kids: kids[0])
    right = descend(lambda kids: kids[-1])
    descendants: Set[int] = set()
    stack = list(cl.children[root])
    while stack:
        v = stack.pop()
        descendants.add(v)
        stack.extend(cl.children.get(v, ()))
    members = frozenset(descendants - set(left) - set(right))
    return [Region(root, left, right, members)]


def row_crossings(cl: CompositeLayerlike) -> List[Tuple[Edge, Edge]]:
    """
    Pares de aristas conservadas que se cruzan al dibujar las capas como
    filas: segmentos entre filas contiguas y arcos dentro de una fila.
    """
    between: Dict[int, List[Tuple[Tuple[int, int], Edge]]] = {}
    within: Dict[int, List[Tuple[Tuple[int, int], Edge]]] = {}
    for u, v in sorted(cl.kept_edges):
        lu, lv = cl.layer_of[u], cl.layer_of[v]
        if lu == lv:
            within.setdefault(lu, []).append(((cl.position[u], cl.position[v]), (u, v)))
        else:
            upper, lower = (u, v) if lu < lv else (v, u)
            between.setdefault(min(lu, lv), []).append(((cl.position[upper], cl.position[lower]), (u, v)))
    found = []
    for table, test in ((between, _crosses), (within, _interleave)):
        for items in table.values():
            for i, (a, e) in enumerate(items):
                for b, f in items[i + 1:]:
                    if test(a, b):
                        found.append((e, f))
    return found


def check_edge_conservation(
    cl: CompositeLayerlike, ledger: DeletedEdgeLedger, edges: Iterable[Edge]
) -> List[str]:
    """Problemas de conservación de aristas (lista vacía si todo cuadra)"""
    expected = {norm(u, v) for u, v in edges}
    deleted = ledger.deleted_edges()
    problems = []
    overlap = set(cl.kept_edges) & deleted
    if overlap:
        problems.append(f"Edges both kept and deleted: {sorted(overlap)[:5]}")
    total = len(cl.kept_edges) + len(deleted) - len(ledger.dummy_added)
    if total != len(expected):
        problems.append(f"Edge count {total} differs from {len(expected)}")
    union = (set(cl.kept_edges) | deleted) - ledger.dummy_added
    if union != expected:
        missing = sorted(expected - union)[:5]
        extra = sorted(union - expected)[:5]
        problems.append(f"Edge sets differ: missing={missing} extra={extra}")
    return problems
