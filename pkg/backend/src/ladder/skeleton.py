# backend/src/ladder/skeleton.py
"""
Bosques de abanicos ascendentes y esqueletos de regiones.

Un esqueleto de una región contiene los bosques de abanicos de ambos
bordes, los miembros vecinos de los bordes, los vecinos de la raíz que no
son hijos suyos y al menos un hijo de la raíz aún sin cubrir. Lo que sobra
se parte en componentes conexas, que son las sub-regiones.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx

from .errors import DecompositionInconsistent, NonTermination, SkeletonInvalid
from .fans import FanIndex, RaisingFan, fan_partition
from .layering import OUTER, Region

logger = logging.getLogger(__name__)

SIDES = ('left', 'right')


@dataclass
class ForestNode:
    index: int
    fan: RaisingFan
    parent: Optional[int]
    partition: List[Region] = field(default_factory=list)
    children: List[int] = field(default_factory=list)

    def upper_vertices(self) -> Set[int]:
        return {u for f in self.fan.fans for u in f.upper}


@dataclass
class ForestLike:
    side: str
    nodes: List[ForestNode]
    roots: List[int]
    region_pool: List[Region]

    @property
    def parent(self) -> Dict[int, Optional[int]]:
        return {n.index: n.parent for n in self.nodes}

    @property
    def vertices(self) -> Set[int]:
        found: Set[int] = set()
        for node in self.nodes:
            found |= node.fan.vertices
        return found

    def to_dict(self) -> dict:
        return {
            'side': self.side,
            'nodes': [
                {'index': n.index, 'parent': n.parent, 'fan': n.fan.to_dict()} for n in self.nodes
            ],
            'roots': list(self.roots),
        }


@dataclass
class SkeletonDecomposition:
    left_chain: Tuple[int, ...]
    right_chain: Tuple[int, ...]
    black_holes: Dict[int, Region]
    forest: ForestLike


@dataclass
class Skeleton:
    root: int
    region: Region
    left_part: ForestLike
    right_part: ForestLike
    decomposition: SkeletonDecomposition
    vertices: FrozenSet[int]
    regions: List[Tuple[str, Region]]
    middle: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            'root': self.root,
            'vertices': sorted(self.vertices),
            'middle': self.middle,
            'left_part': self.left_part.to_dict(),
            'right_part': self.right_part.to_dict(),
            'left_chain': list(self.decomposition.left_chain),
            'right_chain': list(self.decomposition.right_chain),
            'black_holes': {
                str(node): sorted(r.members) for node, r in sorted(self.decomposition.black_holes.items())
            },
            'regions': [{'flag': flag, **r.to_dict()} for flag, r in self.regions],
        }


@dataclass
class SkeletonSequence:
    skeletons: List[Skeleton]
    regions: List[Region]

    def __len__(self) -> int:
        return len(self.skeletons)


# ============================================================================
# BOSQUES
# ============================================================================

def build_forest(
    index: FanIndex, region: Region, side: str, exclude: FrozenSet[int] = frozenset()
) -> ForestLike:
    """
    Colorea abanicos ascendentes desde un borde hasta agotar candidatos.

    Un candidato es un miembro no cubierto con algún vecino superior en el
    borde. En cada vuelta se toma el de primer vértice superior más a la
    izquierda, se construye su abanico dentro de la región del pool que lo
    contiene y esa región se reemplaza por la partición del abanico.

    Args:
        index: Consultas de abanicos
        region: Región a recorrer
        side: 'left' o 'right'
        exclude: Vértices ya cubiertos por otro bosque
    """
    cl = index.cl
    border = set(region.left if side == 'left' else region.right) - {region.root}
    start = Region(region.root, region.left, region.right, region.members - exclude)
    pool: List[Tuple[Region, Optional[int]]] = [(start, None)]
    covered: Set[int] = set(exclude)
    nodes: List[ForestNode] = []

    while True:
        candidates = []
        for m in start.members - covered:
            if cl.layer(m) < 2:
                continue
            uppers = cl.upper_neighbors(m)
            if not any(u in border for u in uppers):
                continue
            host = next((i for i, (r, _) in enumerate(pool) if m in r.members), None)
            if host is None:
                continue
            candidates.append(((cl.key(uppers[0]), cl.key(m)), m, host))
        if not candidates:
            break
        _, m, host = min(candidates)
        pool_region, producer = pool[host]
        rf = index.leftmost_raising_fan(pool_region, m)
        left, right = fan_partition(rf)
        node = ForestNode(len(nodes), rf, producer, partition=left + right)
        nodes.append(node)
        if producer is not None:
            nodes[producer].children.append(node.index)
        covered |= rf.vertices
        pool[host:host + 1] = [(r, node.index) for r in left + right]
        logger.debug(f"[SKELETON] {side} forest node {node.index} at apex {m}, parent={producer}")

    roots = [n.index for n in nodes if n.parent is None]
    roots.sort(key=lambda i: cl.key(nodes[i].fan.fans[0].upper[0]))
    return ForestLike(side, nodes, roots, [r for r, _ in pool])


def decompose(forest: ForestLike, region: Region) -> SkeletonDecomposition:
    """
    Separa el bosque en cadena izquierda (raíces hermanas que no tocan el
    borde derecho) y cadena derecha (camino de descendientes que lo tocan).

    Raises:
        DecompositionInconsistent: La cadena derecha no es un camino padre-hijo
        o un eslabón no tiene exactamente un agujero negro
    """
    border = set(region.right) - {region.root}

    def touches(i: int) -> bool:
        return bool(forest.nodes[i].upper_vertices() & border)

    left_chain: List[int] = []
    roots = list(forest.roots)
    i = 0
    while i < len(roots) and not touches(roots[i]):
        left_chain.append(roots[i])
        i += 1

    right_chain: List[int] = []
    current = roots[i] if i < len(roots) else None
    while current is not None:
        right_chain.append(current)
        current = next((c for c in forest.nodes[current].children if touches(c)), None)

    black_holes: Dict[int, Region] = {}
    for a, b in zip(right_chain, right_chain[1:]):
        if forest.nodes[b].parent != a:
            raise DecompositionInconsistent(f"Right chain node {b} is not a child of {a}")
        apex = forest.nodes[b].fan.middle_path[0]
        holes = [r for r in forest.nodes[a].partition if apex in r.members]
        if len(holes) != 1:
            raise DecompositionInconsistent(
                f"Right chain node {a} has {len(holes)} regions holding apex {apex}"
            )
        black_holes[a] = holes[0]
    return SkeletonDecomposition(tuple(left_chain), tuple(right_chain), black_holes, forest)


def sequential_regions(decomposition: SkeletonDecomposition) -> List[Region]:
    """
    Regiones secuenciales de la descomposición, de izquierda a derecha.

    Primero las particiones de la cadena izquierda; después la partición
    del primer eslabón de la cadena derecha, donde el agujero negro de cada
    eslabón se reemplaza por la partición del siguiente.
    """
    forest = decomposition.forest
    ordered = [r for i in decomposition.left_chain for r in forest.nodes[i].partition]
    chain = decomposition.right_chain
    if not chain:
        return ordered
    tail = list(forest.nodes[chain[0]].partition)
    for a, b in zip(chain, chain[1:]):
        k = tail.index(decomposition.black_holes[a])
        tail[k:k + 1] = forest.nodes[b].partition
    return ordered + tail


def contiguity_report(decomposition: SkeletonDecomposition) -> List[str]:
    """
    Conteos de contigüidad sobre la cadena derecha: cada vértice no frontera
    aparece como vértice superior en un intervalo contiguo de la cadena y,
    si está en un ala derecha, en a lo sumo un eslabón.
    """
    forest = decomposition.forest
    chain = decomposition.right_chain
    appearances: Dict[int, List[int]] = {}
    for i, node_index in enumerate(chain):
        for u in forest.nodes[node_index].upper_vertices():
            appearances.setdefault(u, []).append(i)
    wing_vertices = {
        x for node_index in chain for wing in forest.nodes[node_index].fan.wings_right for x in wing
    }
    findings = []
    for u, hits in sorted(appearances.items()):
        if hits[-1] - hits[0] + 1 != len(hits):
            findings.append(f"Vertex {u} appears on a non-contiguous right-chain interval {hits}")
        if u in wing_vertices and len(hits) > 1:
            findings.append(f"Right-wing vertex {u} has fans in {len(hits)} right-chain nodes")
    return findings


# ============================================================================
# ESQUELETOS
# ============================================================================

def _verify_definition(index: FanIndex, region: Region, vertices: Set[int], regions: List[Tuple[str, Region]]):
    children = index.paths.children
    owners = [r.members for _, r in regions]
    for v in (region.root,) + tuple(region.boundary()):
        for c in children.get(v, ()):
            if c not in region.members:
                continue
            count = sum(1 for members in owners if c in members)
            if c in vertices and count == 0:
                continue
            if c not in vertices and count == 1:
                continue
            raise SkeletonInvalid(
                f"Child {c} of {v} is in the skeleton={c in vertices} and in {count} regions"
            )


def _sequential_ranks(pool: List[Region], sequence: List[Region]):
    """Clave de un vértice: su región en el pool izquierdo y en la secuencia derecha"""
    def rank(x: int) -> Tuple[int, int]:
        left = next((i for i, r in enumerate(pool) if x in r.members), len(pool))
        right = next((i for i, r in enumerate(sequence) if x in r.members), len(sequence))
        return left, right
    return rank


def assemble_skeleton(index: FanIndex, region: Region) -> Skeleton:
    """
    Arma el esqueleto de una región y sus sub-regiones.

    Las sub-regiones son las componentes conexas de los miembros no
    cubiertos; se marcan M si contienen hijos de la raíz sin cubrir, L o R
    según su preorden respecto del punto medio, y se devuelven en orden
    L, M y R invertido. Dentro de cada marca el orden sigue las regiones
    secuenciales de los bosques: el pool del bosque izquierdo y, dentro de
    cada región del pool, la secuencia de la cadena derecha.

    Raises:
        SkeletonInvalid: Algún hijo de la raíz o de un borde queda fuera
        DecompositionInconsistent: Propagado desde decompose
    """
    cl = index.cl
    paths = index.paths
    root = region.root
    members = region.members

    left_part = build_forest(index, region, 'left')
    taken = left_part.vertices
    right_part = build_forest(index, region, 'right', exclude=frozenset(taken))
    decomposition = decompose(right_part, region)
    right_vertices = right_part.vertices

    vertices: Set[int] = set(taken) | right_vertices
    others = region.boundary() - {root}
    for m in members:
        if cl.adjacency[m] & others:
            vertices.add(m)
    if root != OUTER:
        vertices |= {m for m in cl.adjacency[root] if m in members and paths.parent[m] != root}

    kids = [c for c in paths.children.get(root, ()) if c in members]
    uncovered = [c for c in kids if c not in vertices]
    middle = None
    if uncovered:
        middle = uncovered[0]
        vertices.add(middle)
    elif not vertices and members:
        vertices.add(min(members, key=cl.key))
    open_kids = set(uncovered[1:])

    if middle is not None:
        pivot = paths.preorder[middle]
    elif right_vertices:
        pivot = min(paths.preorder[x] for x in right_vertices)
    else:
        pivot = float('inf')

    ranks = _sequential_ranks(left_part.region_pool, sequential_regions(decomposition))
    leftover = members - vertices
    graph = nx.Graph()
    graph.add_nodes_from(leftover)
    graph.add_edges_from((a, b) for a in leftover for b in cl.adjacency[a] if b in leftover)

    buckets: Dict[str, List[Tuple[tuple, Region]]] = {'L': [], 'M': [], 'R': []}
    for component in nx.connected_components(graph):
        comp = frozenset(component)
        first = min(paths.preorder[x] for x in comp)
        if comp & open_kids:
            flag, sub_root = 'M', root
        else:
            top = min(comp, key=cl.key)
            flag, sub_root = ('L' if first < pivot else 'R'), paths.parent[top]
        placed = {u for x in comp for u in cl.adjacency[x] if u not in comp}
        if sub_root != OUTER:
            placed.add(sub_root)
        left = tuple(sorted((u for u in placed if paths.preorder[u] < first), key=cl.key))
        right = tuple(sorted((u for u in placed if paths.preorder[u] >= first), key=cl.key))
        lead = min(comp, key=lambda x: paths.preorder[x])
        buckets[flag].append(((ranks(lead), first), Region(sub_root, left, right, comp)))

    regions: List[Tuple[str, Region]] = []
    for flag in ('L', 'M'):
        regions += [(flag, r) for _, r in sorted(buckets[flag], key=lambda item: item[0])]
    regions += [('R', r) for _, r in sorted(buckets['R'], key=lambda item: item[0], reverse=True)]

    _verify_definition(index, region, vertices, regions)
    logger.debug(
        f"[SKELETON] Root {root}: {len(vertices)} skeleton vertices, "
        f"{len(regions)} sub-regions, middle={middle}"
    )
    return Skeleton(
        root=root,
        region=region,
        left_part=left_part,
        right_part=right_part,
        decomposition=decomposition,
        vertices=frozenset(vertices),
        regions=regions,
        middle=middle,
    )


def skeleton_sequence(index: FanIndex, region: Region) -> SkeletonSequence:
    """
    Esqueletos sucesivos hasta cubrir todos los hijos de la raíz.

    Las regiones M vuelven a la cola con la misma raíz; las L y R se
    devuelven para la cola de colocación.

    Raises:
        NonTermination: Más vueltas que hijos de la raíz
    """
    kids = [c for c in index.paths.children.get(region.root, ()) if c in region.members]
    if not kids and not region.members:
        return SkeletonSequence([], [])
    guard = max(1, len(kids))
    queue = deque([region])
    skeletons: List[Skeleton] = []
    regions: List[Region] = []
    while queue:
        current = queue.popleft()
        if len(skeletons) >= guard:
            raise NonTermination(
                f"Root {region.root} needs more than {guard} skeletons to cover its children"
            )
        skeleton = assemble_skeleton(index, current)
        skeletons.append(skeleton)
        for flag, sub in skeleton.regions:
            if flag == 'M':
                queue.append(sub)
            else:
                regions.append(sub)
    return SkeletonSequence(skeletons, regions)
