# backend/src/ladder/fans.py
"""
Abanicos, abanicos ascendentes y caminos ascendentes.

Un abanico es un vértice inferior m con todos sus vecinos de la capa de
arriba. Un abanico ascendente encadena abanicos, cada uno acotado por el
siguiente: su vecino de fila izquierdo o un ápice una capa más abajo. Las
alas son las uniones de caminos ascendentes que salen de los brazos.
"""

import bisect
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .errors import NoFan, OrphanVertex
from .layering import OUTER, CompositeLayerlike, Region

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fan:
    upper: Tuple[int, ...]
    lower: int

    def to_dict(self) -> dict:
        return {'upper': list(self.upper), 'lower': self.lower}


@dataclass
class RaisingPathSet:
    """Camino ascendente de cada vértice hasta la capa 1"""
    path_of: Dict[int, Tuple[int, ...]]
    parent: Dict[int, int]
    children: Dict[int, Tuple[int, ...]]
    preorder: Dict[int, int]
    layer_of: Dict[int, int]
    position: Dict[int, int]

    def ancestors(self, v: int) -> Tuple[int, ...]:
        """Camino de v hasta OUTER, incluidos ambos"""
        if v == OUTER:
            return (OUTER,)
        return self.path_of[v] + (OUTER,)

    def lca(self, a: int, b: int) -> int:
        seen = set(self.ancestors(a))
        for v in self.ancestors(b):
            if v in seen:
                return v
        return OUTER

    def path_down(self, v: int, root: int) -> Tuple[int, ...]:
        """Camino de root a v descendiendo por el árbol"""
        chain = []
        for u in self.ancestors(v):
            chain.append(u)
            if u == root:
                break
        return tuple(reversed(chain))


def build_raising_paths(cl: CompositeLayerlike) -> RaisingPathSet:
    """
    Construye los caminos ascendentes siguiendo el árbol de capas; si el
    padre del árbol no es vecino superior se usa el más a la izquierda.

    Raises:
        OrphanVertex: Un vértice fuera de la capa 1 no tiene vecino arriba
    """
    path_of: Dict[int, Tuple[int, ...]] = {}
    parent: Dict[int, int] = {}
    for k, row in enumerate(cl.layers, start=1):
        for v in row:
            if k == 1:
                parent[v] = OUTER
                path_of[v] = (v,)
                continue
            uppers = cl.upper_neighbors(v)
            if not uppers:
                raise OrphanVertex(f"Vertex {v} on layer {k} has no neighbour on layer {k - 1}")
            up = cl.parent.get(v)
            if up not in uppers:
                up = uppers[0]
            parent[v] = up
            path_of[v] = (v,) + path_of[up]

    children: Dict[int, List[int]] = {OUTER: []}
    for row in cl.layers:
        for v in row:
            children.setdefault(parent[v], []).append(v)
            children.setdefault(v, [])

    preorder: Dict[int, int] = {}
    stack = [OUTER]
    while stack:
        v = stack.pop()
        preorder[v] = len(preorder)
        stack.extend(reversed(children[v]))

    return RaisingPathSet(
        path_of=path_of,
        parent=parent,
        children={v: tuple(kids) for v, kids in children.items()},
        preorder=preorder,
        layer_of=dict(cl.layer_of),
        position=dict(cl.position),
    )


@dataclass
class RaisingFan:
    fans: Tuple[Fan, ...]
    middle_path: Tuple[int, ...]
    crown: Optional[int]
    wings_left: Tuple[Tuple[int, ...], ...]
    wings_right: Tuple[Tuple[int, ...], ...]
    region: Region
    paths: RaisingPathSet = field(repr=False, compare=False, default=None)

    @property
    def is_empty(self) -> bool:
        return not self.fans

    @property
    def vertices(self) -> Set[int]:
        found = set(self.middle_path)
        for wing in self.wings_left + self.wings_right:
            found.update(wing)
        return found

    @property
    def characteristic(self) -> Dict[int, Tuple[int, ...]]:
        """Ápices agrupados por capa"""
        groups: Dict[int, List[int]] = {}
        for m in self.middle_path:
            groups.setdefault(self.paths.layer_of[m], []).append(m)
        return {k: tuple(v) for k, v in groups.items()}

    def to_dict(self) -> dict:
        return {
            'fans': [f.to_dict() for f in self.fans],
            'middle_path': list(self.middle_path),
            'crown': self.crown,
            'wings_left': [list(w) for w in self.wings_left],
            'wings_right': [list(w) for w in self.wings_right],
            'region_root': self.region.root,
        }


@dataclass
class FanPlan:
    """Orden de colocación: por capa, y la secuencia de regiones"""
    per_layer: Dict[int, Tuple[int, ...]]
    regions: List[Region]


class FanIndex:
    """Consultas de abanicos sobre una estructura por capas"""

    def __init__(self, cl: CompositeLayerlike, paths: RaisingPathSet):
        self.cl = cl
        self.paths = paths
        self._fans: Dict[int, Fan] = {}

    def fan_of(self, m: int) -> Fan:
        """
        Abanico con ápice m.

        Raises:
            NoFan: m está en la capa 1 o no tiene vecinos arriba
        """
        if m in self._fans:
            return self._fans[m]
        if m == OUTER or self.cl.layer(m) < 2:
            raise NoFan(f"Vertex {m} is on the first layer")
        upper = tuple(self.cl.upper_neighbors(m))
        if not upper:
            raise NoFan(f"Vertex {m} has no upper neighbour")
        fan = Fan(upper, m)
        self._fans[m] = fan
        return fan

    def span(self, fan: Fan) -> Tuple[int, int]:
        return self.cl.position[fan.upper[0]], self.cl.position[fan.upper[-1]]

    def bounds(self, outer: Fan, inner: Fan) -> bool:
        """
        outer acota a inner.

        En la misma fila: ápice vecino a la izquierda y tramo estrictamente
        mayor. Una capa más abajo: el ápice de inner es un vértice superior
        interior de outer.
        """
        a, b = outer.lower, inner.lower
        la, lb = self.cl.layer_of[a], self.cl.layer_of[b]
        if la == lb + 1:
            return b in outer.upper[1:-1]
        if la != lb:
            return False
        if self.cl.position[a] + 1 != self.cl.position[b] or b not in self.cl.adjacency[a]:
            return False
        (l1, r1), (l2, r2) = self.span(outer), self.span(inner)
        return l1 <= l2 and r2 <= r1 and (l1, r1) != (l2, r2)

    def _row_neighbor(self, m: int, step: int) -> Optional[int]:
        row = self.cl.layers[self.cl.layer_of[m] - 1]
        i = self.cl.position[m] + step
        return row[i] if 0 <= i < len(row) else None

    def _eligible(self, w: Optional[int], region: Region) -> bool:
        return w is not None and w in region.members and self.cl.layer(w) >= 2

    def _inner_step(self, a: int, region: Region) -> Optional[int]:
        w = self._row_neighbor(a, +1)
        if self._eligible(w, region) and self.bounds(self.fan_of(a), self.fan_of(w)):
            return w
        interior = [u for u in self.fan_of(a).upper[1:-1] if self._eligible(u, region)]
        return interior[len(interior) // 2] if interior else None

    def _outer_step(self, b: int, region: Region) -> Optional[int]:
        w = self._row_neighbor(b, -1)
        if self._eligible(w, region) and self.bounds(self.fan_of(w), self.fan_of(b)):
            return w
        for x in self.cl.lower_neighbors(b):
            if x in region.members and b in self.fan_of(x).upper[1:-1]:
                return x
        return None

    def _wing(self, arm: List[int], region: Region, blocked: Set[int]) -> Tuple[int, ...]:
        wing: List[int] = []
        for u in arm:
            for x in self.paths.path_of[u]:
                if x not in region.members or x in blocked:
                    break
                if x not in wing:
                    wing.append(x)
        return tuple(wing)

    def _arms(self, previous: Fan, fan: Fan) -> Tuple[List[int], List[int]]:
        if self.cl.layer_of[fan.lower] == self.cl.layer_of[previous.lower] + 1:
            cut = fan.upper.index(previous.lower)
            return list(fan.upper[:cut]), list(fan.upper[cut + 1:])
        lo, hi = self.span(previous)
        return (
            [u for u in fan.upper if self.cl.position[u] < lo],
            [u for u in fan.upper if self.cl.position[u] > hi],
        )

    def leftmost_raising_fan(self, region: Region, v: int) -> RaisingFan:
        """
        Abanico ascendente máximo que contiene el abanico de v.

        Hacia dentro la cadena pasa al vecino de fila derecho si está
        acotado o, si no, sube al vértice superior interior central que
        tenga abanico. Hacia fuera pasa al vecino de fila izquierdo si acota
        o baja al vecino inferior más a la izquierda que tenga al último
        ápice como vértice superior interior. Los abanicos quedan del más
        interno al más externo.

        Raises:
            NoFan: v no es miembro de la región o no tiene abanico
        """
        if not region.members:
            return RaisingFan((), (), None, (), (), region, self.paths)
        if v not in region.members:
            raise NoFan(f"Vertex {v} is not inside the region rooted at {region.root}")
        chain = [v]
        self.fan_of(v)
        while True:
            w = self._inner_step(chain[0], region)
            if w is None or w in chain:
                break
            chain.insert(0, w)
        while True:
            w = self._outer_step(chain[-1], region)
            if w is None or w in chain:
                break
            chain.append(w)

        fans = tuple(self.fan_of(m) for m in chain)
        first = fans[0].upper
        crown = first[len(first) // 2]
        left_arms: List[List[int]] = [list(first[:len(first) // 2 + 1])]
        right_arms: List[List[int]] = [list(first[len(first) // 2 + 1:])]
        for previous, fan in zip(fans, fans[1:]):
            left, right = self._arms(previous, fan)
            left_arms.append(left)
            right_arms.append(right)

        blocked = set(chain)
        wings_left = tuple(self._wing(arm, region, blocked) for arm in left_arms)
        taken = set().union(*wings_left) | blocked
        wings_right = tuple(self._wing(arm, region, taken) for arm in right_arms)

        rf = RaisingFan(fans, tuple(chain), crown, wings_left, wings_right, region, self.paths)
        logger.debug(f"[FANS] Raising fan at {v}: middle={list(chain)} crown={crown}")
        return rf


def fan_partition(rf: RaisingFan) -> Tuple[List[Region], List[Region]]:
    """
    Parte la región de rf en regiones secuenciales a izquierda y derecha.

    Los miembros restantes se agrupan por el intervalo de preorden entre
    dos vértices consecutivos del abanico; cada grupo no vacío es una
    región con raíz en el ancestro común de sus vértices frontera.
    """
    if rf.is_empty:
        return [], []
    paths = rf.paths
    region = rf.region
    fan_vertices = sorted(rf.vertices, key=lambda x: paths.preorder[x])
    keys = [paths.preorder[x] for x in fan_vertices]
    crown_slot = bisect.bisect_right(keys, paths.preorder[rf.crown])

    slots: Dict[int, List[int]] = {}
    for x in region.members - rf.vertices:
        slots.setdefault(bisect.bisect_left(keys, paths.preorder[x]), []).append(x)

    left: List[Region] = []
    right: List[Region] = []
    for s in sorted(slots):
        lo = fan_vertices[s - 1] if s > 0 else region.root
        hi = fan_vertices[s] if s < len(fan_vertices) else region.root
        root = paths.lca(lo, hi)
        sub = Region(
            root=root,
            left=paths.path_down(lo, root),
            right=paths.path_down(hi, root),
            members=frozenset(slots[s]),
        )
        (left if s < crown_slot else right).append(sub)
    return left, right


def fan_placement_order(rf: RaisingFan) -> FanPlan:
    """
    Plan de colocación: por capa, ala izquierda en orden de fila, camino
    medio invertido y ala derecha invertida; regiones izquierdas en orden y
    derechas al revés.
    """
    if rf.is_empty:
        return FanPlan({}, [])
    paths = rf.paths
    left_vertices = {x for wing in rf.wings_left for x in wing}
    right_vertices = {x for wing in rf.wings_right for x in wing}

    layers: Dict[int, List[int]] = {}
    for x in left_vertices | right_vertices | set(rf.middle_path):
        layers.setdefault(paths.layer_of[x], []).append(x)

    per_layer: Dict[int, Tuple[int, ...]] = {}
    for k, row in layers.items():
        by_pos = sorted(row, key=lambda x: paths.position[x])
        lefts = [x for x in by_pos if x in left_vertices]
        middle = [x for x in reversed(rf.middle_path) if paths.layer_of[x] == k]
        rights = [x for x in reversed(by_pos) if x in right_vertices]
        per_layer[k] = tuple(lefts + middle + rights)

    left_regions, right_regions = fan_partition(rf)
    return FanPlan(per_layer, left_regions + list(reversed(right_regions)))
