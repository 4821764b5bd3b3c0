# backend/src/ladder/placement.py
"""
Colocación en escalera.

Una cola FIFO de regiones: se saca una región, se calcula su secuencia de
esqueletos, cada esqueleto se coloca como un bloque a la derecha de todo lo
ya colocado en su rango de tracks, y las sub-regiones L/R vuelven a la cola.
Un vértice x de un esqueleto con raíz r va al track
L(r) + 2Z + capa(x) - capa(r) - 1.

Los bordes de la región máxima no siguen esa regla: la raíz virtual
OUTER ocupa el track 1 y la capa k de los bordes va al track Z + 1 + k,
Z - 1 tracks antes del 2Z + k que la regla daría a un esqueleto de
OUTER. Así los esqueletos de OUTER quedan a distancia Z - 1 + (k' - k)
de los bordes.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, FrozenSet, Iterable, List, Tuple

from .errors import ConfigInvalid, DistanceExceedsD, LedgerMismatch, UnplacedVertex
from .fans import FanIndex, build_raising_paths, fan_placement_order
from .layering import OUTER, CompositeLayerlike, DeletedEdgeLedger, Region, enumerate_regions
from .plane_graph import Edge
from .skeleton import Skeleton, skeleton_sequence
from .verify import measure

logger = logging.getLogger(__name__)

EDGE_CLASSES = ('kept', 'wires', 'bridges', 'piles', 'dummy')


@dataclass(frozen=True)
class PlacementConfig:
    """Desplazamiento Z entre generaciones y cota J de un esqueleto"""
    Z: int
    J: int

    def __post_init__(self):
        if not (self.Z > self.J >= 1):
            raise ConfigInvalid(f"Placement config needs Z > J >= 1, got Z={self.Z}, J={self.J}")

    @property
    def D(self) -> int:
        return 2 * self.Z + 1

    @classmethod
    def parse(cls, text: str) -> 'PlacementConfig':
        """Lee 'Z=3,J=1'"""
        values = {}
        for part in text.split(','):
            if '=' not in part:
                raise ConfigInvalid(f"Malformed config entry '{part}'")
            key, raw = part.split('=', 1)
            try:
                values[key.strip().upper()] = int(raw)
            except ValueError:
                raise ConfigInvalid(f"Config value '{raw}' for {key} is not an integer")
        if set(values) != {'Z', 'J'}:
            raise ConfigInvalid(f"Config needs exactly Z and J, got {sorted(values)}")
        return cls(values['Z'], values['J'])

    def to_dict(self) -> dict:
        return {'Z': self.Z, 'J': self.J, 'D': self.D}


@dataclass
class LadderLayout:
    track_of: Dict[int, int]
    pos_of: Dict[int, int]
    wrapped: bool
    config: PlacementConfig
    edge_classes: Dict[str, FrozenSet[Edge]]
    active: FrozenSet[Edge]
    violations: List[str] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)

    @property
    def track_count(self) -> int:
        return max(self.track_of.values(), default=0)

    def tracks(self) -> List[List[int]]:
        rows: List[List[int]] = [[] for _ in range(self.track_count)]
        for v, t in self.track_of.items():
            rows[t - 1].append(v)
        for row in rows:
            row.sort(key=lambda v: self.pos_of[v])
        return rows

    def restricted(self, vertices: Iterable[int]) -> 'LadderLayout':
        """Layout sobre un subconjunto de vértices, con posiciones renumeradas"""
        keep = set(vertices)
        track_of = {v: t for v, t in self.track_of.items() if v in keep}
        pos_of = {v: self.pos_of[v] for v in track_of}
        edge_classes = {
            name: frozenset(e for e in edges if e[0] in keep and e[1] in keep)
            for name, edges in self.edge_classes.items()
        }
        active = frozenset(e for e in self.active if e[0] in keep and e[1] in keep)
        return LadderLayout(
            track_of, pos_of, self.wrapped, self.config, edge_classes, active,
            list(self.violations), list(self.findings),
        ).normalized()

    def normalized(self) -> 'LadderLayout':
        pos_of = {}
        for row in self.tracks():
            for i, v in enumerate(row):
                pos_of[v] = i
        return LadderLayout(
            dict(self.track_of), pos_of, self.wrapped, self.config,
            dict(self.edge_classes), self.active, list(self.violations), list(self.findings),
        )

    def to_dict(self) -> dict:
        return {
            'tracks': self.tracks(),
            'config': self.config.to_dict(),
            'wrapped': self.wrapped,
            'edge_classes': {
                name: sorted(list(e) for e in self.edge_classes.get(name, ())) for name in EDGE_CLASSES
            },
        }


@dataclass
class PlacedRegionQueue:
    pending: Deque[Region] = field(default_factory=deque)
    placed: List[Region] = field(default_factory=list)


# ============================================================================
# COLOCACIÓN
# ============================================================================

class LadderPlacer:
    """
    Ejecuta la cola de regiones sobre una estructura por capas.

    Mantiene la marca de agua de cada track: un bloque nuevo empieza a la
    derecha del máximo de las marcas en su rango de tracks.
    """

    def __init__(self, cl: CompositeLayerlike, ledger: DeletedEdgeLedger,
                 cfg: PlacementConfig, debug_verify: bool = False):
        self.cl = cl
        self.ledger = ledger
        self.cfg = cfg
        self.debug_verify = debug_verify
        self.index = FanIndex(cl, build_raising_paths(cl))
        self.track_of: Dict[int, int] = {}
        self.pos_of: Dict[int, int] = {}
        self.high_water: Dict[int, int] = {}
        self.blocks: List[Dict[int, Tuple[int, int]]] = []
        self.queue = PlacedRegionQueue()
        self.violations: List[str] = []
        self.findings: List[str] = []
        self._last_x = 0

    def track_for(self, x: int, root: int) -> int:
        base = 1 if root == OUTER else self.track_of[root]
        return base + 2 * self.cfg.Z + self.cl.layer(x) - self.cl.layer(root) - 1

    def boundary_track(self, v: int) -> int:
        """Track de un vértice de los bordes de la región máxima"""
        return self.cfg.Z + 1 + self.cl.layer(v)

    def _place_block(self, assignment: Dict[int, int], plans: Iterable = ()):
        if not assignment:
            return
        per_track: Dict[int, List[int]] = {}
        for v, t in assignment.items():
            per_track.setdefault(t, []).append(v)
        for row in per_track.values():
            row.sort(key=self.cl.key)
        for plan in plans:
            for ordered in plan.per_layer.values():
                inside = [v for v in ordered if v in assignment]
                if not inside:
                    continue
                row = per_track[assignment[inside[0]]]
                slots = sorted(row.index(v) for v in inside)
                for slot, v in zip(slots, inside):
                    row[slot] = v

        low, high = min(per_track), max(per_track)
        start = max(self.high_water.get(t, -1) for t in range(low, high + 1)) + 1
        extent = {}
        for t, row in per_track.items():
            for i, v in enumerate(row):
                self.track_of[v] = t
                self.pos_of[v] = start + i
            self.high_water[t] = start + len(row) - 1
            extent[t] = (start, start + len(row) - 1)
        self.blocks.append(extent)

    def _place_skeleton(self, skeleton: Skeleton, root: int):
        assignment = {x: self.track_for(x, root) for x in skeleton.vertices}
        plans = [fan_placement_order(node.fan) for node in skeleton.left_part.nodes]
        right = skeleton.right_part
        chains = skeleton.decomposition.left_chain + skeleton.decomposition.right_chain
        order = list(chains) + [n.index for n in right.nodes if n.index not in chains]
        plans += [fan_placement_order(right.nodes[i].fan) for i in order]
        self._place_block(assignment, plans)
        if self.debug_verify:
            self._check_connectors()

    def _placed_edges(self) -> List[Edge]:
        return [e for e in self.cl.kept_edges if e[0] in self.track_of and e[1] in self.track_of]

    def _check_connectors(self):
        metrics = measure(self, self._placed_edges())
        if metrics.X > self._last_x:
            self.findings.append(
                f"Connector edges raised X from {self._last_x} to {metrics.X} after block {len(self.blocks)}"
            )
        self._last_x = metrics.X

    def run(self) -> LadderLayout:
        maximum = enumerate_regions(self.cl, OUTER)[0]
        boundary = [v for v in maximum.left + maximum.right if v != OUTER]
        self._place_block({v: self.boundary_track(v) for v in boundary})
        logger.info(f"[PLACE] Maximum region: {len(boundary)} boundary vertices, {len(maximum.members)} members")

        self.queue.pending.append(maximum)
        while self.queue.pending:
            region = self.queue.pending.popleft()
            sequence = skeleton_sequence(self.index, region)
            for skeleton in sequence.skeletons:
                self._place_skeleton(skeleton, region.root)
            self.queue.pending.extend(sequence.regions)
            self.queue.placed.append(region)

        missing = [v for v in self.cl.vertices if v not in self.track_of]
        if missing:
            raise UnplacedVertex(f"Vertices {missing[:5]} were never placed", stage="place")
        self._check_block_order()

        dummies = frozenset(self.ledger.dummy_added)
        kept = frozenset(self.cl.kept_edges) - dummies
        layout = LadderLayout(
            track_of=dict(self.track_of),
            pos_of=dict(self.pos_of),
            wrapped=False,
            config=self.cfg,
            edge_classes={
                'kept': kept,
                'wires': frozenset(self.ledger.wire_edges()),
                'bridges': frozenset(self.ledger.bridge_edges()),
                'piles': frozenset(self.ledger.pile_edges()),
                'dummy': dummies,
            },
            active=kept | dummies,
            violations=self.violations,
            findings=self.findings,
        ).normalized()
        logger.info(
            f"[PLACE] {len(self.queue.placed)} regions, {len(self.blocks)} blocks, "
            f"{layout.track_count} tracks"
        )
        return layout

    def _check_block_order(self):
        for (i, a), (j, b) in itertools.combinations(enumerate(self.blocks), 2):
            for t in set(a) & set(b):
                if a[t][1] >= b[t][0]:
                    self.violations.append(f"Block {j} starts before block {i} ends on track {t}")


def place(cl: CompositeLayerlike, ledger: DeletedEdgeLedger, cfg: PlacementConfig,
          debug_verify: bool = False) -> LadderLayout:
    """
    Coloca la estructura por capas en una escalera sin plegar.

    El bloque inicial son los bordes de la región máxima en los tracks
    Z+1+capa; después se vacía la cola de regiones.

    Raises:
        ConfigInvalid: Configuración inválida
        UnplacedVertex: Algún vértice quedó sin colocar
    """
    layout = LadderPlacer(cl, ledger, cfg, debug_verify=debug_verify).run()
    every = set().union(*layout.edge_classes.values())
    gap = max((abs(layout.track_of[u] - layout.track_of[v]) for u, v in every), default=0)
    if gap > 2 * cfg.Z:
        layout.violations.append(f"Edge gap {gap} exceeds 2Z={2 * cfg.Z}")
    return layout


def derive_config(cl: CompositeLayerlike, ledger: DeletedEdgeLedger) -> PlacementConfig:
    """
    Mide J colocando en seco el primer esqueleto de la región máxima y
    fija Z = J + 1.
    """
    dry = LadderPlacer(cl, ledger, PlacementConfig(2, 1))
    maximum = enumerate_regions(cl, OUTER)[0]
    sequence = skeleton_sequence(dry.index, maximum)
    gap = 0
    if sequence.skeletons:
        block = sequence.skeletons[0].vertices
        for a in block:
            for b in cl.adjacency[a]:
                if b in block:
                    gap = max(gap, abs(dry.track_for(a, OUTER) - dry.track_for(b, OUTER)))
    J = max(1, gap)
    logger.info(f"[PLACE] Derived config J={J}, Z={J + 1}")
    return PlacementConfig(J + 1, J)


# ============================================================================
# REINSERCIÓN Y PLEGADO
# ============================================================================

def reinsert_deleted(layout: LadderLayout, ledger: DeletedEdgeLedger) -> LadderLayout:
    """
    Devuelve las aristas borradas al conjunto que mide el verificador y
    quita las ficticias. Las posiciones no cambian.

    Raises:
        LedgerMismatch: Un extremo del libro no está colocado
    """
    restored = ledger.deleted_edges()
    for u, v in sorted(restored):
        for w in (u, v):
            if w not in layout.track_of:
                raise LedgerMismatch(f"Ledger edge ({u},{v}) touches unplaced vertex {w}")
    active = (layout.active - frozenset(ledger.dummy_added)) | frozenset(restored)
    return LadderLayout(
        dict(layout.track_of), dict(layout.pos_of), layout.wrapped, layout.config,
        dict(layout.edge_classes), frozenset(active), list(layout.violations), list(layout.findings),
    )


def _nested_pairs(layout: LadderLayout, edges: Iterable[Edge]) -> List[Tuple[Edge, Edge]]:
    pairs = []
    same_track = [e for e in edges if layout.track_of[e[0]] == layout.track_of[e[1]]]
    for e, f in itertools.combinations(sorted(same_track), 2):
        if layout.track_of[e[0]] != layout.track_of[f[0]]:
            continue
        a, b = sorted((layout.pos_of[e[0]], layout.pos_of[e[1]]))
        c, d = sorted((layout.pos_of[f[0]], layout.pos_of[f[1]]))
        if a < c < d < b or c < a < b < d:
            pairs.append((e, f))
    return pairs


def reinsertion_report(layout: LadderLayout, ledger: DeletedEdgeLedger) -> List[str]:
    """
    Mediciones de la reinserción: wires sin X-crossing entre sí, piles de
    vértices malos distintos sin anidarse y bridges de una misma capa sin
    anidarse. Devuelve hallazgos, no errores.
    """
    findings = []
    wires = sorted(ledger.wire_edges())
    for e, f in itertools.combinations(wires, 2):
        ta = {layout.track_of[e[0]], layout.track_of[e[1]]}
        if len(ta) != 2 or ta != {layout.track_of[f[0]], layout.track_of[f[1]]}:
            continue
        low = min(ta)
        eu, ev = e if layout.track_of[e[0]] == low else (e[1], e[0])
        fu, fv = f if layout.track_of[f[0]] == low else (f[1], f[0])
        if (layout.pos_of[eu] - layout.pos_of[fu]) * (layout.pos_of[ev] - layout.pos_of[fv]) < 0:
            findings.append(f"Wires {e} and {f} X-cross")

    for side, table in (('left', ledger.piles_left), ('right', ledger.piles_right)):
        owner = {e: m for m, edges in table.items() for e in edges}
        for e, f in _nested_pairs(layout, owner):
            if owner[e] != owner[f]:
                findings.append(f"{side.capitalize()} piles {e} and {f} of {owner[e]} and {owner[f]} nest")

    by_layer: Dict[int, List[Edge]] = {}
    for (layer, _), e in ledger.bridges:
        by_layer.setdefault(layer, []).append(e)
    for layer, edges in sorted(by_layer.items()):
        for e, f in _nested_pairs(layout, edges):
            findings.append(f"Bridges {e} and {f} of spine {layer} nest")
    return findings


def wrap(layout: LadderLayout, D: int) -> LadderLayout:
    """
    Pliega la escalera en 2D tracks: el track t pasa a ((t-1) mod 2D) + 1 y
    cada bloque de 2D tracks se añade a la derecha del anterior.

    Raises:
        DistanceExceedsD: La distancia medida no es menor que D
    """
    metrics = measure(layout, layout.active)
    if metrics.D >= D:
        raise DistanceExceedsD(f"Measured distance {metrics.D} is not below D={D}")
    period = 2 * D
    track_of = {}
    order_key = {}
    for v, t in layout.track_of.items():
        track_of[v] = (t - 1) % period + 1
        order_key[v] = ((t - 1) // period, layout.pos_of[v])
    pos_of = {}
    rows: Dict[int, List[int]] = {}
    for v, t in track_of.items():
        rows.setdefault(t, []).append(v)
    for row in rows.values():
        row.sort(key=lambda v: order_key[v])
        for i, v in enumerate(row):
            pos_of[v] = i
    result = LadderLayout(
        track_of, pos_of, True, layout.config, dict(layout.edge_classes),
        layout.active, list(layout.violations), list(layout.findings),
    )
    logger.info(f"[WRAP] {layout.track_count} tracks folded into {result.track_count} (D={D})")
    return result
