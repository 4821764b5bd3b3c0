# backend/src/ladder/verify.py
"""
Verificación independiente de layouts.

Mide número de cola por track, X-crossings por par de tracks y distancia;
valida track layouts y queue layouts; refina una escalera en un track layout
válido y contiene el oráculo exhaustivo de número de cola mínimo.

Convención: aristas que comparten un extremo no se anidan ni se cruzan.
"""

import bisect
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import InternalError, InvalidInput, TooLarge, UnplacedVertex
from .plane_graph import Edge, norm

logger = logging.getLogger(__name__)


def _longest_decreasing_chain(pairs: Sequence[Tuple[int, int, Edge]]) -> List[Edge]:
    """
    Cadena más larga con primera coordenada creciente y segunda
    estrictamente decreciente (ambas estrictas).
    """
    ordered = sorted(pairs, key=lambda p: (p[0], p[1]))
    tails: List[int] = []
    tail_index: List[int] = []
    previous = [-1] * len(ordered)
    for k, (_, b, _) in enumerate(ordered):
        key = -b
        pos = bisect.bisect_left(tails, key)
        if pos == len(tails):
            tails.append(key)
            tail_index.append(k)
        else:
            tails[pos] = key
            tail_index[pos] = k
        previous[k] = tail_index[pos - 1] if pos > 0 else -1
    chain: List[Edge] = []
    k = tail_index[-1] if tail_index else -1
    while k >= 0:
        chain.append(ordered[k][2])
        k = previous[k]
    chain.reverse()
    return chain


def max_nesting(order: Sequence[int], chords: Iterable[Edge]) -> Tuple[int, List[Edge]]:
    """
    Familia anidada máxima de cuerdas sobre un orden lineal.

    Args:
        order: Secuencia de vértices
        chords: Aristas con ambos extremos en order

    Returns:
        Tuple[int, List[Edge]]: Tamaño y testigo (de la más externa a la más interna)
    """
    index = {v: i for i, v in enumerate(order)}
    spans = []
    for u, v in chords:
        a, b = sorted((index[u], index[v]))
        spans.append((a, b, norm(u, v)))
    witness = _longest_decreasing_chain(spans)
    return len(witness), witness


def greedy_queue_count(order: Sequence[int], edges: Iterable[Edge]) -> int:
    """First-fit por extremo izquierdo; coincide con max_nesting."""
    index = {v: i for i, v in enumerate(order)}
    spans = sorted(
        (sorted((index[u], index[v])) for u, v in edges),
        key=lambda s: (s[0], -s[1]),
    )
    queues: List[List[Tuple[int, int]]] = []
    for a, b in spans:
        for queue in queues:
            if not any(a2 < a and b < b2 for a2, b2 in queue):
                queue.append((a, b))
                break
        else:
            queues.append([(a, b)])
    return len(queues)


# ============================================================================
# MÉTRICAS DE ESCALERA
# ============================================================================

@dataclass
class Metrics:
    """Q, X y D medidos sobre una escalera"""
    Q: int
    X: int
    D: int
    per_track_Q: Dict[int, int] = field(default_factory=dict)
    per_pair_X: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'Q': self.Q,
            'X': self.X,
            'D': self.D,
            'per_track_Q': {str(t): q for t, q in sorted(self.per_track_Q.items())},
            'per_pair_X': dict(sorted(self.per_pair_X.items())),
        }


def _tracks_of(track_of: Mapping[int, int], pos_of: Mapping[int, int]) -> Dict[int, List[int]]:
    tracks: Dict[int, List[int]] = {}
    for v, t in track_of.items():
        tracks.setdefault(t, []).append(v)
    for t in tracks:
        tracks[t].sort(key=lambda v: pos_of[v])
    return tracks


def measure(layout, edges: Iterable[Edge]) -> Metrics:
    """
    Mide un layout en escalera.

    Args:
        layout: Objeto con track_of y pos_of (p. ej. LadderLayout)
        edges: Aristas a medir

    Raises:
        UnplacedVertex: Algún extremo no tiene track asignado
    """
    track_of, pos_of = layout.track_of, layout.pos_of
    intra: Dict[int, List[Edge]] = {}
    inter: Dict[Tuple[int, int], List[Tuple[int, int, Edge]]] = {}
    gap = 0
    for u, v in edges:
        for w in (u, v):
            if w not in track_of:
                raise UnplacedVertex(f"Vertex {w} of edge ({u},{v}) is not placed")
        tu, tv = track_of[u], track_of[v]
        gap = max(gap, abs(tu - tv))
        if tu == tv:
            intra.setdefault(tu, []).append((u, v))
            continue
        if tu > tv:
            u, v, tu, tv = v, u, tv, tu
        inter.setdefault((tu, tv), []).append((pos_of[u], pos_of[v], norm(u, v)))

    tracks = _tracks_of(track_of, pos_of)
    per_track_q = {t: 0 for t in tracks}
    for t, chords in intra.items():
        per_track_q[t] = max_nesting(tracks[t], chords)[0]
    per_pair_x = {
        f"{a}-{b}": len(_longest_decreasing_chain(pairs)) for (a, b), pairs in inter.items()
    }
    return Metrics(
        Q=max(per_track_q.values(), default=0),
        X=max(per_pair_x.values(), default=0),
        D=gap,
        per_track_Q=per_track_q,
        per_pair_X=per_pair_x,
    )


# ============================================================================
# TRACK LAYOUTS
# ============================================================================

@dataclass
class TrackLayout:
    """Coloración con orden total por color; origin guarda el track de escalera de cada color"""
    color_of: Dict[int, int]
    order: List[List[int]]
    origin: List[int] = field(default_factory=list)

    @classmethod
    def from_order(cls, order: Sequence[Sequence[int]], origin: Sequence[int] = ()) -> 'TrackLayout':
        rows = [list(row) for row in order]
        color_of = {v: c for c, row in enumerate(rows) for v in row}
        return cls(color_of, rows, list(origin))

    def split_counts(self) -> Dict[int, int]:
        """Colores por track de escalera"""
        counts: Dict[int, int] = {}
        for t in self.origin:
            counts[t] = counts.get(t, 0) + 1
        return counts

    @property
    def track_count(self) -> int:
        return len(self.order)

    def position_of(self) -> Dict[int, int]:
        return {v: i for row in self.order for i, v in enumerate(row)}

    def to_dict(self) -> dict:
        return {
            'tracks': [list(row) for row in self.order],
            'track_count': self.track_count,
            'origin': list(self.origin),
        }


@dataclass
class Verdict:
    """Veredicto de un validador con el primer testigo encontrado"""
    passed: bool
    reason: str = ""
    witness: Tuple = ()

    def __bool__(self) -> bool:
        return self.passed


def validate_track_layout(tl: TrackLayout, edges: Iterable[Edge]) -> Verdict:
    """
    Valida un track layout: ninguna arista dentro de un color y ningún par
    de aristas entrelazado entre un mismo par de colores.
    """
    position = tl.position_of()
    by_pair: Dict[Tuple[int, int], List[Tuple[int, int, Edge]]] = {}
    for u, v in edges:
        if u not in tl.color_of or v not in tl.color_of:
            return Verdict(False, f"Edge ({u},{v}) has an uncoloured endpoint", ((u, v),))
        cu, cv = tl.color_of[u], tl.color_of[v]
        if cu == cv:
            return Verdict(False, f"Edge ({u},{v}) joins two vertices of colour {cu}", ((u, v),))
        if cu > cv:
            u, v, cu, cv = v, u, cv, cu
        by_pair.setdefault((cu, cv), []).append((position[u], position[v], (u, v)))

    for (a, b), items in sorted(by_pair.items()):
        items.sort()
        best: Optional[Tuple[int, int, Edge]] = None
        i = 0
        while i < len(items):
            j = i
            while j < len(items) and items[j][0] == items[i][0]:
                j += 1
            for item in items[i:j]:
                if best is not None and best[1] > item[1]:
                    return Verdict(
                        False,
                        f"Edges {best[2]} and {item[2]} cross between colours {a} and {b}",
                        (best[2], item[2]),
                    )
            for item in items[i:j]:
                if best is None or item[1] > best[1]:
                    best = item
            i = j
    return Verdict(True)


def intra_track_colouring(layout, edges: Iterable[Edge]) -> Dict[int, Dict[int, int]]:
    """
    Coloración de cada track por sus aristas internas (smallest-last).

    Un track con anidamiento máximo Q tiene degeneración menor que 4Q, así
    que usa a lo sumo max(1, 4Q) colores.
    """
    tracks = _tracks_of(layout.track_of, layout.pos_of)
    graphs: Dict[int, nx.Graph] = {}
    for t, members in tracks.items():
        graphs[t] = nx.Graph()
        graphs[t].add_nodes_from(members)
    for u, v in edges:
        if layout.track_of[u] == layout.track_of[v]:
            graphs[layout.track_of[u]].add_edge(u, v)
    return {t: nx.greedy_color(graph, strategy="smallest_last") for t, graph in graphs.items()}


def refine_to_track_layout(layout, edges: Iterable[Edge]) -> TrackLayout:
    """
    Parte cada track de la escalera en sub-tracks hasta obtener un track
    layout válido.

    Primero cada track se parte por la coloración de sus aristas internas.
    Después, recorriendo los sub-tracks en orden, cada vértice entra en la
    primera clase de su sub-track cuyas aristas hacia cada fila ya fijada
    terminan antes (o en) la primera arista del vértice hacia esa fila.

    Raises:
        InternalError: El resultado no pasa validate_track_layout
    """
    edge_list = [norm(u, v) for u, v in edges]
    tracks = _tracks_of(layout.track_of, layout.pos_of)
    colouring = intra_track_colouring(layout, edge_list)
    adjacency: Dict[int, List[int]] = {v: [] for v in layout.track_of}
    for u, v in edge_list:
        adjacency[u].append(v)
        adjacency[v].append(u)

    rows: List[List[int]] = []
    origin: List[int] = []
    row_of: Dict[int, int] = {}
    index: Dict[int, int] = {}
    for t in sorted(tracks):
        for c in range(max(colouring[t].values()) + 1):
            classes: List[List[int]] = []
            reach: List[Dict[int, int]] = []
            for v in (x for x in tracks[t] if colouring[t][x] == c):
                spans: Dict[int, Tuple[int, int]] = {}
                for w in adjacency[v]:
                    if w in row_of:
                        r, i = row_of[w], index[w]
                        lo, hi = spans.get(r, (i, i))
                        spans[r] = (min(lo, i), max(hi, i))
                k = next(
                    (k for k, seen in enumerate(reach)
                     if all(seen.get(r, -1) <= lo for r, (lo, _) in spans.items())),
                    len(classes),
                )
                if k == len(classes):
                    classes.append([])
                    reach.append({})
                classes[k].append(v)
                for r, (_, hi) in spans.items():
                    reach[k][r] = max(reach[k].get(r, -1), hi)
            for members in classes:
                for i, v in enumerate(members):
                    row_of[v] = len(rows)
                    index[v] = i
                rows.append(members)
                origin.append(t)

    tl = TrackLayout.from_order(rows, origin)
    verdict = validate_track_layout(tl, edge_list)
    if not verdict.passed:
        raise InternalError(f"Refined layout is not a track layout: {verdict.reason}", stage="refine")
    logger.info(f"[REFINE] {len(tracks)} ladder tracks -> {tl.track_count} tracks")
    return tl


# ============================================================================
# QUEUE LAYOUTS
# ============================================================================

@dataclass
class QueueLayout:
    """Orden total y asignación de cola por arista"""
    order: List[int]
    queue_of: Dict[Edge, int]

    @property
    def queue_count(self) -> int:
        return max(self.queue_of.values(), default=-1) + 1

    def to_dict(self) -> dict:
        return {
            'order': list(self.order),
            'queues': [
                [list(e) for e in sorted(e for e, q in self.queue_of.items() if q == k)]
                for k in range(self.queue_count)
            ],
            'queue_count': self.queue_count,
        }


def validate_queue_layout(ql: QueueLayout, edges: Iterable[Edge]) -> Verdict:
    """Ninguna cola contiene dos aristas anidadas."""
    index = {v: i for i, v in enumerate(ql.order)}
    per_queue: Dict[int, List[Edge]] = {}
    for u, v in edges:
        e = norm(u, v)
        if u not in index or v not in index:
            return Verdict(False, f"Edge {e} has an endpoint outside the order", (e,))
        if e not in ql.queue_of:
            return Verdict(False, f"Edge {e} has no queue", (e,))
        per_queue.setdefault(ql.queue_of[e], []).append(e)
    for q, chords in sorted(per_queue.items()):
        size, witness = max_nesting(ql.order, chords)
        if size > 1:
            return Verdict(False, f"Edges {witness[0]} and {witness[1]} nest in queue {q}", tuple(witness[:2]))
    return Verdict(True)


def track_to_queue(tl: TrackLayout, edges: Iterable[Edge]) -> QueueLayout:
    """
    Convierte un track layout válido de t colores en un queue layout de a
    lo sumo t-1 colas.

    Raises:
        InvalidInput: El track layout no es válido
    """
    edge_list = [norm(u, v) for u, v in edges]
    verdict = validate_track_layout(tl, edge_list)
    if not verdict.passed:
        raise InvalidInput(f"Track layout rejected: {verdict.reason}")
    order = [v for row in tl.order for v in row]
    queue_of = {
        e: abs(tl.color_of[e[0]] - tl.color_of[e[1]]) - 1 for e in edge_list
    }
    ql = QueueLayout(order, queue_of)
    logger.info(f"[QUEUE] {tl.track_count} colours -> {ql.queue_count} queues")
    return ql


# ============================================================================
# ORÁCULO
# ============================================================================

@dataclass
class OracleResult:
    value: int
    order: List[int]


def min_queue_oracle(edges: Iterable[Edge], vertex_count: int, max_n: int = 9) -> OracleResult:
    """
    Número de cola mínimo por búsqueda exhaustiva sobre órdenes.

    Solo se recorren órdenes con primer vértice menor que el último (un
    orden y su reverso tienen las mismas anidaciones). Cada orden se evalúa
    con max_nesting y se contrasta con greedy_queue_count.

    Raises:
        TooLarge: vertex_count > max_n
    """
    if vertex_count > max_n:
        raise TooLarge(f"Oracle limited to {max_n} vertices, got {vertex_count}")
    edge_list = sorted({norm(u, v) for u, v in edges})
    if not edge_list:
        return OracleResult(0, list(range(vertex_count)))
    lower = max(1, math.ceil(len(edge_list) / (2 * vertex_count - 3)))

    best: Optional[OracleResult] = None
    for perm in itertools.permutations(range(vertex_count)):
        if perm[0] > perm[-1]:
            continue
        value, _ = max_nesting(perm, edge_list)
        greedy = greedy_queue_count(perm, edge_list)
        if greedy != value:
            raise InternalError(
                f"Greedy queue count {greedy} differs from nesting {value} on order {perm}",
                stage="oracle",
            )
        if best is None or value < best.value:
            best = OracleResult(value, list(perm))
            if value <= lower:
                break
    return best
