# backend/src/ladder/drawing3d.py
"""
Dibujo 3D en rejilla a partir de un track layout.

El color c (base 0) ocupa la recta vertical (c+1, (c+1)^2); cada vértice
se sitúa a la altura de su posición en el track. El certificado de cruces
usa aritmética entera exacta; numpy solo filtra por cajas envolventes.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import InternalError, InvalidTrackLayout
from .plane_graph import Edge, norm
from .verify import TrackLayout, Verdict, validate_track_layout

logger = logging.getLogger(__name__)

Point = Tuple[int, int, int]


@dataclass
class Drawing3D:
    coords: Dict[int, Point]
    lifts: int = 0

    @property
    def volume(self) -> Tuple[int, int, int]:
        if not self.coords:
            return (0, 0, 0)
        xs, ys, zs = zip(*self.coords.values())
        return (max(xs), max(ys), max(zs) + 1)

    def to_dict(self) -> dict:
        return {
            'coords': {str(v): list(p) for v, p in sorted(self.coords.items())},
            'volume': list(self.volume),
            'lifts': self.lifts,
        }


# ============================================================================
# PREDICADOS EXACTOS
# ============================================================================

def _sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a: Point, b: Point) -> Point:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot(a: Point, b: Point) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _orient2d(a, b, c) -> int:
    value = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (value > 0) - (value < 0)


def _on_segment2d(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _segments_meet2d(p0, p1, q0, q1) -> bool:
    o1 = _orient2d(p0, p1, q0)
    o2 = _orient2d(p0, p1, q1)
    o3 = _orient2d(q0, q1, p0)
    o4 = _orient2d(q0, q1, p1)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_segment2d(p0, p1, q0):
        return True
    if o2 == 0 and _on_segment2d(p0, p1, q1):
        return True
    if o3 == 0 and _on_segment2d(q0, q1, p0):
        return True
    if o4 == 0 and _on_segment2d(q0, q1, p1):
        return True
    return False


def segments_intersect(p0: Point, p1: Point, q0: Point, q1: Point, shared: bool = False) -> bool:
    """
    Decide con enteros si dos segmentos se tocan.

    Con shared=True los segmentos comparten un extremo y solo cuenta un
    solapamiento colineal de longitud positiva.
    """
    d1 = _sub(p1, p0)
    d2 = _sub(q1, q0)
    r = _sub(q0, p0)
    normal = _cross(d1, d2)
    if normal != (0, 0, 0):
        if shared or _dot(r, normal) != 0:
            return False
        drop = max(range(3), key=lambda k: abs(normal[k]))
        keep = [k for k in range(3) if k != drop]

        def flat(p):
            return (p[keep[0]], p[keep[1]])

        return _segments_meet2d(flat(p0), flat(p1), flat(q0), flat(q1))

    if _cross(r, d1) != (0, 0, 0):
        return False
    axis = max(range(3), key=lambda k: abs(d1[k]))
    lo = max(min(p0[axis], p1[axis]), min(q0[axis], q1[axis]))
    hi = min(max(p0[axis], p1[axis]), max(q0[axis], q1[axis]))
    if hi > lo:
        return True
    return hi == lo and not shared


def _touches(d: Drawing3D, e: Edge, f: Edge) -> bool:
    common = set(e) & set(f)
    if len(common) == 1:
        shared = common.pop()
        a = e[0] if e[1] == shared else e[1]
        b = f[0] if f[1] == shared else f[1]
        return segments_intersect(d.coords[shared], d.coords[a], d.coords[shared], d.coords[b], shared=True)
    return segments_intersect(d.coords[e[0]], d.coords[e[1]], d.coords[f[0]], d.coords[f[1]])


def crossing_pairs(d: Drawing3D, segments: Sequence[Edge], rows: Optional[Iterable[int]] = None) -> Set[Tuple[int, int]]:
    """
    Pares (i, j), i < j, de índices de segments que se tocan.

    Args:
        d: Dibujo con coordenadas para todos los extremos
        segments: Aristas normalizadas
        rows: Si se da, solo se prueban los pares con algún índice en rows
    """
    if len(segments) < 2:
        return set()
    ends = np.array(
        [[d.coords[u], d.coords[v]] for u, v in segments], dtype=np.int64
    )
    lo = ends.min(axis=1)
    hi = ends.max(axis=1)
    hits: Set[Tuple[int, int]] = set()
    selected = range(len(segments) - 1) if rows is None else sorted(set(rows))
    for i in selected:
        start = i + 1 if rows is None else 0
        overlap = np.all(lo[start:] <= hi[i], axis=1) & np.all(hi[start:] >= lo[i], axis=1)
        for offset in np.nonzero(overlap)[0]:
            j = start + int(offset)
            pair = (min(i, j), max(i, j))
            if j == i or pair in hits:
                continue
            if _touches(d, segments[pair[0]], segments[pair[1]]):
                hits.add(pair)
    return hits


def check_crossings(d: Drawing3D, edges: Iterable[Edge]) -> Verdict:
    """
    Certifica que ningún par de segmentos se interseca.

    Returns:
        Verdict: Con el primer par de aristas que se toca como testigo
    """
    segments: List[Edge] = sorted({norm(u, v) for u, v in edges})
    for u, v in segments:
        for w in (u, v):
            if w not in d.coords:
                return Verdict(False, f"Vertex {w} has no coordinates", ((u, v),))
    points = list(d.coords.values())
    if len(set(points)) != len(points):
        return Verdict(False, "Two vertices share coordinates")
    pairs = crossing_pairs(d, segments)
    if pairs:
        i, j = min(pairs)
        e, f = segments[i], segments[j]
        return Verdict(False, f"Segments {e} and {f} intersect", (e, f))
    return Verdict(True)


# ============================================================================
# EMBEDDING
# ============================================================================

def embed3d(tl: TrackLayout, edges: Iterable[Edge], repair_limit_factor: int = 4) -> Drawing3D:
    """
    Coloca cada vértice sobre la recta de su color y certifica el dibujo.

    Si hay un par de segmentos que se toca, el extremo más alto del menor
    par (desempate por color) y los vértices posteriores de su track suben
    una unidad. Tras cada subida solo se vuelven a probar los segmentos
    con algún extremo movido.

    Raises:
        InvalidTrackLayout: El track layout no es válido
        InternalError: Se agotó el límite de subidas
    """
    edge_list = sorted({norm(u, v) for u, v in edges})
    verdict = validate_track_layout(tl, edge_list)
    if not verdict.passed:
        raise InvalidTrackLayout(f"Track layout rejected: {verdict.reason}")

    coords: Dict[int, Point] = {}
    for c, row in enumerate(tl.order):
        for z, v in enumerate(row):
            coords[v] = (c + 1, (c + 1) ** 2, z)
    drawing = Drawing3D(coords)

    incident: Dict[int, List[int]] = {}
    for k, (u, v) in enumerate(edge_list):
        incident.setdefault(u, []).append(k)
        incident.setdefault(v, []).append(k)

    limit = repair_limit_factor * len(edge_list) + 10
    pairs = crossing_pairs(drawing, edge_list)
    while pairs:
        i, j = min(pairs)
        e, f = edge_list[i], edge_list[j]
        if drawing.lifts >= limit:
            raise InternalError(f"3D repair exceeded {limit} lifts: segments {e} and {f} intersect", stage="embed3d")
        top = max(set(e) | set(f), key=lambda v: (coords[v][2], tl.color_of[v]))
        color, z0 = tl.color_of[top], coords[top][2]
        moved = set()
        for v in tl.order[color]:
            x, y, z = coords[v]
            if z >= z0:
                coords[v] = (x, y, z + 1)
                moved.add(v)
        drawing.lifts += 1
        logger.debug(f"[3D] Lifted vertex {top} on colour {color} (segments {e} and {f})")
        touched = {k for v in moved for k in incident.get(v, ())}
        pairs = {p for p in pairs if p[0] not in touched and p[1] not in touched}
        pairs |= crossing_pairs(drawing, edge_list, touched)

    logger.info(f"[3D] Certified drawing, volume={drawing.volume}, lifts={drawing.lifts}")
    return drawing


# ============================================================================
# EXPORTACIÓN
# ============================================================================

def to_obj(d: Drawing3D, edges: Iterable[Edge]) -> str:
    """Texto OBJ con registros v y l"""
    vertices = sorted(d.coords)
    index = {v: i + 1 for i, v in enumerate(vertices)}
    lines = [f"# {len(vertices)} vertices"]
    for v in vertices:
        x, y, z = d.coords[v]
        lines.append(f"v {x} {y} {z}")
    for u, v in sorted({norm(a, b) for a, b in edges}):
        lines.append(f"l {index[u]} {index[v]}")
    return "\n".join(lines) + "\n"


def to_svg(d: Drawing3D, edges: Iterable[Edge], scale: int = 40, step: int = 16) -> str:
    """Proyección ortográfica sobre el plano x-z"""
    width = (d.volume[0] + 1) * scale
    height = (d.volume[2] + 1) * step

    def screen(v):
        x, _, z = d.coords[v]
        return x * scale, height - (z + 1) * step + step // 2

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for u, v in sorted({norm(a, b) for a, b in edges}):
        (x1, y1), (x2, y2) = screen(u), screen(v)
        parts.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#555" stroke-width="1"/>')
    for v in sorted(d.coords):
        cx, cy = screen(v)
        parts.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="#1f77b4"><title>{v}</title></circle>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"
