# backend/src/ladder/formats.py
"""
Lectura y escritura de grafos planos.

Formato de texto, por líneas:
    n m
    u v            (m líneas, una por arista; el índice es la línea)
    e0 e1 ...      (n líneas: rotación horaria en índices de arista, '-' si vacía)
    f0 f1 ...      (cara externa)

Las líneas vacías y las que empiezan por '#' se ignoran. El equivalente JSON
usa las claves n, edges, rotation y outer_face con el mismo significado.
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Sequence, Union

from .errors import GraphFormatError
from .plane_graph import PlaneGraph, norm

logger = logging.getLogger(__name__)

FORMATS = ('text', 'json')


def dumps(obj: Any) -> str:
    """JSON determinista: claves ordenadas, separadores fijos y salto final"""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(',', ': ')) + '\n'


# ============================================================================
# CONSTRUCCIÓN
# ============================================================================

def _int(token: Any, what: str) -> int:
    if isinstance(token, bool):
        raise GraphFormatError(f"Expected an integer for {what}, got {token!r}")
    try:
        return int(token)
    except (TypeError, ValueError):
        raise GraphFormatError(f"Expected an integer for {what}, got {token!r}") from None


def _build(n: int, edges: Sequence[Sequence[int]], rotation: Sequence[Sequence[int]],
           outer_face: Sequence[int]) -> PlaneGraph:
    """
    Reordena las aristas a la forma canónica y traduce la rotación.

    Las aristas repetidas se conservan para que la validación del encaje
    las rechace con su propio error.
    """
    if n < 0:
        raise GraphFormatError(f"Vertex count must be non-negative, got {n}")
    if len(rotation) != n:
        raise GraphFormatError(f"Expected {n} rotation rows, got {len(rotation)}")
    pairs = []
    for i, edge in enumerate(edges):
        if len(edge) != 2:
            raise GraphFormatError(f"Edge {i} must have two endpoints, got {list(edge)}")
        u, v = (_int(x, f"edge {i}") for x in edge)
        pairs.append((norm(u, v), i))
    order = sorted(range(len(pairs)), key=lambda i: pairs[i])
    new_id = {old: new for new, old in enumerate(order)}

    remapped = []
    for v, row in enumerate(rotation):
        ids = []
        for token in row:
            eid = _int(token, f"rotation of vertex {v}")
            if eid not in new_id:
                raise GraphFormatError(f"Rotation of vertex {v} names unknown edge {eid}")
            ids.append(new_id[eid])
        remapped.append(tuple(ids))

    return PlaneGraph(
        vertex_count=n,
        edges=tuple(pairs[i][0] for i in order),
        rotation=tuple(remapped),
        outer_face=tuple(_int(x, "outer face") for x in outer_face),
    )


# ============================================================================
# LECTURA
# ============================================================================

def _parse_text(text: str) -> PlaneGraph:
    lines = [
        line.split() for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith('#')
    ]
    if not lines:
        raise GraphFormatError("Empty graph file")
    header = lines[0]
    if len(header) != 2:
        raise GraphFormatError(f"Header must be 'n m', got {' '.join(header)!r}")
    n, m = _int(header[0], "n"), _int(header[1], "m")
    if m < 0:
        raise GraphFormatError(f"Edge count must be non-negative, got {m}")
    expected = 1 + m + n + 1
    if len(lines) != expected:
        raise GraphFormatError(f"Expected {expected} non-empty lines for n={n} m={m}, got {len(lines)}")

    edges = lines[1:1 + m]
    rotation: List[List[str]] = [
        [] if row == ['-'] else row for row in lines[1 + m:1 + m + n]
    ]
    return _build(n, edges, rotation, lines[-1])


def _parse_json(text: str) -> PlaneGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"Invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise GraphFormatError("JSON graph must be an object")
    missing = [k for k in ('n', 'edges', 'rotation', 'outer_face') if k not in data]
    if missing:
        raise GraphFormatError(f"JSON graph is missing keys: {', '.join(missing)}")
    try:
        return _build(_int(data['n'], "n"), list(data['edges']),
                      [list(r) for r in data['rotation']], list(data['outer_face']))
    except TypeError as exc:
        raise GraphFormatError(f"Malformed JSON graph: {exc}") from None


def parse_graph(text: str) -> PlaneGraph:
    """
    Interpreta un grafo en texto o JSON (se detecta por el primer carácter).

    Raises:
        GraphFormatError: Si el contenido no sigue ninguno de los dos formatos
    """
    if text.lstrip().startswith('{'):
        return _parse_json(text)
    return _parse_text(text)


def read_graph(path: Union[str, Path]) -> PlaneGraph:
    """
    Lee un grafo desde disco.

    Raises:
        GraphFormatError: Fichero ilegible o mal formado
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise GraphFormatError(f"Cannot read {path}: {exc.strerror}") from None
    g = parse_graph(text)
    logger.info(f"[CLI] Read {path.name}: n={g.vertex_count} m={len(g.edges)}")
    return g


# ============================================================================
# ESCRITURA
# ============================================================================

def write_graph(g: PlaneGraph, fmt: str = 'text') -> str:
    """Serializa g en el formato pedido ('text' o 'json')"""
    if fmt == 'json':
        return dumps(g.to_dict())
    if fmt != 'text':
        raise GraphFormatError(f"Unknown graph format '{fmt}', expected one of {', '.join(FORMATS)}")
    out = [f"{g.vertex_count} {len(g.edges)}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    out.extend(' '.join(map(str, row)) if row else '-' for row in g.rotation)
    out.append(' '.join(map(str, g.outer_face)))
    return '\n'.join(out) + '\n'
