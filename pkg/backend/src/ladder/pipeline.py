# backend/src/ladder/pipeline.py
"""
Ejecución por etapas del pipeline completo:

    validate → triangulate → reform → place → reinsert → wrap → refine → queue → embed3d

Cada etapa se cronometra; las comprobaciones que no abortan la ejecución
se acumulan como violaciones (fallos de validador) o hallazgos
(mediciones informativas) en el RunReport.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from .drawing3d import Drawing3D, check_crossings, embed3d
from .errors import BadParams
from .layering import ReformResult, check_edge_conservation, reform, row_crossings
from .placement import (
    LadderLayout,
    PlacementConfig,
    derive_config,
    place,
    reinsert_deleted,
    reinsertion_report,
    wrap,
)
from .plane_graph import Edge, PlaneGraph, SubdivisionMap, contract, triangulate, validate_embedding
from .verify import (
    Metrics,
    QueueLayout,
    TrackLayout,
    measure,
    refine_to_track_layout,
    track_to_queue,
    validate_queue_layout,
    validate_track_layout,
)

logger = logging.getLogger(__name__)

STAGES = ('validate', 'triangulate', 'reform', 'place', 'reinsert', 'wrap', 'refine', 'queue', 'embed3d')


@dataclass
class PipelineOptions:
    """Opciones de una ejecución"""
    stop_after: Optional[str] = None
    config: Optional[PlacementConfig] = None
    debug_verify: bool = False
    repair_limit_factor: int = 4

    def __post_init__(self):
        if self.stop_after is not None and self.stop_after not in STAGES:
            raise BadParams(f"Unknown stage '{self.stop_after}', expected one of {', '.join(STAGES)}")


@dataclass
class RunReport:
    """Resumen de una ejecución; los tiempos no se serializan"""
    input_id: str
    stages_run: List[str] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    config: Optional[PlacementConfig] = None
    metrics: Optional[Metrics] = None
    wrapped_metrics: Optional[Metrics] = None
    ladder_tracks: int = 0
    track_count: int = 0
    queue_count: int = 0
    volume: Optional[tuple] = None
    violations: List[str] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)
    reinsertion: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        data = {
            'input': self.input_id,
            'stages': list(self.stages_run),
            'config': self.config.to_dict() if self.config else None,
            'ladder_tracks': self.ladder_tracks,
            'track_count': self.track_count,
            'queue_count': self.queue_count,
            'volume': list(self.volume) if self.volume else None,
            'violations': list(self.violations),
            'findings': list(self.findings),
            'reinsertion': list(self.reinsertion),
            'passed': self.passed,
        }
        if self.metrics:
            data.update(self.metrics.to_dict())
        if self.wrapped_metrics:
            data['wrapped'] = self.wrapped_metrics.to_dict()
        return data


@dataclass
class PipelineResult:
    report: RunReport
    reform: Optional[ReformResult] = None
    layout: Optional[LadderLayout] = None
    wrapped: Optional[LadderLayout] = None
    track_layout: Optional[TrackLayout] = None
    queue_layout: Optional[QueueLayout] = None
    drawing: Optional[Drawing3D] = None
    final_edges: FrozenSet[Edge] = frozenset()

    def artifacts(self) -> Dict[str, dict]:
        """Ficheros JSON producidos, por nombre"""
        out: Dict[str, dict] = {}
        if self.reform is not None:
            out['reform.json'] = self.reform.to_dict()
        if self.wrapped is not None or self.layout is not None:
            layout = (self.wrapped or self.layout).to_dict()
            if self.track_layout is not None:
                layout['track_layout'] = self.track_layout.to_dict()
            if self.queue_layout is not None:
                layout['queue_layout'] = self.queue_layout.to_dict()
            out['layout.json'] = layout
        if self.report.metrics is not None:
            out['metrics.json'] = self.report.to_dict()
        if self.drawing is not None:
            out['drawing.json'] = self.drawing.to_dict()
        return out


class _Stages:
    """Cronómetro y control de --stop-after"""

    def __init__(self, report: RunReport, stop_after: Optional[str]):
        self.report = report
        self.stop_after = stop_after
        self._started = 0.0
        self._current = ''

    def begin(self, name: str):
        self._current = name
        self._started = time.perf_counter()

    def end(self) -> bool:
        """Cierra la etapa; True si hay que detenerse"""
        self.report.timings[self._current] = time.perf_counter() - self._started
        self.report.stages_run.append(self._current)
        logger.debug(f"[CLI] Stage {self._current} done in {self.report.timings[self._current]:.3f}s")
        return self._current == self.stop_after


def run_pipeline(g: PlaneGraph, input_id: str = 'input', options: Optional[PipelineOptions] = None) -> PipelineResult:
    """
    Ejecuta el pipeline sobre g.

    Los errores de cada etapa se propagan con su etiqueta de etapa. Las
    comprobaciones posteriores a cada etapa no abortan: se registran en el
    informe y el resultado se devuelve igualmente.

    Args:
        g: Grafo plano de entrada
        input_id: Nombre del caso para el informe
        options: Opciones de ejecución

    Returns:
        PipelineResult: Informe y artefactos de las etapas ejecutadas
    """
    options = options or PipelineOptions()
    report = RunReport(input_id=input_id)
    result = PipelineResult(report=report)
    stages = _Stages(report, options.stop_after)
    violations = report.violations

    stages.begin('validate')
    validate_embedding(g).raise_for_verdict()
    if stages.end():
        return result

    stages.begin('triangulate')
    tg, tmap = triangulate(g)
    if stages.end():
        return result

    stages.begin('reform')
    rr = reform(tg)
    result.reform = rr
    total: SubdivisionMap = tmap.then(rr.smap)
    total = SubdivisionMap(g.edge_set, total.subdivision_vertices, total.dummy_edges)
    if contract(rr.graph, total) != g.edge_set:
        violations.append("Contracting the reformed graph does not give back the input edges")
    violations.extend(check_edge_conservation(rr.cl, rr.ledger, rr.graph.edges))
    for e, f in row_crossings(rr.cl):
        violations.append(f"Kept edges {e} and {f} cross in the row drawing")
    result.final_edges = g.edge_set
    if stages.end():
        return result

    stages.begin('place')
    cfg = options.config or derive_config(rr.cl, rr.ledger)
    report.config = cfg
    layout = place(rr.cl, rr.ledger, cfg, debug_verify=options.debug_verify)
    violations.extend(layout.violations)
    report.findings.extend(layout.findings)
    report.ladder_tracks = layout.track_count
    result.layout = layout
    if stages.end():
        return result

    stages.begin('reinsert')
    layout = reinsert_deleted(layout, rr.ledger)
    result.layout = layout
    report.reinsertion = reinsertion_report(layout, rr.ledger)
    report.metrics = measure(layout, layout.active)
    if stages.end():
        return result

    stages.begin('wrap')
    wrapped = wrap(layout, cfg.D)
    result.wrapped = wrapped
    report.wrapped_metrics = measure(wrapped, wrapped.active)
    before, after = report.metrics, report.wrapped_metrics
    if (before.Q, before.X) != (after.Q, after.X):
        violations.append(f"Wrap changed (Q, X) from {(before.Q, before.X)} to {(after.Q, after.X)}")
    if wrapped.track_count > 2 * cfg.D:
        violations.append(f"Wrapped layout uses {wrapped.track_count} tracks, more than 2D={2 * cfg.D}")
    if stages.end():
        return result

    # Las etapas finales trabajan sobre G: vértices originales y sus aristas
    final = wrapped.restricted(range(g.vertex_count))
    edges = sorted(g.edge_set)

    stages.begin('refine')
    tl = refine_to_track_layout(final, edges)
    result.track_layout = tl
    report.track_count = tl.track_count
    if set(tl.color_of) != set(range(g.vertex_count)):
        violations.append(f"Track layout covers {len(tl.color_of)} vertices, expected {g.vertex_count}")
    splits = {t: k for t, k in tl.split_counts().items() if k > 1}
    if splits:
        report.findings.append(
            f"Refine split {len(splits)} ladder tracks, at most {max(splits.values())} tracks each"
        )
    verdict = validate_track_layout(tl, edges)
    if not verdict:
        violations.append(f"Track layout invalid: {verdict.reason}")
    if stages.end():
        return result

    stages.begin('queue')
    ql = track_to_queue(tl, edges)
    result.queue_layout = ql
    report.queue_count = ql.queue_count
    verdict = validate_queue_layout(ql, edges)
    if not verdict:
        violations.append(f"Queue layout invalid: {verdict.reason}")
    if ql.queue_count > max(0, tl.track_count - 1):
        violations.append(f"{ql.queue_count} queues for {tl.track_count} tracks")
    if stages.end():
        return result

    stages.begin('embed3d')
    drawing = embed3d(tl, edges, repair_limit_factor=options.repair_limit_factor)
    result.drawing = drawing
    report.volume = drawing.volume
    if drawing.lifts:
        report.findings.append(f"3D repair lifted {drawing.lifts} times")
    verdict = check_crossings(drawing, edges)
    if not verdict:
        violations.append(f"3D drawing not crossing-free: {verdict.reason}")
    stages.end()

    logger.info(
        f"[CLI] {input_id}: Q={report.metrics.Q} X={report.metrics.X} D={report.metrics.D} "
        f"tracks={report.track_count} queues={report.queue_count} violations={len(violations)}"
    )
    return result
