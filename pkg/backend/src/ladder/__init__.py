"""
Track layouts de grafos planos mediante colocación en escalera.

Pipeline:
- Validación del encaje y triangulación de caras internas
- Reforma en grafo compuesto por capas con eliminación de cuerdas
- Colocación por esqueletos y plegado en 2D tracks
- Refinado a track layout, conversión a queue layout y dibujo 3D certificado
"""

from .errors import LadderError, InputError, ViolationError, InternalError
from .plane_graph import PlaneGraph, SubdivisionMap, validate_embedding, triangulate, contract
from .layering import reform, enumerate_regions
from .placement import PlacementConfig, LadderLayout, place, reinsert_deleted, wrap
from .verify import Metrics, TrackLayout, QueueLayout, measure, track_to_queue, min_queue_oracle
from .drawing3d import Drawing3D, embed3d, check_crossings
from .pipeline import STAGES, PipelineOptions, RunReport, run_pipeline

__all__ = [
    'LadderError', 'InputError', 'ViolationError', 'InternalError',
    'PlaneGraph', 'SubdivisionMap', 'validate_embedding', 'triangulate', 'contract',
    'reform', 'enumerate_regions',
    'PlacementConfig', 'LadderLayout', 'place', 'reinsert_deleted', 'wrap',
    'Metrics', 'TrackLayout', 'QueueLayout', 'measure', 'track_to_queue', 'min_queue_oracle',
    'Drawing3D', 'embed3d', 'check_crossings',
    'STAGES', 'PipelineOptions', 'RunReport', 'run_pipeline',
]
__version__ = '1.0.0'
