"""
Jerarquía de errores del pipeline.

Cada error pertenece a una de tres familias que el CLI traduce a códigos
de salida: entrada inválida (1), violación de un validador (2) y fallo de
un invariante interno (3).
"""
from typing import Optional


class LadderError(Exception):
    """Error base del pipeline"""

    exit_code = 3
    stage = "pipeline"

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage

    def describe(self) -> str:
        return f"{type(self).__name__} [{self.stage}]: {self}"


class InputError(LadderError):
    exit_code = 1


class ViolationError(LadderError):
    exit_code = 2


class InternalError(LadderError):
    exit_code = 3


# ============================================================================
# plane_graph
# ============================================================================

class MalformedRotation(InputError):
    stage = "validate"


class NotPlanarEmbedding(InputError):
    stage = "validate"


class TooSmall(InputError):
    stage = "triangulate"


class Disconnected(InputError):
    stage = "triangulate"


class NoHostTriangle(InputError):
    stage = "subdivide"


class GraphFormatError(InputError):
    stage = "parse"


# ============================================================================
# layering / fans / skeleton
# ============================================================================

class NotTriangulated(InputError):
    stage = "reform"


class EmbeddingInvalid(InputError):
    stage = "reform"


class RootNotFound(InputError):
    stage = "regions"


class OrphanVertex(InternalError):
    stage = "fans"


class NoFan(InputError):
    stage = "fans"


class DecompositionInconsistent(InternalError):
    stage = "skeleton"


class SkeletonInvalid(InternalError):
    stage = "skeleton"


class NonTermination(InternalError):
    stage = "skeleton"


# ============================================================================
# placement
# ============================================================================

class ConfigInvalid(InputError):
    stage = "place"


class LedgerMismatch(InternalError):
    stage = "reinsert"


class DistanceExceedsD(ViolationError):
    stage = "wrap"


# ============================================================================
# verify / drawing3d / cli
# ============================================================================

class UnplacedVertex(InternalError):
    stage = "measure"


class InvalidInput(InputError):
    stage = "queue"


class TooLarge(InputError):
    stage = "oracle"


class InvalidTrackLayout(InputError):
    stage = "embed3d"


class BadParams(InputError):
    stage = "gen"
