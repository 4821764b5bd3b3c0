import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    """Configuración base de trackladder"""

    # ========================================================================
    # LOGS
    # ========================================================================

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_DIR = os.getenv('LOG_DIR', '../logs')
    LOG_MAX_BYTES = int(os.getenv('LOG_MAX_BYTES', 10 * 1024 * 1024))  # 10MB
    LOG_BACKUP_COUNT = int(os.getenv('LOG_BACKUP_COUNT', '5'))

    # ========================================================================
    # SALIDA
    # ========================================================================

    # Directorio donde se escriben layout.json, metrics.json, SVG y OBJ
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', '../output')

    # Semilla por defecto de los generadores
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '7'))

    # ========================================================================
    # PIPELINE
    # ========================================================================

    # Tamaño máximo aceptado por el oráculo exhaustivo
    ORACLE_MAX_N = int(os.getenv('ORACLE_MAX_N', '9'))

    # Comprobar conectores tras cada bloque colocado (lento)
    DEBUG_VERIFY = os.getenv('DEBUG_VERIFY', 'false').lower() in ('1', 'true', 'yes')

    # Levantamientos permitidos por arista al reparar el dibujo 3D
    REPAIR_LIMIT_FACTOR = int(os.getenv('REPAIR_LIMIT_FACTOR', '4'))

    # ========================================================================
    # CORPUS
    # ========================================================================

    CORPUS_SIZE = int(os.getenv('CORPUS_SIZE', '200'))
    CORPUS_MIN_N = int(os.getenv('CORPUS_MIN_N', '10'))
    CORPUS_MAX_N = int(os.getenv('CORPUS_MAX_N', '200'))

    @classmethod
    def output_path(cls, name):
        """
        Retorna la ruta de un fichero de salida, creando el directorio si
        no existe.
        """
        os.makedirs(cls.OUTPUT_DIR, exist_ok=True)
        return os.path.join(cls.OUTPUT_DIR, name)

    @classmethod
    def is_debug_verify(cls):
        """Retorna True si la colocación debe verificarse bloque a bloque."""
        return cls.DEBUG_VERIFY
