"""
==============================================================================
JERARQUÍA DE ERRORES - GENFLOW
==============================================================================

Descripción:
    Excepciones de dominio del sistema. Cada error lleva un código estable
    (estilo 'ERROR_VALIDACION') que el middleware HTTP y la CLI usan para
    construir respuestas y códigos de salida.

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""


class GenflowError(Exception):
    """Error base del sistema."""

    code = 'ERROR_GENFLOW'

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def to_dict(self):
        return {
            'success': False,
            'message': str(self),
            'error': self.code
        }


class TopologyError(GenflowError, ValueError):
    """Topología inválida o nodo desconocido."""

    code = 'ERROR_TOPOLOGIA'


class ImageError(GenflowError, ValueError):
    """Dimensiones o parámetros de imagen inválidos."""

    code = 'ERROR_IMAGEN'


class DecodeError(GenflowError, ValueError):
    """Payload corrupto; indica el byte donde falló la lectura."""

    code = 'ERROR_DECODIFICACION'

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte {offset})"
        super().__init__(message)
        self.offset = offset


class DomainError(GenflowError, ValueError):
    """Valor fuera del dominio admitido."""

    code = 'ERROR_DOMINIO'


class FitError(GenflowError, ValueError):
    """Muestras insuficientes o degeneradas para el ajuste."""

    code = 'ERROR_AJUSTE'


class ScenarioError(GenflowError, ValueError):
    """Escenario de optimización inválido."""

    code = 'ERROR_ESCENARIO'


class ConfigError(GenflowError, ValueError):
    """Configuración del pipeline inválida."""

    code = 'ERROR_CONFIGURACION'


class PipelineIOError(GenflowError, OSError):
    """Fallo de lectura/escritura con contexto de ruta."""

    code = 'ERROR_IO'

    def __init__(self, message, path=None):
        if path is not None:
            message = f"{message}: {path}"
        super().__init__(message)
        self.path = path
