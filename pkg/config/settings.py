"""
Configuración del Sistema (Singleton)
"""
import os

from dotenv import load_dotenv

from models.errors import ConfigError


class Settings:
    """Configuración única leída de variables de entorno (.env incluido)"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Settings, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        load_dotenv()

        # Directorio raíz de artefactos (dataset, muestras, curvas, resultados)
        self.OUTPUT_DIR = os.getenv('GENFLOW_OUTPUT_DIR', 'out')
        self.CONFIG_PATH = os.getenv('GENFLOW_CONFIG', 'config/pipeline.json')
        self.LOG_LEVEL = os.getenv('GENFLOW_LOG_LEVEL', 'INFO').upper()

        jobs = os.getenv('GENFLOW_JOBS', '1')
        try:
            self.JOBS = int(jobs)
        except ValueError:
            raise ConfigError(f"GENFLOW_JOBS debe ser entero, recibido {jobs!r}") from None
        if self.JOBS < 1:
            raise ConfigError(f"GENFLOW_JOBS debe ser >= 1, recibido {self.JOBS}")

        self._initialized = True

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    @classmethod
    def reset(cls):
        """Descarta la instancia para releer el entorno."""
        cls._instance = None
