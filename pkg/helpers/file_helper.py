"""
==============================================================================
HELPER DE GESTIÓN DE ARCHIVOS Y ARTEFACTOS
==============================================================================

Descripción:
    Helper Singleton para la lectura y escritura de los artefactos del
    pipeline: archivos JSON (configuración, escenarios, curvas, manifiesto)
    y CSV listos para graficar, con una línea de comentario de procedencia.

Características:
    - Patrón Singleton para gestión única de recursos
    - JSON canónico (claves ordenadas, sin espacios) para hashing estable
    - Hash FNV-1a de 64 bits de la configuración
    - SHA-256 por archivo para el manifiesto del dataset
    - CSV con pandas y formato numérico fijo (re-ejecuciones idénticas)
    - Errores de E/S con la ruta implicada

Formato de cabecera CSV:
    # genflow 1.0.0 config=<hash> extractor=genflow-features/1 [fid_max=...]
    columna1,columna2,...

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import hashlib
import json
import logging
from pathlib import Path

import pandas as pd

from models.errors import ConfigError, PipelineIOError


logger = logging.getLogger(__name__)

VERSION_HERRAMIENTA = 'genflow 1.0.0'
FNV_OFFSET_64 = 0xcbf29ce484222325
FNV_PRIMO_64 = 0x100000001b3
MASCARA_64 = 0xFFFFFFFFFFFFFFFF
FORMATO_FLOTANTE = '%.10g'


class FileHelper:
    """
    Helper de archivos del pipeline.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(FileHelper, cls).__new__(cls)
        return cls._instance

    # =========================================================================
    # HASHING
    # =========================================================================
    @staticmethod
    def canonical_json(datos):
        return json.dumps(datos, sort_keys=True, separators=(',', ':'), ensure_ascii=False)

    @staticmethod
    def fnv1a_64(datos):
        """FNV-1a de 64 bits sobre bytes, en hexadecimal de 16 dígitos."""
        valor = FNV_OFFSET_64
        for byte in datos:
            valor ^= byte
            valor = (valor * FNV_PRIMO_64) & MASCARA_64
        return f"{valor:016x}"

    def config_hash(self, datos):
        return self.fnv1a_64(self.canonical_json(datos).encode('utf-8'))

    @staticmethod
    def file_hash(ruta):
        """
        SHA-256 del contenido de un archivo.

        Raises:
            PipelineIOError: archivo ilegible
        """
        try:
            return hashlib.sha256(Path(ruta).read_bytes()).hexdigest()
        except OSError as error:
            raise PipelineIOError(f"no se pudo leer: {error.strerror}", ruta) from error

    # =========================================================================
    # DIRECTORIOS
    # =========================================================================
    @staticmethod
    def ensure_directory(ruta):
        """
        Crea el directorio (y padres) si no existe.

        Raises:
            PipelineIOError: sin permisos o ruta ocupada por un archivo
        """
        ruta = Path(ruta)
        try:
            ruta.mkdir(parents=True, exist_ok=True)
        except OSError as error:
            raise PipelineIOError(f"no se pudo crear el directorio: {error.strerror}", ruta) from error
        return ruta

    @staticmethod
    def resolve_relative(ruta, base):
        """Resuelve ruta relativa al directorio del archivo base."""
        ruta = Path(ruta)
        if ruta.is_absolute():
            return ruta
        return Path(base).parent / ruta

    # =========================================================================
    # JSON
    # =========================================================================
    @staticmethod
    def read_json(ruta):
        """
        Lee un archivo JSON.

        Raises:
            PipelineIOError: archivo inexistente o ilegible
            ConfigError: JSON malformado, con línea y columna
        """
        ruta = Path(ruta)
        try:
            texto = ruta.read_text(encoding='utf-8')
        except OSError as error:
            raise PipelineIOError(f"no se pudo leer: {error.strerror}", ruta) from error
        try:
            return json.loads(texto)
        except json.JSONDecodeError as error:
            raise ConfigError(
                f"{ruta}: JSON inválido en línea {error.lineno}, columna {error.colno}: {error.msg}"
            ) from None

    def write_json(self, ruta, datos):
        """Escribe JSON con claves ordenadas y salto de línea final."""
        ruta = Path(ruta)
        self.ensure_directory(ruta.parent)
        try:
            ruta.write_text(
                json.dumps(datos, sort_keys=True, indent=2, ensure_ascii=False) + '\n',
                encoding='utf-8'
            )
        except OSError as error:
            raise PipelineIOError(f"no se pudo escribir: {error.strerror}", ruta) from error
        return ruta

    # =========================================================================
    # CSV
    # =========================================================================
    @staticmethod
    def provenance_line(config_hash, extractor=None, **extra):
        partes = [VERSION_HERRAMIENTA, f"config={config_hash}"]
        if extractor:
            partes.append(f"extractor={extractor}")
        for clave in sorted(extra):
            if extra[clave] is not None:
                valor = extra[clave]
                partes.append(f"{clave}={valor:.10g}" if isinstance(valor, float) else f"{clave}={valor}")
        return '# ' + ' '.join(partes)

    def write_csv(self, ruta, filas, columnas, cabecera):
        """
        Escribe filas (lista de dicts) como CSV con la línea de procedencia.

        Args:
            ruta (str|Path): archivo destino
            filas (list): diccionarios con al menos las columnas pedidas
            columnas (list): orden de columnas
            cabecera (str): línea de comentario (ver provenance_line)
        """
        ruta = Path(ruta)
        self.ensure_directory(ruta.parent)
        df = pd.DataFrame(list(filas), columns=list(columnas))
        try:
            with open(ruta, 'w', encoding='utf-8', newline='') as archivo:
                archivo.write(cabecera + '\n')
                df.to_csv(archivo, index=False, float_format=FORMATO_FLOTANTE,
                          na_rep='NaN', lineterminator='\n')
        except OSError as error:
            raise PipelineIOError(f"no se pudo escribir: {error.strerror}", ruta) from error
        logger.debug("CSV %s: %d filas", ruta, len(df))
        return ruta

    @staticmethod
    def read_csv(ruta):
        """
        Lee un CSV del pipeline.

        Returns:
            tuple: (DataFrame, dict con los pares clave=valor de la cabecera)
        """
        ruta = Path(ruta)
        try:
            with open(ruta, encoding='utf-8') as archivo:
                primera = archivo.readline()
            df = pd.read_csv(ruta, comment='#')
        except OSError as error:
            raise PipelineIOError(f"no se pudo leer: {error.strerror}", ruta) from error

        metadatos = {}
        if primera.startswith('#'):
            for token in primera[1:].split():
                clave, separador, valor = token.partition('=')
                if separador:
                    metadatos[clave] = valor
        return df, metadatos

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
