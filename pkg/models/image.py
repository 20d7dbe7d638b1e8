"""
==============================================================================
MODELO DE DOMINIO - IMÁGENES, PROMPTS CODIFICADOS Y MÁSCARAS DE INTERCAMBIO
==============================================================================

Descripción:
    Tipos inmutables del pipeline de contenido: la imagen de 8 bits, el
    prompt codificado (bitstream + bpp + semilla de generación) y la máscara
    de intercambio de píxeles con prefijos anidados.

Serialización de EncodedPrompt:
    Cabecera de 16 bytes little-endian '<2sBBHHQ'
        magic 'GF' | codec-id | canales | ancho | alto | semilla
    seguida del payload. El bpp cuenta solo el payload.

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import math
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

from models.errors import DecodeError, ImageError


TAMANO_BLOQUE = 8
MAGIC_PROMPT = b'GF'
FORMATO_CABECERA = '<2sBBHHQ'
TAMANO_CABECERA = struct.calcsize(FORMATO_CABECERA)


class CodecId(str, Enum):
    JPEG_LIKE = 'jpeg-like'
    LATENT_LOW = 'latent-low'
    LATENT_MED = 'latent-med'
    LATENT_HIGH = 'latent-high'

    @property
    def code(self):
        return list(CodecId).index(self)

    @classmethod
    def from_code(cls, code):
        return list(cls)[code]

    @classmethod
    def for_tier(cls, tier):
        return cls(f'latent-{tier}')

    @property
    def is_latent(self):
        return self is not CodecId.JPEG_LIKE

    @property
    def tier(self):
        return self.value.split('-', 1)[1] if self.is_latent else None


@dataclass(frozen=True, eq=False)
class Image:
    """
    Imagen de 8 bits en orden fila-mayor con canales intercalados.

    El arreglo interno tiene forma (alto, ancho, canales) y dtype uint8.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arreglo = np.asarray(self.pixels)
        if arreglo.ndim == 2:
            arreglo = arreglo[:, :, None]
        if arreglo.ndim != 3 or arreglo.shape[2] not in (1, 3):
            raise ImageError(f"forma de imagen inválida: {arreglo.shape}")
        alto, ancho, _ = arreglo.shape
        if ancho < TAMANO_BLOQUE or alto < TAMANO_BLOQUE:
            raise ImageError(f"dimensiones {ancho}x{alto} menores que el bloque de {TAMANO_BLOQUE}")
        arreglo = np.ascontiguousarray(arreglo, dtype=np.uint8)
        arreglo.setflags(write=False)
        object.__setattr__(self, 'pixels', arreglo)

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def channels(self):
        return self.pixels.shape[2]

    @property
    def samples(self):
        return self.pixels.tobytes()

    @property
    def pixel_count(self):
        return self.width * self.height

    def same_shape(self, otra):
        return self.pixels.shape == otra.pixels.shape

    def __eq__(self, otra):
        if not isinstance(otra, Image):
            return NotImplemented
        return self.same_shape(otra) and np.array_equal(self.pixels, otra.pixels)

    def __hash__(self):
        return hash((self.pixels.shape, self.samples))

    def __repr__(self):
        return f"<Image {self.width}x{self.height}x{self.channels}>"


@dataclass(frozen=True)
class EncodedPrompt:
    """
    Prompt codificado P_x: bitstream de un códec y su tamaño en bpp.
    """

    codec: CodecId
    payload: bytes
    width: int
    height: int
    channels: int
    seed: int = 0
    bpp: float = None

    def __post_init__(self):
        calculado = 8.0 * len(self.payload) / (self.width * self.height)
        if self.bpp is None:
            object.__setattr__(self, 'bpp', calculado)
        elif not math.isclose(self.bpp, calculado, rel_tol=0, abs_tol=1e-12):
            raise ImageError(f"bpp declarado {self.bpp} != calculado {calculado}")
        if not 0 <= self.seed < 2 ** 64:
            raise ImageError(f"semilla fuera de rango de 64 bits: {self.seed}")

    def to_bytes(self):
        cabecera = struct.pack(
            FORMATO_CABECERA, MAGIC_PROMPT, self.codec.code,
            self.channels, self.width, self.height, self.seed
        )
        return cabecera + self.payload

    @classmethod
    def from_bytes(cls, datos):
        if len(datos) < TAMANO_CABECERA:
            raise DecodeError("cabecera truncada", offset=len(datos))
        magic, codigo, canales, ancho, alto, semilla = struct.unpack_from(FORMATO_CABECERA, datos)
        if magic != MAGIC_PROMPT:
            raise DecodeError(f"magic inválido {magic!r}", offset=0)
        if codigo >= len(CodecId):
            raise DecodeError(f"codec-id desconocido {codigo}", offset=2)
        return cls(
            codec=CodecId.from_code(codigo),
            payload=bytes(datos[TAMANO_CABECERA:]),
            width=ancho, height=alto, channels=canales, seed=semilla
        )

    def __repr__(self):
        return (f"<EncodedPrompt {self.codec.value} {self.width}x{self.height} "
                f"bytes={len(self.payload)} bpp={self.bpp:.4f}>")


@dataclass(frozen=True, eq=False)
class SwapMask:
    """
    Permutación de índices de píxel derivada de una semilla. El prefijo
    activo crece con gamma, así que las máscaras son anidadas.
    """

    order: np.ndarray
    seed: int

    @classmethod
    def from_seed(cls, pixel_count, seed):
        generador = np.random.default_rng(seed)
        return cls(order=generador.permutation(pixel_count), seed=seed)

    @staticmethod
    def active_length(gamma, pixel_count):
        if not 0.0 <= gamma <= 1.0:
            raise ImageError(f"gamma fuera de [0,1]: {gamma}")
        # el epsilon absorbe productos como 0.29 * 100 = 28.999999999999996
        return min(pixel_count, math.floor(gamma * pixel_count + 1e-9))

    def prefix(self, gamma):
        return self.order[:self.active_length(gamma, len(self.order))]
