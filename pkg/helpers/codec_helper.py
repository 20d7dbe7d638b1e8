"""
==============================================================================
HELPER DE CÓDECS - JPEG-LIKE Y CÓDEC LATENTE GENERATIVO EMULADO
==============================================================================

Descripción:
    Helper Singleton con los dos esquemas de transmisión del caso de
    estudio: un códec de transformada tipo JPEG con perilla de calidad (la
    línea base de replicación) y un códec latente de tres niveles cuyo
    decodificador "genera" la imagen a partir del prompt más detalle
    sintético sembrado.

Características:
    - DCT 8x8 por canal (scipy.fft, normalización ortonormal)
    - Tabla de cuantización escalada con la regla estándar de calidad
    - Zig-zag + run-length + códigos prefijo canónicos (tablas fijas)
    - Empaquetado de bits vectorizado con numpy
    - Decodificación con tabla de búsqueda de 16 bits
    - Niveles latentes: submuestreo 8x / 4x / 2x + cuantización gruesa
    - Detalle generativo: ruido gaussiano sembrado filtrado por un kernel
      paso-alto fijo, con amplitud por nivel

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import math

import cv2
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import dctn, idctn

from models.errors import DecodeError, ImageError
from models.image import TAMANO_BLOQUE, CodecId, EncodedPrompt, Image


VERSION_TABLAS = 'genflow-huffman/1'

TABLA_CUANTIZACION_BASE = np.array((
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99
), dtype=np.float64)

# posición zig-zag de cada índice en orden raster
ZIGZAG = np.array((
    0, 1, 5, 6, 14, 15, 27, 28,
    2, 4, 7, 13, 16, 26, 29, 42,
    3, 8, 12, 17, 25, 30, 41, 43,
    9, 11, 18, 24, 31, 40, 44, 53,
    10, 19, 23, 32, 39, 45, 52, 54,
    20, 22, 33, 38, 46, 51, 55, 60,
    21, 34, 37, 47, 50, 56, 59, 61,
    35, 36, 48, 49, 57, 58, 62, 63
))
RASTER_DESDE_ZIGZAG = np.argsort(ZIGZAG)

DC_BITS = (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0)
DC_VALORES = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)
AC_BITS = (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d)
AC_VALORES = (
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7,
    0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5,
    0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
    0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8,
    0xf9, 0xfa
)
SIMBOLO_EOB = 0x00
SIMBOLO_ZRL = 0xF0

# las diferencias DC deben caber en la categoría 11
MAX_DC = 1023
MAX_AC = 1023

FACTOR_NIVEL = {'low': 8, 'med': 4, 'high': 2}
CALIDAD_NIVEL = {'low': 25, 'med': 30, 'high': 40}
AMPLITUD_DETALLE = {'low': 22.0, 'med': 13.0, 'high': 6.0}
KERNEL_PASO_ALTO = np.array([
    [-1.0, -1.0, -1.0],
    [-1.0, 8.0, -1.0],
    [-1.0, -1.0, -1.0]
]) / 8.0


def _construir_codigos(bits, valores):
    """Códigos canónicos (símbolo -> (código, longitud)) desde BITS/HUFFVAL."""
    codigos = {}
    codigo = 0
    k = 0
    for longitud in range(1, 17):
        for _ in range(bits[longitud - 1]):
            codigos[valores[k]] = (codigo, longitud)
            k += 1
            codigo += 1
        codigo <<= 1
    return codigos


def _tablas_codificacion(codigos):
    valores = np.zeros(256, dtype=np.uint64)
    longitudes = np.zeros(256, dtype=np.int64)
    for simbolo, (codigo, longitud) in codigos.items():
        valores[simbolo] = codigo
        longitudes[simbolo] = longitud
    return valores, longitudes


def _tabla_busqueda(codigos):
    """Tabla de 2^16 entradas: ventana de 16 bits -> (símbolo, longitud)."""
    simbolos = np.zeros(1 << 16, dtype=np.int64)
    longitudes = np.zeros(1 << 16, dtype=np.int64)
    for simbolo, (codigo, longitud) in codigos.items():
        inicio = codigo << (16 - longitud)
        fin = inicio + (1 << (16 - longitud))
        simbolos[inicio:fin] = simbolo
        longitudes[inicio:fin] = longitud
    return simbolos.tolist(), longitudes.tolist()


_CODIGOS_DC = _construir_codigos(DC_BITS, DC_VALORES)
_CODIGOS_AC = _construir_codigos(AC_BITS, AC_VALORES)
_CODIF_DC = _tablas_codificacion(_CODIGOS_DC)
_CODIF_AC = _tablas_codificacion(_CODIGOS_AC)
_BUSQUEDA_DC = _tabla_busqueda(_CODIGOS_DC)
_BUSQUEDA_AC = _tabla_busqueda(_CODIGOS_AC)
_PESOS_VENTANA = (1 << np.arange(15, -1, -1)).astype(np.int64)


def quantization_table(quality):
    """
    Tabla de cuantización escalada (orden raster).

    scale = 5000/q para q < 50, 200 - 2q en otro caso.
    """
    if not 1 <= int(quality) <= 100 or int(quality) != quality:
        raise ImageError(f"calidad fuera de [1,100]: {quality}")
    escala = 5000.0 / quality if quality < 50 else 200.0 - 2.0 * quality
    tabla = np.floor((TABLA_CUANTIZACION_BASE * escala + 50.0) / 100.0)
    return np.clip(tabla, 1.0, 255.0)


def _tamano_amplitud(valores):
    # ceil(log2(|v|+1)) es exacto cuando |v|+1 es potencia de dos
    return np.ceil(np.log2(np.abs(valores) + 1.0)).astype(np.int64)


def _bits_amplitud(valores, tamanos):
    valores = valores.astype(np.int64)
    return np.where(valores >= 0, valores, valores + (1 << tamanos) - 1).astype(np.uint64)


def _extender(crudo, tamano):
    if crudo < (1 << (tamano - 1)):
        return crudo - (1 << tamano) + 1
    return crudo


class CodecHelper:
    """
    Helper de codificación con patrón Singleton.

    Los codificadores son deterministas; solo generative_decode consume
    una semilla.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(CodecHelper, cls).__new__(cls)
        return cls._instance

    # =========================================================================
    # CÓDEC JPEG-LIKE
    # =========================================================================
    def jpeg_like_encode(self, image, quality):
        """
        Codifica una imagen con el códec de transformada de línea base.

        Args:
            image (Image): imagen de 8 bits
            quality (int): calidad en [1, 100]

        Returns:
            EncodedPrompt: payload = byte de calidad + bitstream entrópico

        Raises:
            ImageError: calidad fuera de rango
        """
        tabla = quantization_table(quality)
        flujo = self._codificar_bloques(image.pixels.astype(np.float64), tabla)
        return EncodedPrompt(
            codec=CodecId.JPEG_LIKE,
            payload=bytes([int(quality)]) + flujo,
            width=image.width,
            height=image.height,
            channels=image.channels
        )

    def jpeg_like_decode(self, prompt):
        """
        Reconstrucción determinista del códec de línea base.

        Raises:
            DecodeError: codec-id incorrecto o payload corrupto (con offset)
        """
        if prompt.codec is not CodecId.JPEG_LIKE:
            raise DecodeError(f"se esperaba un prompt jpeg-like, llegó {prompt.codec.value}")
        if not prompt.payload:
            raise DecodeError("payload vacío", offset=0)
        calidad = prompt.payload[0]
        if not 1 <= calidad <= 100:
            raise DecodeError(f"byte de calidad inválido {calidad}", offset=0)

        pixeles = self._decodificar_bloques(
            prompt.payload[1:], quantization_table(calidad),
            prompt.width, prompt.height, prompt.channels, desplazamiento=1
        )
        return Image(self._a_uint8(pixeles))

    # =========================================================================
    # CÓDEC LATENTE (EMULACIÓN GENERATIVA)
    # =========================================================================
    def latent_encode(self, image, tier, seed=0):
        """
        Prompt latente: submuestreo por nivel + cuantización gruesa.

        Args:
            image (Image): imagen original
            tier (str): 'low' (8x), 'med' (4x) o 'high' (2x)
            seed (int): semilla de generación transportada en el prompt
        """
        ancho_latente, alto_latente = self.latent_shape(image.width, image.height, tier)
        reducida = cv2.resize(
            image.pixels.astype(np.float64), (ancho_latente, alto_latente),
            interpolation=cv2.INTER_AREA
        )
        if reducida.ndim == 2:
            reducida = reducida[:, :, None]

        flujo = self._codificar_bloques(reducida, quantization_table(CALIDAD_NIVEL[tier]))
        return EncodedPrompt(
            codec=CodecId.for_tier(tier),
            payload=flujo,
            width=image.width,
            height=image.height,
            channels=image.channels,
            seed=seed
        )

    def generative_decode(self, prompt, seed=None):
        """
        Genera una imagen a partir de un prompt latente.

        Reconstrucción base determinista (upsampling + suavizado) más detalle
        de alta frecuencia sintetizado con la semilla. Misma semilla, misma
        imagen; semillas distintas, misma base y detalle distinto.

        Raises:
            DecodeError: prompt jpeg-like o payload corrupto
        """
        if not prompt.codec.is_latent:
            raise DecodeError("generative_decode requiere un prompt latente")
        nivel = prompt.codec.tier
        semilla = prompt.seed if seed is None else seed

        base = self.base_reconstruction(prompt)

        generador = np.random.default_rng(semilla)
        ruido = generador.standard_normal((prompt.height, prompt.width, prompt.channels))
        detalle = cv2.filter2D(ruido, -1, KERNEL_PASO_ALTO, borderType=cv2.BORDER_REFLECT)
        if detalle.ndim == 2:
            detalle = detalle[:, :, None]

        return Image(self._a_uint8(base + AMPLITUD_DETALLE[nivel] * detalle))

    def base_reconstruction(self, prompt):
        """Reconstrucción determinista sin detalle sintético (float64)."""
        nivel = prompt.codec.tier
        factor = self._factor(nivel)
        ancho_latente, alto_latente = self.latent_shape(prompt.width, prompt.height, nivel)
        latente = self._decodificar_bloques(
            prompt.payload, quantization_table(CALIDAD_NIVEL[nivel]),
            ancho_latente, alto_latente, prompt.channels
        )
        base = cv2.resize(latente, (prompt.width, prompt.height), interpolation=cv2.INTER_CUBIC)
        base = cv2.GaussianBlur(base, (0, 0), sigmaX=factor / 4.0, borderType=cv2.BORDER_REFLECT)
        if base.ndim == 2:
            base = base[:, :, None]
        return base

    @staticmethod
    def latent_shape(width, height, tier):
        factor = CodecHelper._factor(tier)
        return max(1, math.ceil(width / factor)), max(1, math.ceil(height / factor))

    @staticmethod
    def _factor(tier):
        if tier not in FACTOR_NIVEL:
            raise ImageError(f"nivel latente desconocido: {tier!r}")
        return FACTOR_NIVEL[tier]

    # =========================================================================
    # NÚCLEO DE TRANSFORMADA + CODIFICACIÓN ENTRÓPICA
    # =========================================================================
    def _codificar_bloques(self, pixeles, tabla):
        """
        DCT 8x8 + cuantización + zig-zag + códigos prefijo.

        Orden del flujo: todos los bloques del canal 0, luego canal 1, ...;
        la predicción DC se reinicia en cada canal.
        """
        bloques = self._partir_en_bloques(pixeles)
        coeficientes = dctn(bloques - 128.0, axes=(1, 2), norm='ortho')
        cuantizados = np.rint(coeficientes.reshape(-1, 64) / tabla).astype(np.int64)
        zigzag = cuantizados[:, RASTER_DESDE_ZIGZAG]
        zigzag[:, 0] = np.clip(zigzag[:, 0], -MAX_DC, MAX_DC)
        zigzag[:, 1:] = np.clip(zigzag[:, 1:], -MAX_AC, MAX_AC)

        cantidad_bloques = zigzag.shape[0]
        bloques_por_canal = cantidad_bloques // pixeles.shape[2]

        # DC diferencial, reiniciado al inicio de cada canal
        dc = zigzag[:, 0]
        diferencias = dc.copy()
        diferencias[1:] -= dc[:-1]
        diferencias[::bloques_por_canal] = dc[::bloques_por_canal]

        claves, valores, longitudes = [], [], []
        indices_bloque = np.arange(cantidad_bloques, dtype=np.int64)

        tamanos_dc = _tamano_amplitud(diferencias)
        claves += [indices_bloque * 1024 + 1, indices_bloque * 1024 + 2]
        valores += [_CODIF_DC[0][tamanos_dc], _bits_amplitud(diferencias, tamanos_dc)]
        longitudes += [_CODIF_DC[1][tamanos_dc], tamanos_dc]

        bloque_nz, posicion_nz = np.nonzero(zigzag[:, 1:])
        posicion_nz = posicion_nz + 1
        if bloque_nz.size:
            anterior = np.concatenate(([0], posicion_nz[:-1]))
            nuevo_bloque = np.concatenate(([True], bloque_nz[1:] != bloque_nz[:-1]))
            anterior[nuevo_bloque] = 0
            corrida = posicion_nz - anterior - 1
            cantidad_zrl = corrida // 16
            amplitudes = zigzag[bloque_nz, posicion_nz]
            tamanos_ac = _tamano_amplitud(amplitudes)
            simbolos = (corrida % 16) * 16 + tamanos_ac

            base_clave = bloque_nz * 1024 + posicion_nz * 8
            zrl_claves = np.repeat(base_clave, cantidad_zrl)
            claves += [zrl_claves, base_clave + 1, base_clave + 2]
            valores += [
                np.full(zrl_claves.size, _CODIF_AC[0][SIMBOLO_ZRL], dtype=np.uint64),
                _CODIF_AC[0][simbolos],
                _bits_amplitud(amplitudes, tamanos_ac)
            ]
            longitudes += [
                np.full(zrl_claves.size, _CODIF_AC[1][SIMBOLO_ZRL], dtype=np.int64),
                _CODIF_AC[1][simbolos],
                tamanos_ac
            ]

        ultimo_nz = np.zeros(cantidad_bloques, dtype=np.int64)
        np.maximum.at(ultimo_nz, bloque_nz, posicion_nz)
        con_eob = np.nonzero(ultimo_nz < 63)[0]
        claves.append(con_eob * 1024 + 64 * 8 + 1)
        valores.append(np.full(con_eob.size, _CODIF_AC[0][SIMBOLO_EOB], dtype=np.uint64))
        longitudes.append(np.full(con_eob.size, _CODIF_AC[1][SIMBOLO_EOB], dtype=np.int64))

        claves = np.concatenate(claves)
        orden = np.argsort(claves, kind='stable')
        valores = np.concatenate(valores)[orden]
        longitudes = np.concatenate(longitudes)[orden]
        return self._empaquetar_bits(valores, longitudes)

    @staticmethod
    def _empaquetar_bits(valores, longitudes):
        mascara = longitudes > 0
        valores = valores[mascara]
        longitudes = longitudes[mascara]
        total = int(longitudes.sum())
        if total == 0:
            return b''
        inicios = np.cumsum(longitudes) - longitudes
        item = np.repeat(np.arange(valores.size), longitudes)
        desplazamiento = np.arange(total) - inicios[item]
        corrimiento = (longitudes[item] - 1 - desplazamiento).astype(np.uint64)
        bits = ((valores[item] >> corrimiento) & np.uint64(1)).astype(np.uint8)
        relleno = (-total) % 8
        bits = np.concatenate((bits, np.ones(relleno, dtype=np.uint8)))
        return np.packbits(bits).tobytes()

    def _decodificar_bloques(self, flujo, tabla, ancho, alto, canales, desplazamiento=0):
        """
        Inverso de _codificar_bloques. Devuelve píxeles float64 (alto, ancho, canales).
        """
        filas_bloque = math.ceil(alto / TAMANO_BLOQUE)
        columnas_bloque = math.ceil(ancho / TAMANO_BLOQUE)
        bloques_por_canal = filas_bloque * columnas_bloque
        cantidad_bloques = bloques_por_canal * canales

        bits = np.unpackbits(np.frombuffer(flujo, dtype=np.uint8))
        total_bits = bits.size
        relleno = np.concatenate((bits, np.ones(64, dtype=np.uint8))).astype(np.int64)
        ventanas = (sliding_window_view(relleno, 16) @ _PESOS_VENTANA).tolist()

        dc_simbolos, dc_longitudes = _BUSQUEDA_DC
        ac_simbolos, ac_longitudes = _BUSQUEDA_AC
        coeficientes = [0] * (cantidad_bloques * 64)
        pos = 0

        for canal in range(canales):
            dc_previo = 0
            for bloque in range(bloques_por_canal):
                base = (canal * bloques_por_canal + bloque) * 64

                ventana = ventanas[pos]
                longitud = dc_longitudes[ventana]
                if longitud == 0:
                    raise DecodeError("código DC inválido", offset=desplazamiento + pos // 8)
                tamano = dc_simbolos[ventana]
                pos += longitud
                if tamano:
                    dc_previo += _extender(ventanas[pos] >> (16 - tamano), tamano)
                    pos += tamano
                coeficientes[base] = dc_previo

                k = 1
                while k < 64:
                    ventana = ventanas[pos]
                    longitud = ac_longitudes[ventana]
                    if longitud == 0:
                        raise DecodeError("código AC inválido", offset=desplazamiento + pos // 8)
                    simbolo = ac_simbolos[ventana]
                    pos += longitud
                    if simbolo == SIMBOLO_EOB:
                        break
                    if simbolo == SIMBOLO_ZRL:
                        k += 16
                        continue
                    k += simbolo >> 4
                    tamano = simbolo & 15
                    if k > 63 or tamano == 0:
                        raise DecodeError("corrida AC fuera del bloque", offset=desplazamiento + pos // 8)
                    coeficientes[base + k] = _extender(ventanas[pos] >> (16 - tamano), tamano)
                    pos += tamano
                    k += 1

                if pos > total_bits:
                    raise DecodeError("payload truncado", offset=desplazamiento + len(flujo))

        zigzag = np.array(coeficientes, dtype=np.float64).reshape(cantidad_bloques, 64)
        raster = np.empty_like(zigzag)
        raster[:, RASTER_DESDE_ZIGZAG] = zigzag
        bloques = idctn((raster * tabla).reshape(-1, 8, 8), axes=(1, 2), norm='ortho') + 128.0

        bloques = bloques.reshape(canales, filas_bloque, columnas_bloque, 8, 8)
        pixeles = bloques.transpose(1, 3, 2, 4, 0).reshape(
            filas_bloque * TAMANO_BLOQUE, columnas_bloque * TAMANO_BLOQUE, canales
        )
        return np.ascontiguousarray(pixeles[:alto, :ancho, :])

    @staticmethod
    def _partir_en_bloques(pixeles):
        """(alto, ancho, canales) -> (canales * bloques, 8, 8), con relleno de borde."""
        alto, ancho, canales = pixeles.shape
        relleno_alto = (-alto) % TAMANO_BLOQUE
        relleno_ancho = (-ancho) % TAMANO_BLOQUE
        if relleno_alto or relleno_ancho:
            pixeles = np.pad(pixeles, ((0, relleno_alto), (0, relleno_ancho), (0, 0)), mode='edge')
        filas = pixeles.shape[0] // TAMANO_BLOQUE
        columnas = pixeles.shape[1] // TAMANO_BLOQUE
        bloques = pixeles.reshape(filas, TAMANO_BLOQUE, columnas, TAMANO_BLOQUE, canales)
        return bloques.transpose(4, 0, 2, 1, 3).reshape(-1, TAMANO_BLOQUE, TAMANO_BLOQUE)

    @staticmethod
    def _a_uint8(pixeles):
        return np.clip(np.rint(pixeles), 0, 255).astype(np.uint8)

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance


"""
==============================================================================
DOCUMENTACIÓN TÉCNICA - CODEC HELPER
==============================================================================

TABLAS DE CÓDIGO PREFIJO (versión genflow-huffman/1)
=====================================================

Se usan las tablas de luminancia de línea base (ITU-T T.81, Anexo K) para
todos los canales. Los códigos se construyen de forma canónica:
    código = 0
    para longitud 1..16:
        asignar BITS[longitud] códigos consecutivos a HUFFVAL en orden
        código <<= 1

DC (categoría de tamaño 0..11):
    BITS    = 0 1 5 1 1 1 1 1 1 0 0 0 0 0 0 0
    HUFFVAL = 0 1 2 3 4 5 6 7 8 9 10 11
    Ejemplos: tamaño 0 -> '00', tamaño 4 -> '101'

AC (símbolo = corrida << 4 | tamaño):
    BITS    = 0 2 1 3 3 2 4 3 5 5 4 4 0 0 1 125
    HUFFVAL = tabla AC_VALORES de este módulo (162 símbolos)
    EOB (0x00) -> '1010'; ZRL (0xF0) -> '11111111001'

Cambiar cualquiera de estas tablas cambia los bpp medidos: en ese caso
se debe incrementar VERSION_TABLAS.


FORMATO DEL FLUJO
=================

Por canal, por bloque en orden raster:
    [código DC][bits de amplitud DC]
    ([ZRL]* [código (corrida,tamaño)][bits de amplitud])*
    [EOB si el último coeficiente no nulo no es el 63]

Amplitudes: v >= 0 se escribe tal cual en 'tamaño' bits; v < 0 se
escribe como v + 2^tamaño - 1. El último byte se rellena con unos.

Payload jpeg-like:  [calidad (1 byte)][flujo]
Payload latente:    [flujo]  (la calidad la fija el nivel)


NIVELES LATENTES
================

    nivel   submuestreo   calidad   amplitud de detalle
    low     8x            25        22.0
    med     4x            30        13.0
    high    2x            40        6.0

Para una imagen de 64x64 el nivel low produce 1 bloque por canal.

==============================================================================
"""
