"""
==============================================================================
HELPER DE IMÁGENES - DATASET PROCEDURAL, INTERCAMBIO DE PÍXELES Y BPP
==============================================================================

Descripción:
    Helper Singleton con las utilidades de imagen del pipeline: genera el
    dataset procedural de prueba, mezcla imágenes generadas con píxeles de
    la imagen verdadera (pixel swapping), lleva la cuenta de bits por
    píxel y lee/escribe imágenes PGM/PPM.

Características:
    - Dataset determinista por semilla maestra (una subsemilla por imagen)
    - Mezcla de gradientes suaves, texturas periódicas y formas con bordes
    - Máscaras de intercambio anidadas en gamma
    - L_c = L_p + gamma * L con L = 8 bits por canal
    - E/S PGM (P5) y PPM (P6) vía Pillow
    - Map paralelo con orden estable por índice de imagen

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import cv2
import numpy as np
from PIL import Image as PILImage

from models.errors import DomainError, ImageError, PipelineIOError
from models.image import TAMANO_BLOQUE, Image, SwapMask


logger = logging.getLogger(__name__)

BITS_POR_CANAL = 8


class ImageHelper:
    """
    Helper de imágenes con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ImageHelper, cls).__new__(cls)
        return cls._instance

    # =========================================================================
    # DATASET PROCEDURAL
    # =========================================================================
    def generate_dataset(self, count, width, height, master_seed, channels=3):
        """
        Genera un dataset procedural determinista.

        Cada imagen usa su propio generador derivado de (master_seed, índice),
        así que la imagen i no depende de cuántas se generen.

        Args:
            count (int): cantidad de imágenes (>= 1)
            width (int): ancho en píxeles (>= 8)
            height (int): alto en píxeles (>= 8)
            master_seed (int): semilla maestra
            channels (int): 1 o 3

        Returns:
            list: lista de Image

        Raises:
            ImageError: dimensiones menores que el bloque o count < 1
        """
        if count < 1:
            raise ImageError(f"count debe ser >= 1, recibido {count}")
        if width < TAMANO_BLOQUE or height < TAMANO_BLOQUE:
            raise ImageError(f"dimensiones {width}x{height} menores que {TAMANO_BLOQUE}")
        if channels not in (1, 3):
            raise ImageError(f"canales debe ser 1 o 3, recibido {channels}")

        imagenes = [
            self._generar_imagen(
                np.random.default_rng(np.random.SeedSequence([master_seed, indice])),
                width, height, channels
            )
            for indice in range(count)
        ]
        logger.info("Dataset generado: %d imágenes %dx%dx%d (semilla %d)",
                    count, width, height, channels, master_seed)
        return imagenes

    @staticmethod
    def _generar_imagen(generador, ancho, alto, canales):
        y, x = np.mgrid[0:alto, 0:ancho].astype(np.float64)

        # Gradiente suave entre dos colores en una dirección aleatoria
        angulo = generador.uniform(0.0, np.pi)
        proyeccion = np.cos(angulo) * x / ancho + np.sin(angulo) * y / alto
        proyeccion = (proyeccion - proyeccion.min()) / max(np.ptp(proyeccion), 1e-9)
        color_a = generador.uniform(20.0, 235.0, canales)
        color_b = generador.uniform(20.0, 235.0, canales)
        lienzo = color_a + proyeccion[:, :, None] * (color_b - color_a)

        # Textura periódica
        periodo = generador.uniform(3.0, 16.0)
        orientacion = generador.uniform(0.0, np.pi)
        fase = generador.uniform(0.0, 2.0 * np.pi)
        amplitud = generador.uniform(10.0, 40.0)
        onda = np.sin(2.0 * np.pi * (np.cos(orientacion) * x + np.sin(orientacion) * y) / periodo + fase)
        pesos = generador.uniform(0.5, 1.0, canales)
        lienzo = lienzo + amplitud * onda[:, :, None] * pesos

        lienzo = np.clip(lienzo + generador.normal(0.0, 2.0, lienzo.shape), 0, 255)
        lienzo = np.ascontiguousarray(np.rint(lienzo).astype(np.uint8))

        # Formas con bordes duros
        superficie = lienzo[:, :, 0] if canales == 1 else lienzo
        for _ in range(int(generador.integers(2, 6))):
            color = tuple(int(c) for c in generador.integers(0, 256, canales))
            tipo = int(generador.integers(0, 3))
            if tipo == 0:
                centro = (int(generador.integers(0, ancho)), int(generador.integers(0, alto)))
                radio = int(generador.integers(2, max(3, min(ancho, alto) // 3)))
                cv2.circle(superficie, centro, radio, color, thickness=-1, lineType=cv2.LINE_8)
            elif tipo == 1:
                p1 = (int(generador.integers(0, ancho)), int(generador.integers(0, alto)))
                p2 = (int(generador.integers(0, ancho)), int(generador.integers(0, alto)))
                cv2.rectangle(superficie, p1, p2, color, thickness=-1, lineType=cv2.LINE_8)
            else:
                p1 = (int(generador.integers(0, ancho)), int(generador.integers(0, alto)))
                p2 = (int(generador.integers(0, ancho)), int(generador.integers(0, alto)))
                grosor = int(generador.integers(1, 4))
                cv2.line(superficie, p1, p2, color, thickness=grosor, lineType=cv2.LINE_8)

        return Image(lienzo)

    # =========================================================================
    # INTERCAMBIO DE PÍXELES (PS)
    # =========================================================================
    def pixel_swap(self, generated, original, gamma, seed):
        """
        Copia floor(gamma * w * h) píxeles completos de la imagen verdadera
        sobre la generada. Las posiciones son el prefijo de la máscara.

        Raises:
            ImageError: dimensiones distintas o gamma fuera de [0, 1]
        """
        if not generated.same_shape(original):
            raise ImageError(
                f"dimensiones distintas: {generated.pixels.shape} vs {original.pixels.shape}"
            )
        mascara = SwapMask.from_seed(original.pixel_count, seed)
        posiciones = mascara.prefix(gamma)

        salida = generated.pixels.reshape(-1, generated.channels).copy()
        salida[posiciones] = original.pixels.reshape(-1, original.channels)[posiciones]
        return Image(salida.reshape(generated.pixels.shape))

    # =========================================================================
    # CONTABILIDAD DE BPP
    # =========================================================================
    @staticmethod
    def combined_bpp(lp, gamma, true_bpp):
        """L_c = L_p + gamma * L."""
        if lp < 0 or true_bpp <= 0:
            raise DomainError(f"se requiere L_p >= 0 y L > 0 (L_p={lp}, L={true_bpp})")
        if not 0.0 <= gamma <= 1.0:
            raise DomainError(f"gamma fuera de [0,1]: {gamma}")
        return lp + gamma * true_bpp

    @staticmethod
    def bpp_of(prompt):
        return 8.0 * len(prompt.payload) / (prompt.width * prompt.height)

    @staticmethod
    def true_image_bpp(channels):
        """Tamaño de la imagen sin comprimir: 8 bpp por canal."""
        return float(BITS_POR_CANAL * channels)

    @staticmethod
    def invert(image):
        return Image(255 - image.pixels)

    # =========================================================================
    # E/S PGM / PPM
    # =========================================================================
    @staticmethod
    def write_image(image, ruta):
        """Escribe P5 (1 canal) o P6 (3 canales) con maxval 255."""
        ruta = Path(ruta)
        if image.channels == 1:
            pil = PILImage.fromarray(image.pixels[:, :, 0])
        else:
            pil = PILImage.fromarray(image.pixels)
        try:
            ruta.parent.mkdir(parents=True, exist_ok=True)
            pil.save(ruta, format='PPM')
        except OSError as error:
            raise PipelineIOError(f"no se pudo escribir la imagen ({error.strerror})", path=ruta) from error

    @staticmethod
    def read_image(ruta):
        try:
            with PILImage.open(ruta) as pil:
                if pil.mode not in ('L', 'RGB'):
                    raise ImageError(f"modo de imagen no soportado {pil.mode}: {ruta}")
                return Image(np.array(pil))
        except FileNotFoundError as error:
            raise PipelineIOError("imagen no encontrada", path=ruta) from error
        except OSError as error:
            raise PipelineIOError(f"imagen ilegible ({error})", path=ruta) from error

    # =========================================================================
    # MAP PARALELO
    # =========================================================================
    @staticmethod
    def parallel_map(funcion, elementos, jobs=1):
        """
        Aplica funcion a cada elemento. El resultado conserva el orden de
        entrada para cualquier número de workers.
        """
        elementos = list(elementos)
        if jobs <= 1 or len(elementos) <= 1:
            return [funcion(e) for e in elementos]
        with ThreadPoolExecutor(max_workers=jobs) as ejecutor:
            return list(ejecutor.map(funcion, elementos))

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
