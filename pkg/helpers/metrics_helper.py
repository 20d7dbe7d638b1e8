"""
==============================================================================
HELPER DE MÉTRICAS - DISTORSIÓN (MSE) Y PERCEPCIÓN (DISTANCIA DE FRÉCHET)
==============================================================================

Descripción:
    Helper Singleton que calcula las métricas de calidad del contenido
    generado: MSE y su normalización por la imagen invertida, y la
    distancia de Fréchet entre gaussianas ajustadas a un embedding fijo
    de 64 dimensiones (proxy de FID sin red neuronal).

Características:
    - MSE en unidades de 8 bits al cuadrado
    - MSE normalizado: 0 = idéntica, 1 = imagen invertida
    - Embedding determinista: rejilla de luminancia 8x8 sin media (48),
      histograma de gradiente (8) y cuantiles de varianza por bloque (8)
    - Covarianza muestral con denominador N-1, simetrizada
    - Raíces cuadradas PSD por descomposición simétrica (scipy.linalg.eigh)
      con autovalores recortados en 0

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging

import cv2
import numpy as np
from scipy import linalg

from helpers.image_helper import ImageHelper
from models.errors import DomainError, FitError, ImageError
from models.image import TAMANO_BLOQUE
from models.quality import FeatureGaussian


logger = logging.getLogger(__name__)

FEATURE_EXTRACTOR_VERSION = 'genflow-features/1'
DIMENSION_EMBEDDING = 64
CELDAS_REJILLA = 8
COMPONENTES_REJILLA = 48
BORDES_GRADIENTE = np.array([0.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, np.inf])
CUANTILES_BLOQUE = np.linspace(0.0, 1.0, 8)
PESOS_LUMINANCIA = np.array([0.299, 0.587, 0.114])
CONTRACCION = 1e-6


class MetricsHelper:
    """
    Helper de métricas con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(MetricsHelper, cls).__new__(cls)
        return cls._instance

    # =========================================================================
    # DISTORSIÓN
    # =========================================================================
    @staticmethod
    def mse(a, b):
        """
        Media del error cuadrático sobre todas las muestras.

        Raises:
            ImageError: dimensiones distintas
        """
        if not a.same_shape(b):
            raise ImageError(f"dimensiones distintas: {a.pixels.shape} vs {b.pixels.shape}")
        diferencia = a.pixels.astype(np.float64) - b.pixels.astype(np.float64)
        return float(np.mean(diferencia * diferencia))

    def max_mse(self, original):
        """MSE contra la imagen invertida (s -> 255 - s)."""
        return self.mse(original, ImageHelper.invert(original))

    def normalized_mse(self, original, candidate):
        """mse(original, candidate) / mse(original, invert(original)) en [0, 1]."""
        maximo = self.max_mse(original)
        return float(np.clip(self.mse(original, candidate) / maximo, 0.0, 1.0))

    def dataset_distortion(self, originals, candidates):
        """
        Distorsión normalizada de un dataset: MSE medio / MSE máximo medio.
        """
        if len(originals) != len(candidates) or not originals:
            raise ImageError(
                f"listas de imágenes incompatibles ({len(originals)} vs {len(candidates)})"
            )
        errores = [self.mse(o, c) for o, c in zip(originals, candidates)]
        maximos = [self.max_mse(o) for o in originals]
        return float(np.clip(np.mean(errores) / np.mean(maximos), 0.0, 1.0))

    # =========================================================================
    # EMBEDDING FIJO
    # =========================================================================
    @staticmethod
    def feature_embed(image):
        """
        Vector de características de 64 componentes.

        Orden publicado:
            [0:48]  medias de la rejilla 8x8 de luminancia menos la media
                    global, fila-mayor, primeras 48
            [48:56] histograma (%) de magnitud de gradiente Sobel con bordes
                    0, 4, 8, 16, 32, 64, 128, 256, inf
            [56:64] cuantiles 0, 1/7, ..., 1 de la varianza de los
                    bloques 8x8
        """
        pixeles = image.pixels.astype(np.float64)
        if image.channels == 3:
            luminancia = pixeles @ PESOS_LUMINANCIA
        else:
            luminancia = pixeles[:, :, 0]
        alto, ancho = luminancia.shape

        filas = np.linspace(0, alto, CELDAS_REJILLA + 1).astype(int)
        columnas = np.linspace(0, ancho, CELDAS_REJILLA + 1).astype(int)
        sumas = np.add.reduceat(np.add.reduceat(luminancia, filas[:-1], axis=0), columnas[:-1], axis=1)
        areas = np.outer(np.diff(filas), np.diff(columnas))
        rejilla = (sumas / areas - luminancia.mean()).ravel()[:COMPONENTES_REJILLA]

        gx = cv2.Sobel(luminancia, cv2.CV_64F, 1, 0, ksize=3)
        gy = cv2.Sobel(luminancia, cv2.CV_64F, 0, 1, ksize=3)
        conteos, _ = np.histogram(np.hypot(gx, gy), bins=BORDES_GRADIENTE)
        histograma = 100.0 * conteos / luminancia.size

        filas_bloque = alto // TAMANO_BLOQUE
        columnas_bloque = ancho // TAMANO_BLOQUE
        bloques = luminancia[:filas_bloque * TAMANO_BLOQUE, :columnas_bloque * TAMANO_BLOQUE]
        bloques = bloques.reshape(filas_bloque, TAMANO_BLOQUE, columnas_bloque, TAMANO_BLOQUE)
        varianzas = bloques.var(axis=(1, 3)).ravel()
        cuantiles = np.quantile(varianzas, CUANTILES_BLOQUE)

        return np.concatenate((rejilla, histograma, cuantiles))

    # =========================================================================
    # GAUSSIANAS Y DISTANCIA DE FRÉCHET
    # =========================================================================
    @staticmethod
    def gaussian_fit(features):
        """
        Ajusta media y covarianza muestral (N-1), simetrizada.

        Con menos de D+1 vectores se suma 1e-6 * I a la covarianza.

        Raises:
            FitError: menos de 2 vectores
        """
        matriz = np.atleast_2d(np.asarray(features, dtype=np.float64))
        cantidad, dimension = matriz.shape
        if cantidad < 2:
            raise FitError(f"se requieren al menos 2 vectores, hay {cantidad}")

        media = matriz.mean(axis=0)
        centrada = matriz - media
        covarianza = centrada.T @ centrada / (cantidad - 1)
        covarianza = 0.5 * (covarianza + covarianza.T)
        if cantidad < dimension + 1:
            logger.debug("Contracción de covarianza: N=%d < D+1=%d", cantidad, dimension + 1)
            covarianza = covarianza + CONTRACCION * np.eye(dimension)
        return FeatureGaussian(mean=media, covariance=covarianza)

    @staticmethod
    def _raiz_psd(matriz):
        valores, vectores = linalg.eigh(0.5 * (matriz + matriz.T))
        return (vectores * np.sqrt(np.clip(valores, 0.0, None))) @ vectores.T

    def frechet_distance(self, g1, g2):
        """
        ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2), recortada en 0.

        Raises:
            DomainError: dimensiones distintas
        """
        if g1.dimension != g2.dimension:
            raise DomainError(f"dimensiones distintas: {g1.dimension} vs {g2.dimension}")

        raiz_1 = self._raiz_psd(g1.covariance)
        producto = raiz_1 @ g2.covariance @ raiz_1
        valores = linalg.eigvalsh(0.5 * (producto + producto.T))
        traza_raiz = float(np.sum(np.sqrt(np.clip(valores, 0.0, None))))

        diferencia = g1.mean - g2.mean
        distancia = (
            float(diferencia @ diferencia)
            + float(np.trace(g1.covariance))
            + float(np.trace(g2.covariance))
            - 2.0 * traza_raiz
        )
        return max(distancia, 0.0)

    def embed_all(self, images, jobs=1):
        return np.array(ImageHelper.parallel_map(self.feature_embed, images, jobs))

    def fid(self, real, generated, jobs=1):
        """
        Distancia de Fréchet entre los embeddings de dos conjuntos de imágenes.

        Raises:
            FitError: alguna lista con menos de 2 imágenes
        """
        if not real or not generated:
            raise FitError("fid requiere listas de imágenes no vacías")
        gaussiana_real = self.gaussian_fit(self.embed_all(real, jobs))
        gaussiana_generada = self.gaussian_fit(self.embed_all(generated, jobs))
        return self.frechet_distance(gaussiana_real, gaussiana_generada)

    @staticmethod
    def normalize_fid(value, fid_max):
        """min(value / fid_max, 1). fid_max sale del ajuste PE evaluado en 0."""
        if fid_max is None or not fid_max > 0:
            raise DomainError(f"fid_max debe ser > 0, recibido {fid_max}")
        return float(np.clip(value / fid_max, 0.0, 1.0))

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
