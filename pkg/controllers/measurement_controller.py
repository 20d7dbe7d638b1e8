"""
==============================================================================
CONTROLADOR DE MEDICIÓN - PUNTOS (BPP, CALIDAD) POR ESQUEMA Y ESTRATEGIA
==============================================================================

Descripción:
    Controlador Singleton que mide sobre un dataset los puntos de muestra
    que alimentan el ajuste de curvas: codifica cada imagen con el esquema
    pedido (genai: códec latente + decodificador generativo; jpeg: códec de
    transformada), mide el bpp medio y la calidad del conjunto reconstruido,
    y para PS mezcla la reconstrucción con píxeles verdaderos.

Características:
    - PE genai: un punto por nivel latente (low/med/high)
    - PE jpeg: un punto por calidad de la rejilla
    - PS: un punto por gamma, L_c = L_p + gamma * L
    - Distorsión: MSE medio normalizado por el MSE máximo medio
    - Percepción: distancia de Fréchet cruda (se normaliza con fid_max)
    - Semillas por imagen derivadas de la semilla maestra

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging
from dataclasses import dataclass

import numpy as np

from helpers.codec_helper import CodecHelper
from helpers.image_helper import ImageHelper
from helpers.metrics_helper import MetricsHelper
from models.curve import SamplePoint
from models.errors import DomainError, ImageError
from models.quality import MetricKind, QualityScore


logger = logging.getLogger(__name__)

NIVELES = ('low', 'med', 'high')
CALIDADES_JPEG_PE = (5, 10, 20, 35, 50, 70, 85, 95)
CALIDAD_JPEG_PS = {'low': 10, 'med': 35, 'high': 75}
REJILLA_GAMMA = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

FLUJO_GENERACION = 1
FLUJO_MASCARA = 2


@dataclass(frozen=True)
class Reconstruction:
    """Conjunto reconstruido por un esquema en un punto de operación."""

    scheme: str
    operating_point: object
    mean_bpp: float
    images: list


def derive_seed(master_seed, index, stream):
    """Subsemilla de 64 bits por (semilla maestra, imagen, flujo)."""
    secuencia = np.random.SeedSequence([master_seed, index, stream])
    return int(secuencia.generate_state(1, dtype=np.uint64)[0])


class MeasurementController:
    """
    Controlador de medición con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(MeasurementController, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.codec_helper = CodecHelper.get_instance()
        self.image_helper = ImageHelper.get_instance()
        self.metrics_helper = MetricsHelper.get_instance()

        self._initialized = True

    # =========================================================================
    # RECONSTRUCCIÓN
    # =========================================================================
    def reconstruct(self, dataset, scheme, operating_point, seed=0, jobs=1):
        """
        Codifica y reconstruye el dataset completo.

        Args:
            dataset (list): imágenes originales
            scheme (str): 'genai' o 'jpeg'
            operating_point: nivel ('low'|'med'|'high') para genai,
                calidad (int) para jpeg
            seed (int): semilla maestra de generación
            jobs (int): workers del map paralelo

        Returns:
            Reconstruction
        """
        if not dataset:
            raise ImageError("el dataset está vacío")

        if scheme == 'genai':
            if operating_point not in NIVELES:
                raise DomainError(f"nivel latente desconocido: {operating_point!r}")

            def procesar(item):
                indice, imagen = item
                prompt = self.codec_helper.latent_encode(
                    imagen, operating_point, seed=derive_seed(seed, indice, FLUJO_GENERACION)
                )
                return prompt.bpp, self.codec_helper.generative_decode(prompt)

        elif scheme == 'jpeg':
            def procesar(item):
                _, imagen = item
                prompt = self.codec_helper.jpeg_like_encode(imagen, operating_point)
                return prompt.bpp, self.codec_helper.jpeg_like_decode(prompt)

        else:
            raise DomainError(f"esquema desconocido: {scheme!r}")

        resultados = self.image_helper.parallel_map(procesar, list(enumerate(dataset)), jobs)
        bpp_medio = float(np.mean([bpp for bpp, _ in resultados]))
        logger.debug("Reconstrucción %s/%s: bpp medio %.4f", scheme, operating_point, bpp_medio)
        return Reconstruction(
            scheme=scheme,
            operating_point=operating_point,
            mean_bpp=bpp_medio,
            images=[imagen for _, imagen in resultados]
        )

    # =========================================================================
    # CALIDAD
    # =========================================================================
    def measure_quality(self, originals, candidates, metric, jobs=1, fid_max=None):
        """
        Puntaje de calidad del dataset reconstruido.

        Distorsión: raw es el MSE medio y normalized la distorsión del
        dataset. Percepción: raw es el FID y normalized solo se llena con
        fid_max.

        Returns:
            QualityScore
        """
        if metric is MetricKind.DISTORTION:
            normalizado = self.metrics_helper.dataset_distortion(originals, candidates)
            crudo = float(np.mean([self.metrics_helper.mse(o, c) for o, c in zip(originals, candidates)]))
            return QualityScore(metric, crudo, normalizado)
        fid = self.metrics_helper.fid(originals, candidates, jobs)
        if fid_max is None:
            return QualityScore(metric, fid)
        return QualityScore(metric, fid, self.metrics_helper.normalize_fid(fid, fid_max))

    @staticmethod
    def _punto(bpp, puntaje, scheme, strategy):
        if puntaje.kind is MetricKind.DISTORTION:
            return SamplePoint(bpp, puntaje.normalized, puntaje.kind, scheme, strategy)
        return SamplePoint(bpp, puntaje.normalized, puntaje.kind, scheme, strategy, raw=puntaje.raw)

    # =========================================================================
    # PUNTOS PE
    # =========================================================================
    def pe_samples(self, dataset, scheme, metric, seed=0, jobs=1,
                   qualities=CALIDADES_JPEG_PE, fid_max=None):
        """
        Puntos PE: un punto por nivel (genai) o por calidad (jpeg).

        Los puntos de percepción llevan el FID crudo en raw; value queda
        normalizado solo si se pasa fid_max.
        """
        puntos_operacion = NIVELES if scheme == 'genai' else tuple(qualities)
        puntos = []
        for punto_operacion in puntos_operacion:
            reconstruccion = self.reconstruct(dataset, scheme, punto_operacion, seed, jobs)
            puntaje = self.measure_quality(dataset, reconstruccion.images, metric, jobs, fid_max)
            puntos.append(self._punto(reconstruccion.mean_bpp, puntaje, scheme, 'PE'))
            logger.info("PE %s %s=%s: bpp=%.4f %s=%.6g", scheme,
                        'nivel' if scheme == 'genai' else 'q', punto_operacion,
                        reconstruccion.mean_bpp, metric.value, puntaje.raw)
        return sorted(puntos, key=lambda p: p.bpp)

    # =========================================================================
    # PUNTOS PS
    # =========================================================================
    def ps_samples(self, dataset, scheme, tier, gamma_grid, metric, fid_max=None,
                   seed=0, jobs=1, reconstruction=None, jpeg_quality=None):
        """
        Puntos PS de un nivel: para cada gamma, bpp combinado y calidad
        media del dataset con intercambio de píxeles.

        Raises:
            DomainError: gamma fuera de [0,1], rejilla sin 0 o percepción
                sin fid_max
        """
        rejilla = sorted(float(g) for g in gamma_grid)
        if not rejilla or rejilla[0] != 0.0:
            raise DomainError("la rejilla gamma debe incluir 0")
        if rejilla[-1] > 1.0:
            raise DomainError(f"gamma fuera de [0,1]: {rejilla[-1]}")
        if metric is MetricKind.PERCEPTION and fid_max is None:
            raise DomainError("PS de percepción requiere fid_max")

        if reconstruction is None:
            punto_operacion = tier if scheme == 'genai' else (jpeg_quality or CALIDAD_JPEG_PS[tier])
            reconstruction = self.reconstruct(dataset, scheme, punto_operacion, seed, jobs)

        bpp_verdadero = self.image_helper.true_image_bpp(dataset[0].channels)
        estrategia = f"PS-{tier}"
        puntos = []
        for gamma in rejilla:
            intercambiadas = [
                self.image_helper.pixel_swap(
                    generada, original, gamma, derive_seed(seed, indice, FLUJO_MASCARA)
                )
                for indice, (generada, original) in enumerate(zip(reconstruction.images, dataset))
            ]
            puntaje = self.measure_quality(dataset, intercambiadas, metric, jobs, fid_max)
            bpp_combinado = self.image_helper.combined_bpp(reconstruction.mean_bpp, gamma, bpp_verdadero)
            puntos.append(self._punto(bpp_combinado, puntaje, scheme, estrategia))

        logger.info("PS %s %s: %d puntos, bpp base %.4f", scheme, tier, len(puntos), reconstruction.mean_bpp)
        return puntos

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
