"""
==============================================================================
CONTROLADOR DE CURVAS - AJUSTE TASA-DISTORSIÓN Y TASA-PERCEPCIÓN
==============================================================================

Descripción:
    Controlador Singleton que convierte puntos (bpp, calidad) en funciones
    continuas delta(L_p): ajusta familias paramétricas maximizando r^2,
    selecciona la mejor familia y construye las curvas PE (prompt
    extension) y PS (pixel swapping) con su dominio.

Características:
    - Familias: exponencial, potencia y polinomio de grado <= 3
    - Mínimos cuadrados no lineales con 16 arranques deterministas
      (scipy.optimize.least_squares, región de confianza con cotas)
    - Ajuste anclado: la curva pasa exactamente por (L, 0)
    - Normalización de percepción en dos pasadas (fid_max = ajuste en 0)
    - Verificación de monotonía a posteriori en 1000 puntos

Flujo PE de percepción:
    1. Ajuste anclado sobre FID crudo + (L, 0)
    2. fid_max = curva evaluada en L_p = 0
    3. Normalización FID / fid_max
    4. Ajuste anclado sobre los valores normalizados

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging
from dataclasses import replace

import numpy as np
from scipy.optimize import least_squares

from controllers.measurement_controller import CALIDAD_JPEG_PS, MeasurementController
from helpers.image_helper import ImageHelper
from helpers.metrics_helper import FEATURE_EXTRACTOR_VERSION, MetricsHelper
from models.curve import (
    DEFAULT_CANDIDATES, EXPONENTIAL_DECAY, RateQualityCurve, SamplePoint
)
from models.errors import DomainError, FitError
from models.quality import MetricKind


logger = logging.getLogger(__name__)

ARRANQUES_A = np.logspace(-1.0, 1.0, 4)
ARRANQUES_B = np.logspace(-2.0, 1.0, 4)
COTA_B = (1e-9, 50.0)
TOLERANCIA_AJUSTE = 1e-14
MAX_EVALUACIONES = 2000
TOLERANCIA_EMPATE_R2 = 1e-12
PUNTOS_MONOTONIA = 1000


class CurveController:
    """
    Controlador de ajuste de curvas con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(CurveController, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.measurement_controller = MeasurementController.get_instance()
        self.metrics_helper = MetricsHelper.get_instance()
        self.image_helper = ImageHelper.get_instance()

        self._initialized = True

    # =========================================================================
    # AJUSTE
    # =========================================================================
    def fit_curve(self, samples, family, anchor=None, domain=None):
        """
        Ajusta una familia a los puntos minimizando la suma de residuos
        al cuadrado (equivale a maximizar r^2 con la familia fija).

        Args:
            samples (list): SamplePoint (usa value, o raw si no está normalizado)
            family (CurveFamily): familia a ajustar
            anchor (tuple): (x0, y0) por donde la curva pasa exactamente
            domain (tuple): dominio de la curva; por defecto [min x, max x]

        Returns:
            RateQualityCurve

        Raises:
            FitError: menos abscisas distintas que parámetros
        """
        if not samples:
            raise FitError("no hay puntos para ajustar")
        x = np.array([p.bpp for p in samples], dtype=np.float64)
        y = np.array([p.ordinate for p in samples], dtype=np.float64)

        distintas = np.unique(x).size
        if distintas < family.parameter_count and np.ptp(y) != 0:
            raise FitError(
                f"{family.label} requiere {family.parameter_count} abscisas distintas, hay {distintas}"
            )

        if np.ptp(y) == 0:
            parametros = self._parametros_constantes(family, y[0])
            r2 = 1.0
        else:
            if family.name == 'polynomial':
                parametros = self._ajustar_polinomio(family, x, y, anchor)
            else:
                parametros = self._ajustar_no_lineal(family, x, y, anchor)
            r2 = self._r2(family, parametros, x, y)

        primero = samples[0]
        return RateQualityCurve(
            family=family,
            params=parametros,
            domain=domain if domain is not None else (float(x.min()), float(x.max())),
            metric=primero.metric,
            r2=r2,
            scheme=primero.scheme,
            strategy=primero.strategy,
            extractor_version=FEATURE_EXTRACTOR_VERSION
        )

    @staticmethod
    def _parametros_constantes(family, valor):
        if family.name == 'polynomial':
            return [float(valor)] + [0.0] * family.degree
        return [0.0, 1.0, float(valor)]

    @staticmethod
    def _r2(family, parametros, x, y):
        residuos = family.evaluate(parametros, x) - y
        ss_res = float(residuos @ residuos)
        ss_tot = float(((y - y.mean()) ** 2).sum())
        return 1.0 - ss_res / ss_tot

    @staticmethod
    def _ajustar_polinomio(family, x, y, anchor):
        if anchor is None:
            return list(np.polynomial.polynomial.polyfit(x, y, family.degree))

        # base x^k - x0^k: p(x0) = y0 por construcción
        x0, y0 = anchor
        grados = np.arange(1, family.degree + 1)
        base = x[:, None] ** grados - x0 ** grados
        coeficientes, *_ = np.linalg.lstsq(base, y - y0, rcond=None)
        constante = y0 - float(np.sum(coeficientes * x0 ** grados))
        return [constante] + list(coeficientes)

    @staticmethod
    def _termino(family, b, x):
        if family.name == 'exponential':
            return np.exp(-b * x)
        return np.power(x, -b)

    def _ajustar_no_lineal(self, family, x, y, anchor):
        """
        Multiarranque sobre una rejilla log-espaciada (a, b) con c0 = min(y);
        devuelve el mejor punto visitado.
        """
        if family.name == 'power' and np.any(x <= 0):
            raise FitError("la familia power requiere abscisas > 0")

        escala = max(float(np.ptp(y)), 1e-12)
        if anchor is None:
            def parametros_completos(theta):
                return theta

            cota_inferior = [0.0, COTA_B[0], -np.inf]
            cota_superior = [np.inf, COTA_B[1], np.inf]
        else:
            x0, y0 = anchor

            def parametros_completos(theta):
                a, b = theta
                return np.array([a, b, y0 - a * self._termino(family, b, x0)])

            cota_inferior = [0.0, COTA_B[0]]
            cota_superior = [np.inf, COTA_B[1]]

        def residuo(theta):
            return family.evaluate(parametros_completos(theta), x) - y

        mejor = None
        for a0 in escala * ARRANQUES_A:
            for b0 in ARRANQUES_B:
                inicio = [a0, b0] if anchor is not None else [a0, b0, float(y.min())]
                try:
                    resultado = least_squares(
                        residuo, inicio,
                        bounds=(cota_inferior, cota_superior),
                        method='trf',
                        ftol=TOLERANCIA_AJUSTE,
                        xtol=TOLERANCIA_AJUSTE,
                        gtol=TOLERANCIA_AJUSTE,
                        max_nfev=MAX_EVALUACIONES
                    )
                except (ValueError, FloatingPointError):
                    continue
                if not np.all(np.isfinite(resultado.fun)):
                    continue
                if mejor is None or resultado.cost < mejor.cost:
                    mejor = resultado

        if mejor is None:
            raise FitError(f"ningún arranque de {family.label} convergió")
        return [float(v) for v in parametros_completos(mejor.x)]

    def select_family(self, samples, candidates=DEFAULT_CANDIDATES, anchor=None, domain=None):
        """
        Ajusta todas las familias candidatas y devuelve la de mayor r^2;
        los empates se resuelven por menor cantidad de parámetros.

        Returns:
            tuple: (CurveFamily, RateQualityCurve)

        Raises:
            FitError: lista vacía o ninguna familia ajustable
        """
        if not candidates:
            raise FitError("no hay familias candidatas")

        ajustes = []
        for familia in candidates:
            try:
                ajustes.append(self.fit_curve(samples, familia, anchor=anchor, domain=domain))
            except FitError as error:
                logger.debug("Familia %s descartada: %s", familia.label, error)
        if not ajustes:
            raise FitError("ninguna familia candidata se pudo ajustar")

        mejor_r2 = max(c.r2 for c in ajustes)
        empatadas = [c for c in ajustes if c.r2 >= mejor_r2 - TOLERANCIA_EMPATE_R2]
        elegida = min(empatadas, key=lambda c: c.family.parameter_count)
        return elegida.family, elegida

    # =========================================================================
    # CURVAS PE
    # =========================================================================
    def estimate_fid_max(self, raw_points, true_bpp, family=EXPONENTIAL_DECAY):
        """
        Primera pasada PE: ajuste anclado sobre FID crudo, evaluado en 0.

        Raises:
            FitError: familia no evaluable en 0 o resultado no positivo
        """
        if family.name == 'power':
            raise FitError("la familia power no se puede evaluar en L_p = 0")
        puntos = self._con_ancla(
            [p.normalized(None) if p.raw is not None else p for p in raw_points],
            true_bpp, usar_crudo=True
        )
        curva = self.fit_curve(puntos, family, anchor=(true_bpp, 0.0), domain=(0.0, true_bpp))
        fid_max = float(family.evaluate(curva.params, 0.0))
        if not fid_max > 0:
            raise FitError(f"fid_max no positivo: {fid_max}")
        logger.info("fid_max estimado: %.6g (r2 = %.4f)", fid_max, curva.r2)
        return fid_max

    def normalize_points(self, points, fid_max):
        """Normaliza puntos de percepción con fid_max (recorte en 1)."""
        return [
            p.normalized(self.metrics_helper.normalize_fid(p.raw, fid_max))
            if p.metric is MetricKind.PERCEPTION and p.raw is not None else p
            for p in points
        ]

    def build_pe_curve(self, tier_points, true_bpp, metric, family=EXPONENTIAL_DECAY, fid_max=None):
        """
        Curva PE con el ancla (L, 0) y dominio [bpp del menor nivel, L].

        Para percepción aplica la normalización en dos pasadas, salvo que
        se pase un fid_max compartido.

        Raises:
            FitError: punto con bpp >= L (conflicto con el ancla)
        """
        puntos = sorted(tier_points, key=lambda p: p.bpp)
        if not puntos:
            raise FitError("PE requiere al menos un punto de nivel")
        if puntos[-1].bpp >= true_bpp:
            raise FitError(
                f"el punto bpp={puntos[-1].bpp:.6g} choca con el ancla (L={true_bpp:.6g}, 0)"
            )

        if metric is MetricKind.PERCEPTION:
            if fid_max is None:
                fid_max = self.estimate_fid_max(puntos, true_bpp, family)
            puntos = self.normalize_points(puntos, fid_max)
        elif any(p.value is None for p in puntos):
            raise FitError("los puntos de distorsión deben estar normalizados")

        curva = self.fit_curve(
            self._con_ancla(puntos, true_bpp),
            family,
            anchor=(true_bpp, 0.0),
            domain=(puntos[0].bpp, true_bpp)
        )
        curva = replace(curva, fid_max=fid_max)
        return replace(curva, monotone=self.check_monotone(curva))

    @staticmethod
    def _con_ancla(puntos, true_bpp, usar_crudo=False):
        primero = puntos[0]
        ancla = SamplePoint(
            true_bpp, None if usar_crudo else 0.0, primero.metric,
            primero.scheme, primero.strategy, raw=0.0 if usar_crudo else None
        )
        return list(puntos) + [ancla]

    # =========================================================================
    # CURVAS PS
    # =========================================================================
    def build_ps_curve(self, tier, gamma_grid, dataset, metric, fid_max=None, scheme='genai',
                       candidates=DEFAULT_CANDIDATES, seed=0, jobs=1, jpeg_quality=None):
        """
        Curva PS de un nivel sobre [bpp del nivel, bpp del nivel + L].

        Returns:
            tuple: (RateQualityCurve, list de SamplePoint)
        """
        puntos = self.measurement_controller.ps_samples(
            dataset, scheme, tier, gamma_grid, metric, fid_max=fid_max, seed=seed, jobs=jobs,
            jpeg_quality=jpeg_quality or CALIDAD_JPEG_PS.get(tier)
        )
        return self.fit_ps_points(puntos, dataset[0].channels, candidates, fid_max), puntos

    def fit_ps_points(self, points, channels, candidates=DEFAULT_CANDIDATES, fid_max=None):
        """Ajusta puntos PS ya medidos (base + gamma * L)."""
        bpp_verdadero = self.image_helper.true_image_bpp(channels)
        bpp_base = min(p.bpp for p in points)
        _, curva = self.select_family(
            points, candidates, domain=(bpp_base, bpp_base + bpp_verdadero)
        )
        curva = replace(curva, fid_max=fid_max)
        return replace(curva, monotone=self.check_monotone(curva))

    # =========================================================================
    # EVALUACIÓN
    # =========================================================================
    @staticmethod
    def eval(curve, lp):
        """
        Raises:
            DomainError: L_p fuera del dominio de la curva
        """
        return curve.eval(lp)

    @staticmethod
    def check_monotone(curve, puntos=PUNTOS_MONOTONIA):
        """True si la curva no crece sobre una rejilla de su dominio."""
        xs = np.linspace(curve.x_lo, curve.x_hi, puntos)
        try:
            valores = curve.eval_many(xs)
        except DomainError:
            return False
        return bool(np.all(np.diff(valores) <= 1e-12))

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
