"""
==============================================================================
MODELO DE DOMINIO - CURVAS TASA-CALIDAD
==============================================================================

Descripción:
    Puntos de muestra (bpp, calidad), familias paramétricas de curvas y la
    curva ajustada delta(L_p) con su dominio, r^2 y procedencia.

Familias:
    exponential     a * exp(-b x) + c        (a >= 0, b > 0)
    power           a * x^(-b) + c           (a >= 0, b > 0, x > 0)
    polynomial-k    sum_i p_i x^i, k <= 3    (coeficientes ascendentes)

Formato JSON de curva:
    {
      "name": "genai-PE-perception", "family": "exponential", "degree": null,
      "params": [a, b, c], "domain": [x_lo, x_hi], "r2": 0.998,
      "metric": "perception", "scheme": "genai", "strategy": "PE",
      "fid_max": 61.2, "monotone": true, "samples_hash": "...",
      "extractor_version": "genflow-features/1"
    }

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from models.errors import DomainError, FitError, GenflowError
from models.quality import MetricKind


TOLERANCIA_DOMINIO = 1e-9
ESQUEMAS = ('genai', 'jpeg')
ESTRATEGIAS = ('PE', 'PS-low', 'PS-med', 'PS-high')


@dataclass(frozen=True)
class SamplePoint:
    """
    Par (bpp, calidad normalizada). value es None mientras el punto solo
    tiene el valor crudo (FID antes de normalizar).
    """

    bpp: float
    value: float
    metric: MetricKind
    scheme: str
    strategy: str
    raw: float = None

    def __post_init__(self):
        if not self.bpp > 0:
            raise DomainError(f"bpp debe ser > 0, recibido {self.bpp}")
        if self.value is not None and not 0.0 <= self.value <= 1.0:
            raise DomainError(f"valor normalizado fuera de [0,1]: {self.value}")
        if self.value is None and self.raw is None:
            raise DomainError("el punto necesita valor normalizado o crudo")
        if self.scheme not in ESQUEMAS:
            raise DomainError(f"esquema desconocido: {self.scheme!r}")
        if self.strategy not in ESTRATEGIAS:
            raise DomainError(f"estrategia desconocida: {self.strategy!r}")

    @property
    def ordinate(self):
        return self.raw if self.value is None else self.value

    def normalized(self, value):
        return replace(self, value=value)

    def to_row(self):
        return {
            'bpp': self.bpp,
            'value': self.value,
            'metric': self.metric.value,
            'scheme': self.scheme,
            'strategy': self.strategy
        }


@dataclass(frozen=True)
class CurveFamily:
    name: str
    degree: int = None

    NOMBRES = ('exponential', 'power', 'polynomial')

    def __post_init__(self):
        if self.name not in self.NOMBRES:
            raise FitError(f"familia desconocida: {self.name!r}")
        if self.name == 'polynomial':
            if self.degree is None or not 0 <= self.degree <= 3:
                raise FitError(f"grado polinomial fuera de [0,3]: {self.degree}")
        elif self.degree is not None:
            raise FitError(f"la familia {self.name} no lleva grado")

    @property
    def parameter_count(self):
        return self.degree + 1 if self.name == 'polynomial' else 3

    @property
    def label(self):
        return f"polynomial-{self.degree}" if self.name == 'polynomial' else self.name

    @classmethod
    def parse(cls, texto):
        """'exponential', 'power' o 'polynomial-<k>'."""
        texto = str(texto).strip().lower()
        if texto.startswith('polynomial'):
            _, _, grado = texto.partition('-')
            try:
                return cls('polynomial', int(grado or 3))
            except ValueError:
                raise FitError(f"grado polinomial inválido en {texto!r}") from None
        return cls(texto)

    def evaluate(self, params, x):
        """Evalúa la familia sin recorte ni control de dominio."""
        x = np.asarray(x, dtype=np.float64)
        if self.name == 'exponential':
            a, b, c = params
            return a * np.exp(-b * x) + c
        if self.name == 'power':
            a, b, c = params
            if np.any(x <= 0):
                raise DomainError("la familia power requiere x > 0")
            return a * np.power(x, -b) + c
        return np.polynomial.polynomial.polyval(x, params)


EXPONENTIAL_DECAY = CurveFamily('exponential')
POWER_LAW = CurveFamily('power')
DEFAULT_CANDIDATES = (
    EXPONENTIAL_DECAY,
    POWER_LAW,
    CurveFamily('polynomial', 1),
    CurveFamily('polynomial', 2),
    CurveFamily('polynomial', 3)
)


@dataclass(frozen=True)
class RateQualityCurve:
    """
    Función tasa-calidad ajustada delta(L_p) con dominio [x_lo, x_hi].
    """

    family: CurveFamily
    params: tuple
    domain: tuple
    metric: MetricKind
    r2: float
    scheme: str = 'genai'
    strategy: str = 'PE'
    fid_max: float = None
    monotone: bool = None
    samples_hash: str = None
    extractor_version: str = None

    def __post_init__(self):
        object.__setattr__(self, 'params', tuple(float(p) for p in self.params))
        x_lo, x_hi = (float(v) for v in self.domain)
        if not x_lo < x_hi:
            raise DomainError(f"dominio inválido: [{x_lo}, {x_hi}]")
        object.__setattr__(self, 'domain', (x_lo, x_hi))

    @property
    def name(self):
        return f"{self.scheme}-{self.strategy}-{self.metric.value}"

    @property
    def x_lo(self):
        return self.domain[0]

    @property
    def x_hi(self):
        return self.domain[1]

    def contains(self, x):
        return self.x_lo - TOLERANCIA_DOMINIO <= x <= self.x_hi + TOLERANCIA_DOMINIO

    def eval(self, lp):
        """
        delta(L_p) recortado a [0, 1].

        Raises:
            DomainError: L_p fuera de [x_lo, x_hi]
        """
        if not self.contains(lp):
            raise DomainError(
                f"L_p = {lp:.6g} fuera del dominio [{self.x_lo:.6g}, {self.x_hi:.6g}] de {self.name}"
            )
        return float(np.clip(self.family.evaluate(self.params, lp), 0.0, 1.0))

    def eval_many(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        if xs.size and (xs.min() < self.x_lo - TOLERANCIA_DOMINIO or xs.max() > self.x_hi + TOLERANCIA_DOMINIO):
            raise DomainError(f"valores fuera del dominio de {self.name}")
        return np.clip(self.family.evaluate(self.params, xs), 0.0, 1.0)

    def to_dict(self):
        return {
            'name': self.name,
            'family': self.family.name,
            'degree': self.family.degree,
            'params': list(self.params),
            'domain': list(self.domain),
            'r2': self.r2,
            'metric': self.metric.value,
            'scheme': self.scheme,
            'strategy': self.strategy,
            'fid_max': self.fid_max,
            'monotone': self.monotone,
            'samples_hash': self.samples_hash,
            'extractor_version': self.extractor_version
        }

    @classmethod
    def from_dict(cls, datos):
        """
        Raises:
            FitError: campo faltante o inválido
        """
        try:
            familia = CurveFamily(datos['family'], datos.get('degree'))
            dominio = datos['domain']
            if len(dominio) != 2:
                raise FitError("domain debe tener dos valores")
            return cls(
                family=familia,
                params=datos['params'],
                domain=dominio,
                metric=MetricKind.parse(datos['metric']),
                r2=float(datos.get('r2', math.nan)),
                scheme=datos.get('scheme', 'genai'),
                strategy=datos.get('strategy', 'PE'),
                fid_max=datos.get('fid_max'),
                monotone=datos.get('monotone'),
                samples_hash=datos.get('samples_hash'),
                extractor_version=datos.get('extractor_version')
            )
        except KeyError as error:
            raise FitError(f"curva: falta el campo {error}") from None
        except GenflowError:
            raise
        except (TypeError, ValueError) as error:
            raise FitError(f"curva inválida: {error}") from None

    def __repr__(self):
        return (f"<RateQualityCurve {self.name} {self.family.label} "
                f"[{self.x_lo:.4g}, {self.x_hi:.4g}] r2={self.r2:.4f}>")
