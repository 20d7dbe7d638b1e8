"""
==============================================================================
MODELO DE DOMINIO - MÉTRICAS DE CALIDAD
==============================================================================

Descripción:
    Tipos de las métricas de calidad: el tipo de métrica (distorsión o
    percepción), el puntaje normalizado y la gaussiana ajustada sobre
    vectores de características.

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from models.errors import DomainError


class MetricKind(str, Enum):
    DISTORTION = 'distortion'
    PERCEPTION = 'perception'

    @classmethod
    def parse(cls, valor):
        try:
            return cls(str(valor).lower())
        except ValueError:
            raise DomainError(f"métrica desconocida: {valor!r}") from None


@dataclass(frozen=True)
class QualityScore:
    """
    delta_D o delta_P: valor crudo y normalizado en [0, 1] (0 = perfecto).

    Un FID queda sin normalizar (None) hasta conocer fid_max.
    """

    kind: MetricKind
    raw: float
    normalized: float = None

    def __post_init__(self):
        if self.normalized is not None and not 0.0 <= self.normalized <= 1.0:
            raise DomainError(f"puntaje normalizado fuera de [0,1]: {self.normalized}")

    def to_dict(self):
        return {'metric': self.kind.value, 'raw': self.raw, 'normalized': self.normalized}


@dataclass(frozen=True, eq=False)
class FeatureGaussian:
    """
    Gaussiana ajustada a un conjunto de embeddings: media (D,) y covarianza (D, D).
    """

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        media = np.asarray(self.mean, dtype=np.float64)
        covarianza = np.asarray(self.covariance, dtype=np.float64)
        if media.ndim != 1 or covarianza.shape != (media.size, media.size):
            raise DomainError(
                f"dimensiones inconsistentes: media {media.shape}, covarianza {covarianza.shape}"
            )
        if not (np.all(np.isfinite(media)) and np.all(np.isfinite(covarianza))):
            raise DomainError("la gaussiana contiene valores no finitos")
        if not np.allclose(covarianza, covarianza.T):
            raise DomainError("la covarianza no es simétrica")
        object.__setattr__(self, 'mean', media)
        object.__setattr__(self, 'covariance', covarianza)

    @property
    def dimension(self):
        return self.mean.size

    def __repr__(self):
        return f"<FeatureGaussian D={self.dimension} traza={np.trace(self.covariance):.4g}>"
