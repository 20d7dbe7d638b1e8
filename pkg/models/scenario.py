"""
==============================================================================
MODELO DE DOMINIO - ESCENARIOS DE OPTIMIZACIÓN Y RESULTADOS
==============================================================================

Descripción:
    Escenario de red con un nodo generativo (topología, contenido L, peso
    de calidad w, curva tasa-calidad y cotas de búsqueda) y el resultado
    de la optimización del tamaño de prompt.

Formato JSON de escenario:
    {
      "name": "fig4-genai-pe",
      "topology": {...} | "fig1_topology.json",
      "g": "g", "L": 24, "w": 0.5, "metric": "perception",
      "curve": "genai-PE-perception" | "curvas/x.json" | {...},
      "f_min": 0.05, "lp_lower": 1, "lp_upper": null,
      "replicate": false, "w_values": [0, 0.5, 1, 2]
    }

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import math
from dataclasses import dataclass, replace

from models.errors import GenflowError, ScenarioError
from models.quality import MetricKind
from models.topology import NodeKind


@dataclass(frozen=True)
class GenScenario:
    """
    Escenario de optimización sobre un único nodo generativo g.

    c_sg y c_gd son las capacidades de las aristas s->g y g->d.
    """

    topology: object
    g: str
    L: float
    w: float
    metric: MetricKind
    curve: object = None
    name: str = 'escenario'
    f_min_override: float = None
    lp_lower: float = 1.0
    lp_upper: float = None
    replicate: bool = False
    w_values: tuple = ()

    def __post_init__(self):
        rol = self.topology.role_of(self.g)
        if rol.kind is not NodeKind.GENERATIVE:
            raise ScenarioError(f"el nodo '{self.g}' no es generativo")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ScenarioError(f"L debe ser > 0, recibido {self.L}")
        if not self.w >= 0:
            raise ScenarioError(f"w debe ser >= 0, recibido {self.w}")
        if self.lp_lower < 0:
            raise ScenarioError(f"lp_lower debe ser >= 0, recibido {self.lp_lower}")
        if self.f_min_override is not None and self.f_min_override < 0:
            raise ScenarioError(f"f_min debe ser >= 0, recibido {self.f_min_override}")
        for nombre, (u, v) in (('c_sg', (self.topology.source, self.g)),
                               ('c_gd', (self.g, self.topology.sink))):
            if self.topology.capacity(u, v) is None:
                raise ScenarioError(f"{nombre} no resoluble: falta la arista {u}->{v}")
        if self.curve is None and not self.replicate:
            raise ScenarioError("el escenario necesita una curva salvo en modo replicate")

    @property
    def c_sg(self):
        return self.topology.capacity(self.topology.source, self.g)

    @property
    def c_gd(self):
        return self.topology.capacity(self.g, self.topology.sink)

    @property
    def f_min(self):
        if self.f_min_override is not None:
            return self.f_min_override
        return self.topology.role_of(self.g).f_min

    def with_w(self, w):
        return replace(self, w=float(w))

    def with_curve(self, curve):
        return replace(self, curve=curve)

    @classmethod
    def from_dict(cls, datos, topology, curve):
        """
        Construye el escenario con topología y curva ya resueltas.

        Raises:
            ScenarioError: campo faltante o inválido
        """
        try:
            return cls(
                topology=topology,
                g=str(datos['g']),
                L=float(datos['L']),
                w=float(datos.get('w', 0.0)),
                metric=MetricKind.parse(datos.get('metric', 'perception')),
                curve=curve,
                name=str(datos.get('name', 'escenario')),
                f_min_override=None if datos.get('f_min') is None else float(datos['f_min']),
                lp_lower=1.0 if datos.get('lp_lower') is None else float(datos['lp_lower']),
                lp_upper=None if datos.get('lp_upper') is None else float(datos['lp_upper']),
                replicate=bool(datos.get('replicate', False)),
                w_values=tuple(float(w) for w in datos.get('w_values', ()))
            )
        except KeyError as error:
            raise ScenarioError(f"escenario: falta el campo {error}") from None
        except GenflowError:
            raise
        except (TypeError, ValueError) as error:
            raise ScenarioError(f"escenario inválido: {error}") from None

    def __repr__(self):
        return f"<GenScenario {self.name} g={self.g} L={self.L} w={self.w}>"


@dataclass(frozen=True)
class OptimizationResult:
    """
    Resultado de la optimización. En escenarios infactibles los campos
    numéricos son NaN y feasible es False.
    """

    w: float
    lp_star: float
    lambda_star: float
    f_sg: float
    f_gd: float
    y_g: float
    objective: float
    g_flow: float
    feasible: bool
    f_prime_sd: float = math.nan

    COLUMNAS = ('w', 'L_p_star', 'lambda_star', 'f_sg', 'f_gd', 'y_g', 'G_flow', 'objective', 'feasible')

    @classmethod
    def infeasible(cls, w, f_prime_sd=math.nan):
        return cls(
            w=w, lp_star=math.nan, lambda_star=math.nan, f_sg=math.nan, f_gd=math.nan,
            y_g=math.nan, objective=math.nan, g_flow=math.nan, feasible=False,
            f_prime_sd=f_prime_sd
        )

    def to_row(self):
        return {
            'w': self.w,
            'L_p_star': self.lp_star,
            'lambda_star': self.lambda_star,
            'f_sg': self.f_sg,
            'f_gd': self.f_gd,
            'y_g': self.y_g,
            'G_flow': self.g_flow,
            'objective': self.objective,
            'feasible': self.feasible
        }

    def to_dict(self):
        datos = self.to_row()
        datos['f_prime_sd'] = self.f_prime_sd
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in datos.items()}
