"""
==============================================================================
MODELO DE CONFIGURACIÓN DEL PIPELINE
==============================================================================

Descripción:
    Configuración de una corrida completa: dataset procedural, esquemas y
    niveles de códec, rejillas de calidad JPEG y de gamma, métricas,
    familias candidatas, escenarios y valores de w para el barrido.

    Las opciones de la CLI (--seed, --out, --jobs) sustituyen los valores
    del archivo. jobs y out no entran en el hash de configuración: la
    salida no depende de ellos.

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

from dataclasses import dataclass, field, replace
from pathlib import Path

from models.curve import DEFAULT_CANDIDATES, CurveFamily
from models.errors import ConfigError, GenflowError
from models.quality import MetricKind


ESQUEMAS_VALIDOS = ('genai', 'jpeg')
NIVELES_VALIDOS = ('low', 'med', 'high')
SEMILLA_MAXIMA = 2 ** 64 - 1


@dataclass(frozen=True)
class PipelineConfig:
    count: int = 256
    width: int = 64
    height: int = 64
    channels: int = 3
    seed: int = 2024
    schemes: tuple = ESQUEMAS_VALIDOS
    metrics: tuple = (MetricKind.DISTORTION, MetricKind.PERCEPTION)
    tiers: tuple = NIVELES_VALIDOS
    jpeg_pe_qualities: tuple = (5, 10, 20, 35, 50, 70, 85, 95)
    jpeg_ps_qualities: dict = field(default_factory=lambda: {'low': 10, 'med': 35, 'high': 75})
    gamma_grid: tuple = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    candidates: tuple = DEFAULT_CANDIDATES
    scenarios: tuple = ()
    w_values: tuple = (0.0, 0.5, 1.0, 2.0, 5.0)
    jobs: int = 1
    output_dir: str = 'out'

    def __post_init__(self):
        for nombre in ('count', 'width', 'height'):
            if getattr(self, nombre) < 1:
                raise ConfigError(f"{nombre}: debe ser >= 1, recibido {getattr(self, nombre)}")
        if self.channels not in (1, 3):
            raise ConfigError(f"dataset.channels: debe ser 1 o 3, recibido {self.channels}")
        if not 0 <= self.seed <= SEMILLA_MAXIMA:
            raise ConfigError(f"dataset.seed: fuera de [0, 2^64), recibido {self.seed}")
        if self.jobs < 1:
            raise ConfigError(f"jobs: debe ser >= 1, recibido {self.jobs}")

        for esquema in self.schemes:
            if esquema not in ESQUEMAS_VALIDOS:
                raise ConfigError(f"schemes: esquema desconocido {esquema!r}")
        for nivel in self.tiers:
            if nivel not in NIVELES_VALIDOS:
                raise ConfigError(f"tiers: nivel desconocido {nivel!r}")
        for nivel in self.tiers:
            if nivel not in self.jpeg_ps_qualities:
                raise ConfigError(f"jpeg_ps_qualities: falta la calidad del nivel {nivel!r}")
        for calidad in list(self.jpeg_pe_qualities) + list(self.jpeg_ps_qualities.values()):
            if not 1 <= calidad <= 100:
                raise ConfigError(f"calidad JPEG fuera de [1,100]: {calidad}")

        rejilla = sorted(self.gamma_grid)
        if not rejilla or rejilla[0] != 0.0 or rejilla[-1] > 1.0:
            raise ConfigError("gamma_grid: debe incluir 0 y estar en [0,1]")
        if len(set(rejilla)) != len(rejilla):
            raise ConfigError("gamma_grid: valores repetidos")
        object.__setattr__(self, 'gamma_grid', tuple(rejilla))

        if any(w < 0 for w in self.w_values):
            raise ConfigError("w_values: los pesos deben ser >= 0")

    @property
    def dims(self):
        return self.width, self.height

    def with_overrides(self, seed=None, output_dir=None, jobs=None):
        cambios = {}
        if seed is not None:
            cambios['seed'] = int(seed)
        if output_dir is not None:
            cambios['output_dir'] = str(output_dir)
        if jobs is not None:
            cambios['jobs'] = int(jobs)
        return replace(self, **cambios) if cambios else self

    def check_files(self):
        """
        Verifica que los escenarios referenciados existen.

        Raises:
            ConfigError: escenario inexistente
        """
        for ruta in self.scenarios:
            if not Path(ruta).is_file():
                raise ConfigError(f"scenarios: no existe el archivo {ruta}")

    def hashable_dict(self):
        """Campos que determinan la salida (sin jobs ni output_dir)."""
        return {
            'dataset': {
                'count': self.count, 'width': self.width, 'height': self.height,
                'channels': self.channels, 'seed': self.seed
            },
            'schemes': list(self.schemes),
            'metrics': [m.value for m in self.metrics],
            'tiers': list(self.tiers),
            'jpeg_pe_qualities': list(self.jpeg_pe_qualities),
            'jpeg_ps_qualities': dict(self.jpeg_ps_qualities),
            'gamma_grid': list(self.gamma_grid),
            'candidates': [c.label for c in self.candidates],
            'w_values': list(self.w_values)
        }

    def to_dict(self):
        datos = self.hashable_dict()
        datos['scenarios'] = [str(r) for r in self.scenarios]
        datos['jobs'] = self.jobs
        datos['output_dir'] = self.output_dir
        return datos

    @classmethod
    def from_dict(cls, datos, base_path=None):
        """
        Construye la configuración desde el JSON del pipeline.

        Args:
            datos (dict): contenido del archivo
            base_path (str|Path): archivo de origen; las rutas de escenarios
                se resuelven relativas a él

        Raises:
            ConfigError: campo inválido, con su nombre
        """
        if not isinstance(datos, dict):
            raise ConfigError("la configuración debe ser un objeto JSON")
        dataset = datos.get('dataset', {})
        base = Path(base_path).parent if base_path else Path('.')

        def campo(nombre, conversion, valor, defecto):
            if valor is None:
                return defecto
            try:
                return conversion(valor)
            except GenflowError as error:
                raise ConfigError(f"{nombre}: {error}") from None
            except (TypeError, ValueError):
                raise ConfigError(f"{nombre}: valor inválido {valor!r}") from None

        defecto = cls()
        return cls(
            count=campo('dataset.count', int, dataset.get('count'), defecto.count),
            width=campo('dataset.width', int, dataset.get('width'), defecto.width),
            height=campo('dataset.height', int, dataset.get('height'), defecto.height),
            channels=campo('dataset.channels', int, dataset.get('channels'), defecto.channels),
            seed=campo('dataset.seed', int, dataset.get('seed'), defecto.seed),
            schemes=campo('schemes', lambda v: tuple(str(e) for e in v), datos.get('schemes'), defecto.schemes),
            metrics=campo('metrics', lambda v: tuple(MetricKind.parse(m) for m in v), datos.get('metrics'), defecto.metrics),
            tiers=campo('tiers', lambda v: tuple(str(n) for n in v), datos.get('tiers'), defecto.tiers),
            jpeg_pe_qualities=campo(
                'jpeg_pe_qualities', lambda v: tuple(int(q) for q in v),
                datos.get('jpeg_pe_qualities'), defecto.jpeg_pe_qualities
            ),
            jpeg_ps_qualities=campo(
                'jpeg_ps_qualities', lambda v: {str(k): int(q) for k, q in v.items()},
                datos.get('jpeg_ps_qualities'), defecto.jpeg_ps_qualities
            ),
            gamma_grid=campo('gamma_grid', lambda v: tuple(float(g) for g in v), datos.get('gamma_grid'), defecto.gamma_grid),
            candidates=campo(
                'candidates', lambda v: tuple(CurveFamily.parse(c) for c in v),
                datos.get('candidates'), defecto.candidates
            ),
            scenarios=campo(
                'scenarios', lambda v: tuple(str(base / r) for r in v),
                datos.get('scenarios'), defecto.scenarios
            ),
            w_values=campo('w_values', lambda v: tuple(float(w) for w in v), datos.get('w_values'), defecto.w_values),
            jobs=campo('jobs', int, datos.get('jobs'), defecto.jobs),
            output_dir=campo('output_dir', str, datos.get('output_dir'), defecto.output_dir)
        )

    def __repr__(self):
        return f"<PipelineConfig {self.count}x{self.width}x{self.height} seed={self.seed}>"
