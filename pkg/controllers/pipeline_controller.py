"""
==============================================================================
CONTROLADOR DEL PIPELINE - DATASET, MEDICIÓN, AJUSTE Y OPTIMIZACIÓN
==============================================================================

Descripción:
    Controlador Singleton que encadena las etapas del experimento sobre el
    sistema de archivos y define la estructura de artefactos. Cada etapa
    lee lo que escribió la anterior, de modo que se pueden ejecutar por
    separado (comandos de la CLI) o todas juntas (pipeline).

Características:
    - gen-dataset: imágenes PGM/PPM + manifest.json con hashes
    - measure: samples.csv con puntos PE y PS por esquema y métrica
    - fit: un JSON de curva por (esquema, estrategia, métrica) + resumen
    - optimize / sweep: CSV de resultados + fig4.csv para graficar
    - Escenarios con topología y curva en línea o por referencia
    - Hash de configuración en todos los artefactos

Estructura de salida:
    <out>/dataset/img_0000.ppm ... manifest.json
    <out>/samples/samples.csv
    <out>/curves/<esquema>-<estrategia>-<métrica>.json, curves.csv
    <out>/results/<escenario>.csv, fig4.csv

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging
import math
from dataclasses import replace
from pathlib import Path

from controllers.curve_controller import CurveController
from controllers.flow_controller import FlowController
from controllers.measurement_controller import MeasurementController
from controllers.optimization_controller import OptimizationController
from helpers.file_helper import FileHelper
from helpers.image_helper import ImageHelper
from helpers.metrics_helper import FEATURE_EXTRACTOR_VERSION
from models.curve import EXPONENTIAL_DECAY, RateQualityCurve, SamplePoint
from models.errors import ConfigError, FitError, PipelineIOError, ScenarioError
from models.pipeline_config import PipelineConfig
from models.quality import MetricKind
from models.scenario import GenScenario, OptimizationResult
from models.topology import FlowAssignment, NetworkTopology


logger = logging.getLogger(__name__)

DIR_DATASET = 'dataset'
DIR_MUESTRAS = 'samples'
DIR_CURVAS = 'curves'
DIR_RESULTADOS = 'results'
ARCHIVO_MANIFIESTO = 'manifest.json'
ARCHIVO_MUESTRAS = 'samples.csv'
ARCHIVO_RESUMEN_CURVAS = 'curves.csv'
ARCHIVO_FIG4 = 'fig4.csv'

COLUMNAS_MUESTRAS = ('bpp', 'value', 'metric', 'scheme', 'strategy', 'gamma', 'raw')
COLUMNAS_CURVAS = ('name', 'family', 'r2', 'x_lo', 'x_hi', 'monotone', 'fid_max')
COLUMNAS_FIG4 = ('curve', 'w', 'L_p_star', 'G_flow', 'objective')


class PipelineController:
    """
    Controlador del pipeline con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(PipelineController, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.file_helper = FileHelper.get_instance()
        self.image_helper = ImageHelper.get_instance()
        self.measurement_controller = MeasurementController.get_instance()
        self.curve_controller = CurveController.get_instance()
        self.optimization_controller = OptimizationController.get_instance()
        self.flow_controller = FlowController.get_instance()

        self._initialized = True

    # =========================================================================
    # CONFIGURACIÓN
    # =========================================================================
    def load_config(self, ruta, seed=None, output_dir=None, jobs=None):
        """
        Lee la configuración y aplica las sustituciones de la CLI.

        Raises:
            PipelineIOError: archivo inexistente
            ConfigError: campo inválido o escenario referenciado inexistente
        """
        datos = self.file_helper.read_json(ruta)
        config = PipelineConfig.from_dict(datos, base_path=ruta)
        config = config.with_overrides(seed=seed, output_dir=output_dir, jobs=jobs)
        config.check_files()
        self.file_helper.ensure_directory(config.output_dir)
        return config

    def config_hash(self, config):
        return self.file_helper.config_hash(config.hashable_dict())

    @staticmethod
    def _ruta(config, *partes):
        return Path(config.output_dir).joinpath(*partes)

    # =========================================================================
    # DATASET
    # =========================================================================
    def gen_dataset(self, config):
        """
        Genera el dataset procedural y su manifiesto.

        Returns:
            dict: manifiesto (count, dims, seed, hashes por archivo)
        """
        directorio = self.file_helper.ensure_directory(self._ruta(config, DIR_DATASET))
        extension = 'pgm' if config.channels == 1 else 'ppm'
        imagenes = self.image_helper.generate_dataset(
            config.count, config.width, config.height, config.seed, config.channels
        )

        archivos = []
        for indice, imagen in enumerate(imagenes):
            nombre = f"img_{indice:04d}.{extension}"
            ruta = directorio / nombre
            self.image_helper.write_image(imagen, ruta)
            archivos.append({'name': nombre, 'sha256': self.file_helper.file_hash(ruta)})

        manifiesto = {
            'count': config.count,
            'width': config.width,
            'height': config.height,
            'channels': config.channels,
            'seed': config.seed,
            'config_hash': self.config_hash(config),
            'dataset_hash': self.file_helper.config_hash([a['sha256'] for a in archivos]),
            'files': archivos
        }
        self.file_helper.write_json(directorio / ARCHIVO_MANIFIESTO, manifiesto)
        logger.info("Dataset: %d imágenes %dx%d en %s", config.count, config.width, config.height, directorio)
        return manifiesto

    def load_dataset(self, config):
        """
        Lee las imágenes listadas en el manifiesto, en orden.

        Raises:
            PipelineIOError: manifiesto o imagen faltante
        """
        directorio = self._ruta(config, DIR_DATASET)
        manifiesto = self.file_helper.read_json(directorio / ARCHIVO_MANIFIESTO)
        return [self.image_helper.read_image(directorio / a['name']) for a in manifiesto['files']]

    # =========================================================================
    # MEDICIÓN
    # =========================================================================
    def measure(self, config, dataset=None):
        """
        Mide los puntos PE y PS de cada esquema y métrica y escribe
        samples.csv. La percepción se normaliza con un único fid_max,
        estimado de los puntos PE crudos del primer esquema (genai si está).

        Returns:
            tuple: (lista de filas, fid_max o None)
        """
        if dataset is None:
            dataset = self.load_dataset(config)
        bpp_verdadero = self.image_helper.true_image_bpp(dataset[0].channels)
        filas = []
        fid_max = None

        for metrica in config.metrics:
            puntos_pe = {
                esquema: self.measurement_controller.pe_samples(
                    dataset, esquema, metrica, seed=config.seed, jobs=config.jobs,
                    qualities=config.jpeg_pe_qualities
                )
                for esquema in config.schemes
            }
            if metrica is MetricKind.PERCEPTION:
                referencia = 'genai' if 'genai' in puntos_pe else config.schemes[0]
                fid_max = self.curve_controller.estimate_fid_max(puntos_pe[referencia], bpp_verdadero)
                puntos_pe = {
                    esquema: self.curve_controller.normalize_points(puntos, fid_max)
                    for esquema, puntos in puntos_pe.items()
                }

            for esquema in config.schemes:
                filas.extend(self._fila_muestra(p, None) for p in puntos_pe[esquema])
                for nivel in config.tiers:
                    reconstruccion = self.measurement_controller.reconstruct(
                        dataset, esquema,
                        nivel if esquema == 'genai' else config.jpeg_ps_qualities[nivel],
                        config.seed, config.jobs
                    )
                    puntos_ps = self.measurement_controller.ps_samples(
                        dataset, esquema, nivel, config.gamma_grid, metrica, fid_max=fid_max,
                        seed=config.seed, jobs=config.jobs, reconstruction=reconstruccion
                    )
                    filas.extend(
                        self._fila_muestra(p, gamma) for p, gamma in zip(puntos_ps, config.gamma_grid)
                    )

        cabecera = self.file_helper.provenance_line(
            self.config_hash(config), FEATURE_EXTRACTOR_VERSION, fid_max=fid_max
        )
        ruta = self._ruta(config, DIR_MUESTRAS, ARCHIVO_MUESTRAS)
        self.file_helper.write_csv(ruta, filas, COLUMNAS_MUESTRAS, cabecera)
        logger.info("Medición: %d puntos en %s", len(filas), ruta)
        return filas, fid_max

    @staticmethod
    def _fila_muestra(punto, gamma):
        fila = punto.to_row()
        fila['gamma'] = math.nan if gamma is None else gamma
        fila['raw'] = punto.raw if punto.raw is not None else punto.value
        return fila

    def load_samples(self, config):
        """
        Lee samples.csv.

        Returns:
            tuple: (dict (esquema, estrategia, métrica) -> list de SamplePoint,
                    fid_max o None)
        """
        ruta = self._ruta(config, DIR_MUESTRAS, ARCHIVO_MUESTRAS)
        df, metadatos = self.file_helper.read_csv(ruta)
        faltantes = set(COLUMNAS_MUESTRAS) - set(df.columns)
        if faltantes:
            raise PipelineIOError(f"columnas faltantes {sorted(faltantes)}", ruta)

        grupos = {}
        for fila in df.itertuples(index=False):
            metrica = MetricKind.parse(fila.metric)
            punto = SamplePoint(
                float(fila.bpp), float(fila.value), metrica, fila.scheme, fila.strategy,
                raw=None if metrica is MetricKind.DISTORTION else float(fila.raw)
            )
            grupos.setdefault((fila.scheme, fila.strategy, metrica), []).append(punto)

        fid_max = float(metadatos['fid_max']) if 'fid_max' in metadatos else None
        return grupos, fid_max

    # =========================================================================
    # AJUSTE
    # =========================================================================
    def fit(self, config):
        """
        Ajusta una curva por grupo de muestras y escribe los JSON de curva.

        Raises:
            FitError: grupo con muestras insuficientes
        """
        grupos, fid_max = self.load_samples(config)
        bpp_verdadero = self.image_helper.true_image_bpp(config.channels)
        directorio = self.file_helper.ensure_directory(self._ruta(config, DIR_CURVAS))
        curvas = []

        for (esquema, estrategia, metrica), puntos in sorted(grupos.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].value)):
            curva_fid_max = fid_max if metrica is MetricKind.PERCEPTION else None
            if estrategia == 'PE':
                curva = self.curve_controller.build_pe_curve(
                    puntos, bpp_verdadero, metrica, EXPONENTIAL_DECAY, fid_max=curva_fid_max
                )
            else:
                if len(puntos) < 2:
                    raise FitError(f"{esquema}-{estrategia}-{metrica.value}: muestras insuficientes ({len(puntos)})")
                curva = self.curve_controller.fit_ps_points(
                    puntos, config.channels, config.candidates, fid_max=curva_fid_max
                )
            curva = replace(
                curva,
                samples_hash=self.file_helper.config_hash([p.to_row() for p in puntos]),
                extractor_version=FEATURE_EXTRACTOR_VERSION
            )
            self.file_helper.write_json(directorio / f"{curva.name}.json", curva.to_dict())
            curvas.append(curva)
            logger.info("Curva %s: %s r2=%.4f", curva.name, curva.family.label, curva.r2)

        cabecera = self.file_helper.provenance_line(
            self.config_hash(config), FEATURE_EXTRACTOR_VERSION, fid_max=fid_max
        )
        self.file_helper.write_csv(
            directorio / ARCHIVO_RESUMEN_CURVAS,
            [self._fila_curva(c) for c in curvas], COLUMNAS_CURVAS, cabecera
        )
        return curvas

    @staticmethod
    def _fila_curva(curva):
        return {
            'name': curva.name,
            'family': curva.family.label,
            'r2': curva.r2,
            'x_lo': curva.x_lo,
            'x_hi': curva.x_hi,
            'monotone': curva.monotone,
            'fid_max': math.nan if curva.fid_max is None else curva.fid_max
        }

    def load_curves(self, curves_dir):
        """Todas las curvas JSON de un directorio, ordenadas por nombre."""
        directorio = Path(curves_dir)
        if not directorio.is_dir():
            raise PipelineIOError("directorio de curvas inexistente", directorio)
        return [
            RateQualityCurve.from_dict(self.file_helper.read_json(ruta))
            for ruta in sorted(directorio.glob('*.json'))
        ]

    # =========================================================================
    # ESCENARIOS
    # =========================================================================
    def load_topology(self, referencia, base=None):
        """Topología en línea (dict) o ruta a un archivo JSON."""
        if isinstance(referencia, dict):
            return NetworkTopology.from_dict(referencia)
        ruta = self.file_helper.resolve_relative(referencia, base) if base else Path(referencia)
        return NetworkTopology.from_dict(self.file_helper.read_json(ruta))

    def load_curve(self, referencia, base=None, curves_dir=None):
        """
        Curva en línea (dict), ruta a un JSON relativa al escenario, o
        nombre resuelto como <curves_dir>/<nombre>.json.
        """
        if isinstance(referencia, dict):
            return RateQualityCurve.from_dict(referencia)
        referencia = str(referencia)
        if referencia.endswith('.json'):
            ruta = self.file_helper.resolve_relative(referencia, base) if base else Path(referencia)
        else:
            if curves_dir is None:
                raise ScenarioError(f"curva '{referencia}' por nombre requiere un directorio de curvas")
            ruta = Path(curves_dir) / f"{referencia}.json"
        return RateQualityCurve.from_dict(self.file_helper.read_json(ruta))

    def scenario_from_dict(self, datos, base=None, curves_dir=None):
        """
        Raises:
            ScenarioError: falta la topología o campo inválido
        """
        if not isinstance(datos, dict):
            raise ScenarioError("el escenario debe ser un objeto JSON")
        if 'topology' not in datos:
            raise ScenarioError("escenario: falta el campo 'topology'")
        topologia = self.load_topology(datos['topology'], base)
        curva = None
        if datos.get('curve') is not None:
            curva = self.load_curve(datos['curve'], base, curves_dir)
        return GenScenario.from_dict(datos, topologia, curva)

    def load_scenario(self, ruta, curves_dir=None):
        return self.scenario_from_dict(self.file_helper.read_json(ruta), base=ruta, curves_dir=curves_dir)

    # =========================================================================
    # OPTIMIZACIÓN
    # =========================================================================
    def optimize(self, scenario, output_dir=None, config_hash='-'):
        """Resuelve el escenario y, si hay salida, escribe <escenario>.csv."""
        resultado = self.optimization_controller.optimize_prompt_size(scenario)
        if output_dir is not None:
            self._escribir_resultados(scenario, [resultado], output_dir, config_hash)
        return resultado

    def sweep(self, scenario, w_values, output_dir=None, config_hash='-', curves=None):
        """
        Barrido en w. Sin curvas extra usa la curva del escenario; con
        curves repite el barrido sustituyendo la curva (una familia de
        filas por curva en fig4.csv).

        Returns:
            dict: nombre de curva -> list de OptimizationResult
        """
        if not w_values:
            raise ScenarioError("el barrido necesita valores de w")
        if curves:
            variantes = [(c.name, scenario.with_curve(c)) for c in curves]
        else:
            variantes = [(self._nombre_curva(scenario), scenario)]

        resultados = {
            nombre: self.optimization_controller.sweep_w(variante, w_values)
            for nombre, variante in variantes
        }
        if output_dir is not None:
            filas = []
            for nombre, lista in resultados.items():
                filas.extend(self._fila_fig4(nombre, r) for r in lista)
            cabecera = self.file_helper.provenance_line(config_hash, scenario=scenario.name)
            directorio = Path(output_dir) / DIR_RESULTADOS
            self.file_helper.write_csv(directorio / ARCHIVO_FIG4, filas, COLUMNAS_FIG4, cabecera)
            todos = [r for lista in resultados.values() for r in lista]
            self._escribir_resultados(scenario, todos, output_dir, config_hash,
                                      nombres=[n for n, lista in resultados.items() for _ in lista])
        return resultados

    @staticmethod
    def _nombre_curva(scenario):
        if scenario.replicate:
            return 'replicator'
        return scenario.curve.name

    @staticmethod
    def _fila_fig4(nombre, resultado):
        return {
            'curve': nombre,
            'w': resultado.w,
            'L_p_star': resultado.lp_star,
            'G_flow': resultado.g_flow,
            'objective': resultado.objective
        }

    def _escribir_resultados(self, scenario, resultados, output_dir, config_hash, nombres=None):
        directorio = Path(output_dir) / DIR_RESULTADOS
        columnas = ('curve',) + OptimizationResult.COLUMNAS
        nombres = nombres or [self._nombre_curva(scenario)] * len(resultados)
        filas = [{'curve': n, **r.to_row()} for n, r in zip(nombres, resultados)]
        cabecera = self.file_helper.provenance_line(
            config_hash, scenario=scenario.name, f_prime_sd=resultados[0].f_prime_sd if resultados else None
        )
        return self.file_helper.write_csv(directorio / f"{scenario.name}.csv", filas, columnas, cabecera)

    # =========================================================================
    # FLUJO MÁXIMO
    # =========================================================================
    def maxflow_report(self, topology, flows=None):
        """
        Valor del flujo máximo, un corte mínimo y divergencias por nodo.
        Si se pasa una asignación de flujo, también su validación.
        """
        s, d = topology.source, topology.sink
        valor, flujo = self.flow_controller.max_flow(topology, s, d)
        corte = self.flow_controller.min_cut(topology, s, d)
        reporte = {
            'value': valor,
            'cut': corte.to_dict(),
            'flows': flujo.to_list(),
            'divergences': {
                n: self.flow_controller.node_divergence(topology, flujo, n) for n in topology.node_ids()
            }
        }
        if flows is not None:
            try:
                asignacion = flows if isinstance(flows, FlowAssignment) else FlowAssignment.from_list(flows)
            except (KeyError, TypeError, ValueError) as error:
                raise ConfigError(f"flows: entrada inválida ({error})") from None
            reporte['validation'] = self.flow_controller.validate_flow(topology, asignacion).to_dict()
        return reporte

    # =========================================================================
    # PIPELINE COMPLETO
    # =========================================================================
    def run_pipeline(self, config):
        """
        gen-dataset -> measure -> fit -> sweep de cada escenario.

        Los escenarios con curva se barren con todas las curvas ajustadas
        de su métrica; los de replicación, una sola vez.

        Returns:
            dict: resumen por etapa
        """
        if not config.scenarios:
            raise ConfigError("scenarios: el pipeline necesita al menos un escenario")
        hash_config = self.config_hash(config)

        manifiesto = self.gen_dataset(config)
        dataset = self.load_dataset(config)
        filas, fid_max = self.measure(config, dataset)
        curvas = self.fit(config)
        directorio_curvas = self._ruta(config, DIR_CURVAS)

        filas_fig4 = []
        resultados_escenarios = {}
        for ruta in config.scenarios:
            escenario = self.load_scenario(ruta, curves_dir=directorio_curvas)
            w_values = escenario.w_values or config.w_values
            if escenario.replicate:
                barrido = self.sweep(escenario, w_values)
            else:
                de_metrica = [c for c in curvas if c.metric is escenario.metric]
                barrido = self.sweep(escenario, w_values, curves=de_metrica)
            todos = [r for lista in barrido.values() for r in lista]
            self._escribir_resultados(
                escenario, todos, config.output_dir, hash_config,
                nombres=[n for n, lista in barrido.items() for _ in lista]
            )
            for nombre, lista in barrido.items():
                etiqueta = nombre if not escenario.replicate else f"{escenario.name}:replicator"
                filas_fig4.extend(self._fila_fig4(etiqueta, r) for r in lista)
            resultados_escenarios[escenario.name] = barrido

        self.file_helper.write_csv(
            self._ruta(config, DIR_RESULTADOS, ARCHIVO_FIG4), filas_fig4, COLUMNAS_FIG4,
            self.file_helper.provenance_line(hash_config, FEATURE_EXTRACTOR_VERSION, fid_max=fid_max)
        )
        logger.info("Pipeline completo en %s", config.output_dir)
        return {
            'config_hash': hash_config,
            'dataset_hash': manifiesto['dataset_hash'],
            'samples': len(filas),
            'curves': [c.name for c in curvas],
            'scenarios': resultados_escenarios
        }

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
