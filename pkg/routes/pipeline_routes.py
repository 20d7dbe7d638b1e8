"""
==============================================================================
MODULO DE RUTAS - PIPELINE DE EXPERIMENTOS
==============================================================================

Descripcion:
    Comandos CLI que ejecutan las etapas del experimento (dataset,
    medición, ajuste de curvas, pipeline completo) y un endpoint de
    consulta de las curvas ajustadas.

Endpoints:
    GET    /api/pipeline/curves      - Curvas ajustadas en el directorio de salida

Comandos:
    genflow gen-dataset | measure | fit | pipeline
        [--config RUTA] [--out DIR] [--jobs N] [--seed U64]

Autor: OctavoSMG
Version: 1.0.0
==============================================================================
"""

import functools
from pathlib import Path

import click
from flask import Blueprint, jsonify

from config.settings import Settings
from controllers.pipeline_controller import DIR_CURVAS, PipelineController
from middlewares.error_handler import cli_errors
from models.errors import GenflowError


pipeline_bp = Blueprint('pipeline', __name__, url_prefix='/api/pipeline', cli_group=None)


@pipeline_bp.route('/curves', methods=['GET'])
def listar_curvas():
    """
    ---
    tags:
      - Pipeline
    summary: Curvas tasa-calidad ajustadas
    description: Lista las curvas del directorio de salida configurado (GENFLOW_OUTPUT_DIR)
    responses:
      200:
        description: Lista de curvas
        schema:
          type: object
          properties:
            success:
              type: boolean
            data:
              type: array
      400:
        description: Directorio de curvas inexistente o curva inválida
    """
    try:
        directorio = Path(Settings.get_instance().OUTPUT_DIR) / DIR_CURVAS
        curvas = PipelineController.get_instance().load_curves(directorio)
        return jsonify({
            'success': True,
            'message': f'{len(curvas)} curvas',
            'data': [c.to_dict() for c in curvas]
        }), 200

    except GenflowError as error:
        return jsonify(error.to_dict()), 400


# =============================================================================
# COMANDOS CLI
# =============================================================================
def opciones_pipeline(funcion):
    """Opciones comunes --config, --out, --jobs y --seed."""
    @click.option('--config', 'ruta_config', default=None, help='Archivo JSON de configuración.')
    @click.option('--out', default=None, help='Directorio de salida.')
    @click.option('--jobs', type=click.IntRange(min=1), default=None, help='Workers del map paralelo.')
    @click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=None, help='Semilla maestra.')
    @functools.wraps(funcion)
    def envoltura(ruta_config, out, jobs, seed, **kwargs):
        settings = Settings.get_instance()
        config = PipelineController.get_instance().load_config(
            ruta_config or settings.CONFIG_PATH,
            seed=seed,
            output_dir=out or settings.OUTPUT_DIR,
            jobs=jobs or settings.JOBS
        )
        return funcion(config, **kwargs)
    return envoltura


def _banner(titulo, config):
    click.echo("=" * 80)
    click.echo(f"{titulo}  config={PipelineController.get_instance().config_hash(config)}")
    click.echo("=" * 80)


@pipeline_bp.cli.command('gen-dataset')
@cli_errors
@opciones_pipeline
def comando_gen_dataset(config):
    """Genera el dataset procedural y su manifiesto."""
    _banner("GENERACIÓN DE DATASET", config)
    manifiesto = PipelineController.get_instance().gen_dataset(config)
    click.echo(f"   {manifiesto['count']} imágenes {config.width}x{config.height}x{config.channels}")
    click.echo(f"   dataset_hash {manifiesto['dataset_hash']}")


@pipeline_bp.cli.command('measure')
@cli_errors
@opciones_pipeline
def comando_measure(config):
    """Mide puntos (bpp, calidad) PE y PS y escribe samples.csv."""
    _banner("MEDICIÓN", config)
    filas, fid_max = PipelineController.get_instance().measure(config)
    click.echo(f"   {len(filas)} puntos de muestra")
    if fid_max is not None:
        click.echo(f"   fid_max {fid_max:.6g}")


@pipeline_bp.cli.command('fit')
@cli_errors
@opciones_pipeline
def comando_fit(config):
    """Ajusta una curva por (esquema, estrategia, métrica)."""
    _banner("AJUSTE DE CURVAS", config)
    for curva in PipelineController.get_instance().fit(config):
        click.echo(f"   {curva.name:<28} {curva.family.label:<14} r2={curva.r2:.4f}")


@pipeline_bp.cli.command('pipeline')
@cli_errors
@opciones_pipeline
def comando_pipeline(config):
    """gen-dataset -> measure -> fit -> sweep de los escenarios configurados."""
    _banner("PIPELINE COMPLETO", config)
    resumen = PipelineController.get_instance().run_pipeline(config)
    click.echo(f"   dataset_hash {resumen['dataset_hash']}")
    click.echo(f"   {resumen['samples']} puntos, {len(resumen['curves'])} curvas")
    for nombre, barrido in resumen['scenarios'].items():
        for curva, resultados in barrido.items():
            ganancias = ', '.join(f"{r.g_flow:.3f}" for r in resultados)
            click.echo(f"   {nombre} / {curva}: G_flow [{ganancias}]")
