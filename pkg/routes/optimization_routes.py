"""
==============================================================================
MODULO DE RUTAS - OPTIMIZACIÓN DEL TAMAÑO DE PROMPT
==============================================================================

Descripcion:
    Blueprint de Flask para resolver escenarios con un nodo generativo:
    tamaño de prompt óptimo, tasa lambda*, flujos y ganancia G_flow, y
    barridos sobre el peso de calidad w. Incluye los comandos CLI.

Endpoints:
    POST   /api/optimization/optimize   - Resolver un escenario
    POST   /api/optimization/sweep      - Barrido en w

Comandos:
    genflow optimize ESCENARIO [--curves DIR] [--out DIR] [--w W]
    genflow sweep ESCENARIO [--curves DIR] [--out DIR] [--w W ...]

Autor: OctavoSMG
Version: 1.0.0
==============================================================================
"""

import math
from pathlib import Path

import click
from flask import Blueprint, request, jsonify

from config.settings import Settings
from controllers.pipeline_controller import DIR_CURVAS, PipelineController
from helpers.file_helper import FileHelper
from middlewares.error_handler import SALIDA_INFACTIBLE, cli_errors
from models.errors import GenflowError


optimization_bp = Blueprint('optimization', __name__, url_prefix='/api/optimization', cli_group=None)


def _error_parametro(mensaje):
    return jsonify({
        'success': False,
        'message': mensaje,
        'error': 'PARAMETRO_FALTANTE'
    }), 400


@optimization_bp.route('/optimize', methods=['POST'])
def optimizar_escenario():
    """
    ---
    tags:
      - Optimización
    summary: Tamaño de prompt óptimo de un escenario
    description: Maximiza lambda (L - L_p)(1 - w delta(L_p)) sujeto a las capacidades c_sg y c_gd
    parameters:
      - name: body
        in: body
        required: true
        description: Escenario con topología y curva en línea
        schema:
          type: object
          required:
            - topology
            - g
            - L
          properties:
            topology:
              type: object
            g:
              type: string
              example: "g"
            L:
              type: number
              example: 24
            w:
              type: number
              example: 0.5
            metric:
              type: string
              example: "perception"
            curve:
              type: object
            replicate:
              type: boolean
    responses:
      200:
        description: Resultado de la optimización
        schema:
          type: object
          properties:
            success:
              type: boolean
            data:
              type: object
      400:
        description: Escenario inválido
      500:
        description: Error interno del servidor
    """
    try:
        datos_request = request.get_json(silent=True)
        if not isinstance(datos_request, dict):
            return _error_parametro('Debe enviar un escenario en formato JSON')

        controlador = PipelineController.get_instance()
        escenario = controlador.scenario_from_dict(datos_request)
        resultado = controlador.optimize(escenario)

        return jsonify({
            'success': True,
            'message': 'Escenario resuelto' if resultado.feasible else 'Escenario infactible',
            'data': resultado.to_dict()
        }), 200

    except GenflowError as error:
        return jsonify(error.to_dict()), 400

    except Exception as error:
        return jsonify({
            'success': False,
            'message': f'Error al optimizar: {str(error)}',
            'error': 'ERROR_INTERNO'
        }), 500


@optimization_bp.route('/sweep', methods=['POST'])
def barrer_w():
    """
    ---
    tags:
      - Optimización
    summary: Barrido del peso de calidad w
    description: Resuelve el escenario para cada valor de w_values, en orden
    parameters:
      - name: body
        in: body
        required: true
        schema:
          type: object
          required:
            - topology
            - g
            - L
            - w_values
          properties:
            w_values:
              type: array
              items:
                type: number
              example: [0, 0.5, 1, 2]
    responses:
      200:
        description: Un resultado por valor de w
      400:
        description: Escenario inválido
      500:
        description: Error interno del servidor
    """
    try:
        datos_request = request.get_json(silent=True)
        if not isinstance(datos_request, dict) or not datos_request.get('w_values'):
            return _error_parametro('Debe proporcionar un escenario con w_values')

        controlador = PipelineController.get_instance()
        escenario = controlador.scenario_from_dict(datos_request)
        barrido = controlador.sweep(escenario, escenario.w_values)
        resultados = next(iter(barrido.values()))

        return jsonify({
            'success': True,
            'message': f'{len(resultados)} valores de w resueltos',
            'data': [r.to_dict() for r in resultados]
        }), 200

    except GenflowError as error:
        return jsonify(error.to_dict()), 400

    except Exception as error:
        return jsonify({
            'success': False,
            'message': f'Error en el barrido: {str(error)}',
            'error': 'ERROR_INTERNO'
        }), 500


# =============================================================================
# COMANDOS CLI
# =============================================================================
def _formatear(valor):
    return 'nan' if valor is None or (isinstance(valor, float) and math.isnan(valor)) else f"{valor:.6g}"


def _preparar(escenario_path, curves, out):
    settings = Settings.get_instance()
    salida = out or settings.OUTPUT_DIR
    directorio_curvas = curves or str(Path(salida) / DIR_CURVAS)
    file_helper = FileHelper.get_instance()
    controlador = PipelineController.get_instance()
    datos = file_helper.read_json(escenario_path)
    escenario = controlador.scenario_from_dict(datos, base=escenario_path, curves_dir=directorio_curvas)
    return controlador, escenario, salida, file_helper.config_hash(datos)


@optimization_bp.cli.command('optimize')
@click.argument('escenario_path', metavar='ESCENARIO', type=click.Path(dir_okay=False))
@click.option('--curves', default=None, help='Directorio de curvas (por defecto <out>/curves).')
@click.option('--out', default=None, help='Directorio de salida.')
@click.option('--w', 'w', type=float, default=None, help='Sustituye el w del escenario.')
@cli_errors
def comando_optimize(escenario_path, curves, out, w):
    """Resuelve un escenario y escribe results/<escenario>.csv."""
    controlador, escenario, salida, hash_escenario = _preparar(escenario_path, curves, out)
    if w is not None:
        escenario = escenario.with_w(w)

    resultado = controlador.optimize(escenario, output_dir=salida, config_hash=hash_escenario)

    click.echo("=" * 80)
    click.echo(f"ESCENARIO {escenario.name} (w = {escenario.w:g})")
    click.echo("=" * 80)
    for clave, valor in resultado.to_row().items():
        click.echo(f"   {clave:<12} {valor if isinstance(valor, bool) else _formatear(valor)}")
    click.echo(f"   {'f_prime_sd':<12} {_formatear(resultado.f_prime_sd)}")

    if not resultado.feasible:
        click.echo("Escenario infactible", err=True)
        click.get_current_context().exit(SALIDA_INFACTIBLE)


@optimization_bp.cli.command('sweep')
@click.argument('escenario_path', metavar='ESCENARIO', type=click.Path(dir_okay=False))
@click.option('--curves', default=None, help='Directorio de curvas (por defecto <out>/curves).')
@click.option('--out', default=None, help='Directorio de salida.')
@click.option('--w', 'w_values', type=float, multiple=True, help='Valor de w (repetible).')
@cli_errors
def comando_sweep(escenario_path, curves, out, w_values):
    """Barrido en w; escribe results/<escenario>.csv y results/fig4.csv."""
    controlador, escenario, salida, hash_escenario = _preparar(escenario_path, curves, out)
    valores = tuple(w_values) or escenario.w_values

    barrido = controlador.sweep(escenario, valores, output_dir=salida, config_hash=hash_escenario)

    click.echo("=" * 80)
    click.echo(f"BARRIDO {escenario.name}: {len(valores)} valores de w")
    click.echo("=" * 80)
    click.echo(f"   {'curve':<24} {'w':>8} {'L_p_star':>10} {'G_flow':>8} {'objective':>10}")
    infactibles = 0
    for nombre, resultados in barrido.items():
        for r in resultados:
            infactibles += not r.feasible
            click.echo(f"   {nombre:<24} {r.w:>8g} {_formatear(r.lp_star):>10} "
                       f"{_formatear(r.g_flow):>8} {_formatear(r.objective):>10}")

    if infactibles:
        click.echo(f"{infactibles} puntos infactibles", err=True)
        click.get_current_context().exit(SALIDA_INFACTIBLE)
