"""
==============================================================================
MODULO DE RUTAS - FLUJO MÁXIMO Y VALIDACIÓN DE FLUJOS
==============================================================================

Descripcion:
    Blueprint de Flask con los endpoints de análisis de flujo sobre
    topologías con nodos generativos, y el comando CLI equivalente.

Endpoints:
    POST   /api/flow/maxflow        - Flujo máximo, corte mínimo y divergencias
    POST   /api/flow/validate       - Validar una asignación de flujo

Comandos:
    genflow maxflow TOPOLOGIA [--flows FLUJOS] [--json]

Autor: OctavoSMG
Version: 1.0.0
==============================================================================
"""

import json

import click
from flask import Blueprint, request, jsonify

from controllers.pipeline_controller import PipelineController
from helpers.file_helper import FileHelper
from middlewares.error_handler import SALIDA_INFACTIBLE, cli_errors
from models.errors import GenflowError
from models.topology import FlowAssignment, NetworkTopology


flow_bp = Blueprint('flow', __name__, url_prefix='/api/flow', cli_group=None)


@flow_bp.route('/maxflow', methods=['POST'])
def calcular_flujo_maximo():
    """
    ---
    tags:
      - Flujo
    summary: Flujo máximo de una topología
    description: Calcula el flujo máximo fuente-sumidero, un corte mínimo y la divergencia de cada nodo
    parameters:
      - name: body
        in: body
        required: true
        description: Topología de red
        schema:
          type: object
          required:
            - nodes
            - edges
          properties:
            nodes:
              type: array
              example: [{"id": "s", "role": "source"}, {"id": "d", "role": "sink"}]
            edges:
              type: array
              example: [{"from": "s", "to": "d", "capacity": 4.0}]
    responses:
      200:
        description: Reporte de flujo máximo
        schema:
          type: object
          properties:
            success:
              type: boolean
            data:
              type: object
      400:
        description: Topología inválida
      500:
        description: Error interno del servidor
    """
    try:
        datos_request = request.get_json(silent=True)
        if datos_request is None:
            return jsonify({
                'success': False,
                'message': 'Debe enviar una topología en formato JSON',
                'error': 'PARAMETRO_FALTANTE'
            }), 400

        topologia = NetworkTopology.from_dict(datos_request)
        reporte = PipelineController.get_instance().maxflow_report(topologia)

        return jsonify({
            'success': True,
            'message': 'Flujo máximo calculado',
            'data': reporte
        }), 200

    except GenflowError as error:
        return jsonify(error.to_dict()), 400

    except Exception as error:
        return jsonify({
            'success': False,
            'message': f'Error al calcular el flujo máximo: {str(error)}',
            'error': 'ERROR_INTERNO'
        }), 500


@flow_bp.route('/validate', methods=['POST'])
def validar_flujo():
    """
    ---
    tags:
      - Flujo
    summary: Validar una asignación de flujo
    description: Comprueba capacidades, conservación en relays y divergencia y f_min en nodos generativos
    parameters:
      - name: body
        in: body
        required: true
        schema:
          type: object
          required:
            - topology
            - flows
          properties:
            topology:
              type: object
            flows:
              type: array
              example: [{"from": "s", "to": "d", "flow": 2.0}]
    responses:
      200:
        description: Reporte de validación (las violaciones son datos)
      400:
        description: Topología o flujos inválidos
      500:
        description: Error interno del servidor
    """
    try:
        datos_request = request.get_json(silent=True) or {}
        if 'topology' not in datos_request or 'flows' not in datos_request:
            return jsonify({
                'success': False,
                'message': 'Debe proporcionar topology y flows',
                'error': 'PARAMETRO_FALTANTE'
            }), 400

        topologia = NetworkTopology.from_dict(datos_request['topology'])
        try:
            flujos = FlowAssignment.from_list(datos_request['flows'])
        except (KeyError, TypeError, ValueError) as error:
            return jsonify({
                'success': False,
                'message': f'Flujos inválidos: {error}',
                'error': 'ERROR_VALIDACION'
            }), 400

        reporte = PipelineController.get_instance().flow_controller.validate_flow(topologia, flujos)
        return jsonify({
            'success': True,
            'message': 'Flujo válido' if reporte.ok else f'{len(reporte.violations)} violaciones',
            'data': reporte.to_dict()
        }), 200

    except GenflowError as error:
        return jsonify(error.to_dict()), 400

    except Exception as error:
        return jsonify({
            'success': False,
            'message': f'Error al validar el flujo: {str(error)}',
            'error': 'ERROR_INTERNO'
        }), 500


# =============================================================================
# COMANDOS CLI
# =============================================================================
@flow_bp.cli.command('maxflow')
@click.argument('topologia', type=click.Path(dir_okay=False))
@click.option('--flows', 'ruta_flujos', type=click.Path(dir_okay=False), default=None,
              help='Asignación de flujo a validar (lista JSON from/to/flow).')
@click.option('--json', 'como_json', is_flag=True, help='Imprime el reporte como JSON.')
@cli_errors
def comando_maxflow(topologia, ruta_flujos, como_json):
    """Flujo máximo, corte mínimo y divergencias de una topología."""
    file_helper = FileHelper.get_instance()
    controlador = PipelineController.get_instance()

    red = controlador.load_topology(topologia)
    flujos = None
    if ruta_flujos:
        datos = file_helper.read_json(ruta_flujos)
        flujos = datos.get('flows', []) if isinstance(datos, dict) else datos
    reporte = controlador.maxflow_report(red, flujos)

    if como_json:
        click.echo(json.dumps(reporte, sort_keys=True, indent=2))
    else:
        click.echo("=" * 80)
        click.echo(f"FLUJO MÁXIMO {red.source} -> {red.sink}: {reporte['value']:.6g}")
        click.echo("=" * 80)
        aristas = ', '.join(f"{a['from']}->{a['to']}" for a in reporte['cut']['cut_edges'])
        click.echo(f"Corte mínimo: {{{aristas}}} (valor {reporte['cut']['value']:.6g})")
        click.echo(f"Lado fuente:  {', '.join(reporte['cut']['source_side'])}")
        click.echo("Divergencias:")
        for nodo, divergencia in reporte['divergences'].items():
            click.echo(f"   {nodo:<12} y = {divergencia:+.6g}")
        if 'validation' in reporte:
            for violacion in reporte['validation']['violations']:
                click.echo(f"   VIOLACIÓN {violacion['kind']} en {violacion['subject']}: {violacion['detail']}")

    if 'validation' in reporte and not reporte['validation']['ok']:
        click.get_current_context().exit(SALIDA_INFACTIBLE)
