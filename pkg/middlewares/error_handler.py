"""
Middleware: Manejo de Errores (HTTP y CLI)
"""
import functools
import logging

import click
from flask import jsonify
from werkzeug.exceptions import HTTPException

from models.errors import GenflowError


logger = logging.getLogger(__name__)

SALIDA_OK = 0
SALIDA_INFACTIBLE = 1
SALIDA_ERROR = 2


def register_error_handlers(app):
    """Registrar manejadores de errores"""

    @app.errorhandler(GenflowError)
    def genflow_error(error):
        return jsonify(error.to_dict()), 400

    @app.errorhandler(404)
    def not_found(error):
        return jsonify({
            'success': False,
            'message': 'Recurso no encontrado',
            'error': str(error)
        }), 404

    @app.errorhandler(500)
    def internal_error(error):
        return jsonify({
            'success': False,
            'message': 'Error interno del servidor',
            'error': str(error)
        }), 500

    @app.errorhandler(Exception)
    def handle_exception(error):
        if isinstance(error, HTTPException):
            return jsonify({
                'success': False,
                'message': error.description,
                'error': error.name
            }), error.code
        logger.exception("Error inesperado")
        return jsonify({
            'success': False,
            'message': 'Error inesperado',
            'error': str(error)
        }), 500


def cli_errors(funcion):
    """
    Decorador de comandos CLI: GenflowError termina con código 2 y un
    mensaje de una línea en stderr.
    """
    @functools.wraps(funcion)
    def envoltura(*args, **kwargs):
        try:
            return funcion(*args, **kwargs)
        except GenflowError as error:
            click.echo(f"error [{error.code}]: {error}", err=True)
            click.get_current_context().exit(SALIDA_ERROR)
    return envoltura
