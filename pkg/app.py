"""
==============================================================================
APLICACIÓN PRINCIPAL - CAPA DE RED GENERATIVA (GENFLOW)
==============================================================================

Descripción:
    Sistema Flask para analizar redes con nodos generativos: flujo máximo
    con nodos no conservativos, curvas tasa-calidad medidas sobre un
    códec emulado, y optimización del tamaño de prompt frente a la
    replicación pura.

Características:
    - API RESTful con Flask
    - Soporte CORS para peticiones cross-origin
    - Documentación automática con Swagger
    - Comandos CLI del pipeline (genflow gen-dataset, measure, fit, ...)
    - Manejo centralizado de errores
    - Logging configurado desde el entorno

Autor: OctavoSMG
Versión: 1.0.0
Fecha: 2025
==============================================================================
"""

import logging

from flask import Flask
from flask_cors import CORS
from flasgger import Swagger

from config.settings import Settings
from middlewares.error_handler import register_error_handlers
from routes.flow_routes import flow_bp
from routes.optimization_routes import optimization_bp
from routes.pipeline_routes import pipeline_bp


FORMATO_LOG = '%(asctime)s %(levelname)s [%(name)s] %(message)s'


def configurar_logging(nivel):
    """Configura el logger raíz una sola vez; Flask comparte la configuración."""
    nivel_numerico = logging.getLevelName(nivel)
    if not isinstance(nivel_numerico, int):
        nivel_numerico = logging.INFO
    logging.basicConfig(level=nivel_numerico, format=FORMATO_LOG)
    logging.getLogger().setLevel(nivel_numerico)


def crear_aplicacion():
    """
    Factory Pattern para crear y configurar la aplicación Flask.

    Returns:
        Flask: Instancia configurada de la aplicación Flask

    Example:
        >>> app = crear_aplicacion()
        >>> app.run(debug=True)
    """

    # =========================================================================
    # 1. INICIALIZACIÓN DE LA APLICACIÓN
    # =========================================================================
    aplicacion = Flask(__name__)


    # =========================================================================
    # 2. CONFIGURACIÓN Y LOGGING
    # =========================================================================
    configuracion = Settings.get_instance()
    aplicacion.config['GENFLOW_OUTPUT_DIR'] = configuracion.OUTPUT_DIR
    aplicacion.config['GENFLOW_CONFIG'] = configuracion.CONFIG_PATH
    aplicacion.config['GENFLOW_JOBS'] = configuracion.JOBS
    aplicacion.config['JSON_SORT_KEYS'] = False
    configurar_logging(configuracion.LOG_LEVEL)


    # =========================================================================
    # 3. CONFIGURACIÓN DE CORS (Cross-Origin Resource Sharing)
    # =========================================================================
    CORS(aplicacion)


    # =========================================================================
    # 4. CONFIGURACIÓN DE SWAGGER (Documentación Automática)
    # =========================================================================
    Swagger(aplicacion, template={
        "info": {
            "title": "API de Capa de Red Generativa",
            "description": (
                "Flujo máximo con nodos generativos, validación de flujos y "
                "optimización del tamaño de prompt con curvas tasa-calidad. "
                "La ganancia se mide frente al flujo máximo de replicación."
            ),
            "version": "1.0.0"
        },
        "schemes": ["http", "https"],
        "tags": [
            {
                "name": "Flujo",
                "description": "Flujo máximo, corte mínimo y validación de asignaciones"
            },
            {
                "name": "Optimización",
                "description": "Tamaño de prompt óptimo y barridos del peso de calidad"
            },
            {
                "name": "Pipeline",
                "description": "Artefactos del pipeline de medición y ajuste"
            }
        ]
    })


    # =========================================================================
    # 5. REGISTRO DE MIDDLEWARES
    # =========================================================================
    register_error_handlers(aplicacion)


    # =========================================================================
    # 6. REGISTRO DE BLUEPRINTS (RUTAS Y COMANDOS)
    # =========================================================================
    # /api/flow/* + genflow maxflow
    aplicacion.register_blueprint(flow_bp)

    # /api/optimization/* + genflow optimize, sweep
    aplicacion.register_blueprint(optimization_bp)

    # /api/pipeline/* + genflow gen-dataset, measure, fit, pipeline
    aplicacion.register_blueprint(pipeline_bp)


    # =========================================================================
    # 7. RUTA RAÍZ (Información del Sistema)
    # =========================================================================
    @aplicacion.route('/')
    def ruta_principal():
        """
        Endpoint de bienvenida con información del sistema.

        Swagger:
            ---
            tags:
              - Sistema
            responses:
              200:
                description: Información del sistema
        """
        return {
            'mensaje': 'API de Capa de Red Generativa',
            'version': '1.0.0',
            'documentacion': '/apidocs',
            'estado': 'activo',
            'endpoints_disponibles': {
                'flujo': '/api/flow',
                'optimizacion': '/api/optimization',
                'pipeline': '/api/pipeline',
                'swagger': '/apidocs'
            }
        }

    return aplicacion


# =============================================================================
# PUNTO DE ENTRADA PRINCIPAL
# =============================================================================
if __name__ == '__main__':
    print("=" * 80)
    print(" " * 22 + "CAPA DE RED GENERATIVA - GENFLOW")
    print("=" * 80)
    print()
    print("INFORMACIÓN DEL SERVIDOR:")
    print("   Host: http://localhost:5000")
    print("   Modo: Desarrollo (Debug activado)")
    print()
    print("DOCUMENTACIÓN Y ENDPOINTS:")
    print("   Swagger UI:       http://localhost:5000/apidocs")
    print("   API Flujo:        http://localhost:5000/api/flow")
    print("   API Optimización: http://localhost:5000/api/optimization")
    print()
    print("COMANDOS CLI:")
    print("   genflow gen-dataset | measure | fit | optimize | sweep | maxflow | pipeline")
    print()
    print("=" * 80)
    print("Servidor iniciando...")
    print("=" * 80)
    print()

    aplicacion = crear_aplicacion()
    aplicacion.run(
        host='0.0.0.0',
        port=5000,
        debug=True,
        threaded=True
    )
