"""
Fixtures compartidos de las pruebas.
"""
import json
from pathlib import Path

import numpy as np
import pytest

from app import crear_aplicacion
from models.curve import EXPONENTIAL_DECAY, RateQualityCurve
from models.image import Image
from models.quality import MetricKind
from models.scenario import GenScenario
from models.topology import NetworkTopology


RAIZ = Path(__file__).resolve().parent.parent
ESCENARIOS = RAIZ / 'scenarios'


@pytest.fixture
def app():
    aplicacion = crear_aplicacion()
    aplicacion.config['TESTING'] = True
    return aplicacion


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def fig1_topology():
    datos = json.loads((ESCENARIOS / 'fig1_topology.json').read_text(encoding='utf-8'))
    return NetworkTopology.from_dict(datos)


@pytest.fixture
def fig4_topology_dict():
    datos = json.loads((ESCENARIOS / 'paper_fig4.json').read_text(encoding='utf-8'))
    return datos['topology']


@pytest.fixture
def fig4_topology(fig4_topology_dict):
    return NetworkTopology.from_dict(fig4_topology_dict)


def curva_exponencial(a=1.0, b=0.5, c=0.0, dominio=(0.5, 24.0), metric=MetricKind.PERCEPTION,
                      strategy='PE'):
    """delta(x) = a exp(-b (x - x_lo)) + c, expresada con los parámetros de la familia."""
    a_efectivo = a * np.exp(b * dominio[0])
    return RateQualityCurve(
        family=EXPONENTIAL_DECAY,
        params=(a_efectivo, b, c),
        domain=dominio,
        metric=metric,
        r2=1.0,
        strategy=strategy
    )


@pytest.fixture
def pe_curve():
    return curva_exponencial()


@pytest.fixture
def fig4_scenario(fig4_topology, pe_curve):
    return GenScenario(
        topology=fig4_topology, g='g', L=24.0, w=0.0,
        metric=MetricKind.PERCEPTION, curve=pe_curve, name='fig4-prueba'
    )


@pytest.fixture
def gray_image():
    return Image(np.full((64, 64, 1), 128, dtype=np.uint8))


@pytest.fixture
def small_dataset():
    from helpers.image_helper import ImageHelper
    return ImageHelper.get_instance().generate_dataset(8, 32, 32, master_seed=7, channels=3)
