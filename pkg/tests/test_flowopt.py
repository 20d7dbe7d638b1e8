import math

import numpy as np
import pytest

from controllers.curve_controller import CurveController
from controllers.flow_controller import FlowController
from controllers.measurement_controller import MeasurementController
from controllers.optimization_controller import OptimizationController
from models.curve import POWER_LAW, CurveFamily, RateQualityCurve
from models.errors import DomainError, ScenarioError
from models.quality import MetricKind
from models.scenario import GenScenario, OptimizationResult
from models.topology import NetworkTopology

from tests.conftest import curva_exponencial


@pytest.fixture
def optimizador():
    return OptimizationController.get_instance()


def _escenario(c_sg, c_gd, curva, L=24.0, w=0.0, f_min=0.05, c_sr=4.0, **extra):
    topologia = NetworkTopology.from_dict({
        'nodes': [
            {'id': 's', 'role': 'source'},
            {'id': 'r', 'role': 'relay'},
            {'id': 'g', 'role': 'generative', 'f_min': f_min},
            {'id': 'd', 'role': 'sink'}
        ],
        'edges': [
            {'from': 's', 'to': 'r', 'capacity': c_sr},
            {'from': 'r', 'to': 'd', 'capacity': c_sr},
            {'from': 's', 'to': 'g', 'capacity': c_sg},
            {'from': 'g', 'to': 'd', 'capacity': c_gd}
        ]
    })
    return GenScenario(topology=topologia, g='g', L=L, w=w, metric=MetricKind.PERCEPTION,
                       curve=curva, **extra)


def test_optimal_lambda_closed_form(optimizador):
    assert optimizador.optimal_lambda(3.184, 48.0, 1.0, 24.0) == pytest.approx(2.0)
    assert optimizador.optimal_lambda(3.184, 24.0, 4.0, 24.0) == pytest.approx(0.796)
    for argumentos in ((0.0, 1.0, 1.0, 1.0), (1.0, 1.0, 0.0, 1.0), (1.0, -1.0, 1.0, 1.0)):
        with pytest.raises(DomainError):
            optimizador.optimal_lambda(*argumentos)


def test_optimal_lambda_is_tight(optimizador):
    generador = np.random.default_rng(7)
    for _ in range(1000):
        c_sg, c_gd, lp, L = generador.uniform(0.01, 50.0, 4)
        lam = optimizador.optimal_lambda(c_sg, c_gd, lp, L)
        assert lam * lp <= c_sg * (1 + 1e-12) and lam * L <= c_gd * (1 + 1e-12)
        mayor = lam * (1 + 1e-6)
        assert mayor * lp > c_sg or mayor * L > c_gd


def test_flow_gain(optimizador):
    assert optimizador.flow_gain(0.0, 7.184) == 1.0
    assert optimizador.flow_gain(7.184, 7.184) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        optimizador.flow_gain(1.0, 0.0)


def test_objective_outside_domain(optimizador, pe_curve):
    assert optimizador.objective(0.5, 1.0, 0.0, pe_curve, 24.0) == pytest.approx(23.5)
    with pytest.raises(DomainError):
        optimizador.objective(0.1, 1.0, 0.5, pe_curve, 24.0)


def test_reference_flow_of_fig4_topology(fig4_topology):
    assert FlowController.get_instance().baseline_max_flow(fig4_topology, 's', 'd') == pytest.approx(7.184)


def test_zero_weight_picks_smallest_prompt(optimizador, fig4_scenario):
    resultado = optimizador.optimize_prompt_size(fig4_scenario)
    assert resultado.feasible
    assert fig4_scenario.lp_lower == 1.0
    assert resultado.lp_star > 1.0
    assert resultado.lp_star == pytest.approx(1.0 + 1e-9, abs=1e-12)
    assert resultado.lambda_star == pytest.approx(1.0)
    assert resultado.y_g == pytest.approx(23.0)
    assert resultado.g_flow == pytest.approx(1.0 + 23.0 / 7.184)
    assert resultado.g_flow > 2.0


def test_explicit_zero_lower_bound_falls_back_to_curve_domain(optimizador, fig4_scenario):
    from dataclasses import replace
    resultado = optimizador.optimize_prompt_size(replace(fig4_scenario, lp_lower=0.0))
    assert resultado.lp_star == pytest.approx(fig4_scenario.curve.x_lo)
    assert resultado.y_g == pytest.approx(23.5)


def test_lower_bound_defaults_to_one_when_loading(fig4_topology, pe_curve):
    escenario = GenScenario.from_dict({'g': 'g', 'L': 24}, fig4_topology, pe_curve)
    assert escenario.lp_lower == 1.0
    nulo = GenScenario.from_dict({'g': 'g', 'L': 24, 'lp_lower': None}, fig4_topology, pe_curve)
    assert nulo.lp_lower == 1.0
    explicito = GenScenario.from_dict({'g': 'g', 'L': 24, 'lp_lower': 0}, fig4_topology, pe_curve)
    assert explicito.lp_lower == 0.0


def test_high_weight_saturates_source_link(optimizador, fig4_topology):
    curva = curva_exponencial(a=1.0, b=0.5, dominio=(0.5, 24.5), strategy='PS-low')
    escenario = GenScenario(topology=fig4_topology, g='g', L=24.0, w=10.0,
                            metric=MetricKind.PERCEPTION, curve=curva)
    resultado = optimizador.optimize_prompt_size(escenario)
    assert resultado.lp_star > 3.184
    assert resultado.f_sg == pytest.approx(escenario.c_sg, rel=1e-9)


def test_sweep_is_monotone_in_weight(optimizador, fig4_scenario):
    pesos = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0]
    resultados = optimizador.sweep_w(fig4_scenario, pesos)
    assert [r.w for r in resultados] == pesos
    tamanos = [r.lp_star for r in resultados]
    ganancias = [r.g_flow for r in resultados]
    assert all(b >= a - 1e-6 for a, b in zip(tamanos, tamanos[1:]))
    assert all(b <= a + 1e-6 for a, b in zip(ganancias, ganancias[1:]))
    with pytest.raises(DomainError):
        optimizador.sweep_w(fig4_scenario, [])


def test_replication_gives_unit_gain(optimizador, fig4_topology):
    escenario = GenScenario(topology=fig4_topology, g='g', L=24.0, w=0.0,
                            metric=MetricKind.DISTORTION, replicate=True)
    for resultado in optimizador.sweep_w(escenario, [0.0, 1.0, 5.0]):
        assert resultado.g_flow == 1.0
        assert resultado.y_g == 0.0
        assert resultado.lp_star == 24.0
        assert resultado.feasible


def test_infeasible_when_floor_exceeds_source_link(optimizador, fig4_scenario):
    from dataclasses import replace
    resultado = optimizador.optimize_prompt_size(replace(fig4_scenario, f_min_override=5.0))
    assert not resultado.feasible
    assert math.isnan(resultado.g_flow)
    assert resultado.to_dict()['G_flow'] is None


def test_admissible_interval_bounds(optimizador, pe_curve):
    escenario = _escenario(3.184, 24.0, pe_curve, lp_lower=2.0, lp_upper=10.0)
    lo, hi = optimizador.admissible_interval(escenario)
    assert lo == pytest.approx(2.0) and lo > 2.0
    assert hi == 10.0
    alto_piso = _escenario(3.184, 2.4, pe_curve, f_min=0.2)
    assert optimizador.admissible_interval(alto_piso)[0] == pytest.approx(2.0)
    vacio = _escenario(3.184, 24.0, pe_curve, lp_lower=30.0)
    assert optimizador.admissible_interval(vacio) is None
    assert not optimizador.optimize_prompt_size(vacio).feasible


def _curva_aleatoria(generador, tipo, L, medida):
    x_lo = float(generador.uniform(0.5, 1.0))
    a = float(generador.uniform(0.2, 1.0))
    if tipo == 'exponential':
        return curva_exponencial(a=a, b=float(generador.uniform(0.05, 1.0)), dominio=(x_lo, L))
    if tipo == 'power':
        return RateQualityCurve(family=POWER_LAW, params=(a, float(generador.uniform(0.2, 1.0)), 0.0),
                                domain=(x_lo, L), metric=MetricKind.PERCEPTION, r2=1.0)
    if tipo == 'polynomial':
        # a (1 - x / L)^2 en coeficientes ascendentes
        return RateQualityCurve(family=CurveFamily('polynomial', 2), params=(a, -2.0 * a / L, a / L ** 2),
                                domain=(x_lo, L), metric=MetricKind.PERCEPTION, r2=1.0)
    return medida


def test_optimizer_matches_brute_force_on_random_scenarios(optimizador, small_dataset):
    puntos = MeasurementController.get_instance().pe_samples(
        small_dataset, 'genai', MetricKind.DISTORTION, seed=3
    )
    medida = CurveController.get_instance().build_pe_curve(puntos, 24.0, MetricKind.DISTORTION)
    tipos = ('exponential', 'power', 'polynomial', 'fitted')

    generador = np.random.default_rng(2024)
    for indice in range(50):
        L = float(generador.uniform(4.0, 16.0))
        curva = _curva_aleatoria(generador, tipos[indice % len(tipos)], L, medida)
        escenario = _escenario(
            float(generador.uniform(0.5, 4.0)), float(generador.uniform(1.0, 16.0)), curva,
            L=L, w=float(generador.uniform(0.0, 1.0)), f_min=float(generador.uniform(0.0, 0.4))
        )
        optimo = optimizador.optimize_prompt_size(escenario)
        oraculo = optimizador.brute_force_optimize(escenario, 4096)
        assert optimo.feasible and oraculo.feasible
        assert abs(optimo.objective - oraculo.objective) <= 1e-4, (indice, curva.family.label)
        assert optimo.f_sg <= escenario.c_sg * (1 + 1e-9) and optimo.f_gd <= escenario.c_gd * (1 + 1e-9)
        assert optimo.f_sg >= escenario.f_min - 1e-9
        assert oraculo.lp_star > 1.0


def test_brute_force_finds_infeasibility_on_its_own(optimizador, pe_curve):
    assert not optimizador.brute_force_optimize(_escenario(3.184, 24.0, pe_curve, f_min=5.0), 64).feasible
    assert not optimizador.brute_force_optimize(_escenario(3.184, 24.0, pe_curve, lp_lower=30.0), 64).feasible
    # f_min L / c_gd = 12 > lp_upper
    estrecho = _escenario(3.184, 2.0, pe_curve, f_min=1.0, lp_upper=10.0)
    assert not optimizador.brute_force_optimize(estrecho, 64).feasible
    assert not optimizador.optimize_prompt_size(estrecho).feasible


def test_brute_force_grid_size(optimizador, fig4_scenario):
    with pytest.raises(DomainError):
        optimizador.brute_force_optimize(fig4_scenario, 1)


def test_composed_flow_is_valid(optimizador, fig4_scenario):
    resultado = optimizador.optimize_prompt_size(fig4_scenario.with_w(1.0))
    asignacion = optimizador.compose_generative_flow(fig4_scenario, resultado)
    reporte = FlowController.get_instance().validate_flow(fig4_scenario.topology, asignacion)
    assert reporte.ok
    assert asignacion.get('s', 'g') == pytest.approx(resultado.f_sg)
    assert asignacion.get('g', 'd') - asignacion.get('s', 'g') == pytest.approx(
        resultado.lambda_star * (24.0 - resultado.lp_star)
    )
    assert asignacion.get('r', 'd') == pytest.approx(4.0)


def test_scenario_validation(fig4_topology, pe_curve):
    with pytest.raises(ScenarioError):
        GenScenario(topology=fig4_topology, g='r', L=24.0, w=0.0, metric=MetricKind.PERCEPTION, curve=pe_curve)
    with pytest.raises(ScenarioError):
        GenScenario(topology=fig4_topology, g='g', L=0.0, w=0.0, metric=MetricKind.PERCEPTION, curve=pe_curve)
    with pytest.raises(ScenarioError):
        GenScenario(topology=fig4_topology, g='g', L=24.0, w=-1.0, metric=MetricKind.PERCEPTION, curve=pe_curve)
    with pytest.raises(ScenarioError):
        GenScenario(topology=fig4_topology, g='g', L=24.0, w=0.0, metric=MetricKind.PERCEPTION)
    with pytest.raises(ScenarioError, match="falta el campo"):
        GenScenario.from_dict({'g': 'g'}, fig4_topology, pe_curve)


def test_result_row_columns(optimizador, fig4_scenario):
    fila = optimizador.optimize_prompt_size(fig4_scenario).to_row()
    assert tuple(fila) == OptimizationResult.COLUMNAS
