import itertools

import numpy as np
import pytest

from controllers.flow_controller import FlowController
from models.errors import TopologyError
from models.topology import FlowAssignment, NetworkTopology


@pytest.fixture
def flow():
    return FlowController.get_instance()


def _topologia(nodos, aristas):
    return NetworkTopology.from_dict({
        'nodes': [{'id': i, 'role': r} for i, r in nodos],
        'edges': [{'from': u, 'to': v, 'capacity': c} for u, v, c in aristas]
    })


def _corte_por_enumeracion(topologia):
    internos = [n for n in topologia.node_ids() if n not in (topologia.source, topologia.sink)]
    mejor = np.inf
    for k in range(len(internos) + 1):
        for subconjunto in itertools.combinations(internos, k):
            lado = {topologia.source, *subconjunto}
            valor = sum(a.capacity for a in topologia.edges if a.source in lado and a.target not in lado)
            mejor = min(mejor, valor)
    return mejor


def test_fig1_value_equals_hand_cut(flow, fig1_topology):
    valor, asignacion = flow.max_flow(fig1_topology, 's', 'd')
    assert valor == pytest.approx(7.0)
    corte = flow.min_cut(fig1_topology, 's', 'd')
    assert corte.value == pytest.approx(7.0)
    assert set(corte.cut_edges) == {('r', 'd'), ('s', 'g')}
    assert corte.source_side == frozenset({'s', 'r'})
    assert asignacion.get('r', 'd') == pytest.approx(3.0)
    assert asignacion.get('s', 'g') == pytest.approx(4.0)
    assert corte.value == pytest.approx(_corte_por_enumeracion(fig1_topology))
    assert flow.validate_flow(fig1_topology, asignacion).ok


def test_empty_edge_list_gives_zero(flow):
    topologia = _topologia([('s', 'source'), ('d', 'sink')], [])
    valor, asignacion = flow.max_flow(topologia, 's', 'd')
    assert valor == 0
    assert asignacion.flows == {}


def test_zero_capacity_path(flow):
    topologia = _topologia([('s', 'source'), ('r', 'relay'), ('d', 'sink')],
                           [('s', 'r', 0.0), ('r', 'd', 5.0)])
    valor, _ = flow.max_flow(topologia, 's', 'd')
    assert valor == 0


def test_max_flow_matches_cut_enumeration_on_random_graphs(flow):
    generador = np.random.default_rng(12345)
    for _ in range(100):
        n = int(generador.integers(2, 9))
        ids = [f"n{i}" for i in range(n)]
        nodos = [(ids[0], 'source'), (ids[-1], 'sink')] + [(i, 'relay') for i in ids[1:-1]]
        aristas = [
            (u, v, float(generador.integers(0, 10)))
            for u, v in itertools.permutations(ids, 2)
            if generador.random() < 0.5
        ]
        topologia = _topologia(nodos, aristas)
        valor, asignacion = flow.max_flow(topologia, ids[0], ids[-1])
        assert valor == pytest.approx(_corte_por_enumeracion(topologia), abs=1e-9)
        assert flow.min_cut(topologia, ids[0], ids[-1]).value == pytest.approx(valor, abs=1e-9)
        assert flow.validate_flow(topologia, asignacion).ok


def test_divergences_sum_to_zero(flow, fig1_topology):
    _, asignacion = flow.max_flow(fig1_topology, 's', 'd')
    divergencias = [flow.node_divergence(fig1_topology, asignacion, n) for n in fig1_topology.node_ids()]
    assert sum(divergencias) == pytest.approx(0.0, abs=1e-9)
    assert flow.node_divergence(fig1_topology, asignacion, 'r') == pytest.approx(0.0, abs=1e-9)


def test_duplicate_edge_names_the_pair():
    with pytest.raises(TopologyError, match="s->d"):
        _topologia([('s', 'source'), ('d', 'sink')], [('s', 'd', 1.0), ('s', 'd', 2.0)])


def test_parse_errors_name_the_field():
    with pytest.raises(TopologyError, match=r"edges\[0\]\.capacity"):
        NetworkTopology.from_dict({
            'nodes': [{'id': 's', 'role': 'source'}, {'id': 'd', 'role': 'sink'}],
            'edges': [{'from': 's', 'to': 'd', 'capacity': 'mucho'}]
        })
    with pytest.raises(TopologyError, match="desconocido"):
        _topologia([('s', 'source'), ('d', 'sink')], [('s', 'x', 1.0)])
    with pytest.raises(TopologyError, match="lazo"):
        _topologia([('s', 'source'), ('r', 'relay'), ('d', 'sink')], [('r', 'r', 1.0)])


def test_terminal_roles_are_checked(flow, fig1_topology):
    with pytest.raises(TopologyError):
        flow.max_flow(fig1_topology, 'r', 'd')
    with pytest.raises(TopologyError):
        flow.max_flow(fig1_topology, 's', 'nadie')


def test_source_equal_to_sink_is_rejected(flow, fig1_topology):
    with pytest.raises(TopologyError, match="coinciden"):
        flow.max_flow(fig1_topology, 's', 's')
    with pytest.raises(TopologyError, match="coinciden"):
        flow.min_cut(fig1_topology, 'd', 'd')


def test_single_edge_carries_its_capacity(flow):
    for capacidad in (0.0, 1.0, 2.5, 1e6):
        topologia = _topologia([('s', 'source'), ('d', 'sink')], [('s', 'd', capacidad)])
        valor, asignacion = flow.max_flow(topologia, 's', 'd')
        assert valor == pytest.approx(capacidad)
        assert asignacion.get('s', 'd') == pytest.approx(capacidad)


def test_disconnected_terminals_give_zero(flow):
    topologia = _topologia(
        [('s', 'source'), ('a', 'relay'), ('b', 'relay'), ('d', 'sink')],
        [('s', 'a', 5.0), ('b', 'd', 5.0), ('d', 'b', 2.0)]
    )
    valor, asignacion = flow.max_flow(topologia, 's', 'd')
    assert valor == 0
    assert all(f == 0 for f in asignacion.flows.values())
    assert flow.min_cut(topologia, 's', 'd').value == 0


def test_max_flow_is_monotone_in_every_capacity(flow):
    generador = np.random.default_rng(99)
    for _ in range(30):
        n = int(generador.integers(3, 8))
        ids = [f"n{i}" for i in range(n)]
        nodos = [(ids[0], 'source'), (ids[-1], 'sink')] + [(i, 'relay') for i in ids[1:-1]]
        aristas = [
            (u, v, float(generador.uniform(0.0, 10.0)))
            for u, v in itertools.permutations(ids, 2)
            if generador.random() < 0.5
        ]
        topologia = _topologia(nodos, aristas)
        base, _ = flow.max_flow(topologia, ids[0], ids[-1])
        for u, v, capacidad in aristas:
            for extra in (0.5, 3.0):
                mayor = topologia.with_capacity(u, v, capacidad + extra)
                assert mayor.capacity(u, v) == capacidad + extra
                valor, _ = flow.max_flow(mayor, ids[0], ids[-1])
                assert valor >= base - 1e-9
                assert valor <= base + extra + 1e-9


def test_validate_flow_reports_violations(flow, fig1_topology):
    asignacion = FlowAssignment(flows={
        ('s', 'r'): 6.0,       # capacidad 5
        ('r', 'd'): 1.0,       # relay no conserva
        ('s', 'g'): 0.01,      # por debajo de f_min 0.05
        ('g', 'd'): 0.0,
    })
    reporte = flow.validate_flow(fig1_topology, asignacion)
    tipos = {v.kind for v in reporte.violations}
    assert {'capacity', 'conservation', 'below f_min'} <= tipos
    assert reporte.node_status['r'] == 'conservation'
    assert not reporte.ok


def test_generative_node_may_amplify_but_not_shrink(flow, fig1_topology):
    amplifica = FlowAssignment(flows={('s', 'g'): 1.0, ('g', 'd'): 4.0})
    assert flow.validate_flow(fig1_topology, amplifica).ok
    encoge = FlowAssignment(flows={('s', 'g'): 2.0, ('g', 'd'): 1.0})
    tipos = {v.kind for v in flow.validate_flow(fig1_topology, encoge).violations}
    assert 'negative divergence' in tipos


def test_generation_cap_is_enforced(flow):
    topologia = NetworkTopology.from_dict({
        'nodes': [
            {'id': 's', 'role': 'source'},
            {'id': 'g', 'role': 'generative', 'generation_cap': 2.0},
            {'id': 'd', 'role': 'sink'}
        ],
        'edges': [{'from': 's', 'to': 'g', 'capacity': 1.0}, {'from': 'g', 'to': 'd', 'capacity': 5.0}]
    })
    asignacion = FlowAssignment(flows={('s', 'g'): 1.0, ('g', 'd'): 3.0})
    tipos = {v.kind for v in flow.validate_flow(topologia, asignacion).violations}
    assert tipos == {'above generation_cap'}


def test_topology_dict_round_trip(fig1_topology):
    assert NetworkTopology.from_dict(fig1_topology.to_dict()) == fig1_topology
