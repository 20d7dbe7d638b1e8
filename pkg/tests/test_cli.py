import json

import pytest

from config.settings import Settings
from helpers.file_helper import FileHelper

from tests.conftest import ESCENARIOS, curva_exponencial


def _escribir(ruta, datos):
    ruta.write_text(json.dumps(datos), encoding='utf-8')
    return str(ruta)


def _escenario_en_linea(fig4_topology_dict, **cambios):
    datos = {
        'name': 'en_linea',
        'topology': fig4_topology_dict,
        'g': 'g',
        'L': 24,
        'w': 0.0,
        'metric': 'perception',
        'curve': curva_exponencial().to_dict()
    }
    datos.update(cambios)
    return datos


# =============================================================================
# API HTTP
# =============================================================================
def test_root_lists_endpoints(client):
    respuesta = client.get('/')
    assert respuesta.status_code == 200
    assert respuesta.get_json()['endpoints_disponibles']['flujo'] == '/api/flow'


def test_http_maxflow(client, fig1_topology):
    respuesta = client.post('/api/flow/maxflow', json=fig1_topology.to_dict())
    assert respuesta.status_code == 200
    cuerpo = respuesta.get_json()
    assert cuerpo['success'] is True
    assert cuerpo['data']['value'] == pytest.approx(7.0)
    assert cuerpo['data']['divergences']['r'] == pytest.approx(0.0, abs=1e-9)


def test_http_maxflow_bad_topology(client):
    respuesta = client.post('/api/flow/maxflow', json={'nodes': [{'id': 's', 'role': 'source'}], 'edges': []})
    assert respuesta.status_code == 400
    assert respuesta.get_json()['error'] == 'ERROR_TOPOLOGIA'
    assert client.post('/api/flow/maxflow', data='no es json').status_code == 400


def test_http_validate_reports_violations(client, fig1_topology):
    respuesta = client.post('/api/flow/validate', json={
        'topology': fig1_topology.to_dict(),
        'flows': [{'from': 's', 'to': 'r', 'flow': 9.0}]
    })
    assert respuesta.status_code == 200
    datos = respuesta.get_json()['data']
    assert datos['ok'] is False
    assert 'capacity' in {v['kind'] for v in datos['violations']}
    assert client.post('/api/flow/validate', json={'flows': []}).status_code == 400


def test_http_optimize_and_sweep(client, fig4_topology_dict):
    respuesta = client.post('/api/optimization/optimize', json=_escenario_en_linea(fig4_topology_dict))
    assert respuesta.status_code == 200
    datos = respuesta.get_json()['data']
    assert datos['feasible'] is True
    assert datos['G_flow'] > 2.0

    respuesta = client.post('/api/optimization/sweep',
                            json=_escenario_en_linea(fig4_topology_dict, w_values=[0, 1, 5]))
    assert respuesta.status_code == 200
    assert [r['w'] for r in respuesta.get_json()['data']] == [0, 1, 5]

    sin_pesos = client.post('/api/optimization/sweep', json=_escenario_en_linea(fig4_topology_dict))
    assert sin_pesos.status_code == 400


def test_http_optimize_bad_scenario(client, fig4_topology_dict):
    respuesta = client.post('/api/optimization/optimize', json=_escenario_en_linea(fig4_topology_dict, g='r'))
    assert respuesta.status_code == 400
    assert respuesta.get_json()['error'] == 'ERROR_ESCENARIO'


def test_http_curves_listing(client, monkeypatch, tmp_path):
    monkeypatch.setattr(Settings.get_instance(), 'OUTPUT_DIR', str(tmp_path))
    assert client.get('/api/pipeline/curves').status_code == 400
    FileHelper.get_instance().write_json(tmp_path / 'curves' / 'genai-PE-perception.json',
                                         curva_exponencial().to_dict())
    respuesta = client.get('/api/pipeline/curves')
    assert respuesta.status_code == 200
    assert [c['name'] for c in respuesta.get_json()['data']] == ['genai-PE-perception']


def test_unknown_route_is_json_404(client):
    respuesta = client.get('/api/nada')
    assert respuesta.status_code == 404
    assert respuesta.get_json()['success'] is False


# =============================================================================
# CLI: maxflow
# =============================================================================
def test_cli_maxflow_text_and_json(runner):
    ruta = str(ESCENARIOS / 'fig1_topology.json')
    resultado = runner.invoke(args=['maxflow', ruta])
    assert resultado.exit_code == 0
    assert 'FLUJO MÁXIMO s -> d: 7' in resultado.output
    assert 's->g' in resultado.output and 'r->d' in resultado.output

    resultado = runner.invoke(args=['maxflow', ruta, '--json'])
    assert resultado.exit_code == 0
    assert json.loads(resultado.stdout)['value'] == pytest.approx(7.0)


def test_cli_maxflow_errors_exit_two(runner, tmp_path):
    duplicada = _escribir(tmp_path / 'dup.json', {
        'nodes': [{'id': 's', 'role': 'source'}, {'id': 'd', 'role': 'sink'}],
        'edges': [{'from': 's', 'to': 'd', 'capacity': 1}, {'from': 's', 'to': 'd', 'capacity': 2}]
    })
    assert runner.invoke(args=['maxflow', duplicada]).exit_code == 2
    assert runner.invoke(args=['maxflow', str(tmp_path / 'no_existe.json')]).exit_code == 2
    roto = tmp_path / 'roto.json'
    roto.write_text('{"nodes": [', encoding='utf-8')
    assert runner.invoke(args=['maxflow', str(roto)]).exit_code == 2


def test_cli_maxflow_without_edges(runner, tmp_path):
    vacia = _escribir(tmp_path / 'vacia.json', {
        'nodes': [{'id': 's', 'role': 'source'}, {'id': 'd', 'role': 'sink'}], 'edges': []
    })
    resultado = runner.invoke(args=['maxflow', vacia, '--json'])
    assert resultado.exit_code == 0
    assert json.loads(resultado.stdout)['value'] == 0


def test_cli_maxflow_flow_violations_exit_one(runner, tmp_path):
    flujos = _escribir(tmp_path / 'flujos.json', {'flows': [{'from': 's', 'to': 'r', 'flow': 9.0}]})
    resultado = runner.invoke(args=['maxflow', str(ESCENARIOS / 'fig1_topology.json'), '--flows', flujos])
    assert resultado.exit_code == 1
    assert 'VIOLACIÓN capacity' in resultado.output


# =============================================================================
# CLI: optimize / sweep
# =============================================================================
def test_cli_optimize_writes_results(runner, tmp_path, fig4_topology_dict):
    escenario = _escribir(tmp_path / 'esc.json', _escenario_en_linea(fig4_topology_dict))
    salida = tmp_path / 'out'
    resultado = runner.invoke(args=['optimize', escenario, '--out', str(salida), '--w', '0.5'])
    assert resultado.exit_code == 0
    df, metadatos = FileHelper.get_instance().read_csv(salida / 'results' / 'en_linea.csv')
    assert list(df['w']) == [0.5]
    assert bool(df['feasible'][0]) is True
    assert float(metadatos['f_prime_sd']) == pytest.approx(7.184)


def test_cli_optimize_infeasible_exits_one(runner, tmp_path, fig4_topology_dict):
    datos = _escenario_en_linea(fig4_topology_dict, f_min=5.0)
    escenario = _escribir(tmp_path / 'infactible.json', datos)
    resultado = runner.invoke(args=['optimize', escenario, '--out', str(tmp_path)])
    assert resultado.exit_code == 1


def test_cli_optimize_curve_by_name(runner, tmp_path, fig4_topology_dict):
    curvas = tmp_path / 'curvas'
    FileHelper.get_instance().write_json(curvas / 'genai-PE-perception.json', curva_exponencial().to_dict())
    escenario = _escribir(tmp_path / 'esc.json',
                          _escenario_en_linea(fig4_topology_dict, curve='genai-PE-perception'))
    resultado = runner.invoke(args=['optimize', escenario, '--curves', str(curvas), '--out', str(tmp_path)])
    assert resultado.exit_code == 0
    faltante = runner.invoke(args=['optimize', escenario, '--curves', str(tmp_path / 'nada'), '--out', str(tmp_path)])
    assert faltante.exit_code == 2


def test_cli_sweep_echoes_weights(runner, tmp_path, fig4_topology_dict):
    escenario = _escribir(tmp_path / 'esc.json', _escenario_en_linea(fig4_topology_dict))
    resultado = runner.invoke(args=['sweep', escenario, '--out', str(tmp_path),
                                    '--w', '0', '--w', '1', '--w', '5'])
    assert resultado.exit_code == 0
    df, _ = FileHelper.get_instance().read_csv(tmp_path / 'results' / 'fig4.csv')
    assert list(df.columns) == ['curve', 'w', 'L_p_star', 'G_flow', 'objective']
    assert list(df['w']) == [0.0, 1.0, 5.0]
    assert list(df['G_flow']) == sorted(df['G_flow'], reverse=True)


# =============================================================================
# CLI: dataset y pipeline
# =============================================================================
@pytest.fixture
def config_pequena(tmp_path):
    datos = {
        'dataset': {'count': 16, 'width': 32, 'height': 32, 'channels': 3, 'seed': 11},
        'schemes': ['genai', 'jpeg'],
        'metrics': ['distortion', 'perception'],
        'tiers': ['low', 'med', 'high'],
        'jpeg_pe_qualities': [10, 35, 50, 75, 90],
        'jpeg_ps_qualities': {'low': 10, 'med': 35, 'high': 75},
        'gamma_grid': [0.0, 0.25, 0.5, 0.75, 1.0],
        'candidates': ['exponential', 'power', 'polynomial-1', 'polynomial-2', 'polynomial-3'],
        'scenarios': [str(ESCENARIOS / 'paper_fig4.json'), str(ESCENARIOS / 'replicator_baseline.json')],
        'w_values': [0.0, 1.0, 5.0],
        'jobs': 1
    }
    return _escribir(tmp_path / 'pipeline.json', datos)


def test_cli_gen_dataset_is_reproducible(runner, tmp_path, config_pequena):
    for nombre in ('a', 'b'):
        resultado = runner.invoke(args=['gen-dataset', '--config', config_pequena,
                                        '--out', str(tmp_path / nombre)])
        assert resultado.exit_code == 0
    manifiesto_a = (tmp_path / 'a' / 'dataset' / 'manifest.json').read_text(encoding='utf-8')
    manifiesto_b = (tmp_path / 'b' / 'dataset' / 'manifest.json').read_text(encoding='utf-8')
    assert manifiesto_a == manifiesto_b
    assert len(list((tmp_path / 'a' / 'dataset').glob('img_*.ppm'))) == 16

    runner.invoke(args=['gen-dataset', '--config', config_pequena, '--out', str(tmp_path / 'c'), '--seed', '12'])
    manifiesto_c = json.loads((tmp_path / 'c' / 'dataset' / 'manifest.json').read_text(encoding='utf-8'))
    assert manifiesto_c['seed'] == 12
    assert manifiesto_c['dataset_hash'] != json.loads(manifiesto_a)['dataset_hash']


def test_cli_bad_config_exits_two(runner, tmp_path):
    mala = _escribir(tmp_path / 'mala.json', {'dataset': {'channels': 2}})
    assert runner.invoke(args=['gen-dataset', '--config', mala, '--out', str(tmp_path)]).exit_code == 2
    assert runner.invoke(args=['gen-dataset', '--config', mala, '--jobs', '0']).exit_code == 2


def test_cli_measure_requires_dataset(runner, tmp_path, config_pequena):
    assert runner.invoke(args=['measure', '--config', config_pequena, '--out', str(tmp_path / 'vacio')]).exit_code == 2


def test_full_pipeline(runner, tmp_path, config_pequena):
    archivos = FileHelper.get_instance()
    salida = tmp_path / 'uno'
    resultado = runner.invoke(args=['pipeline', '--config', config_pequena, '--out', str(salida)])
    assert resultado.exit_code == 0, resultado.output

    muestras, metadatos = archivos.read_csv(salida / 'samples' / 'samples.csv')
    assert list(muestras.columns) == ['bpp', 'value', 'metric', 'scheme', 'strategy', 'gamma', 'raw']
    assert float(metadatos['fid_max']) > 0
    for (esquema, estrategia, metrica), grupo in muestras.groupby(['scheme', 'strategy', 'metric']):
        if estrategia == 'PE':
            continue
        assert list(grupo['bpp']) == sorted(grupo['bpp'])
        assert grupo['bpp'].diff().dropna().gt(0).all()
        base = grupo[grupo['gamma'] == 0.0].iloc[0]
        pe = muestras[(muestras['scheme'] == esquema) & (muestras['strategy'] == 'PE')
                      & (muestras['metric'] == metrica)]
        iguales = pe[(pe['bpp'] - base['bpp']).abs() <= 1e-9 * base['bpp']]
        assert ((iguales['value'] - base['value']).abs() <= 1e-9).any()

    curvas = sorted(p.name for p in (salida / 'curves').glob('*.json'))
    assert len(curvas) == 16
    assert sum(n.split('-')[1] == 'PE' for n in curvas) == 4
    resumen, _ = archivos.read_csv(salida / 'curves' / 'curves.csv')
    distorsion_ps = resumen[resumen['name'].str.contains('-PS-') & resumen['name'].str.endswith('distortion')]
    assert len(distorsion_ps) == 6
    assert (distorsion_ps['r2'] >= 0.99).all()

    fig4, _ = archivos.read_csv(salida / 'results' / 'fig4.csv')
    en_cero = fig4[fig4['w'] == 0.0].set_index('curve')
    assert en_cero.loc['genai-PE-perception', 'G_flow'] > 2.0
    ps = en_cero[en_cero.index.str.contains('-PS-') & en_cero.index.str.endswith('perception')]
    assert len(ps) == 6 and (ps['G_flow'] > 1.5).all()
    replicador = fig4[fig4['curve'].str.endswith(':replicator')]
    assert len(replicador) == 5
    assert (replicador['G_flow'] == 1.0).all()

    otra = tmp_path / 'dos'
    assert runner.invoke(args=['pipeline', '--config', config_pequena, '--out', str(otra), '--jobs', '2']).exit_code == 0
    for relativo in ('samples/samples.csv', 'results/fig4.csv', 'curves/curves.csv'):
        assert (salida / relativo).read_bytes() == (otra / relativo).read_bytes()
