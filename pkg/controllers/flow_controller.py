"""
==============================================================================
CONTROLADOR DE FLUJO - MAX-FLOW / MIN-CUT Y DIVERGENCIA DE NODOS
==============================================================================

Descripción:
    Controlador Singleton que calcula el flujo máximo s->d de una topología
    tratando todo nodo (incluido el generativo) como replicador, el corte
    mínimo asociado y la divergencia de cada nodo. Valida asignaciones de
    flujo contra la ley de conservación relajada del nodo generativo.

Características:
    - Edmonds-Karp (caminos aumentantes más cortos, BFS determinista)
    - Red residual construida con networkx
    - Capacidades reales (bpp) con piso residual de 1e-12
    - Tolerancia de conservación de 1e-9 bpp
    - Funciones puras: sin estado mutable compartido

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging
from collections import deque

import networkx as nx
from networkx.algorithms.flow.utils import build_residual_network

from models.errors import TopologyError
from models.topology import (
    CutResult, FlowAssignment, NodeKind, ValidationReport, Violation
)


logger = logging.getLogger(__name__)

PISO_RESIDUAL = 1e-12
TOLERANCIA_CONSERVACION = 1e-9


class FlowController:
    """
    Controlador de flujo de red con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(FlowController, cls).__new__(cls)
        return cls._instance

    # =========================================================================
    # FLUJO MÁXIMO
    # =========================================================================
    def max_flow(self, topology, s, d):
        """
        Flujo máximo s->d por caminos aumentantes más cortos.

        Args:
            topology (NetworkTopology): red a analizar
            s (str): id del nodo fuente
            d (str): id del nodo sumidero

        Returns:
            tuple: (valor en bpp, FlowAssignment factible y conservativo)

        Raises:
            TopologyError: nodo desconocido, roles incorrectos o s == d
        """
        residual = self._ejecutar_edmonds_karp(topology, s, d)

        flujos = {}
        for arista in topology.edges:
            valor = 0.0
            if residual.has_edge(arista.source, arista.target):
                valor = residual[arista.source][arista.target]['flow']
            if valor < PISO_RESIDUAL:
                valor = 0.0
            flujos[(arista.source, arista.target)] = min(valor, arista.capacity)

        return residual.graph['flow_value'], FlowAssignment(flows=flujos)

    def baseline_max_flow(self, topology, s, d):
        """
        f'_sd: flujo máximo solo con replicación (denominador de G_flow).
        """
        valor, _ = self.max_flow(topology, s, d)
        return valor

    def min_cut(self, topology, s, d):
        """
        Corte mínimo s-d a partir de la red residual del flujo máximo.

        Returns:
            CutResult: valor, aristas saturadas del corte y lado de la fuente
        """
        residual = self._ejecutar_edmonds_karp(topology, s, d)

        lado_fuente = {s}
        cola = deque([s])
        while cola:
            u = cola.popleft()
            for v, atributos in residual[u].items():
                if v not in lado_fuente and atributos['capacity'] - atributos['flow'] > PISO_RESIDUAL:
                    lado_fuente.add(v)
                    cola.append(v)

        aristas_corte = tuple(
            (a.source, a.target) for a in topology.edges
            if a.source in lado_fuente and a.target not in lado_fuente and a.capacity > 0
        )
        valor = sum(topology.capacity(u, v) for u, v in aristas_corte)

        return CutResult(
            value=valor,
            cut_edges=aristas_corte,
            source_side=frozenset(lado_fuente)
        )

    def _ejecutar_edmonds_karp(self, topology, s, d):
        self._validar_terminales(topology, s, d)

        grafo = nx.DiGraph()
        grafo.add_nodes_from(topology.node_ids())
        for arista in topology.edges:
            grafo.add_edge(arista.source, arista.target, capacity=arista.capacity)

        residual = build_residual_network(grafo, 'capacity')
        for u in residual:
            for atributos in residual[u].values():
                atributos['flow'] = 0.0

        valor_flujo = 0.0
        while True:
            predecesores = self._buscar_camino_bfs(residual, s, d)
            if predecesores is None:
                break

            # Cuello de botella del camino aumentante
            cuello = float('inf')
            v = d
            while v != s:
                u = predecesores[v]
                atributos = residual[u][v]
                cuello = min(cuello, atributos['capacity'] - atributos['flow'])
                v = u

            v = d
            while v != s:
                u = predecesores[v]
                residual[u][v]['flow'] += cuello
                residual[v][u]['flow'] -= cuello
                v = u
            valor_flujo += cuello

        residual.graph['flow_value'] = valor_flujo
        logger.debug("Flujo máximo %s->%s = %.6f bpp", s, d, valor_flujo)
        return residual

    @staticmethod
    def _buscar_camino_bfs(residual, s, d):
        predecesores = {s: None}
        cola = deque([s])
        while cola:
            u = cola.popleft()
            for v, atributos in residual[u].items():
                if v in predecesores:
                    continue
                if atributos['capacity'] - atributos['flow'] > PISO_RESIDUAL:
                    predecesores[v] = u
                    if v == d:
                        return predecesores
                    cola.append(v)
        return None

    @staticmethod
    def _validar_terminales(topology, s, d):
        rol_fuente = topology.role_of(s)
        rol_sumidero = topology.role_of(d)
        if s == d:
            raise TopologyError(f"la fuente y el sumidero coinciden: '{s}'")
        if rol_fuente.kind is not NodeKind.SOURCE:
            raise TopologyError(f"el nodo '{s}' no es la fuente")
        if rol_sumidero.kind is not NodeKind.SINK:
            raise TopologyError(f"el nodo '{d}' no es el sumidero")

    # =========================================================================
    # DIVERGENCIA Y VALIDACIÓN
    # =========================================================================
    def node_divergence(self, topology, flow, node):
        """
        Divergencia y_i = flujo saliente - flujo entrante.

        Raises:
            TopologyError: nodo desconocido
        """
        topology.role_of(node)
        return flow.out_flow(node) - flow.in_flow(node)

    def validate_flow(self, topology, flow):
        """
        Valida una asignación de flujo. Las violaciones son datos, no errores.

        Reglas:
            - Relay: |y_i| <= 1e-9
            - Generativo: y_g >= 0 y flujo entrante >= f_min
              (y flujo saliente <= generation_cap si está definido)
            - Arista: 0 <= f_ij <= c_ij

        Returns:
            ValidationReport: estado por nodo y lista de violaciones
        """
        violaciones = []
        estado_nodos = {}

        for (u, v), valor in flow.flows.items():
            capacidad = topology.capacity(u, v)
            sujeto = f"{u}->{v}"
            if capacidad is None:
                if abs(valor) > TOLERANCIA_CONSERVACION:
                    violaciones.append(Violation('unknown edge', sujeto, f"flujo {valor:.6g} en arista inexistente"))
                continue
            if valor < -TOLERANCIA_CONSERVACION:
                violaciones.append(Violation('capacity', sujeto, f"flujo negativo {valor:.6g}"))
            elif valor > capacidad + TOLERANCIA_CONSERVACION:
                violaciones.append(Violation('capacity', sujeto, f"flujo {valor:.6g} > capacidad {capacidad:.6g}"))

        for nodo in topology.nodes:
            divergencia = self.node_divergence(topology, flow, nodo.id)
            problemas = []

            if nodo.role.kind is NodeKind.RELAY:
                if abs(divergencia) > TOLERANCIA_CONSERVACION:
                    problemas.append(('conservation', f"y_i = {divergencia:.6g} != 0"))

            elif nodo.role.kind is NodeKind.GENERATIVE:
                entrante = flow.in_flow(nodo.id)
                if divergencia < -TOLERANCIA_CONSERVACION:
                    problemas.append(('negative divergence', f"y_g = {divergencia:.6g} < 0"))
                if entrante < nodo.role.f_min - TOLERANCIA_CONSERVACION:
                    problemas.append(('below f_min', f"flujo entrante {entrante:.6g} < f_min {nodo.role.f_min:.6g}"))
                cap_generacion = nodo.role.generation_cap
                saliente = flow.out_flow(nodo.id)
                if cap_generacion is not None and saliente > cap_generacion + TOLERANCIA_CONSERVACION:
                    problemas.append(('above generation_cap', f"flujo saliente {saliente:.6g} > {cap_generacion:.6g}"))

            for tipo, detalle in problemas:
                violaciones.append(Violation(tipo, nodo.id, detalle))
            estado_nodos[nodo.id] = 'OK' if not problemas else '; '.join(t for t, _ in problemas)

        return ValidationReport(node_status=estado_nodos, violations=tuple(violaciones))

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
