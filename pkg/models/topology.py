"""
==============================================================================
MODELO DE DOMINIO - TOPOLOGÍA DE RED CON NODOS GENERATIVOS
==============================================================================

Descripción:
    Representación inmutable de una red dirigida con capacidades (en bpp)
    y roles de nodo: fuente, sumidero, relay y nodo generativo. Incluye
    la asignación de flujos, el resultado de corte mínimo y el reporte de
    validación de flujos.

Relaciones:
    - NetworkTopology tiene muchos: Node, Edge
    - FlowAssignment se valida contra una NetworkTopology
    - CutResult se deriva del flujo máximo

Formato JSON:
    {
      "nodes": [{"id": "s", "role": "source"},
                {"id": "g", "role": "generative", "f_min": 0.05,
                 "generation_cap": 30.0}],
      "edges": [{"from": "s", "to": "g", "capacity": 3.184}]
    }

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import math
from dataclasses import dataclass, field
from enum import Enum

from models.errors import TopologyError


class NodeKind(str, Enum):
    SOURCE = 'source'
    SINK = 'sink'
    RELAY = 'relay'
    GENERATIVE = 'generative'


@dataclass(frozen=True)
class NodeRole:
    """
    Rol de un nodo. Solo los nodos generativos usan f_min y generation_cap.
    """

    kind: NodeKind
    f_min: float = 0.0
    generation_cap: float = None

    def __post_init__(self):
        if self.f_min < 0:
            raise TopologyError(f"f_min debe ser >= 0, recibido {self.f_min}")
        if self.generation_cap is not None and self.generation_cap < 0:
            raise TopologyError(
                f"generation_cap debe ser >= 0, recibido {self.generation_cap}"
            )

    @property
    def is_generative(self):
        return self.kind is NodeKind.GENERATIVE


@dataclass(frozen=True)
class Node:
    id: str
    role: NodeRole

    def to_dict(self):
        datos = {'id': self.id, 'role': self.role.kind.value}
        if self.role.is_generative:
            datos['f_min'] = self.role.f_min
            if self.role.generation_cap is not None:
                datos['generation_cap'] = self.role.generation_cap
        return datos


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    capacity: float

    def to_dict(self):
        return {'from': self.source, 'to': self.target, 'capacity': self.capacity}


@dataclass(frozen=True)
class NetworkTopology:
    """
    Grafo dirigido con capacidades.

    Invariantes validados en la construcción:
        - exactamente una fuente y un sumidero
        - ids únicos
        - capacidades finitas y >= 0
        - sin lazos ni aristas paralelas
    """

    nodes: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        object.__setattr__(self, 'edges', tuple(self.edges))

        ids_vistos = set()
        for nodo in self.nodes:
            if nodo.id in ids_vistos:
                raise TopologyError(f"id de nodo duplicado: '{nodo.id}'")
            ids_vistos.add(nodo.id)

        fuentes = [n.id for n in self.nodes if n.role.kind is NodeKind.SOURCE]
        sumideros = [n.id for n in self.nodes if n.role.kind is NodeKind.SINK]
        if len(fuentes) != 1:
            raise TopologyError(f"se requiere exactamente una fuente, hay {len(fuentes)}")
        if len(sumideros) != 1:
            raise TopologyError(f"se requiere exactamente un sumidero, hay {len(sumideros)}")

        pares_vistos = set()
        for arista in self.edges:
            par = (arista.source, arista.target)
            for extremo in par:
                if extremo not in ids_vistos:
                    raise TopologyError(f"arista {par} referencia un nodo desconocido: '{extremo}'")
            if arista.source == arista.target:
                raise TopologyError(f"lazo no permitido en el nodo '{arista.source}'")
            if par in pares_vistos:
                raise TopologyError(f"arista duplicada {arista.source}->{arista.target}")
            if not math.isfinite(arista.capacity) or arista.capacity < 0:
                raise TopologyError(
                    f"capacidad inválida en {arista.source}->{arista.target}: {arista.capacity}"
                )
            pares_vistos.add(par)

    @property
    def source(self):
        return next(n.id for n in self.nodes if n.role.kind is NodeKind.SOURCE)

    @property
    def sink(self):
        return next(n.id for n in self.nodes if n.role.kind is NodeKind.SINK)

    def node_ids(self):
        return [n.id for n in self.nodes]

    def role_of(self, node_id):
        for nodo in self.nodes:
            if nodo.id == node_id:
                return nodo.role
        raise TopologyError(f"nodo desconocido: '{node_id}'")

    def capacity(self, source, target):
        """Capacidad de la arista source->target, o None si no existe."""
        for arista in self.edges:
            if arista.source == source and arista.target == target:
                return arista.capacity
        return None

    def without_node_edges(self, node_id):
        """Copia de la topología sin las aristas que tocan a node_id."""
        return NetworkTopology(
            nodes=self.nodes,
            edges=[a for a in self.edges if node_id not in (a.source, a.target)]
        )

    def with_capacity(self, source, target, capacity):
        aristas = [
            Edge(a.source, a.target, capacity) if (a.source, a.target) == (source, target) else a
            for a in self.edges
        ]
        return NetworkTopology(nodes=self.nodes, edges=aristas)

    @classmethod
    def from_dict(cls, datos):
        """
        Construye la topología desde el esquema JSON.

        Raises:
            TopologyError: campo faltante o inválido, con la ruta JSON
        """
        if not isinstance(datos, dict):
            raise TopologyError("la topología debe ser un objeto JSON")

        nodos = []
        for indice, nodo in enumerate(datos.get('nodes', [])):
            ruta = f"nodes[{indice}]"
            try:
                tipo = NodeKind(str(nodo['role']).lower())
            except KeyError as error:
                raise TopologyError(f"{ruta}: falta el campo {error}") from None
            except ValueError:
                raise TopologyError(f"{ruta}.role: rol desconocido '{nodo['role']}'") from None
            if 'id' not in nodo:
                raise TopologyError(f"{ruta}: falta el campo 'id'")
            rol = NodeRole(
                kind=tipo,
                f_min=float(nodo.get('f_min') or 0.0),
                generation_cap=(
                    float(nodo['generation_cap'])
                    if nodo.get('generation_cap') is not None else None
                )
            )
            nodos.append(Node(id=str(nodo['id']), role=rol))

        aristas = []
        for indice, arista in enumerate(datos.get('edges', [])):
            ruta = f"edges[{indice}]"
            for campo in ('from', 'to', 'capacity'):
                if campo not in arista:
                    raise TopologyError(f"{ruta}: falta el campo '{campo}'")
            try:
                capacidad = float(arista['capacity'])
            except (TypeError, ValueError):
                raise TopologyError(f"{ruta}.capacity: valor no numérico {arista['capacity']!r}") from None
            aristas.append(Edge(str(arista['from']), str(arista['to']), capacidad))

        return cls(nodes=nodos, edges=aristas)

    def to_dict(self):
        return {
            'nodes': [n.to_dict() for n in self.nodes],
            'edges': [a.to_dict() for a in self.edges]
        }

    def __repr__(self):
        return f"<NetworkTopology nodes={len(self.nodes)} edges={len(self.edges)}>"


@dataclass(frozen=True)
class FlowAssignment:
    """Flujo por arista f_ij en bpp, indexado por (origen, destino)."""

    flows: dict = field(default_factory=dict)

    def get(self, source, target):
        return self.flows.get((source, target), 0.0)

    def in_flow(self, node_id):
        return sum(f for (u, v), f in self.flows.items() if v == node_id)

    def out_flow(self, node_id):
        return sum(f for (u, v), f in self.flows.items() if u == node_id)

    def merged(self, otros):
        combinados = dict(self.flows)
        for par, valor in otros.items():
            combinados[par] = combinados.get(par, 0.0) + valor
        return FlowAssignment(flows=combinados)

    @classmethod
    def from_list(cls, filas):
        flujos = {}
        for fila in filas:
            flujos[(str(fila['from']), str(fila['to']))] = float(fila['flow'])
        return cls(flows=flujos)

    def to_list(self):
        return [
            {'from': u, 'to': v, 'flow': f}
            for (u, v), f in self.flows.items()
        ]


@dataclass(frozen=True)
class CutResult:
    value: float
    cut_edges: tuple
    source_side: frozenset

    def to_dict(self):
        return {
            'value': self.value,
            'cut_edges': [{'from': u, 'to': v} for u, v in self.cut_edges],
            'source_side': sorted(self.source_side)
        }


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str

    def to_dict(self):
        return {'kind': self.kind, 'subject': self.subject, 'detail': self.detail}


@dataclass(frozen=True)
class ValidationReport:
    """Estado por nodo ('OK' o descripción) más la lista de violaciones."""

    node_status: dict
    violations: tuple

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {
            'ok': self.ok,
            'node_status': dict(self.node_status),
            'violations': [v.to_dict() for v in self.violations]
        }
