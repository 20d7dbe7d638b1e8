"""
==============================================================================
CONTROLADOR DE OPTIMIZACIÓN - TAMAÑO DE PROMPT Y GANANCIA DE FLUJO
==============================================================================

Descripción:
    Controlador Singleton que resuelve el problema del nodo generativo:
    elegir el tamaño medio de prompt L_p y la tasa de generación lambda
    que maximizan el flujo generativo ponderado por calidad

        maximizar  y_g (1 - w * delta(L_p)),   y_g = lambda (L - L_p)
        sujeto a   lambda L_p <= c_sg,  lambda L <= c_gd,  lambda L_p >= f_min

    y calcula la ganancia de flujo G_flow = 1 + y_g / f'_sd.

Características:
    - lambda* = min(c_sg / L_p, c_gd / L) en forma cerrada
    - Búsqueda en rejilla de 2048 puntos + sección dorada en el mejor
      intervalo (tolerancia 1e-6 en L_p)
    - Empates: gana el L_p más pequeño
    - Escenarios infactibles se reportan con feasible = False
    - Oráculo de fuerza bruta sobre una rejilla (L_p, lambda)
    - Flujo compuesto: replicación sin g + ruta generativa

Autor: OctavoSMG
Versión: 1.0.0
==============================================================================
"""

import logging
import math

import numpy as np

from controllers.flow_controller import FlowController
from models.errors import DomainError
from models.scenario import OptimizationResult
from models.topology import FlowAssignment


logger = logging.getLogger(__name__)

PUNTOS_REJILLA = 2048
TOLERANCIA_SECCION_DORADA = 1e-6
EPSILON_ABIERTO = 1e-9
PISO_LP = 1e-12
TOLERANCIA_RESTRICCION = 1e-9
TAMANO_BLOQUE_FUERZA_BRUTA = 256

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_CUADRADO = (3 - math.sqrt(5)) / 2


class OptimizationController:
    """
    Controlador de optimización con patrón Singleton.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(OptimizationController, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.flow_controller = FlowController.get_instance()

        self._initialized = True

    # =========================================================================
    # PIEZAS ANALÍTICAS
    # =========================================================================
    @staticmethod
    def optimal_lambda(c_sg, c_gd, lp, L):
        """
        lambda* = min(c_sg / L_p, c_gd / L).

        Raises:
            DomainError: alguna entrada no positiva
        """
        if min(c_sg, c_gd, lp, L) <= 0:
            raise DomainError(
                f"optimal_lambda requiere entradas > 0 (c_sg={c_sg}, c_gd={c_gd}, L_p={lp}, L={L})"
            )
        return min(c_sg / lp, c_gd / L)

    @staticmethod
    def objective(lp, lam, w, curve, L):
        """
        y_g (1 - w * delta(L_p)) con y_g = lambda (L - L_p).

        Raises:
            DomainError: L_p fuera del dominio de la curva
        """
        if lam < 0:
            raise DomainError(f"lambda debe ser >= 0, recibido {lam}")
        y_g = lam * (L - lp)
        return y_g * (1.0 - w * curve.eval(lp))

    @staticmethod
    def flow_gain(y_g, f_prime_sd):
        """G_flow = 1 + y_g / f'_sd."""
        if not f_prime_sd > 0:
            raise DomainError(f"el flujo de referencia f'_sd debe ser > 0, recibido {f_prime_sd}")
        return 1.0 + y_g / f_prime_sd

    # =========================================================================
    # OPTIMIZACIÓN
    # =========================================================================
    def admissible_interval(self, scenario):
        """
        Intervalo de L_p admisible, o None si el escenario es infactible.

        lo = max(x_lo, lp_lower (abierto si > 0), f_min L / c_gd)
        hi = min(L, x_hi, lp_upper)
        """
        c_sg, c_gd, f_min, L = scenario.c_sg, scenario.c_gd, scenario.f_min, scenario.L
        if c_sg <= 0 or c_gd <= 0 or c_sg < f_min:
            return None

        cotas_inferiores = [scenario.curve.x_lo, f_min * L / c_gd, PISO_LP]
        if scenario.lp_lower > 0:
            cotas_inferiores.append(scenario.lp_lower + EPSILON_ABIERTO)
        cotas_superiores = [L, scenario.curve.x_hi]
        if scenario.lp_upper is not None:
            cotas_superiores.append(scenario.lp_upper)

        lo, hi = max(cotas_inferiores), min(cotas_superiores)
        if lo > hi:
            return None
        return lo, hi

    def _objetivo_vectorizado(self, scenario, lps):
        lambdas = np.minimum(scenario.c_sg / lps, scenario.c_gd / scenario.L)
        return lambdas * (scenario.L - lps) * (1.0 - scenario.w * scenario.curve.eval_many(lps))

    def optimize_prompt_size(self, scenario, f_prime_sd=None):
        """
        Maximiza el objetivo sobre L_p con lambda = lambda*(L_p).

        Args:
            scenario (GenScenario): escenario a resolver
            f_prime_sd (float): flujo de referencia; si es None se calcula
                con el flujo máximo de replicación

        Returns:
            OptimizationResult
        """
        if f_prime_sd is None:
            f_prime_sd = self.flow_controller.baseline_max_flow(
                scenario.topology, scenario.topology.source, scenario.topology.sink
            )

        if scenario.replicate:
            return self._resultado_replicacion(scenario, f_prime_sd)

        intervalo = self.admissible_interval(scenario)
        if intervalo is None:
            logger.info("Escenario %s infactible (w=%.4g)", scenario.name, scenario.w)
            return OptimizationResult.infeasible(scenario.w, f_prime_sd)
        lo, hi = intervalo

        if hi - lo <= TOLERANCIA_SECCION_DORADA:
            lp_optimo = lo
        else:
            rejilla = np.linspace(lo, hi, PUNTOS_REJILLA)
            valores = self._objetivo_vectorizado(scenario, rejilla)
            indice = int(np.argmax(valores))
            lp_optimo, valor_optimo = float(rejilla[indice]), float(valores[indice])

            a = float(rejilla[max(indice - 1, 0)])
            b = float(rejilla[min(indice + 1, PUNTOS_REJILLA - 1)])
            candidato = self._seccion_dorada(
                lambda x: float(self._objetivo_vectorizado(scenario, np.array([x]))[0]),
                a, b
            )
            valor_candidato = float(self._objetivo_vectorizado(scenario, np.array([candidato]))[0])
            if valor_candidato > valor_optimo or (valor_candidato == valor_optimo and candidato < lp_optimo):
                lp_optimo = candidato

        return self._construir_resultado(scenario, lp_optimo, f_prime_sd)

    @staticmethod
    def _seccion_dorada(f, a, b, tol=TOLERANCIA_SECCION_DORADA):
        """Maximiza f unimodal en [a, b]; devuelve el punto medio del intervalo final."""
        a, b = min(a, b), max(a, b)
        h = b - a
        if h <= tol:
            return a

        pasos = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
        c = a + INV_PHI_CUADRADO * h
        d = a + INV_PHI * h
        yc, yd = f(c), f(d)

        for _ in range(pasos - 1):
            if yc >= yd:
                b, d, yd = d, c, yc
                h = INV_PHI * h
                c = a + INV_PHI_CUADRADO * h
                yc = f(c)
            else:
                a, c, yc = c, d, yd
                h = INV_PHI * h
                d = a + INV_PHI * h
                yd = f(d)

        return (a + d) / 2 if yc >= yd else (c + b) / 2

    def _construir_resultado(self, scenario, lp, f_prime_sd):
        lam = self.optimal_lambda(scenario.c_sg, scenario.c_gd, lp, scenario.L)
        f_sg = lam * lp
        f_gd = lam * scenario.L
        y_g = f_gd - f_sg

        if f_sg > scenario.c_sg + TOLERANCIA_RESTRICCION or f_gd > scenario.c_gd + TOLERANCIA_RESTRICCION:
            raise DomainError(f"restricción de capacidad violada en L_p={lp}")
        factible = f_sg >= scenario.f_min - TOLERANCIA_RESTRICCION

        return OptimizationResult(
            w=scenario.w,
            lp_star=lp,
            lambda_star=lam,
            f_sg=f_sg,
            f_gd=f_gd,
            y_g=y_g,
            objective=self.objective(lp, lam, scenario.w, scenario.curve, scenario.L),
            g_flow=self.flow_gain(y_g, f_prime_sd),
            feasible=factible,
            f_prime_sd=f_prime_sd
        )

    def _resultado_replicacion(self, scenario, f_prime_sd):
        """El nodo reenvía el contenido completo: L_p = L, y_g = 0."""
        L = scenario.L
        if scenario.c_sg <= 0 or scenario.c_gd <= 0:
            return OptimizationResult.infeasible(scenario.w, f_prime_sd)
        lam = self.optimal_lambda(scenario.c_sg, scenario.c_gd, L, L)
        f_sg = lam * L
        return OptimizationResult(
            w=scenario.w,
            lp_star=L,
            lambda_star=lam,
            f_sg=f_sg,
            f_gd=f_sg,
            y_g=0.0,
            objective=0.0,
            g_flow=self.flow_gain(0.0, f_prime_sd),
            feasible=f_sg >= scenario.f_min - TOLERANCIA_RESTRICCION,
            f_prime_sd=f_prime_sd
        )

    def sweep_w(self, scenario, w_values):
        """
        Un resultado por valor de w, en el orden de entrada.

        Raises:
            DomainError: lista vacía
        """
        if not w_values:
            raise DomainError("sweep_w requiere al menos un valor de w")
        f_prime_sd = self.flow_controller.baseline_max_flow(
            scenario.topology, scenario.topology.source, scenario.topology.sink
        )
        resultados = [self.optimize_prompt_size(scenario.with_w(w), f_prime_sd) for w in w_values]
        logger.info("Barrido %s: %d valores de w", scenario.name, len(resultados))
        return resultados

    # =========================================================================
    # ORÁCULO DE FUERZA BRUTA
    # =========================================================================
    def brute_force_optimize(self, scenario, grid_n):
        """
        Búsqueda exhaustiva sobre grid_n x grid_n pares (L_p, lambda)
        que cumplen todas las restricciones. Para cada L_p, lambda recorre
        [f_min / L_p, min(c_sg / L_p, c_gd / L)].

        La ventana de L_p se calcula aquí a partir de las restricciones,
        sin pasar por admissible_interval. A la rejilla de L_p se le suma
        el cambio de régimen L_p = c_sg L / c_gd cuando cae dentro.
        """
        if grid_n < 2:
            raise DomainError(f"grid_n debe ser >= 2, recibido {grid_n}")
        f_prime_sd = self.flow_controller.baseline_max_flow(
            scenario.topology, scenario.topology.source, scenario.topology.sink
        )
        if scenario.replicate:
            return self._resultado_replicacion(scenario, f_prime_sd)

        L, w = scenario.L, scenario.w
        c_sg, c_gd, f_min = scenario.c_sg, scenario.c_gd, scenario.f_min
        if c_sg <= 0 or c_gd <= 0:
            return OptimizationResult.infeasible(w, f_prime_sd)

        # lambda L_p >= f_min y lambda L <= c_gd exigen L_p >= f_min L / c_gd
        desde = max(scenario.curve.x_lo, f_min * L / c_gd, PISO_LP)
        if scenario.lp_lower > 0:
            desde = max(desde, scenario.lp_lower + EPSILON_ABIERTO)
        hasta = min(L, scenario.curve.x_hi)
        if scenario.lp_upper is not None:
            hasta = min(hasta, scenario.lp_upper)
        if desde > hasta:
            return OptimizationResult.infeasible(w, f_prime_sd)

        lps = np.linspace(desde, hasta, grid_n)
        cambio_regimen = c_sg * L / c_gd
        if desde < cambio_regimen < hasta:
            lps = np.sort(np.append(lps, cambio_regimen))

        lambda_max = np.minimum(c_sg / lps, c_gd / L)
        lambda_min = f_min / lps
        factibles = lambda_min <= lambda_max * (1 + TOLERANCIA_RESTRICCION)
        if not factibles.any():
            return OptimizationResult.infeasible(w, f_prime_sd)
        lps, lambda_max = lps[factibles], lambda_max[factibles]
        lambda_min = np.minimum(lambda_min[factibles], lambda_max)
        filas = lps.size

        penalizacion = 1.0 - w * scenario.curve.eval_many(lps)
        fracciones = np.linspace(0.0, 1.0, grid_n)

        mejor_valor, mejor_lp, mejor_lambda = -np.inf, None, None
        for inicio in range(0, filas, TAMANO_BLOQUE_FUERZA_BRUTA):
            bloque = slice(inicio, inicio + TAMANO_BLOQUE_FUERZA_BRUTA)
            lambdas = lambda_min[bloque, None] + fracciones[None, :] * (lambda_max[bloque] - lambda_min[bloque])[:, None]
            valores = lambdas * (L - lps[bloque, None]) * penalizacion[bloque, None]
            fila, columna = np.unravel_index(int(np.argmax(valores)), valores.shape)
            if valores[fila, columna] > mejor_valor:
                mejor_valor = float(valores[fila, columna])
                mejor_lp = float(lps[bloque][fila])
                mejor_lambda = float(lambdas[fila, columna])

        f_sg = mejor_lambda * mejor_lp
        f_gd = mejor_lambda * L
        return OptimizationResult(
            w=w,
            lp_star=mejor_lp,
            lambda_star=mejor_lambda,
            f_sg=f_sg,
            f_gd=f_gd,
            y_g=f_gd - f_sg,
            objective=mejor_valor,
            g_flow=self.flow_gain(f_gd - f_sg, f_prime_sd),
            feasible=True,
            f_prime_sd=f_prime_sd
        )

    # =========================================================================
    # FLUJO COMPUESTO
    # =========================================================================
    def compose_generative_flow(self, scenario, result):
        """
        Flujo máximo de replicación sin las aristas de g, más la ruta
        generativa f_sg = lambda* L_p* y f_gd = lambda* L.

        Returns:
            FlowAssignment
        """
        topologia = scenario.topology
        sin_g = topologia.without_node_edges(scenario.g)
        _, replicacion = self.flow_controller.max_flow(sin_g, topologia.source, topologia.sink)

        flujos = {(a.source, a.target): 0.0 for a in topologia.edges}
        flujos.update(replicacion.flows)
        compuesto = FlowAssignment(flows=flujos)
        if not result.feasible:
            return compuesto
        return compuesto.merged({
            (topologia.source, scenario.g): result.f_sg,
            (scenario.g, topologia.sink): result.f_gd
        })

    @classmethod
    def get_instance(cls):
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance
