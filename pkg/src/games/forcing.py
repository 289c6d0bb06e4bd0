# MIT License
# Copyright (c) 2026 BlackwellLab
# 
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
# 
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
# 
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
BlackwellLab - Oráculos de Forzamiento
Deciden si un jugador puede forzar un semiespacio (o, en juegos puros, un
conjunto general) en una sola ronda, moviendo primero (1) o segundo (2).

Tolerancias: desigualdades de semiespacio con 1e-9; pertenencia a
conjuntos con la resolución h.
"""


import itertools
from typing import Callable, Dict, List, Optional, Union as TypingUnion

import numpy as np

from src.core.errors import KindMismatch
from src.games.game import (
    Game, Pure, Mixed, Action, scalarize, solve_scalarized, lower_value, payoff,
    action_set, g_S
)
from src.geometry.operations import project
from src.geometry.sets import Halfspace, TargetSet
from src.solvers.matrix_game import matrix_game, best_response, row_best_response


FORCE_TOLERANCE = 1e-9


class ForceCertificate:
    """
    Testigo de forzamiento.

    order 1: witness es la acción fija del jugador.
    order 2: table (juego puro) o responder (juego mixto) da la respuesta
    a cada acción del oponente.
    """

    def __init__(self, player: str, order: int, target: Dict,
                 witness: Optional[Action] = None,
                 table: Optional[Dict[int, int]] = None,
                 responder: Optional[Callable[[Action], Action]] = None,
                 value: Optional[float] = None):
        self.player = player
        self.order = order
        self.target = target
        self.witness = witness
        self.table = table
        self.responder = responder
        self.value = value

    def respond(self, opponent: Action) -> Action:
        """Respuesta del jugador que mueve segundo."""
        if self.order == 1:
            return self.witness
        if self.responder is not None:
            return self.responder(opponent)
        return Pure(self.table[opponent.index])

    def to_dict(self) -> Dict:
        body = {"player": self.player, "order": self.order, "target": self.target}
        if self.witness is not None:
            body["witness"] = self.witness.to_dict()
        if self.table is not None:
            body["response_table"] = {str(k): v for k, v in sorted(self.table.items())}
        if self.responder is not None and self.table is None:
            body["response_table"] = "lp-best-response"
        if self.value is not None:
            body["value"] = self.value
        return body


def _halfspace_target(H: Halfspace, complement: bool = False) -> Dict:
    return {"halfspace": H.to_dict(), "complement": complement}


def x_one_forces_halfspace(g: Game, H: Halfspace, config: Optional[Dict] = None) -> Optional[ForceCertificate]:
    """
    ¿Puede 𝒳, moviendo primero, forzar ⟨λ,f⟩ <= c?

    Juego mixto: v = valor de scalarize(g,λ); certificado con μ* si v <= c + 1e-9.
    Juego puro: búsqueda exhaustiva ∃i ∀j.
    """
    solution = solve_scalarized(g, H.normal, config)
    if solution.value > H.offset + FORCE_TOLERANCE:
        return None
    if g.mode == "pure":
        witness = Pure(int(np.argmax(solution.row_strategy)))
    else:
        witness = Mixed(solution.row_strategy)
    return ForceCertificate("x", 1, _halfspace_target(H), witness=witness, value=solution.value)


def y_two_forces_complement(g: Game, H: Halfspace, config: Optional[Dict] = None) -> Optional[ForceCertificate]:
    """
    ¿Puede 𝒴, respondiendo a cada x, forzar ⟨λ,f⟩ > c?

    Tiene éxito exactamente cuando x_one_forces_halfspace falla.
    """
    G = scalarize(g, H.normal)
    target = _halfspace_target(H, complement=True)
    if g.mode == "pure":
        table = {}
        for i in range(g.m):
            above = np.nonzero(G[i] > H.offset + FORCE_TOLERANCE)[0]
            if above.size == 0:
                return None
            table[i] = int(above[0])
        return ForceCertificate("y", 2, target, table=table, value=float(G.max(axis=1).min()))

    value = matrix_game(G, config).value
    if value <= H.offset + FORCE_TOLERANCE:
        return None

    def responder(x: Action) -> Action:
        return Pure(best_response(G, x.distribution(g.m)))

    return ForceCertificate("y", 2, target, responder=responder, value=value)


def y_one_forces_complement(g: Game, H: Halfspace, config: Optional[Dict] = None) -> Optional[ForceCertificate]:
    """¿Existe un único ȳ con ⟨λ,f(x,ȳ)⟩ > c para todo x?"""
    G = scalarize(g, H.normal)
    target = _halfspace_target(H, complement=True)
    if g.mode == "pure":
        col_min = G.min(axis=0)
        j = int(np.argmax(col_min))
        if col_min[j] <= H.offset + FORCE_TOLERANCE:
            return None
        return ForceCertificate("y", 1, target, witness=Pure(j), value=float(col_min[j]))

    solution = matrix_game(G, config)
    nu = solution.col_strategy
    guaranteed = float((G @ nu).min())
    if guaranteed <= H.offset + FORCE_TOLERANCE:
        return None
    return ForceCertificate("y", 1, target, witness=Mixed(nu), value=guaranteed)


def x_two_forces_halfspace(g: Game, H: Halfspace, config: Optional[Dict] = None) -> Optional[ForceCertificate]:
    """
    ¿Puede 𝒳, respondiendo a cada y, forzar ⟨λ,f⟩ <= c?

    Juego puro: ∀j ∃i. Juego mixto: valor inferior <= c, con respuesta
    óptima por LP para cada ν consultado.
    """
    G = scalarize(g, H.normal)
    target = _halfspace_target(H)
    if g.mode == "pure":
        table = {}
        for j in range(g.n):
            below = np.nonzero(G[:, j] <= H.offset + FORCE_TOLERANCE)[0]
            if below.size == 0:
                return None
            table[j] = int(below[0])
        return ForceCertificate("x", 2, target, table=table, value=float(G.min(axis=0).max()))

    value = lower_value(g, H.normal, config)
    if value > H.offset + FORCE_TOLERANCE:
        return None

    def responder(y: Action) -> Action:
        return Pure(row_best_response(G, y.distribution(g.n)))

    return ForceCertificate("x", 2, target, responder=responder, value=value)


def nonminimax_halfspace(g: Game, direction) -> Halfspace:
    """
    H = {⟨λ,z⟩ <= (a+b)/2} con a = inf-sup y b = sup-inf del juego escalar.

    Si a > b, 𝒳 puede 2-forzar H pero no 1-forzarlo.
    """
    a = solve_scalarized(g, direction).value
    b = lower_value(g, direction)
    return Halfspace(direction, 0.5 * (a + b))


# --- Conjuntos generales (juegos puros) ---

def _membership(S: TypingUnion[TargetSet, Halfspace], tolerance: float) -> Callable[[np.ndarray], bool]:
    if isinstance(S, Halfspace):
        return lambda z: S.contains(z, FORCE_TOLERANCE)
    return lambda z: project(z, S).distance <= tolerance + FORCE_TOLERANCE


def x_two_forces_set(g: Game, S: TargetSet, tolerance: float = 0.01,
                     opponent_grid: Optional[List[Action]] = None) -> Optional[ForceCertificate]:
    """
    ¿Para cada acción de 𝒴 existe una fila pura que lleva el pago a S?

    Juego puro: enumeración de columnas. Juego mixto: sólo sobre una malla
    de distribuciones del oponente (opponent_grid), respondiendo con filas puras.

    Args:
        tolerance: Resolución h usada para la pertenencia a S
    """
    inside = _membership(S, tolerance)
    if g.mode == "mixed" and opponent_grid is None:
        raise KindMismatch("La enumeración exacta requiere un juego puro; "
                           "pase opponent_grid para juegos mixtos")
    columns = opponent_grid if opponent_grid is not None else [Pure(j) for j in range(g.n)]

    table = {}
    responses = []
    for k, y in enumerate(columns):
        hit = None
        for i in range(g.m):
            if inside(payoff(g, Pure(i), y)):
                hit = i
                break
        if hit is None:
            return None
        table[k] = hit
        responses.append(hit)

    target = {"set": S.to_dict(), "tolerance": tolerance}
    if opponent_grid is None:
        return ForceCertificate("x", 2, target, table=table)
    lookup = {repr(y): Pure(i) for y, i in zip(columns, responses)}
    return ForceCertificate("x", 2, target, table=table,
                            responder=lambda y: lookup[repr(y)])


def forcing_dualities_check(g: Game, S: TypingUnion[TargetSet, Halfspace],
                            tolerance: float = 0.01, enlargement: float = 0.1) -> Dict:
    """
    Evalúa por enumeración las cuatro relaciones elementales de forzamiento.

    1. 𝒳 1-fuerza S  <=>  𝒴 no 2-fuerza S^c
    2. 𝒳 1-fuerza S  =>   𝒳 1-fuerza todo S' ⊇ S (se usa S' = vecindad de S)
    3. 𝒳 1-fuerza S  <=>  S corta todo conjunto que 𝒴 puede 2-forzar
    4. 𝒳 1-fuerza S  =>   𝒳 2-fuerza S

    Returns:
        {"properties": [...], "violations": [números], "consistent": bool}
    """
    if g.mode != "pure":
        raise KindMismatch("forcing_dualities_check enumera acciones puras")

    inside = _membership(S, tolerance)
    M = np.array([[inside(g.payoffs[i, j]) for j in range(g.n)] for i in range(g.m)])

    if isinstance(S, Halfspace):
        enlarged = Halfspace(S.normal, S.offset + enlargement)
        inside_big = _membership(enlarged, tolerance)
    else:
        inside_big = _membership(S, tolerance + enlargement)
    M_big = np.array([[inside_big(g.payoffs[i, j]) for j in range(g.n)] for i in range(g.m)])

    x_one = bool(np.any(M.all(axis=1)))
    y_two_complement = bool(np.all((~M).any(axis=1)))
    x_one_big = bool(np.any(M_big.all(axis=1)))
    x_two = bool(np.all(M.any(axis=0)))

    # Conjuntos minimales que 𝒴 2-fuerza: {F[i][σ(i)]} para cada σ: filas -> columnas
    meets_all = all(
        any(M[i, sigma[i]] for i in range(g.m))
        for sigma in itertools.product(range(g.n), repeat=g.m)
    )

    properties = [
        {"property": 1, "statement": "x 1-fuerza S <=> y no 2-fuerza S^c",
         "lhs": x_one, "rhs": not y_two_complement, "consistent": x_one == (not y_two_complement)},
        {"property": 2, "statement": "x 1-fuerza S => x 1-fuerza S' ⊇ S",
         "lhs": x_one, "rhs": x_one_big, "consistent": (not x_one) or x_one_big},
        {"property": 3, "statement": "x 1-fuerza S <=> S corta todo conjunto 2-forzable por y",
         "lhs": x_one, "rhs": meets_all, "consistent": x_one == meets_all},
        {"property": 4, "statement": "x 1-fuerza S => x 2-fuerza S",
         "lhs": x_one, "rhs": x_two, "consistent": (not x_one) or x_two},
    ]
    violations = [p["property"] for p in properties if not p["consistent"]]
    return {"properties": properties, "violations": violations, "consistent": not violations}


def halfspace_minimax_check(g: Game, H: Halfspace, config: Optional[Dict] = None) -> Dict:
    """
    En juegos con propiedad minimax, 2-forzar H implica 1-forzarlo.

    Returns:
        {"two_force", "one_force", "consistent"}
    """
    two = x_two_forces_halfspace(g, H, config) is not None
    one = x_one_forces_halfspace(g, H, config) is not None
    return {"two_force": two, "one_force": one, "consistent": (not two) or one}


def g_s_gap(g: Game, S: TargetSet, directions: np.ndarray, mixed_steps: int = 10) -> Dict:
    """
    Compara inf_x sup_y sup_λ g_S con sup_y inf_x sup_λ g_S.

    El supremo en λ recorre la malla más λ = 0; x e y recorren las acciones
    puras (juego puro) o una malla del símplex (juego mixto).

    Returns:
        {"inf_sup", "sup_inf", "gap"}
    """
    xs, ys = action_set(g, mixed_steps if g.mode == "mixed" else 0)
    directions = np.atleast_2d(directions)
    table = np.zeros((len(xs), len(ys)))
    for a, x in enumerate(xs):
        for b, y in enumerate(ys):
            best = 0.0
            for lam in directions:
                best = max(best, g_S(g, x, y, lam, S))
            table[a, b] = best
    inf_sup = float(table.max(axis=1).min())
    sup_inf = float(table.min(axis=0).max())
    return {"inf_sup": inf_sup, "sup_inf": sup_inf, "gap": inf_sup - sup_inf}
