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
BlackwellLab - Adversarios Registrados
Jugadores con la interfaz act(history, opponent) -> Action usados contra
𝔤* y 𝔥*: aleatorio, mejor respuesta, guion, fijo, maximin y el
aproximador de mejor respuesta.
"""


import json
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from src.core.config import section
from src.core.errors import ParseError, ValidationError
from src.games.game import Game, Action, Pure, Mixed, payoff, action_from_dict, lower_value
from src.geometry.operations import project, direction_grid, support_function
from src.geometry.sets import TargetSet
from src.solvers.matrix_game import matrix_game
from src.approach.trajectory import Trajectory, arbitrary_action


ADVERSARIES = ("random", "bestresponse", "hstar", "maximin", "uniform", "fixed:J", "script:FILE")


def _next_distance(history: Trajectory, target: TargetSet, z: np.ndarray,
                   config: Optional[Dict]) -> float:
    t = history.t
    phi = z if t == 0 else (t * history.phi + z) / (t + 1)
    return project(phi, target, config).distance


class RandomAdversary:
    """Columna pura uniforme en cada ronda."""

    name = "random"
    side = "y"

    def __init__(self, game: Game, rng: np.random.Generator):
        self.game = game
        self.rng = rng

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        return Pure(int(self.rng.integers(self.game.n)))


class BestResponseAdversary:
    """
    Elige la columna pura que más aleja φ_{t+1} de S.

    Si no ve x_{t+1}, maximiza la peor distancia sobre las filas puras.
    """

    name = "bestresponse"
    side = "y"

    def __init__(self, game: Game, target: TargetSet, config: Optional[Dict] = None):
        self.game = game
        self.target = target
        self.config = config

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        g = self.game
        rows = [opponent] if opponent is not None else [Pure(i) for i in range(g.m)]
        scores = [
            min(_next_distance(history, self.target, payoff(g, x, Pure(j)), self.config) for x in rows)
            for j in range(g.n)
        ]
        return Pure(int(np.argmax(scores)))


class BestResponseApproacher:
    """Fila pura que más acerca φ_{t+1} a S (jugador 𝒳)."""

    name = "bestresponse-approacher"
    side = "x"

    def __init__(self, game: Game, target: TargetSet, config: Optional[Dict] = None):
        self.game = game
        self.target = target
        self.config = config

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        g = self.game
        columns = [opponent] if opponent is not None else [Pure(j) for j in range(g.n)]
        scores = [
            max(_next_distance(history, self.target, payoff(g, Pure(i), y), self.config) for y in columns)
            for i in range(g.m)
        ]
        return Pure(int(np.argmin(scores)))


class ScriptedPlayer:
    """Repite cíclicamente una lista de acciones."""

    name = "script"

    def __init__(self, actions: List[Action], side: str = "y"):
        if not actions:
            raise ValidationError("Guion sin acciones", invariant="script-nonempty")
        self.actions = list(actions)
        self.side = side

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        return self.actions[history.t % len(self.actions)]


class FixedPlayer:
    """Juega siempre la misma acción."""

    name = "fixed"

    def __init__(self, action: Action, side: str = "y"):
        self.action = action
        self.side = side

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        return self.action


class MaximinPlayer:
    """
    𝒴 se compromete con la jugada maximin del juego escalar en la dirección
    λ* que maximiza valor inferior menos σ_S(λ) sobre la malla.
    """

    name = "maximin"
    side = "y"

    def __init__(self, game: Game, target: TargetSet, config: Optional[Dict] = None):
        self.game = game
        directions = direction_grid(game.d, generators=game.vertices, config=config)
        margins = [lower_value(game, lam, config) - support_function(target, lam) for lam in directions]
        self.direction = directions[int(np.argmax(margins))]
        G = game.payoffs @ self.direction
        if game.mode == "pure":
            self.action = Pure(int(np.argmax(G.min(axis=0))))
        else:
            self.action = Mixed(matrix_game(G, config).col_strategy)

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        return self.action


def load_script(path) -> List[Action]:
    """
    Lee un guion JSON: lista de índices o de descriptores {"pure"|"mixed"}.

    Raises:
        ParseError: archivo ilegible o JSON inválido, con ubicación
        ValidationError: acción inválida
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"Guion inválido: {e.msg}", location=f"{path}:{e.lineno}:{e.colno}")
    except OSError as e:
        raise ParseError(f"No se pudo leer el guion: {e}", location=str(path))
    if not isinstance(data, list):
        raise ParseError("El guion debe ser una lista de acciones", location=str(path))
    return [Pure(item) if isinstance(item, int) else action_from_dict(item) for item in data]


def make_adversary(spec: str, game: Game, target: TargetSet,
                   rng: Optional[np.random.Generator] = None,
                   config: Optional[Dict] = None, decomposition=None,
                   run_id: str = "local"):
    """
    Construye un adversario 𝒴 a partir de su nombre registrado.

    Args:
        spec: random | bestresponse | hstar | maximin | uniform | fixed:J | script:FILE
        rng: Generador para el adversario aleatorio
        decomposition: Descomposición de pelado ya calculada (hstar)
    """
    if spec == "random":
        return RandomAdversary(game, rng if rng is not None else np.random.Generator(np.random.Philox(0)))
    if spec == "bestresponse":
        return BestResponseAdversary(game, target, config)
    if spec == "maximin":
        return MaximinPlayer(game, target, config)
    if spec == "uniform":
        return FixedPlayer(arbitrary_action(game, "y"))
    if spec == "hstar":
        from src.avoid.hstar import HStar
        from src.avoid.onion import peel
        if decomposition is None:
            decomposition = peel(game, target, config, run_id=run_id)
        return HStar(game, decomposition, config, run_id)
    if spec.startswith("fixed:"):
        try:
            return FixedPlayer(Pure(int(spec.split(":", 1)[1])))
        except ValueError:
            raise ValidationError(f"Índice fijo inválido: {spec}", invariant="adversary-spec")
    if spec.startswith("script:"):
        return ScriptedPlayer(load_script(spec.split(":", 1)[1]))
    raise ValidationError(f"Adversario desconocido: {spec}", invariant="adversary-spec")
