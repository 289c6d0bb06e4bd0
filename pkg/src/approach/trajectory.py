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
BlackwellLab - Trayectorias de Juego Repetido
Historial ℋ_t de una corrida: acciones, pagos, media móvil φ_t y su
distancia al conjunto objetivo.
"""


import math
from typing import Dict, List, Optional

import numpy as np

from src.games.game import Game, Action, Pure, Mixed, payoff
from src.geometry.operations import project
from src.geometry.sets import TargetSet


class Round:
    """Una ronda t ya jugada."""

    __slots__ = ("t", "x", "y", "payoff", "phi", "dist", "rind", "info")

    def __init__(self, t: int, x: Action, y: Action, payoff: np.ndarray, phi: np.ndarray,
                 dist: float, rind=None, info: Optional[Dict] = None):
        self.t = t
        self.x = x
        self.y = y
        self.payoff = payoff
        self.phi = phi
        self.dist = dist
        self.rind = rind
        self.info = info or {}

    def to_dict(self) -> Dict:
        return {
            "t": self.t,
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
            "payoff": self.payoff.tolist(),
            "phi": self.phi.tolist(),
            "dist": self.dist,
            "rind": self.rind,
        }


class Trajectory:
    """
    Historial de una corrida.

    φ_{t+1} = (t·φ_t + f(x_{t+1}, y_{t+1}))/(t+1), con la distancia a S
    calculada por la misma rutina de proyección que usan las estrategias.
    """

    def __init__(self, game: Game, target: Optional[TargetSet] = None,
                 config: Optional[Dict] = None):
        self.game = game
        self.target = target
        self.config = config
        self.rounds: List[Round] = []

    @property
    def t(self) -> int:
        return len(self.rounds)

    @property
    def phi(self) -> Optional[np.ndarray]:
        return self.rounds[-1].phi if self.rounds else None

    @property
    def last(self) -> Optional[Round]:
        return self.rounds[-1] if self.rounds else None

    def append(self, x: Action, y: Action, z: Optional[np.ndarray] = None,
               info: Optional[Dict] = None) -> Round:
        """
        Registra la ronda t+1.

        Args:
            x: Acción de 𝒳
            y: Acción de 𝒴
            z: Pago ya calculado (por defecto payoff(g, x, y))
            info: Decisiones de las estrategias para auditoría
        """
        if z is None:
            z = payoff(self.game, x, y)
        z = np.asarray(z, dtype=float)
        t = len(self.rounds)
        if t == 0:
            phi = z.copy()
        else:
            phi = (t * self.rounds[-1].phi + z) / (t + 1)
        dist = project(phi, self.target, self.config).distance if self.target is not None else math.nan
        info = dict(info or {})
        record = Round(t + 1, x, y, z, phi, dist, info.pop("rind", None), info)
        self.rounds.append(record)
        return record

    def phis(self) -> np.ndarray:
        if not self.rounds:
            return np.zeros((0, self.game.d))
        return np.array([r.phi for r in self.rounds])

    def payoffs(self) -> np.ndarray:
        if not self.rounds:
            return np.zeros((0, self.game.d))
        return np.array([r.payoff for r in self.rounds])

    def distances(self) -> np.ndarray:
        return np.array([r.dist for r in self.rounds])

    def __len__(self):
        return len(self.rounds)


def arbitrary_action(g: Game, side: str) -> Action:
    """Acción "arbitraria": uniforme en juegos mixtos, índice 0 en juegos puros."""
    size = g.m if side == "x" else g.n
    if g.mode == "mixed":
        return Mixed.uniform(size)
    return Pure(0)
