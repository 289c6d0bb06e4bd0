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
BlackwellLab - Capa Estocástica
Muestrea pagos puros realizados a partir de las distribuciones (μ_t, ν_t)
elegidas por las estrategias y registra la media empírica junto a la media
esperada.

Las estrategias sólo ven el historial de distribuciones: la trayectoria que
reciben es la de pagos esperados, idéntica a la corrida determinista.
"""


from typing import Dict, List, Optional

import numpy as np

from src.core.errors import ValidationError
from src.games.game import Game
from src.geometry.sets import TargetSet
from src.approach.runner import ORDERS
from src.approach.trajectory import Trajectory


ALGORITHMS = {
    "philox": np.random.Philox,
    "pcg64": np.random.PCG64,
}


class SeededSource:
    """Fuente aleatoria reproducible con semilla de 64 bits."""

    def __init__(self, seed: int, algorithm: str = "philox",
                 sequence: Optional[np.random.SeedSequence] = None):
        if algorithm not in ALGORITHMS:
            raise ValidationError(f"Algoritmo aleatorio desconocido: {algorithm}",
                                  invariant="rng-algorithm")
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValidationError(f"La semilla debe ser un entero de 64 bits: {seed}",
                                  invariant="rng-seed")
        self.seed = seed
        self.algorithm = algorithm
        self.sequence = sequence if sequence is not None else np.random.SeedSequence(seed)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(ALGORITHMS[self.algorithm](self.sequence))

    def spawn(self, count: int) -> List["SeededSource"]:
        """Fuentes hijas independientes (mismo resultado para la misma semilla)."""
        children = np.random.SeedSequence(self.seed, spawn_key=self.sequence.spawn_key).spawn(count)
        return [SeededSource(self.seed, self.algorithm, child) for child in children]

    def to_dict(self) -> Dict:
        return {"seed": self.seed, "algorithm": self.algorithm,
                "spawn_key": list(self.sequence.spawn_key)}


def make_generator(seed: int, algorithm: str = "philox") -> np.random.Generator:
    return SeededSource(seed, algorithm).generator()


class SampledRound:
    """Ronda muestreada: distribuciones, índices realizados y ambas medias."""

    __slots__ = ("t", "mu", "nu", "x_index", "y_index", "realized",
                 "empirical_mean", "expected_mean")

    def __init__(self, t: int, mu: np.ndarray, nu: np.ndarray, x_index: int, y_index: int,
                 realized: np.ndarray, empirical_mean: np.ndarray, expected_mean: np.ndarray):
        self.t = t
        self.mu = mu
        self.nu = nu
        self.x_index = x_index
        self.y_index = y_index
        self.realized = realized
        self.empirical_mean = empirical_mean
        self.expected_mean = expected_mean

    def to_dict(self) -> Dict:
        return {
            "t": self.t,
            "mu": self.mu.tolist(),
            "nu": self.nu.tolist(),
            "x": self.x_index,
            "y": self.y_index,
            "realized": self.realized.tolist(),
            "empirical_mean": self.empirical_mean.tolist(),
            "expected_mean": self.expected_mean.tolist(),
        }


def _draw(rng: np.random.Generator, probabilities: np.ndarray) -> int:
    p = np.asarray(probabilities, dtype=float)
    return int(rng.choice(p.size, p=p / p.sum()))


def run_stochastic(g: Game, S: Optional[TargetSet], x_player, y_player, T: int,
                   source: SeededSource, order: str = "x_first",
                   config: Optional[Dict] = None) -> List[SampledRound]:
    """
    Corrida muestreada de T rondas.

    Cada ronda: las estrategias eligen (μ_t, ν_t) sobre el historial de
    distribuciones, se muestrean X_t ~ μ_t e Y_t ~ ν_t de forma independiente
    y se actualizan la media realizada y la esperada.

    Args:
        source: Fuente del muestreador (separada de la de los adversarios)
    """
    if T < 1:
        raise ValidationError(f"T debe ser >= 1: {T}", invariant="rounds-positive")
    if order not in ORDERS:
        raise ValidationError(f"Orden desconocido: {order}", invariant="round-order")

    rng = source.generator()
    traj = Trajectory(g, S, config)
    rounds: List[SampledRound] = []
    empirical = np.zeros(g.d)
    for t in range(1, T + 1):
        if order == "x_first":
            x = x_player.act(traj, None)
            y = y_player.act(traj, x)
        else:
            y = y_player.act(traj, None)
            x = x_player.act(traj, y)
        info = dict(getattr(x_player, "last_decision", {}) or {})
        info.update(getattr(y_player, "last_decision", {}) or {})

        mu = x.distribution(g.m)
        nu = y.distribution(g.n)
        i = _draw(rng, mu)
        j = _draw(rng, nu)
        realized = g.payoffs[i, j].copy()
        empirical = realized.copy() if t == 1 else ((t - 1) * empirical + realized) / t

        record = traj.append(x, y, info=info)
        rounds.append(SampledRound(t, mu, nu, i, j, realized, empirical, record.phi))
    return rounds


def empirical_deviation(rounds: List[SampledRound]) -> np.ndarray:
    """‖media empírica - media esperada‖ en cada ronda."""
    return np.array([float(np.linalg.norm(r.empirical_mean - r.expected_mean)) for r in rounds])
