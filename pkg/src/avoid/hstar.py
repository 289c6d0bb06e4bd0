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
BlackwellLab - Estrategia de Evitación 𝔥*
Antes de T(S) juega arbitrariamente; después, cada vez que cambia el índice
de cáscara ℐ_S(φ_t) elige un contraejemplo almacenado cercano y empuja con
él, forzando H^c en una ronda si es posible.
"""


import math
from typing import Dict, Optional

import numpy as np

from src.core.errors import CertificateMiss
from src.core.logger import get_logger
from src.games.forcing import ForceCertificate
from src.games.game import Game, Action
from src.approach.trajectory import Trajectory, arbitrary_action
from src.avoid.drive import forcing_certificate
from src.avoid.onion import OnionDecomposition, rind_index
from src.avoid.shrinkage import Counterexample, epsilon_of_tau


class HStar:
    """
    Estrategia 𝔥* del jugador 𝒴 sobre una descomposición ya pelada.

    Con ℐ = -1 continúa el último empuje (o juega arbitrariamente); ante un
    CertificateMiss repite el último empuje y, si no lo hay, usa el
    contraejemplo más cercano con holgura suficiente.
    """

    name = "hstar"
    side = "y"

    def __init__(self, game: Game, decomposition: OnionDecomposition,
                 config: Optional[Dict] = None, run_id: str = "local"):
        self.game = game
        self.dec = decomposition
        self.config = config
        self.run_id = run_id
        self.horizon = decomposition.horizon
        self.fallback = arbitrary_action(game, "y")
        self.logger = get_logger()

        self.certificates = [ce for stage in decomposition.stages for ce in stage.certificates]
        self._psis = (np.array([ce.psi for ce in self.certificates])
                      if self.certificates else np.zeros((0, game.d)))
        self._slacks = np.array([ce.tau for ce in self.certificates])

        self._drive: Optional[ForceCertificate] = None
        self._drive_source: Optional[Counterexample] = None
        self._prev_index = None
        self.miss_count = 0
        self.drives_started = 0
        self.last_decision: Dict = {}

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        t = history.t
        self.last_decision = {"rind": None, "drive": False}
        if self.horizon is None or t < self.horizon:
            return self.fallback

        index = rind_index(self.dec, history.phi)
        previous = self._prev_index
        self._prev_index = index
        self.last_decision["rind"] = index if math.isfinite(index) else None

        if t == self.horizon or index != previous:
            self._select(history.phi, index, previous, t)

        if self._drive is None:
            return self.fallback
        self.last_decision["drive"] = True
        if self._drive.order == 1:
            return self._drive.witness
        return self._drive.respond(opponent if opponent is not None
                                   else arbitrary_action(self.game, "x"))

    def _select(self, phi: np.ndarray, index, previous, t: int):
        if index == -1:
            return
        if not math.isfinite(index):
            self._drive = None
            return

        reference = previous if isinstance(previous, int) and previous >= 0 else index
        needed = 1.0 / (reference + 1)
        radius = 2.0 * epsilon_of_tau(1.0 / (index + 1), self.game.gamma)
        if not self.certificates:
            self._miss(phi, index, t, None)
            return

        gaps = np.linalg.norm(self._psis - phi, axis=1)
        enough = self._slacks >= needed - 1e-12
        close = enough & (gaps <= radius)
        if close.any():
            chosen = int(np.flatnonzero(close)[np.argmin(gaps[close])])
        else:
            self._miss(phi, index, t, float(gaps.min()))
            if self._drive is not None or not enough.any():
                return
            chosen = int(np.flatnonzero(enough)[np.argmin(gaps[enough])])

        ce = self.certificates[chosen]
        try:
            self._drive = forcing_certificate(self.game, ce, self.config)
        except CertificateMiss as e:
            self.logger.log_error_with_context(e, {"t": t, "rind": index})
            return
        self._drive_source = ce
        self.drives_started += 1
        self.logger.log_drive(self.run_id, "started", {"t": t, "rind": index, "psi": ce.psi,
                                                       "tau": ce.tau, "order": self._drive.order})

    def _miss(self, phi: np.ndarray, index, t: int, nearest: Optional[float]):
        self.miss_count += 1
        self.logger.log_certificate_miss(self.run_id, t, index, nearest,
                                         self._drive is not None, phi=phi)


def h_star_step(g: Game, dec: OnionDecomposition, history: Trajectory,
                config: Optional[Dict] = None) -> Action:
    """
    Decisión de 𝔥* para la ronda history.t + 1 sin estado previo: el
    índice anterior se recalcula desde φ_{t-1} y no hay empuje que repetir.
    """
    player = HStar(g, dec, config)
    t = history.t
    if player.horizon is not None and t > player.horizon and t >= 2:
        player._prev_index = rind_index(dec, history.rounds[-2].phi)
    return player.act(history)
