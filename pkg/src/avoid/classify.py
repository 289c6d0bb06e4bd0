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
BlackwellLab - Clasificación Aproximable / Evitable
"""


from typing import Dict, Optional

import numpy as np

from src.core.logger import get_logger
from src.games.game import Game, minimax_gap
from src.geometry.operations import direction_grid
from src.geometry.sets import TargetSet
from src.avoid.onion import OnionDecomposition, peel


APPROACHABLE = "approachable"
AVOIDABLE = "avoidable"
UNDECIDED = "undecided"


class Classification:
    """Veredicto con la estrategia que lo respalda (gstar, hstar o ninguna)."""

    def __init__(self, verdict: str, strategy: Optional[str] = None,
                 decomposition: Optional[OnionDecomposition] = None,
                 gap: Optional[float] = None):
        self.verdict = verdict
        self.strategy = strategy
        self.decomposition = decomposition
        self.gap = gap

    def to_dict(self) -> Dict:
        body = {"verdict": self.verdict, "strategy": self.strategy}
        if self.gap is not None:
            body["minimax_gap"] = self.gap
        if self.decomposition is not None:
            dec = self.decomposition
            body.update({"N": dec.N, "delta": dec.delta, "horizon": dec.horizon,
                         "stages": len(dec.stages)})
        return body


def classify(g: Game, S: TargetSet, config: Optional[Dict] = None,
             directions: Optional[np.ndarray] = None, run_id: str = "local",
             progress: bool = False) -> Classification:
    """
    Juego mixto: pela S; vacío => evitable con 𝔥*, residuo => aproximable con 𝔤*.
    Juego puro: sin propiedad minimax garantizada; devuelve Undecided con la
    mayor brecha minimax sobre la malla.
    """
    logger = get_logger()
    if directions is None:
        directions = direction_grid(g.d, generators=g.vertices, config=config)

    if g.mode == "pure":
        gap = max(minimax_gap(g, lam, config) for lam in np.atleast_2d(directions))
        logger.info(f"Juego puro: brecha minimax {gap:.6g}, sin veredicto")
        return Classification(UNDECIDED, gap=float(gap))

    dec = peel(g, S, config, directions, run_id=run_id, progress=progress)
    if dec.is_empty:
        logger.info(f"Evitable: N = {dec.N}, δ = {dec.delta:.6g}, T = {dec.horizon}")
        return Classification(AVOIDABLE, "hstar", dec)
    logger.info(f"Aproximable: residuo de {dec.residual.size} puntos")
    return Classification(APPROACHABLE, "gstar", dec)
