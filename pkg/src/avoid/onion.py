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
BlackwellLab - Pelado en Cáscaras
Itera S_{i+1} = 𝒱_{1/(i+1)}(S_i) hasta vaciar la nube (evitable) o hasta
estabilizarse con un barrido final sin contraejemplos (A-conjunto
aproximado), y define δ(S), T(S) y el índice de cáscara ℐ_S(φ).
"""


import math
from typing import Dict, List, Optional

import numpy as np
from tqdm import tqdm

from src.core.config import section
from src.core.errors import EmptySet, StageBudgetExceeded
from src.core.logger import get_logger
from src.games.game import Game
from src.geometry.operations import cloud_distances, hausdorff
from src.geometry.sets import PointCloud, TargetSet, as_point
from src.avoid.shrinkage import (
    Counterexample, epsilon_of_tau, find_counterexample, shrink, _as_cloud, _default_directions
)


EMPTY = "empty"
A_SET = "a_set"
UNDETERMINED = "undetermined"


class PeelStage:
    """Etapa i: nube S_i, tolerancia 1/(i+1) y certificados de lo retirado."""

    def __init__(self, index: int, cloud: PointCloud, tolerance: float,
                 certificates: List[Counterexample], removed: int):
        self.index = index
        self.cloud = cloud
        self.tolerance = tolerance
        self.certificates = certificates
        self.removed = removed

    def to_dict(self) -> Dict:
        return {
            "index": self.index,
            "tolerance": self.tolerance,
            "size": self.cloud.size,
            "removed": self.removed,
            "certificates": [ce.to_dict() for ce in self.certificates],
        }


class OnionDecomposition:
    """
    Resultado del pelado.

    classification: "empty" (S_N = ∅, evitable), "a_set" (residuo estable) o
    "undetermined" (sólo en la descomposición parcial de StageBudgetExceeded).
    """

    def __init__(self, stages: List[PeelStage], classification: str, gamma: float,
                 N: Optional[int] = None, residual: Optional[PointCloud] = None,
                 tau_min: Optional[float] = None):
        self.stages = stages
        self.classification = classification
        self.gamma = gamma
        self.N = N
        self.residual = residual
        self.tau_min = tau_min
        if classification == EMPTY:
            self.delta = epsilon_of_tau(1.0 / N, gamma)
            self.horizon: Optional[int] = math.ceil(8.0 / self.delta)
        else:
            self.delta = 0.0
            self.horizon = None

    @property
    def is_empty(self) -> bool:
        return self.classification == EMPTY

    def certificates(self, stage: int) -> List[Counterexample]:
        return self.stages[stage].certificates if 0 <= stage < len(self.stages) else []

    def to_dict(self) -> Dict:
        return {
            "classification": self.classification,
            "N": self.N,
            "delta": self.delta,
            "horizon": self.horizon,
            "tau_min": self.tau_min,
            "residual_size": self.residual.size if self.residual is not None else None,
            "stages": [s.to_dict() for s in self.stages],
        }


def peel(g: Game, S: TargetSet, config: Optional[Dict] = None,
         directions: Optional[np.ndarray] = None, stage_budget: Optional[int] = None,
         run_id: str = "local", progress: bool = False) -> OnionDecomposition:
    """
    Pela S en cáscaras.

    Se detiene cuando la nube queda vacía (Empty(N)), o cuando dos etapas
    seguidas no retiran nada y un barrido a τ_min = 1/(I_max+1) no encuentra
    contraejemplos (A-conjunto aproximado).

    Raises:
        StageBudgetExceeded: tras I_max etapas sin decidir; lleva la
            descomposición parcial
    """
    logger = get_logger()
    budget = int(stage_budget or section(config, "peel")["stage_budget"])
    tau_min = 1.0 / (budget + 1)
    if directions is None:
        directions = _default_directions(g, config)
    cloud = _as_cloud(S, config)
    stages: List[PeelStage] = []

    if cloud.is_empty():
        raise EmptySet("Pelado de un conjunto vacío")

    logger.info(f"Pelado de {cloud.size} puntos con hasta {budget} etapas")
    quiet = 0
    for i in tqdm(range(budget), desc="pelado", disable=not progress, leave=False):
        tau = 1.0 / (i + 1)
        shrunk, certificates = shrink(g, cloud, tau, directions, config, run_id)
        removed = cloud.size - shrunk.size
        stages.append(PeelStage(i, cloud, tau, certificates, removed))
        logger.log_stage(run_id, i, tau, removed, shrunk.size)

        if shrunk.is_empty():
            logger.log_peel_result(run_id, EMPTY, i + 1, {"N": i + 1})
            return OnionDecomposition(stages, EMPTY, g.gamma, N=i + 1, tau_min=tau_min)

        quiet = quiet + 1 if removed == 0 else 0
        cloud = shrunk
        if quiet >= 2 and find_counterexample(g, cloud, tau_min, directions, config) is None:
            logger.log_peel_result(run_id, A_SET, i + 1, {"residual": cloud.size})
            return OnionDecomposition(stages, A_SET, g.gamma, residual=cloud, tau_min=tau_min)

    partial = OnionDecomposition(stages, UNDETERMINED, g.gamma, residual=cloud, tau_min=tau_min)
    logger.log_peel_result(run_id, UNDETERMINED, budget, {"remaining": cloud.size})
    raise StageBudgetExceeded(f"Sin decisión tras {budget} etapas", partial=partial,
                              details={"remaining": cloud.size})


def rind_index(dec: OnionDecomposition, phi) -> float:
    """
    ℐ_S(φ): -1 si φ ∉ (S_0)_δ, el mayor i con φ ∈ (S_i)_δ, o ∞ si la
    descomposición no terminó vacía.
    """
    if not dec.is_empty:
        return math.inf
    phi = as_point(phi, "φ")
    index = -1
    for stage in dec.stages:
        if stage.cloud.is_empty():
            break
        if cloud_distances(stage.cloud, phi)[0] > dec.delta:
            break
        index = stage.index
    return index


def stage_hausdorff(dec: OnionDecomposition) -> List[float]:
    """Δ(S_i, S_{i+1}) entre etapas consecutivas no vacías."""
    clouds = [s.cloud for s in dec.stages]
    if dec.residual is not None:
        clouds.append(dec.residual)
    gaps = []
    for a, b in zip(clouds[:-1], clouds[1:]):
        if a.is_empty() or b.is_empty():
            break
        gaps.append(hausdorff(a, b))
    return gaps
