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
BlackwellLab - Estrategia de Aproximación 𝔤*
Búsqueda de ejemplos de forzamiento por semiespacio y la estrategia que
juega, en cada ronda, el testigo que 1-fuerza el semiespacio encontrado.
"""


from typing import Dict, Optional, Union as TypingUnion

import numpy as np

from src.core.config import section
from src.core.errors import DegenerateDirection, NonPositiveInput
from src.core.logger import get_logger
from src.games.game import Game, Action, Pure, Mixed, solve_scalarized
from src.geometry.operations import project
from src.geometry.sets import Halfspace, PointCloud, TargetSet, Union, as_point
from src.approach.schedule import ToleranceSchedule, GeometricHalving
from src.approach.trajectory import Trajectory, arbitrary_action


FORCE_TOLERANCE = 1e-9
# γ·2^{-t} es 0.0 en coma flotante a partir de t ~ 1075
TAU_FLOOR = 1e-300


class HalfspaceForcingExample:
    """(φ, ψ, H) con testigo que 1-fuerza H y holgura ρ(ψ, H^c)."""

    found = True

    def __init__(self, phi: np.ndarray, psi: np.ndarray, H: Halfspace, witness: Action,
                 slack: float, value: float):
        self.phi = phi
        self.psi = psi
        self.H = H
        self.witness = witness
        self.slack = slack
        self.value = value

    def to_dict(self) -> Dict:
        return {
            "phi": self.phi.tolist(),
            "psi": self.psi.tolist(),
            "lambda": self.H.normal.tolist(),
            "c": self.H.offset,
            "slack": self.slack,
            "value": self.value,
            "witness": self.witness.to_dict(),
        }


class NotASetEvidence:
    """
    Contraejemplo implícito: 𝒳 no puede 1-forzar ningún H con holgura <= τ
    que pase por [φ, ψ).
    """

    found = False

    def __init__(self, phi: np.ndarray, psi: np.ndarray, H: Halfspace, value: float, tau: float):
        self.phi = phi
        self.psi = psi
        self.H = H
        self.value = value
        self.tau = tau

    @property
    def slack(self) -> float:
        return float(self.H.offset - self.H.normal @ self.psi)

    def to_dict(self) -> Dict:
        return {
            "phi": self.phi.tolist(),
            "psi": self.psi.tolist(),
            "lambda": self.H.normal.tolist(),
            "c": self.H.offset,
            "slack": self.slack,
            "value": self.value,
            "tau": self.tau,
        }


ExampleResult = TypingUnion[HalfspaceForcingExample, NotASetEvidence]


def find_example(g: Game, S: TargetSet, phi, tau: float,
                 config: Optional[Dict] = None) -> ExampleResult:
    """
    Busca un ejemplo de forzamiento por semiespacio para φ ∉ S.

    Con ψ = proyección de φ, λ = (φ-ψ)/‖φ-ψ‖ y v el valor del juego escalar,
    la frontera es c = max(⟨λ,ψ⟩, min(v, ⟨λ,ψ⟩+τ)). Es ejemplo si
    v <= c < ⟨λ,φ⟩.

    Args:
        g: Juego
        S: Conjunto objetivo
        phi: Media actual φ
        tau: Holgura máxima τ > 0

    Returns:
        HalfspaceForcingExample o NotASetEvidence

    Raises:
        NonPositiveInput: τ <= 0
        DegenerateDirection: φ prácticamente en S
    """
    if not tau > 0:
        raise NonPositiveInput(f"τ debe ser > 0: {tau}")
    tolerance = section(config, "geometry")["tolerance"]
    phi = as_point(phi, "φ")
    nearest = project(phi, S, config)
    if nearest.distance <= tolerance:
        raise DegenerateDirection(f"‖φ-ψ‖ = {nearest.distance:.3e} <= {tolerance}",
                                  {"phi": phi.tolist()})

    psi = nearest.point
    lam = (phi - psi) / nearest.distance
    solution = solve_scalarized(g, lam, config)
    v = solution.value
    base = float(lam @ psi)
    top = float(lam @ phi)
    c = max(base, min(v, base + tau))

    if v <= c + FORCE_TOLERANCE and c < top:
        if g.mode == "pure":
            witness = Pure(int(np.argmax(solution.row_strategy)))
        else:
            witness = Mixed(solution.row_strategy)
        return HalfspaceForcingExample(phi, psi, Halfspace(lam, c), witness, c - base, v)

    # Semiespacio que atestigua el fallo, estrictamente entre ψ y φ
    offset = min(base + tau, 0.5 * (base + top))
    return NotASetEvidence(phi, psi, Halfspace(lam, offset), v, tau)


def membership_resolution(S: TargetSet, config: Optional[Dict] = None) -> float:
    """Resolución h con la que "φ ∈ S" significa distancia <= h."""
    if isinstance(S, PointCloud):
        return S.resolution
    if isinstance(S, Union):
        clouds = [m.resolution for m in S.members if isinstance(m, PointCloud)]
        if clouds:
            return min(clouds)
    return float(section(config, "geometry")["resolution"])


class GStar:
    """
    Estrategia 𝔤* del jugador 𝒳.

    En la ronda t+1 usa τ_t con t = len(historial). Si φ_t está dentro de S
    (distancia <= h) o no hay historial, juega la acción arbitraria.
    """

    name = "gstar"
    side = "x"

    def __init__(self, game: Game, target: TargetSet,
                 schedule: Optional[ToleranceSchedule] = None,
                 config: Optional[Dict] = None, run_id: str = "local"):
        self.game = game
        self.target = target
        self.schedule = schedule or GeometricHalving(game.gamma)
        self.config = config
        self.run_id = run_id
        self.resolution = membership_resolution(target, config)
        self.fallback = arbitrary_action(game, "x")
        self.logger = get_logger()
        self.last_decision: Dict = {}
        self.evidence_count = 0

    def act(self, history: Trajectory, opponent: Optional[Action] = None) -> Action:
        t = history.t
        self.last_decision = {"tau_t": float("nan"), "example_found": False,
                              "slack": float("nan")}
        if t == 0:
            return self.fallback

        phi = history.phi
        dist = history.last.dist if history.target is self.target else project(
            phi, self.target, self.config).distance
        tau = max(self.schedule.tau(t), TAU_FLOOR)
        self.last_decision["tau_t"] = tau
        if dist <= self.resolution:
            return self.fallback

        result = find_example(self.game, self.target, phi, tau, self.config)
        if result.found:
            self.last_decision.update({"example_found": True, "slack": result.slack,
                                       "example": result})
            self.logger.log_certificate(self.run_id, "EXAMPLE_FOUND", dict(result.to_dict(), t=t))
            return result.witness

        self.evidence_count += 1
        self.last_decision["evidence"] = result
        self.logger.log_certificate(self.run_id, "NOT_A_SET_EVIDENCE", dict(result.to_dict(), t=t))
        return self.fallback


def g_star_step(g: Game, S: TargetSet, history: Trajectory,
                schedule: Optional[ToleranceSchedule] = None,
                config: Optional[Dict] = None) -> Action:
    """Decisión de 𝔤* para la ronda history.t + 1."""
    return GStar(g, S, schedule, config).act(history)
