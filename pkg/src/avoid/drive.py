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
BlackwellLab - Empuje Antiforzante
Dado un contraejemplo (φ,ψ,H) y un punto de partida p cercano a ψ, 𝒴 fuerza
H^c ronda a ronda hasta que la media parcial q_i se acerca a φ en ε(τ).
"""


from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import CertificateMiss, DriveOverrun
from src.core.logger import get_logger
from src.games.forcing import ForceCertificate, y_one_forces_complement, y_two_forces_complement
from src.games.game import Game, Action, payoff
from src.geometry.sets import as_point
from src.avoid.shrinkage import Counterexample, epsilon_of_tau, drive_budget


XStream = Callable[[np.ndarray, int], Action]


class DriveResult:
    """Acciones jugadas, rondas M y distancias inicial/final a φ."""

    def __init__(self, actions: List[Tuple[Action, Action]], M: int, start_distance: float,
                 end_distance: float, target_distance: float, epsilon: float, bound: int,
                 one_forcing: bool):
        self.actions = actions
        self.M = M
        self.start_distance = start_distance
        self.end_distance = end_distance
        self.target_distance = target_distance
        self.epsilon = epsilon
        self.bound = bound
        self.one_forcing = one_forcing

    @property
    def y_actions(self) -> List[Action]:
        return [y for _, y in self.actions]

    def to_dict(self) -> Dict:
        return {
            "M": self.M,
            "bound": self.bound,
            "epsilon": self.epsilon,
            "start_distance": self.start_distance,
            "end_distance": self.end_distance,
            "target_distance": self.target_distance,
            "one_forcing": self.one_forcing,
        }


def forcing_certificate(g: Game, ce: Counterexample,
                        config: Optional[Dict] = None) -> ForceCertificate:
    """
    Certificado de 𝒴 para H^c: un único ȳ si existe, si no una respuesta
    a cada x.

    Raises:
        CertificateMiss: 𝒴 no puede forzar H^c (el contraejemplo no lo es)
    """
    certificate = y_one_forces_complement(g, ce.H, config)
    if certificate is None:
        certificate = y_two_forces_complement(g, ce.H, config)
    if certificate is None:
        raise CertificateMiss("El contraejemplo no permite forzar H^c", {"certificate": ce.to_dict()})
    return certificate


def antiforce_drive(g: Game, ce: Counterexample, p, T: int, x_stream: XStream,
                    config: Optional[Dict] = None, run_id: str = "local") -> DriveResult:
    """
    Empuje de 𝒴 desde p con peso T.

    q_i = (Tp + Σ_{j<=i} f(x_j, y_j))/(T+i); se detiene en el primer M con
    ‖φ - q_M‖ <= ρ(φ,S) - ε(τ), donde ρ(φ,S) = ‖φ - ψ‖.

    Args:
        ce: Contraejemplo certificado
        p: Punto de partida en B(ψ, 2ε(τ))
        T: Peso de p (>= ⌈8/ε(τ)⌉)
        x_stream: Función (q, i) -> x_i con las acciones de 𝒳

    Raises:
        DriveOverrun: si M supera ⌈8Tγ/ε⌉
    """
    logger = get_logger()
    p = as_point(p, "p")
    epsilon = epsilon_of_tau(ce.tau, g.gamma)
    bound = drive_budget(T, g.gamma, epsilon)
    certificate = forcing_certificate(g, ce, config)
    one_forcing = certificate.order == 1

    rho = float(np.linalg.norm(ce.phi - ce.psi))
    target_distance = rho - epsilon
    start_distance = float(np.linalg.norm(ce.phi - p))
    logger.log_drive(run_id, "started", {"psi": ce.psi, "tau": ce.tau, "T": T, "bound": bound,
                                         "one_forcing": one_forcing})

    total = T * p
    q = p.copy()
    actions: List[Tuple[Action, Action]] = []
    for i in range(1, bound + 1):
        x = x_stream(q, i)
        y = certificate.respond(x)
        total = total + payoff(g, x, y)
        q = total / (T + i)
        actions.append((x, y))
        distance = float(np.linalg.norm(ce.phi - q))
        if distance <= target_distance:
            result = DriveResult(actions, i, start_distance, distance, target_distance,
                                 epsilon, bound, one_forcing)
            logger.log_drive(run_id, "completed", result.to_dict())
            return result

    logger.log_drive_overrun(run_id, bound, {"psi": ce.psi, "tau": ce.tau})
    raise DriveOverrun(f"El empuje no terminó en {bound} rondas", bound=bound, steps=bound,
                       details={"certificate": ce.to_dict()})
