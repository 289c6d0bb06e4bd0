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
BlackwellLab - Ejecución de Juegos Repetidos
Bucle de rondas entre dos jugadores, la corrida de aproximación con 𝔤* y las
auditorías de potencial, forzamiento y tasa de convergencia.
"""


import math
from typing import Dict, List, Optional

import numpy as np
from tqdm import tqdm

from src.core.errors import NonPositiveInput, ValidationError
from src.core.logger import get_logger
from src.games.game import Game, Pure, expected_payoff
from src.geometry.sets import TargetSet
from src.approach.gstar import GStar, membership_resolution
from src.approach.schedule import ToleranceSchedule
from src.approach.trajectory import Trajectory


ORDERS = ("x_first", "y_first")


def run_game(g: Game, x_player, y_player, T: int, order: str = "x_first",
             target: Optional[TargetSet] = None, config: Optional[Dict] = None,
             progress: bool = False, trajectory: Optional[Trajectory] = None) -> Trajectory:
    """
    Juega T rondas.

    Con order "x_first", 𝒴 ve x_{t+1} antes de responder; con "y_first",
    𝒳 ve y_{t+1}. Ambos ven ℋ_t.

    Args:
        x_player, y_player: Objetos con act(history, opponent) -> Action
        T: Número de rondas (>= 1)
        trajectory: Historial previo a extender

    Returns:
        Trajectory con las T rondas nuevas añadidas
    """
    if T < 1:
        raise ValidationError(f"T debe ser >= 1: {T}", invariant="rounds-positive")
    if order not in ORDERS:
        raise ValidationError(f"Orden desconocido: {order}", invariant="round-order")

    traj = trajectory if trajectory is not None else Trajectory(g, target, config)
    for _ in tqdm(range(T), desc=f"{getattr(x_player, 'name', 'x')} vs "
                                 f"{getattr(y_player, 'name', 'y')}",
                  disable=not progress, leave=False):
        if order == "x_first":
            x = x_player.act(traj, None)
            y = y_player.act(traj, x)
        else:
            y = y_player.act(traj, None)
            x = x_player.act(traj, y)
        info = dict(getattr(x_player, "last_decision", {}) or {})
        info.update(getattr(y_player, "last_decision", {}) or {})
        traj.append(x, y, info=info)
    return traj


def run_approach(g: Game, S: TargetSet, adversary, T: int,
                 schedule: Optional[ToleranceSchedule] = None,
                 config: Optional[Dict] = None, run_id: str = "local",
                 progress: bool = False) -> Trajectory:
    """𝔤* contra un adversario que ve x_{t+1} antes de responder."""
    approacher = GStar(g, S, schedule, config, run_id)
    traj = run_game(g, approacher, adversary, T, "x_first", S, config, progress)
    if approacher.evidence_count:
        get_logger().warning(
            f"Corrida {run_id}: {approacher.evidence_count} rondas sin ejemplo de forzamiento")
    return traj


# --- Auditorías ---

def potential_audit(traj: Trajectory, schedule: ToleranceSchedule, gamma: float,
                    slack: float = 1e-6) -> Dict:
    """
    Verifica ‖φ_t - ψ_t‖² <= (γ² + 2γ Σ_{i<t} τ_i)/t en cada ronda.

    Returns:
        {"rounds", "violations": [{"t", "lhs", "rhs"}], "passed"}
    """
    violations = []
    for record in traj.rounds:
        t = record.t
        lhs = record.dist ** 2
        rhs = (gamma ** 2 + 2.0 * gamma * schedule.prefix_sum(t - 1)) / t
        if lhs > rhs + slack:
            violations.append({"t": t, "lhs": lhs, "rhs": rhs})
    return {"rounds": len(traj), "violations": violations, "passed": not violations}


def force_audit(traj: Trajectory, gamma: float, tolerance: float = 1e-7) -> Dict:
    """
    Para cada ronda con ejemplo (φ,ψ,H) y testigo μ̄, y cada columna pura j:
    ⟨𝖤f(μ̄,e_j) - ψ, φ - ψ⟩ <= τ_t·γ + tol, y 𝖤f(μ̄,e_j) ∈ H.

    Returns:
        {"checked", "violations": [{"t", "column", "excess"}], "passed"}
    """
    g = traj.game
    violations = []
    checked = 0
    for record in traj.rounds:
        example = record.info.get("example")
        if example is None:
            continue
        checked += 1
        tau = record.info.get("tau_t", example.slack)
        mu = example.witness.distribution(g.m)
        for j in range(g.n):
            z = expected_payoff(g, mu, Pure(j).distribution(g.n))
            lhs = float((z - example.psi) @ (example.phi - example.psi))
            excess = lhs - tau * gamma
            if excess > tolerance or not example.H.contains(z, tolerance):
                violations.append({"t": record.t, "column": j, "excess": excess})
    return {"checked": checked, "violations": violations, "passed": not violations}


def rate_horizon(epsilon: float, gamma: float) -> int:
    """⌈3γ²/ε²⌉."""
    if not epsilon > 0 or not gamma > 0:
        raise NonPositiveInput(f"ε y γ deben ser > 0 (ε = {epsilon}, γ = {gamma})")
    return math.ceil(3.0 * gamma ** 2 / epsilon ** 2)


def rate_check(traj: Trajectory, epsilon: float, gamma: float,
               resolution: Optional[float] = None, slack: float = 1e-7,
               run_id: str = "local") -> Dict:
    """
    dist(φ_t, S) <= ε + h + slack para todo t >= ⌈3γ²/ε²⌉.

    Returns:
        {"horizon", "checked", "max_distance", "violations", "passed"}
    """
    horizon = rate_horizon(epsilon, gamma)
    if resolution is None:
        resolution = membership_resolution(traj.target, traj.config)
    limit = epsilon + resolution + slack
    tail = [r for r in traj.rounds if r.t >= horizon]
    violations: List[Dict] = [{"t": r.t, "dist": r.dist} for r in tail if r.dist > limit]
    max_distance = float(max((r.dist for r in tail), default=float("nan")))
    report = {
        "epsilon": epsilon,
        "horizon": horizon,
        "checked": len(tail),
        "limit": limit,
        "max_distance": max_distance,
        "violations": violations,
        "passed": bool(tail) and not violations,
    }
    get_logger().log_rate_check(run_id, report)
    return report


def envelope(schedule: ToleranceSchedule, gamma: float, T: int) -> np.ndarray:
    """√((γ² + 2γ Σ_{i<t} τ_i)/t) para t = 1..T."""
    return np.array([math.sqrt((gamma ** 2 + 2.0 * gamma * schedule.prefix_sum(t - 1)) / t)
                     for t in range(1, T + 1)])
