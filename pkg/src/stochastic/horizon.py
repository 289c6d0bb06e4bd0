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
BlackwellLab - Horizonte de Hoeffding y Auditoría de Desviación
Cota de rondas a partir de la cual la media realizada queda a menos de ε de
la media esperada con probabilidad >= 1 - ε, y su verificación Monte Carlo.
"""


import math
from typing import Dict, List, Optional

import numpy as np
import scipy.stats

from src.core.errors import NonPositiveInput
from src.core.logger import get_logger
from src.stochastic.sampling import SampledRound


def hoeffding_horizon(eps: float, gamma: float, d: int) -> int:
    """
    Menor N con N >= (γ²/2ε²)·ln(2d / (ε(1 - exp(-ε²/(2γ²))))).

    Raises:
        NonPositiveInput: ε fuera de (0,1), γ <= 0 o d < 1
    """
    if not 0.0 < eps < 1.0:
        raise NonPositiveInput(f"ε debe estar en (0,1): {eps}", {"epsilon": eps})
    if gamma <= 0.0:
        raise NonPositiveInput(f"γ debe ser positivo: {gamma}", {"gamma": gamma})
    if d < 1:
        raise NonPositiveInput(f"d debe ser >= 1: {d}", {"d": d})

    tail = -math.expm1(-eps * eps / (2.0 * gamma * gamma))
    bound = (gamma * gamma / (2.0 * eps * eps)) * math.log(2.0 * d / (eps * tail))
    return max(1, math.ceil(bound))


def clopper_pearson_upper(k: int, n: int, alpha: float) -> float:
    """Cota superior unilateral de Clopper-Pearson para k éxitos en n ensayos."""
    if k >= n:
        return 1.0
    return float(scipy.stats.beta.ppf(1 - alpha, k + 1, n - k))


def deviation_event(rounds: List[SampledRound], eps: float, N: int) -> bool:
    """¿Existe n >= N con ‖media realizada - media esperada‖ >= ε?"""
    for r in rounds[N - 1:]:
        if np.linalg.norm(r.empirical_mean - r.expected_mean) >= eps:
            return True
    return False


def deviation_audit(runs: List[List[SampledRound]], eps: float, N: int,
                    band_sigma: float = 3.0, alpha: Optional[float] = None) -> Dict:
    """
    Frecuencia empírica del evento de desviación sobre un lote de corridas.

    PASS si la frecuencia es <= ε + band_sigma·sqrt(ε(1-ε)/R). Las corridas
    más cortas que N no se cuentan y quedan en "short".

    Args:
        runs: Corridas sembradas de forma independiente
        alpha: Si se indica, añade la cota de Clopper-Pearson al informe
    """
    logger = get_logger()
    usable = [run for run in runs if len(run) >= N]
    short = len(runs) - len(usable)
    if short:
        logger.warning(f"{short} corridas con menos de {N} rondas excluidas de la auditoría")

    total = len(usable)
    events = sum(1 for run in usable if deviation_event(run, eps, N))
    frequency = events / total if total else 0.0
    band = band_sigma * math.sqrt(eps * (1.0 - eps) / total) if total else 0.0
    report = {
        "epsilon": eps,
        "N": N,
        "runs": total,
        "short": short,
        "events": events,
        "frequency": frequency,
        "band": band,
        "passed": total > 0 and frequency <= eps + band,
    }
    if alpha is not None and total:
        report["clopper_pearson_upper"] = clopper_pearson_upper(events, total, alpha)
    logger.info(f"Auditoría de desviación: {events}/{total} eventos, "
                f"frecuencia {frequency:.4f} (límite {eps + band:.4f})")
    return report
