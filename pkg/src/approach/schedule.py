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
BlackwellLab - Tolerancias
Sucesiones (τ_t) con τ_t > 0 y Σ τ_t <= γ para la estrategia de aproximación.
"""


import math
from typing import Dict, List, Optional, Sequence

from src.core.errors import ValidationError, NonPositiveInput


class ToleranceSchedule:
    """Interfaz común: tau(t) para t >= 1 y sumas parciales."""

    rule = "base"

    def tau(self, t: int) -> float:
        raise NotImplementedError

    def prefix_sum(self, t: int) -> float:
        """Σ_{i=1}^{t} τ_i (0 para t <= 0)."""
        return float(sum(self.tau(i) for i in range(1, t + 1)))

    def to_dict(self) -> Dict:
        return {"rule": self.rule}


class GeometricHalving(ToleranceSchedule):
    """τ_t = γ·2^{-t}."""

    rule = "geometric"

    def __init__(self, gamma: float):
        if not gamma > 0:
            raise NonPositiveInput(f"γ debe ser > 0: {gamma}")
        self.gamma = float(gamma)

    def tau(self, t: int) -> float:
        if t < 1:
            raise ValidationError(f"τ_t definido para t >= 1 (t = {t})", invariant="schedule-index")
        return self.gamma * math.ldexp(1.0, -t)

    def prefix_sum(self, t: int) -> float:
        if t <= 0:
            return 0.0
        return self.gamma * (1.0 - math.ldexp(1.0, -t))

    def to_dict(self) -> Dict:
        return {"rule": self.rule, "gamma": self.gamma}


class CustomSchedule(ToleranceSchedule):
    """
    Lista explícita τ_1..τ_k; después de la lista la última tolerancia se
    divide a la mitad en cada ronda.
    """

    rule = "custom"

    def __init__(self, values: Sequence[float], gamma: Optional[float] = None):
        values = [float(v) for v in values]
        if not values:
            raise ValidationError("Lista de tolerancias vacía", invariant="schedule-nonempty")
        if any(not v > 0 for v in values):
            raise NonPositiveInput(f"Todas las tolerancias deben ser > 0: {values}")
        # La cola geométrica suma exactamente el último valor
        total = sum(values) + values[-1]
        if gamma is not None and total > gamma + 1e-12:
            raise ValidationError(f"Σ τ_t = {total} excede γ = {gamma}", invariant="schedule-sum")
        self.values: List[float] = values
        self.gamma = gamma

    def tau(self, t: int) -> float:
        if t < 1:
            raise ValidationError(f"τ_t definido para t >= 1 (t = {t})", invariant="schedule-index")
        k = len(self.values)
        if t <= k:
            return self.values[t - 1]
        return self.values[-1] * math.ldexp(1.0, -(t - k))

    def to_dict(self) -> Dict:
        return {"rule": self.rule, "values": self.values, "gamma": self.gamma}


def schedule_from_dict(data: Optional[Dict], gamma: float) -> ToleranceSchedule:
    """{"rule": "geometric"} o {"rule": "custom", "values": [...]}."""
    data = data or {"rule": "geometric"}
    rule = data.get("rule", "geometric")
    if rule == "geometric":
        return GeometricHalving(data.get("gamma", gamma))
    if rule == "custom":
        return CustomSchedule(data.get("values", []), data.get("gamma", gamma))
    raise ValidationError(f"Regla de tolerancias desconocida: {rule}", invariant="schedule-rule")
