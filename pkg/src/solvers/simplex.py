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
BlackwellLab - Resolvedor Simplex
Simplex denso de dos fases con regla de Bland.

Forma aceptada: optimizar c·x sujeto a filas A_i·x {<=,=,>=} b_i, con cada
variable >= 0 o libre. Las variables libres se separan en parte positiva y
negativa; las filas con b_i < 0 se invierten antes de añadir artificiales.
"""


from typing import Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import Infeasible, Unbounded, CycleLimit, ValidationError


SENSES = ("<=", "=", ">=")


class LinearProgram:
    """Programa lineal denso e inmutable."""

    def __init__(self, objective, matrix, rhs, senses: Optional[Sequence[str]] = None,
                 free: Optional[Sequence[bool]] = None, direction: str = "min"):
        c = np.asarray(objective, dtype=float).reshape(-1)
        A = np.asarray(matrix, dtype=float)
        if A.size == 0:
            A = A.reshape(0, c.size)
        b = np.asarray(rhs, dtype=float).reshape(-1)

        if A.ndim != 2 or A.shape != (b.size, c.size):
            raise ValidationError(
                f"Dimensiones inconsistentes: A{A.shape}, b({b.size}), c({c.size})",
                invariant="lp-dimensions")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValidationError("Entradas no finitas en el programa", invariant="lp-finite")
        if direction not in ("min", "max"):
            raise ValidationError(f"Dirección inválida: {direction}", invariant="lp-direction")

        senses = list(senses) if senses is not None else ["<="] * b.size
        if len(senses) != b.size or any(s not in SENSES for s in senses):
            raise ValidationError(f"Sentidos de fila inválidos: {senses}", invariant="lp-senses")

        free = [bool(f) for f in free] if free is not None else [False] * c.size
        if len(free) != c.size:
            raise ValidationError("Vector de variables libres con longitud incorrecta",
                                  invariant="lp-dimensions")

        for arr in (c, A, b):
            arr.setflags(write=False)

        self.objective = c
        self.matrix = A
        self.rhs = b
        self.senses = tuple(senses)
        self.free = tuple(free)
        self.direction = direction

    @property
    def shape(self):
        return self.matrix.shape

    def to_dict(self) -> Dict:
        return {
            "objective": self.objective.tolist(),
            "matrix": self.matrix.tolist(),
            "rhs": self.rhs.tolist(),
            "senses": list(self.senses),
            "free": list(self.free),
            "direction": self.direction
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "LinearProgram":
        return cls(data["objective"], data.get("matrix", []), data.get("rhs", []),
                   senses=data.get("senses"), free=data.get("free"),
                   direction=data.get("direction", "min"))


class LPSolution:
    """Punto óptimo, valor óptimo y número de pivotes."""

    def __init__(self, x: np.ndarray, value: float, pivots: int):
        self.x = x
        self.value = value
        self.pivots = pivots

    def to_dict(self) -> Dict:
        return {"status": "optimal", "x": self.x.tolist(), "value": self.value,
                "pivots": self.pivots}


class SimplexSolver:
    """
    Simplex de tableau denso.

    El tableau guarda las filas de restricción y, en la última fila, los
    costos reducidos con -z en la columna del lado derecho.
    """

    def __init__(self, pivot_tolerance: float = 1e-9, pivot_budget: int = 1_000_000,
                 feasibility_tolerance: float = 1e-8):
        self.tol = pivot_tolerance
        self.budget = pivot_budget
        self.feas_tol = feasibility_tolerance
        self.pivots = 0

    @classmethod
    def from_config(cls, config: Optional[Dict] = None) -> "SimplexSolver":
        lp_config = (config or {}).get("lp", {})
        return cls(pivot_tolerance=lp_config.get("pivot_tolerance", 1e-9),
                   pivot_budget=lp_config.get("pivot_budget", 1_000_000))

    def solve(self, p: LinearProgram) -> LPSolution:
        """
        Resuelve el programa.

        Returns:
            LPSolution en las variables originales

        Raises:
            Infeasible, Unbounded, CycleLimit
        """
        self.pivots = 0
        n = p.objective.size

        # Columnas estándar: originales, partes negativas de libres, holguras
        neg_cols = [j for j in range(n) if p.free[j]]
        slack_rows = [i for i, s in enumerate(p.senses) if s != "="]
        m = p.rhs.size
        n_std = n + len(neg_cols) + len(slack_rows)

        A = np.zeros((m, n_std))
        A[:, :n] = p.matrix
        for k, j in enumerate(neg_cols):
            A[:, n + k] = -p.matrix[:, j]
        for k, i in enumerate(slack_rows):
            A[i, n + len(neg_cols) + k] = 1.0 if p.senses[i] == "<=" else -1.0
        b = p.rhs.copy()

        flip = b < 0
        A[flip] *= -1.0
        b[flip] *= -1.0

        c = np.zeros(n_std)
        sign = 1.0 if p.direction == "min" else -1.0
        c[:n] = sign * p.objective
        for k, j in enumerate(neg_cols):
            c[n + k] = -sign * p.objective[j]

        x_std = self._two_phase(A, b, c)

        x = x_std[:n].copy()
        for k, j in enumerate(neg_cols):
            x[j] -= x_std[n + k]
        value = float(p.objective @ x)
        return LPSolution(x, value, self.pivots)

    def _two_phase(self, A: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
        m, n = A.shape
        if m == 0:
            if np.any(c < -self.tol):
                raise Unbounded("Objetivo no acotado sin restricciones")
            return np.zeros(n)

        # Fase I: una artificial por fila
        T = np.zeros((m + 1, n + m + 1))
        T[:m, :n] = A
        T[:m, n:n + m] = np.eye(m)
        T[:m, -1] = b
        T[m, :n] = -A.sum(axis=0)
        T[m, -1] = -b.sum()
        basis = list(range(n, n + m))

        self._iterate(T, basis, n + m)

        if -T[m, -1] > self.feas_tol * max(1.0, float(np.abs(b).max())):
            raise Infeasible("El programa es infactible",
                             {"phase_one_residual": float(-T[m, -1])})

        # Sacar artificiales de la base o eliminar filas redundantes
        keep = []
        for i in range(m):
            if basis[i] < n:
                keep.append(i)
                continue
            candidates = np.nonzero(np.abs(T[i, :n]) > self.tol)[0]
            if candidates.size:
                self._pivot(T, basis, i, int(candidates[0]))
                keep.append(i)

        rows = keep + [m]
        T = np.hstack([T[rows][:, :n], T[rows][:, -1:]])
        basis = [basis[i] for i in keep]
        m = len(keep)

        # Fase II
        T[m, :] = 0.0
        T[m, :n] = c
        for i, j in enumerate(basis):
            T[m, :] -= c[j] * T[i, :]

        self._iterate(T, basis, n)

        x = np.zeros(n)
        for i, j in enumerate(basis):
            x[j] = T[i, -1]
        return x

    def _iterate(self, T: np.ndarray, basis: List[int], n_cols: int):
        m = len(basis)
        while True:
            reduced = T[m, :n_cols]
            entering = np.nonzero(reduced < -self.tol)[0]
            if entering.size == 0:
                return
            j = int(entering[0])

            column = T[:m, j]
            positive = np.nonzero(column > self.tol)[0]
            if positive.size == 0:
                raise Unbounded("Objetivo no acotado", {"entering_column": j})
            ratios = T[positive, -1] / column[positive]
            best = ratios.min()
            ties = positive[np.abs(ratios - best) <= self.tol * max(1.0, abs(best))]
            # Bland: entre empates, la fila cuya variable básica tiene menor índice
            i = int(min(ties, key=lambda r: basis[r]))
            self._pivot(T, basis, i, j)

    def _pivot(self, T: np.ndarray, basis: List[int], i: int, j: int):
        self.pivots += 1
        if self.pivots > self.budget:
            raise CycleLimit(f"Presupuesto de pivotes agotado ({self.budget})",
                             {"pivot_budget": self.budget})
        T[i, :] /= T[i, j]
        for r in range(T.shape[0]):
            if r != i and T[r, j] != 0.0:
                T[r, :] -= T[r, j] * T[i, :]
        basis[i] = j


def solve_lp(p: LinearProgram, config: Optional[Dict] = None) -> LPSolution:
    """
    Resuelve un programa lineal con la configuración dada.

    Args:
        p: Programa lineal
        config: Configuración (sección lp)

    Returns:
        LPSolution
    """
    return SimplexSolver.from_config(config).solve(p)


def dual_of(p: LinearProgram) -> LinearProgram:
    """
    Construye el dual de un programa, con el mismo valor óptimo.

    Para min c·x el dual es max b·y con y_i >= 0 en filas '>=', y_i <= 0 en
    filas '<=' (se representa con la columna negada) y libre en '='. Las
    columnas de variables no negativas dan filas '<=' y las libres filas '='.
    Un primal de maximización se trata como min (-c)·x y el dual se devuelve
    como minimización para conservar el signo del valor.
    """
    c = p.objective if p.direction == "min" else -p.objective
    A = p.matrix.copy()
    b = p.rhs.copy()

    free_dual = []
    for i, s in enumerate(p.senses):
        if s == "<=":
            A[i, :] *= -1.0
            b[i] *= -1.0
        free_dual.append(s == "=")

    dual_senses = ["=" if f else "<=" for f in p.free]
    if p.direction == "min":
        return LinearProgram(b, A.T, c, senses=dual_senses, free=free_dual, direction="max")
    return LinearProgram(-b, A.T, c, senses=dual_senses, free=free_dual, direction="min")
