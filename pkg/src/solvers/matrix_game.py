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
BlackwellLab - Juegos Matriciales
Valor y estrategias óptimas de un juego de suma cero vía el par de LPs desplazados.

Convención: el jugador fila minimiza μᵀGν y el jugador columna maximiza.
"""


from typing import Dict, Optional

import numpy as np

from src.core.errors import ValidationError
from src.solvers.simplex import LinearProgram, SimplexSolver


class MatrixGameSolution:
    """Valor v y estrategias mixtas μ* (fila) y ν* (columna)."""

    def __init__(self, value: float, row_strategy: np.ndarray, col_strategy: np.ndarray):
        self.value = value
        self.row_strategy = row_strategy
        self.col_strategy = col_strategy

    def to_dict(self) -> Dict:
        return {
            "value": self.value,
            "row_strategy": self.row_strategy.tolist(),
            "col_strategy": self.col_strategy.tolist()
        }


def _normalize(weights: np.ndarray) -> np.ndarray:
    weights = np.clip(weights, 0.0, None)
    total = weights.sum()
    return weights / total


def matrix_game(G, config: Optional[Dict] = None) -> MatrixGameSolution:
    """
    Resuelve min_μ max_ν μᵀGν.

    Con G' = G - min(G) + 1 > 0:
      fila: max 1ᵀx s.t. G'ᵀx <= 1, x >= 0; v' = 1/Σx, μ = v'x
      columna: min 1ᵀy s.t. G'y >= 1, y >= 0; ν = v'y

    Args:
        G: Matriz m×n
        config: Configuración (sección lp)

    Returns:
        MatrixGameSolution con el valor ya sin desplazamiento
    """
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] < 1 or G.shape[1] < 1:
        raise ValidationError(f"Matriz de juego inválida: forma {G.shape}", invariant="game-shape")
    if not np.all(np.isfinite(G)):
        raise ValidationError("Matriz de juego con entradas no finitas", invariant="game-finite")

    m, n = G.shape
    shift = 1.0 - float(G.min())
    Gp = G + shift
    solver = SimplexSolver.from_config(config)

    row_lp = LinearProgram(np.ones(m), Gp.T, np.ones(n), senses=["<="] * n, direction="max")
    row = solver.solve(row_lp)
    col_lp = LinearProgram(np.ones(n), Gp, np.ones(m), senses=[">="] * m, direction="min")
    col = solver.solve(col_lp)

    value_row = 1.0 / row.value
    value_col = 1.0 / col.value
    value = 0.5 * (value_row + value_col) - shift

    return MatrixGameSolution(value, _normalize(row.x), _normalize(col.x))


def lower_value(G, config: Optional[Dict] = None) -> float:
    """max_ν min_μ μᵀGν calculado como -valor(-Gᵀ)."""
    G = np.asarray(G, dtype=float)
    return -matrix_game(-G.T, config).value


def best_response(G, row_strategy) -> int:
    """
    Columna que maximiza μᵀG e_j (primer índice en empates).

    Args:
        G: Matriz m×n
        row_strategy: Estrategia mixta de la fila

    Returns:
        Índice de columna
    """
    payoffs = np.asarray(row_strategy, dtype=float) @ np.asarray(G, dtype=float)
    return int(np.argmax(payoffs))


def row_best_response(G, col_strategy) -> int:
    """Fila que minimiza (Gν)_i (primer índice en empates)."""
    payoffs = np.asarray(G, dtype=float) @ np.asarray(col_strategy, dtype=float)
    return int(np.argmin(payoffs))
