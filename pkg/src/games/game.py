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
BlackwellLab - Juegos de Pago Vectorial
Juegos finitos de acciones puras, su extensión mixta (bilineal), acciones,
escalarización y sondas de la propiedad minimax.

Convención: 𝒳 (filas) minimiza ⟨f,λ⟩ y 𝒴 (columnas) maximiza.
"""


import itertools
from typing import Dict, List, Optional, Tuple, Union as TypingUnion

import numpy as np

from src.core.errors import KindMismatch, IndexOutOfRange, ValidationError
from src.geometry.operations import support_function
from src.geometry.sets import TargetSet
from src.solvers.matrix_game import matrix_game, MatrixGameSolution


GAMMA_SLACK = 1e-6
PROBABILITY_TOLERANCE = 1e-9


# --- Acciones ---

class Pure:
    """Acción pura por índice."""

    kind = "pure"

    def __init__(self, index: int):
        self.index = int(index)

    def distribution(self, size: int) -> np.ndarray:
        if not 0 <= self.index < size:
            raise IndexOutOfRange(f"Índice {self.index} fuera de [0, {size})",
                                  {"index": self.index, "size": size})
        dist = np.zeros(size)
        dist[self.index] = 1.0
        return dist

    def to_dict(self) -> Dict:
        return {"pure": self.index}

    def __eq__(self, other):
        return isinstance(other, Pure) and other.index == self.index

    def __hash__(self):
        return hash(("pure", self.index))

    def __repr__(self):
        return f"Pure({self.index})"


class Mixed:
    """Acción mixta: vector de probabilidad."""

    kind = "mixed"

    def __init__(self, probabilities):
        p = np.array(probabilities, dtype=float).reshape(-1)
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise ValidationError("Distribución vacía o no finita", invariant="mixed-simplex")
        if np.any(p < -PROBABILITY_TOLERANCE) or abs(p.sum() - 1.0) > PROBABILITY_TOLERANCE:
            raise ValidationError(f"No es una distribución de probabilidad: {p.tolist()}",
                                  invariant="mixed-simplex")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        self.probabilities = p

    @classmethod
    def uniform(cls, size: int) -> "Mixed":
        return cls(np.full(size, 1.0 / size))

    def distribution(self, size: int) -> np.ndarray:
        if self.probabilities.size != size:
            raise IndexOutOfRange(f"Distribución de tamaño {self.probabilities.size}, "
                                  f"se esperaba {size}")
        return self.probabilities

    def to_dict(self) -> Dict:
        return {"mixed": self.probabilities.tolist()}

    def __eq__(self, other):
        return isinstance(other, Mixed) and np.array_equal(other.probabilities, self.probabilities)

    def __hash__(self):
        return hash(("mixed", self.probabilities.tobytes()))

    def __repr__(self):
        return f"Mixed({np.round(self.probabilities, 6).tolist()})"


Action = TypingUnion[Pure, Mixed]


def action_from_dict(data: Dict) -> Action:
    if "pure" in data:
        return Pure(data["pure"])
    if "mixed" in data:
        return Mixed(data["mixed"])
    raise ValidationError(f"Acción inválida: {data!r}", invariant="action-descriptor")


# --- Juegos ---

class PureGame:
    """
    Juego finito con tensor de pagos F[i][j] ∈ ℝ^d y cota estricta γ.
    """

    mode = "pure"

    def __init__(self, payoffs, gamma: Optional[float] = None):
        F = np.array(payoffs, dtype=float)
        if F.ndim == 2:
            F = F[:, :, None]
        if F.ndim != 3 or F.shape[0] < 1 or F.shape[1] < 1 or F.shape[2] < 1:
            raise ValidationError(f"Tensor de pagos con forma inválida: {F.shape}",
                                  invariant="payoff-shape")
        if not np.all(np.isfinite(F)):
            raise ValidationError("Pagos no finitos", invariant="payoff-finite")
        F.setflags(write=False)
        self.payoffs = F

        max_norm = float(np.linalg.norm(F, axis=2).max())
        if gamma is None:
            gamma = (1.0 + GAMMA_SLACK) * max_norm if max_norm > 0 else 1.0
        gamma = float(gamma)
        if not gamma > 0:
            raise ValidationError(f"γ debe ser > 0: {gamma}", invariant="gamma-positive")
        if max_norm >= gamma:
            raise ValidationError(
                f"La cota γ = {gamma} no es estricta: max ‖F[i][j]‖ = {max_norm}",
                invariant="gamma-strict")
        self.gamma = gamma

    @property
    def base(self) -> "PureGame":
        return self

    @property
    def m(self) -> int:
        return self.payoffs.shape[0]

    @property
    def n(self) -> int:
        return self.payoffs.shape[1]

    @property
    def d(self) -> int:
        return self.payoffs.shape[2]

    @property
    def vertices(self) -> np.ndarray:
        """Los m·n vectores de pago puros, fila por fila."""
        return self.payoffs.reshape(-1, self.d)

    def to_dict(self) -> Dict:
        return {"d": self.d, "payoffs": self.payoffs.tolist(), "mode": self.mode,
                "gamma": self.gamma}


class MixedGame:
    """Extensión mixta: (μ,ν) ↦ Σ μ_i ν_j F[i][j]."""

    mode = "mixed"

    def __init__(self, base: PureGame):
        self.base = base

    @property
    def payoffs(self) -> np.ndarray:
        return self.base.payoffs

    @property
    def gamma(self) -> float:
        return self.base.gamma

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def vertices(self) -> np.ndarray:
        return self.base.vertices

    def to_dict(self) -> Dict:
        body = self.base.to_dict()
        body["mode"] = self.mode
        return body


Game = TypingUnion[PureGame, MixedGame]


def game_from_dict(data: Dict) -> Game:
    """
    Construye un juego desde {"d", "payoffs", "mode", "gamma"?}.

    Raises:
        ValidationError: dimensión declarada inconsistente o modo desconocido
    """
    try:
        payoffs = np.array(data["payoffs"], dtype=float)
    except (KeyError, ValueError, TypeError) as e:
        raise ValidationError(f"Pagos inválidos: {e}", invariant="payoff-shape")
    if payoffs.ndim == 2:
        payoffs = payoffs[:, :, None]
    declared = data.get("d")
    if declared is not None and payoffs.ndim == 3 and payoffs.shape[2] != int(declared):
        raise ValidationError(f"d = {declared} no coincide con los pagos ({payoffs.shape[2]})",
                              invariant="payoff-dimension")
    base = PureGame(payoffs, data.get("gamma"))
    mode = data.get("mode", "mixed")
    if mode == "pure":
        return base
    if mode == "mixed":
        return MixedGame(base)
    raise ValidationError(f"Modo de juego desconocido: {mode}", invariant="game-mode")


# --- Operaciones ---

def payoff(g: Game, x: Action, y: Action) -> np.ndarray:
    """
    Pago vectorial de (x, y).

    Raises:
        KindMismatch: acción mixta en un juego puro
        IndexOutOfRange: índice fuera del juego
    """
    if g.mode == "pure" and (isinstance(x, Mixed) or isinstance(y, Mixed)):
        raise KindMismatch("Acciones mixtas sólo se admiten en juegos mixtos")
    if isinstance(x, Pure) and isinstance(y, Pure):
        if not (0 <= x.index < g.m and 0 <= y.index < g.n):
            raise IndexOutOfRange(f"Par de índices ({x.index},{y.index}) fuera de {g.m}×{g.n}")
        return g.payoffs[x.index, y.index].copy()
    mu = x.distribution(g.m)
    nu = y.distribution(g.n)
    return np.einsum("i,j,ijd->d", mu, nu, g.payoffs)


def expected_payoff(g: Game, mu: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Pago esperado para distribuciones ya resueltas."""
    return np.einsum("i,j,ijd->d", mu, nu, g.payoffs)


def scalarize(g: Game, direction) -> np.ndarray:
    """G[i][j] = ⟨F[i][j], λ⟩."""
    lam = np.asarray(direction, dtype=float).reshape(-1)
    if lam.size != g.d:
        raise ValidationError(f"λ de dimensión {lam.size}, el juego tiene d = {g.d}",
                              invariant="direction-dimension")
    return g.payoffs @ lam


def g_S(g: Game, x: Action, y: Action, direction, S: TargetSet) -> float:
    """⟨f(x,y),λ⟩ - σ_S(λ)."""
    lam = np.asarray(direction, dtype=float).reshape(-1)
    return float(payoff(g, x, y) @ lam) - support_function(S, lam)


def solve_scalarized(g: Game, direction, config: Optional[Dict] = None) -> MatrixGameSolution:
    """
    Solución del juego escalar ⟨f,λ⟩ con la fila minimizando.

    En juegos puros el valor es min_i max_j y la fila óptima es pura.
    """
    G = scalarize(g, direction)
    if g.mode == "pure":
        row_max = G.max(axis=1)
        i = int(np.argmin(row_max))
        col_min = G.min(axis=0)
        j = int(np.argmax(col_min))
        return MatrixGameSolution(float(row_max[i]), Pure(i).distribution(g.m),
                                  Pure(j).distribution(g.n))
    return matrix_game(G, config)


def upper_value(g: Game, direction, config: Optional[Dict] = None) -> float:
    """inf_x sup_y ⟨f(x,y),λ⟩."""
    return solve_scalarized(g, direction, config).value


def lower_value(g: Game, direction, config: Optional[Dict] = None) -> float:
    """sup_y inf_x ⟨f(x,y),λ⟩."""
    G = scalarize(g, direction)
    if g.mode == "pure":
        return float(G.min(axis=0).max())
    return -matrix_game(-G.T, config).value


def minimax_gap(g: Game, direction, config: Optional[Dict] = None) -> float:
    """
    Brecha inf-sup menos sup-inf del juego escalarizado.

    Juegos puros: min_i max_j G - max_j min_i G >= 0.
    Juegos mixtos: diferencia entre los dos LPs, del orden de la precisión del simplex.
    """
    return upper_value(g, direction, config) - lower_value(g, direction, config)


def scalarized_values(g: Game, directions: np.ndarray, config: Optional[Dict] = None) -> np.ndarray:
    """Valor superior para cada dirección de una malla."""
    return np.array([upper_value(g, lam, config) for lam in np.atleast_2d(directions)])


def minimax_property_report(g: Game, directions: np.ndarray, rng: np.random.Generator,
                            samples: int = 20, config: Optional[Dict] = None) -> Dict:
    """
    Sonda de la propiedad minimax y de la afinidad del pago mixto.

    Returns:
        {"max_gap", "affine_defect_x", "affine_defect_y", "directions", "samples"}
    """
    gaps = [minimax_gap(g, lam, config) for lam in np.atleast_2d(directions)]
    defect_x = defect_y = 0.0
    if g.mode == "mixed":
        for _ in range(samples):
            mu_a, mu_b = rng.dirichlet(np.ones(g.m), size=2)
            nu_a, nu_b = rng.dirichlet(np.ones(g.n), size=2)
            theta = rng.uniform()
            mixed_mu = theta * mu_a + (1 - theta) * mu_b
            mixed_nu = theta * nu_a + (1 - theta) * nu_b
            lhs_x = expected_payoff(g, mixed_mu, nu_a)
            rhs_x = theta * expected_payoff(g, mu_a, nu_a) + (1 - theta) * expected_payoff(g, mu_b, nu_a)
            lhs_y = expected_payoff(g, mu_a, mixed_nu)
            rhs_y = theta * expected_payoff(g, mu_a, nu_a) + (1 - theta) * expected_payoff(g, mu_a, nu_b)
            defect_x = max(defect_x, float(np.linalg.norm(lhs_x - rhs_x)))
            defect_y = max(defect_y, float(np.linalg.norm(lhs_y - rhs_y)))
    return {
        "max_gap": float(max(gaps)) if gaps else 0.0,
        "min_gap": float(min(gaps)) if gaps else 0.0,
        "affine_defect_x": defect_x,
        "affine_defect_y": defect_y,
        "directions": len(gaps),
        "samples": samples if g.mode == "mixed" else 0
    }


def simplex_grid(size: int, steps: int) -> np.ndarray:
    """Distribuciones con coordenadas múltiplos de 1/steps."""
    rows = [np.array(c, dtype=float) / steps
            for c in itertools.product(range(steps + 1), repeat=size) if sum(c) == steps]
    return np.array(rows)


def action_set(g: Game, steps: int = 0) -> Tuple[List[Action], List[Action]]:
    """Acciones puras, o una malla del símplex para juegos mixtos si steps > 0."""
    if g.mode == "pure" or steps <= 0:
        return [Pure(i) for i in range(g.m)], [Pure(j) for j in range(g.n)]
    return ([Mixed(p) for p in simplex_grid(g.m, steps)],
            [Mixed(q) for q in simplex_grid(g.n, steps)])
