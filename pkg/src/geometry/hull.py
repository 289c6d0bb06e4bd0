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
BlackwellLab - Envolvente de Pagos
Pertenencia rápida a conv(f(X,Y)) e intervalo de un rayo dentro de ella.

Se trabaja en coordenadas del subespacio afín generado por los vértices, de
modo que envolventes degeneradas (pagos colineales en ℝ², por ejemplo) se
tratan igual que las de dimensión completa.
"""


from typing import Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError


class PayoffHull:
    """Envolvente convexa de los vectores de pago puros."""

    def __init__(self, vertices, tol: float = 1e-9):
        V = np.asarray(vertices, dtype=float)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        self.vertices = V
        self.tol = tol
        self.origin = V.mean(axis=0)

        centered = V - self.origin
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        scale = max(1.0, float(s[0])) if s.size else 1.0
        rank = int(np.sum(s > 1e-10 * scale))
        self.basis = vt[:rank]                      # filas ortonormales
        self.rank = rank
        reduced = centered @ self.basis.T           # (k, rank)

        self.lower = self.upper = None
        self.equations = None
        if rank == 1:
            self.lower = float(reduced.min())
            self.upper = float(reduced.max())
        elif rank >= 2:
            try:
                self.equations = ConvexHull(reduced).equations
            except QhullError:
                # Puntos casi degenerados: se usa la caja del subespacio
                lo, hi = reduced.min(axis=0), reduced.max(axis=0)
                eye = np.eye(rank)
                self.equations = np.vstack([
                    np.hstack([eye, -hi.reshape(-1, 1)]),
                    np.hstack([-eye, lo.reshape(-1, 1)])
                ])

    @property
    def radius(self) -> float:
        """Radio de una bola centrada en el origen que contiene la envolvente."""
        return float(np.linalg.norm(self.vertices, axis=1).max())

    def _split(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        centered = np.asarray(z, dtype=float) - self.origin
        reduced = centered @ self.basis.T if self.rank else np.zeros(0)
        residual = centered - (reduced @ self.basis if self.rank else 0.0)
        return reduced, residual

    def contains(self, z) -> bool:
        reduced, residual = self._split(z)
        if np.linalg.norm(residual) > self.tol:
            return False
        if self.rank == 0:
            return True
        if self.rank == 1:
            return self.lower - self.tol <= reduced[0] <= self.upper + self.tol
        A, b = self.equations[:, :-1], self.equations[:, -1]
        return bool(np.all(A @ reduced + b <= self.tol))

    def ray_interval(self, psi, direction) -> Optional[Tuple[float, float]]:
        """
        Conjunto {r >= 0 : ψ + rλ ∈ envolvente} como intervalo [lo, hi].

        Returns:
            (lo, hi) o None si el rayo no toca la envolvente
        """
        red_p, res_p = self._split(psi)
        direction = np.asarray(direction, dtype=float)
        red_d = direction @ self.basis.T if self.rank else np.zeros(0)
        res_d = direction - (red_d @ self.basis if self.rank else 0.0)

        lo, hi = 0.0, np.inf
        norm_d = float(res_d @ res_d)
        if norm_d > self.tol ** 2:
            # El rayo cruza el subespacio afín a lo sumo en un punto
            r = -float(res_p @ res_d) / norm_d
            if r < -self.tol or np.linalg.norm(res_p + r * res_d) > self.tol:
                return None
            lo = hi = max(r, 0.0)
        elif np.linalg.norm(res_p) > self.tol:
            return None

        if self.rank == 0:
            pass
        elif self.rank == 1:
            lo, hi = _clip_interval(lo, hi, red_d[0], self.upper - red_p[0] + self.tol)
            lo, hi = _clip_interval(lo, hi, -red_d[0], red_p[0] - self.lower + self.tol)
        else:
            A, b = self.equations[:, :-1], self.equations[:, -1]
            rates = A @ red_d
            limits = -(A @ red_p + b) + self.tol
            for rate, limit in zip(rates, limits):
                lo, hi = _clip_interval(lo, hi, rate, limit)
                if lo > hi:
                    return None

        if lo > hi:
            return None
        return lo, hi


def _clip_interval(lo: float, hi: float, rate: float, limit: float) -> Tuple[float, float]:
    """Intersecta [lo, hi] con {r : rate·r <= limit}."""
    if abs(rate) <= 1e-15:
        return (lo, hi) if limit >= 0 else (1.0, 0.0)
    bound = limit / rate
    if rate > 0:
        return lo, min(hi, bound)
    return max(lo, bound), hi
