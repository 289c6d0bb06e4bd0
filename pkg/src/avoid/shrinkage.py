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
BlackwellLab - Contraejemplos y Encogimiento
ε(τ), búsqueda de contraejemplos de forzamiento por semiespacio sobre una
nube enlazada y el operador 𝒱_τ que retira las bolas ε(τ) alrededor de cada
centro certificado.
"""


import math
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.core.config import section
from src.core.errors import NonPositiveInput
from src.core.logger import get_logger
from src.games.game import Game, scalarized_values
from src.geometry.hull import PayoffHull
from src.geometry.operations import sample, cloud_distances, direction_grid
from src.geometry.sets import Halfspace, PointCloud, TargetSet


VALUE_MARGIN = 1e-9
NEAREST_SLACK = 1e-9


# --- Constantes ---

def epsilon_of_tau(tau: float, gamma: float) -> float:
    """
    ε(τ) = τ²(√(γ²+τ²) - γ)/(8(4γ²+τ²)).

    Se evalúa como τ⁴/(8(4γ²+τ²)(√(γ²+τ²)+γ)), algebraicamente igual y
    sin cancelación para τ pequeño.

    Raises:
        NonPositiveInput: τ <= 0 o γ <= 0
    """
    if not tau > 0 or not gamma > 0:
        raise NonPositiveInput(f"ε(τ) requiere τ > 0 y γ > 0 (τ = {tau}, γ = {gamma})")
    return tau ** 4 / (8.0 * (4.0 * gamma ** 2 + tau ** 2) * (math.hypot(gamma, tau) + gamma))


def appendix_constants(tau: float, gamma: float) -> Dict[str, float]:
    """
    Constantes intermedias de la demostración del empuje.

    ε₀ = τ(1 - γ/√(γ²+τ²)), ε₁ = τε₀/(2√(4γ²+τ²)), ε₂ = ε₁/2, ε₃ = ε₂/2;
    siempre ε(τ) <= ε₃.
    """
    if not tau > 0 or not gamma > 0:
        raise NonPositiveInput(f"Constantes requieren τ > 0 y γ > 0 (τ = {tau}, γ = {gamma})")
    eps0 = tau * (1.0 - gamma / math.hypot(gamma, tau))
    eps1 = tau * eps0 / (2.0 * math.sqrt(4.0 * gamma ** 2 + tau ** 2))
    eps2 = eps1 / 2.0
    eps3 = eps2 / 2.0
    return {"eps0": eps0, "eps1": eps1, "eps2": eps2, "eps3": eps3,
            "epsilon": epsilon_of_tau(tau, gamma)}


def drive_budget(T: int, gamma: float, epsilon: float) -> int:
    """Cota de rondas de un empuje: ⌈8Tγ/ε⌉."""
    if not epsilon > 0 or not gamma > 0 or T < 1:
        raise NonPositiveInput(f"Cota de empuje con T = {T}, γ = {gamma}, ε = {epsilon}")
    return math.ceil(8.0 * T * gamma / epsilon)


# --- Contraejemplos ---

class Counterexample:
    """
    (φ, ψ, H) con H = {⟨λ,z⟩ <= ⟨λ,ψ⟩+τ} que 𝒳 no puede 1-forzar: v(λ) > c.
    """

    def __init__(self, phi: np.ndarray, psi: np.ndarray, H: Halfspace, tau: float, value: float):
        self.phi = phi
        self.psi = psi
        self.H = H
        self.tau = tau
        self.value = value

    @property
    def direction(self) -> np.ndarray:
        return self.H.normal

    def to_dict(self) -> Dict:
        return {
            "phi": self.phi.tolist(),
            "psi": self.psi.tolist(),
            "lambda": self.H.normal.tolist(),
            "c": self.H.offset,
            "tau": self.tau,
            "value": self.value,
        }


class _ValueCache:
    """v(λ) por juego y malla de direcciones."""

    def __init__(self, limit: int = 32):
        self.limit = limit
        self._store: Dict[Tuple, np.ndarray] = {}

    def values(self, g: Game, directions: np.ndarray, config: Optional[Dict]) -> np.ndarray:
        key = (g.mode, g.payoffs.shape, g.payoffs.tobytes(), directions.shape, directions.tobytes())
        cached = self._store.get(key)
        if cached is None:
            if len(self._store) >= self.limit:
                self._store.pop(next(iter(self._store)))
            cached = scalarized_values(g, directions, config)
            self._store[key] = cached
        return cached

    def clear(self):
        self._store.clear()


_VALUE_CACHE = _ValueCache()


def _as_cloud(S: TargetSet, config: Optional[Dict]) -> PointCloud:
    if isinstance(S, PointCloud):
        return S
    return sample(S, section(config, "geometry")["resolution"])


def _default_directions(g: Game, config: Optional[Dict]) -> np.ndarray:
    return direction_grid(g.d, generators=g.vertices, config=config)


def _split_cloud(cloud: PointCloud) -> Tuple[Optional[PointCloud], np.ndarray]:
    """Separa la poligonal enlazada (distancia exacta) de los puntos sueltos."""
    loose = ~np.isin(np.arange(cloud.size), cloud.links)
    linked = cloud.keep(~loose) if not loose.all() else None
    return linked, cloud.points[loose]


def _loose_slack(cloud: PointCloud) -> float:
    return max(float(cloud.resolution), NEAREST_SLACK)


def _nearest_ok(parts: Tuple[Optional[PointCloud], np.ndarray], phi: np.ndarray,
                r: float, slack: float) -> bool:
    # la poligonal se mide con 1e-9; los puntos sueltos con la resolución h
    linked, loose = parts
    if linked is not None and cloud_distances(linked, phi)[0] < r - NEAREST_SLACK:
        return False
    if loose.size and np.linalg.norm(loose - phi, axis=1).min() < r - slack:
        return False
    return True


def _scan(g: Game, cloud: PointCloud, tau: float, directions: np.ndarray,
          config: Optional[Dict], hull: PayoffHull,
          nearest_slack: Optional[float]) -> Iterator[Tuple[int, Counterexample]]:
    """
    Recorre ψ en orden de la nube y, para cada ψ, λ en orden de la malla;
    produce a lo sumo un contraejemplo por ψ.
    """
    if cloud.is_empty():
        return
    if nearest_slack is None:
        nearest_slack = _loose_slack(cloud)
    parts = _split_cloud(cloud)
    iterations = int(section(config, "peel")["bisection_iterations"])
    values = _VALUE_CACHE.values(g, directions, config)
    margins = values[None, :] - cloud.points @ directions.T
    hits = margins > tau + VALUE_MARGIN

    for p in np.nonzero(hits.any(axis=1))[0]:
        psi = cloud.points[p]
        for k in np.nonzero(hits[p])[0]:
            lam = directions[k]
            interval = hull.ray_interval(psi, lam)
            if interval is None:
                continue
            lo, hi = max(interval[0], tau), interval[1]
            if lo > hi or not _nearest_ok(parts, psi + lo * lam, lo, nearest_slack):
                continue
            if _nearest_ok(parts, psi + hi * lam, hi, nearest_slack):
                r = hi
            else:
                a, b = lo, hi
                for _ in range(iterations):
                    mid = 0.5 * (a + b)
                    if _nearest_ok(parts, psi + mid * lam, mid, nearest_slack):
                        a = mid
                    else:
                        b = mid
                r = a
            if r <= tau:
                continue
            H = Halfspace(lam, float(lam @ psi) + tau)
            yield int(p), Counterexample(psi + r * lam, psi.copy(), H, tau, float(values[k]))
            break


def find_counterexample(g: Game, S: TargetSet, tau: float,
                        directions: Optional[np.ndarray] = None,
                        config: Optional[Dict] = None,
                        nearest_slack: Optional[float] = None) -> Optional[Counterexample]:
    """
    Primer contraejemplo con holgura τ en orden determinista (ψ por índice de
    nube, λ por índice de malla).

    Acepta si v(λ) > ⟨λ,ψ⟩ + τ + 1e-9 y existe φ = ψ + rλ con r > τ dentro
    de la envolvente de pagos cuyo punto más cercano de la nube está a
    distancia >= r menos una holgura: 1e-9 frente a la poligonal enlazada y
    nearest_slack (por defecto max(h, 1e-9)) frente a los puntos sueltos,
    que sólo aproximan S a resolución h. r se maximiza por bisección.

    Raises:
        NonPositiveInput: τ <= 0
    """
    if not tau > 0:
        raise NonPositiveInput(f"τ debe ser > 0: {tau}")
    cloud = _as_cloud(S, config)
    if directions is None:
        directions = _default_directions(g, config)
    hull = PayoffHull(g.vertices)
    for _, ce in _scan(g, cloud, tau, np.atleast_2d(directions), config, hull, nearest_slack):
        return ce
    return None


def shrink(g: Game, S: TargetSet, tau: float,
           directions: Optional[np.ndarray] = None,
           config: Optional[Dict] = None, run_id: str = "local") -> Tuple[PointCloud, List[Counterexample]]:
    """
    𝒱_τ(S): retira de la nube todo punto estrictamente dentro de B(ψ, ε(τ))
    para algún centro certificado ψ con holgura τ.

    Returns:
        (nube encogida, certificados usados)
    """
    if not tau > 0:
        raise NonPositiveInput(f"τ debe ser > 0: {tau}")
    cloud = _as_cloud(S, config)
    if directions is None:
        directions = _default_directions(g, config)
    hull = PayoffHull(g.vertices)
    certificates = [ce for _, ce in _scan(g, cloud, tau, np.atleast_2d(directions), config,
                                          hull, None)]
    if not certificates:
        return cloud, []

    radius = epsilon_of_tau(tau, g.gamma)
    centers = np.array([ce.psi for ce in certificates])
    gaps = cKDTree(centers).query(cloud.points)[0]
    keep = gaps >= radius
    logger = get_logger()
    for ce in certificates:
        logger.log_certificate(run_id, "COUNTEREXAMPLE", ce.to_dict())
    return cloud.keep(keep), certificates


def perturb_cloud(cloud: PointCloud, size: float, rng: np.random.Generator) -> PointCloud:
    """
    Desplaza cada punto por un vector de norma < size; la distancia de
    Hausdorff a la nube original queda por debajo de size.
    """
    if not size > 0:
        raise NonPositiveInput(f"Tamaño de perturbación debe ser > 0: {size}")
    k, d = cloud.points.shape
    directions = rng.standard_normal((k, d))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    radii = size * rng.uniform(0.0, 1.0, size=(k, 1)) * (1.0 - 1e-9)
    return PointCloud(cloud.points + directions / norms * radii, cloud.resolution, cloud.links)
