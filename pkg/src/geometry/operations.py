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
BlackwellLab - Operaciones Geométricas
Proyección, distancia de Hausdorff, función soporte, pertenencia por soporte,
pertenencia a envolventes vía LP, muestreo en nubes y mallas de direcciones.
"""


import itertools
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError, cKDTree

from src.core.errors import EmptySet, NonConvexSet, Infeasible, ValidationError
from src.geometry.sets import (
    Ball, Segment, HullOfPoints, PointCloud, Union, TargetSet, Halfspace,
    NearestPointResult, as_point
)
from src.solvers.simplex import LinearProgram, SimplexSolver


TIE_TOLERANCE = 1e-12


# --- Proyección ---

def _pick(candidates: np.ndarray, distances: np.ndarray) -> NearestPointResult:
    """Mínima distancia; en empates, el candidato lexicográficamente menor."""
    best = distances.min()
    tied = np.nonzero(distances <= best + TIE_TOLERANCE)[0]
    if tied.size > 1:
        keys = candidates[tied]
        # np.lexsort ordena por la última clave primero
        order = np.lexsort(keys.T[::-1])
        idx = tied[order[0]]
    else:
        idx = tied[0]
    return NearestPointResult(candidates[idx].copy(), float(distances[idx]))


def _segment_projections(phi: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Proyecciones de φ sobre los segmentos [A_k, B_k]."""
    D = B - A
    lengths = np.einsum("ij,ij->i", D, D)
    safe = np.where(lengths > 0, lengths, 1.0)
    t = np.clip(np.einsum("ij,ij->i", phi - A, D) / safe, 0.0, 1.0)
    t = np.where(lengths > 0, t, 0.0)
    return A + t[:, None] * D


def project(phi, S: TargetSet, config: Optional[Dict] = None) -> NearestPointResult:
    """
    Punto más cercano de S a φ y su distancia.

    Args:
        phi: Punto φ
        S: Conjunto objetivo no vacío

    Returns:
        NearestPointResult (ψ, ρ(φ,S))

    Raises:
        EmptySet: unión sin miembros o nube vacía
    """
    phi = as_point(phi, "φ")

    if isinstance(S, Ball):
        offset = phi - S.center
        norm = float(np.linalg.norm(offset))
        if norm <= S.radius:
            return NearestPointResult(phi.copy(), 0.0)
        psi = S.center + S.radius * offset / norm
        return NearestPointResult(psi, norm - S.radius)

    if isinstance(S, Segment):
        psi = _segment_projections(phi, S.a[None, :], S.b[None, :])[0]
        return NearestPointResult(psi, float(np.linalg.norm(phi - psi)))

    if isinstance(S, HullOfPoints):
        return _project_hull(phi, S.vertices, config)

    if isinstance(S, PointCloud):
        if S.is_empty():
            raise EmptySet("Proyección sobre una nube vacía")
        candidates = S.points
        if S.links.size:
            A = S.points[S.links[:, 0]]
            B = S.points[S.links[:, 1]]
            candidates = np.vstack([S.points, _segment_projections(phi, A, B)])
        distances = np.linalg.norm(candidates - phi, axis=1)
        return _pick(candidates, distances)

    if isinstance(S, Union):
        if not S.members:
            raise EmptySet("Proyección sobre una unión sin miembros")
        results = []
        for member in S.members:
            try:
                results.append(project(phi, member, config))
            except EmptySet:
                continue
        if not results:
            raise EmptySet("Todos los miembros de la unión están vacíos")
        points = np.array([r.point for r in results])
        distances = np.array([r.distance for r in results])
        return _pick(points, distances)

    raise ValidationError(f"Tipo de conjunto no soportado: {type(S).__name__}",
                          invariant="target-kind")


def _project_hull(phi: np.ndarray, V: np.ndarray, config: Optional[Dict]) -> NearestPointResult:
    d = V.shape[1]
    if d == 1:
        psi = np.clip(phi, V.min(axis=0), V.max(axis=0))
        return NearestPointResult(psi, float(np.linalg.norm(phi - psi)))

    if in_convex_hull(phi, V, config):
        return NearestPointResult(phi.copy(), 0.0)

    # El punto más cercano de un polígono está sobre algún segmento entre vértices
    pairs = np.array(list(itertools.combinations(range(V.shape[0]), 2))) if V.shape[0] > 1 else None
    if pairs is None:
        candidates = V.copy()
    else:
        candidates = np.vstack([V, _segment_projections(phi, V[pairs[:, 0]], V[pairs[:, 1]])])
    distances = np.linalg.norm(candidates - phi, axis=1)
    best = _pick(candidates, distances)
    if d == 2:
        return best

    # d >= 3: refinamiento sobre pesos del símplex
    k = V.shape[0]
    start = np.full(k, 1.0 / k)
    result = minimize(
        lambda w: float(np.sum((w @ V - phi) ** 2)),
        start,
        jac=lambda w: 2.0 * V @ (w @ V - phi),
        bounds=[(0.0, 1.0)] * k,
        constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1.0,
                      "jac": lambda w: np.ones_like(w)}],
        method="SLSQP",
        options={"ftol": 1e-14, "maxiter": 500}
    )
    # Sin convergencia declarada, los pesos normalizados siguen siendo factibles
    w = np.clip(result.x, 0.0, None)
    if w.sum() > 0:
        psi = (w / w.sum()) @ V
        dist = float(np.linalg.norm(phi - psi))
        if dist < best.distance - TIE_TOLERANCE:
            return NearestPointResult(psi, dist)
    return best


def neighborhood_contains(phi, S: TargetSet, epsilon: float, tol: float = 1e-9) -> bool:
    """φ ∈ S_ε (vecindad cerrada) usando la misma rutina de proyección."""
    return project(phi, S).distance <= epsilon + tol


def cloud_distances(cloud: PointCloud, phis: np.ndarray) -> np.ndarray:
    """
    Distancias de varios φ a la poligonal representada por una nube enlazada.

    Args:
        cloud: Nube no vacía
        phis: Arreglo (k, d)

    Returns:
        Arreglo (k,) de distancias
    """
    phis = np.atleast_2d(np.asarray(phis, dtype=float))
    diff = phis[:, None, :] - cloud.points[None, :, :]
    best = np.sqrt(np.einsum("kpd,kpd->kp", diff, diff)).min(axis=1)
    if cloud.links.size:
        A = cloud.points[cloud.links[:, 0]]
        B = cloud.points[cloud.links[:, 1]]
        D = B - A
        lengths = np.einsum("ed,ed->e", D, D)
        safe = np.where(lengths > 0, lengths, 1.0)
        rel = phis[:, None, :] - A[None, :, :]
        t = np.clip(np.einsum("ked,ed->ke", rel, D) / safe, 0.0, 1.0)
        foot = A[None, :, :] + t[:, :, None] * D[None, :, :]
        gap = phis[:, None, :] - foot
        best = np.minimum(best, np.sqrt(np.einsum("ked,ked->ke", gap, gap)).min(axis=1))
    return best


# --- Hausdorff y soporte ---

def hausdorff(A: TargetSet, B: TargetSet, resolution: Optional[float] = None) -> float:
    """
    Distancia de Hausdorff entre las nubes que representan A y B.

    Los conjuntos analíticos se muestrean primero con resolución h.

    Raises:
        EmptySet: si alguna nube es vacía
    """
    PA = _points_of(A, resolution)
    PB = _points_of(B, resolution)
    if PA.shape[0] == 0 or PB.shape[0] == 0:
        raise EmptySet("Hausdorff con un conjunto vacío")
    forward = cKDTree(PB).query(PA)[0].max()
    backward = cKDTree(PA).query(PB)[0].max()
    return float(max(forward, backward))


def _points_of(S: TargetSet, resolution: Optional[float]) -> np.ndarray:
    if isinstance(S, PointCloud):
        return S.points
    if isinstance(S, Union) and not S.members:
        raise EmptySet("Unión sin miembros")
    h = resolution if resolution is not None else _default_resolution(S)
    return sample(S, h).points


def _default_resolution(S: TargetSet) -> float:
    if isinstance(S, Union):
        clouds = [m.resolution for m in S.members if isinstance(m, PointCloud)]
        if clouds:
            return min(clouds)
    return 0.01


def support_function(S: TargetSet, direction) -> float:
    """
    σ_S(λ) = sup_{z∈S} ⟨z,λ⟩.

    Exacta para bolas, segmentos y envolventes; máximo sobre la nube en otro caso.
    """
    lam = np.asarray(direction, dtype=float).reshape(-1)
    if isinstance(S, Ball):
        return float(S.center @ lam + S.radius * np.linalg.norm(lam))
    if isinstance(S, Segment):
        return float(max(S.a @ lam, S.b @ lam))
    if isinstance(S, HullOfPoints):
        return float((S.vertices @ lam).max())
    if isinstance(S, PointCloud):
        if S.is_empty():
            raise EmptySet("Función soporte de una nube vacía")
        return float((S.points @ lam).max())
    if isinstance(S, Union):
        if not S.members:
            raise EmptySet("Función soporte de una unión vacía")
        return max(support_function(m, lam) for m in S.members)
    raise ValidationError(f"Tipo de conjunto no soportado: {type(S).__name__}",
                          invariant="target-kind")


def support_gap(phi, S: TargetSet, directions: np.ndarray) -> float:
    """max sobre la malla de ⟨φ,λ⟩ - σ_S(λ), acotado inferiormente por 0 (λ = 0)."""
    if not S.convex:
        raise NonConvexSet(f"La caracterización por soporte requiere un conjunto convexo "
                           f"(recibido {S.kind})")
    phi = as_point(phi, "φ")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if isinstance(S, Ball):
        sigma = directions @ S.center + S.radius * np.linalg.norm(directions, axis=1)
    elif isinstance(S, Segment):
        sigma = np.maximum(directions @ S.a, directions @ S.b)
    else:
        sigma = (directions @ S.vertices.T).max(axis=1)
    return float(max(0.0, (directions @ phi - sigma).max()))


def membership_via_support(phi, S: TargetSet, directions: np.ndarray,
                           tol: float = 1e-9) -> bool:
    """
    Pertenencia φ ∈ S por la caracterización con función soporte.

    El supremo sobre la bola unidad se aproxima por la malla de direcciones;
    puntos fuera de S a distancia menor que el error de la malla pueden
    aceptarse.

    Raises:
        NonConvexSet: para uniones y nubes
    """
    return support_gap(phi, S, directions) <= tol


def in_convex_hull(phi, generators, config: Optional[Dict] = None) -> bool:
    """
    Factibilidad de φ = Σ w_k g_k con w en el símplex, decidida por el LP.

    Args:
        phi: Punto
        generators: Arreglo (k, d) no vacío
    """
    phi = as_point(phi, "φ")
    G = np.asarray(generators, dtype=float)
    if G.ndim == 1:
        G = G.reshape(-1, 1)
    if G.shape[0] == 0:
        raise EmptySet("Envolvente sin generadores")
    k, d = G.shape
    matrix = np.vstack([G.T, np.ones((1, k))])
    rhs = np.concatenate([phi, [1.0]])
    program = LinearProgram(np.zeros(k), matrix, rhs, senses=["="] * (d + 1))
    try:
        SimplexSolver.from_config(config).solve(program)
        return True
    except Infeasible:
        return False


# --- Muestreo ---

def sample(S: TargetSet, resolution: float) -> PointCloud:
    """
    Nube enlazada que aproxima S con separación <= h.

    Segmentos y bordes de polígonos quedan enlazados; en 2-D las bolas se
    muestrean como anillos concéntricos y las envolventes como borde más una
    retícula interior.
    """
    h = float(resolution)
    if isinstance(S, PointCloud):
        return S
    if isinstance(S, Segment):
        return _sample_polyline([S.a, S.b], h, closed=False)
    if isinstance(S, Ball):
        return _sample_ball(S, h)
    if isinstance(S, HullOfPoints):
        return _sample_hull(S.vertices, h)
    if isinstance(S, Union):
        return merge_clouds([sample(m, h) for m in S.members], h)
    raise ValidationError(f"Tipo de conjunto no soportado: {type(S).__name__}",
                          invariant="target-kind")


def merge_clouds(clouds: Sequence[PointCloud], resolution: float) -> PointCloud:
    """Concatena nubes desplazando los índices de enlaces."""
    points, links, offset = [], [], 0
    dim = None
    for cloud in clouds:
        dim = cloud.dim
        points.append(cloud.points)
        if cloud.links.size:
            links.append(cloud.links + offset)
        offset += cloud.size
    if not points:
        raise EmptySet("Unión sin miembros")
    P = np.vstack(points) if offset else np.zeros((0, dim))
    L = np.vstack(links) if links else None
    return PointCloud(P, resolution, L)


def _sample_polyline(vertices: List[np.ndarray], h: float, closed: bool) -> PointCloud:
    corners = list(vertices) + ([vertices[0]] if closed else [])
    points = [corners[0]]
    for a, b in zip(corners[:-1], corners[1:]):
        n = max(1, math.ceil(float(np.linalg.norm(b - a)) / h))
        for k in range(1, n + 1):
            points.append(a + (b - a) * (k / n))
    if closed:
        points.pop()
    P = np.array(points)
    count = P.shape[0]
    if count == 1 or (count == 2 and np.allclose(P[0], P[1])):
        return PointCloud(P[:1], h)
    links = [(i, i + 1) for i in range(count - 1)]
    if closed and count > 2:
        links.append((count - 1, 0))
    return PointCloud(P, h, links)


def _sample_ball(S: Ball, h: float) -> PointCloud:
    d, c, r = S.dim, S.center, S.radius
    if r == 0:
        return PointCloud(c[None, :], h)
    if d == 1:
        return _sample_polyline([c - r, c + r], h, closed=False)
    if d == 2:
        rings = [PointCloud(c[None, :], h)]
        count = math.ceil(r / h)
        for k in range(1, count + 1):
            rk = r * k / count
            n = max(3, math.ceil(2 * math.pi * rk / h))
            theta = 2 * math.pi * np.arange(n) / n
            ring = c + rk * np.column_stack([np.cos(theta), np.sin(theta)])
            links = [(i, (i + 1) % n) for i in range(n)]
            rings.append(PointCloud(ring, h, links))
        return merge_clouds(rings, h)
    # d >= 3: superficie con una esfera de Fibonacci más el centro
    n = min(20000, max(8, math.ceil(4 * math.pi * r * r / (h * h))))
    shell = c + r * fibonacci_sphere(n) if d == 3 else c + r * _random_sphere(d, n)
    return PointCloud(np.vstack([c[None, :], shell]), h)


def _sample_hull(V: np.ndarray, h: float) -> PointCloud:
    d = V.shape[1]
    if d == 1 or V.shape[0] == 1:
        lo, hi = V.min(axis=0), V.max(axis=0)
        return _sample_polyline([lo, hi], h, closed=False)
    if d == 2:
        try:
            hull = ConvexHull(V)
        except QhullError:
            # Vértices colineales: el segmento entre los extremos
            order = np.lexsort(V.T[::-1])
            return _sample_polyline([V[order[0]], V[order[-1]]], h, closed=False)
        boundary = _sample_polyline([V[i] for i in hull.vertices], h, closed=True)
        return merge_clouds([boundary, _interior_lattice(hull.equations, V, h)], h)
    # d >= 3: vértices y aristas entre todos los pares
    edges = [_sample_polyline([V[i], V[j]], h, closed=False)
             for i, j in itertools.combinations(range(V.shape[0]), 2)]
    return merge_clouds(edges, h)


def _interior_lattice(equations: np.ndarray, V: np.ndarray, h: float) -> PointCloud:
    lo, hi = V.min(axis=0), V.max(axis=0)
    xs = np.arange(lo[0] + h, hi[0], h)
    ys = np.arange(lo[1] + h, hi[1], h)
    if xs.size == 0 or ys.size == 0:
        return PointCloud(np.zeros((0, 2)), h)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    inside = np.all(grid @ equations[:, :-1].T + equations[:, -1] < -1e-12, axis=1)
    index = -np.ones(grid.shape[0], dtype=int)
    index[inside] = np.arange(int(inside.sum()))
    cols = ys.size
    links = []
    for flat in np.nonzero(inside)[0]:
        i, j = divmod(int(flat), cols)
        if i + 1 < xs.size and inside[flat + cols]:
            links.append((index[flat], index[flat + cols]))
        if j + 1 < cols and inside[flat + 1]:
            links.append((index[flat], index[flat + 1]))
    return PointCloud(grid[inside], h, links or None)


# --- Mallas de direcciones ---

def fibonacci_sphere(count: int) -> np.ndarray:
    """count direcciones casi uniformes en la esfera S²."""
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    theta = math.pi * (1.0 + math.sqrt(5.0)) * k
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta), z])


def _random_sphere(d: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(0)
    X = rng.standard_normal((count, d))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def direction_grid(d: int, count: Optional[int] = None, generators=None,
                   config: Optional[Dict] = None) -> np.ndarray:
    """
    Malla finita de direcciones unitarias.

    d = 1: ±1. d = 2: K ángulos equiespaciados. d = 3: esfera de Fibonacci.
    d > 3: diferencias normalizadas entre generadores más los ejes ±e_i.
    """
    geometry = (config or {}).get("geometry", {})
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        K = int(count or geometry.get("grid_2d", 720))
        theta = 2 * math.pi * np.arange(K) / K
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if d == 3:
        return fibonacci_sphere(int(count or geometry.get("grid_3d", 2000)))

    axes = np.vstack([np.eye(d), -np.eye(d)])
    if generators is None:
        return axes
    G = np.asarray(generators, dtype=float).reshape(-1, d)
    diffs = [G[i] - G[j] for i in range(G.shape[0]) for j in range(G.shape[0]) if i != j]
    diffs = [v / np.linalg.norm(v) for v in diffs if np.linalg.norm(v) > 1e-12]
    grid = np.vstack([axes] + ([np.array(diffs)] if diffs else []))
    _, unique = np.unique(np.round(grid, 12), axis=0, return_index=True)
    return grid[np.sort(unique)]


# --- Semiespacios no acotados ---

def clip_halfspace(H: Halfspace, radius: float) -> HullOfPoints:
    """
    Recorta H a la caja [-R, R]^d, que contiene la bola de radio R.

    Returns:
        Polítopo compacto como HullOfPoints

    Raises:
        EmptySet: si H no toca la caja
    """
    d = H.dim
    corners = np.array(list(itertools.product([-radius, radius], repeat=d)), dtype=float)
    values = corners @ H.normal - H.offset
    vertices = [c for c, v in zip(corners, values) if v <= 1e-12]
    for i, j in itertools.combinations(range(corners.shape[0]), 2):
        if np.count_nonzero(corners[i] != corners[j]) != 1:
            continue
        vi, vj = values[i], values[j]
        if (vi < 0 < vj) or (vj < 0 < vi):
            t = vi / (vi - vj)
            vertices.append(corners[i] + t * (corners[j] - corners[i]))
    if not vertices:
        raise EmptySet("El semiespacio no corta la región de pagos",
                       {"halfspace": H.to_dict(), "radius": radius})
    V = np.unique(np.round(np.array(vertices), 15), axis=0)
    return HullOfPoints(V)
