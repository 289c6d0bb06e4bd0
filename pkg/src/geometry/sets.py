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
BlackwellLab - Tipos Geométricos
Puntos, semiespacios y conjuntos objetivo compactos (bolas, segmentos,
envolventes, nubes de puntos y uniones finitas).

Todos los valores son inmutables después de construirse.
"""


from typing import Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import EmptySet, ValidationError


def as_point(coords, name: str = "punto") -> np.ndarray:
    """
    Convierte coordenadas a un vector float de solo lectura.

    Raises:
        ValidationError: si hay entradas no finitas o dimensión cero
    """
    p = np.array(coords, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValidationError(f"{name} sin coordenadas", invariant="point-dimension")
    if not np.all(np.isfinite(p)):
        raise ValidationError(f"{name} con entradas no finitas: {p}", invariant="point-finite")
    p.setflags(write=False)
    return p


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Halfspace:
    """Semiespacio {z : ⟨λ,z⟩ <= c}."""

    def __init__(self, normal, offset: float):
        self.normal = as_point(normal, "normal")
        if np.linalg.norm(self.normal) <= 0.0:
            raise ValidationError("La normal de un semiespacio debe ser no nula",
                                  invariant="halfspace-normal")
        self.offset = float(offset)

    @property
    def dim(self) -> int:
        return self.normal.size

    def contains(self, z, tol: float = 1e-9) -> bool:
        return float(self.normal @ np.asarray(z, dtype=float)) <= self.offset + tol

    def slack(self, z) -> float:
        """c - ⟨λ,z⟩ (positivo dentro)."""
        return self.offset - float(self.normal @ np.asarray(z, dtype=float))

    def to_dict(self) -> Dict:
        return {"normal": self.normal.tolist(), "offset": self.offset}

    def __repr__(self):
        return f"Halfspace(normal={self.normal.tolist()}, offset={self.offset:.6g})"


class NearestPointResult:
    """Minimizador ψ y distancia ρ(φ,S)."""

    def __init__(self, point: np.ndarray, distance: float):
        self.point = point
        self.distance = float(distance)

    def to_dict(self) -> Dict:
        return {"point": self.point.tolist(), "distance": self.distance}


class TargetSet:
    """Base de los conjuntos objetivo."""

    kind = "abstract"
    convex = False

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def to_dict(self) -> Dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, TargetSet) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self.to_dict()))


class Ball(TargetSet):
    """Bola cerrada B(c, r)."""

    kind = "ball"
    convex = True

    def __init__(self, center, radius: float):
        self.center = as_point(center, "centro")
        self.radius = float(radius)
        if not np.isfinite(self.radius) or self.radius < 0:
            raise ValidationError(f"Radio inválido: {radius}", invariant="ball-radius")

    @property
    def dim(self) -> int:
        return self.center.size

    def to_dict(self) -> Dict:
        return {"ball": {"center": self.center.tolist(), "radius": self.radius}}


class Segment(TargetSet):
    """Segmento cerrado [a, b]."""

    kind = "segment"
    convex = True

    def __init__(self, a, b):
        self.a = as_point(a, "extremo a")
        self.b = as_point(b, "extremo b")
        if self.a.size != self.b.size:
            raise ValidationError("Extremos de dimensión distinta", invariant="segment-dimension")

    @property
    def dim(self) -> int:
        return self.a.size

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    def to_dict(self) -> Dict:
        return {"segment": {"a": self.a.tolist(), "b": self.b.tolist()}}


class HullOfPoints(TargetSet):
    """Envolvente convexa de un conjunto finito de vértices."""

    kind = "hull"
    convex = True

    def __init__(self, vertices):
        V = np.array(vertices, dtype=float)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        if V.shape[0] == 0:
            raise EmptySet("Envolvente sin vértices")
        if not np.all(np.isfinite(V)):
            raise ValidationError("Vértices no finitos", invariant="hull-finite")
        self.vertices = _frozen(V)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def to_dict(self) -> Dict:
        return {"hull": {"vertices": self.vertices.tolist()}}


class PointCloud(TargetSet):
    """
    Nube finita de puntos con resolución h.

    Los enlaces (pares de índices) marcan puntos consecutivos de una curva
    muestreada; la nube representa entonces la poligonal formada por puntos
    y enlaces. Una nube puede quedar vacía tras el pelado.
    """

    kind = "cloud"

    def __init__(self, points, resolution: float, links: Optional[Sequence] = None):
        P = np.array(points, dtype=float)
        if P.ndim == 1:
            P = P.reshape(-1, 1) if P.size else P.reshape(0, 1)
        if not np.all(np.isfinite(P)):
            raise ValidationError("Puntos no finitos en la nube", invariant="cloud-finite")
        self.resolution = float(resolution)
        if not self.resolution > 0:
            raise ValidationError(f"Resolución h debe ser > 0: {resolution}",
                                  invariant="cloud-resolution")
        L = np.array(links if links is not None else [], dtype=int).reshape(-1, 2)
        if L.size and (L.min() < 0 or L.max() >= P.shape[0]):
            raise ValidationError("Enlace con índice fuera de la nube", invariant="cloud-links")
        self.points = _frozen(P)
        self.links = _frozen(L)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def is_empty(self) -> bool:
        return self.points.shape[0] == 0

    def keep(self, mask) -> "PointCloud":
        """
        Subnube con los puntos marcados; los enlaces incidentes a puntos
        eliminados desaparecen.
        """
        mask = np.asarray(mask, dtype=bool)
        new_index = np.cumsum(mask) - 1
        links = self.links
        if links.size:
            alive = mask[links[:, 0]] & mask[links[:, 1]]
            links = new_index[links[alive]]
        return PointCloud(self.points[mask], self.resolution, links)

    def to_dict(self) -> Dict:
        body = {"points": self.points.tolist(), "h": self.resolution}
        if self.links.size:
            body["links"] = self.links.tolist()
        return {"cloud": body}


class Union(TargetSet):
    """Unión finita de conjuntos objetivo."""

    kind = "union"

    def __init__(self, members: List[TargetSet]):
        members = list(members)
        dims = {m.dim for m in members}
        if len(dims) > 1:
            raise ValidationError(f"Miembros de dimensiones distintas: {sorted(dims)}",
                                  invariant="union-dimension")
        self.members = tuple(members)

    @property
    def dim(self) -> int:
        if not self.members:
            raise EmptySet("Unión sin miembros")
        return self.members[0].dim

    def to_dict(self) -> Dict:
        return {"union": [m.to_dict() for m in self.members]}


def target_from_dict(descriptor: Dict, link_factor: float = 1.5) -> TargetSet:
    """
    Construye un TargetSet desde un descriptor etiquetado.

    Formatos: {"ball":{center,radius}}, {"segment":{a,b}}, {"hull":{vertices}},
    {"cloud":{points,h,links?,auto_link?}}, {"union":[...]}.

    Raises:
        ValidationError: etiqueta desconocida o campos faltantes
    """
    if not isinstance(descriptor, dict) or len(descriptor) != 1:
        raise ValidationError(f"Descriptor de conjunto inválido: {descriptor!r}",
                              invariant="target-descriptor")
    (tag, body), = descriptor.items()
    try:
        if tag == "ball":
            return Ball(body["center"], body["radius"])
        if tag == "segment":
            return Segment(body["a"], body["b"])
        if tag == "hull":
            return HullOfPoints(body["vertices"])
        if tag == "cloud":
            links = body.get("links")
            if links is None and body.get("auto_link", True):
                links = auto_links(body["points"], body["h"] * link_factor)
            return PointCloud(body["points"], body["h"], links)
        if tag == "union":
            return Union([target_from_dict(m, link_factor) for m in body])
    except KeyError as e:
        raise ValidationError(f"Campo faltante {e} en descriptor '{tag}'",
                              invariant="target-descriptor")
    raise ValidationError(f"Tipo de conjunto desconocido: {tag}", invariant="target-descriptor")


def auto_links(points, radius: float) -> np.ndarray:
    """Enlaza pares de puntos a distancia <= radius."""
    from scipy.spatial import cKDTree

    P = np.array(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.shape[0] < 2:
        return np.zeros((0, 2), dtype=int)
    pairs = cKDTree(P).query_pairs(radius, output_type="ndarray")
    return np.asarray(sorted(map(tuple, pairs)), dtype=int).reshape(-1, 2)
