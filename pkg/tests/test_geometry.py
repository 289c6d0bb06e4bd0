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
Pruebas de conjuntos objetivo, proyección, muestreo y función soporte.
"""


import math

import numpy as np
import pytest

from src.core.errors import EmptySet, NonConvexSet, ValidationError
from src.geometry.hull import PayoffHull
from src.geometry.operations import (
    clip_halfspace, direction_grid, hausdorff, in_convex_hull, membership_via_support,
    neighborhood_contains, project, sample, support_function
)
from src.geometry.sets import Ball, Halfspace, HullOfPoints, PointCloud, Segment, Union, target_from_dict


class TestProjection:

    def test_segment(self, s0):
        result = project([1.0, 0.0], s0)
        np.testing.assert_allclose(result.point, [0.5, 0.5])
        assert result.distance == pytest.approx(math.sqrt(0.5))

    def test_ball_inside_and_outside(self):
        B = Ball([1.0, 0.0], 1.0)
        assert project([1.5, 0.0], B).distance == 0.0
        result = project([4.0, 0.0], B)
        np.testing.assert_allclose(result.point, [2.0, 0.0])
        assert result.distance == pytest.approx(2.0)

    def test_union_tie_is_lexicographic(self, s1):
        result = project([0.0, 0.0], s1)
        np.testing.assert_allclose(result.point, [0.0, 0.5])
        assert result.distance == pytest.approx(0.5)

    def test_linked_cloud_is_a_polyline(self):
        cloud = PointCloud([[0.0, 0.0], [1.0, 0.0]], 1.0, [(0, 1)])
        result = project([0.5, 1.0], cloud)
        np.testing.assert_allclose(result.point, [0.5, 0.0])
        assert result.distance == pytest.approx(1.0)

    def test_hull_interior_and_exterior(self):
        square = HullOfPoints([[0, 0], [1, 0], [0, 1], [1, 1]])
        assert project([0.3, 0.7], square).distance == 0.0
        assert project([2.0, 0.5], square).distance == pytest.approx(1.0)

    def test_empty_cloud(self):
        with pytest.raises(EmptySet):
            project([0.0], PointCloud(np.zeros((0, 1)), 0.1))

    def test_neighborhood(self, s0):
        assert neighborhood_contains([0.6, 0.5], s0, 0.1)
        assert not neighborhood_contains([0.7, 0.5], s0, 0.1)


class TestSampling:

    def test_segment_spacing(self):
        cloud = sample(Segment([0.0, 0.0], [1.0, 0.0]), 0.3)
        assert cloud.size == 5
        assert cloud.links.shape == (4, 2)
        steps = np.linalg.norm(np.diff(cloud.points, axis=0), axis=1)
        assert steps.max() <= 0.3

    def test_keep_drops_incident_links(self):
        cloud = sample(Segment([0.0], [1.0]), 0.25)
        kept = cloud.keep([True, True, False, True, True])
        assert kept.size == 4
        assert kept.links.tolist() == [[0, 1], [2, 3]]

    def test_union_merges_with_offsets(self, s1):
        cloud = sample(s1, 0.5)
        assert cloud.size == 4
        assert cloud.links.tolist() == [[0, 1], [2, 3]]

    def test_hausdorff(self):
        A = Segment([0.0, 0.0], [1.0, 0.0])
        B = Segment([0.0, 1.0], [1.0, 1.0])
        assert hausdorff(A, B, resolution=0.1) == pytest.approx(1.0)
        assert hausdorff(A, A, resolution=0.1) == 0.0

    def test_auto_links(self):
        S = target_from_dict({"cloud": {"points": [[0, 0], [0.1, 0], [0.5, 0]], "h": 0.1}})
        assert S.links.tolist() == [[0, 1]]

    def test_unknown_descriptor(self):
        with pytest.raises(ValidationError) as info:
            target_from_dict({"torus": {}})
        assert info.value.invariant == "target-descriptor"


class TestSupport:

    def test_support_function(self, s1):
        assert support_function(Ball([1.0, 0.0], 2.0), [0.0, 1.0]) == pytest.approx(2.0)
        assert support_function(s1, [1.0, 1.0]) == pytest.approx(1.0)

    def test_union_is_not_convex(self, s1):
        with pytest.raises(NonConvexSet):
            membership_via_support([0.0, 0.0], s1, direction_grid(2))

    @pytest.mark.parametrize("d", [2, 3])
    def test_membership_matches_projection(self, d):
        """Fuera de la banda de error de la malla, soporte y proyección coinciden."""
        rng = np.random.Generator(np.random.Philox(70 + d))
        directions = direction_grid(d)
        # ángulo máximo entre una normal y la dirección más cercana de la malla
        theta = math.pi / 720 if d == 2 else 0.1
        disagreements = []
        for k in range(250):
            kind = k % 3
            if kind == 0:
                S = Ball(rng.uniform(-1, 1, d), rng.uniform(0.1, 1.0))
                diameter = 2 * S.radius
            elif kind == 1:
                S = Segment(rng.uniform(-1, 1, d), rng.uniform(-1, 1, d))
                diameter = S.length
            else:
                S = HullOfPoints(rng.uniform(-1, 1, (int(rng.integers(3, 7)), d)))
                V = S.vertices
                diameter = float(np.linalg.norm(V[:, None] - V[None, :], axis=2).max())
            phi = rng.uniform(-2, 2, d)
            if kind != 1 and rng.uniform() < 0.3:
                phi = S.center if kind == 0 else rng.dirichlet(np.ones(S.vertices.shape[0])) @ S.vertices

            distance = project(phi, S).distance
            member = membership_via_support(phi, S, directions, tol=1e-6)
            band = (diameter * math.sin(theta) + 1e-6) / math.cos(theta)
            if distance <= 1e-6 and not member:
                disagreements.append((k, distance))
            if distance > band and member:
                disagreements.append((k, distance))
        assert disagreements == []


class TestHulls:

    def test_in_convex_hull(self):
        V = [[0, 0], [1, 0], [0, 1]]
        assert in_convex_hull([0.2, 0.2], V)
        assert not in_convex_hull([0.6, 0.6], V)

    def test_payoff_hull_ray(self, bilinear):
        hull = PayoffHull(bilinear.vertices)
        assert hull.contains([0.5, 0.5])
        assert not hull.contains([0.6, 0.6])
        lo, hi = hull.ray_interval([0.0, 0.0], [1.0, 0.0])
        assert lo == 0.0
        assert hi == pytest.approx(1.0)

    def test_degenerate_hull_is_an_interval(self, biased_pennies):
        hull = PayoffHull(biased_pennies.vertices)
        assert hull.rank == 1
        lo, hi = hull.ray_interval([0.0, 0.0], [1.0, 0.0])
        assert hi == pytest.approx(1.5)
        assert hull.ray_interval([0.0, 0.0], [0.0, 1.0]) == (0.0, 0.0)

    def test_clip_halfspace(self, halfline):
        np.testing.assert_allclose(np.sort(halfline.vertices[:, 0]), [-2.0, 0.0])
        square = clip_halfspace(Halfspace([1.0, 0.0], 0.0), 1.0)
        assert sorted(map(tuple, square.vertices.tolist())) == [
            (-1.0, -1.0), (-1.0, 1.0), (0.0, -1.0), (0.0, 1.0)]

    def test_clip_outside_box(self):
        with pytest.raises(EmptySet):
            clip_halfspace(Halfspace([1.0], -5.0), 1.0)

    def test_union_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            Union([Segment([0.0], [1.0]), Segment([0.0, 0.0], [1.0, 1.0])])


class TestDirectionGrid:

    def test_sizes(self):
        assert direction_grid(1).tolist() == [[1.0], [-1.0]]
        assert direction_grid(2, 8).shape == (8, 2)
        assert direction_grid(3).shape == (2000, 3)

    def test_unit_norm(self):
        for d in (2, 3):
            np.testing.assert_allclose(np.linalg.norm(direction_grid(d), axis=1), 1.0)

    def test_high_dimension_includes_axes(self):
        grid = direction_grid(4, generators=np.eye(4))
        for axis in np.vstack([np.eye(4), -np.eye(4)]):
            assert np.any(np.all(np.isclose(grid, axis), axis=1))
