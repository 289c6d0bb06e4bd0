"""
Geometry: target sets, projections, support functions and sampling
"""

from .sets import (
    Halfspace, TargetSet, Ball, Segment, HullOfPoints, PointCloud, Union,
    NearestPointResult, as_point, target_from_dict, auto_links
)
from .operations import (
    project, hausdorff, support_function, support_gap, membership_via_support,
    in_convex_hull, neighborhood_contains, cloud_distances, sample, merge_clouds,
    direction_grid, fibonacci_sphere, clip_halfspace
)
from .hull import PayoffHull

__all__ = [
    'Halfspace', 'TargetSet', 'Ball', 'Segment', 'HullOfPoints', 'PointCloud', 'Union',
    'NearestPointResult', 'as_point', 'target_from_dict', 'auto_links',
    'project', 'hausdorff', 'support_function', 'support_gap', 'membership_via_support',
    'in_convex_hull', 'neighborhood_contains', 'cloud_distances', 'sample', 'merge_clouds',
    'direction_grid', 'fibonacci_sphere', 'clip_halfspace', 'PayoffHull'
]
