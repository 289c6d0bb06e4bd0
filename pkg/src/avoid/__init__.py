"""
Evitación: contraejemplos, pelado en cáscaras, empuje antiforzante y estrategia 𝔥*
"""

from .shrinkage import (
    Counterexample, epsilon_of_tau, appendix_constants, drive_budget, find_counterexample,
    shrink, perturb_cloud
)
from .onion import PeelStage, OnionDecomposition, peel, rind_index, stage_hausdorff
from .drive import DriveResult, antiforce_drive, forcing_certificate
from .hstar import HStar, h_star_step
from .classify import Classification, classify, APPROACHABLE, AVOIDABLE, UNDECIDED

__all__ = [
    'Counterexample', 'epsilon_of_tau', 'appendix_constants', 'drive_budget',
    'find_counterexample', 'shrink', 'perturb_cloud',
    'PeelStage', 'OnionDecomposition', 'peel', 'rind_index', 'stage_hausdorff',
    'DriveResult', 'antiforce_drive', 'forcing_certificate',
    'HStar', 'h_star_step',
    'Classification', 'classify', 'APPROACHABLE', 'AVOIDABLE', 'UNDECIDED'
]
