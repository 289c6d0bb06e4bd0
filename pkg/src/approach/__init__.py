"""
Aproximación: trayectorias, tolerancias, estrategia 𝔤*, adversarios y auditorías
"""

from .trajectory import Round, Trajectory, arbitrary_action
from .schedule import ToleranceSchedule, GeometricHalving, CustomSchedule, schedule_from_dict
from .gstar import (
    HalfspaceForcingExample, NotASetEvidence, find_example, GStar, g_star_step,
    membership_resolution
)
from .runner import (
    run_game, run_approach, potential_audit, force_audit, rate_horizon, rate_check, envelope
)
from .adversaries import (
    RandomAdversary, BestResponseAdversary, BestResponseApproacher, ScriptedPlayer,
    FixedPlayer, MaximinPlayer, load_script, make_adversary, ADVERSARIES
)

__all__ = [
    'Round', 'Trajectory', 'arbitrary_action',
    'ToleranceSchedule', 'GeometricHalving', 'CustomSchedule', 'schedule_from_dict',
    'HalfspaceForcingExample', 'NotASetEvidence', 'find_example', 'GStar', 'g_star_step',
    'membership_resolution',
    'run_game', 'run_approach', 'potential_audit', 'force_audit', 'rate_horizon',
    'rate_check', 'envelope',
    'RandomAdversary', 'BestResponseAdversary', 'BestResponseApproacher', 'ScriptedPlayer',
    'FixedPlayer', 'MaximinPlayer', 'load_script', 'make_adversary', 'ADVERSARIES'
]
