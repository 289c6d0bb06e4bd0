"""
Línea de comandos: escenarios, orquestación de lotes e informes de corrida
"""

from .scenarios import (
    Scenario, BUILTIN_SCENARIOS, build_target, list_scenarios, load_scenario, save_scenario
)
from .reports import RunReport, ResourceProbe, EXIT_PASS, EXIT_ERROR, EXIT_FAIL
from .batch import run_batch, run_jobs

__all__ = [
    'Scenario', 'BUILTIN_SCENARIOS', 'build_target', 'list_scenarios', 'load_scenario',
    'save_scenario',
    'RunReport', 'ResourceProbe', 'EXIT_PASS', 'EXIT_ERROR', 'EXIT_FAIL',
    'run_batch', 'run_jobs'
]
