"""
Capa estocástica: muestreo sembrado, horizonte de Hoeffding y auditoría de desviación
"""

from .sampling import (
    ALGORITHMS, SeededSource, SampledRound, make_generator, run_stochastic, empirical_deviation
)
from .horizon import (
    hoeffding_horizon, clopper_pearson_upper, deviation_event, deviation_audit
)

__all__ = [
    'ALGORITHMS', 'SeededSource', 'SampledRound', 'make_generator', 'run_stochastic',
    'empirical_deviation',
    'hoeffding_horizon', 'clopper_pearson_upper', 'deviation_event', 'deviation_audit'
]
