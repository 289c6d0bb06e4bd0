"""
Games: vector-payoff games, actions, scalarization and forcing oracles
"""

from .game import (
    Pure, Mixed, Action, PureGame, MixedGame, Game, game_from_dict, action_from_dict,
    payoff, expected_payoff, scalarize, g_S, solve_scalarized, upper_value, lower_value,
    minimax_gap, scalarized_values, minimax_property_report, simplex_grid
)
from .forcing import (
    ForceCertificate, x_one_forces_halfspace, y_two_forces_complement,
    y_one_forces_complement, x_two_forces_halfspace, x_two_forces_set,
    forcing_dualities_check, halfspace_minimax_check, nonminimax_halfspace, g_s_gap
)

__all__ = [
    'Pure', 'Mixed', 'Action', 'PureGame', 'MixedGame', 'Game', 'game_from_dict',
    'action_from_dict', 'payoff', 'expected_payoff', 'scalarize', 'g_S', 'solve_scalarized',
    'upper_value', 'lower_value', 'minimax_gap', 'scalarized_values',
    'minimax_property_report', 'simplex_grid',
    'ForceCertificate', 'x_one_forces_halfspace', 'y_two_forces_complement',
    'y_one_forces_complement', 'x_two_forces_halfspace', 'x_two_forces_set',
    'forcing_dualities_check', 'halfspace_minimax_check', 'nonminimax_halfspace', 'g_s_gap'
]
