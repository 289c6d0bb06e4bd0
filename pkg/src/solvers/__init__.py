"""
Solvers: dense simplex and zero-sum matrix games
"""

from .simplex import LinearProgram, LPSolution, SimplexSolver, solve_lp, dual_of
from .matrix_game import MatrixGameSolution, matrix_game, lower_value, best_response, row_best_response

__all__ = [
    'LinearProgram', 'LPSolution', 'SimplexSolver', 'solve_lp', 'dual_of',
    'MatrixGameSolution', 'matrix_game', 'lower_value', 'best_response', 'row_best_response'
]
