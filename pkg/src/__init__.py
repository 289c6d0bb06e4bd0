"""
BlackwellLab - Aproximabilidad y Evitabilidad de Blackwell en Juegos Repetidos
"""

__version__ = "1.0.0"
__author__ = "BlackwellLab Team"
