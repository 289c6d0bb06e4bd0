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
BlackwellLab - Fixtures de Pruebas
Juego bilineal del símplex, sus objetivos, monedas puras y configuración temporal.
"""


import copy

import numpy as np
import pytest

from src.core.config import DEFAULT_CONFIG, merge_config
from src.core.logger import reset_logger
from src.games.game import game_from_dict
from src.geometry.sets import Halfspace, Segment, Union
from src.geometry.operations import clip_halfspace
from src.avoid.shrinkage import _VALUE_CACHE
from src.cli.scenarios import BILINEAR_SIMPLEX, PURE_PENNIES


@pytest.fixture(autouse=True)
def clean_state():
    """Logger deshabilitado y caché de valores vacía en cada prueba."""
    reset_logger()
    _VALUE_CACHE.clear()
    yield
    reset_logger()
    _VALUE_CACHE.clear()


@pytest.fixture
def config(tmp_path):
    """Configuración por defecto con carpetas dentro de tmp_path y sin logs."""
    return merge_config(copy.deepcopy(DEFAULT_CONFIG), {
        "system": {
            "output_folder": str(tmp_path / "results"),
            "logs_folder": str(tmp_path / "logs"),
            "enable_logs": False,
            "show_progress": False,
        }
    })


@pytest.fixture
def bilinear():
    """f(x,y) = (x1·y1, x2·y2) en modo mixto."""
    return game_from_dict(BILINEAR_SIMPLEX)


@pytest.fixture
def pennies():
    """Monedas puras en ℝ¹."""
    return game_from_dict(PURE_PENNIES)


@pytest.fixture
def s0():
    return Segment([0.0, 0.0], [0.5, 0.5])


@pytest.fixture
def s1():
    """Clausura de S1."""
    return Union([Segment([0.5, 0.0], [1.0, 0.0]), Segment([0.0, 0.5], [0.0, 1.0])])


@pytest.fixture
def s2():
    return Union([Segment([0.0, 0.0], [1.0, 0.0]),
                  Segment([0.0, 0.0], [0.0, 0.4]),
                  Segment([0.0, 0.6], [0.0, 1.0])])


@pytest.fixture
def halfline():
    """(-∞, 0] recortado a [-2, 0]."""
    return clip_halfspace(Halfspace([1.0], 0.0), 2.0)


@pytest.fixture
def biased_pennies():
    """Pagos (G_ij + 1/2, 0): 𝒴 con ȳ uniforme fuerza la primera coordenada a 1/2."""
    G = np.array([[1.0, -1.0], [-1.0, 1.0]])
    payoffs = np.stack([G + 0.5, np.zeros_like(G)], axis=2)
    return game_from_dict({"d": 2, "payoffs": payoffs.tolist(), "mode": "mixed"})


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240601))
