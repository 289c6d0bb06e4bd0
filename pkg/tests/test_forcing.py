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
Pruebas de los oráculos de forzamiento y de sus dualidades.
"""


import numpy as np
import pytest

from src.core.errors import KindMismatch
from src.games.forcing import (
    forcing_dualities_check, g_s_gap, halfspace_minimax_check, nonminimax_halfspace,
    x_one_forces_halfspace, x_two_forces_halfspace, x_two_forces_set,
    y_one_forces_complement, y_two_forces_complement
)
from src.games.game import Mixed, Pure, game_from_dict, payoff, scalarize
from src.geometry.operations import direction_grid
from src.geometry.sets import Halfspace


def random_pure_game(rng):
    m, n, d = (int(v) for v in rng.integers(1, [5, 5, 4]))
    payoffs = rng.integers(-3, 4, size=(m, n, d)).astype(float)
    return game_from_dict({"d": d, "payoffs": payoffs.tolist(), "mode": "pure"})


def random_halfspace(g, rng):
    """Normal aleatoria y umbral dentro del rango de los pagos escalarizados."""
    lam = rng.standard_normal(g.d)
    G = scalarize(g, lam)
    return Halfspace(lam, float(rng.uniform(G.min() - 0.5, G.max() + 0.5)))


class TestHalfspaceOracles:

    def test_pennies_nonminimax_halfspace(self, pennies):
        H = nonminimax_halfspace(pennies, [1.0])
        assert H.offset == 0.0
        assert x_two_forces_halfspace(pennies, H) is not None
        assert x_one_forces_halfspace(pennies, H) is None
        assert not halfspace_minimax_check(pennies, H)["consistent"]

    def test_pure_second_mover_table(self, pennies):
        H = Halfspace([1.0], 0.0)
        certificate = x_two_forces_halfspace(pennies, H)
        assert certificate.table == {0: 1, 1: 0}
        for j in range(2):
            z = payoff(pennies, certificate.respond(Pure(j)), Pure(j))
            assert H.contains(z)

    def test_y_complement_certificates(self, biased_pennies):
        H = Halfspace([1.0, 0.0], 0.25)
        one = y_one_forces_complement(biased_pennies, H)
        assert one.order == 1
        np.testing.assert_allclose(one.witness.probabilities, [0.5, 0.5], atol=1e-9)
        assert one.value == pytest.approx(0.5, abs=1e-9)
        two = y_two_forces_complement(biased_pennies, H)
        assert two.order == 2
        # cualquier x recibe una columna que deja ⟨λ,f⟩ > c
        for x in (Pure(0), Pure(1), Mixed([0.3, 0.7])):
            assert not H.contains(payoff(biased_pennies, x, two.respond(x)))

    def test_x_one_force_witness(self, bilinear):
        H = Halfspace([1.0, 1.0], 0.5)
        certificate = x_one_forces_halfspace(bilinear, H)
        assert certificate is not None
        for j in range(2):
            assert H.contains(payoff(bilinear, certificate.witness, Pure(j)), 1e-9)
        assert x_one_forces_halfspace(bilinear, Halfspace([1.0, 1.0], 0.4)) is None

    def test_certificate_serialises(self, pennies):
        body = x_two_forces_halfspace(pennies, Halfspace([1.0], 0.0)).to_dict()
        assert body["response_table"] == {"0": 1, "1": 0}
        assert body["target"]["complement"] is False


class TestDualities:

    def test_random_pure_games(self):
        rng = np.random.Generator(np.random.Philox(5))
        violations = []
        for k in range(200):
            g = random_pure_game(rng)
            H = random_halfspace(g, rng)
            report = forcing_dualities_check(g, H)
            if not report["consistent"]:
                violations.append((k, report["violations"]))
            # oráculo directo contra la enumeración
            if (x_one_forces_halfspace(g, H) is None) != (y_two_forces_complement(g, H) is not None):
                violations.append((k, "oracle"))
        assert violations == []

    def test_random_mixed_games_two_force_implies_one_force(self):
        rng = np.random.Generator(np.random.Philox(11))
        violations = []
        for k in range(100):
            m, n, d = (int(v) for v in rng.integers(1, [5, 5, 4]))
            payoffs = rng.uniform(-1, 1, size=(m, n, d))
            g = game_from_dict({"d": d, "payoffs": payoffs.tolist(), "mode": "mixed"})
            report = halfspace_minimax_check(g, random_halfspace(g, rng))
            if not report["consistent"]:
                violations.append(k)
        assert violations == []

    def test_general_sets_require_pure_games(self, bilinear, s0):
        with pytest.raises(KindMismatch):
            forcing_dualities_check(bilinear, s0)

    def test_general_set_second_mover(self, bilinear, s0):
        # contra cada columna pura la otra fila da (0,0) ∈ S0; contra ν uniforme ninguna fila pura llega
        certificate = x_two_forces_set(bilinear, s0, 0.01, opponent_grid=[Pure(0), Pure(1)])
        assert certificate.table == {0: 1, 1: 0}
        assert x_two_forces_set(bilinear, s0, 0.01, opponent_grid=[Mixed([0.5, 0.5])]) is None
        with pytest.raises(KindMismatch):
            x_two_forces_set(bilinear, s0)


class TestScalarizedGap:

    def test_support_scalarization_sees_the_hull_of_s1(self, bilinear, s1):
        # x uniforme deja f sobre la arista (1/2,0)-(0,1/2) de conv(S1)
        report = g_s_gap(bilinear, s1, direction_grid(2, 16), mixed_steps=4)
        assert abs(report["inf_sup"]) <= 1e-12
        assert abs(report["gap"]) <= 1e-12

    def test_pure_gap_on_halfline(self, pennies, halfline):
        report = g_s_gap(pennies, halfline, direction_grid(1))
        assert report == {"inf_sup": 1.0, "sup_inf": 0.0, "gap": 1.0}
