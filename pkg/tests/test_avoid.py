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
Pruebas de contraejemplos, pelado en cáscaras, empujes y la estrategia 𝔥*.
"""


import math

import numpy as np
import pytest

from src.core.config import merge_config
from src.core.errors import CertificateMiss, DriveOverrun, EmptySet, NonPositiveInput, StageBudgetExceeded
from src.core.logger import init_logger
from src.games.game import Mixed, Pure, payoff
from src.geometry.operations import sample
from src.geometry.sets import Halfspace, PointCloud
from src.approach.gstar import GStar
from src.approach.adversaries import BestResponseAdversary, FixedPlayer
from src.approach.runner import rate_horizon, run_game
from src.approach.trajectory import Trajectory
from src.avoid import drive as drive_module
from src.avoid.classify import APPROACHABLE, AVOIDABLE, UNDECIDED, classify
from src.avoid.drive import antiforce_drive, forcing_certificate
from src.avoid.hstar import HStar, h_star_step
from src.avoid.onion import A_SET, EMPTY, UNDETERMINED, peel, rind_index, stage_hausdorff
from src.avoid.shrinkage import (
    Counterexample, appendix_constants, drive_budget, epsilon_of_tau, find_counterexample,
    perturb_cloud, shrink
)


@pytest.fixture
def coarse(config):
    """Resolución 0.5: la clausura de S1 queda en sus cuatro extremos enlazados."""
    return merge_config(config, {"geometry": {"resolution": 0.5}})


@pytest.fixture
def s1_onion(bilinear, s1, coarse):
    return peel(bilinear, s1, coarse)


@pytest.fixture
def biased_counterexample(biased_pennies):
    return find_counterexample(biased_pennies, PointCloud([[0.0, 0.0]], 0.1), 0.25)


class TestConstants:

    @pytest.mark.parametrize("tau", [1.0, 0.5, 0.25, 1e-3])
    def test_epsilon_below_last_constant(self, tau):
        constants = appendix_constants(tau, 1.5)
        assert 0 < constants["epsilon"] <= constants["eps3"] * (1 + 1e-12)

    def test_epsilon_matches_closed_form(self):
        tau, gamma = 0.5, 1.0
        direct = tau ** 2 * (math.sqrt(gamma ** 2 + tau ** 2) - gamma) / (8 * (4 * gamma ** 2 + tau ** 2))
        assert epsilon_of_tau(tau, gamma) == pytest.approx(direct, rel=1e-12)

    def test_epsilon_rejects_non_positive(self):
        with pytest.raises(NonPositiveInput):
            epsilon_of_tau(0.0, 1.0)

    def test_drive_budget(self):
        assert drive_budget(10, 1.0, 0.5) == 160
        with pytest.raises(NonPositiveInput):
            drive_budget(0, 1.0, 0.5)


class TestCounterexamples:

    def test_biased_pennies(self, biased_counterexample):
        ce = biased_counterexample
        np.testing.assert_allclose(ce.direction, [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(ce.phi, [1.5, 0.0], atol=1e-9)
        np.testing.assert_array_equal(ce.psi, [0.0, 0.0])
        assert ce.H.offset == pytest.approx(0.25)
        assert ce.value == pytest.approx(0.5, abs=1e-9)

    def test_diagonal_has_none(self, bilinear, s0, config):
        assert find_counterexample(bilinear, s0, 0.25, config=config) is None

    def test_shrink_removes_inner_endpoints(self, bilinear, s1):
        cloud = sample(s1, 0.5)
        shrunk, certificates = shrink(bilinear, cloud, 1.0 / 3.0)
        assert sorted(map(tuple, shrunk.points.tolist())) == [(0.0, 1.0), (1.0, 0.0)]
        assert sorted(tuple(ce.psi) for ce in certificates) == [(0.0, 0.5), (0.5, 0.0)]

    def test_robust_under_perturbation(self, bilinear, s1):
        """Una nube a distancia < ε(τ) sigue teniendo contraejemplo con holgura τ/4."""
        tau = 1.0 / 3.0
        cloud = sample(s1, 0.5)
        assert find_counterexample(bilinear, cloud, tau) is not None
        size = epsilon_of_tau(tau, bilinear.gamma)
        rng = np.random.Generator(np.random.Philox(31))
        misses = []
        for k in range(50):
            moved = perturb_cloud(cloud, size, rng)
            assert np.linalg.norm(moved.points - cloud.points, axis=1).max() < size
            if find_counterexample(bilinear, moved, tau / 4) is None:
                misses.append(k)
        assert misses == []

    def test_loose_points_carry_resolution_slack(self, biased_pennies):
        """
        Con puntos sueltos, φ = ψ + rλ sólo necesita distancia >= r - h al
        resto de la nube; con holgura 1e-9 el mismo ψ queda sin contraejemplo.
        """
        cloud = PointCloud([[0.0, 0.0], [0.45, 0.0]], 0.1)
        along = np.array([[1.0, 0.0]])
        ce = find_counterexample(biased_pennies, cloud, 0.25, directions=along)
        assert ce is not None
        np.testing.assert_array_equal(ce.psi, [0.0, 0.0])
        # 0.45 - r >= r - 0.1
        assert ce.phi[0] == pytest.approx(0.275, abs=1e-5)
        assert find_counterexample(biased_pennies, cloud, 0.25, directions=along,
                                   nearest_slack=1e-9) is None

    def test_linked_cloud_keeps_tight_slack(self, biased_pennies):
        # el mismo par enlazado: la poligonal tapa el rayo desde ψ = (0, 0)
        cloud = PointCloud([[0.0, 0.0], [0.45, 0.0]], 0.1, [(0, 1)])
        along = np.array([[1.0, 0.0]])
        assert find_counterexample(biased_pennies, cloud, 0.25, directions=along) is None

    def test_non_positive_tau(self, bilinear, s0):
        with pytest.raises(NonPositiveInput):
            find_counterexample(bilinear, s0, 0.0)


class TestOnion:

    def test_diagonal_is_an_a_set(self, bilinear, s0, config):
        dec = peel(bilinear, s0, config)
        assert dec.classification == A_SET
        assert dec.horizon is None
        assert dec.residual.size == sample(s0, 0.01).size
        assert rind_index(dec, [0.9, 0.1]) == math.inf

    def test_s1_empties_in_four_stages(self, s1_onion, bilinear):
        dec = s1_onion
        assert dec.classification == EMPTY
        assert dec.N == 4
        assert [stage.removed for stage in dec.stages] == [0, 0, 2, 2]
        assert dec.delta == epsilon_of_tau(0.25, bilinear.gamma)
        assert dec.horizon == math.ceil(8.0 / dec.delta)
        assert dec.horizon > 100_000

    def test_stage_hausdorff(self, s1_onion):
        gaps = stage_hausdorff(s1_onion)
        assert gaps[:2] == [0.0, 0.0]
        assert gaps[2] == pytest.approx(0.5)

    def test_rind_index(self, s1_onion):
        dec = s1_onion
        assert rind_index(dec, [1.0, 0.0]) == 3
        assert rind_index(dec, [0.5, 0.0]) == 2
        # dentro del tramo enlazado, pero lejos de los extremos que sobreviven
        assert rind_index(dec, [0.75, 0.0]) == 2
        assert rind_index(dec, [5.0, 5.0]) == -1

    def test_empty_cloud(self, bilinear):
        with pytest.raises(EmptySet):
            peel(bilinear, PointCloud(np.zeros((0, 2)), 0.1))

    def test_peel_is_audited(self, bilinear, s1, coarse, tmp_path):
        logged = merge_config(coarse, {"system": {"enable_logs": True}})
        logger = init_logger(logged)
        peel(bilinear, s1, logged, run_id="s1")
        for handler in logger.audit_logger.handlers:
            handler.flush()
        text = (tmp_path / "logs" / "audit.log").read_text(encoding="utf-8")
        assert text.count("| STAGE_PEELED | Run: s1 |") == 4
        assert text.count("| COUNTEREXAMPLE | Run: s1 |") == 4
        assert '"classification": "empty", "stages": 4, "N": 4' in text

    def test_stage_budget(self, bilinear, s1, coarse):
        with pytest.raises(StageBudgetExceeded) as info:
            peel(bilinear, s1, coarse, stage_budget=1)
        partial = info.value.partial
        assert partial.classification == UNDETERMINED
        assert len(partial.stages) == 1
        assert partial.residual.size == 4


class TestClassify:

    def test_diagonal_is_approachable(self, bilinear, s0, config):
        result = classify(bilinear, s0, config)
        assert result.verdict == APPROACHABLE
        assert result.strategy == "gstar"

    def test_s1_is_avoidable(self, bilinear, s1, coarse):
        result = classify(bilinear, s1, coarse)
        assert result.verdict == AVOIDABLE
        assert result.strategy == "hstar"
        assert result.to_dict()["N"] == 4

    def test_pure_game_is_undecided(self, pennies, halfline):
        result = classify(pennies, halfline)
        assert result.verdict == UNDECIDED
        assert abs(result.gap - 2.0) <= 1e-12
        assert result.to_dict()["minimax_gap"] == result.gap

    def test_s2_peels_down_to_the_forcible_segment(self, bilinear, s1, s2, config, coarse):
        """
        S2 contiene L_{e1}, que 𝒳 fuerza jugando e1: es aproximable, pero el
        pelado retira todo L_{e2}, incluido el tramo pegado al origen. S1 no
        contiene ningún L_x y se vacía.
        """
        fine = merge_config(config, {"geometry": {"resolution": 0.1}})
        result = classify(bilinear, s2, fine)
        assert result.verdict == APPROACHABLE
        assert result.strategy == "gstar"
        dec = result.decomposition
        assert dec.classification == A_SET
        residual = dec.residual.points
        np.testing.assert_array_equal(residual[:, 1], 0.0)
        assert np.unique(residual[:, 0]).size == 11
        # los dos tramos de L_{e2} salvo el origen: al menos 4 + 5 puntos
        assert sum(stage.removed for stage in dec.stages) >= 9
        # nada sale en la primera etapa: ningún margen supera τ = 1
        assert dec.stages[0].removed == 0

        assert classify(bilinear, s1, coarse).verdict == AVOIDABLE

    def test_gstar_on_s2_core(self, bilinear, s2, config):
        """𝔤* apuntando al residuo de S2 se acerca a S2 contra la mejor respuesta."""
        fine = merge_config(config, {"geometry": {"resolution": 0.1}})
        core = peel(bilinear, s2, fine).residual
        approacher = GStar(bilinear, core, config=fine)
        adversary = BestResponseAdversary(bilinear, core, fine)
        traj = run_game(bilinear, approacher, adversary, 200, target=s2, config=fine)
        horizon = rate_horizon(0.2, bilinear.gamma)
        assert max(r.dist for r in traj.rounds[horizon - 1:]) <= 0.2 + 0.1
        assert approacher.evidence_count == 0


class TestDrive:

    def test_certificate_is_uniform(self, biased_pennies, biased_counterexample):
        certificate = forcing_certificate(biased_pennies, biased_counterexample)
        assert certificate.order == 1
        np.testing.assert_allclose(certificate.witness.probabilities, [0.5, 0.5], atol=1e-9)

    def test_seeded_drives(self, biased_pennies, biased_counterexample):
        ce = biased_counterexample
        epsilon = epsilon_of_tau(ce.tau, biased_pennies.gamma)
        T = math.ceil(8.0 / epsilon)
        for seed in range(100):
            rng = np.random.Generator(np.random.Philox(seed))
            offset = rng.standard_normal(2)
            p = ce.psi + offset / np.linalg.norm(offset) * rng.uniform(0.0, 2.0 * epsilon)

            def x_stream(q, i):
                return Pure(int(rng.integers(2)))

            result = antiforce_drive(biased_pennies, ce, p, T, x_stream)
            assert result.one_forcing
            # 1-forzamiento: el mismo ȳ en todas las rondas
            assert len(set(result.y_actions)) == 1
            assert result.end_distance <= result.target_distance
            assert result.M <= result.bound
            assert result.target_distance == pytest.approx(1.5 - epsilon)

    def test_overrun(self, biased_pennies, biased_counterexample, monkeypatch):
        monkeypatch.setattr(drive_module, "drive_budget", lambda T, gamma, epsilon: 3)
        ce = biased_counterexample
        T = math.ceil(8.0 / epsilon_of_tau(ce.tau, biased_pennies.gamma))
        with pytest.raises(DriveOverrun) as info:
            antiforce_drive(biased_pennies, ce, ce.psi, T, lambda q, i: Pure(0))
        assert info.value.bound == 3
        assert info.value.details["steps"] == 3

    def test_forcible_halfspace_misses(self, biased_pennies):
        # ninguna columna lleva la primera coordenada por encima de 1 contra x uniforme
        ce = Counterexample(np.array([1.5, 0.0]), np.zeros(2), Halfspace([1.0, 0.0], 1.0), 1.0, 0.5)
        with pytest.raises(CertificateMiss):
            forcing_certificate(biased_pennies, ce)

    def test_pure_game_uses_responder(self, pennies):
        """En monedas puras ninguna columna fija fuerza z > 1/2; responder a cada fila sí."""
        ce = Counterexample(np.array([1.0]), np.array([0.0]), Halfspace([1.0], 0.5), 0.5, 1.0)
        certificate = forcing_certificate(pennies, ce)
        assert certificate.order == 2
        epsilon = epsilon_of_tau(ce.tau, pennies.gamma)
        T = math.ceil(8.0 / epsilon)
        rng = np.random.Generator(np.random.Philox(5))
        result = antiforce_drive(pennies, ce, ce.psi, T, lambda q, i: Pure(int(rng.integers(2))))
        assert not result.one_forcing
        # 𝒴 copia la fila de 𝒳 y cobra 1 en cada ronda
        assert all(y == x for x, y in result.actions)
        assert result.end_distance <= result.target_distance
        assert result.M <= result.bound

    def test_s1_certificates_force_the_complement(self, bilinear, s1_onion):
        certificates = [ce for stage in s1_onion.stages for ce in stage.certificates]
        assert len(certificates) == 4
        for ce in certificates:
            certificate = forcing_certificate(bilinear, ce)
            assert certificate.order == 1
            for i in range(bilinear.m):
                z = payoff(bilinear, Pure(i), certificate.witness)
                assert float(ce.H.normal @ z) > ce.H.offset

    def test_s1_certificates_drive(self, bilinear, s1_onion):
        """Cada certificado de S1 conduce el promedio fuera de su semiespacio."""
        certificates = [ce for stage in s1_onion.stages for ce in stage.certificates]
        for k, ce in enumerate(certificates):
            epsilon = epsilon_of_tau(ce.tau, bilinear.gamma)
            T = math.ceil(8.0 / epsilon)
            rng = np.random.Generator(np.random.Philox(40 + k))
            result = antiforce_drive(bilinear, ce, ce.psi, T,
                                     lambda q, i: Pure(int(rng.integers(2))))
            assert result.one_forcing
            assert result.end_distance <= result.target_distance
            assert result.M <= result.bound


class TestHStar:

    def test_arbitrary_before_horizon(self, bilinear, s1_onion, coarse):
        history = Trajectory(bilinear, config=coarse)
        history.append(Pure(0), Pure(0))
        action = h_star_step(bilinear, s1_onion, history, coarse)
        assert isinstance(action, Mixed)
        np.testing.assert_allclose(action.probabilities, [0.5, 0.5])

    def test_a_set_never_drives(self, bilinear, s0, config):
        dec = peel(bilinear, s0, config)
        player = HStar(bilinear, dec, config)
        assert player.horizon is None
        traj = run_game(bilinear, GStar(bilinear, s0, config=config), player, 50, target=s0,
                        config=config)
        assert player.drives_started == 0
        assert all(r.rind is None for r in traj.rounds)

    def test_escapes_with_reduced_horizon(self, bilinear, s1, s1_onion, coarse):
        """
        Horizonte recortado a 40 rondas: 𝒳 fija e1 y se queda en (1/2, 0) ∈ S1
        mientras 𝒴 juega uniforme; luego el empuje desde ese extremo saca φ
        de S1 y no se interrumpe con ℐ = -1.
        """
        avoider = HStar(bilinear, s1_onion, coarse)
        avoider.horizon = 40
        traj = run_game(bilinear, FixedPlayer(Pure(0), "x"), avoider, 200, target=s1,
                        config=coarse)
        assert all(r.dist <= 1e-12 for r in traj.rounds[:40])
        assert avoider.drives_started == 1
        assert traj.rounds[40].rind == 2
        assert all(r.rind == -1 for r in traj.rounds[41:])
        assert traj.last.dist == pytest.approx(0.4, abs=1e-6)
        assert traj.last.dist > s1_onion.delta

    @pytest.mark.slow
    def test_escapes_against_gstar(self, bilinear, s1, s1_onion, coarse):
        dec = s1_onion
        avoider = HStar(bilinear, dec, coarse)
        approacher = GStar(bilinear, s1, config=coarse)
        traj = run_game(bilinear, approacher, avoider, dec.horizon + 500, target=s1, config=coarse)
        assert traj.last.dist > dec.delta
