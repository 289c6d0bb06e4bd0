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
Pruebas de escenarios, orquestación de lotes y la interfaz de línea de comandos.
"""


import json
import time

import numpy as np
import pytest

from src.core.artifacts import ArtifactManager
from src.core.errors import ParseError, ValidationError
from src.cli.batch import run_batch, run_jobs
from src.cli.cli import main, parse_matrix, parse_seeds
from src.cli.reports import EXIT_ERROR, EXIT_PASS
from src.cli.scenarios import (
    BUILTIN_SCENARIOS, Scenario, build_target, list_scenarios, load_scenario, save_scenario
)


@pytest.fixture
def run_cli(tmp_path, monkeypatch, capsys):
    """Invoca main() con resultados y logs dentro de tmp_path."""
    monkeypatch.setenv("BLACKWELL_LOGS_DIR", str(tmp_path / "logs"))

    def invoke(*argv, output=None):
        args = ["--config", str(tmp_path / "sin-config.json"),
                "--output", str(output or tmp_path / "results"), "--quiet", *argv]
        code = main(args)
        return code, capsys.readouterr()
    return invoke


class TestScenarios:

    def test_builtins_validate(self):
        names = [entry["name"] for entry in list_scenarios()]
        assert names == list(BUILTIN_SCENARIOS)
        for name in names:
            scenario = load_scenario(name)
            assert scenario.target().dim == scenario.build_game().d

    def test_round_trip(self, tmp_path):
        scenario = load_scenario("appendixA-S1")
        path = save_scenario(scenario, tmp_path / "s1.json")
        again = load_scenario(str(path))
        assert again.to_dict() == scenario.to_dict()
        assert Scenario.from_dict(scenario.to_dict()).strategies["adversary"] == "hstar"

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "roto.json"
        path.write_text('{"name": "x",\n  "game": }', encoding="utf-8")
        with pytest.raises(ParseError) as info:
            load_scenario(str(path))
        assert info.value.location == f"{path}:2:11"

    def test_unknown_name(self):
        with pytest.raises(ParseError):
            load_scenario("appendixZ")

    def test_dimension_mismatch(self):
        data = dict(BUILTIN_SCENARIOS["appendixA-S0"],
                    targets={"primary": {"segment": {"a": [0.0], "b": [1.0]}}})
        with pytest.raises(ValidationError) as info:
            Scenario.from_dict(data)
        assert info.value.invariant == "target-dimension"

    @pytest.mark.parametrize("field,value,invariant", [
        ("strategies", {"adversary": "oracle"}, "strategy-binding"),
        ("strategies", {"approach": "magic"}, "strategy-binding"),
        ("grid", {"render": {}}, "grid-overrides"),
    ])
    def test_invalid_bindings(self, field, value, invariant):
        data = dict(BUILTIN_SCENARIOS["appendixA-S0"], **{field: value})
        with pytest.raises(ValidationError) as info:
            Scenario.from_dict(data)
        assert info.value.invariant == invariant

    def test_missing_field(self):
        with pytest.raises(ValidationError) as info:
            Scenario.from_dict({"name": "solo-nombre"})
        assert info.value.invariant == "scenario-shape"

    def test_halfspace_target(self):
        S = build_target({"halfspace": {"normal": [1.0], "offset": 0.0, "clip": 2.0}})
        np.testing.assert_allclose(np.sort(S.vertices[:, 0]), [-2.0, 0.0])
        with pytest.raises(ValidationError) as info:
            build_target({"halfspace": {"normal": [1.0], "offset": 0.0}})
        assert info.value.invariant == "target-descriptor"

    def test_scenario_overrides_config(self, config):
        effective = load_scenario("appendixA-S1").apply(config)
        assert effective["geometry"]["resolution"] == 0.5
        assert effective["geometry"]["grid_2d"] == config["geometry"]["grid_2d"]


class TestParsing:

    def test_seed_ranges(self):
        assert parse_seeds("7") == [7]
        assert parse_seeds("0..3") == [0, 1, 2, 3]
        with pytest.raises(ValidationError):
            parse_seeds("5..1")

    def test_matrix(self):
        assert parse_matrix("1,-1;-1,1") == [[1.0, -1.0], [-1.0, 1.0]]


class TestBatch:

    @pytest.mark.asyncio
    async def test_order_is_preserved(self):
        def job(k):
            def run():
                time.sleep(0.01 * (5 - k))
                return k
            return run

        results = await run_batch([job(k) for k in range(5)], max_concurrent=3)
        assert results == [0, 1, 2, 3, 4]

    @pytest.mark.asyncio
    async def test_failure_propagates(self):
        def broken():
            raise ValueError("trabajo roto")

        with pytest.raises(ValueError):
            await run_batch([lambda: 1, broken], max_concurrent=2)

    def test_sync_entry_point(self):
        assert run_jobs([]) == []
        assert run_jobs([lambda: "a", lambda: "b"], max_concurrent=1) == ["a", "b"]


class TestCommands:

    def test_scenario_list(self, run_cli):
        code, captured = run_cli("scenario", "list")
        assert code == EXIT_PASS
        for name in BUILTIN_SCENARIOS:
            assert name in captured.out

    def test_scenario_show(self, run_cli):
        code, captured = run_cli("scenario", "show", "appendixA-S1")
        assert code == EXIT_PASS
        assert json.loads(captured.out)["name"] == "appendixA-S1"

    def test_lp_game(self, run_cli):
        code, captured = run_cli("lp", "game", "--matrix", "1,-1;-1,1")
        assert code == EXIT_PASS
        report = json.loads(captured.out)
        assert abs(report["outcome"]["value"]) <= 1e-9
        np.testing.assert_allclose(report["outcome"]["row_strategy"], [0.5, 0.5], atol=1e-9)

    def test_lp_solve(self, run_cli, tmp_path):
        program = tmp_path / "dieta.json"
        program.write_text(json.dumps({
            "objective": [1.0, 1.0], "matrix": [[1.0, 2.0], [3.0, 1.0]], "rhs": [2.0, 3.0],
            "senses": [">=", ">="]}), encoding="utf-8")
        code, captured = run_cli("lp", "solve", "--file", str(program))
        assert code == EXIT_PASS
        assert json.loads(captured.out)["outcome"]["value"] == pytest.approx(1.4)

    def test_stochastic_horizon(self, run_cli):
        code, captured = run_cli("stochastic", "horizon", "--epsilon", "0.1")
        assert code == EXIT_PASS
        assert captured.out.strip() == "450"

    def test_classify_s1(self, run_cli):
        code, captured = run_cli("classify", "--scenario", "appendixA-S1")
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert outcome["verdict"] == "avoidable"
        assert outcome["N"] == 4

    def test_classify_s2(self, run_cli):
        code, captured = run_cli("classify", "--scenario", "appendixA-S2")
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert outcome["verdict"] == "approachable"
        assert outcome["strategy"] == "gstar"

    def test_classify_pennies(self, run_cli):
        code, captured = run_cli("classify", "--scenario", "pure-pennies-halfline")
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert outcome["verdict"] == "undecided"
        assert outcome["minimax_gap"] == pytest.approx(2.0)

    def test_peel_writes_artifacts(self, run_cli, tmp_path):
        code, captured = run_cli("peel", "--scenario", "appendixA-S1")
        assert code == EXIT_PASS
        report = json.loads(captured.out)
        assert report["outcome"]["classification"] == "empty"
        folder = tmp_path / "results" / "appendixA-S1-peel"
        for name in ("decomposition.json", "hausdorff.csv", "report.json", "resources.json"):
            assert (folder / name).is_file()

    def test_peel_budget_fails(self, run_cli):
        code, captured = run_cli("peel", "--scenario", "appendixA-S1", "--stages", "1")
        assert code == 2
        assert json.loads(captured.out)["outcome"]["classification"] == "undetermined"

    def test_force_check(self, run_cli):
        code, captured = run_cli("force", "check", "--scenario", "pure-pennies-halfline",
                                 "--normal", "1", "--offset", "0")
        assert code == EXIT_PASS
        certificates = json.loads(captured.out)["outcome"]["certificates"]
        assert certificates["x_one_forces"] is None
        assert certificates["x_two_forces"] is not None

    def test_force_check_halfspace_selects_oracle(self, run_cli):
        code, captured = run_cli("force", "check", "--scenario", "pure-pennies-halfline",
                                 "--halfspace", "1,0", "--player", "x", "--order", "2")
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert list(outcome["certificates"]) == ["x_two_forces"]
        assert outcome["certificates"]["x_two_forces"]["response_table"] == {"0": 1, "1": 0}
        assert outcome["halfspace"] == {"normal": [1.0], "offset": 0.0}

    def test_force_check_with_inline_game(self, run_cli):
        game = json.dumps({"d": 1, "mode": "pure", "payoffs": [[1.0, -1.0], [-1.0, 1.0]]})
        code, captured = run_cli("force", "check", "--game", game, "--halfspace", "1,0",
                                 "--player", "y")
        assert code == EXIT_PASS
        report = json.loads(captured.out)
        assert report["scenario"] == "blackwell"
        certificates = report["outcome"]["certificates"]
        assert set(certificates) == {"y_one_forces_complement", "y_two_forces_complement"}
        # y responde con la columna que iguala a la fila: pago 1 > 0
        assert certificates["y_two_forces_complement"] is not None

    def test_force_check_set_on_pure_game(self, run_cli):
        target = json.dumps({"segment": {"a": [-2.0], "b": [0.0]}})
        code, captured = run_cli("force", "check", "--scenario", "pure-pennies-halfline",
                                 "--set", target)
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert outcome["certificates"]["x_two_forces"]["response_table"] == {"0": 1, "1": 0}
        assert outcome["g_s_gap"]["inf_sup"] == pytest.approx(1.0)
        assert outcome["g_s_gap"]["sup_inf"] == pytest.approx(0.0)
        assert outcome["dualities"]["consistent"]

    def test_force_check_set_on_mixed_game(self, run_cli):
        code, captured = run_cli("force", "check", "--scenario", "appendixA-S0",
                                 "--set", json.dumps({"segment": {"a": [0, 0], "b": [0.5, 0.5]}}))
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        # con y = (1/2, 1/2) ninguna fila pura cae sobre la diagonal
        assert outcome["certificates"]["x_two_forces"] is None
        assert outcome["g_s_gap"]["gap"] >= 0.0

    def test_force_check_set_rejects_first_order(self, run_cli):
        code, captured = run_cli("force", "check", "--scenario", "pure-pennies-halfline",
                                 "--set", '{"segment": {"a": [-2], "b": [0]}}', "--order", "1")
        assert code == EXIT_ERROR
        assert "ValidationError" in captured.err

    def test_force_check_needs_a_game(self, run_cli):
        code, captured = run_cli("force", "check", "--halfspace", "1,0")
        assert code == EXIT_ERROR
        assert "ValidationError" in captured.err

    def test_simulate_avoid_pennies_with_gstar(self, run_cli):
        code, captured = run_cli("simulate", "avoid", "--scenario", "pure-pennies-halfline",
                                 "--rounds", "2000", "--checkpoint", "100")
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert outcome["expected"] == "outside"
        assert outcome["outside_checkpoints"] == outcome["checkpoints"] == 20

    def test_simulate_avoid_pennies_with_responder(self, run_cli):
        code, captured = run_cli("simulate", "avoid", "--scenario", "pure-pennies-halfline",
                                 "--rounds", "2000", "--checkpoint", "100",
                                 "--approacher", "bestresponse", "--order", "y_first")
        assert code == EXIT_PASS
        outcome = json.loads(captured.out)["outcome"]
        assert outcome["expected"] == "inside"
        assert outcome["outside_checkpoints"] == 0
        assert outcome["final_distance"] == 0.0

    def test_trajectory_csv_columns(self, run_cli, tmp_path):
        code, _ = run_cli("simulate", "approach", "--scenario", "appendixA-S0",
                          "--epsilon", "0.2", "--rounds", "150")
        assert code == EXIT_PASS
        folder = tmp_path / "results" / "appendixA-S0-simulate-approach"
        path = folder / "trajectory-bestresponse-0.csv"
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ("t,phi_0,phi_1,dist,tau_t,example_found,slack,"
                            "x_0,x_1,y_0,y_1,rind")
        cells = [line.split(",") for line in lines[1:]]
        # la primera ronda es arbitraria: sin τ_t ni holgura
        assert cells[0][4] == "" and cells[0][6] == ""
        found = [row for row in cells if row[5] == "1"]
        assert found
        assert all(float(row[6]) >= 0.0 for row in found)

    def test_s0_rate_limit_uses_fine_resolution(self, run_cli):
        code, captured = run_cli("simulate", "approach", "--scenario", "appendixA-S0",
                                 "--epsilon", "0.2", "--rounds", "150")
        assert code == EXIT_PASS
        rate = json.loads(captured.out)["outcome"]["runs"][0]["rate"]
        assert rate["limit"] == pytest.approx(0.2 + 0.01, abs=1e-6)
        assert load_scenario("appendixA-S0").grid["geometry"]["resolution"] == 0.01

    def test_simulate_approach_is_reproducible(self, run_cli, tmp_path, config):
        argv = ("simulate", "approach", "--scenario", "appendixA-S0", "--epsilon", "0.2",
                "--rounds", "150")
        hashes = []
        for k in range(2):
            output = tmp_path / f"salida-{k}"
            code, captured = run_cli(*argv, output=output)
            assert code == EXIT_PASS
            assert json.loads(captured.out)["passed"]
            folder = output / "appendixA-S0-simulate-approach"
            hashes.append((ArtifactManager(config).hash_file(folder / "trajectory-bestresponse-0.csv"),
                           (folder / "report.json").read_bytes()))
        assert hashes[0] == hashes[1]

    def test_unknown_scenario(self, run_cli):
        code, captured = run_cli("classify", "--scenario", "appendixZ")
        assert code == EXIT_ERROR
        assert "ParseError" in captured.err

    def test_usage_error(self, run_cli):
        with pytest.raises(SystemExit) as info:
            run_cli("peel")
        assert info.value.code == EXIT_ERROR
