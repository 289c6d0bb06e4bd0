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
Pruebas de configuración, errores, artefactos y logs.
"""


import json

import pytest

from src.core.artifacts import ArtifactManager
from src.core.config import DEFAULT_CONFIG, load_config, merge_config, section, validate_config
from src.core.errors import DriveOverrun, ParseError, ValidationError
from src.core.logger import get_logger, init_logger


class TestConfig:

    def test_defaults_when_file_missing(self, tmp_path, monkeypatch):
        monkeypatch.delenv("BLACKWELL_OUTPUT_DIR", raising=False)
        config = load_config(str(tmp_path / "missing.json"), env_file=str(tmp_path / ".env"))
        assert config["geometry"] == DEFAULT_CONFIG["geometry"]
        assert validate_config(config)["valid"]

    def test_file_overrides_defaults(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"geometry": {"resolution": 0.2}}), encoding="utf-8")
        config = load_config(str(path), env_file=str(tmp_path / ".env"))
        assert config["geometry"]["resolution"] == 0.2
        assert config["geometry"]["grid_2d"] == 720

    def test_environment_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv("BLACKWELL_OUTPUT_DIR", str(tmp_path / "out"))
        config = load_config(None, env_file=str(tmp_path / ".env"))
        assert config["system"]["output_folder"] == str(tmp_path / "out")

    def test_env_file_is_read(self, tmp_path, monkeypatch):
        # load_dotenv no pisa variables ya definidas
        monkeypatch.delenv("BLACKWELL_LOG_LEVEL", raising=False)
        env_file = tmp_path / ".env"
        env_file.write_text("BLACKWELL_LOG_LEVEL=DEBUG\n", encoding="utf-8")
        config = load_config(None, env_file=str(env_file))
        monkeypatch.delenv("BLACKWELL_LOG_LEVEL", raising=False)
        assert config["system"]["log_level"] == "DEBUG"

    def test_malformed_file_reports_location(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"geometry": {\n  "resolution": ,\n}}', encoding="utf-8")
        with pytest.raises(ParseError) as info:
            load_config(str(path))
        assert info.value.location.startswith(f"{path}:2:")

    def test_validation_catches_bad_ranges(self):
        config = merge_config(DEFAULT_CONFIG, {"geometry": {"resolution": 0},
                                               "peel": {"stage_budget": 0}})
        result = validate_config(config)
        assert not result["valid"]
        assert len(result["errors"]) == 2

    def test_section_fills_missing_keys(self):
        assert section({"peel": {"stage_budget": 3}}, "peel") == {
            "stage_budget": 3, "bisection_iterations": 20}
        assert section(None, "lp")["pivot_budget"] == 1000000


class TestErrors:

    def test_drive_overrun_details(self):
        error = DriveOverrun("sin terminar", bound=10, steps=10, details={"psi": [0, 0]})
        body = error.to_dict()
        assert body["error_type"] == "DriveOverrun"
        assert body["details"] == {"bound": 10, "steps": 10, "psi": [0, 0]}

    def test_validation_error_carries_invariant(self):
        error = ValidationError("malo", invariant="target-dimension")
        assert error.invariant == "target-dimension"
        assert error.details["invariant"] == "target-dimension"


class TestArtifacts:

    def test_sanitize_filename(self, config):
        manager = ArtifactManager(config)
        assert manager.sanitize_filename("órbita: S₁/φ?") == "orbita__S1__"
        assert manager.sanitize_filename("CON.csv") == "_CON.csv"
        assert manager.sanitize_filename("...") == "unnamed_run"

    def test_paths_stay_inside_output(self, config, tmp_path):
        manager = ArtifactManager(config)
        path = manager.create_safe_path("..", "..", "escape.json")
        assert manager.validate_path(path) is not None
        assert manager.validate_path(tmp_path / "elsewhere.json") is None

    def test_json_is_deterministic(self, config):
        manager = ArtifactManager(config)
        a = manager.write_json(manager.create_safe_path("a", "report.json"), {"b": 1.5, "a": [1, 2]})
        b = manager.write_json(manager.create_safe_path("b", "report.json"), {"a": [1, 2], "b": 1.5})
        assert manager.hash_file(a) == manager.hash_file(b)

    def test_csv_float_format(self, config):
        manager = ArtifactManager(config)
        path = manager.write_csv(manager.create_safe_path("run", "t.csv"), ["t", "x", "ok"],
                                 [[1, 0.1 + 0.2, True]])
        assert path.read_text(encoding="utf-8") == "t,x,ok\n1,0.3,1\n"


class TestLogger:

    def test_uninitialised_logger_is_silent(self, tmp_path):
        logger = get_logger()
        logger.log_audit_event("EXAMPLE_FOUND", "r", {"t": 1})
        assert logger.audit_logger is None

    def test_audit_line_format(self, config, tmp_path):
        config = merge_config(config, {"system": {"enable_logs": True}})
        logger = init_logger(config)
        logger.log_certificate("run-7", "NOT_A_SET_EVIDENCE", {"tau": 0.5})
        for handler in logger.audit_logger.handlers:
            handler.flush()
        text = (tmp_path / "logs" / "audit.log").read_text(encoding="utf-8")
        assert 'FLAGGED | NOT_A_SET_EVIDENCE | Run: run-7 | {"tau": 0.5}' in text

    def test_domain_events(self, config, tmp_path):
        config = merge_config(config, {"system": {"enable_logs": True}})
        logger = init_logger(config)
        logger.log_stage("run-1", 2, 1.0 / 3.0, 2, 2)
        logger.log_rate_check("run-1", {"epsilon": 0.1, "limit": 0.11, "max_distance": 0.2,
                                        "violations": [{"t": 400, "dist": 0.2}], "passed": False})
        logger.log_peel_result("run-1", "empty", 4, {"N": 4})
        for handler in logger.audit_logger.handlers:
            handler.flush()
        text = (tmp_path / "logs" / "audit.log").read_text(encoding="utf-8")
        assert ('OK | STAGE_PEELED | Run: run-1 | {"stage": 2, "tolerance": 0.3333333333333333, '
                '"removed": 2, "remaining": 2}') in text
        # las violaciones se resumen en su número
        assert ('FLAGGED | RATE_CHECK | Run: run-1 | {"epsilon": 0.1, "limit": 0.11, '
                '"max_distance": 0.2, "passed": false, "violations": 1}') in text
        assert ('OK | PEEL_FINISHED | Run: run-1 | '
                '{"classification": "empty", "stages": 4, "N": 4}') in text
