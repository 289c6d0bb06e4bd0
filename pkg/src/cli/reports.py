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
BlackwellLab - Informes de Corrida
Resumen legible por máquina de cada ejecución de la CLI: resultado,
artefactos escritos, tiempo de reloj, semillas y consumo de recursos.
"""


import time
from pathlib import Path
from typing import Dict, List, Optional

import psutil

from src.core.artifacts import ArtifactManager


EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


class ResourceProbe:
    """Mide tiempo de reloj, CPU y memoria residente del proceso."""

    def __init__(self):
        self.process = psutil.Process()
        self.started = None
        self.cpu_start = 0.0
        self.peak_rss = 0
        self.wall_clock = 0.0
        self.cpu_seconds = 0.0

    def _cpu(self) -> float:
        times = self.process.cpu_times()
        return times.user + times.system

    def sample(self):
        self.peak_rss = max(self.peak_rss, self.process.memory_info().rss)

    def __enter__(self) -> "ResourceProbe":
        self.started = time.perf_counter()
        self.cpu_start = self._cpu()
        self.sample()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.sample()
        self.wall_clock = time.perf_counter() - self.started
        self.cpu_seconds = self._cpu() - self.cpu_start
        return False

    def to_dict(self) -> Dict:
        return {
            "wall_clock_s": round(self.wall_clock, 3),
            "cpu_s": round(self.cpu_seconds, 3),
            "peak_rss_mb": round(self.peak_rss / (1024 * 1024), 1),
        }


class RunReport:
    """Escenario, modo, resumen del resultado, artefactos y recursos."""

    def __init__(self, scenario: str, mode: str, outcome: Dict, passed: bool = True,
                 artifacts: Optional[List[Path]] = None, seeds: Optional[List[int]] = None,
                 resources: Optional[Dict] = None):
        self.scenario = scenario
        self.mode = mode
        self.outcome = outcome
        self.passed = passed
        self.artifacts = [Path(p) for p in (artifacts or [])]
        self.seeds = list(seeds or [])
        self.resources = dict(resources or {})

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.passed else EXIT_FAIL

    def add_artifact(self, path: Path):
        self.artifacts.append(Path(path))

    def to_dict(self) -> Dict:
        return {
            "scenario": self.scenario,
            "mode": self.mode,
            "passed": self.passed,
            "outcome": self.outcome,
            "artifacts": [p.name for p in self.artifacts],
            "seeds": self.seeds,
        }

    def write(self, manager: ArtifactManager, folder: str) -> Path:
        """
        Escribe report.json en la carpeta de la corrida.

        Los recursos medidos van en resources.json aparte: report.json es
        idéntico byte a byte entre corridas con la misma semilla.
        """
        path = manager.write_json(manager.create_safe_path(folder, "report.json"), self.to_dict())
        if self.resources:
            manager.write_json(manager.create_safe_path(folder, "resources.json"), self.resources)
        return path
