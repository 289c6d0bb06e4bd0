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
BlackwellLab - Registro de Escenarios
Escenarios integrados (juego bilineal del símplex y sus objetivos, monedas
puras en ℝ¹) y carga de escenarios desde archivos JSON.
"""


import copy
import json
from pathlib import Path
from typing import Dict, List, Optional

from src.core.config import merge_config
from src.core.errors import ParseError, ValidationError
from src.games.game import Game, game_from_dict
from src.geometry.operations import clip_halfspace
from src.geometry.sets import Halfspace, TargetSet, Union, target_from_dict
from src.approach.schedule import ToleranceSchedule, schedule_from_dict


APPROACH_STRATEGIES = ("gstar", "bestresponse")
AVOID_STRATEGIES = ("hstar", "maximin")
ADVERSARY_PREFIXES = ("random", "bestresponse", "hstar", "maximin", "uniform", "fixed:", "script:")


def build_target(descriptor: Dict, link_factor: float = 1.5) -> TargetSet:
    """
    Como target_from_dict, más {"halfspace": {normal, offset, clip}}: el
    semiespacio recortado a la caja [-clip, clip]^d.
    """
    if isinstance(descriptor, dict) and len(descriptor) == 1 and "halfspace" in descriptor:
        body = descriptor["halfspace"]
        try:
            H = Halfspace(body["normal"], body["offset"])
            radius = float(body["clip"])
        except KeyError as e:
            raise ValidationError(f"Campo faltante {e} en descriptor 'halfspace'",
                                  invariant="target-descriptor")
        return clip_halfspace(H, radius)
    if isinstance(descriptor, dict) and len(descriptor) == 1 and "union" in descriptor:
        return Union([build_target(m, link_factor) for m in descriptor["union"]])
    return target_from_dict(descriptor, link_factor)


def _validate_adversary(spec: str):
    if not isinstance(spec, str) or not any(
            spec == p or (p.endswith(":") and spec.startswith(p)) for p in ADVERSARY_PREFIXES):
        raise ValidationError(f"Adversario desconocido: {spec!r}", invariant="strategy-binding")


class Scenario:
    """
    Juego, conjuntos objetivo con nombre, estrategias, tolerancias y
    ajustes de malla/resolución.
    """

    def __init__(self, name: str, game: Dict, targets: Dict[str, Dict],
                 strategies: Optional[Dict[str, str]] = None,
                 schedule: Optional[Dict] = None, grid: Optional[Dict] = None,
                 description: str = "", notes: Optional[List[str]] = None):
        self.name = name
        self.game = copy.deepcopy(game)
        self.targets = copy.deepcopy(targets)
        self.strategies = dict(strategies or {"approach": "gstar", "adversary": "bestresponse",
                                              "avoid": "hstar"})
        self.schedule = copy.deepcopy(schedule or {"rule": "geometric"})
        self.grid = copy.deepcopy(grid or {})
        self.description = description
        self.notes = list(notes or [])
        self.validate()

    def validate(self):
        """
        Construye juego, objetivos y tolerancias para comprobar que resuelven.

        Raises:
            ValidationError: con el invariante que falla
        """
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("El escenario necesita un nombre", invariant="scenario-name")
        if not self.targets:
            raise ValidationError(f"{self.name}: sin conjuntos objetivo", invariant="scenario-targets")
        g = self.build_game()
        for key in self.targets:
            S = self.target(key)
            if S.dim != g.d:
                raise ValidationError(f"{self.name}: el objetivo '{key}' vive en ℝ^{S.dim}, "
                                      f"los pagos en ℝ^{g.d}", invariant="target-dimension")
        approach = self.strategies.get("approach", "gstar")
        if approach not in APPROACH_STRATEGIES:
            raise ValidationError(f"Estrategia de aproximación desconocida: {approach}",
                                  invariant="strategy-binding")
        avoid = self.strategies.get("avoid", "hstar")
        if avoid not in AVOID_STRATEGIES:
            raise ValidationError(f"Estrategia de evitación desconocida: {avoid}",
                                  invariant="strategy-binding")
        _validate_adversary(self.strategies.get("adversary", "bestresponse"))
        self.build_schedule(g)
        unknown = set(self.grid) - {"geometry", "peel", "lp", "stochastic"}
        if unknown:
            raise ValidationError(f"Secciones de malla desconocidas: {sorted(unknown)}",
                                  invariant="grid-overrides")

    def build_game(self) -> Game:
        return game_from_dict(self.game)

    @property
    def default_target(self) -> str:
        return "primary" if "primary" in self.targets else next(iter(self.targets))

    def target(self, key: Optional[str] = None) -> TargetSet:
        key = key or self.default_target
        if key not in self.targets:
            raise ValidationError(f"{self.name}: objetivo '{key}' no definido "
                                  f"({', '.join(self.targets)})", invariant="target-reference")
        link_factor = self.grid.get("geometry", {}).get("link_factor", 1.5)
        return build_target(self.targets[key], link_factor)

    def build_schedule(self, g: Game) -> ToleranceSchedule:
        return schedule_from_dict(self.schedule, g.gamma)

    def apply(self, config: Optional[Dict]) -> Dict:
        """Configuración efectiva: config con los ajustes del escenario encima."""
        return merge_config(config or {}, self.grid)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "description": self.description,
            "game": copy.deepcopy(self.game),
            "targets": copy.deepcopy(self.targets),
            "strategies": dict(self.strategies),
            "schedule": copy.deepcopy(self.schedule),
            "grid": copy.deepcopy(self.grid),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ValidationError("El escenario debe ser un objeto JSON", invariant="scenario-shape")
        try:
            return cls(name=data["name"], game=data["game"], targets=data["targets"],
                       strategies=data.get("strategies"), schedule=data.get("schedule"),
                       grid=data.get("grid"), description=data.get("description", ""),
                       notes=data.get("notes"))
        except KeyError as e:
            raise ValidationError(f"Campo faltante en el escenario: {e}", invariant="scenario-shape")


# --- Escenarios integrados ---

# f(x,y) = (x1·y1, x2·y2) sobre Δ2 × Δ2
BILINEAR_SIMPLEX = {
    "d": 2,
    "mode": "mixed",
    "payoffs": [[[1.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 1.0]]],
}

PURE_PENNIES = {
    "d": 1,
    "mode": "pure",
    "payoffs": [[1.0, -1.0], [-1.0, 1.0]],
}


def _segment(a, b) -> Dict:
    return {"segment": {"a": list(a), "b": list(b)}}


BUILTIN_SCENARIOS: Dict[str, Dict] = {
    "appendixA-S0": {
        "name": "appendixA-S0",
        "description": "Juego bilineal del símplex; S0 = {(α,α) : α ∈ [0,1/2]} (A-conjunto)",
        "game": BILINEAR_SIMPLEX,
        "targets": {"primary": _segment((0.0, 0.0), (0.5, 0.5))},
        "strategies": {"approach": "gstar", "adversary": "bestresponse", "avoid": "hstar"},
        "schedule": {"rule": "geometric"},
        "grid": {"geometry": {"resolution": 0.01}},
    },
    "appendixA-S1": {
        "name": "appendixA-S1",
        "description": "Juego bilineal del símplex; S1 = [1/2,1]×{0} ∪ {0}×[1/2,1] (evitable)",
        "game": BILINEAR_SIMPLEX,
        "targets": {
            "primary": {"union": [_segment((0.5, 0.0), (1.0, 0.0)),
                                  _segment((0.0, 0.5), (0.0, 1.0))]},
        },
        "strategies": {"approach": "gstar", "adversary": "hstar", "avoid": "hstar"},
        "schedule": {"rule": "geometric"},
        "grid": {"geometry": {"resolution": 0.5}},
        "notes": ["Se usa la clausura de S1; la nube a h = 0.5 son los cuatro extremos."],
    },
    "appendixA-S2": {
        "name": "appendixA-S2",
        "description": "L_{e1} ∪ L_{e2} sin el tramo abierto central de longitud relativa 0.2 de L_{e2}",
        "game": BILINEAR_SIMPLEX,
        "targets": {"primary": {"union": [_segment((0.0, 0.0), (1.0, 0.0)),
                                          _segment((0.0, 0.0), (0.0, 0.4)),
                                          _segment((0.0, 0.6), (0.0, 1.0))]}},
        "strategies": {"approach": "gstar", "adversary": "bestresponse", "avoid": "hstar"},
        "schedule": {"rule": "geometric"},
        "grid": {"geometry": {"resolution": 0.1}},
        "notes": ["x1 = e1, x2 = e2; se retira el tramo (0, 0.4)-(0, 0.6)."],
    },
    "pure-pennies-halfline": {
        "name": "pure-pennies-halfline",
        "description": "Monedas puras en ℝ¹ con objetivo (-∞, 0] recortado a [-2, 0]",
        "game": PURE_PENNIES,
        "targets": {"primary": {"halfspace": {"normal": [1.0], "offset": 0.0, "clip": 2.0}}},
        "strategies": {"approach": "gstar", "adversary": "bestresponse", "avoid": "maximin"},
        "schedule": {"rule": "geometric"},
        "grid": {},
    },
    "lx-minimal-forcible": {
        "name": "lx-minimal-forcible",
        "description": "L_x para x = (1/2, 1/2): conjunto 1-forzable minimal del juego bilineal",
        "game": BILINEAR_SIMPLEX,
        "targets": {"primary": _segment((0.0, 0.5), (0.5, 0.0))},
        "strategies": {"approach": "gstar", "adversary": "bestresponse", "avoid": "hstar"},
        "schedule": {"rule": "geometric"},
        "grid": {"geometry": {"resolution": 0.05}},
    },
}


def list_scenarios() -> List[Dict]:
    return [{"name": name, "description": data["description"]}
            for name, data in BUILTIN_SCENARIOS.items()]


def load_scenario(source: str) -> Scenario:
    """
    Carga un escenario integrado por nombre o desde un archivo JSON.

    Raises:
        ParseError: archivo inexistente o JSON mal formado (con ubicación línea:columna)
        ValidationError: escenario que no cumple un invariante
    """
    if source in BUILTIN_SCENARIOS:
        return Scenario.from_dict(copy.deepcopy(BUILTIN_SCENARIOS[source]))

    path = Path(source)
    if not path.is_file():
        raise ParseError(f"Escenario no registrado ni archivo existente: {source}",
                         location=str(source))
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON inválido: {e.msg}", location=f"{path}:{e.lineno}:{e.colno}")
    except UnicodeDecodeError as e:
        raise ParseError(f"El archivo no es UTF-8: {e.reason}", location=str(path))
    return Scenario.from_dict(data)


def save_scenario(scenario: Scenario, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(scenario.to_dict(), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return path
