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
BlackwellLab - Configuración
Carga config.json sobre valores por defecto y aplica variables de entorno (.env).
"""


import copy
import json
import os
from pathlib import Path
from typing import Dict, Optional, Any, List

from dotenv import load_dotenv

from src.core.errors import ParseError


DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "system": {
        "logs_folder": "./logs",
        "log_level": "INFO",
        "enable_logs": True,
        "output_folder": "./results",
        "max_concurrent_jobs": 4,
        "show_progress": True
    },
    "geometry": {
        "resolution": 0.01,
        "grid_2d": 720,
        "grid_3d": 2000,
        "tolerance": 1e-9,
        "link_factor": 1.5
    },
    "lp": {
        "pivot_tolerance": 1e-9,
        "pivot_budget": 1000000
    },
    "peel": {
        "stage_budget": 64,
        "bisection_iterations": 20
    },
    "stochastic": {
        "runs": 200,
        "band_sigma": 3.0,
        "algorithm": "philox"
    }
}

# Variables de entorno reconocidas -> (sección, clave)
ENV_OVERRIDES = {
    "BLACKWELL_OUTPUT_DIR": ("system", "output_folder"),
    "BLACKWELL_LOG_LEVEL": ("system", "log_level"),
    "BLACKWELL_LOGS_DIR": ("system", "logs_folder"),
}


def merge_config(base: Dict, override: Dict) -> Dict:
    """Mezcla recursiva de diccionarios; override gana."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[str] = None, env_file: Optional[str] = None) -> Dict:
    """
    Carga la configuración completa.

    Orden de precedencia: valores por defecto < config.json < entorno.

    Args:
        path: Ruta a config.json (si no existe se usan los valores por defecto)
        env_file: Ruta a un .env opcional

    Returns:
        Diccionario de configuración por secciones

    Raises:
        ParseError: si config.json existe pero no es JSON válido
    """
    config = copy.deepcopy(DEFAULT_CONFIG)

    if path is not None and Path(path).exists():
        try:
            with open(path, "r", encoding="utf-8") as f:
                config = merge_config(config, json.load(f))
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, location=f"{path}:{e.lineno}:{e.colno}")

    if env_file is not None:
        load_dotenv(dotenv_path=env_file)
    else:
        load_dotenv()

    for env_name, (section, key) in ENV_OVERRIDES.items():
        value = os.getenv(env_name)
        if value:
            config.setdefault(section, {})[key] = value

    return config


def validate_config(config: Dict) -> Dict:
    """
    Valida rangos básicos de la configuración.

    Args:
        config: Configuración cargada

    Returns:
        {"valid": bool, "errors": [str, ...]}
    """
    errors: List[str] = []

    for section in DEFAULT_CONFIG:
        if section not in config:
            errors.append(f"Sección faltante: {section}")

    geometry = config.get("geometry", {})
    if float(geometry.get("resolution", 0)) <= 0:
        errors.append("geometry.resolution debe ser > 0")
    if int(geometry.get("grid_2d", 0)) < 4:
        errors.append("geometry.grid_2d debe ser >= 4")
    if float(geometry.get("link_factor", 0)) < 1.0:
        errors.append("geometry.link_factor debe ser >= 1")

    lp = config.get("lp", {})
    if int(lp.get("pivot_budget", 0)) < 1:
        errors.append("lp.pivot_budget debe ser >= 1")

    peel = config.get("peel", {})
    if int(peel.get("stage_budget", 0)) < 1:
        errors.append("peel.stage_budget debe ser >= 1")

    system = config.get("system", {})
    if int(system.get("max_concurrent_jobs", 0)) < 1:
        errors.append("system.max_concurrent_jobs debe ser >= 1")

    return {"valid": not errors, "errors": errors}


def section(config: Optional[Dict], name: str) -> Dict:
    """Sección de configuración con valores por defecto garantizados."""
    base = DEFAULT_CONFIG.get(name, {})
    if not config:
        return dict(base)
    return merge_config(base, config.get(name, {}))
