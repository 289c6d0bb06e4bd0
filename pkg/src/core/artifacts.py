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
BlackwellLab - Gestor de Artefactos
Rutas seguras dentro de la carpeta de resultados, escritura CSV/JSON y hashes.
"""


import csv
import hashlib
import json
import unicodedata
from pathlib import Path
from typing import Optional, List, Dict, Any, Iterable

from src.core.errors import ValidationError


class ArtifactManager:
    """
    Gestiona los archivos producidos por las corridas.
    Todo artefacto vive dentro de output_folder; los nombres derivados de
    escenarios se sanitizan antes de tocar el disco.
    """

    INVALID_CHARS = '<>:"/\\|?*'

    RESERVED_NAMES = {
        'CON', 'PRN', 'AUX', 'NUL', 'COM1', 'COM2', 'COM3', 'COM4',
        'COM5', 'COM6', 'COM7', 'COM8', 'COM9', 'LPT1', 'LPT2', 'LPT3',
        'LPT4', 'LPT5', 'LPT6', 'LPT7', 'LPT8', 'LPT9'
    }

    FLOAT_FORMAT = "{:.12g}"

    def __init__(self, config: Dict, output_folder: Optional[str] = None):
        """
        Inicializa el gestor.

        Args:
            config: Configuración del sistema
            output_folder: Carpeta explícita (tiene prioridad sobre config)
        """
        self.config = config
        system_config = config.get("system", {})
        self.max_filename_length = system_config.get("max_filename_length", 80)
        folder = output_folder or system_config.get("output_folder", "./results")
        self.base_folder = Path(folder).resolve()

    def sanitize_filename(self, name: str, max_length: Optional[int] = None) -> str:
        """
        Sanitiza un nombre de archivo.

        Args:
            name: Nombre original (p. ej. nombre de escenario)
            max_length: Longitud máxima

        Returns:
            Nombre seguro
        """
        if max_length is None:
            max_length = self.max_filename_length

        normalized = unicodedata.normalize('NFKD', name)
        without_accents = ''.join(c for c in normalized if not unicodedata.combining(c))
        # Los símbolos no ASCII (subíndices, letras griegas) se descartan
        ascii_only = without_accents.encode('ascii', 'ignore').decode('ascii')

        sanitized = ''.join(c if c not in self.INVALID_CHARS else '_' for c in ascii_only)
        sanitized = sanitized.replace(' ', '_')
        sanitized = ''.join(c if ord(c) >= 32 else '_' for c in sanitized)
        sanitized = sanitized.lstrip('.')

        if len(sanitized) > max_length:
            if '.' in sanitized:
                name_part, ext = sanitized.rsplit('.', 1)
                available = max_length - len(ext) - 1
                sanitized = name_part[:available] + '.' + ext if available > 0 else sanitized[:max_length]
            else:
                sanitized = sanitized[:max_length]

        if sanitized.split('.')[0].upper() in self.RESERVED_NAMES:
            sanitized = f"_{sanitized}"

        if not sanitized or sanitized == '_':
            sanitized = "unnamed_run"

        return sanitized

    def validate_path(self, path) -> Optional[Path]:
        """
        Valida que una ruta quede dentro de la carpeta de resultados.

        Returns:
            Path resuelto si es válido, None si escapa de la carpeta
        """
        try:
            resolved = Path(path).resolve()
            resolved.relative_to(self.base_folder)
            return resolved
        except (OSError, ValueError):
            return None

    def create_safe_path(self, *components: str) -> Path:
        """
        Construye una ruta segura bajo output_folder creando carpetas.

        Raises:
            ValidationError: si la ruta resultante escapa de la carpeta base
        """
        parts = [self.sanitize_filename(c) for c in components]
        candidate = self.base_folder.joinpath(*parts)
        resolved = self.validate_path(candidate)
        if resolved is None:
            raise ValidationError(f"Ruta fuera de la carpeta de resultados: {candidate}",
                                  invariant="artifact-inside-output-folder")
        resolved.parent.mkdir(parents=True, exist_ok=True)
        return resolved

    def _format(self, value: Any) -> str:
        if isinstance(value, bool):
            return "1" if value else "0"
        if isinstance(value, float):
            return self.FLOAT_FORMAT.format(value)
        if hasattr(value, "item"):
            return self._format(value.item())
        return str(value)

    def write_csv(self, path: Path, header: List[str], rows: Iterable[Iterable[Any]]) -> Path:
        """
        Escribe un CSV UTF-8 con cabecera fija y formato numérico estable.

        Returns:
            Ruta escrita
        """
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([self._format(v) for v in row])
        return path

    def write_json(self, path: Path, payload: Dict) -> Path:
        """
        Escribe JSON con claves ordenadas (salida byte a byte determinista).

        Returns:
            Ruta escrita
        """
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False,
                      default=_jsonable)
            f.write("\n")
        return path

    def hash_file(self, file_path: Path) -> str:
        """
        Genera hash SHA-256 de un archivo.

        Returns:
            Hash hexadecimal
        """
        sha256_hash = hashlib.sha256()
        with open(file_path, "rb") as f:
            for byte_block in iter(lambda: f.read(4096), b""):
                sha256_hash.update(byte_block)
        return sha256_hash.hexdigest()


def _jsonable(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, float) and value != value:
        return None
    return str(value)
