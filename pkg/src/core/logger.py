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
BlackwellLab - Sistema de Logs Centralizado
Maneja logging del sistema y la auditoría de certificados en archivos separados.
"""


import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional
import json


class SystemLogger:
    """
    Logger centralizado para BlackwellLab.
    Mantiene logs separados para sistema y auditoría de certificados.
    """

    def __init__(self, config: dict):
        """
        Inicializa el sistema de logging.

        Args:
            config: Configuración del sistema desde config.json
        """
        self.config = config
        self.system_config = config.get("system", {})

        self.logs_folder = Path(self.system_config.get("logs_folder", "./logs"))

        self.log_level = getattr(
            logging,
            str(self.system_config.get("log_level", "INFO")).upper(),
            logging.INFO
        )

        self.enable_logs = self.system_config.get("enable_logs", True)

        self.system_logger = None
        self.audit_logger = None

        if self.enable_logs:
            self.logs_folder.mkdir(parents=True, exist_ok=True)
            self._setup_system_logger()
            self._setup_audit_logger()

    def _setup_system_logger(self):
        """Configura el logger del sistema."""
        self.system_logger = logging.getLogger("blackwell.system")
        self.system_logger.setLevel(self.log_level)
        self.system_logger.handlers = []

        formatter = logging.Formatter(
            '%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        log_file = self.logs_folder / "system.log"
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)
        self.system_logger.addHandler(file_handler)

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        self.system_logger.addHandler(console_handler)

        self.debug("Sistema de logs inicializado")

    def _setup_audit_logger(self):
        """Configura el logger de auditoría (certificados, empujes, fallos)."""
        self.audit_logger = logging.getLogger("blackwell.audit")
        self.audit_logger.setLevel(logging.INFO)
        self.audit_logger.handlers = []
        self.audit_logger.propagate = False

        formatter = logging.Formatter(
            '%(asctime)s | AUDIT | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        log_file = self.logs_folder / "audit.log"
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=10,
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)
        self.audit_logger.addHandler(file_handler)

    def debug(self, message: str, extra: Optional[dict] = None):
        """Log de nivel DEBUG."""
        if self.system_logger:
            self.system_logger.debug(message, extra=extra or {})

    def info(self, message: str, extra: Optional[dict] = None):
        """Log de nivel INFO."""
        if self.system_logger:
            self.system_logger.info(message, extra=extra or {})

    def warning(self, message: str, extra: Optional[dict] = None):
        """Log de nivel WARNING."""
        if self.system_logger:
            self.system_logger.warning(message, extra=extra or {})

    def error(self, message: str, extra: Optional[dict] = None):
        """Log de nivel ERROR."""
        if self.system_logger:
            self.system_logger.error(message, extra=extra or {})

    def log_audit_event(self, event_type: str, run_id: str,
                        details: dict, success: bool = True):
        """
        Registra un evento de auditoría.

        Args:
            event_type: Tipo de evento (EXAMPLE_FOUND, CERTIFICATE_MISS, ...)
            run_id: Identificador de la corrida
            details: Detalles serializables
            success: Si el evento corresponde a un resultado esperado
        """
        if not self.audit_logger:
            return

        status = "OK" if success else "FLAGGED"
        message = f"{status} | {event_type} | Run: {run_id} | {json.dumps(details, default=_to_jsonable)}"
        self.audit_logger.info(message)

    def log_certificate(self, run_id: str, kind: str, certificate: dict):
        """
        Registra un certificado geométrico (ejemplo, contraejemplo o evidencia).

        Args:
            run_id: Identificador de la corrida
            kind: EXAMPLE_FOUND, COUNTEREXAMPLE o NOT_A_SET_EVIDENCE
            certificate: Certificado en forma de diccionario
        """
        self.log_audit_event(kind, run_id, certificate, success=(kind != "NOT_A_SET_EVIDENCE"))

    def log_drive(self, run_id: str, phase: str, details: dict):
        """
        Registra inicio o fin de un empuje antiforzante.

        Args:
            run_id: Identificador de la corrida
            phase: STARTED o COMPLETED
            details: Índice de cáscara, ψ, rondas consumidas
        """
        self.log_audit_event(f"DRIVE_{phase.upper()}", run_id, details)

    def log_drive_overrun(self, run_id: str, bound: int, details: Optional[dict] = None):
        """Empuje que agotó ⌈8Tγ/ε⌉ rondas sin acercarse a φ."""
        self.warning(f"Corrida {run_id}: empuje sin terminar tras {bound} rondas")
        self.log_audit_event("DRIVE_COMPLETED", run_id,
                             {"M": bound, "bound": bound, **(details or {})}, success=False)

    def log_certificate_miss(self, run_id: str, t: int, rind, nearest: Optional[float],
                             replay: bool, phi=None):
        """φ_t lejos de todo certificado de su cáscara."""
        self.log_audit_event("CERTIFICATE_MISS", run_id,
                             {"t": t, "phi": phi, "rind": rind, "nearest": nearest,
                              "replay": replay},
                             success=False)

    def log_stage(self, run_id: str, stage: int, tolerance: float, removed: int, remaining: int):
        """
        Registra una etapa del pelado.

        Las etapas que retiran puntos van también al log de sistema.
        """
        if removed:
            self.debug(f"Etapa {stage} (τ = {tolerance:.4g}): {removed} retirados, "
                       f"{remaining} quedan")
        self.log_audit_event("STAGE_PEELED", run_id,
                             {"stage": stage, "tolerance": tolerance, "removed": removed,
                              "remaining": remaining})

    def log_peel_result(self, run_id: str, classification: str, stages: int,
                        details: Optional[dict] = None):
        """Cierre del pelado: empty, a_set o undetermined."""
        self.info(f"Pelado {run_id}: {classification} en {stages} etapas")
        self.log_audit_event("PEEL_FINISHED", run_id,
                             {"classification": classification, "stages": stages,
                              **(details or {})},
                             success=classification != "undetermined")

    def log_rate_check(self, run_id: str, report: dict):
        """
        Registra la comprobación de tasa dist(φ_t, S) <= ε + h.

        Args:
            run_id: Identificador de la corrida
            report: Resultado de rate_check; las violaciones se resumen en su número
        """
        summary = {k: v for k, v in report.items() if k != "violations"}
        summary["violations"] = len(report.get("violations", []))
        if not report.get("passed"):
            self.warning(f"Corrida {run_id}: tasa incumplida (máx {report.get('max_distance')}, "
                         f"límite {report.get('limit')})")
        self.log_audit_event("RATE_CHECK", run_id, summary, success=bool(report.get("passed")))

    def log_error_with_context(self, error: Exception, context: dict):
        """
        Registra error con contexto adicional.

        Args:
            error: Excepción ocurrida
            context: Contexto del error
        """
        error_data = {
            "error_type": type(error).__name__,
            "error_message": str(error),
            "context": context
        }
        self.error(f"Error: {error} | {json.dumps(error_data, default=_to_jsonable)}")


def _to_jsonable(value):
    """Convierte arreglos numpy y escalares para json.dumps."""
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


# Instancia global del logger
_logger_instance: Optional[SystemLogger] = None

# Logger silencioso para uso como biblioteca
_null_logger = SystemLogger({"system": {"enable_logs": False}})


def get_logger(config: Optional[dict] = None) -> SystemLogger:
    """
    Obtiene instancia del logger (singleton).

    Args:
        config: Configuración opcional para inicializar

    Returns:
        Instancia de SystemLogger; uno deshabilitado si nadie lo inicializó
    """
    global _logger_instance

    if _logger_instance is None and config is not None:
        _logger_instance = SystemLogger(config)

    return _logger_instance or _null_logger


def init_logger(config: dict) -> SystemLogger:
    """
    Inicializa el logger global.

    Args:
        config: Configuración del sistema

    Returns:
        Instancia de SystemLogger
    """
    global _logger_instance
    _logger_instance = SystemLogger(config)
    return _logger_instance


def reset_logger():
    """Descarta el logger global (usado por las pruebas)."""
    global _logger_instance
    _logger_instance = None
