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
BlackwellLab - Jerarquía de Errores
Excepciones de dominio compartidas por geometría, LP, juegos y simulación.
"""


from typing import Dict, Optional, Any


class ApproachabilityError(Exception):
    """
    Error base del sistema.
    Toda excepción lleva un diccionario de detalles serializable a JSON.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Representación serializable del error."""
        return {
            "error_type": type(self).__name__,
            "error_message": self.message,
            "details": self.details
        }


# --- Geometría ---

class EmptySet(ApproachabilityError):
    """Conjunto objetivo vacío donde se requiere uno no vacío."""


class NonConvexSet(ApproachabilityError):
    """Operación que sólo admite conjuntos convexos."""


class NonPositiveInput(ApproachabilityError):
    """Parámetro que debe ser estrictamente positivo."""


# --- Juegos ---

class KindMismatch(ApproachabilityError):
    """Acción mixta usada sobre un juego puro, o viceversa."""


class IndexOutOfRange(ApproachabilityError):
    """Índice de acción pura fuera del rango del juego."""


class DegenerateDirection(ApproachabilityError):
    """φ y ψ coinciden dentro de la tolerancia: no hay dirección definida."""


# --- Programación lineal ---

class LPError(ApproachabilityError):
    """Error base del resolvedor simplex."""


class Infeasible(LPError):
    """El programa no tiene puntos factibles."""


class Unbounded(LPError):
    """El objetivo no está acotado en la región factible."""


class CycleLimit(LPError):
    """Se agotó el presupuesto de pivotes."""


# --- Evasión ---

class StageBudgetExceeded(ApproachabilityError):
    """El pelado no se estabilizó dentro del presupuesto de etapas."""

    def __init__(self, message: str, partial: Any = None, details: Optional[Dict] = None):
        super().__init__(message, details)
        self.partial = partial


class DriveOverrun(ApproachabilityError):
    """Un empuje superó la cota de rondas permitida."""

    def __init__(self, message: str, bound: int, steps: int, details: Optional[Dict] = None):
        merged = {"bound": bound, "steps": steps, **(details or {})}
        super().__init__(message, merged)
        self.bound = bound
        self.steps = steps


class CertificateMiss(ApproachabilityError):
    """Ningún certificado almacenado cumple la cota de proximidad."""


# --- CLI ---

class ParseError(ApproachabilityError):
    """Archivo de escenario o programa con formato inválido."""

    def __init__(self, message: str, location: str = "", details: Optional[Dict] = None):
        super().__init__(f"{location}: {message}" if location else message, details)
        self.location = location


class ValidationError(ApproachabilityError):
    """Un descriptor no cumple un invariante de su constructor."""

    def __init__(self, message: str, invariant: str = "", details: Optional[Dict] = None):
        super().__init__(message, {"invariant": invariant, **(details or {})})
        self.invariant = invariant
