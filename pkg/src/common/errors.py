"""
Error types and stage error handling.

Every failure the numerical modules can signal has its own exception class so
callers (and the CLI exit-code mapping) can react to it precisely.
"""

from __future__ import annotations

from collections.abc import Generator
from contextlib import contextmanager
from typing import Any

from common.logging import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SCHEMA = 2
EXIT_SOLVER = 3
EXIT_VERIFICATION = 4


class LabError(Exception):
    """Base class for all laboratory errors."""

    exit_code: int = EXIT_FAILURE


# ============================================================================
# Geometry
# ============================================================================


class InvalidParameterError(LabError, ValueError):
    """A numeric parameter is outside its admissible range."""


class OutsideDomainError(LabError):
    """A point expected in Ω₁ lies outside it."""


class NotOnBoundaryError(LabError):
    """A point expected on a hole boundary is not near any hole."""


class DegenerateGeometryError(LabError):
    """A polygon or configuration has (near) zero area or collapsed vertices."""


class DomainValidationError(LabError):
    """A domain violates its separation, curvature or containment requirements."""

    exit_code = EXIT_SCHEMA


# ============================================================================
# Potentials and sections
# ============================================================================


class DegenerateSetError(LabError):
    """Evaluation requested on the degenerate set of a potential (e.g. inside the model hole)."""


class UnboundedSectionError(LabError):
    """The sublevel set defining a section is unbounded."""


class CenteringError(LabError):
    """Centering iteration did not converge; carries the best iterate found."""

    def __init__(self, message: str, best: Any = None, residual: float | None = None, partial: Any = None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.partial = partial  # cascade trace up to the failing height


class NotApplicableError(LabError):
    """An audit was requested where its hypotheses do not hold."""


# ============================================================================
# Estimates and transforms
# ============================================================================


class UnderSampledError(LabError):
    """Too few samples for a statistical fit."""


class IncompatibleRangesError(LabError):
    """Row subgradient ranges have an empty common window."""


class DegenerateDirectionError(LabError):
    """Second derivative in x₁ fell below its floor."""


# ============================================================================
# Pipeline
# ============================================================================


class SolverError(LabError):
    """The semi-discrete solver failed; carries the partial report."""

    exit_code = EXIT_SOLVER

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class ConfigSchemaError(LabError):
    """An experiment configuration failed validation."""

    exit_code = EXIT_SCHEMA

    def __init__(self, message: str, field_paths: list[str] | None = None):
        super().__init__(message)
        self.field_paths = field_paths or []


class VerificationError(LabError):
    """A run directory failed manifest or acceptance checks."""

    exit_code = EXIT_VERIFICATION


@contextmanager
def handle_stage_errors(stage: str) -> Generator[None, None, None]:
    """
    Context manager for consistent stage error logging.

    Logs laboratory errors with their class name and re-raises them unchanged
    so the CLI can map them to exit codes. Unexpected exceptions are logged
    with a traceback and re-raised as well.

    Usage:
        with handle_stage_errors("Solve"):
            potential, diagram, report = solve_weights(dom, seeds)
    """
    try:
        yield
    except LabError as e:
        logger.error(f"[{stage}] Failed: {type(e).__name__}: {e}")
        raise
    except Exception as e:
        logger.opt(exception=True).error(f"[{stage}] Failed: {type(e).__name__}: {e!r}")
        raise
