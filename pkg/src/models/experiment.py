"""Experiment configuration files (JSON) and their validation."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Annotated

import numpy as np
from pydantic import BaseModel, Field, FilePath, NonNegativeInt, PositiveFloat, PositiveInt, ValidationError, field_validator, model_validator

from common.config import config
from common.errors import ConfigSchemaError
from geometry.domain import HoledDomain, load_domain
from geometry.polygon import ConvexPolygon
from geometry.shapes import DiskShape, DomainSpec, TargetShape
from sections.schemas import ClassifierThresholds

# ============================================================================
# Sections of the config file
# ============================================================================


class SolverSettings(BaseModel):
    n_seeds: PositiveInt = Field(1024, description="Number of target seeds N")
    tol: PositiveFloat = Field(default_factory=lambda: config.solver_tol, description="Max cell mass residual")
    max_iter: PositiveInt = Field(default_factory=lambda: config.solver_max_iter)
    rng_seed: NonNegativeInt = 0
    lloyd_steps: NonNegativeInt = Field(default_factory=lambda: config.lloyd_steps)


class AnalysisSettings(BaseModel):
    heights: list[PositiveFloat] = Field(default_factory=lambda: [1e-4, 1e-3, 5e-3], description="Section heights")
    grid_level: NonNegativeInt = Field(default_factory=lambda: config.ring_levels, description="Refinement level")
    p_values: list[Annotated[float, Field(ge=0)]] = Field(default_factory=lambda: [1.5, 1.9, 2.0])
    d_band: tuple[PositiveFloat, PositiveFloat] = (1e-4, 1e-2)
    thresholds: ClassifierThresholds = Field(default_factory=ClassifierThresholds)
    n_points: PositiveInt = Field(8, description="Distances per normal in the section sweep")
    n_angles: PositiveInt = Field(4, description="Normals per hole in the section sweep")
    engulfing_heights: list[PositiveFloat] = Field(
        default_factory=lambda: [1e-4, 1e-3, 1e-2], description="Heights of the tangent-section engulfing sweep"
    )

    @field_validator("heights")
    @classmethod
    def _below_cap(cls, heights: list[float]) -> list[float]:
        for h in heights:
            if h >= config.section_cap:
                raise ValueError(f"height {h} is not below the cap {config.section_cap}")
        return heights

    @field_validator("engulfing_heights")
    @classmethod
    def _at_most_cap(cls, heights: list[float]) -> list[float]:
        for h in heights:
            if h > config.section_cap:
                raise ValueError(f"engulfing height {h} is above the cap {config.section_cap}")
        return heights

    @field_validator("d_band")
    @classmethod
    def _ordered(cls, band: tuple[float, float]) -> tuple[float, float]:
        if band[0] >= band[1]:
            raise ValueError(f"d_band must be increasing, got {band}")
        return band


class AcceptanceSettings(BaseModel):
    """Thresholds used by `verify`; a null value disables its check."""

    model_geometry_fraction: float | None = Field(0.9, ge=0, le=1, description="Min share of ModelGeometry rows")
    model_ratio_max: float = Field(10.0, gt=0, description="Bound on (Λ² + sup d)/λ for ModelGeometry rows")
    engulfing_max: float | None = Field(20.0, ge=1)
    interior_eta_factor: float | None = Field(
        None, gt=0, description="Bound on η_{h/M₁}/η_h after InteriorLike; fails when no trace has such a step"
    )
    certified_slack: float | None = Field(2.0, ge=1, description="Bound on η·√d over the constant fitted far out")
    area_ratio_band: tuple[PositiveFloat, PositiveFloat] | None = (0.1, 10.0)
    comparability_band: tuple[PositiveFloat, PositiveFloat] | None = Field(
        (0.125, 8.0), description="Band for λ and Λ ratios between heights a factor 2 apart"
    )
    slope_band: tuple[float, float] | None = (-0.65, -0.35)
    series_tolerance: float = Field(0.02, gt=0, description="Last relative change of converging series (p < 2)")
    increment_tolerance: float = Field(0.2, gt=0, description="Spread of per-level increments at p = 2")
    holder_drift: float | None = Field(0.1, gt=0)
    holder_growth: float = Field(2.0, gt=1, description="Min growth of the α = 0.75 seminorm per quadrupling")


class _Hashed(BaseModel):
    def canonical_bytes(self) -> bytes:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":")).encode()

    def canonical_dict(self) -> dict:
        return json.loads(self.canonical_bytes())

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


class OracleConfig(_Hashed):
    """Analytic model run: annulus with hole radius r mapped onto the unit-area disk."""

    oracle_radius: PositiveFloat
    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    acceptance: AcceptanceSettings = Field(default_factory=lambda: AcceptanceSettings(slope_band=(-0.52, -0.48)))
    holder_pairs: list[PositiveInt] = Field(default_factory=lambda: [256, 1024, 4096])
    rng_seed: NonNegativeInt = 0


class ExperimentConfig(_Hashed):
    """One experiment: source domain, target, solver and analysis settings."""

    name: str = "experiment"
    domain: DomainSpec | FilePath
    target: TargetShape = Field(default_factory=lambda: DiskShape(radius=1.0 / np.sqrt(np.pi)))
    solver: SolverSettings = Field(default_factory=SolverSettings)
    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    acceptance: AcceptanceSettings = Field(default_factory=AcceptanceSettings)

    @model_validator(mode="after")
    def _domain_file_parses(self):
        if isinstance(self.domain, Path):
            DomainSpec.model_validate_json(self.domain.read_text())
        return self

    # --- Derived objects ---

    def build_domain(self) -> HoledDomain:
        if isinstance(self.domain, Path):
            return load_domain(self.domain)
        return HoledDomain.from_spec(self.domain)

    def target_polygon(self) -> ConvexPolygon:
        """Target polygon rescaled to unit area about the origin."""
        poly = self.target.polygon(config.polygon_resolution)
        return ConvexPolygon(poly.vertices / np.sqrt(poly.area))

    def inline_domain(self) -> ExperimentConfig:
        """Copy with a domain file replaced by its contents, so the run directory is self-contained."""
        if not isinstance(self.domain, Path):
            return self
        return self.model_copy(update={"domain": DomainSpec.model_validate_json(self.domain.read_text())})

    def with_overrides(self, **overrides) -> ExperimentConfig:
        """Copy with CLI overrides: solver fields and `grid_level`; None values are ignored."""
        data = self.model_dump()
        for key, value in overrides.items():
            if value is None:
                continue
            section = "analysis" if key == "grid_level" else "solver"
            data[section][key] = value
        return validate_experiment(data)


def _field_paths(error: ValidationError) -> list[str]:
    return [".".join(str(p) for p in err["loc"]) for err in error.errors()]


def validate_experiment(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        paths = _field_paths(e)
        raise ConfigSchemaError(f"Invalid experiment config at {', '.join(paths)}", field_paths=paths) from e


def load_experiment(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise ConfigSchemaError(f"Config file {path} does not exist", field_paths=["<file>"]) from e
    except json.JSONDecodeError as e:
        raise ConfigSchemaError(f"Config file {path} is not valid JSON: {e}", field_paths=["<file>"]) from e
    return validate_experiment(data)


def load_run_config(path: str | Path) -> ExperimentConfig | OracleConfig:
    """The config.json of a run directory, experiment or oracle."""
    data = json.loads(Path(path).read_text())
    if "oracle_radius" in data:
        try:
            return OracleConfig.model_validate(data)
        except ValidationError as e:
            paths = _field_paths(e)
            raise ConfigSchemaError(f"Invalid oracle config at {', '.join(paths)}", field_paths=paths) from e
    return validate_experiment(data)
