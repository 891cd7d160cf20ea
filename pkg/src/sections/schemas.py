from enum import Enum

from pydantic import BaseModel, Field, model_validator

# ============================================================================
# Classification
# ============================================================================


class SectionCase(str, Enum):
    INTERIOR_LIKE = "InteriorLike"
    TRANSVERSAL = "Transversal"
    MODEL_GEOMETRY = "ModelGeometry"
    BOUNDED = "Bounded"


class ClassifierThresholds(BaseModel):
    """Numeric stand-ins for the non-numeric constants of the boundary case analysis."""

    eps1: float = Field(0.05, gt=0, description="Exterior fraction above which a box counts as boundary-straddling")
    eps2: float = Field(0.1, gt=0, description="Tangent length ratio above which the tangent crosses the box")
    M1: float = Field(4.0, gt=1, description="Height divisor after an interior-like step")
    M2: float = Field(4.0, gt=1, description="Height divisor after a transversal step")
    eta_floor: float = Field(20.0, gt=0, description="Eccentricity at or below which the section is bounded")


class SectionDiagnostics(BaseModel):
    exterior_fraction: float = Field(..., ge=0, le=1, description="|box ∩ Ω₁ᶜ| / |box|")
    tangent_length_ratio: float = Field(..., ge=0, description="l_h / Λ_h, tangent line clipped to the box")
    eccentricity: float = Field(..., description="η_h = Λ_h / λ_h")
    sup_distance: float = Field(..., ge=0, description="sup of the boundary distance over the box")
    long: float = Field(..., description="Λ_h")
    short: float = Field(..., description="λ_h")
    height: float
    case: SectionCase | None = None

    @property
    def model_geometry_ratio(self) -> float:
        """(Λ² + sup d) / λ."""
        return (self.long**2 + self.sup_distance) / self.short


# ============================================================================
# Audits
# ============================================================================


class EngulfingReport(BaseModel):
    x: tuple[float, float]
    y: tuple[float, float] = Field(..., description="Tangency point on the hole")
    hole: int
    height: float
    K: float = Field(..., ge=1, description="Smallest dilation of the John box at y containing S_h(x)")
    eccentricity_x: float
    eccentricity_y: float


class CascadeStep(BaseModel):
    height: float
    eccentricity: float
    case: SectionCase
    exterior_fraction: float
    tangent_length_ratio: float
    eta_ratio: float | None = Field(None, description="η at this height over η at the previous height")
    containment: float | None = Field(None, description="Dilation of the previous box that contains this box")
    branch: bool = Field(False, description="Transversal step that increased the eccentricity")


class CascadeTrace(BaseModel):
    start: tuple[float, float]
    h_stop: float
    steps: list[CascadeStep] = Field(default_factory=list)
    k: int = Field(0, description="Interior-like steps")
    l: int = Field(0, description="Transversal steps")  # noqa: E741
    l_prime: int = Field(0, description="Eccentricity-increasing transversal steps")
    r: float = Field(1.0, description="Product of the containment factors of counted steps")
    terminal_reason: str = ""
    cap_multi_hole: bool = Field(False, description="The cap section meets more than one hole")

    @property
    def heights(self) -> list[float]:
        return [s.height for s in self.steps]

    @property
    def eccentricities(self) -> list[float]:
        return [s.eccentricity for s in self.steps]

    @property
    def cases(self) -> list[SectionCase]:
        return [s.case for s in self.steps]

    @property
    def branch_events(self) -> int:
        return sum(s.branch for s in self.steps)

    @property
    def branch_frequency(self) -> float:
        return self.branch_events / self.l if self.l else 0.0

    @property
    def soundness(self) -> float | None:
        """η_last·√r / η_first, the audited constant of the eccentricity bookkeeping."""
        if not self.steps:
            return None
        return self.steps[-1].eccentricity * self.r**0.5 / self.steps[0].eccentricity

    @model_validator(mode="after")
    def _heights_decrease(self):
        h = self.heights
        if any(b >= a for a, b in zip(h, h[1:], strict=False)):
            raise ValueError("Cascade heights must strictly decrease")
        return self


class HeightComparability(BaseModel):
    h1: float
    h2: float
    short_ratio: float = Field(..., description="λ_{h1} / λ_{h2}")
    long_ratio: float = Field(..., description="Λ_{h1} / Λ_{h2}")


class SectionLaws(BaseModel):
    """|S_h|/h and diam S_h at one point over increasing heights."""

    point: tuple[float, float]
    heights: list[float]
    area_ratio: list[float]
    diameter: list[float]
    comparability: list[HeightComparability] = Field(default_factory=list)

    @property
    def diameter_monotone(self) -> bool:
        d = self.diameter
        return all(b >= a * (1.0 - 1e-9) for a, b in zip(d, d[1:], strict=False))


# ============================================================================
# Per-point rows
# ============================================================================

SECTION_COLUMNS = [
    "x",
    "y",
    "d",
    "h_bar",
    "lambda",
    "Lambda",
    "eta",
    "exterior_fraction",
    "l_ratio",
    "case",
    "K_engulf",
    "model_ratio",
    "error",
]


class SectionRow(BaseModel):
    """One CSV row of the per-point section analysis."""

    x: float
    y: float
    d: float
    h_bar: float | None = None
    lam: float | None = Field(None, serialization_alias="lambda")
    Lam: float | None = Field(None, serialization_alias="Lambda")
    eta: float | None = None
    exterior_fraction: float | None = None
    l_ratio: float | None = None
    case: SectionCase | None = None
    K_engulf: float | None = None
    model_ratio: float | None = None
    error: str | None = None

    def to_csv_row(self) -> list[str]:
        values = self.model_dump(by_alias=True, mode="json")
        return [_fmt(values[c]) for c in SECTION_COLUMNS]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)
