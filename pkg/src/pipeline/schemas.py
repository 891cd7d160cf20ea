from typing import Literal

from pydantic import BaseModel, Field

from estimates.schemas import BlowupFit, HolderReport, NormReport


class ExperimentReport(BaseModel):
    """Contents of report.json: integral norms, blow-up fit and Hölder sweep of one potential."""

    kind: Literal["oracle", "discrete"]
    n_samples: int = Field(..., description="Field samples after dropping failed proxies")
    norms: list[NormReport] = Field(default_factory=list)
    exact_norms: dict[str, float] = Field(default_factory=dict, description="Oracle W^{2,p} value per p < 2")
    fit: BlowupFit | None = None
    certified_constant: float | None = Field(None, description="max proxy·√d over the fit band")
    holder: HolderReport | None = None
    errors: list[str] = Field(default_factory=list)


class RunResult(BaseModel):
    run_dir: str
    config_hash: str
    artifacts: list[str] = Field(default_factory=list)
