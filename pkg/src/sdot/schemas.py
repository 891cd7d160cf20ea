"""Semi-discrete solver schemas."""

from pydantic import BaseModel, Field


class SolveReport(BaseModel):
    """Convergence record of one solve."""

    n_seeds: int = Field(..., description="Number of target seeds")
    iterations: int = Field(0, description="Newton iterations at the final hole density")
    total_iterations: int = Field(0, description="Newton iterations across all continuation stages")
    max_area_residual: float = Field(..., description="max_i | |cell_i ∩ Ω₁| − 1/N |")
    residual_history: list[float] = Field(default_factory=list, description="Max residual after each accepted step")
    damping_history: list[float] = Field(default_factory=list, description="Accepted step length τ per iteration")
    continuation: list[float] = Field(default_factory=list, description="Hole densities visited before t = 1")
    reinitialized: bool = Field(False, description="Initial weights were replaced by spread offsets")
    converged: bool = False
    message: str = ""
    oracle_gradient_error: float | None = Field(None, description="Mean |∇u_N − ∇u_model| when an analytic oracle applies")
