from pydantic_settings import BaseSettings, SettingsConfigDict


class Config(BaseSettings):
    # Geometry
    polygon_resolution: int = 256
    geometric_tol: float = 1e-12
    projection_tol: float = 1e-8

    # Semi-discrete solver
    solver_tol: float = 1e-7
    solver_max_iter: int = 50
    cg_rtol: float = 1e-12
    max_halvings: int = 30
    lloyd_steps: int = 5

    # Sections
    section_cap: float = 0.01
    ray_count: int = 512
    ray_passes: int = 4
    ray_area_rtol: float = 1e-7
    centering_max_iter: int = 200
    centering_tol: float = 1e-6
    max_height_iterations: int = 30
    min_height: float = 1e-12
    edge_samples: int = 4
    diagnostics_grid: int = 64

    # Estimates
    ring_base: int = 20
    ring_levels: int = 6
    angular_samples: int = 64
    discrete_angular_samples: int = 24
    bulk_spacing: float = 0.02
    bulk_loss_rtol: float = 1e-3
    gauss_nodes: int = 4
    fit_bins: int = 20
    fit_min_samples: int = 50

    # Runtime
    threads: int = 0  # 0 = logical cores
    runs_dir: str = "runs"

    # Logging
    log_level: str = "INFO"
    log_format: str = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    model_config = SettingsConfigDict(env_file=".env", env_prefix="HOLED_OT_", case_sensitive=False, extra="ignore")


config = Config()
