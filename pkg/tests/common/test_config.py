from common.config import Config

# --- Config tests ---


def test_defaults():
    cfg = Config(_env_file=None)
    assert cfg.solver_tol == 1e-7
    assert cfg.solver_max_iter == 50
    assert cfg.section_cap == 0.01
    assert cfg.runs_dir == "runs"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HOLED_OT_THREADS", "3")
    monkeypatch.setenv("HOLED_OT_LOG_LEVEL", "DEBUG")
    cfg = Config(_env_file=None)
    assert cfg.threads == 3
    assert cfg.log_level == "DEBUG"
