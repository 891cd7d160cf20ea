import hashlib
import json

import pytest

from pipeline.artifacts import (
    load_manifest,
    manifest_mismatches,
    read_sections_csv,
    run_directory,
    stable_json,
    write_json,
    write_manifest,
    write_sections_csv,
)
from sections.schemas import SECTION_COLUMNS, SectionCase, SectionRow


@pytest.fixture
def run_dir(tmp_path):
    path = run_directory(tmp_path, "ab" * 32)
    config = {"name": "x", "solver": {"n_seeds": 4}}
    write_json(path / "config.json", config)
    write_json(path / "solve_report.json", {"converged": True})
    (path / "run.log").write_text("log line\n")
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    write_manifest(path, hashlib.sha256(canonical).hexdigest())
    return path


# --- Formatting tests ---


def test_stable_json_sorts_keys():
    assert stable_json({"b": 1, "a": [1.5, None]}) == '{\n  "a": [\n    1.5,\n    null\n  ],\n  "b": 1\n}\n'


def test_run_directory_uses_hash_prefix(tmp_path):
    path = run_directory(tmp_path, "0123456789abcdef" * 4)
    assert path.name == "0123456789ab"
    assert path.is_dir()


def test_sections_csv_has_fixed_header(tmp_path):
    rows = [
        SectionRow(x=0.1, y=0.2, d=0.01, case=SectionCase.MODEL_GEOMETRY, K_engulf=1.5),
        SectionRow(x=0.3, y=0.4, d=0.02, error="max_height: CenteringError: stalled"),
    ]
    path = write_sections_csv(tmp_path / "sections.csv", rows)
    assert path.read_text().splitlines()[0] == ",".join(SECTION_COLUMNS)
    parsed = read_sections_csv(path)
    assert parsed[0]["case"] == "ModelGeometry" and parsed[0]["error"] == ""
    assert parsed[1]["error"].startswith("max_height")


# --- Manifest tests ---


def test_manifest_tracks_artifacts_but_not_the_log(run_dir):
    manifest = load_manifest(run_dir)
    assert sorted(manifest.files) == ["config.json", "solve_report.json"]
    assert manifest_mismatches(run_dir) == []


def test_tampered_file_is_detected(run_dir):
    (run_dir / "solve_report.json").write_text('{"converged": false}\n')
    assert manifest_mismatches(run_dir) == ["solve_report.json: sha256 mismatch"]


def test_missing_and_extra_files_are_detected(run_dir):
    (run_dir / "solve_report.json").unlink()
    (run_dir / "extra.json").write_text("{}\n")
    assert manifest_mismatches(run_dir) == ["solve_report.json: missing", "extra.json: not in manifest"]


def test_edited_config_breaks_the_hash(run_dir):
    write_json(run_dir / "config.json", {"name": "y", "solver": {"n_seeds": 4}})
    problems = manifest_mismatches(run_dir)
    assert "config.json: does not match the recorded config hash" in problems
    assert "config.json: sha256 mismatch" in problems


def test_log_changes_are_ignored(run_dir):
    (run_dir / "run.log").write_text("another run\n")
    assert manifest_mismatches(run_dir) == []
