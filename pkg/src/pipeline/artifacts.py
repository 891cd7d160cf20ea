"""
Run directories and their manifest.

Every artifact is written with stable formatting (sorted keys, repr floats,
fixed column order) so identical inputs give identical bytes. The manifest
records the config hash, the tool version and a sha256 per artifact file.
"""

from __future__ import annotations

import csv
import hashlib
import json
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from pydantic import BaseModel, Field

from common.logging import get_logger
from sections.schemas import SECTION_COLUMNS, SectionRow

logger = get_logger(__name__)

MANIFEST = "manifest.json"
UNTRACKED = {MANIFEST, "run.log"}

try:
    TOOL_VERSION = version("holed-ot-lab")
except PackageNotFoundError:
    TOOL_VERSION = "0.0.0+local"


class Manifest(BaseModel):
    config_hash: str
    tool_version: str = TOOL_VERSION
    files: dict[str, str] = Field(default_factory=dict, description="Artifact name → sha256")


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def stable_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, obj) -> Path:
    if isinstance(obj, BaseModel):
        obj = obj.model_dump(mode="json", by_alias=True)
    path.write_text(stable_json(obj), encoding="utf-8")
    return path


def write_sections_csv(path: Path, rows: list[SectionRow]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SECTION_COLUMNS)
        for row in rows:
            writer.writerow(row.to_csv_row())
    return path


def read_sections_csv(path: Path) -> list[dict[str, str]]:
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def run_directory(runs_dir: str | Path, config_hash: str) -> Path:
    path = Path(runs_dir) / config_hash[:12]
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_manifest(run_dir: Path, config_hash: str) -> Manifest:
    files = {
        p.name: sha256_file(p) for p in sorted(run_dir.iterdir()) if p.is_file() and p.name not in UNTRACKED
    }
    manifest = Manifest(config_hash=config_hash, files=files)
    write_json(run_dir / MANIFEST, manifest)
    logger.debug(f"[Artifacts] Manifest with {len(files)} files written to {run_dir}")
    return manifest


def load_manifest(run_dir: Path) -> Manifest:
    return Manifest.model_validate_json((run_dir / MANIFEST).read_text(encoding="utf-8"))


def manifest_mismatches(run_dir: Path) -> list[str]:
    """Human-readable list of hash problems (empty when the run is intact)."""
    manifest = load_manifest(run_dir)
    problems = []
    config_file = run_dir / "config.json"
    if config_file.exists():
        canonical = json.dumps(json.loads(config_file.read_text(encoding="utf-8")), sort_keys=True, separators=(",", ":"))
        if hashlib.sha256(canonical.encode()).hexdigest() != manifest.config_hash:
            problems.append("config.json: does not match the recorded config hash")
    for name, digest in manifest.files.items():
        path = run_dir / name
        if not path.exists():
            problems.append(f"{name}: missing")
        elif sha256_file(path) != digest:
            problems.append(f"{name}: sha256 mismatch")
    for path in sorted(run_dir.iterdir()):
        if path.is_file() and path.name not in UNTRACKED and path.name not in manifest.files:
            problems.append(f"{path.name}: not in manifest")
    return problems
