"""
Shared CLI plumbing: JSON output, artifact sinks and run manifests
"""

import hashlib
import json
import logging
import sys
from importlib import metadata
from pathlib import Path
from typing import Any, List, Optional

from menuforge.adapters.game_adapter import write_json
from menuforge.core.config import settings
from menuforge.schemas.reports import FileDigest, RunManifest


logger = logging.getLogger(__name__)


def emit(payload: Any) -> None:
    """Reports go to stdout as JSON; logs stay on stderr"""
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def library_versions() -> dict:
    versions = {settings.APP_NAME: settings.VERSION}
    for package in ("numpy", "pandas", "pydantic", "pyyaml"):
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            continue
    return versions


class ArtifactSink:
    """
    Destination of a command's files

    With --out pointing at a directory (existing, or given with a trailing
    slash), files go inside it and a manifest.json is written on close. With
    --out pointing at a file, the single main artifact goes there.
    """

    def __init__(self, out: Optional[str], command: str, inputs: List[str], seed: Optional[int] = None):
        self.out = out
        self.command = command
        self.inputs = [p for p in inputs if p and Path(p).is_file()]
        self.seed = seed
        self.outputs: List[Path] = []
        self.is_dir = out is not None and (out.endswith("/") or Path(out).is_dir())

    @property
    def active(self) -> bool:
        return self.out is not None

    def path_for(self, name: str) -> Path:
        if self.is_dir:
            return Path(self.out) / name
        return Path(self.out)

    def write_json(self, name: str, payload: Any) -> Optional[Path]:
        if not self.active:
            return None
        path = write_json(self.path_for(name), payload)
        self.outputs.append(path)
        return path

    def register(self, path: Path) -> None:
        self.outputs.append(Path(path))

    def close(self) -> Optional[Path]:
        if not self.is_dir:
            return None
        manifest = RunManifest(
            command=self.command,
            inputs=[FileDigest(path=str(p), sha256=sha256_of(p)) for p in self.inputs],
            outputs=[FileDigest(path=str(p), sha256=sha256_of(p)) for p in self.outputs],
            versions=library_versions(),
            seed=self.seed,
        )
        path = write_json(Path(self.out) / "manifest.json", manifest.model_dump())
        logger.info(f"Wrote manifest {path}", extra={"outputs": len(self.outputs)})
        return path
