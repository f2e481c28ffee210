"""
artifacts.py - Atomic CSV/JSON/text output and the run manifest

Every artifact is written to a temporary file in its target directory and
moved into place with os.replace, so a reader never sees a half-written file.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import platform
import tempfile
from importlib import metadata
from pathlib import Path
from typing import Any, Iterable, Sequence


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default)


def _json_default(value: Any) -> Any:
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def write_json(path: str | Path, payload: Any) -> Path:
    return atomic_write_text(path, canonical_json(payload) + "\n")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return atomic_write_text(path, buf.getvalue())


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True, separators=(",", ":")).encode("utf-8")).hexdigest()


def _version(package: str) -> str | None:
    try:
        return metadata.version(package)
    except metadata.PackageNotFoundError:
        return None


def environment_versions() -> dict[str, str | None]:
    from . import __version__

    return {
        "forestlab": __version__,
        "python": platform.python_version(),
        "numpy": _version("numpy"),
        "scipy": _version("scipy"),
        "networkx": _version("networkx"),
        "platform": platform.platform(),
    }


def build_manifest(
    experiment: str,
    config: dict,
    seed: int,
    wall_time: float,
    artifacts: Sequence[str],
    *,
    censoring_rate: float | None = None,
    clipping_rate: float | None = None,
    extra: dict | None = None,
) -> dict:
    """Everything needed to rerun an experiment and check its aggregates."""
    return {
        "experiment": experiment,
        "config": config,
        "config_sha256": config_hash(config),
        "seed": seed,
        "versions": environment_versions(),
        "wall_time_seconds": round(wall_time, 3),
        "censoring_rate": censoring_rate,
        "clipping_rate": clipping_rate,
        "artifacts": sorted(artifacts),
        **(extra or {}),
    }
