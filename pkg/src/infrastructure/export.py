"""CSV and JSON writers for results, with build provenance."""

import csv
import json
import logging
import subprocess
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

from compboot import __version__
from src.domain.models.results import FinalResult, Trajectory

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ("k", "t", "N_R", "N_B", "enabled_R", "enabled_B")
PROVENANCE_PREFIX = "# "


@lru_cache(maxsize=1)
def build_id() -> str:
    """``git describe --always --dirty`` of the source tree, else the package version."""
    try:
        completed = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        )
        described = completed.stdout.strip()
        if described:
            return described
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"


def write_rows(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    provenance: Optional[Dict[str, Any]] = None,
) -> Path:
    """RFC-4180 CSV with LF line endings.

    With ``provenance`` the first line is ``# `` followed by the block as
    compact JSON; readers skip it as a comment line.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        if provenance is not None:
            block = json.dumps(provenance, sort_keys=True, separators=(",", ":"))
            f.write(f"{PROVENANCE_PREFIX}{block}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    logger.info(f"Wrote {path}")
    return path


def read_provenance(path: Path) -> Optional[Dict[str, Any]]:
    """Provenance block of a CSV written by write_rows, None without one."""
    with open(path, encoding="utf-8") as f:
        first = f.readline()
    if not first.startswith(PROVENANCE_PREFIX):
        return None
    return json.loads(first[len(PROVENANCE_PREFIX) :])


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return value


def write_trajectory_csv(
    trajectory: Trajectory, path: Path, provenance: Optional[Dict[str, Any]] = None
) -> Path:
    """Trajectory with header k,t,N_R,N_B,enabled_R,enabled_B."""
    return write_rows(
        path,
        TRAJECTORY_HEADER,
        (record.as_row() for record in trajectory.records),
        provenance,
    )


def write_json(data: Dict[str, Any], path: Path) -> Path:
    """Indented JSON with a trailing newline."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def provenance(master_seed: int, plan: Dict[str, Any]) -> Dict[str, Any]:
    """Block embedded in every output: build id, master seed and the full plan."""
    return {"build": build_id(), "master_seed": master_seed, "plan": plan}


def result_payload(result: FinalResult, plan: Dict[str, Any]) -> Dict[str, Any]:
    """FinalResult JSON object plus provenance."""
    data = result.to_dict()
    data["provenance"] = provenance(result.params.seed, plan)
    return data
