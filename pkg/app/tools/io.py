"""
Input/Output tools for instances, traces and reports
"""

import csv
import json
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

from pydantic import BaseModel, ValidationError

from app.errors import ConfigError
from app.schema import ExecTrace, TaskInstance

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def get_data_dir() -> Path:
    """Get the data directory path, creating it if necessary"""
    data_dir = Path(os.getenv("DATA_DIR", "./data"))
    data_dir.mkdir(parents=True, exist_ok=True)
    return data_dir


def _jsonable(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, (list, tuple)):
        return [_jsonable(p) for p in payload]
    return payload


def dumps(payload: Any) -> str:
    """Stable JSON: sorted keys, so equal payloads give equal bytes."""
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False)


def write_json(filepath: PathLike, payload: Any) -> str:
    """
    Write a model, list of models or plain value as JSON.

    Args:
        filepath: destination, parent directories are created
        payload: pydantic model(s) or JSON-serialisable data

    Returns:
        The filepath where the file was written
    """
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload) + "\n", encoding="utf-8")
    logger.debug(f"wrote {path}")
    return str(path)


def read_json(filepath: PathLike) -> Any:
    path = Path(filepath)
    if not path.exists():
        raise ConfigError(f"file not found: {filepath}", {"path": str(path)})
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {filepath}: {e}", {"path": str(path)}) from e


def read_instance(filepath: PathLike) -> TaskInstance:
    try:
        return TaskInstance.model_validate(read_json(filepath))
    except ValidationError as e:
        raise ConfigError(f"invalid instance {filepath}: {e}", {"path": str(filepath)}) from e


def write_instance(filepath: PathLike, instance: TaskInstance) -> str:
    return write_json(filepath, instance)


def read_trace(filepath: PathLike) -> ExecTrace:
    data = read_json(filepath)
    # computed fields are derived, not accepted back
    for key in ("oracle_calls", "max_depth", "accumulated_cost", "neural_calls", "symbolic_ops"):
        data.pop(key, None)
    return ExecTrace.model_validate(data)


def write_trace(filepath: PathLike, trace: ExecTrace) -> str:
    return write_json(filepath, trace)


def write_csv(filepath: PathLike, rows: Sequence[BaseModel]) -> str:
    """One row per model, columns in field order."""
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    records: Iterable[dict] = [r.model_dump(mode="json") for r in rows]
    records = list(records)
    columns = list(records[0]) if records else []
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=columns)
        writer.writeheader()
        writer.writerows(records)
    logger.debug(f"wrote {len(records)} row(s) to {path}")
    return str(path)
