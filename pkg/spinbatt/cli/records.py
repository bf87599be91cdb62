"""
Result records and file output.
Every command writes one JSON ResultRecord; plot-ready series are written as
CSV through pandas when requested.
"""

import hashlib
import json
import logging
import math
import re
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping

import numpy as np
import pandas as pd

from ..core.config import RunConfig
from ..core.errors import ConfigurationError

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; numpy scalars and arrays are unwrapped, non-finite floats become null"""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _digest(data: Any) -> str:
    data_str = json.dumps(to_jsonable(data), sort_keys=True)
    return hashlib.sha256(data_str.encode()).hexdigest()[:16]


_FLOAT_MARK = "\x00"
_MARKED_FLOAT = re.compile(r'"\\u0000([-+.0-9eE]+)"')


def _float_text(value: float) -> str:
    text = f"{value:.17g}"
    return text if any(c in text for c in ".eE") else text + ".0"


def _mark_floats(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _mark_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_mark_floats(v) for v in value]
    if isinstance(value, float):
        return _FLOAT_MARK + _float_text(value)
    return value


def canonical_json(data: Any) -> str:
    """JSON text with sorted keys and every float at 17 significant digits, matching the CSV series"""
    text = json.dumps(_mark_floats(to_jsonable(data)), sort_keys=True, indent=2)
    return _MARKED_FLOAT.sub(r"\1", text)


@dataclass
class ResultRecord:
    """Output of one command; only the timestamp varies between identical runs"""
    run_id: str
    config_hash: str
    command: str
    request: Dict[str, Any]
    payload: Dict[str, Any]
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @classmethod
    def create(cls, config: RunConfig, command: str, request: Dict[str, Any],
               payload: Dict[str, Any]) -> "ResultRecord":
        config_hash = config.config_hash()
        request = to_jsonable(request)
        return cls(
            run_id=_digest({"config_hash": config_hash, "command": command, "request": request}),
            config_hash=config_hash,
            command=command,
            request=request,
            payload=to_jsonable(payload),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def _output_dir(directory: str) -> Path:
    path = Path(directory)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigurationError(f"output directory {directory} is not writable: {e}") from e
    return path


def write_record(record: ResultRecord, directory: str) -> Path:
    path = _output_dir(directory) / f"{record.command}.json"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(record.to_json() + "\n")
    logger.info(f"Wrote {path}")
    return path


def write_series(series: Dict[str, pd.DataFrame], command: str, directory: str) -> List[Path]:
    """One CSV per series, named <command>_<series>.csv"""
    out = _output_dir(directory)
    paths = []
    for name, frame in series.items():
        path = out / f"{command}_{name}.csv"
        frame.to_csv(path, index=False, float_format="%.17g")
        logger.info(f"Wrote {path} ({len(frame)} rows)")
        paths.append(path)
    return paths
