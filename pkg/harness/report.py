"""Experiment reports: rows per (algorithm, ladder point), CSV and JSON emission."""

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from utils.errors import ReportIOError, ValidationError

CSV_COLUMNS = ["algorithm", "iterations", "error_norm", "multiplications", "wall_ms"]
FLOAT_FORMAT = "%.17g"


class ReportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class ReportRow:
    algorithm: str
    iterations: int
    error_norm: float
    multiplications: int
    wall_ms: float


@dataclass
class ExperimentReport:
    rows: List[ReportRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.rows], columns=CSV_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": [asdict(r) for r in self.rows], "metadata": self.metadata}

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> "ExperimentReport":
        try:
            rows = [
                ReportRow(
                    algorithm=str(r["algorithm"]),
                    iterations=int(r["iterations"]),
                    error_norm=float(r["error_norm"]),
                    multiplications=int(r["multiplications"]),
                    wall_ms=float(r["wall_ms"]),
                )
                for r in doc["rows"]
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed report document: {e}") from e
        return cls(rows=rows, metadata=dict(doc.get("metadata", {})))

    def error_at(self, algorithm: str, iterations: int) -> float:
        for row in self.rows:
            if row.algorithm == algorithm and row.iterations == iterations:
                return row.error_norm
        raise KeyError((algorithm, iterations))


def write_frame(frame: pd.DataFrame, path) -> None:
    """CSV with floats at 17 significant digits."""
    path = Path(path)
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ReportIOError(path, e) from e


def emit_report(report: ExperimentReport, fmt: ReportFormat, path) -> None:
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.CSV:
        write_frame(report.to_frame(), path)
        return
    path = Path(path)
    try:
        with open(path, "w") as f:
            # repr floats are the shortest exact round trip (never more than 17 digits)
            json.dump(report.to_dict(), f, indent=2, allow_nan=False)
            f.write("\n")
    except (OSError, ValueError) as e:
        raise ReportIOError(path, e) from e


def load_report(path) -> ExperimentReport:
    path = Path(path)
    try:
        with open(path, "r") as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ReportIOError(path, e) from e
    return ExperimentReport.from_dict(doc)
