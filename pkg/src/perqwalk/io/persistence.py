"""
Result files.

Records are dataclasses-json dataclasses that refuse unknown fields on read.
JSON is written with sorted keys and no timestamps, CSV with 17 significant
digits, so reruns of a configuration produce byte-identical files.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar, Union

from dataclasses_json import Undefined, dataclass_json
from dataclasses_json.undefined import UndefinedParameterError

from perqwalk.errors import ConfigError
from perqwalk.walk.states import PositionDistribution


SCHEMA_VERSION = 1
CSV_DIGITS = 17


@dataclass_json(undefined=Undefined.RAISE)
@dataclass
class RunMetadata:
    """Everything needed to reproduce a result file."""
    command: str
    lattice: str
    coin: str
    p: float
    steps: int
    mode: str
    tool_version: str
    seed: Optional[int] = None
    trials: Optional[int] = None
    method: Optional[str] = None
    initial: Optional[str] = None
    coin_file: Optional[str] = None
    mc_block: Optional[int] = None


@dataclass_json(undefined=Undefined.RAISE)
@dataclass
class DistributionRecord:
    """
    A position distribution P(s, t) (rows = s, columns = t), with standard
    errors for Monte Carlo runs and attractor bookkeeping for asymptotic
    runs.
    """
    metadata: RunMetadata
    probabilities: List[List[float]]
    stderr: Optional[List[List[float]]] = None
    attractor_dimension: Optional[int] = None
    attractor_status: Optional[str] = None
    method_used: Optional[str] = None
    schema: int = SCHEMA_VERSION


@dataclass_json(undefined=Undefined.RAISE)
@dataclass
class LambdaCount:
    re: float
    im: float
    multiplicity: int


@dataclass_json(undefined=Undefined.RAISE)
@dataclass
class AttractorReportRecord:
    metadata: RunMetadata
    analytic_count: Optional[int]
    numeric_count: int
    match: bool
    closed_form: bool
    general_count: Optional[int] = None
    lambdas: List[LambdaCount] = field(default_factory=list)
    schema: int = SCHEMA_VERSION


@dataclass_json(undefined=Undefined.RAISE)
@dataclass
class CheckRecord:
    suite: str
    invariant: str
    instance: str
    value: float
    tol: float
    passed: bool
    notes: str = ""


@dataclass_json(undefined=Undefined.RAISE)
@dataclass
class ValidationRecord:
    suites: List[str]
    passed: bool
    checks: List[CheckRecord]
    tool_version: str
    schema: int = SCHEMA_VERSION


Record = Union[DistributionRecord, AttractorReportRecord, ValidationRecord]
R = TypeVar("R", DistributionRecord, AttractorReportRecord, ValidationRecord)


# ---- Writing ----------------------------------------------------------------


def distribution_record(
    dist: PositionDistribution,
    metadata: RunMetadata,
    **extra: Any,
) -> DistributionRecord:
    stderr = None if dist.stderr is None else dist.stderr.tolist()
    return DistributionRecord(metadata=metadata, probabilities=dist.probs.tolist(), stderr=stderr, **extra)


def to_json(record: Record) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n"


def distribution_csv(record: DistributionRecord) -> str:
    """Header s,t,P[,stderr]; rows in basis_index site order."""
    with_err = record.stderr is not None
    lines = ["s,t,P,stderr" if with_err else "s,t,P"]
    for s, row in enumerate(record.probabilities):
        for t, prob in enumerate(row):
            cells = [str(s), str(t), f"{prob:.{CSV_DIGITS}g}"]
            if with_err:
                cells.append(f"{record.stderr[s][t]:.{CSV_DIGITS}g}")
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render(record: Record, fmt: str) -> str:
    if fmt == "json":
        return to_json(record)
    if fmt == "csv":
        if not isinstance(record, DistributionRecord):
            raise ConfigError(f"CSV output is only available for distributions, not {type(record).__name__}")
        return distribution_csv(record)
    raise ConfigError(f"Unknown format '{fmt}'. Known formats: csv, json")


def write_result(record: Record, fmt: str, out: Optional[Union[str, Path]]) -> Optional[Path]:
    """Write to `out`, or return None after printing to stdout when `out` is None."""
    text = render(record, fmt)
    if out is None:
        print(text, end="")
        return None
    path = Path(out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def write_json(payload: Dict[str, Any], out: Union[str, Path]) -> Path:
    path = Path(out)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


# ---- Reading ----------------------------------------------------------------


def read_record(path: Union[str, Path], cls: Type[R]) -> R:
    """
    Load a JSON result file as `cls`. Unknown fields, a missing or foreign
    schema version and malformed JSON raise ConfigError.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read result file {path}: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: unsupported schema {data.get('schema') if isinstance(data, dict) else None!r}")
    try:
        return cls.from_dict(data)  # type: ignore[attr-defined]
    except (UndefinedParameterError, KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: not a valid {cls.__name__}: {exc}") from exc


def read_distribution(path: Union[str, Path]) -> DistributionRecord:
    return read_record(path, DistributionRecord)
