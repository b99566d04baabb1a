from .initial_state import parse_initial_state
from .persistence import (
    AttractorReportRecord,
    DistributionRecord,
    RunMetadata,
    ValidationRecord,
    read_distribution,
    read_record,
    write_result,
)

__all__ = [
    "parse_initial_state",
    "AttractorReportRecord",
    "DistributionRecord",
    "RunMetadata",
    "ValidationRecord",
    "read_distribution",
    "read_record",
    "write_result",
]
