"""
Timing of the expensive blocks (channel steps, attractor construction,
Monte Carlo batches).

Every traced block logs its wall time at DEBUG on `perqwalk.tracing` and is
accumulated per name, so a debug run can end with a timing table.
"""
from __future__ import annotations

import logging
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from functools import wraps
from typing import Any, Callable, Dict, Generator, List, Optional, Tuple


logger = logging.getLogger("perqwalk.tracing")


@dataclass
class TraceStats:
    calls: int = 0
    seconds: float = 0.0
    slowest: float = 0.0

    def add(self, elapsed: float) -> None:
        self.calls += 1
        self.seconds += elapsed
        self.slowest = max(self.slowest, elapsed)


# Monte Carlo blocks finish on worker threads.
_LOCK = threading.Lock()
_STATS: Dict[str, TraceStats] = {}


def _describe(extra: Optional[Dict[str, Any]]) -> str:
    if not extra:
        return ""
    return " " + " ".join(f"{k}={v}" for k, v in sorted(extra.items()))


@contextmanager
def trace_block(name: str, *, extra: Optional[Dict[str, Any]] = None) -> Generator[None, None, None]:
    """
    Example:
        with trace_block("run_evolve", extra={"mode": "mc", "lattice": "5x5:open,open"}):
            dist = evolve_mc(channel, psi0, steps, trials, seed)
    """
    start = time.perf_counter()
    logger.debug("start %s%s", name, _describe(extra))
    try:
        yield
    finally:
        elapsed = time.perf_counter() - start
        with _LOCK:
            _STATS.setdefault(name, TraceStats()).add(elapsed)
        logger.debug("done  %s in %.3fs%s", name, elapsed, _describe(extra))


def traced(name: Optional[str] = None) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    """Decorator form of trace_block, named after the function unless `name` is given."""

    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        trace_name = name or func.__qualname__

        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            with trace_block(trace_name):
                return func(*args, **kwargs)

        return wrapper

    return decorator


def trace_summary() -> List[Tuple[str, TraceStats]]:
    """Accumulated stats, slowest total first."""
    with _LOCK:
        items = [(k, TraceStats(v.calls, v.seconds, v.slowest)) for k, v in _STATS.items()]
    return sorted(items, key=lambda kv: kv[1].seconds, reverse=True)


def reset_traces() -> None:
    with _LOCK:
        _STATS.clear()
