# src/perqwalk/utils/__init__.py

from .tracing import TraceStats, reset_traces, trace_block, trace_summary, traced

__all__ = ["TraceStats", "reset_traces", "trace_block", "trace_summary", "traced"]
