import logging

from perqwalk.utils.tracing import reset_traces, trace_block, trace_summary, traced


@traced()
def _square(x):
    return x * x


def test_blocks_accumulate_per_name(caplog):
    reset_traces()
    with caplog.at_level(logging.DEBUG, logger="perqwalk.tracing"):
        for _ in range(3):
            with trace_block("step", extra={"lattice": "3x3:open,open"}):
                pass
        assert _square(4) == 16
    stats = dict(trace_summary())
    assert stats["step"].calls == 3
    assert stats["_square"].calls == 1
    assert stats["step"].slowest <= stats["step"].seconds
    assert any("lattice=3x3:open,open" in r.getMessage() for r in caplog.records)


def test_block_is_recorded_when_it_raises():
    reset_traces()
    try:
        with trace_block("failing"):
            raise RuntimeError("boom")
    except RuntimeError:
        pass
    assert dict(trace_summary())["failing"].calls == 1
    reset_traces()
    assert trace_summary() == []
