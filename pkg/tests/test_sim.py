import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmauth.sim import SimError, SimNet
from swarmauth.trace import HopType, TraceRow, read_trace_csv, write_trace_csv


def test_equal_times_dispatch_in_insertion_order():
    net = SimNet()
    seen = []
    for tag in "abc":
        net.schedule(5, seen.append, tag)
    net.run_until_idle()
    assert seen == ["a", "b", "c"]


def test_earlier_events_first():
    net = SimNet()
    seen = []
    net.schedule(0.6, seen.append, 0.6)
    net.schedule(0.3, seen.append, 0.3)
    net.run_until_idle()
    assert seen == [0.3, 0.6]
    assert net.now == 0.6


def test_negative_delay_is_refused():
    with pytest.raises(SimError):
        SimNet().schedule(-0.1, print)


def test_empty_run():
    trace = SimNet().run_until_idle()
    assert trace.rows == [] and trace.total_ms == 0


@given(st.lists(st.tuples(st.floats(0, 100, allow_nan=False), st.integers()), max_size=40))
def test_dispatch_order_is_time_then_sequence(events):
    net = SimNet()
    seen = []
    for i, (t, _) in enumerate(events):
        net.schedule(t, lambda i=i, t=t: seen.append((t, i)))
    net.run_until_idle()
    assert seen == sorted(seen)
    assert net.dispatched == len(events)


class _Msg:
    def __init__(self, sender, receiver, msg_type="Ping"):
        self.sender, self.receiver, self.msg_type, self.size_bytes = sender, receiver, msg_type, 8


class _Sink:
    def __init__(self, actor_id):
        self.actor_id = actor_id
        self.got = []

    def receive(self, msg):
        self.got.append(msg)


def test_medium_serializes_transmissions():
    net = SimNet()
    b = _Sink("b")
    net.attach(b)
    net.send(_Msg("a", "b"))
    net.send(_Msg("a", "b"))
    trace = net.run_until_idle()
    assert [r.time_ms for r in trace.rows] == pytest.approx([0.6, 1.2])
    assert len(b.got) == 2


def test_broadcast_reaches_every_recipient_once():
    net = SimNet()
    sinks = [_Sink(n) for n in "xyz"]
    for s in sinks:
        net.attach(s)
    net.send(_Msg("a", "*"), recipients=["x", "z"])
    trace = net.run_until_idle()
    assert len(trace.rows) == 1
    assert [len(s.got) for s in sinks] == [1, 0, 1]


def test_parallel_identical_compute_is_one_row():
    net = SimNet()
    for who in ("g1", "g2", "g3"):
        net.compute(who, "ec_scalar_mult", lambda: None)
    net.compute("g1", "ec_scalar_mult", lambda: None)
    trace = net.run_until_idle()
    assert [r.sender for r in trace.rows] == ["g1+g2+g3", "g1"]
    assert trace.total_ms == pytest.approx(2 * 0.612)


def test_duplicate_actor_and_costly_note():
    net = SimNet()
    net.attach(_Sink("a"))
    with pytest.raises(SimError):
        net.attach(_Sink("a"))
    with pytest.raises(SimError):
        net.note("a", "ec_scalar_mult")


def test_unknown_receiver_is_dropped_quietly():
    net = SimNet()
    net.send(_Msg("a", "ghost"))
    assert len(net.run_until_idle().rows) == 1


rows = st.builds(
    TraceRow,
    st.floats(0, 1e6, allow_nan=False),
    st.from_regex(r"[a-z0-9+\-]{1,12}", fullmatch=True),
    st.from_regex(r"[a-z0-9*\-]{1,12}", fullmatch=True),
    st.sampled_from(["JoinRequest", "Reject", "ec_scalar_mult"]),
    st.integers(0, 10_000),
    st.sampled_from(list(HopType)),
)


@given(st.lists(rows, max_size=20))
def test_trace_csv_round_trip(rs):
    buf = io.StringIO()
    write_trace_csv(rs, buf)
    buf.seek(0)
    assert read_trace_csv(buf) == rs


def test_trace_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        read_trace_csv(io.StringIO("t,a,b\n"))
