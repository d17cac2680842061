import math
from random import Random

import pytest

from driftnet.linklayer import (Connection, InterfaceSpec, _pairs_dense, _pairs_grid,
                                begin_transfer, connected_index_pairs, progress_transfers,
                                update_connectivity)
from driftnet.routing import Message

from conftest import stub_node


def _msg(size=250_000, mid="M1"):
    return Message(mid, "a", "b", size, 0.0, 1800.0, ["a"], 1)


def _pair(range_a=200.0, range_b=200.0, speed_a=250_000, speed_b=250_000):
    a = stub_node("a")
    b = stub_node("b")
    a.interface = InterfaceSpec(speed_a, range_a)
    b.interface = InterfaceSpec(speed_b, range_b)
    return a, b


def test_connectivity_boundaries():
    positions = [(0.0, 0.0), (199.9, 0.0)]
    assert connected_index_pairs(positions, [200.0, 200.0]) == [(0, 1)]
    positions = [(0.0, 0.0), (200.1, 0.0)]
    assert connected_index_pairs(positions, [200.0, 200.0]) == []
    # min-rule: ranges 100 and 200, distance 150 -> not connected
    positions = [(0.0, 0.0), (150.0, 0.0)]
    assert connected_index_pairs(positions, [100.0, 200.0]) == []
    assert connected_index_pairs(positions, [200.0, 200.0]) == [(0, 1)]


def test_exact_range_boundary_is_connected():
    positions = [(0.0, 0.0), (200.0, 0.0)]
    assert connected_index_pairs(positions, [200.0, 200.0]) == [(0, 1)]


def test_dense_and_grid_paths_identical():
    rng = Random(31)
    for trial in range(20):
        n = rng.randint(2, 60)
        positions = [(rng.uniform(0, 800), rng.uniform(0, 800)) for _ in range(n)]
        ranges = [rng.choice([60.0, 100.0, 150.0, 200.0]) for _ in range(n)]
        assert _pairs_dense(positions, ranges) == _pairs_grid(positions, ranges)


def test_update_connectivity_up_down_and_abort():
    a, b = _pair()
    a.position = (0.0, 0.0)
    b.position = (50.0, 0.0)
    connections = {}
    ups, downs = update_connectivity([a, b], connections, now=1.0)
    assert len(ups) == 1 and not downs
    conn = ups[0]
    assert conn.key == ("a", "b")
    assert conn.up_since == 1.0

    transfer = begin_transfer(conn, _msg(), a, now=1.0)
    assert transfer is not None
    b.position = (500.0, 0.0)
    ups, downs = update_connectivity([a, b], connections, now=2.0)
    assert not ups and len(downs) == 1
    assert downs[0].transfer is transfer  # caller aborts it
    assert not connections
    assert not b.buffer.has("M1")  # partial bytes never surface


def test_begin_transfer_busy_rules():
    a, b = _pair()
    conn = Connection(a, b, 0.0)
    t1 = begin_transfer(conn, _msg(mid="M1"), a, 0.0)
    assert t1 is not None
    assert begin_transfer(conn, _msg(mid="M2"), a, 0.0) is None  # connection busy
    conn2 = Connection(a, stub_node("c"), 0.0)
    assert begin_transfer(conn2, _msg(mid="M3"), a, 0.0) is None  # sender busy elsewhere
    conn.transfer = None
    a.outgoing = None
    t2 = begin_transfer(conn2, _msg(mid="M3"), a, 0.0)
    assert t2 is not None


def test_link_speed_is_min_of_endpoints():
    a, b = _pair(speed_a=125_000, speed_b=250_000)
    conn = Connection(a, b, 0.0)
    t = begin_transfer(conn, _msg(), a, 0.0)
    assert t.speed == 125_000


def test_progress_adds_speed_dt_per_tick():
    a, b = _pair(speed_a=125_000, speed_b=125_000)
    conn = Connection(a, b, 0.0)
    connections = {conn.key: conn}
    begin_transfer(conn, _msg(size=2_400_000), a, 0.0)
    progress_transfers(connections, 0.1)
    assert conn.transfer.bytes_done == pytest.approx(12_500, abs=1e-6)


def _ticks_to_complete(size, speed, dt):
    a, b = _pair(speed_a=speed, speed_b=speed)
    conn = Connection(a, b, 0.0)
    connections = {conn.key: conn}
    begin_transfer(conn, _msg(size=size), a, 0.0)
    for tick in range(1, 500_000):
        if progress_transfers(connections, dt):
            return tick
    raise AssertionError("transfer never completed")


def test_completion_examples():
    # 250 kB at 250 kB/s -> 1.0 s of progress
    assert _ticks_to_complete(250_000, 250_000, 0.1) == 10
    # 2.4 MB at 125 kB/s -> 19.2 s
    assert _ticks_to_complete(2_400_000, 125_000, 0.1) == 192


def test_completion_tick_matches_closed_form():
    rng = Random(17)
    for _ in range(100):
        size = rng.randint(1_000, 3_000_000)
        speed = rng.choice([125_000, 250_000, rng.randint(10_000, 500_000)])
        dt = rng.choice([0.1, 0.5, 1.0])
        expected = math.ceil(size / speed / dt - 1e-9)
        assert _ticks_to_complete(size, speed, dt) == expected


def test_already_complete_transfer_finishes_once():
    a, b = _pair()
    conn = Connection(a, b, 0.0)
    connections = {conn.key: conn}
    t = begin_transfer(conn, _msg(size=1000), a, 0.0)
    t.bytes_done = 1000.0
    done = progress_transfers(connections, 0.1)
    assert done == [conn]
    assert t.bytes_done == 1000.0  # no extra bytes added
    conn.transfer = None
    assert progress_transfers(connections, 0.1) == []


def test_per_tick_bytes_never_exceed_speed_dt():
    a, b = _pair(speed_a=100_000, speed_b=100_000)
    conn = Connection(a, b, 0.0)
    connections = {conn.key: conn}
    begin_transfer(conn, _msg(size=55_000), a, 0.0)
    prev = 0.0
    while conn.transfer is not None:
        done = progress_transfers(connections, 0.1)
        gained = conn.transfer.bytes_done - prev
        assert gained <= 100_000 * 0.1 + 1e-6
        prev = conn.transfer.bytes_done
        if done:
            break
    assert prev == 55_000


def test_interface_validation():
    from driftnet.errors import ConfigurationError
    with pytest.raises(ConfigurationError):
        InterfaceSpec(0, 100.0).validate()
    with pytest.raises(ConfigurationError):
        InterfaceSpec(1000, -5.0).validate()
