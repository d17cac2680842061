"""Range detection, connection lifecycle, and byte-level transfers.

Two nodes are connected exactly while their distance is at most the
smaller of the two radio ranges (unit-disk, min rule). Each connection
carries at most one in-flight transfer, and a node never has more than one
outgoing transfer across all of its connections; incoming transfers are
not limited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .routing import Message

# above this node count the uniform-grid candidate index replaces the
# all-pairs distance matrix; results are identical either way
GRID_THRESHOLD = 300

_COMPLETION_SLACK = 1e-6  # bytes; absorbs float dust in speed*dt sums


@dataclass
class InterfaceSpec:
    transmit_speed: float  # bytes/second
    range: float           # meters

    def validate(self, context: str = "interface") -> None:
        if self.transmit_speed <= 0:
            raise ConfigurationError(f"{context}: transmitSpeed must be > 0")
        if self.range <= 0:
            raise ConfigurationError(f"{context}: transmitRange must be > 0")


@dataclass
class Transfer:
    message: Message       # snapshot taken when the transfer began
    source_message: Message  # the sender's live buffer entry at begin time
    sender: str
    receiver: str
    total: int
    started_at: float
    speed: float
    bytes_done: float = 0.0

    @property
    def done(self) -> bool:
        return self.bytes_done >= self.total - _COMPLETION_SLACK


class Connection:
    """A live link between two in-range nodes (lower id first)."""

    def __init__(self, a, b, now: float):
        if a.id > b.id:
            a, b = b, a
        self.a = a
        self.b = b
        self.up_since = now
        self.transfer: Transfer | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.a.id, self.b.id)

    def other(self, node):
        return self.b if node is self.a else self.a


def connected_index_pairs(positions: list[tuple[float, float]], ranges: list[float]) -> list[tuple[int, int]]:
    """Indices (i, j), i < j, of all node pairs within mutual range."""
    n = len(positions)
    if n < 2:
        return []
    if n <= GRID_THRESHOLD:
        return _pairs_dense(positions, ranges)
    return _pairs_grid(positions, ranges)


_triu_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pairs_dense(positions, ranges):
    n = len(positions)
    iu = _triu_cache.get(n)
    if iu is None:
        iu = np.triu_indices(n, k=1)
        _triu_cache[n] = iu
    left, right = iu
    xs = np.fromiter((p[0] for p in positions), np.float64, n)
    ys = np.fromiter((p[1] for p in positions), np.float64, n)
    rs = np.fromiter(ranges, np.float64, n)
    dx = xs[left] - xs[right]
    dy = ys[left] - ys[right]
    d2 = dx * dx + dy * dy
    r = np.minimum(rs[left], rs[right])
    hits = np.nonzero(d2 <= r * r)[0]
    return [(int(left[h]), int(right[h])) for h in hits]


def _pairs_grid(positions, ranges):
    cell = max(ranges)
    buckets: dict[tuple[int, int], list[int]] = {}
    cells = []
    for i, (x, y) in enumerate(positions):
        c = (math.floor(x / cell), math.floor(y / cell))
        cells.append(c)
        buckets.setdefault(c, []).append(i)
    pairs = []
    for i, (x, y) in enumerate(positions):
        cx, cy = cells[i]
        ri = ranges[i]
        for nx in (cx - 1, cx, cx + 1):
            for ny in (cy - 1, cy, cy + 1):
                for j in buckets.get((nx, ny), ()):
                    if j <= i:
                        continue
                    ddx = x - positions[j][0]
                    ddy = y - positions[j][1]
                    d2 = ddx * ddx + ddy * ddy
                    r = min(ri, ranges[j])
                    if d2 <= r * r:
                        pairs.append((i, j))
    pairs.sort()
    return pairs


def update_connectivity(nodes: list, connections: dict, now: float):
    """Reconcile the connection set against current positions.

    Mutates ``connections`` (keyed by id pair) in place and returns
    (up_events, down_events); down events still carry any transfer that was
    in flight so the caller can abort it.
    """
    positions = [node.position for node in nodes]
    ranges = [node.interface.range for node in nodes]
    live = set()
    ups = []
    for i, j in connected_index_pairs(positions, ranges):
        a, b = nodes[i], nodes[j]
        key = (a.id, b.id) if a.id < b.id else (b.id, a.id)
        live.add(key)
        if key not in connections:
            conn = Connection(a, b, now)
            connections[key] = conn
            ups.append(conn)
    downs = [connections.pop(key) for key in list(connections) if key not in live]
    return ups, downs


def begin_transfer(conn: Connection, message: Message, sender, now: float) -> Transfer | None:
    """Start sending message over conn; None when the link or sender is busy."""
    if conn.transfer is not None or sender.outgoing is not None:
        return None
    receiver = conn.other(sender)
    speed = min(sender.interface.transmit_speed, receiver.interface.transmit_speed)
    snapshot = Message(message.id, message.source, message.destination, message.size,
                       message.created_at, message.ttl, list(message.hops), message.copies)
    transfer = Transfer(snapshot, message, sender.id, receiver.id, message.size, now, speed)
    conn.transfer = transfer
    sender.outgoing = transfer
    return transfer


def progress_transfers(connections: dict, dt: float) -> list[Connection]:
    """Advance every in-flight transfer by speed*dt bytes.

    Returns the connections whose transfer finished this tick; a transfer
    already complete at entry finishes without gaining bytes.
    """
    completed = []
    for key in sorted(connections):
        conn = connections[key]
        transfer = conn.transfer
        if transfer is None:
            continue
        if not transfer.done:
            transfer.bytes_done = min(float(transfer.total), transfer.bytes_done + transfer.speed * dt)
        if transfer.done:
            transfer.bytes_done = float(transfer.total)
            completed.append(conn)
    return completed
