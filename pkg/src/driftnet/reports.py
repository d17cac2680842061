"""Per-event statistics and the four report files.

The collector counts message events as the engine emits them and samples
buffer occupancy on a fixed cadence. ``write_reports`` freezes everything
into four plain-text files whose format is the contract consumed by
external tooling: a ``# driftnet <report-name> scenario=... seed=...``
header, ``key: value`` stats lines, and space-separated record rows behind
a ``# columns:`` header. All numbers carry exactly four decimals.
"""

from __future__ import annotations

import math
import os
import statistics
from dataclasses import dataclass, field

NAN = float("nan")

MESSAGE_STATS = "message-stats"
DELIVERED_MESSAGES = "delivered-messages"
MESSAGE_DELAY = "message-delay"
BUFFER_OCCUPANCY = "buffer-occupancy"

ALL_REPORTS = (MESSAGE_STATS, DELIVERED_MESSAGES, MESSAGE_DELAY, BUFFER_OCCUPANCY)

REPORT_FILENAMES = {
    MESSAGE_STATS: "message_stats.txt",
    DELIVERED_MESSAGES: "delivered_messages.txt",
    MESSAGE_DELAY: "message_delay.txt",
    BUFFER_OCCUPANCY: "buffer_occupancy.txt",
}

# ONE-style class names accepted in settings files
REPORT_SETTING_NAMES = {
    "MessageStatsReport": MESSAGE_STATS,
    "DeliveredMessagesReport": DELIVERED_MESSAGES,
    "MessageDelayReport": MESSAGE_DELAY,
    "BufferOccupancyReport": BUFFER_OCCUPANCY,
}


@dataclass
class MessageStats:
    created: int = 0
    started: int = 0
    relayed: int = 0
    aborted: int = 0
    dropped: int = 0
    expired: int = 0
    delivered: int = 0
    delivery_prob: float = 0.0
    overhead_ratio: float = NAN
    latency_avg: float = NAN
    latency_med: float = NAN
    hopcount_avg: float = NAN
    hopcount_med: float = NAN


@dataclass
class DeliveredRecord:
    time: float
    message_id: str
    size: int
    hopcount: int
    latency: float
    source: str
    destination: str
    remaining_ttl: float


@dataclass
class DelayRecord:
    delay: float
    cumulative_delivery_prob: float


@dataclass
class BufferSample:
    time: float
    mean_occupancy_pct: float
    variance_pct2: float


@dataclass
class ReportBundle:
    scenario_name: str
    seed: int
    message_stats: MessageStats
    delivered: list[DeliveredRecord] = field(default_factory=list)
    delays: list[DelayRecord] = field(default_factory=list)
    buffer_samples: list[BufferSample] = field(default_factory=list)


EVENT_KINDS = ("created", "started", "relayed", "aborted", "dropped", "expired", "delivered")


class ReportCollector:
    """Accumulates events during a run; finalize() yields the ReportBundle."""

    def __init__(self, sample_interval: float = 10.0):
        self.sample_interval = sample_interval
        self.counts = {kind: 0 for kind in EVENT_KINDS}
        self.delivered_records: list[DeliveredRecord] = []
        self.buffer_samples: list[BufferSample] = []
        self._next_sample = sample_interval

    def record_event(self, kind: str, payload: DeliveredRecord | None = None) -> None:
        if kind not in self.counts:
            raise ValueError(f"unknown event kind {kind!r}")
        self.counts[kind] += 1
        if kind == "delivered":
            # a delivery is also a completed relay
            self.counts["relayed"] += 1
            if payload is not None:
                self.delivered_records.append(payload)

    def sampling_due(self, now: float) -> bool:
        return now >= self._next_sample - 1e-9

    def sample_buffers(self, nodes: list, now: float) -> BufferSample:
        """One occupancy sample (mean percent and population variance) over nodes."""
        pcts = [node.buffer.used / node.buffer.capacity * 100.0 for node in nodes]
        if pcts:
            mean = sum(pcts) / len(pcts)
            variance = sum((p - mean) ** 2 for p in pcts) / len(pcts)
        else:
            mean, variance = 0.0, 0.0
        sample = BufferSample(now, mean, variance)
        self.buffer_samples.append(sample)
        while self.sampling_due(now):
            self._next_sample += self.sample_interval
        return sample

    def finalize(self, scenario_name: str, seed: int) -> ReportBundle:
        c = self.counts
        stats = MessageStats(created=c["created"], started=c["started"], relayed=c["relayed"],
                             aborted=c["aborted"], dropped=c["dropped"], expired=c["expired"],
                             delivered=c["delivered"])
        stats.delivery_prob = stats.delivered / stats.created if stats.created else 0.0
        if stats.delivered:
            latencies = [r.latency for r in self.delivered_records]
            hops = [r.hopcount for r in self.delivered_records]
            stats.overhead_ratio = (stats.relayed - stats.delivered) / stats.delivered
            stats.latency_avg = statistics.fmean(latencies)
            stats.latency_med = statistics.median(latencies)
            stats.hopcount_avg = statistics.fmean(hops)
            stats.hopcount_med = statistics.median(hops)
        delays = []
        if stats.created:
            for i, delay in enumerate(sorted(r.latency for r in self.delivered_records)):
                delays.append(DelayRecord(delay, (i + 1) / stats.created))
        return ReportBundle(scenario_name, seed, stats,
                            delivered=list(self.delivered_records),
                            delays=delays,
                            buffer_samples=list(self.buffer_samples))


def _fmt(value) -> str:
    number = float(value)
    return "NaN" if math.isnan(number) else f"{number:.4f}"


def _header(name: str, bundle: ReportBundle) -> str:
    return f"# driftnet {name} scenario={bundle.scenario_name} seed={bundle.seed}\n"


def render_report(name: str, bundle: ReportBundle) -> str:
    """The full text of one report file."""
    out = [_header(name, bundle)]
    if name == MESSAGE_STATS:
        s = bundle.message_stats
        for key in ("created", "started", "relayed", "aborted", "dropped", "expired",
                    "delivered", "delivery_prob", "overhead_ratio", "latency_avg",
                    "latency_med", "hopcount_avg", "hopcount_med"):
            out.append(f"{key}: {_fmt(getattr(s, key))}\n")
    elif name == DELIVERED_MESSAGES:
        out.append("# columns: time message_id size hopcount latency source destination remaining_ttl\n")
        for r in bundle.delivered:
            out.append(f"{_fmt(r.time)} {r.message_id} {_fmt(r.size)} {_fmt(r.hopcount)} "
                       f"{_fmt(r.latency)} {r.source} {r.destination} {_fmt(r.remaining_ttl)}\n")
    elif name == MESSAGE_DELAY:
        out.append("# columns: delay cumulative_delivery_prob\n")
        for r in bundle.delays:
            out.append(f"{_fmt(r.delay)} {_fmt(r.cumulative_delivery_prob)}\n")
    elif name == BUFFER_OCCUPANCY:
        out.append("# columns: time mean_occupancy_pct variance_pct2\n")
        for r in bundle.buffer_samples:
            out.append(f"{_fmt(r.time)} {_fmt(r.mean_occupancy_pct)} {_fmt(r.variance_pct2)}\n")
    else:
        raise ValueError(f"unknown report {name!r}")
    return "".join(out)


def write_reports(bundle: ReportBundle, out_dir: str, reports=ALL_REPORTS) -> list[str]:
    """Write the selected report files into out_dir; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name in reports:
        path = os.path.join(out_dir, REPORT_FILENAMES[name])
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_report(name, bundle))
        paths.append(path)
    return paths
