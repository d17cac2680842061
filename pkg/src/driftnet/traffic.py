"""Warning-message generation on a randomized schedule.

Mirrors the message-event-generator idiom: one generator per traffic spec,
drawing a creation interval, a size, and endpoint choices from the traffic
random stream. The first message appears one interval after the window
opens.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .errors import ConfigurationError
from .routing import Message


@dataclass
class TrafficSpec:
    id_prefix: str = "M"
    interval_range: tuple[float, float] = (25.0, 35.0)
    size_range: tuple[int, int] = (2_200_000, 2_400_000)
    sources: tuple[str, ...] = ()
    destinations: tuple[str, ...] = ()
    window: tuple[float, float] = (0.0, float("inf"))

    def validate(self, context: str = "traffic") -> None:
        imin, imax = self.interval_range
        if not (0 < imin <= imax):
            raise ConfigurationError(f"{context}: interval range must satisfy 0 < min <= max")
        smin, smax = self.size_range
        if not (0 < smin <= smax):
            raise ConfigurationError(f"{context}: size range must satisfy 0 < min <= max")
        if not self.sources:
            raise ConfigurationError(f"{context}: empty source set")
        if not self.destinations:
            raise ConfigurationError(f"{context}: empty destination set")
        if set(self.sources) == set(self.destinations) == set(self.sources[:1]):
            raise ConfigurationError(f"{context}: source and destination sets are the same single node")


class TrafficState:
    """Per-spec generator state: message counter and next creation time."""

    def __init__(self, spec: TrafficSpec, ttl_by_node: dict[str, float]):
        self.spec = spec
        self.counter = 0
        self.next_at: float | None = None
        self._ttl_by_node = ttl_by_node

    def generate(self, now: float, rng: Random) -> list[Message]:
        """Messages created at this tick boundary (zero or one)."""
        spec = self.spec
        start, end = spec.window
        if self.next_at is None:
            self.next_at = start + rng.uniform(*spec.interval_range)
        if now > end or now < self.next_at:
            return []
        # draw order is pinned: source, destination, size, next interval
        source = rng.choice(spec.sources)
        destination = rng.choice(spec.destinations)
        while destination == source:  # validate() guarantees a distinct pair exists
            source = rng.choice(spec.sources)
            destination = rng.choice(spec.destinations)
        size = rng.randint(*spec.size_range)
        self.next_at = now + rng.uniform(*spec.interval_range)
        self.counter += 1
        ttl = self._ttl_by_node.get(source, float("inf"))
        msg = Message(f"{spec.id_prefix}{self.counter}", source, destination, size,
                      created_at=now, ttl=ttl, hops=[source], copies=1)
        return [msg]
