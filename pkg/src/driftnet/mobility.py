"""Node movement: stationary infrastructure and shortest-path map movement.

Vehicles alternate between waiting at a vertex and traversing the shortest
path to a uniformly drawn destination vertex at a uniformly drawn speed.
All randomness comes from the movement stream passed in by the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from .errors import ConfigurationError
from .mapmodel import Coordinate, MapGraph, MapPath, shortest_path, nearest_vertex

STATIONARY = "stationary"
MAP_SHORTEST_PATH = "map-shortest-path"

_REDRAW_ATTEMPTS = 10


@dataclass
class MovementSpec:
    kind: str = MAP_SHORTEST_PATH
    fixed_position: Coordinate | None = None
    speed_range: tuple[float, float] = (2.7, 13.9)
    wait_range: tuple[float, float] = (0.0, 120.0)

    def validate(self, context: str = "movement") -> None:
        if self.kind not in (STATIONARY, MAP_SHORTEST_PATH):
            raise ConfigurationError(f"{context}: unknown movement kind {self.kind!r}")
        if self.kind == STATIONARY and self.fixed_position is None:
            raise ConfigurationError(f"{context}: stationary movement requires a fixed position")
        smin, smax = self.speed_range
        if not (0 < smin <= smax):
            raise ConfigurationError(f"{context}: speed range must satisfy 0 < min <= max, got {self.speed_range}")
        wmin, wmax = self.wait_range
        if not (0 <= wmin <= wmax):
            raise ConfigurationError(f"{context}: wait range must satisfy 0 <= min <= max, got {self.wait_range}")


WAITING = "waiting"
TRAVERSING = "traversing"


@dataclass
class MovementState:
    mode: str = WAITING
    vertex: int = 0                      # vertex currently occupied / last reached
    wait_until: float = 0.0
    path: MapPath | None = None
    cum_lengths: list[float] = field(default_factory=list)
    offset: float = 0.0
    speed: float = 0.0
    segment: int = 0                     # index of the path edge containing offset


def init_position(spec: MovementSpec, graph: MapGraph | None, rng: Random,
                  now: float = 0.0) -> tuple[Coordinate, MovementState]:
    """Starting position and state for one node.

    Stationary nodes snap their configured position to the nearest map
    vertex (or keep it verbatim when no map is loaded); vehicles start at a
    uniformly random vertex and wait before their first trip.
    """
    spec.validate()
    if spec.kind == STATIONARY:
        pos = spec.fixed_position
        if graph is not None and graph.n_vertices > 0:
            pos = graph.coords[nearest_vertex(graph, pos)]
        return pos, MovementState(mode=WAITING, wait_until=float("inf"))
    if graph is None or graph.n_vertices == 0:
        raise ConfigurationError("map-shortest-path movement requires a nonempty map")
    vertex = rng.randrange(graph.n_vertices)
    wait = rng.uniform(*spec.wait_range)
    return graph.coords[vertex], MovementState(mode=WAITING, vertex=vertex, wait_until=now + wait)


def _interpolate(graph: MapGraph, state: MovementState) -> Coordinate:
    # offset only grows along a path, so the containing segment is found by
    # walking forward from the cached one
    path, cum, offset = state.path, state.cum_lengths, state.offset
    seg = state.segment
    last = len(path.vertices) - 2
    while seg < last and offset > cum[seg + 1]:
        seg += 1
    state.segment = seg
    a = graph.coords[path.vertices[seg]]
    b = graph.coords[path.vertices[seg + 1]]
    seg_len = cum[seg + 1] - cum[seg]
    if seg_len <= 0.0:
        return a
    t = (offset - cum[seg]) / seg_len
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def advance(state: MovementState, spec: MovementSpec, graph: MapGraph, rng: Random,
            now: float, dt: float) -> Coordinate:
    """Advance one vehicle by one tick and return its new position.

    Waiting nodes whose wait has elapsed pick a destination (redrawing up to
    10 times if unreachable, then waiting one more tick), a path, and a
    speed; movement starts on the following tick. Traversing nodes move
    speed*dt along the path; overshoot past the end is discarded and the
    node stops there this tick.
    """
    if state.mode == WAITING:
        if now < state.wait_until:
            return graph.coords[state.vertex]
        path = None
        for _ in range(_REDRAW_ATTEMPTS):
            dest = rng.randrange(graph.n_vertices)
            path = shortest_path(graph, state.vertex, dest)
            if path is not None:
                break
        if path is None:
            state.wait_until = now + dt
            return graph.coords[state.vertex]
        state.path = path
        cum = [0.0]
        for i in range(len(path.vertices) - 1):
            a, b = path.vertices[i], path.vertices[i + 1]
            cum.append(cum[-1] + graph.adjacency[a][b])
        state.cum_lengths = cum
        state.offset = 0.0
        state.segment = 0
        state.speed = rng.uniform(*spec.speed_range)
        state.mode = TRAVERSING
        return graph.coords[state.vertex]

    state.offset += state.speed * dt
    if state.offset >= state.path.total_length:
        state.vertex = state.path.vertices[-1]
        state.offset = state.path.total_length
        state.mode = WAITING
        state.wait_until = now + rng.uniform(*spec.wait_range)
        state.path = None
        state.cum_lengths = []
        state.segment = 0
        return graph.coords[state.vertex]
    return _interpolate(graph, state)
