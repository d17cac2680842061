"""Road-map graphs: WKT parsing, shortest paths, and vertex queries.

Coordinates are planar meters (already projected); the graph is undirected
and immutable once built. Vertices parsed to exactly equal coordinates are
merged, so geometry written with shared endpoints becomes one connected
component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush

from .errors import InternalError, MapParseError, WorldError

Coordinate = tuple[float, float]


@dataclass(frozen=True)
class MapPath:
    """A walk along graph edges with its total length in meters."""

    vertices: tuple[int, ...]
    total_length: float


class MapGraph:
    """Undirected road graph with Euclidean edge lengths."""

    def __init__(self) -> None:
        self.coords: list[Coordinate] = []
        self.adjacency: list[dict[int, float]] = []
        self._vertex_index: dict[Coordinate, int] = {}

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    @property
    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def add_vertex(self, x: float, y: float) -> int:
        """Add a vertex, merging exact coordinate duplicates; returns its index."""
        key = (x, y)
        existing = self._vertex_index.get(key)
        if existing is not None:
            return existing
        idx = len(self.coords)
        self.coords.append(key)
        self.adjacency.append({})
        self._vertex_index[key] = idx
        return idx

    def add_edge(self, a: int, b: int) -> None:
        """Connect two vertices; self-loops and duplicate edges are ignored."""
        if a == b:
            return
        if b in self.adjacency[a]:
            return
        ax, ay = self.coords[a]
        bx, by = self.coords[b]
        length = math.sqrt((ax - bx) ** 2 + (ay - by) ** 2)
        self.adjacency[a][b] = length
        self.adjacency[b][a] = length

    def edges(self) -> list[tuple[int, int, float]]:
        """All edges as (a, b, length) with a < b, sorted."""
        out = []
        for a, nbrs in enumerate(self.adjacency):
            for b, length in nbrs.items():
                if a < b:
                    out.append((a, b, length))
        out.sort()
        return out

    def n_components(self) -> int:
        seen = [False] * self.n_vertices
        count = 0
        for start in range(self.n_vertices):
            if seen[start]:
                continue
            count += 1
            stack = [start]
            seen[start] = True
            while stack:
                u = stack.pop()
                for v in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
        return count


def _parse_coord_seq(body: str, line_no: int) -> list[Coordinate]:
    points = []
    for chunk in body.split(","):
        parts = chunk.split()
        if len(parts) != 2:
            raise MapParseError(line_no, f"expected 'x y' coordinate pair, got {chunk.strip()!r}")
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise MapParseError(line_no, f"non-numeric coordinate in {chunk.strip()!r}") from None
    if len(points) < 2:
        raise MapParseError(line_no, "linestring needs at least 2 points")
    return points


def _split_groups(body: str, line_no: int) -> list[str]:
    """Split the (...) , (...) groups of a MULTILINESTRING body."""
    groups = []
    depth = 0
    start = None
    for i, ch in enumerate(body):
        if ch == "(":
            if depth == 0:
                start = i + 1
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise MapParseError(line_no, "unbalanced parentheses")
            if depth == 0:
                groups.append(body[start:i])
        elif depth == 0 and ch not in ", \t":
            raise MapParseError(line_no, f"unexpected character {ch!r} between linestrings")
    if depth != 0:
        raise MapParseError(line_no, "unbalanced parentheses")
    if not groups:
        raise MapParseError(line_no, "MULTILINESTRING contains no linestrings")
    return groups


def parse_wkt(text: str, snap_epsilon: float = 0.0) -> MapGraph:
    """Build a MapGraph from a WKT subset.

    One geometry per line: ``LINESTRING (x1 y1, x2 y2, ...)`` or
    ``MULTILINESTRING ((...), (...))``. Blank lines and ``#`` comments are
    ignored. Consecutive coordinate pairs become edges; exactly-equal
    coordinates merge into one vertex. A positive snap_epsilon additionally
    quantizes coordinates to that grid before merging (off by default; the
    default parse is exact).
    """
    graph = MapGraph()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        upper = line.upper()
        if upper.startswith("MULTILINESTRING"):
            rest = line[len("MULTILINESTRING"):].strip()
            if not (rest.startswith("(") and rest.endswith(")")):
                raise MapParseError(line_no, "expected parenthesized body after MULTILINESTRING")
            for group in _split_groups(rest[1:-1], line_no):
                _add_linestring(graph, _parse_coord_seq(group, line_no), snap_epsilon)
        elif upper.startswith("LINESTRING"):
            rest = line[len("LINESTRING"):].strip()
            if not (rest.startswith("(") and rest.endswith(")")):
                raise MapParseError(line_no, "expected parenthesized body after LINESTRING")
            _add_linestring(graph, _parse_coord_seq(rest[1:-1], line_no), snap_epsilon)
        else:
            raise MapParseError(line_no, f"unrecognized geometry {line.split('(')[0].strip()!r}")
    return graph


def _add_linestring(graph: MapGraph, points: list[Coordinate], snap_epsilon: float = 0.0) -> None:
    if snap_epsilon > 0.0:
        points = [(round(x / snap_epsilon) * snap_epsilon, round(y / snap_epsilon) * snap_epsilon)
                  for x, y in points]
    prev = graph.add_vertex(*points[0])
    for pt in points[1:]:
        cur = graph.add_vertex(*pt)
        graph.add_edge(prev, cur)
        prev = cur


def to_wkt(graph: MapGraph) -> str:
    """Serialize a graph as one LINESTRING per edge; parse(to_wkt(g)) reproduces g."""
    lines = []
    for a, b, _ in graph.edges():
        ax, ay = graph.coords[a]
        bx, by = graph.coords[b]
        lines.append(f"LINESTRING ({ax!r} {ay!r}, {bx!r} {by!r})")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_wkt_file(path: str, snap_epsilon: float = 0.0) -> MapGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_wkt(fh.read(), snap_epsilon)


def shortest_path(graph: MapGraph, src: int, dst: int) -> MapPath | None:
    """Minimal-length path from src to dst, or None when unreachable.

    Ties between equal-length paths are broken by the lexicographically
    smallest vertex-index sequence, so results are deterministic.
    """
    n = graph.n_vertices
    if not (0 <= src < n) or not (0 <= dst < n):
        raise ValueError(f"vertex index out of range (src={src}, dst={dst}, n={n})")
    if src == dst:
        return MapPath((src,), 0.0)

    # Dijkstra from dst gives remaining-distance labels for every vertex.
    dist = [math.inf] * n
    dist[dst] = 0.0
    heap: list[tuple[float, int]] = [(0.0, dst)]
    while heap:
        d, u = heappop(heap)
        if d > dist[u]:
            continue
        for v, w in graph.adjacency[u].items():
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    if math.isinf(dist[src]):
        return None

    # Greedy descent: always step to the smallest-index neighbor that stays
    # on some shortest path. This yields the lexicographically smallest
    # vertex sequence among all minimal-length paths.
    path = [src]
    total = 0.0
    u = src
    while u != dst:
        best = None
        for v in sorted(graph.adjacency[u]):
            w = graph.adjacency[u][v]
            if math.isclose(dist[u], w + dist[v], rel_tol=1e-9, abs_tol=1e-12):
                best = v
                break
        if best is None:  # float dust; fall back to steepest descent
            best = min(graph.adjacency[u], key=lambda v: (dist[v] + graph.adjacency[u][v], v))
        total += graph.adjacency[u][best]
        path.append(best)
        u = best
        if len(path) > n:
            raise InternalError(f"shortest-path walk failed to terminate ({src}->{dst})")
    return MapPath(tuple(path), total)


def nearest_vertex(graph: MapGraph, point: Coordinate) -> int:
    """Index of the vertex closest to point; ties go to the smallest index."""
    if graph.n_vertices == 0:
        raise WorldError("nearest_vertex on empty map")
    px, py = point
    best_idx = 0
    best_d2 = math.inf
    for idx, (x, y) in enumerate(graph.coords):
        d2 = (x - px) ** 2 + (y - py) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best_idx = idx
    return best_idx


def grid_graph(cols: int, rows: int, spacing: float, origin: Coordinate = (0.0, 0.0)) -> MapGraph:
    """Rectangular street grid: cols x rows vertices, 4-connected."""
    graph = MapGraph()
    ox, oy = origin
    index = {}
    for iy in range(rows):
        for ix in range(cols):
            index[(ix, iy)] = graph.add_vertex(ox + ix * spacing, oy + iy * spacing)
    for iy in range(rows):
        for ix in range(cols):
            if ix + 1 < cols:
                graph.add_edge(index[(ix, iy)], index[(ix + 1, iy)])
            if iy + 1 < rows:
                graph.add_edge(index[(ix, iy)], index[(ix, iy + 1)])
    return graph


# Maps shipped with the package so presets run offline. "palu-grid" stands in
# for the real Palu extract: a ~7.6 x 11.6 km street grid.
BUILTIN_MAPS = {
    "grid10": lambda: grid_graph(10, 10, 100.0),
    "palu-grid": lambda: grid_graph(20, 30, 400.0),
}


def builtin_map(name: str) -> MapGraph:
    try:
        return BUILTIN_MAPS[name]()
    except KeyError:
        raise WorldError(f"unknown builtin map {name!r}; available: {', '.join(sorted(BUILTIN_MAPS))}") from None
