"""Finite label-deterministic digraphs.

Every graph here carries labels 0..L-1 and satisfies: at most one outgoing
and at most one incoming edge per (vertex, label).  Each label therefore
acts as a partial injection on vertices, which turns rooted ball
isomorphism into a deterministic label walk instead of a search.
Constructors reject graphs violating determinism.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterator, Optional, TYPE_CHECKING

from .errors import ParseError

if TYPE_CHECKING:  # pragma: no cover
    from .groups import CayleyBall


class LabeledDigraph:
    """Finite digraph with deterministic per-label edges."""

    __slots__ = ("vertex_count", "num_labels", "_out", "_in", "_edge_count")

    def __init__(self, vertex_count: int, num_labels: int, edges):
        if vertex_count < 0 or num_labels < 0:
            raise ValueError("vertex and label counts must be nonnegative")
        self.vertex_count = vertex_count
        self.num_labels = num_labels
        self._out = [[-1] * num_labels for _ in range(vertex_count)]
        self._in = [[-1] * num_labels for _ in range(vertex_count)]
        count = 0
        for src, dst, label in edges:
            if not (0 <= src < vertex_count and 0 <= dst < vertex_count):
                raise ValueError(f"edge ({src},{dst},{label}) has an out-of-range vertex")
            if not (0 <= label < num_labels):
                raise ValueError(f"edge ({src},{dst},{label}) has an out-of-range label")
            if self._out[src][label] != -1:
                if self._out[src][label] == dst:
                    continue  # duplicate edge line, idempotent
                raise ValueError(f"vertex {src} has two outgoing edges labeled {label}")
            if self._in[dst][label] != -1:
                raise ValueError(f"vertex {dst} has two incoming edges labeled {label}")
            self._out[src][label] = dst
            self._in[dst][label] = src
            count += 1
        self._edge_count = count

    def out_edge(self, v: int, label: int) -> Optional[int]:
        t = self._out[v][label]
        return None if t == -1 else t

    def in_edge(self, v: int, label: int) -> Optional[int]:
        s = self._in[v][label]
        return None if s == -1 else s

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """All edges in ascending (src, label) order."""
        for v in range(self.vertex_count):
            row = self._out[v]
            for label in range(self.num_labels):
                if row[label] != -1:
                    yield (v, row[label], label)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledDigraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.num_labels == other.num_labels
            and self._out == other._out
        )

    def __repr__(self) -> str:
        return f"LabeledDigraph(|V|={self.vertex_count}, |B|={self.num_labels}, edges={self._edge_count})"


def _check_vertex(graph: LabeledDigraph, v: int) -> None:
    if not (0 <= v < graph.vertex_count):
        raise ValueError(f"vertex {v} out of range [0, {graph.vertex_count})")


def distance(graph: LabeledDigraph, v: int, w: int):
    """Directed distance: edges on a shortest directed path, or math.inf."""
    _check_vertex(graph, v)
    _check_vertex(graph, w)
    if v == w:
        return 0
    seen = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        du = seen[u]
        for label in range(graph.num_labels):
            t = graph._out[u][label]
            if t != -1 and t not in seen:
                if t == w:
                    return du + 1
                seen[t] = du + 1
                queue.append(t)
    return math.inf


def neighborhood(graph: LabeledDigraph, v: int, n: int) -> tuple[int, ...]:
    """Vertices at directed distance <= n from v, sorted ascending."""
    _check_vertex(graph, v)
    if n < 0:
        raise ValueError("neighborhood radius must be nonnegative")
    seen = {v}
    frontier = [v]
    for _ in range(n):
        nxt = []
        for u in frontier:
            for label in range(graph.num_labels):
                t = graph._out[u][label]
                if t != -1 and t not in seen:
                    seen.add(t)
                    nxt.append(t)
        if not nxt:
            break
        frontier = nxt
    return tuple(sorted(seen))


def ball_isomorphism(graph: LabeledDigraph, v: int, ball: "CayleyBall") -> Optional[tuple[int, ...]]:
    """Rooted labeled-digraph isomorphism from a Cayley ball into the graph.

    Returns the unique map f (as a tuple indexed by ball element position,
    f[0] = v) such that f respects every labeled edge of the ball, is
    injective, is onto the n-th out-neighborhood of v, and introduces no
    extra edges among image vertices.  Returns None when no such map
    exists.  Determinism of labels makes the candidate map unique, so the
    result is reproducible.
    """
    _check_vertex(graph, v)
    bgraph = ball.graph
    if bgraph.num_labels != graph.num_labels:
        raise ValueError(
            f"label alphabet mismatch: ball has {bgraph.num_labels} labels, graph has {graph.num_labels}"
        )
    m = bgraph.vertex_count
    labels = range(graph.num_labels)

    f = [-1] * m
    f[0] = v
    image = {v}
    # Ball elements are BFS-ordered from the root, so each element's image
    # is fixed before its own out-edges are walked.
    for i in range(m):
        src = f[i]
        if src == -1:
            return None
        for label in labels:
            j = bgraph._out[i][label]
            if j == -1:
                continue
            w = graph._out[src][label]
            if w == -1:
                return None
            if f[j] != -1:
                if f[j] != w:
                    return None
            else:
                if w in image:
                    return None  # not injective
                f[j] = w
                image.add(w)

    # Onto the directed ball at v: the image is always a subset, so size
    # equality suffices.
    if len(neighborhood(graph, v, ball.radius)) != m:
        return None

    # No extra edges among image vertices (the inverse map must also send
    # edges to edges).
    for i in range(m):
        src = f[i]
        for label in labels:
            if bgraph._out[i][label] == -1:
                w = graph._out[src][label]
                if w != -1 and w in image:
                    return None
    return tuple(f)


def write_graph_file(path, graph: LabeledDigraph) -> None:
    """Write the text format: header `digraph |V| |B|`, one `src dst label` line per edge."""
    lines = [f"digraph {graph.vertex_count} {graph.num_labels}"]
    lines.extend(f"{s} {d} {l}" for s, d, l in graph.edges())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph_file(path) -> LabeledDigraph:
    """Parse the graph text format; full-line # comments and blank lines are skipped."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "digraph":
        raise ParseError(f"{path}: expected header 'digraph |V| |B|', got {lines[0]!r}")
    try:
        n, num_labels = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError(f"{path}: non-integer counts in header {lines[0]!r}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"{path}: expected 'src dst label', got {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), int(parts[2])))
        except ValueError:
            raise ParseError(f"{path}: non-integer edge fields in {ln!r}")
    try:
        return LabeledDigraph(n, num_labels, edges)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}")
