"""Construction and exact verification of sofic approximations.

A sofic approximation of a group G (with symmetric generators B) at radius
r and tolerance epsilon is a finite B-labeled digraph together with a good
vertex set V0 such that |V0| >= (1 - epsilon) * |V| holds exactly and the
r-neighborhood of every good vertex is isomorphic, as a rooted labeled
digraph, to the radius-r Cayley ball of G.

Builders are provided for the two supported group families: discrete tori
(Z/nZ)^k approximating Z^k, and full Cayley graphs of finite groups, which
approximate themselves perfectly.  Everything a builder produces is
re-checked from scratch by the verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .digraph import LabeledDigraph, ball_isomorphism
from .errors import AlphabetMismatch, BallMismatch, CardinalityViolation, ResourceLimitError
from .groups import CayleyBall, FiniteByTable, FreeAbelian, GroupModel, cayley_ball
from .limits import DEFAULT_MAX_BALL_ELEMENTS, DEFAULT_MAX_VERTICES


@dataclass(eq=False)
class SoficApproximation:
    """A verified approximation: graph, good vertices, tolerance, radius.

    iso_maps caches, for each good vertex v, the rooted isomorphism from
    the radius-r Cayley ball into the graph as a tuple indexed by ball
    element position (entry 0 is v itself).
    """

    group: GroupModel
    graph: LabeledDigraph
    good_vertices: tuple[int, ...]
    epsilon: Fraction
    radius: int
    ball: CayleyBall
    iso_maps: dict[int, tuple[int, ...]]

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def __repr__(self):
        return (
            f"SoficApproximation({self.group.describe()}, |V|={self.vertex_count}, "
            f"|V0|={len(self.good_vertices)}, r={self.radius}, eps={self.epsilon})"
        )


def verify_approximation(
    graph: LabeledDigraph,
    good_vertices,
    epsilon: Fraction,
    radius: int,
    group: GroupModel,
    max_ball_elements: int = DEFAULT_MAX_BALL_ELEMENTS,
) -> SoficApproximation:
    """Check both sofic conditions exactly and return the verified structure.

    Raises AlphabetMismatch when the graph's label count differs from the
    group's generator count, CardinalityViolation when the good set is too
    small for epsilon, and BallMismatch at the lowest failing vertex when
    some good vertex's neighborhood is not isomorphic to the Cayley ball.
    """
    epsilon = Fraction(epsilon)
    if not (0 < epsilon < 1):
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if graph.num_labels != len(group.generators):
        raise AlphabetMismatch(
            f"graph has {graph.num_labels} labels but {group.describe()} has "
            f"{len(group.generators)} generators"
        )
    good = tuple(sorted(set(int(v) for v in good_vertices)))
    for v in good:
        if not (0 <= v < graph.vertex_count):
            raise ValueError(f"good vertex {v} out of range")
    n = graph.vertex_count
    if Fraction(len(good)) < (1 - epsilon) * n:
        raise CardinalityViolation(
            f"|V0| = {len(good)} < (1 - {epsilon}) * {n} = {(1 - epsilon) * n}"
        )
    ball = cayley_ball(group, radius, max_elements=max_ball_elements)
    iso_maps: dict[int, tuple[int, ...]] = {}
    for v in good:  # ascending order gives deterministic error reporting
        f = ball_isomorphism(graph, v, ball)
        if f is None:
            raise BallMismatch(v)
        iso_maps[v] = f
    return SoficApproximation(
        group=group,
        graph=graph,
        good_vertices=good,
        epsilon=epsilon,
        radius=radius,
        ball=ball,
        iso_maps=iso_maps,
    )


def torus_graph(group: FreeAbelian, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> LabeledDigraph:
    """Cayley graph of (Z/nZ)^k labeled by the generators of the given Z^k model.

    Vertex encoding: coordinates (x_0, ..., x_{k-1}) with x_i in [0, n) map
    to sum x_i * n^i.
    """
    if n < 1:
        raise ValueError("torus side length must be at least 1")
    k = group.rank
    total = n**k
    if total > max_vertices:
        raise ResourceLimitError(f"torus with {total} vertices exceeds limit {max_vertices}")
    edges = []
    for v in range(total):
        coords = []
        x = v
        for _ in range(k):
            coords.append(x % n)
            x //= n
        for label, gen in enumerate(group.generators):
            w = 0
            mult = 1
            for i in range(k):
                w += ((coords[i] + gen[i]) % n) * mult
                mult *= n
            edges.append((v, w, label))
    return LabeledDigraph(total, len(group.generators), edges)


def torus_vertex(coords, n: int) -> int:
    """Encode torus coordinates to a vertex index (little-endian base n)."""
    w = 0
    mult = 1
    for c in coords:
        w += (c % n) * mult
        mult *= n
    return w


def torus_approximation(
    k: int,
    n: int,
    r: int,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_ball_elements: int = DEFAULT_MAX_BALL_ELEMENTS,
) -> SoficApproximation:
    """Verified approximation of Z^k by the discrete torus (Z/nZ)^k.

    Requires n >= 2r + 2: at n = 2r + 1 the ball's vertex set still embeds
    but a wrap-around edge appears between the two extreme layers, which
    breaks two-way edge correspondence.
    """
    if n < 2 * r + 2:
        raise ValueError(f"torus side {n} too small for radius {r}: need n >= 2r + 2 = {2 * r + 2}")
    group = FreeAbelian(k)
    graph = torus_graph(group, n, max_vertices=max_vertices)
    epsilon = Fraction(1, graph.vertex_count + 1)
    return verify_approximation(
        graph,
        range(graph.vertex_count),
        epsilon,
        r,
        group,
        max_ball_elements=max_ball_elements,
    )


def finite_cayley_graph(group: FiniteByTable) -> LabeledDigraph:
    """Full Cayley graph of a finite group on all of its elements."""
    n = group.size
    edges = []
    for a in range(n):
        for label, b in enumerate(group.generators):
            edges.append((a, group.multiply(a, b), label))
    return LabeledDigraph(n, len(group.generators), edges)


def finite_group_approximation(
    group: FiniteByTable,
    r: int,
    max_ball_elements: int = DEFAULT_MAX_BALL_ELEMENTS,
) -> SoficApproximation:
    """A finite group approximates itself: its full Cayley graph verifies at any radius."""
    graph = finite_cayley_graph(group)
    epsilon = Fraction(1, graph.vertex_count + 1)
    return verify_approximation(
        graph,
        range(graph.vertex_count),
        epsilon,
        r,
        group,
        max_ball_elements=max_ball_elements,
    )
