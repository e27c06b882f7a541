"""The finite upper half-plane H_q, its spheres, and the Cayley graph on it.

H_q is the set of z = x + y*sqrt(delta) with y != 0, identified with the
affine matrix [[y, x], [0, 1]]. The sphere of radius r around sqrt(delta)
is cut out by x^2 = r*y + delta*(y-1)^2; using it as a Cayley generating
set gives a (q+1)-regular graph on the q(q-1) points, whose combinatorial
Laplacian is (q+1)*I - A.

Vertex order is fixed to lexicographic (y, x) so that all matrices are
bit-reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .field import ExtElement, ext_norm


@dataclass(frozen=True)
class Point:
    """x + y*sqrt(delta) with y != 0, alias the affine matrix [[y, x], [0, 1]]."""

    x: int
    y: int


def base_point():
    """sqrt(delta) itself, the identity of the affine group."""
    return Point(0, 1)


def enumerate_points(ctx):
    """All q(q-1) points of H_q in the canonical (y, x) order."""
    return [Point(x, y) for y in range(1, ctx.q) for x in range(ctx.q)]


def point_index(ctx, z):
    """Index of z in the canonical (y, x) order."""
    return (z.y - 1) * ctx.q + z.x


def act(ctx, z, s):
    """Right action of the affine group: (x,y).(x_s,y_s) = (y*x_s + x, y*y_s)."""
    return Point((z.y * s.x + z.x) % ctx.q, (z.y * s.y) % ctx.q)


def point_inverse(ctx, s):
    """Inverse of s in the affine group."""
    yinv = ctx.inv(s.y)
    return Point(-s.x * yinv % ctx.q, yinv)


def sphere(ctx, r):
    """All points at pseudo-distance r from sqrt(delta), sorted by (y, x).

    Solutions of x^2 = r*y + delta*(y-1)^2 with y != 0. Size is q+1 except
    at the two degenerate radii 0 and 4*delta, where the sphere is the
    single point sqrt(delta) resp. -sqrt(delta).
    """
    q, d = ctx.q, ctx.delta
    r %= q
    out = []
    for y in range(1, q):
        rhs = (r * y + d * (y - 1) * (y - 1)) % q
        for x in range(q):
            if (x * x) % q == rhs:
                out.append(Point(x, y))
    return out


def distance(ctx, z, w):
    """Pseudo-distance N(z - w) / (I(z) * I(w)) in F_q, with I(z) = y."""
    diff = ExtElement((z.x - w.x) % ctx.q, (z.y - w.y) % ctx.q)
    return ext_norm(ctx, diff) * ctx.inv(z.y * w.y) % ctx.q


def degenerate_radii(ctx):
    """The two radii at which the sphere collapses to a single point."""
    return (0, 4 * ctx.delta % ctx.q)


class UhpGraph:
    """Cayley graph of H_q with generating sphere S_{r_s}; immutable once built."""

    def __init__(self, ctx, r_s, points, adjacency):
        self.ctx = ctx
        self.r_s = r_s
        self.points = points
        self.index = {z: i for i, z in enumerate(points)}
        self.adjacency = adjacency
        self._eig = None

    @property
    def n(self):
        return len(self.points)

    @property
    def degree(self):
        return self.ctx.q + 1

    def adjacency_eigh(self):
        """Cached symmetric eigendecomposition of the adjacency matrix."""
        if self._eig is None:
            w, v = np.linalg.eigh(self.adjacency.astype(float))
            self._eig = (w, v)
        return self._eig


def build_graph(ctx, r_s):
    """Construct the Cayley graph for a regular radius r_s.

    Rejects the degenerate radii. Verifies (rather than assumes) that the
    generating sphere is closed under group inversion, and that the result
    is (q+1)-regular, loop-free, symmetric, and connected.
    """
    q = ctx.q
    r_s %= q
    deg0, deg1 = degenerate_radii(ctx)
    if r_s in (deg0, deg1):
        raise ValueError(
            f"degenerate radius r_s={r_s}: radii {deg0} and {deg1} give singleton spheres"
        )

    gen = sphere(ctx, r_s)
    gen_set = set(gen)
    for s in gen:
        if point_inverse(ctx, s) not in gen_set:
            raise AssertionError(f"generating sphere not closed under inversion at {s}")

    points = enumerate_points(ctx)
    n = len(points)
    xs = np.array([z.x for z in points])
    ys = np.array([z.y for z in points])
    adjacency = np.zeros((n, n), dtype=np.int8)
    rows = np.arange(n)
    for s in gen:
        nx = (ys * s.x + xs) % q
        ny = (ys * s.y) % q
        adjacency[rows, (ny - 1) * q + nx] = 1

    if np.any(np.diag(adjacency)):
        raise AssertionError("self-loop produced by a regular radius")
    if not np.array_equal(adjacency, adjacency.T):
        raise AssertionError("adjacency not symmetric")
    if not np.all(adjacency.sum(axis=1) == q + 1):
        raise AssertionError("graph is not (q+1)-regular")
    if not _connected(adjacency):
        raise AssertionError("graph is not connected")

    return UhpGraph(ctx, r_s, points, adjacency)


def _connected(adjacency):
    n = adjacency.shape[0]
    seen = np.zeros(n, dtype=bool)
    frontier = np.zeros(n, dtype=bool)
    frontier[0] = True
    while frontier.any():
        seen |= frontier
        frontier = (adjacency[frontier].sum(axis=0) > 0) & ~seen
    return bool(seen.all())


def laplacian(graph):
    """Combinatorial Laplacian (q+1)*I - A as a dense float matrix."""
    n = graph.n
    return (graph.ctx.q + 1) * np.eye(n) - graph.adjacency.astype(float)


def orbit_decomposition(ctx):
    """Partition of H_q by distance to sqrt(delta): radius -> sorted vertex indices."""
    base = base_point()
    orbits = {}
    for i, z in enumerate(enumerate_points(ctx)):
        orbits.setdefault(distance(ctx, z, base), []).append(i)
    return {r: sorted(ix) for r, ix in orbits.items()}


def orbit_sizes(ctx):
    return {r: len(ix) for r, ix in orbit_decomposition(ctx).items()}


def radii_order(ctx):
    """Canonical radius order: 0 first, then 4*delta, then regular radii sorted."""
    deg0, deg1 = degenerate_radii(ctx)
    regular = sorted(r for r in range(ctx.q) if r not in (deg0, deg1))
    return [deg0, deg1] + regular
