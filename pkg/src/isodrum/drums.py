"""Planar unfolding of involution systems into tiled domains.

Tiles are placed by breadth-first reflection along the tree edges of the
gluing graph.  Coordinates are exact: rationals for the half-square tile,
numbers in Q(sqrt(d)) otherwise, so overlap and boundary tests are decisions,
not estimates.  Side mu of a triangle is the edge opposite vertex mu.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SpecFormatError
from .quadratic import QuadExt
from .transplant import InvolutionSystem, is_tree


def _sign(x) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


@dataclass(frozen=True)
class BaseTile:
    """A triangle with exact coordinates and one color per side."""

    vertices: tuple

    def __post_init__(self):
        if len(self.vertices) != 3:
            raise ValueError("a base tile has three vertices")
        if _sign(_cross(*self.vertices)) == 0:
            raise ValueError("degenerate triangle")

    def side(self, mu: int):
        """Endpoints of the side opposite vertex mu."""
        a, b = (mu + 1) % 3, (mu + 2) % 3
        return self.vertices[a], self.vertices[b]

    def area(self):
        s = _cross(*self.vertices) * Fraction(1, 2)
        return s if _sign(s) > 0 else -s

    @staticmethod
    def half_square() -> "BaseTile":
        z, one = Fraction(0), Fraction(1)
        return BaseTile(((z, z), (one, z), (z, one)))

    @staticmethod
    def equilateral() -> "BaseTile":
        z = QuadExt(0, 0, 3)
        one = QuadExt(1, 0, 3)
        half = QuadExt(Fraction(1, 2), 0, 3)
        height = QuadExt(0, Fraction(1, 2), 3)
        return BaseTile(((z, z), (one, z), (half, height)))

    @staticmethod
    def named(name: str) -> "BaseTile":
        if name == "half-square":
            return BaseTile.half_square()
        if name == "equilateral":
            return BaseTile.equilateral()
        raise ValueError(f"unknown tile {name!r}; use half-square or equilateral")


def _reflect_point(x, p, q):
    """Mirror image of x across the line through p and q."""
    d = (q[0] - p[0], q[1] - p[1])
    v = (x[0] - p[0], x[1] - p[1])
    t = _dot(v, d) / _dot(d, d)
    foot = (p[0] + t * d[0], p[1] + t * d[1])
    return (2 * foot[0] - x[0], 2 * foot[1] - x[1])


@dataclass
class TiledDomain:
    """Placed tiles of one unfolded billiard."""

    system: InvolutionSystem
    base: BaseTile
    tiles: list
    orientations: list
    adjacency: list
    overlap_flag: bool = False

    @property
    def n_tiles(self):
        return len(self.tiles)

    def tile_area(self):
        return _triangle_area(self.tiles[0])

    def total_area(self):
        return self.tile_area() * self.n_tiles


def _triangle_area(tri):
    s = _cross(*tri)
    half = Fraction(1, 2)
    s = s * half
    return s if _sign(s) > 0 else -s


def _segments_cross(p1, p2, q1, q2) -> bool:
    """Strict interior crossing of two segments."""
    d1 = _sign(_cross(q1, q2, p1))
    d2 = _sign(_cross(q1, q2, p2))
    d3 = _sign(_cross(p1, p2, q1))
    d4 = _sign(_cross(p1, p2, q2))
    return d1 * d2 < 0 and d3 * d4 < 0


def _strictly_inside(pt, tri) -> bool:
    s1 = _sign(_cross(tri[0], tri[1], pt))
    s2 = _sign(_cross(tri[1], tri[2], pt))
    s3 = _sign(_cross(tri[2], tri[0], pt))
    return (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0)


def _centroid(tri):
    three = 3
    return (
        (tri[0][0] + tri[1][0] + tri[2][0]) / three,
        (tri[0][1] + tri[1][1] + tri[2][1]) / three,
    )


def triangles_overlap(t1, t2) -> bool:
    """Whether two triangles share interior points.

    Touching along edges or vertices does not count.  Proper edge crossings,
    strict vertex containment and strict centroid containment together cover
    the congruent-tile configurations produced by unfolding.
    """
    edges1 = [(t1[i], t1[(i + 1) % 3]) for i in range(3)]
    edges2 = [(t2[i], t2[(i + 1) % 3]) for i in range(3)]
    for a, b in edges1:
        for c, d in edges2:
            if _segments_cross(a, b, c, d):
                return True
    for v in t1:
        if _strictly_inside(v, t2):
            return True
    for v in t2:
        if _strictly_inside(v, t1):
            return True
    return _strictly_inside(_centroid(t1), t2) or _strictly_inside(_centroid(t2), t1)


def unfold(sys: InvolutionSystem, base: BaseTile) -> TiledDomain:
    """Place all tiles by reflecting along the gluing tree.

    Tile j, glued to tile i by color mu, is the mirror image of tile i across
    tile i's side mu; the shared side's endpoints are fixed by the
    reflection, so the two placed tiles share that full edge.
    """
    if not is_tree(sys):
        raise ValueError("system is not a tree; unfolding undefined")
    n = sys.n_tiles
    tiles = [None] * n
    orientations = [0] * n
    tiles[0] = tuple(base.vertices)
    orientations[0] = 1
    adjacency = []
    queue = deque([0])
    placed = {0}
    while queue:
        i = queue.popleft()
        for mu, p in enumerate(sys.perms):
            j = int(p.images[i])
            if j == i or j in placed:
                continue
            a, b = (mu + 1) % 3, (mu + 2) % 3
            pa, pb = tiles[i][a], tiles[i][b]
            tiles[j] = tuple(_reflect_point(v, pa, pb) for v in tiles[i])
            orientations[j] = -orientations[i]
            adjacency.append((i, j, mu))
            placed.add(j)
            queue.append(j)
    overlap = False
    for i in range(n):
        for j in range(i + 1, n):
            if triangles_overlap(tiles[i], tiles[j]):
                overlap = True
                break
        if overlap:
            break
    return TiledDomain(sys, base, tiles, orientations, adjacency, overlap)


def boundary_polygon(domain: TiledDomain):
    """The closed boundary walk of a non-overlapping domain.

    Boundary edges are those lying in exactly one tile; edges shared by two
    tiles must come from a gluing.  Raises on overlaps, slits (coincident
    edges of unglued tiles) and non-manifold or self-crossing boundaries.
    """
    if domain.overlap_flag:
        raise ValueError("domain has overlapping tiles; no boundary polygon")
    counts = {}
    for ti, tri in enumerate(domain.tiles):
        for mu in range(3):
            a, b = (mu + 1) % 3, (mu + 2) % 3
            key = frozenset((tri[a], tri[b]))
            counts.setdefault(key, []).append((ti, mu))
    glued = {frozenset((i, j)) for i, j, _ in domain.adjacency}
    edges = []
    for key, owners in counts.items():
        if len(owners) == 1:
            edges.append((key, owners[0]))
        elif len(owners) == 2:
            if frozenset((owners[0][0], owners[1][0])) not in glued:
                raise ValueError("coincident edges of unglued tiles (slit); non-manifold boundary")
        else:
            raise ValueError("edge shared by more than two tiles; non-manifold boundary")
    incident = {}
    for key, _ in edges:
        for pt in key:
            incident.setdefault(pt, []).append(key)
    for pt, ks in incident.items():
        if len(ks) != 2:
            raise ValueError("boundary vertex does not have exactly two boundary edges")
    start = min(incident)
    walk = [start]
    prev_edge = None
    current = start
    while True:
        options = [k for k in incident[current] if k != prev_edge]
        edge = options[0]
        nxt = next(p for p in edge if p != current)
        prev_edge = edge
        current = nxt
        if current == start:
            break
        walk.append(current)
    if len(walk) != len(edges):
        raise ValueError("boundary is not a single closed walk")
    for i in range(len(walk)):
        a1, a2 = walk[i], walk[(i + 1) % len(walk)]
        for j in range(i + 1, len(walk)):
            b1, b2 = walk[j], walk[(j + 1) % len(walk)]
            if _segments_cross(a1, a2, b1, b2):
                raise ValueError("boundary walk self-intersects")
    if _sign(_polygon_signed_area(walk)) < 0:
        walk.reverse()
    return walk


def _polygon_signed_area(points):
    s = 0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        s = s + (x1 * y2 - x2 * y1)
    return s / 2


def polygon_area(points):
    s = _polygon_signed_area(points)
    return s if _sign(s) > 0 else -s


def polygon_perimeter_sq_multiset(points):
    """Squared edge lengths (exact), sorted; a congruence invariant."""
    out = []
    n = len(points)
    for i in range(n):
        dx = points[i][0] - points[(i + 1) % n][0]
        dy = points[i][1] - points[(i + 1) % n][1]
        out.append(dx * dx + dy * dy)
    return sorted(out)


def _to_float_pt(p):
    return float(p[0]), float(p[1])


def export_svg(domain: TiledDomain, path, boundary=None):
    """One path per tile plus the boundary outline."""
    pts = [v for tri in domain.tiles for v in tri]
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    pad = 0.1 * max(maxx - minx, maxy - miny, 1.0)
    w = maxx - minx + 2 * pad
    h = maxy - miny + 2 * pad
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{minx - pad:.4f} '
        f'{-maxy - pad:.4f} {w:.4f} {h:.4f}" width="400" height="400">'
    ]
    for tri in domain.tiles:
        p = " ".join(f"{float(x):.6f},{-float(y):.6f}" for x, y in tri)
        lines.append(f'  <polygon points="{p}" fill="#cfe2ff" stroke="#6688aa" stroke-width="0.01"/>')
    if boundary is None and not domain.overlap_flag:
        boundary = boundary_polygon(domain)
    if boundary is not None:
        p = " ".join(f"{float(x):.6f},{-float(y):.6f}" for x, y in boundary)
        lines.append(f'  <polygon points="{p}" fill="none" stroke="#000000" stroke-width="0.03"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _frac_pair(x):
    if isinstance(x, QuadExt):
        if x.b != 0:
            raise ValueError("exact JSON export needs rational coordinates")
        x = x.a
    f = Fraction(x)
    return [f.numerator, f.denominator]


def export_json(domain: TiledDomain, path, boundary=None):
    """Exact rational coordinates as numerator/denominator pairs."""
    if boundary is None and not domain.overlap_flag:
        boundary = boundary_polygon(domain)
    data = {
        "tiles": [
            {"vertices": [[_frac_pair(x), _frac_pair(y)] for x, y in tri]}
            for tri in domain.tiles
        ],
        "boundary": [[_frac_pair(x), _frac_pair(y)] for x, y in boundary]
        if boundary is not None
        else None,
        "area": _frac_pair(domain.total_area()),
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def load_domain_json(path):
    """Boundary polygon and tiles back from the exact JSON form."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        tiles = [
            tuple((Fraction(x[0], x[1]), Fraction(y[0], y[1])) for x, y in tri["vertices"])
            for tri in data["tiles"]
        ]
        boundary = None
        if data.get("boundary"):
            boundary = [
                (Fraction(x[0], x[1]), Fraction(y[0], y[1])) for x, y in data["boundary"]
            ]
    except (KeyError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise SpecFormatError(f"bad domain json: {exc}") from exc
    return tiles, boundary
