"""Orthogonal polygons on the integer lattice and their unit-cell grid graphs.

A polygon is a closed rectilinear loop with integer vertices. Its interior
decomposes into unit cells; cell (col, row) covers [col, col+1] x [row, row+1]
and is identified by its lower-left corner. Cell centers sit at half-integer
coordinates, so ray-parity membership tests never hit a vertex or run along
an edge.
"""
from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    CellOutsideGraph,
    CollinearEdges,
    DegenerateEdge,
    EmptyInterior,
    InvalidPolygon,
    IoError,
    NonIntegralVertex,
    NonOrthogonalEdge,
    OddVertexCount,
    SelfIntersection,
)

Point = tuple[int, int]


class Cell(NamedTuple):
    col: int
    row: int


# Neighbor probing order: N, E, S, W (row grows northward).
CARDINAL_STEPS: tuple[Point, ...] = ((0, 1), (1, 0), (0, -1), (-1, 0))


@dataclass(frozen=True)
class OrthoPolygon:
    """Validated simple orthogonal polygon, CCW, translated to the first quadrant.

    Construct through validate_polygon() or polygon_from_cells(); the fields
    are trusted everywhere else.
    """

    vertices: tuple[Point, ...]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @property
    def area(self) -> int:
        return abs(_shoelace(self.vertices))

    @property
    def bounds(self) -> tuple[int, int]:
        """Bounding box extents (width, height); min corner is (0, 0)."""
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        return max(xs), max(ys)

    @property
    def min_edge(self) -> int:
        return min(abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in self.edges())


def _shoelace(vertices: Sequence[Point]) -> int:
    total = 0
    for i, (x0, y0) in enumerate(vertices):
        x1, y1 = vertices[(i + 1) % len(vertices)]
        total += x0 * y1 - x1 * y0
    return total // 2


def validate_polygon(vertices: Sequence[Sequence[float]]) -> OrthoPolygon:
    """Check a vertex loop and normalize it (CCW, min corner at origin).

    Raises subclasses of InvalidPolygon: NonIntegralVertex, OddVertexCount,
    DegenerateEdge, NonOrthogonalEdge, CollinearEdges, SelfIntersection.
    """
    pts: list[Point] = []
    for v in vertices:
        x, y = v[0], v[1]
        if x != int(x) or y != int(y):
            raise NonIntegralVertex(f"vertex ({x}, {y}) is not on the integer lattice")
        pts.append((int(x), int(y)))

    if len(pts) % 2 == 1:
        raise OddVertexCount(f"{len(pts)} vertices; orthogonal polygons have an even count")
    if len(pts) < 4:
        raise InvalidPolygon("a polygon needs at least 4 vertices")

    n = len(pts)
    dirs: list[Point] = []
    for i in range(n):
        (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        if dx == 0 and dy == 0:
            raise DegenerateEdge(f"zero-length edge at vertex {i}")
        if dx != 0 and dy != 0:
            raise NonOrthogonalEdge(f"edge {i} from {pts[i]} to {pts[(i + 1) % n]} is not axis-parallel")
        dirs.append((0 if dx == 0 else (1 if dx > 0 else -1), 0 if dy == 0 else (1 if dy > 0 else -1)))

    for i in range(n):
        a, b = dirs[i - 1], dirs[i]
        if (a[0] == 0) == (b[0] == 0):
            raise CollinearEdges(f"edges meeting at vertex {i} do not alternate horizontal/vertical")

    _check_self_intersection(pts)

    if _shoelace(pts) < 0:
        pts = [pts[0]] + pts[1:][::-1]

    minx = min(x for x, _ in pts)
    miny = min(y for _, y in pts)
    return OrthoPolygon(tuple((x - minx, y - miny) for x, y in pts))


def _check_self_intersection(pts: list[Point]) -> None:
    # O(n^2) over axis-parallel segments; fine at the vertex counts used here.
    n = len(pts)
    segs = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        (ax0, ay0), (ax1, ay1) = segs[i]
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            (bx0, by0), (bx1, by1) = segs[j]
            a_horiz = ay0 == ay1
            b_horiz = by0 == by1
            if a_horiz == b_horiz:
                if a_horiz:
                    if ay0 != by0:
                        continue
                    lo = max(min(ax0, ax1), min(bx0, bx1))
                    hi = min(max(ax0, ax1), max(bx0, bx1))
                else:
                    if ax0 != bx0:
                        continue
                    lo = max(min(ay0, ay1), min(by0, by1))
                    hi = min(max(ay0, ay1), max(by0, by1))
                if lo < hi or (lo == hi and not adjacent):
                    raise SelfIntersection(f"edges {i} and {j} overlap or touch")
            else:
                if adjacent:
                    # Consecutive perpendicular edges meet exactly at their
                    # shared vertex; nothing else can coincide.
                    continue
                if a_horiz:
                    hy, hx_lo, hx_hi = ay0, min(ax0, ax1), max(ax0, ax1)
                    vx, vy_lo, vy_hi = bx0, min(by0, by1), max(by0, by1)
                else:
                    hy, hx_lo, hx_hi = by0, min(bx0, bx1), max(bx0, bx1)
                    vx, vy_lo, vy_hi = ax0, min(ay0, ay1), max(ay0, ay1)
                if hx_lo <= vx <= hx_hi and vy_lo <= hy <= vy_hi:
                    raise SelfIntersection(f"edges {i} and {j} cross or touch")


class GridGraph:
    """4-connected graph over the unit cells inside a polygon.

    Cells are sorted row-major (row, then col); `adjacency[i]` lists neighbor
    indices in N, E, S, W order, absent directions skipped. Instances are
    treated as immutable; `cache` is scratch for memoized derived structures.
    """

    __slots__ = ("cells", "cell_set", "index", "adjacency", "cols", "rows", "bounds", "cache")

    def __init__(self, cells: Iterable[Cell], bounds: tuple[int, int]):
        ordered = sorted(set(Cell(*c) for c in cells), key=lambda c: (c.row, c.col))
        self.cells: tuple[Cell, ...] = tuple(ordered)
        self.cell_set: frozenset[Cell] = frozenset(ordered)
        self.index: dict[Cell, int] = {c: i for i, c in enumerate(ordered)}
        self.cols: tuple[int, ...] = tuple(c.col for c in ordered)
        self.rows: tuple[int, ...] = tuple(c.row for c in ordered)
        self.bounds = bounds
        adj = []
        for c in ordered:
            row = []
            for dx, dy in CARDINAL_STEPS:
                nb = self.index.get(Cell(c.col + dx, c.row + dy))
                if nb is not None:
                    row.append(nb)
            adj.append(tuple(row))
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(adj)
        self.cache: dict = {}

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cell_set

    def require(self, cell: Cell) -> int:
        try:
            return self.index[Cell(*cell)]
        except KeyError:
            raise CellOutsideGraph(f"cell {tuple(cell)} is not in the grid") from None


def neighbors(g: GridGraph, cell: Cell) -> list[Cell]:
    """In-graph 4-neighbors of `cell` in N, E, S, W order."""
    i = g.require(cell)
    return [g.cells[j] for j in g.adjacency[i]]


def rasterize(poly: OrthoPolygon) -> GridGraph:
    """Cells whose centers pass the four-ray odd-parity membership test.

    A center (col+.5, row+.5) is inside when the rays cast east, west, north
    and south each cross the boundary an odd number of times. Centers never
    lie on the boundary, so the counts are well defined.
    """
    w, h = poly.bounds
    vert: list[tuple[int, int, int]] = []  # (x, ylo, yhi)
    horz: list[tuple[int, int, int]] = []  # (y, xlo, xhi)
    for (x0, y0), (x1, y1) in poly.edges():
        if x0 == x1:
            vert.append((x0, min(y0, y1), max(y0, y1)))
        else:
            horz.append((y0, min(x0, x1), max(x0, x1)))

    # Per row, the x positions of vertical edges straddling the row's centers;
    # per column, the y positions of horizontal edges straddling the column's.
    cells: list[Cell] = []
    col_ys: list[list[int]] = []
    for col in range(w):
        cx = col + 0.5
        col_ys.append(sorted(y for y, xlo, xhi in horz if xlo < cx < xhi))
    for row in range(h):
        cy = row + 0.5
        xs = sorted(x for x, ylo, yhi in vert if ylo < cy < yhi)
        for col in range(w):
            cx = col + 0.5
            east = len(xs) - bisect_left(xs, cx)
            west = len(xs) - east
            ys = col_ys[col]
            north = len(ys) - bisect_left(ys, cy)
            south = len(ys) - north
            if east % 2 and west % 2 and north % 2 and south % 2:
                cells.append(Cell(col, row))

    if not cells:
        raise EmptyInterior("polygon encloses no unit cells")
    g = GridGraph(cells, (w, h))
    if not _is_connected(g):
        raise SelfIntersection("interior cells are not 4-connected; boundary is not simple")
    return g


def _is_connected(g: GridGraph) -> bool:
    if not g.cells:
        return False
    seen = bytearray(len(g.cells))
    stack = [0]
    seen[0] = 1
    count = 1
    while stack:
        v = stack.pop()
        for u in g.adjacency[v]:
            if not seen[u]:
                seen[u] = 1
                count += 1
                stack.append(u)
    return count == len(g.cells)


def polygon_from_cells(cells: Iterable[Cell]) -> OrthoPolygon:
    """Trace the boundary of a 4-connected, simply connected cell set.

    Walks the directed boundary edges (interior kept on the left), merging
    collinear runs; raises InvalidPolygon if the set pinches at a point or
    has more than one boundary loop.
    """
    cset = {Cell(*c) for c in cells}
    if not cset:
        raise EmptyInterior("no cells to trace")

    # Directed unit edges with the interior on the left.
    out_edges: dict[Point, Point] = {}

    def add(a: Point, b: Point) -> None:
        if a in out_edges:
            raise InvalidPolygon(f"cell set pinches at point {a}")
        out_edges[a] = b

    for c, r in cset:
        if (c, r - 1) not in cset:
            add((c, r), (c + 1, r))
        if (c + 1, r) not in cset:
            add((c + 1, r), (c + 1, r + 1))
        if (c, r + 1) not in cset:
            add((c + 1, r + 1), (c, r + 1))
        if (c - 1, r) not in cset:
            add((c, r + 1), (c, r))

    start = min(out_edges, key=lambda p: (p[1], p[0]))
    loop: list[Point] = [start]
    cur = out_edges[start]
    visited = 1
    while cur != start:
        loop.append(cur)
        cur = out_edges[cur]
        visited += 1
    if visited != len(out_edges):
        raise InvalidPolygon("cell set has more than one boundary loop")

    verts: list[Point] = []
    m = len(loop)
    for i in range(m):
        prev, here, nxt = loop[i - 1], loop[i], loop[(i + 1) % m]
        d0 = (here[0] - prev[0], here[1] - prev[1])
        d1 = (nxt[0] - here[0], nxt[1] - here[1])
        if d0 != d1:
            verts.append(here)
    return validate_polygon(verts)


def read_polygon_file(path: str) -> tuple[OrthoPolygon, float]:
    """Load {"vertices": [[x, y], ...], "cell_size_m": s} from JSON."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    poly = validate_polygon(data["vertices"])
    return poly, float(data.get("cell_size_m", 5.0))


def write_polygon_file(path: str, poly: OrthoPolygon, cell_size_m: float = 5.0) -> None:
    try:
        with open(path, "w") as fh:
            json.dump({"vertices": [list(v) for v in poly.vertices], "cell_size_m": cell_size_m}, fh)
            fh.write("\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc
