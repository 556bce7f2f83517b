"""Generalized Hilbert curves on rectangles, detour repair, patrol segments.

The curve generator recursively splits a w x h rectangle into an entry block,
a long middle block and an exit block (or halves a very wide block), emitting
a visit order that touches every cell exactly once with unit king-moves; the
rare diagonal step appears only for some odd dimensions and is removed by
repair_curve at the cost of revisiting one cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .decomposition import Rectangle
from .errors import DimensionMismatch, TooManyRobots
from .geometry import Cell, GridGraph


@dataclass(frozen=True)
class Curve:
    cells: tuple[Cell, ...]

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)

    def __getitem__(self, i: int) -> Cell:
        return self.cells[i]


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _generate(x: int, y: int, ax: int, ay: int, bx: int, by: int) -> Iterator[Cell]:
    w = abs(ax + ay)
    h = abs(bx + by)
    dax, day = _sgn(ax), _sgn(ay)
    dbx, dby = _sgn(bx), _sgn(by)

    if h == 1:
        for _ in range(w):
            yield Cell(x, y)
            x += dax
            y += day
        return
    if w == 1:
        for _ in range(h):
            yield Cell(x, y)
            x += dbx
            y += dby
        return

    ax2, ay2 = ax // 2, ay // 2
    bx2, by2 = bx // 2, by // 2
    w2 = abs(ax2 + ay2)
    h2 = abs(bx2 + by2)

    if 2 * w > 3 * h:
        if (w2 % 2) and (w > 2):
            ax2, ay2 = ax2 + dax, ay2 + day
        # wide block: halve along the major axis
        yield from _generate(x, y, ax2, ay2, bx, by)
        yield from _generate(x + ax2, y + ay2, ax - ax2, ay - ay2, bx, by)
    else:
        if (h2 % 2) and (h > 2):
            bx2, by2 = bx2 + dbx, by2 + dby
        # entry block up, middle along the major axis, exit block back down
        yield from _generate(x, y, bx2, by2, ax2, ay2)
        yield from _generate(x + bx2, y + by2, ax, ay, bx - bx2, by - by2)
        yield from _generate(
            x + (ax - dax) + (bx2 - dbx),
            y + (ay - day) + (by2 - dby),
            -bx2,
            -by2,
            -(ax - ax2),
            -(ay - ay2),
        )


def gilbert_curve(width: int, height: int) -> Curve:
    """Space-filling visit order for a width x height rectangle at (0, 0).

    Every cell appears exactly once; consecutive cells are king-move
    adjacent, with at most a single diagonal step for odd x odd extents.
    """
    if width < 1 or height < 1:
        raise DimensionMismatch(f"rectangle {width}x{height} has no cells")
    if width >= height:
        cells = tuple(_generate(0, 0, width, 0, 0, height))
    else:
        cells = tuple(_generate(0, 0, 0, height, width, 0))
    return Curve(cells)


def repair_curve(c: Curve, g: GridGraph) -> Curve:
    """Replace diagonal steps with an L-detour through an in-graph cell.

    The horizontal intermediate is preferred; the detour revisits one cell,
    so the result can be longer than the input but is 4-adjacent throughout.
    """
    out: list[Cell] = [c.cells[0]]
    for nxt in c.cells[1:]:
        cur = out[-1]
        dx, dy = nxt.col - cur.col, nxt.row - cur.row
        if abs(dx) + abs(dy) == 1:
            out.append(nxt)
            continue
        if abs(dx) == 1 and abs(dy) == 1:
            horizontal = Cell(cur.col + dx, cur.row)
            vertical = Cell(cur.col, cur.row + dy)
            if horizontal in g:
                out.append(horizontal)
            elif vertical in g:
                out.append(vertical)
            else:
                raise DimensionMismatch(f"no in-graph detour between {tuple(cur)} and {tuple(nxt)}")
            out.append(nxt)
            continue
        raise DimensionMismatch(f"curve jumps from {tuple(cur)} to {tuple(nxt)}")
    return Curve(tuple(out))


def place_curve(rect: Rectangle, c: Curve) -> Curve:
    """Translate a rectangle-local curve onto the rectangle's grid cells."""
    cols = [cell.col for cell in c.cells]
    rows = [cell.row for cell in c.cells]
    if min(cols) != 0 or min(rows) != 0 or max(cols) != rect.width - 1 or max(rows) != rect.height - 1:
        raise DimensionMismatch(
            f"curve spans {max(cols) + 1}x{max(rows) + 1}, rectangle is {rect.width}x{rect.height}"
        )
    dc, dr = rect.anchor.col, rect.anchor.row
    return Curve(tuple(Cell(col + dc, row + dr) for col, row in c.cells))


def segment_bounds(n: int, count: int) -> list[tuple[int, int]]:
    """(start, stop) pairs splitting an n-cell curve into `count` segments.

    Segment i spans [i*n//count, (i+1)*n//count), so lengths differ by at
    most one and every cell lands in exactly one segment.
    """
    if count < 1:
        raise TooManyRobots("at least one robot per curve")
    if count > n:
        raise TooManyRobots(f"{count} robots on a {n}-cell curve")
    starts = [i * n // count for i in range(count)]
    stops = starts[1:] + [n]
    return list(zip(starts, stops))


def assign_segments(c: Curve, count: int) -> list[int]:
    """Start indices of `count` contiguous patrol segments along the curve."""
    return [start for start, _ in segment_bounds(len(c.cells), count)]


def curve_segments(c: Curve, count: int) -> list[tuple[int, int]]:
    """(start, stop) index pairs of the patrol segments; stop is exclusive."""
    return segment_bounds(len(c.cells), count)
