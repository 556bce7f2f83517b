"""Random orthogonal polygon generation and comb-shaped hardness gadgets.

inflate_cut grows a polygon from a unit square two vertices at a time by
refining the lattice around a random cell and cutting a random rectangle at a
convex corner. Combs encode 3-Partition triples as spike depths; balancing
the triples is what makes an optimal multi-robot sweep schedule hard.
"""
from __future__ import annotations

import random
import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    InstanceInvalid,
    IterationBudgetExceeded,
    NotAPartition,
    OddTargetVertices,
    ScheduleMismatch,
    TripleSizeError,
)
from .geometry import Cell, OrthoPolygon, polygon_from_cells, rasterize

RETRY_BUDGET = 10_000

# Incidence bits of a cell at a lattice point: the two diagonal pairings are
# the pinch patterns.
_NE, _NW, _SE, _SW = 1, 2, 4, 8
_PINCH_MASKS = (_NE | _SW, _NW | _SE)


def _corner_scan(cells: set[Cell]) -> tuple[int, bool]:
    """(number of polygon vertices, whether the set pinches at a point)."""
    around: dict[tuple[int, int], int] = defaultdict(int)
    for c, r in cells:
        around[(c, r)] |= _NE
        around[(c + 1, r)] |= _NW
        around[(c, r + 1)] |= _SE
        around[(c + 1, r + 1)] |= _SW
    vertices = 0
    pinch = False
    for mask in around.values():
        n = bin(mask).count("1")
        if n in (1, 3):
            vertices += 1
        elif n == 2 and mask in _PINCH_MASKS:
            pinch = True
    return vertices, pinch


def _connected_cells(cells: set[Cell]) -> bool:
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        c, r = stack.pop()
        for nb in (Cell(c, r + 1), Cell(c + 1, r), Cell(c, r - 1), Cell(c - 1, r)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def _simply_connected(cells: set[Cell]) -> bool:
    # The complement within a 1-cell margin around the bounding box must be
    # one component, otherwise the set encloses a hole.
    cols = [c.col for c in cells]
    rows = [c.row for c in cells]
    lo_c, hi_c = min(cols) - 1, max(cols) + 1
    lo_r, hi_r = min(rows) - 1, max(rows) + 1
    outside = {
        Cell(c, r)
        for c in range(lo_c, hi_c + 1)
        for r in range(lo_r, hi_r + 1)
        if Cell(c, r) not in cells
    }
    start = Cell(lo_c, lo_r)
    seen = {start}
    stack = [start]
    while stack:
        c, r = stack.pop()
        for nb in (Cell(c, r + 1), Cell(c + 1, r), Cell(c, r - 1), Cell(c - 1, r)):
            if lo_c <= nb.col <= hi_c and lo_r <= nb.row <= hi_r and nb in outside and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(outside)


def _stretch(cells: set[Cell], at: Cell) -> set[Cell]:
    """Double the row and column through `at`; its image is a 2x2 block."""
    out: set[Cell] = set()
    for c, r in cells:
        cs = (c,) if c < at.col else ((c, c + 1) if c == at.col else (c + 1,))
        rs = (r,) if r < at.row else ((r, r + 1) if r == at.row else (r + 1,))
        for nc in cs:
            for nr in rs:
                out.add(Cell(nc, nr))
    return out


def inflate_cut(target_vertices: int, seed: int) -> OrthoPolygon:
    """Random simply connected orthogonal polygon with exactly target_vertices.

    Starts from a unit square; each round refines the lattice around a random
    cell and removes the rectangle spanned by a random convex corner and the
    refined block's center point, accepting only cuts that keep the cell set
    connected, hole-free and pinch-free while adding exactly two vertices.
    Deterministic per seed; raises IterationBudgetExceeded after 10^4
    rejected attempts in a round.
    """
    if target_vertices % 2:
        raise OddTargetVertices(f"{target_vertices} is odd; orthogonal polygons have even vertex counts")
    if target_vertices < 4:
        raise OddTargetVertices(f"{target_vertices} < 4; no such orthogonal polygon")

    rng = random.Random(seed)
    cells: set[Cell] = {Cell(0, 0)}
    vertices = 4
    while vertices < target_vertices:
        for _ in range(RETRY_BUDGET):
            ordered = sorted(cells, key=lambda c: (c.row, c.col))
            at = ordered[rng.randrange(len(ordered))]
            inflated = _stretch(cells, at)
            center = (at.col + 1, at.row + 1)

            around: dict[tuple[int, int], int] = defaultdict(int)
            for c, r in inflated:
                around[(c, r)] |= _NE
                around[(c + 1, r)] |= _NW
                around[(c, r + 1)] |= _SE
                around[(c + 1, r + 1)] |= _SW
            convex = sorted(p for p, mask in around.items() if bin(mask).count("1") == 1)
            v = convex[rng.randrange(len(convex))]

            x0, x1 = min(v[0], center[0]), max(v[0], center[0])
            y0, y1 = min(v[1], center[1]), max(v[1], center[1])
            if x0 == x1 or y0 == y1:
                continue
            cut = {Cell(c, r) for c in range(x0, x1) for r in range(y0, y1)}
            if not cut <= inflated:
                continue
            remaining = inflated - cut
            if not remaining:
                continue
            if not _connected_cells(remaining):
                continue
            if not _simply_connected(remaining):
                continue
            count, pinch = _corner_scan(remaining)
            if pinch or count != vertices + 2:
                continue
            cells = remaining
            vertices = count
            break
        else:
            raise IterationBudgetExceeded(
                f"no acceptable cut in {RETRY_BUDGET} attempts at {vertices} vertices"
            )
    return polygon_from_cells(cells)


@dataclass(frozen=True)
class ThreePartitionInstance:
    """Multiset S of 3q positive integers that should split into q triples of sum T."""

    S: tuple[int, ...]
    q: int
    T: int


def _check_instance(inst: ThreePartitionInstance) -> None:
    if inst.q < 1:
        raise InstanceInvalid("q must be at least 1")
    if len(inst.S) != 3 * inst.q:
        raise InstanceInvalid(f"|S| = {len(inst.S)}, expected 3q = {3 * inst.q}")
    if any(int(s) != s or s < 1 for s in inst.S):
        raise InstanceInvalid("S entries must be positive integers")
    if sum(inst.S) != inst.q * inst.T:
        raise InstanceInvalid(f"sum(S) = {sum(inst.S)}, expected qT = {inst.q * inst.T}")
    if any(not (inst.T / 4 < s < inst.T / 2) for s in inst.S):
        warnings.warn(
            "spike depths outside (T/4, T/2); triples of other sizes could also balance",
            stacklevel=3,
        )


def comb_cells(
    spike_lengths: Sequence[int],
    spike_width: int = 1,
    base_height: int = 1,
    spike_gap: int = 1,
) -> set[Cell]:
    """Cell set of a comb: a full-width base with one upward spike per entry."""
    n = len(spike_lengths)
    if n < 1 or spike_width < 1 or base_height < 1 or spike_gap < 1:
        raise InstanceInvalid("comb dimensions must be positive")
    if any(s < 1 for s in spike_lengths):
        raise InstanceInvalid("spike lengths must be positive")
    width = n * (spike_width + spike_gap) + spike_gap
    cells = {Cell(c, r) for c in range(width) for r in range(base_height)}
    for i, depth in enumerate(spike_lengths):
        x0 = spike_gap + i * (spike_width + spike_gap)
        for c in range(x0, x0 + spike_width):
            for r in range(base_height, base_height + depth):
                cells.add(Cell(c, r))
    return cells


def comb_polygon(
    spike_lengths: Sequence[int],
    spike_width: int = 1,
    base_height: int = 1,
    spike_gap: int = 1,
) -> OrthoPolygon:
    return polygon_from_cells(comb_cells(spike_lengths, spike_width, base_height, spike_gap))


def build_comb(
    inst: ThreePartitionInstance,
    spike_width: int = 1,
    base_height: int = 1,
    spike_gap: int = 1,
) -> OrthoPolygon:
    """Comb polygon whose spike depths are the instance entries, in order."""
    _check_instance(inst)
    return comb_polygon(inst.S, spike_width, base_height, spike_gap)


def _spike_columns(inst: ThreePartitionInstance, spike_width: int, spike_gap: int) -> list[int]:
    return [spike_gap + i * (spike_width + spike_gap) for i in range(len(inst.S))]


def _check_partition(inst: ThreePartitionInstance, partition: Sequence[Iterable[int]]) -> list[tuple[int, ...]]:
    triples = [tuple(t) for t in partition]
    if len(triples) != inst.q:
        raise NotAPartition(f"{len(triples)} groups for q = {inst.q}")
    for t in triples:
        if len(t) != 3:
            raise TripleSizeError(f"group {t} does not have exactly three elements")
    flat = sorted(i for t in triples for i in t)
    if flat != list(range(1, 3 * inst.q + 1)):
        raise NotAPartition("groups are not a disjoint cover of {1..3q}")
    return triples


@dataclass(frozen=True)
class SweepRecord:
    """One robot's sweep over its three spikes: clearing work vs. overhead."""

    clear: int  # one time unit per spike cell, paid on the ascent
    overhead: int  # descents plus base walking between spikes
    total: int  # simulated steps until the last spike cell is reached


def simulate_comb_sweep(
    inst: ThreePartitionInstance, partition: Sequence[Iterable[int]]
) -> list[SweepRecord]:
    """Step a robot per triple over its spikes on the actual comb grid.

    Each robot starts on the base below its leftmost spike, climbs and
    descends each spike in left-to-right order (no descent after the last),
    walking the base in between. The step count is simulated cell by cell on
    the rasterized comb; clear/overhead come from closed forms, and the two
    must agree (ScheduleMismatch otherwise).
    """
    triples = _check_partition(inst, partition)
    grid = rasterize(build_comb(inst))
    cols = _spike_columns(inst, 1, 1)

    records: list[SweepRecord] = []
    for triple in triples:
        spikes = sorted(triple)
        depths = [inst.S[i - 1] for i in spikes]
        xs = [cols[i - 1] for i in spikes]
        assigned = {
            Cell(x, 1 + d) for x, depth in zip(xs, depths) for d in range(depth)
        }

        pos = Cell(xs[0], 0)
        assert pos in grid
        steps = 0
        visited = {pos} & assigned
        done_at = None

        def move(to: Cell) -> None:
            nonlocal pos, steps, done_at
            assert abs(to.col - pos.col) + abs(to.row - pos.row) == 1
            assert to in grid, f"sweep leaves the comb at {tuple(to)}"
            pos = to
            steps += 1
            if to in assigned:
                visited.add(to)
                if done_at is None and visited == assigned:
                    done_at = steps

        for si, (x, depth) in enumerate(zip(xs, depths)):
            while pos.col != x:
                step = 1 if x > pos.col else -1
                move(Cell(pos.col + step, pos.row))
            for r in range(1, depth + 1):
                move(Cell(x, r))
            if si != len(xs) - 1:
                for r in range(depth - 1, -1, -1):
                    move(Cell(x, r))

        clear = sum(depths)
        overhead = (clear - depths[-1]) + (xs[-1] - xs[0])
        if done_at != clear + overhead or steps != done_at:
            raise ScheduleMismatch(
                f"simulated {done_at} steps, closed form gives {clear} + {overhead}"
            )
        records.append(SweepRecord(clear, overhead, done_at))
    return records


def verify_partition_schedule(
    inst: ThreePartitionInstance, partition: Sequence[Iterable[int]]
) -> int:
    """Makespan of the round schedule induced by a triple partition: q * max clear.

    Equals qT exactly when every triple sums to T (the sums total qT, so the
    max is T only in the balanced case). The comb sweep is simulated as a
    cross-check of each robot's clearing time.
    """
    _check_instance(inst)
    triples = _check_partition(inst, partition)
    records = simulate_comb_sweep(inst, partition)
    clears = [sum(inst.S[i - 1] for i in t) for t in triples]
    for rec, clear in zip(records, clears):
        if rec.clear != clear:
            raise ScheduleMismatch(f"sweep cleared {rec.clear}, schedule expected {clear}")
    return inst.q * max(clears)


def count_spikes(poly: OrthoPolygon) -> int:
    """Best-effort count of rectangular protrusions (heuristic).

    A spike is three consecutive CCW edges turning left at both shared
    corners, with equal-length first and third edges (the side walls), whose
    mouth (the middle edge's translate closing the rectangle) runs strictly
    through the interior. Combs report one spike per tooth; a plain
    rectangle reports 0. Protrusions with unequal walls (flush against a
    larger block) are conservatively not counted.
    """
    cells = rasterize(poly).cell_set
    verts = poly.vertices
    n = len(verts)

    def d(i: int) -> tuple[int, int]:
        (x0, y0), (x1, y1) = verts[i % n], verts[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        length = abs(dx) + abs(dy)
        return (dx // length, dy // length)

    def length(i: int) -> int:
        (x0, y0), (x1, y1) = verts[i % n], verts[(i + 1) % n]
        return abs(x1 - x0) + abs(y1 - y0)

    count = 0
    for i in range(n):
        d0, d1, d2 = d(i), d(i + 1), d(i + 2)
        if d0[0] * d1[1] - d0[1] * d1[0] <= 0:
            continue
        if d1[0] * d2[1] - d1[1] * d2[0] <= 0:
            continue
        if length(i + 2) != length(i):
            continue
        depth = length(i)
        ax, ay = verts[i % n]
        # mouth: the tip edge pushed back to the spike's opening
        mx, my = ax, ay
        ex, ey = mx + d1[0] * length(i + 1), my + d1[1] * length(i + 1)
        open_mouth = True
        if d1[1] == 0:  # horizontal mouth
            y = my
            for x in range(min(mx, ex), max(mx, ex)):
                if Cell(x, y - 1) not in cells or Cell(x, y) not in cells:
                    open_mouth = False
                    break
        else:  # vertical mouth
            x = mx
            for y in range(min(my, ey), max(my, ey)):
                if Cell(x - 1, y) not in cells or Cell(x, y) not in cells:
                    open_mouth = False
                    break
        if open_mouth:
            count += 1
    return count
