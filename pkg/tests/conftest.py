"""Shared fixtures and independent reference oracles used across test modules."""
from __future__ import annotations

import pytest

from polysearch.geometry import Cell, OrthoPolygon, validate_polygon


def P(*pairs) -> OrthoPolygon:
    return validate_polygon(list(pairs))


def ref_inside(verts, px: float, py: float) -> bool:
    """Single east-ray even-odd membership test, independent of the library.

    Valid for query points that are not on the boundary; test points use
    half-integer coordinates against integer edges, so no ties occur.
    """
    n = len(verts)
    crossings = 0
    for i in range(n):
        (x0, y0), (x1, y1) = verts[i], verts[(i + 1) % n]
        if x0 == x1 and x0 > px and min(y0, y1) < py < max(y0, y1):
            crossings += 1
    return crossings % 2 == 1


def ref_on_boundary(verts, px: float, py: float) -> bool:
    n = len(verts)
    for i in range(n):
        (x0, y0), (x1, y1) = verts[i], verts[(i + 1) % n]
        if x0 == x1:
            if px == x0 and min(y0, y1) <= py <= max(y0, y1):
                return True
        else:
            if py == y0 and min(x0, x1) <= px <= max(x0, x1):
                return True
    return False


def ref_in_closed_region(verts, px: int, py: int) -> bool:
    """Lattice point inside or on the polygon boundary.

    Strict interior at a lattice point is decided through the incident unit
    cells: the boundary runs on lattice lines only, so every unit cell is
    wholly inside or wholly outside, and a non-boundary lattice point is
    interior exactly when one of its incident cells is.
    """
    if ref_on_boundary(verts, px, py):
        return True
    return any(
        ref_inside(verts, px + dx + 0.5, py + dy + 0.5)
        for dx in (-1, 0)
        for dy in (-1, 0)
    )


@pytest.fixture
def unit_square() -> OrthoPolygon:
    return P((0, 0), (1, 0), (1, 1), (0, 1))


@pytest.fixture
def l_shape() -> OrthoPolygon:
    return P((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2))


@pytest.fixture
def u_shape() -> OrthoPolygon:
    return P((0, 0), (3, 0), (3, 2), (2, 2), (2, 1), (1, 1), (1, 2), (0, 2))


@pytest.fixture
def staircase() -> OrthoPolygon:
    return P((0, 0), (3, 0), (3, 3), (2, 3), (2, 2), (1, 2), (1, 1), (0, 1))


def cell(c: int, r: int) -> Cell:
    return Cell(c, r)
