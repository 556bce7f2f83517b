"""Simulation engine tests.

The heavyweight oracle here is an absorbing Markov chain for the
omniscient pursuer on a corridor, solved exactly with numpy and compared
against simulated capture times. Policy mechanics (patrol ping-pong, the
crs redeployment barrier, swap captures) are checked white-box.
"""

from __future__ import annotations

import random

import numpy as np
import pytest
from scipy import stats

from polysearch.errors import TooFewRobots
from polysearch.geometry import Cell, rasterize
from polysearch.polygen import comb_polygon
from polysearch.sim import (
    DEFAULT_STEP_FACTOR,
    SimConfig,
    init_trial,
    intruder_move,
    min_robots,
    policy_sfc,
    run_trial,
    sfc_layout,
    step,
)

from conftest import P


def corridor(n: int):
    return P((0, 0), (n, 0), (n, 1), (0, 1))


@pytest.fixture(scope="module")
def comb_grid():
    poly = comb_polygon((3, 4, 5), spike_width=1, base_height=2, spike_gap=1)
    return poly, rasterize(poly)


# ---------------------------------------------------------------- init


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError):
        init_trial(SimConfig(polygon=corridor(4), strategy="teleport", k=1))


def test_unknown_intruder_rejected():
    with pytest.raises(ValueError):
        init_trial(SimConfig(polygon=corridor(4), strategy="rs", k=1, intruder="ghost"))


def test_zero_robots_rejected():
    with pytest.raises(TooFewRobots):
        init_trial(SimConfig(polygon=corridor(4), strategy="rs", k=0))


def test_sfc_rejects_fixed_positions():
    cfg = SimConfig(polygon=corridor(4), strategy="sfc", k=1, robot_positions=(Cell(0, 0),))
    with pytest.raises(ValueError):
        init_trial(cfg)


def test_position_count_must_match_k():
    cfg = SimConfig(polygon=corridor(4), strategy="rs", k=2, robot_positions=(Cell(0, 0),))
    with pytest.raises(ValueError):
        init_trial(cfg)


def test_colocated_start_is_an_immediate_capture():
    cfg = SimConfig(
        polygon=corridor(4),
        strategy="baseline",
        k=1,
        robot_positions=(Cell(2, 0),),
        intruder_position=Cell(2, 0),
    )
    res = run_trial(cfg)
    assert res.captured and res.steps == 0


def test_default_step_cap_scales_with_area():
    grid = rasterize(corridor(7))
    state = init_trial(SimConfig(polygon=corridor(7), strategy="rs", k=1), grid)
    assert state.max_steps == DEFAULT_STEP_FACTOR * len(grid.cells)


def test_uncaptured_trial_reports_the_cap():
    # one patrol robot pinned to a 1-cell segment can never reach the far cell
    cfg = SimConfig(
        polygon=corridor(6),
        strategy="rs",
        k=1,
        max_steps=0,
        robot_positions=(Cell(0, 0),),
        intruder_position=Cell(5, 0),
    )
    res = run_trial(cfg)
    assert not res.captured and res.steps == 0


def test_sfc_robots_start_at_segment_starts():
    poly = corridor(6)
    grid = rasterize(poly)
    state = init_trial(
        SimConfig(polygon=poly, strategy="sfc", k=2, intruder_position=Cell(5, 0)), grid
    )
    layout = sfc_layout(grid)
    assert len(layout.curves) == 1
    curve = layout.curves[0]
    assert [r.idx for r in state.robots] == [curve[0], curve[3]]
    assert [r.segment for r in state.robots] == [curve[0:3], curve[3:6]]


def test_sfc_too_few_robots(comb_grid):
    poly, grid = comb_grid
    need = min_robots("sfc", grid)
    assert need > 1
    with pytest.raises(TooFewRobots):
        init_trial(SimConfig(polygon=poly, strategy="sfc", k=need - 1), grid)
    init_trial(SimConfig(polygon=poly, strategy="sfc", k=need), grid)


def test_sfc_g_guards_sit_on_junction_doorways(comb_grid):
    poly, grid = comb_grid
    layout = sfc_layout(grid)
    k = min_robots("sfc_g", grid)
    state = init_trial(SimConfig(polygon=poly, strategy="sfc_g", k=k), grid)
    guards = [r for r in state.robots if r.role == "guard"]
    assert len(guards) == len(layout.rectangulation.juncs) == len(layout.guards)
    assert [g.idx for g in guards] == list(layout.guards)
    with pytest.raises(TooFewRobots):
        init_trial(SimConfig(polygon=poly, strategy="sfc_g", k=k - 1), grid)


def test_segments_jointly_cover_the_grid(comb_grid):
    poly, grid = comb_grid
    for k in (4, 5, 9):
        state = init_trial(SimConfig(polygon=poly, strategy="sfc", k=k, seed=k), grid)
        covered = set()
        for r in state.robots:
            covered.update(r.segment)
        assert covered == set(range(len(grid.cells)))


# ---------------------------------------------------------------- determinism


def test_repeated_trials_are_identical(comb_grid):
    poly, grid = comb_grid
    for strategy in ("rs", "crs", "baseline", "sfc"):
        cfg = SimConfig(
            polygon=poly, strategy=strategy, k=4, intruder="random", seed=11, trace=True
        )
        assert run_trial(cfg, grid) == run_trial(cfg, grid)


def test_shared_grid_matches_fresh_grid(comb_grid):
    poly, grid = comb_grid
    cfg = SimConfig(polygon=poly, strategy="crs", k=4, intruder="walk", seed=3, trace=True)
    warmup = SimConfig(polygon=poly, strategy="baseline", k=2, seed=9)
    run_trial(warmup, grid)  # populate path caches
    assert run_trial(cfg, grid) == run_trial(cfg)


def test_different_seeds_differ(comb_grid):
    poly, grid = comb_grid
    results = {
        run_trial(
            SimConfig(polygon=poly, strategy="rs", k=2, seed=s, intruder="random"), grid
        ).steps
        for s in range(12)
    }
    assert len(results) > 1


# ---------------------------------------------------------------- capture mechanics


def test_swap_capture_on_two_cell_corridor():
    cfg = SimConfig(
        polygon=corridor(2),
        strategy="baseline",
        k=1,
        intruder="walk",
        robot_positions=(Cell(0, 0),),
        intruder_position=Cell(1, 0),
        trace=True,
    )
    res = run_trial(cfg)
    assert res.captured and res.steps == 1
    assert res.trace[-1]["via_swap"]


def test_baseline_closes_distance_each_step():
    poly = comb_polygon((2, 3), spike_width=2, base_height=2, spike_gap=1)
    grid = rasterize(poly)
    cfg = SimConfig(
        polygon=poly,
        strategy="baseline",
        k=1,
        robot_positions=(grid.cells[0],),
        intruder_position=grid.cells[-1],
        trace=True,
    )
    res = run_trial(cfg, grid)
    assert res.captured
    lengths = []
    from polysearch.planning import shortest_indices

    for row in res.trace:
        r = grid.require(row["robots"][0])
        i = grid.require(row["intruder"])
        lengths.append(len(shortest_indices(grid, r, i)) - 1)
    assert lengths[0] == res.steps
    assert all(a - b == 1 for a, b in zip(lengths, lengths[1:]))


def test_static_corridor_capture_time_is_initial_distance():
    poly = corridor(20)
    grid = rasterize(poly)
    for seed in range(200):
        replay = random.Random(seed)
        r0 = replay.randrange(20)
        i0 = replay.randrange(20)
        res = run_trial(SimConfig(polygon=poly, strategy="baseline", k=1, seed=seed), grid)
        assert res.captured and res.steps == abs(r0 - i0)


def _corridor_chain_expectation(n: int) -> float:
    """Exact mean capture time: 1 pursuer vs a stay-or-step intruder.

    States are (robot, intruder) pairs; the robot deterministically steps
    toward the intruder, then the intruder picks uniformly among staying
    and its neighbors. Solving the absorbing chain gives the expected time
    from a uniform random start (co-located starts count as zero).
    """
    idx = {}
    for r in range(n):
        for i in range(n):
            if r != i:
                idx[(r, i)] = len(idx)
    a = np.zeros((len(idx), len(idx)))
    b = np.ones(len(idx))
    for (r, i), row in idx.items():
        a[row, row] = 1.0
        r2 = r + 1 if i > r else r - 1
        opts = [i] + [j for j in (i - 1, i + 1) if 0 <= j < n]
        for i2 in opts:
            if i2 == r2 or (i2 == r and r2 == i):
                continue
            a[row, idx[(r2, i2)]] -= 1.0 / len(opts)
    expect = np.linalg.solve(a, b)
    return float(sum(expect)) / (n * n)


def test_pursuit_times_match_the_markov_chain():
    n, trials = 20, 2500
    poly = corridor(n)
    grid = rasterize(poly)
    exact = _corridor_chain_expectation(n)
    steps = [
        run_trial(
            SimConfig(polygon=poly, strategy="baseline", k=1, intruder="random", seed=s), grid
        ).steps
        for s in range(trials)
    ]
    mean = sum(steps) / trials
    sem = np.std(steps, ddof=1) / trials**0.5
    assert abs(mean - exact) < 4 * sem


# ---------------------------------------------------------------- intruder models


def _draw_counts(model: str, samples: int) -> dict[Cell, int]:
    poly = P((0, 0), (3, 0), (3, 3), (0, 3))
    grid = rasterize(poly)
    center = grid.require(Cell(1, 1))
    state = init_trial(
        SimConfig(polygon=poly, strategy="rs", k=1, intruder=model, seed=5,
                  robot_positions=(Cell(0, 0),), intruder_position=Cell(1, 1)),
        grid,
    )
    counts: dict[Cell, int] = {}
    for _ in range(samples):
        state.intruder.idx = center
        cell = intruder_move(state)
        counts[cell] = counts.get(cell, 0) + 1
    return counts


def test_static_intruder_never_moves():
    counts = _draw_counts("static", 50)
    assert counts == {Cell(1, 1): 50}


def test_random_intruder_is_uniform_over_stay_and_neighbors():
    counts = _draw_counts("random", 5000)
    assert set(counts) == {Cell(1, 1), Cell(1, 2), Cell(2, 1), Cell(1, 0), Cell(0, 1)}
    assert stats.chisquare(list(counts.values())).pvalue > 0.01


def test_walking_intruder_is_uniform_over_neighbors():
    counts = _draw_counts("walk", 4000)
    assert set(counts) == {Cell(1, 2), Cell(2, 1), Cell(1, 0), Cell(0, 1)}
    assert stats.chisquare(list(counts.values())).pvalue > 0.01


# ---------------------------------------------------------------- policies


def test_patrol_ping_pong():
    poly = corridor(5)
    grid = rasterize(poly)
    state = init_trial(
        SimConfig(polygon=poly, strategy="sfc", k=1, intruder_position=Cell(4, 0)), grid
    )
    robot = state.robots[0]
    seen = [policy_sfc(state, robot).col for _ in range(12)]
    assert seen == [1, 2, 3, 4, 3, 2, 1, 0, 1, 2, 3, 4]


def test_single_cell_segment_stays_put():
    poly = corridor(3)
    grid = rasterize(poly)
    state = init_trial(
        SimConfig(polygon=poly, strategy="sfc", k=3, intruder_position=Cell(2, 0)), grid
    )
    for robot in state.robots:
        assert policy_sfc(state, robot) == grid.cells[robot.idx]
        assert len(robot.segment) == 1


def test_patrol_catches_static_intruder_within_one_sweep(comb_grid):
    poly, grid = comb_grid
    for seed in range(30):
        k = 4 + seed % 5
        cfg = SimConfig(polygon=poly, strategy="sfc", k=k, seed=seed)
        state = init_trial(cfg, grid)
        bound = max(len(r.segment) for r in state.robots) - 1
        res = run_trial(cfg, grid)
        assert res.captured and res.steps <= max(bound, 0)


def test_rs_two_cell_grid_forces_the_only_other_target():
    cfg = SimConfig(
        polygon=corridor(2),
        strategy="rs",
        k=1,
        robot_positions=(Cell(0, 0),),
        intruder_position=Cell(1, 0),
    )
    res = run_trial(cfg)
    assert res.captured and res.steps == 1


def test_rs_bumps_every_robot_every_step(comb_grid):
    poly, grid = comb_grid
    state = init_trial(SimConfig(polygon=poly, strategy="rs", k=3, seed=2), grid)
    for _ in range(7):
        if state.captured:
            break
        step(state)
    assert sum(state.cost.counts) == 3 * state.t


def test_crs_arrivals_wait_for_the_team(comb_grid):
    poly, grid = comb_grid
    state = init_trial(
        SimConfig(polygon=poly, strategy="crs", k=3, seed=2, intruder_position=grid.cells[-1]),
        grid,
    )
    waited = 0
    for _ in range(80):
        if state.captured:
            break
        arrived = [
            r.plan is None or r.plan_pos >= len(r.plan) - 1 for r in state.robots
        ]
        before = [r.idx for r in state.robots]
        step(state)
        if not all(arrived):
            for i, robot in enumerate(state.robots):
                if arrived[i] and state.robots[i].plan is not None:
                    assert robot.idx == before[i]
                    waited += 1
    assert waited > 0


def test_guards_never_move(comb_grid):
    poly, grid = comb_grid
    k = min_robots("sfc_g", grid)
    cfg = SimConfig(polygon=poly, strategy="sfc_g", k=k + 2, seed=1, intruder="walk", trace=True)
    state = init_trial(cfg, grid)
    guard_ids = [r.id for r in state.robots if r.role == "guard"]
    res = run_trial(cfg, grid)
    first = res.trace[0]["robots"]
    for row in res.trace:
        for gid in guard_ids:
            assert row["robots"][gid] == first[gid]


# ---------------------------------------------------------------- trace invariants


def test_trace_moves_are_legal(comb_grid):
    poly, grid = comb_grid
    for strategy in ("sfc", "rs", "crs", "baseline"):
        cfg = SimConfig(
            polygon=poly, strategy=strategy, k=4, seed=8, intruder="random", trace=True
        )
        res = run_trial(cfg, grid)
        for prev_row, row in zip(res.trace, res.trace[1:]):
            assert row["t"] == prev_row["t"] + 1
            movers = list(prev_row["robots"]) + [prev_row["intruder"]]
            landed = list(row["robots"]) + [row["intruder"]]
            for a, b in zip(movers, landed):
                assert b in grid.cell_set
                assert abs(a.col - b.col) + abs(a.row - b.row) <= 1


def test_step_after_capture_is_a_noop():
    cfg = SimConfig(
        polygon=corridor(3),
        strategy="baseline",
        k=1,
        robot_positions=(Cell(0, 0),),
        intruder_position=Cell(1, 0),
    )
    state = init_trial(cfg)
    step(state)
    assert state.captured and state.t == 1
    events = step(state)
    assert state.t == 1 and events.captured
