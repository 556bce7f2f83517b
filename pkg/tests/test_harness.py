"""Sweep harness and chart tests.

The load-bearing property is reproducibility: a sweep must produce the
same CSV bytes no matter how many worker processes share it, because the
per-trial seeds depend only on the sweep layout.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

import pytest

from polysearch.errors import EmptyInput
from polysearch.harness import (
    InstanceSpec,
    SummaryRow,
    SweepSpec,
    expand_cells,
    read_csv,
    rows_to_csv,
    run_sweep,
    summarize,
    trial_seed,
    write_csv,
    PRESETS,
)
from polysearch.plots import bar_chart, line_plot
from polysearch.polygen import comb_polygon
from polysearch.sim import TrialResult

from conftest import P


def _result(steps: int, captured: bool = True) -> TrialResult:
    return TrialResult(
        captured=captured, steps=steps, strategy="rs", intruder="static", k=2,
        seed=0, instance="tiny",
    )


def tiny_spec(trials: int = 4) -> SweepSpec:
    poly = comb_polygon((2, 3), spike_width=1, base_height=2, spike_gap=1)
    return SweepSpec(
        instances=(InstanceSpec("tiny", poly),),
        strategies=("rs", "baseline", "sfc"),
        ks=(1, 4),
        intruders=("static", "walk"),
        trials=trials,
        base_seed=9,
    )


# ---------------------------------------------------------------- summarize


def test_summarize_equal_steps():
    row = summarize([_result(10), _result(10), _result(10)])
    assert row.trials == 3 and row.captures == 3
    assert row.capture_rate == 1.0
    assert row.mean_steps == 10.0 and row.sd_steps == 0.0 and row.ci95 == 0.0


def test_summarize_two_point_spread():
    row = summarize([_result(8), _result(12)])
    assert row.mean_steps == 10.0
    assert row.sd_steps == pytest.approx(2.8284271, abs=1e-6)
    assert row.ci95 == pytest.approx(1.96 * 2.8284271 / math.sqrt(2), abs=1e-5)


def test_summarize_counts_failures_in_rate_only():
    row = summarize([_result(5), _result(7), _result(999, captured=False)])
    assert row.trials == 3 and row.captures == 2
    assert row.capture_rate == pytest.approx(2 / 3)
    assert row.mean_steps == 6.0


def test_summarize_no_captures_gives_nan_steps():
    row = summarize([_result(50, captured=False)])
    assert row.capture_rate == 0.0
    assert math.isnan(row.mean_steps) and math.isnan(row.sd_steps)


def test_summarize_empty_rejected():
    with pytest.raises(EmptyInput):
        summarize([])


# ---------------------------------------------------------------- seeds and cells


def test_trial_seeds_are_distinct_and_stable():
    seeds = {trial_seed(0, c, t) for c in range(40) for t in range(40)}
    assert len(seeds) == 1600
    assert all(0 <= s < 2**64 for s in seeds)
    assert trial_seed(0, 0, 0) == trial_seed(0, 0, 0)
    assert trial_seed(1, 0, 0) != trial_seed(0, 0, 0)


def test_cell_order_is_instance_strategy_intruder_k():
    spec = tiny_spec()
    cells = expand_cells(spec)
    assert [c.index for c in cells] == list(range(12))
    assert [(c.strategy, c.intruder, c.k) for c in cells[:4]] == [
        ("rs", "static", 1),
        ("rs", "static", 4),
        ("rs", "walk", 1),
        ("rs", "walk", 4),
    ]


def test_expand_rejects_unknown_names():
    spec = tiny_spec()
    bad = SweepSpec(spec.instances, ("warp",), (1,))
    with pytest.raises(ValueError):
        expand_cells(bad)
    with pytest.raises(EmptyInput):
        expand_cells(SweepSpec((), ("rs",), (1,)))


# ---------------------------------------------------------------- sweeps


def test_tiny_sweep_runs_and_flags_feasibility():
    spec = tiny_spec()
    rows = run_sweep(spec)
    assert len(rows) == 12
    by = {(r.strategy, r.intruder, r.k): r for r in rows}
    # one patrol robot cannot cover a multi-rectangle comb
    assert not by[("sfc", "static", 1)].feasible
    assert by[("sfc", "static", 1)].trials == 0
    assert by[("sfc", "static", 4)].feasible
    for (strategy, intruder, k), row in by.items():
        if row.feasible:
            assert row.trials == spec.trials
            assert row.captures > 0


def test_worker_counts_agree_byte_for_byte():
    spec = tiny_spec(trials=3)
    serial = rows_to_csv(run_sweep(spec, workers=1))
    parallel = rows_to_csv(run_sweep(spec, workers=2))
    assert serial == parallel


def test_progress_callback_sees_every_cell():
    spec = tiny_spec(trials=2)
    seen = []
    run_sweep(spec, progress=lambda done, total: seen.append((done, total)))
    assert seen == [(i + 1, 12) for i in range(12)]


def test_presets_expand():
    for name, make in PRESETS.items():
        spec = make()
        cells = expand_cells(spec)
        assert len(cells) > 0
        assert all(c.instance.id for c in cells)


# ---------------------------------------------------------------- CSV


def test_csv_round_trip(tmp_path):
    rows = run_sweep(tiny_spec(trials=3))
    path = str(tmp_path / "sweep.csv")
    write_csv(rows, path)
    again = read_csv(path)
    assert rows_to_csv(again) == rows_to_csv(rows)
    assert [r.k for r in again] == [r.k for r in rows]


def test_csv_rejects_foreign_files(tmp_path):
    path = str(tmp_path / "junk.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("a,b,c\n1,2,3\n")
    with pytest.raises(EmptyInput):
        read_csv(path)


# ---------------------------------------------------------------- charts


def _rows_for_plot() -> list[SummaryRow]:
    spec = tiny_spec(trials=4)
    return run_sweep(spec)


def _count(svg: str, tag: str, cls: str | None = None) -> int:
    root = ET.fromstring(svg)
    nodes = [n for n in root.iter() if n.tag.rpartition("}")[2] == tag]
    if cls is None:
        return len(nodes)
    return sum(1 for n in nodes if n.get("class") == cls)


def test_line_plot_structure():
    rows = _rows_for_plot()
    svg = line_plot(rows, title="tiny & small <sweep>")
    plottable = {(r.strategy, r.intruder) for r in rows if r.feasible and r.captures > 0}
    assert _count(svg, "polyline", "line") == len(plottable)
    assert _count(svg, "polygon", "band") == len(plottable)
    assert "tiny &amp; small &lt;sweep&gt;" in svg
    ET.fromstring(svg)  # well-formed


def test_bar_chart_structure():
    rows = _rows_for_plot()
    svg = bar_chart(rows, title="bars")
    plottable = [r for r in rows if r.feasible and r.captures > 0]
    assert _count(svg, "rect", "bar") == len(plottable)
    ET.fromstring(svg)


def test_charts_need_plottable_rows():
    rows = [
        SummaryRow("x", "sfc", "static", 1, 0, 0, 0.0, math.nan, math.nan, math.nan, False)
    ]
    with pytest.raises(EmptyInput):
        line_plot(rows)
    with pytest.raises(EmptyInput):
        bar_chart(rows)
