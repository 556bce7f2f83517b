"""Monte-Carlo sweeps over strategies, team sizes and intruder models.

A sweep is a cross product of instances x strategies x intruder models x
team sizes; each combination runs a fixed number of independent trials.
Per-trial seeds are derived by hashing (base seed, combination index,
trial index), so results are reproducible and independent of how the work
is split across processes. Summaries go to CSV; means and spreads cover
captured trials only, while the capture rate counts everything.
"""

from __future__ import annotations

import csv
import hashlib
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import EmptyInput
from .geometry import Cell, GridGraph, OrthoPolygon, polygon_from_cells, rasterize, validate_polygon
from .polygen import comb_polygon
from .sim import INTRUDER_MODELS, STRATEGIES, SimConfig, TrialResult, min_robots, run_trial

CSV_COLUMNS = (
    "instance",
    "strategy",
    "intruder",
    "k",
    "trials",
    "captures",
    "capture_rate",
    "mean_steps",
    "sd_steps",
    "ci95",
    "feasible",
)


@dataclass(frozen=True)
class InstanceSpec:
    id: str
    polygon: OrthoPolygon
    rect_seed: int = 0


@dataclass(frozen=True)
class SweepSpec:
    instances: tuple[InstanceSpec, ...]
    strategies: tuple[str, ...]
    ks: tuple[int, ...]
    intruders: tuple[str, ...] = ("static",)
    trials: int = 100
    base_seed: int = 0
    max_steps: int | None = None


@dataclass(frozen=True)
class SweepCell:
    """One parameter combination of a sweep, in canonical order."""

    index: int
    instance: InstanceSpec
    strategy: str
    intruder: str
    k: int


@dataclass(frozen=True)
class SummaryRow:
    instance: str
    strategy: str
    intruder: str
    k: int
    trials: int
    captures: int
    capture_rate: float
    mean_steps: float
    sd_steps: float
    ci95: float
    feasible: bool


def trial_seed(base_seed: int, cell_index: int, trial_index: int) -> int:
    """Stable 64-bit seed for one trial of one sweep cell."""
    key = f"{base_seed}|{cell_index}|{trial_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def expand_cells(spec: SweepSpec) -> list[SweepCell]:
    """Canonical cell order: instance, then strategy, intruder, team size."""
    if not spec.instances or not spec.strategies or not spec.ks:
        raise EmptyInput("sweep needs at least one instance, strategy and team size")
    for s in spec.strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    for m in spec.intruders:
        if m not in INTRUDER_MODELS:
            raise ValueError(f"unknown intruder model {m!r}")
    if spec.trials < 1:
        raise ValueError("trials must be positive")
    cells = []
    index = 0
    for inst in spec.instances:
        for strategy in spec.strategies:
            for intruder in spec.intruders:
                for k in spec.ks:
                    cells.append(SweepCell(index, inst, strategy, intruder, k))
                    index += 1
    return cells


def summarize(results: Sequence[TrialResult]) -> SummaryRow:
    """Collapse one cell's trials; step statistics cover captures only."""
    if not results:
        raise EmptyInput("no trials to summarize")
    first = results[0]
    captured = [float(r.steps) for r in results if r.captured]
    n = len(captured)
    if n > 0:
        mean = statistics.fmean(captured)
        sd = statistics.stdev(captured) if n > 1 else 0.0
        ci95 = 1.96 * sd / math.sqrt(n)
    else:
        mean = sd = ci95 = math.nan
    return SummaryRow(
        instance=first.instance,
        strategy=first.strategy,
        intruder=first.intruder,
        k=first.k,
        trials=len(results),
        captures=n,
        capture_rate=n / len(results),
        mean_steps=mean,
        sd_steps=sd,
        ci95=ci95,
        feasible=True,
    )


_GRIDS: dict[tuple[str, OrthoPolygon], GridGraph] = {}


def _instance_grid(inst: InstanceSpec) -> GridGraph:
    key = (inst.id, inst.polygon)
    grid = _GRIDS.get(key)
    if grid is None:
        grid = rasterize(inst.polygon)
        _GRIDS[key] = grid
    return grid


def _infeasible_row(cell: SweepCell) -> SummaryRow:
    return SummaryRow(
        instance=cell.instance.id,
        strategy=cell.strategy,
        intruder=cell.intruder,
        k=cell.k,
        trials=0,
        captures=0,
        capture_rate=0.0,
        mean_steps=math.nan,
        sd_steps=math.nan,
        ci95=math.nan,
        feasible=False,
    )


def run_cell(cell: SweepCell, trials: int, base_seed: int, max_steps: int | None) -> SummaryRow:
    """Run one sweep cell inline (shared by serial and worker paths)."""
    grid = _instance_grid(cell.instance)
    if cell.k < min_robots(cell.strategy, grid, cell.instance.rect_seed):
        return _infeasible_row(cell)
    results = []
    for trial in range(trials):
        cfg = SimConfig(
            polygon=cell.instance.polygon,
            strategy=cell.strategy,
            k=cell.k,
            intruder=cell.intruder,
            max_steps=max_steps,
            seed=trial_seed(base_seed, cell.index, trial),
            rect_seed=cell.instance.rect_seed,
            instance_id=cell.instance.id,
        )
        results.append(run_trial(cfg, grid))
    return summarize(results)


def _cell_worker(args: tuple[SweepCell, int, int, int | None]) -> tuple[int, SummaryRow]:
    cell, trials, base_seed, max_steps = args
    return cell.index, run_cell(cell, trials, base_seed, max_steps)


def run_sweep(
    spec: SweepSpec,
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> list[SummaryRow]:
    """Run every cell; row order and content do not depend on `workers`."""
    cells = expand_cells(spec)
    jobs = [(c, spec.trials, spec.base_seed, spec.max_steps) for c in cells]
    rows: list[SummaryRow | None] = [None] * len(cells)
    if workers <= 1:
        for i, job in enumerate(jobs):
            rows[job[0].index] = run_cell(*job)
            if progress is not None:
                progress(i + 1, len(cells))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for done, (index, row) in enumerate(pool.map(_cell_worker, jobs)):
                rows[index] = row
                if progress is not None:
                    progress(done + 1, len(cells))
    return [row for row in rows if row is not None]


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else f"{x:.4f}"


def rows_to_csv(rows: Sequence[SummaryRow]) -> str:
    """Fixed-format CSV so equal sweeps serialize byte-for-byte equal."""
    out = [",".join(CSV_COLUMNS)]
    for r in rows:
        out.append(
            ",".join(
                (
                    r.instance,
                    r.strategy,
                    r.intruder,
                    str(r.k),
                    str(r.trials),
                    str(r.captures),
                    f"{r.capture_rate:.4f}",
                    _fmt(r.mean_steps),
                    _fmt(r.sd_steps),
                    _fmt(r.ci95),
                    "true" if r.feasible else "false",
                )
            )
        )
    return "\n".join(out) + "\n"


def write_csv(rows: Sequence[SummaryRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))


def read_csv(path: str) -> list[SummaryRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise EmptyInput(f"{path} is not a sweep summary file")
        rows = []
        for rec in reader:
            rows.append(
                SummaryRow(
                    instance=rec["instance"],
                    strategy=rec["strategy"],
                    intruder=rec["intruder"],
                    k=int(rec["k"]),
                    trials=int(rec["trials"]),
                    captures=int(rec["captures"]),
                    capture_rate=float(rec["capture_rate"]),
                    mean_steps=float(rec["mean_steps"] or "nan"),
                    sd_steps=float(rec["sd_steps"] or "nan"),
                    ci95=float(rec["ci95"] or "nan"),
                    feasible=rec["feasible"] == "true",
                )
            )
    return rows


# ---------------------------------------------------------------- presets


def _scaled(poly: OrthoPolygon, num: int, den: int) -> OrthoPolygon:
    verts = []
    for x, y in poly.vertices:
        if (x * num) % den or (y * num) % den:
            raise ValueError(f"scale {num}/{den} breaks integrality at ({x}, {y})")
        verts.append((x * num // den, y * num // den))
    return validate_polygon(verts)


def _two_sided_comb(
    base_width: int,
    base_height: int,
    spike_width: int,
    spike_gap: int,
    up: Sequence[int],
    down: Sequence[int],
) -> OrthoPolygon:
    """Comb with teeth on both long sides; a zero depth skips that slot."""
    cells = {Cell(x, y) for x in range(base_width) for y in range(base_height)}
    period = spike_width + spike_gap
    for slot, depth in enumerate(up):
        x0 = spike_gap + slot * period
        for x in range(x0, x0 + spike_width):
            for y in range(base_height, base_height + depth):
                cells.add(Cell(x, y))
    for slot, depth in enumerate(down):
        x0 = spike_gap + slot * period
        for x in range(x0, x0 + spike_width):
            for y in range(-depth, 0):
                cells.add(Cell(x, y))
    return polygon_from_cells(cells)


def preset_spikes4() -> SweepSpec:
    """Team-size sweep on one 4-tooth comb, every strategy, two intruders."""
    poly = comb_polygon((8, 10, 12, 10), spike_width=2, base_height=4, spike_gap=2)
    return SweepSpec(
        instances=(InstanceSpec("spikes4", poly),),
        strategies=STRATEGIES,
        ks=tuple(range(2, 61, 3)),
        intruders=("static", "random"),
        trials=100,
    )


def preset_shapes() -> SweepSpec:
    """Three equal-area combs (176 cells) with different tooth layouts."""
    p0 = comb_polygon((8, 10, 8, 10, 8), spike_width=2, base_height=4, spike_gap=2)
    p1 = comb_polygon((4, 14, 8, 14, 4), spike_width=2, base_height=4, spike_gap=2)
    p2 = _two_sided_comb(22, 4, 2, 2, up=(10, 0, 10, 0, 10), down=(0, 7, 0, 7, 0))
    return SweepSpec(
        instances=(
            InstanceSpec("shape0", p0),
            InstanceSpec("shape1", p1),
            InstanceSpec("shape2", p2),
        ),
        strategies=STRATEGIES,
        ks=(13,),
        intruders=("static", "random"),
        trials=100,
    )


def preset_areas() -> SweepSpec:
    """The same comb at three scales (176, 396 and 704 cells), fixed team."""
    base = comb_polygon((8, 10, 8, 10, 8), spike_width=2, base_height=4, spike_gap=2)
    return SweepSpec(
        instances=(
            InstanceSpec("area176", base),
            InstanceSpec("area396", _scaled(base, 3, 2)),
            InstanceSpec("area704", _scaled(base, 2, 1)),
        ),
        strategies=STRATEGIES,
        ks=(10,),
        intruders=("static", "random"),
        trials=100,
    )


def preset_beta() -> SweepSpec:
    """Equal-area combs (160 cells) with two to six teeth, fixed team."""
    shapes = {
        "beta2": comb_polygon((15, 15), spike_width=2, base_height=10, spike_gap=2),
        "beta3": comb_polygon((12, 13, 13), spike_width=2, base_height=6, spike_gap=2),
        "beta4": comb_polygon((9, 9, 9, 8), spike_width=2, base_height=5, spike_gap=2),
        "beta5": comb_polygon((7, 7, 8, 7, 7), spike_width=2, base_height=4, spike_gap=2),
        "beta6": comb_polygon((5, 5, 4, 4, 5, 5), spike_width=2, base_height=4, spike_gap=2),
    }
    return SweepSpec(
        instances=tuple(InstanceSpec(name, poly) for name, poly in shapes.items()),
        strategies=STRATEGIES,
        ks=(25,),
        intruders=("static", "random"),
        trials=100,
    )


PRESETS: dict[str, Callable[[], SweepSpec]] = {
    "spikes4": preset_spikes4,
    "shapes": preset_shapes,
    "areas": preset_areas,
    "beta": preset_beta,
}
