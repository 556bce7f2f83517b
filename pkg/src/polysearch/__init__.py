"""Multi-robot search for an intruder in grid-decomposed orthogonal polygons.

The package covers the full pipeline: polygon validation and
rasterization, random polygon generation, comb-shaped hard instances and
their schedules, rectangular decomposition, space-filling patrol curves,
cost-aware path planning, a discrete-time pursuit simulation, and a
Monte-Carlo sweep harness with CSV and SVG reporting.
"""

from .decomposition import (
    Junction,
    Rectangle,
    Rectangulation,
    allocate_robots,
    junctions,
    rectangulate,
)
from .errors import PolySearchError
from .geometry import (
    Cell,
    GridGraph,
    OrthoPolygon,
    neighbors,
    polygon_from_cells,
    rasterize,
    read_polygon_file,
    validate_polygon,
    write_polygon_file,
)
from .harness import (
    PRESETS,
    InstanceSpec,
    SummaryRow,
    SweepSpec,
    read_csv,
    run_sweep,
    summarize,
    write_csv,
)
from .planning import CostMap, astar, bump_cost, costs_to_target, dijkstra, hungarian
from .plots import bar_chart, line_plot, write_svg
from .polygen import (
    ThreePartitionInstance,
    build_comb,
    comb_polygon,
    count_spikes,
    inflate_cut,
    simulate_comb_sweep,
    verify_partition_schedule,
)
from .sfc import Curve, assign_segments, gilbert_curve, place_curve, repair_curve
from .sim import (
    INTRUDER_MODELS,
    STRATEGIES,
    SimConfig,
    TrialResult,
    init_trial,
    min_robots,
    run_trial,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "CostMap",
    "Curve",
    "GridGraph",
    "INTRUDER_MODELS",
    "InstanceSpec",
    "Junction",
    "OrthoPolygon",
    "PolySearchError",
    "PRESETS",
    "Rectangle",
    "Rectangulation",
    "STRATEGIES",
    "SimConfig",
    "SummaryRow",
    "SweepSpec",
    "ThreePartitionInstance",
    "TrialResult",
    "allocate_robots",
    "assign_segments",
    "astar",
    "bar_chart",
    "build_comb",
    "bump_cost",
    "comb_polygon",
    "costs_to_target",
    "count_spikes",
    "dijkstra",
    "gilbert_curve",
    "hungarian",
    "inflate_cut",
    "init_trial",
    "junctions",
    "line_plot",
    "min_robots",
    "neighbors",
    "place_curve",
    "polygon_from_cells",
    "rasterize",
    "read_csv",
    "read_polygon_file",
    "rectangulate",
    "repair_curve",
    "run_sweep",
    "run_trial",
    "simulate_comb_sweep",
    "step",
    "summarize",
    "validate_polygon",
    "verify_partition_schedule",
    "write_csv",
    "write_polygon_file",
    "write_svg",
]
