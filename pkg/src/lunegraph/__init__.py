"""Lune-based proximity graphs: construction, connected growth, metrics,
experiment sweeps and SVG rendering."""

from .experiments import (
    GrowthSweepRun,
    PowerLawFit,
    RandomSetConfig,
    SweepCurve,
    beta_grid,
    edge_loss_sweep,
    fit_power_law,
    format_growth_sweep_csv,
    generate_random_set,
    growth_sweep,
)
from .geometry import EXACT, Lune, Point, Tolerance, limit_strip_contains, lune_contains, lune_of
from .growth import (
    ACCEPTED,
    REJECTED_CONNECTIVITY,
    REJECTED_PROXIMITY,
    GrowthConfig,
    GrowthEvent,
    GrowthTrace,
    grow,
    try_candidate,
)
from .metrics import MetricsReport, compute_metrics, hop_diameter, randic_index
from .render import RenderStyle, render_svg
from .skeleton import (
    CONNECTIVITY_MODES,
    NO_ISOLATED,
    PATH_CONNECTED,
    GridIndex,
    InsertionDelta,
    PointSet,
    SkeletonGraph,
    apply_delta,
    build_indexed,
    build_naive,
    insert_point,
    is_connected,
    is_stable,
    load_edges,
    load_points,
    save_edges,
    save_points,
    stability_violation,
)

__version__ = "0.1.0"
