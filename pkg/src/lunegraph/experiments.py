"""Experiment protocols: random sets, edge-loss sweeps, power-law fits,
growth sweeps over (beta, dtheta) grids.

Random sets are produced by seeded dart throwing: uniform darts in the
disc (rejection from the bounding square) that are discarded when closer
than the minimum separation to an accepted point.  The generator is numpy
PCG64, fixed so identical seeds replicate byte-for-byte across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .growth import GrowthConfig, grow
from .metrics import MetricsReport, compute_metrics
from .skeleton import PointSet, _inside, _sq_dist_matrix, build_naive

RNG_ALGORITHM = "numpy-PCG64"
REJECTION_LIMIT = 10**6


@dataclass(frozen=True)
class RandomSetConfig:
    n: int
    domain_radius: float = 250.0
    min_separation: float = 5.0
    rng_seed: int = 0

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not (math.isfinite(self.domain_radius) and self.domain_radius > 0.0):
            raise ValueError(f"domain_radius must be positive, got {self.domain_radius}")
        if not (math.isfinite(self.min_separation) and self.min_separation >= 0.0):
            raise ValueError(f"min_separation must be >= 0, got {self.min_separation}")


def generate_random_set(cfg: RandomSetConfig) -> PointSet:
    """Seeded dart throwing until n points are placed.

    Raises once REJECTION_LIMIT consecutive darts fail (out of the disc or
    too close to a placed point), which signals an infeasible density.
    """
    cfg.validate()
    rng = np.random.Generator(np.random.PCG64(cfg.rng_seed))
    radius = cfg.domain_radius
    r_sq = radius * radius
    sep_sq = cfg.min_separation * cfg.min_separation
    xs = np.empty(cfg.n)
    ys = np.empty(cfg.n)
    placed = 0
    rejected = 0
    while placed < cfg.n:
        darts = rng.uniform(-radius, radius, size=(256, 2))
        dx = darts[:, 0]
        dy = darts[:, 1]
        # darts are screened in batch but consumed strictly in order, so the
        # result is identical to testing them one at a time
        ok = dx * dx + dy * dy <= r_sq
        if placed and sep_sq > 0.0:
            ddx = dx[:, None] - xs[None, :placed]
            ddy = dy[:, None] - ys[None, :placed]
            ok &= ~((ddx * ddx + ddy * ddy) < sep_sq).any(axis=1)
        k = 0
        while k < len(darts) and placed < cfg.n:
            hits = np.nonzero(ok[k:])[0]
            if hits.size == 0:
                rejected += len(darts) - k
                break
            j = k + int(hits[0])
            rejected += j - k
            if rejected >= REJECTION_LIMIT:
                break
            xs[placed] = dx[j]
            ys[placed] = dy[j]
            placed += 1
            rejected = 0
            if sep_sq > 0.0 and j + 1 < len(darts):
                ddx = dx[j + 1:] - dx[j]
                ddy = dy[j + 1:] - dy[j]
                ok[j + 1:] &= ~((ddx * ddx + ddy * ddy) < sep_sq)
            k = j + 1
        if rejected >= REJECTION_LIMIT:
            raise ValueError(
                f"density infeasible: {cfg.n} points at separation "
                f"{cfg.min_separation} in disc radius {cfg.domain_radius}"
            )
    return PointSet(zip(xs, ys))


@dataclass
class SweepCurve:
    """(beta, value) samples with strictly increasing betas."""

    samples: list
    label: str = ""

    CSV_HEADER = "beta,value"

    def __post_init__(self):
        betas = [b for b, _ in self.samples]
        if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise ValueError("sweep betas must be strictly increasing")

    def betas(self):
        return [b for b, _ in self.samples]

    def values(self):
        return [v for _, v in self.samples]

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for b, v in self.samples:
            lines.append(f"{b!r},{v!r}")
        return "\n".join(lines) + "\n"


def beta_grid(beta_min: float, beta_max: float, step: float):
    if not (1.0 <= beta_min < beta_max):
        raise ValueError(f"need 1 <= beta_min < beta_max, got [{beta_min}, {beta_max}]")
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    count = int(math.floor((beta_max - beta_min) / step + 1e-9)) + 1
    return [beta_min + i * step for i in range(count)]


def edge_loss_sweep(ps: PointSet, beta_min: float, beta_max: float, step: float) -> SweepCurve:
    """Edge count of the skeleton at every beta on the grid.

    Only edges surviving the previous beta are re-tested (lunes nest, so
    nothing else can reappear); the result is identical to rebuilding from
    scratch at every beta and is non-increasing by construction.
    """
    betas = beta_grid(beta_min, beta_max, step)
    n = len(ps)
    base = build_naive(ps, betas[0])
    survivors = np.array(base.sorted_edges(), dtype=np.intp).reshape(-1, 2)
    samples = [(betas[0], float(len(survivors)))]
    dist = _sq_dist_matrix(ps.coords) if n else None
    for b in betas[1:]:
        if len(survivors):
            t = b / 2.0
            ei = survivors[:, 0]
            ej = survivors[:, 1]
            inside = _inside(dist[ei], dist[ej], dist[ei, ej][:, None], t, 0.0)
            rows = np.arange(len(survivors))
            inside[rows, ei] = False
            inside[rows, ej] = False
            survivors = survivors[~inside.any(axis=1)]
        samples.append((b, float(len(survivors))))
    return SweepCurve(samples, label=f"edges(n={n})")


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    coefficient: float
    r_squared: float

    CSV_HEADER = "exponent,coefficient,r_squared"

    def csv_row(self) -> str:
        return f"{self.exponent!r},{self.coefficient!r},{self.r_squared!r}"


def fit_power_law(curve: SweepCurve) -> PowerLawFit:
    """Least squares of log(value) on log(beta) over the positive samples.

    A zero-variance response fits the constant exactly: exponent 0 and
    r_squared 1 by convention.
    """
    positive = [(b, v) for b, v in curve.samples if v > 0.0]
    if len(positive) < 3:
        raise ValueError(f"need at least 3 positive samples, got {len(positive)}")
    values = np.array([v for _, v in positive])
    if values.max() == values.min():
        return PowerLawFit(0.0, float(values[0]), 1.0)
    lx = np.log(np.array([b for b, _ in positive]))
    ly = np.log(values)
    mx = lx.mean()
    my = ly.mean()
    slope = float(((lx - mx) * (ly - my)).sum() / ((lx - mx) ** 2).sum())
    intercept = my - slope * mx
    ss_res = float(((ly - (intercept + slope * lx)) ** 2).sum())
    ss_tot = float(((ly - my) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(slope, float(math.exp(intercept)), min(1.0, max(0.0, r2)))


@dataclass
class GrowthSweepRun:
    """One grown configuration with its metrics, or an error marker."""

    config: GrowthConfig
    report: MetricsReport | None
    error: str | None = None


GROWTH_SWEEP_CSV_HEADER = (
    "beta,dtheta,nodes,edges,avg_degree,total_length,diam_hops,diam_nodes,randic,error"
)


def growth_sweep(base: GrowthConfig, betas, dthetas):
    """Grow and measure every (beta, dtheta) combination.

    Runs are independent; a failing run is reported with its error message
    instead of aborting the sweep.  Order: betas outer, dthetas inner.
    """
    out = []
    for b in betas:
        for d in dthetas:
            cfg = replace(base, beta=b, dtheta=d)
            try:
                ps, g, _ = grow(cfg)
                out.append(GrowthSweepRun(cfg, compute_metrics(ps, g)))
            except Exception as exc:  # noqa: BLE001 - marker row per contract
                out.append(GrowthSweepRun(cfg, None, str(exc)))
    return out


def format_growth_sweep_csv(runs) -> str:
    lines = [GROWTH_SWEEP_CSV_HEADER]
    for run in runs:
        cfg = run.config
        if run.report is None:
            err = run.error.replace('"', "'")
            if "," in err or "\n" in err:
                err = '"' + err.replace("\n", " ") + '"'
            lines.append(f"{cfg.beta!r},{cfg.dtheta!r},,,,,,,,{err}")
        else:
            r = run.report
            lines.append(
                f"{cfg.beta!r},{cfg.dtheta!r},{r.nodes},{r.edges},"
                f"{r.average_degree!r},{r.total_edge_length!r},"
                f"{r.diameter_hops},{r.diameter_nodes},{r.randic_index!r},"
            )
    return "\n".join(lines) + "\n"
