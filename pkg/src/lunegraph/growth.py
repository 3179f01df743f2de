"""Grow connected skeletons by spiral candidate sweeps.

Starting from a single seed point, candidate positions are visited on
rings of increasing radius (angle stepped by dtheta degrees, radius by dr
once the angle wraps).  A candidate joins the set iff it keeps at least
delta away from every current point and the skeleton of the enlarged set
is still connected under the configured criterion.  Growth is fully
deterministic: candidate coordinates are recomputed from (r, theta) every
time, never accumulated.

The skeleton is maintained incrementally through insertion deltas; a
rejected candidate leaves no trace on the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Point
from .skeleton import (
    CONNECTIVITY_MODES,
    NO_ISOLATED,
    PATH_CONNECTED,
    PointSet,
    SkeletonGraph,
    _as_point,
    _inside,
    _partner_ids,
    apply_delta,
    insert_point,
    is_connected,
)

ACCEPTED = "accepted"
REJECTED_PROXIMITY = "rejected-proximity"
REJECTED_CONNECTIVITY = "rejected-connectivity"


@dataclass(frozen=True)
class GrowthConfig:
    """Parameters of the spiral growth procedure.

    Defaults are the reference experiment values: first ring at r0=5,
    ring step dr=0.5, minimum separation delta=2.5, stop radius r_max=90.
    dtheta has no natural default and must be chosen per run.

    The default connectivity criterion is path-connected.  The looser
    no-isolated-nodes criterion admits candidates whose edge removals cut
    a bridge, which fragments the graph into short chains once beta is
    large; path-connected keeps the tree and cross morphologies in one
    piece and the average degree near 2.  When strict_no_edge_loss is
    set, a candidate that would destroy any existing edge is rejected
    even if connectivity would survive.
    """

    beta: float
    dtheta: float
    seed: Point = Point(0.0, 0.0)
    r0: float = 5.0
    dr: float = 0.5
    delta: float = 2.5
    r_max: float = 90.0
    connectivity_mode: str = PATH_CONNECTED
    strict_no_edge_loss: bool = False

    def validate(self) -> None:
        if not isinstance(self.seed, Point):
            raise ValueError(f"seed must be a Point, got {type(self.seed).__name__}")
        if not (math.isfinite(self.beta) and self.beta >= 1.0):
            raise ValueError(f"unsupported beta: {self.beta} (must be finite and >= 1)")
        if not (0.0 < self.dtheta <= 360.0):
            raise ValueError(f"dtheta must be in (0, 360], got {self.dtheta}")
        for name in ("r0", "dr", "delta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v}")
        if not math.isfinite(self.r_max):
            raise ValueError(f"r_max must be finite, got {self.r_max}")
        if self.connectivity_mode not in CONNECTIVITY_MODES:
            raise ValueError(f"unknown connectivity mode: {self.connectivity_mode!r}")

    def to_config_text(self) -> str:
        """key=value lines the CLI's --config option accepts."""
        return (
            f"beta={self.beta!r}\n"
            f"dtheta={self.dtheta!r}\n"
            f"seed_x={self.seed.x!r}\n"
            f"seed_y={self.seed.y!r}\n"
            f"r0={self.r0!r}\n"
            f"dr={self.dr!r}\n"
            f"delta={self.delta!r}\n"
            f"r_max={self.r_max!r}\n"
            f"mode={self.connectivity_mode}\n"
            f"strict={'true' if self.strict_no_edge_loss else 'false'}\n"
        )


@dataclass(frozen=True)
class GrowthEvent:
    r: float
    theta: float
    candidate: Point
    decision: str
    edges_after: int


@dataclass
class GrowthTrace:
    """Accept/reject log, one event per visited candidate, in visit order."""

    events: list = field(default_factory=list)

    CSV_HEADER = "r,theta,x,y,decision,edges_after"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for e in self.events:
            lines.append(
                f"{e.r!r},{e.theta!r},{e.candidate.x!r},{e.candidate.y!r},"
                f"{e.decision},{e.edges_after}"
            )
        return "\n".join(lines) + "\n"

    def accepted(self):
        return [e for e in self.events if e.decision == ACCEPTED]


class _GrowState:
    """Mutable coordinates/edges mirror of the growing skeleton."""

    def __init__(self, seed: Point):
        cap = 1024
        self.xs = np.empty(cap)
        self.ys = np.empty(cap)
        self.xs[0] = seed.x
        self.ys[0] = seed.y
        self.n = 1
        self.points = [seed]
        ecap = 4096
        self.ei = np.empty(ecap, dtype=np.intp)
        self.ej = np.empty(ecap, dtype=np.intp)
        self.edsq = np.empty(ecap)
        self.m = 0
        self.adjacency = [set()]

    def d2_to(self, px: float, py: float) -> np.ndarray:
        dx = self.xs[: self.n] - px
        dy = self.ys[: self.n] - py
        return dx * dx + dy * dy

    def _grow_points(self) -> None:
        if self.n == len(self.xs):
            self.xs = np.concatenate([self.xs, np.empty(len(self.xs))])
            self.ys = np.concatenate([self.ys, np.empty(len(self.ys))])

    def _grow_edges(self) -> None:
        if self.m == len(self.ei):
            self.ei = np.concatenate([self.ei, np.empty(len(self.ei), dtype=np.intp)])
            self.ej = np.concatenate([self.ej, np.empty(len(self.ej), dtype=np.intp)])
            self.edsq = np.concatenate([self.edsq, np.empty(len(self.edsq))])

    def apply(self, p: Point, added, removed_pos, d2) -> None:
        # drop removed edges by swap-remove, highest position first
        for pos in sorted((int(q) for q in removed_pos), reverse=True):
            a, b = int(self.ei[pos]), int(self.ej[pos])
            self.adjacency[a].discard(b)
            self.adjacency[b].discard(a)
            last = self.m - 1
            self.ei[pos] = self.ei[last]
            self.ej[pos] = self.ej[last]
            self.edsq[pos] = self.edsq[last]
            self.m = last
        new_id = self.n
        self._grow_points()
        self.xs[new_id] = p.x
        self.ys[new_id] = p.y
        self.n += 1
        self.points.append(p)
        self.adjacency.append(set())
        for q in added:
            self._grow_edges()
            self.ei[self.m] = q
            self.ej[self.m] = new_id
            self.edsq[self.m] = d2[q]
            self.m += 1
            self.adjacency[q].add(new_id)
            self.adjacency[new_id].add(q)

    def edge_tuples(self):
        return [
            (int(min(a, b)), int(max(a, b)))
            for a, b in zip(self.ei[: self.m], self.ej[: self.m])
        ]


def _evaluate(state: _GrowState, cfg: GrowthConfig, px: float, py: float):
    """Decide a candidate; returns (decision, added_ids, removed_positions, d2)."""
    d2 = state.d2_to(px, py)
    if (d2 <= cfg.delta * cfg.delta).any():
        return REJECTED_PROXIMITY, None, None, None
    t = cfg.beta / 2.0
    m = state.m
    if m:
        hit = _inside(d2[state.ei[:m]], d2[state.ej[:m]], state.edsq[:m], t, 0.0)
        removed_pos = np.nonzero(hit)[0]
    else:
        removed_pos = np.empty(0, dtype=np.intp)
    if cfg.strict_no_edge_loss and len(removed_pos):
        return REJECTED_CONNECTIVITY, None, None, None
    added = _partner_ids(state.xs[: state.n], state.ys[: state.n], d2, t, 0.0)
    if cfg.connectivity_mode == NO_ISOLATED:
        ok = _no_isolates(state, added, removed_pos)
    elif not added:
        ok = False
    elif not len(removed_pos):
        # attaching a node to a graph the invariant keeps connected
        ok = True
    else:
        ok = _path_connected_after(state, added, removed_pos)
    if not ok:
        return REJECTED_CONNECTIVITY, None, None, None
    return ACCEPTED, added, removed_pos, d2


def _no_isolates(state: _GrowState, added, removed_pos) -> bool:
    if not added:
        return False
    loss = {}
    for pos in removed_pos:
        for v in (int(state.ei[pos]), int(state.ej[pos])):
            loss[v] = loss.get(v, 0) + 1
    added_set = set(added)
    for v, lost in loss.items():
        if len(state.adjacency[v]) - lost + (1 if v in added_set else 0) < 1:
            return False
    return True


def _path_connected_after(state: _GrowState, added, removed_pos) -> bool:
    new_id = state.n
    removed = set()
    for pos in removed_pos:
        a, b = int(state.ei[pos]), int(state.ej[pos])
        removed.add((min(a, b), max(a, b)))
    added_set = set(added)
    seen = [False] * (new_id + 1)
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        if v == new_id:
            neigh = added
        else:
            neigh = [w for w in state.adjacency[v] if (min(v, w), max(v, w)) not in removed]
            if v in added_set:
                neigh = list(neigh) + [new_id]
        for w in neigh:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == new_id + 1


def grow(cfg: GrowthConfig, on_ring=None):
    """Run the growth procedure to completion.

    Returns (PointSet, SkeletonGraph, GrowthTrace); the graph is the exact
    skeleton of the final set at cfg.beta and satisfies the configured
    connectivity criterion.  on_ring, if given, is called as
    on_ring(r, points, edges) after each completed ring.
    """
    cfg.validate()
    state = _GrowState(cfg.seed)
    trace = GrowthTrace()
    x0, y0 = cfg.seed.x, cfg.seed.y
    ring = 0
    while True:
        r = cfg.r0 + ring * cfg.dr
        if r > cfg.r_max:
            break
        k = 0
        while True:
            theta = k * cfg.dtheta
            if theta >= 360.0:
                break
            rad = math.radians(theta)
            px = x0 + r * math.cos(rad)
            py = y0 + r * math.sin(rad)
            decision, added, removed_pos, d2 = _evaluate(state, cfg, px, py)
            candidate = Point(px, py)
            if decision == ACCEPTED:
                state.apply(candidate, added, removed_pos, d2)
            trace.events.append(GrowthEvent(r, theta, candidate, decision, state.m))
            k += 1
        if on_ring is not None:
            on_ring(r, state.n, state.m)
        ring += 1
    ps = PointSet(state.points)
    graph = SkeletonGraph(state.n, cfg.beta, state.edge_tuples())
    return ps, graph, trace


def try_candidate(ps: PointSet, g: SkeletonGraph, cfg: GrowthConfig, p):
    """Decide one candidate against an explicit (set, graph) state.

    Returns (decision, delta); the delta is None for proximity rejections
    and otherwise describes the insertion whether or not it was accepted.
    """
    cfg.validate()
    p = _as_point(p)
    coords = ps.coords
    dx = coords[:, 0] - p.x
    dy = coords[:, 1] - p.y
    d2 = dx * dx + dy * dy
    if (d2 <= cfg.delta * cfg.delta).any():
        return REJECTED_PROXIMITY, None
    delta = insert_point(g, ps, cfg.beta, p)
    if len(ps) == 0:
        # the result is a single node, connected by convention
        return ACCEPTED, delta
    if cfg.strict_no_edge_loss and delta.removed_edges:
        return REJECTED_CONNECTIVITY, delta
    if cfg.connectivity_mode == NO_ISOLATED:
        if not delta.added_edges:
            return REJECTED_CONNECTIVITY, delta
        loss = {}
        for a, b in delta.removed_edges:
            loss[a] = loss.get(a, 0) + 1
            loss[b] = loss.get(b, 0) + 1
        gained = {q for e in delta.added_edges for q in e}
        for v, lost in loss.items():
            if g.degree(v) - lost + (1 if v in gained else 0) < 1:
                return REJECTED_CONNECTIVITY, delta
        return ACCEPTED, delta
    updated = apply_delta(g, delta)
    if is_connected(updated, PATH_CONNECTED):
        return ACCEPTED, delta
    return REJECTED_CONNECTIVITY, delta
