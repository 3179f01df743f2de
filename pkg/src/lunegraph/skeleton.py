"""Build lune-based proximity graphs and maintain them under insertion.

A pair of points forms an edge iff no third point lies in the pair's
beta-neighbourhood (boundary included, endpoints excluded).  Three paths
compute the same edge set:

- build_naive: definitional all-pairs/all-witnesses test, vectorised.
- build_indexed: same result, pruned by a uniform grid plus an exact
  near-witness elimination pass; use it for large sets.
- insert_point: the delta a new point causes on an existing exact graph.

is_stable decides whether the beta=1 edge set survives the beta->infinity
half-plane-strip limit.  File helpers read and write the plain-text point
and edge formats used by the CLI.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import EXACT, Point, Tolerance, disc_margins, lune_of

PATH_CONNECTED = "path-connected"
NO_ISOLATED = "no-isolated-nodes"
CONNECTIVITY_MODES = (PATH_CONNECTED, NO_ISOLATED)

# near witnesses tried first when pruning candidate partners; any value
# gives identical results, this only tunes how fast far pairs are killed
PREFILTER_WITNESSES = 16


def _as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    x, y = p
    return Point(float(x), float(y))


class PointSet:
    """Ordered planar points; the id of a point is its position."""

    def __init__(self, points):
        pts = tuple(_as_point(p) for p in points)
        seen = set()
        for p in pts:
            key = (p.x, p.y)
            if key in seen:
                raise ValueError(f"duplicate point: ({p.x}, {p.y})")
            seen.add(key)
        self._points = pts
        coords = np.array([(p.x, p.y) for p in pts], dtype=np.float64)
        self._coords = coords.reshape(len(pts), 2)
        self._coords.setflags(write=False)

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i: int) -> Point:
        return self._points[i]

    def __iter__(self):
        return iter(self._points)

    @property
    def coords(self) -> np.ndarray:
        """Read-only (n, 2) float64 view of the coordinates."""
        return self._coords

    def with_point(self, p) -> "PointSet":
        """New set with p appended (id = previous length)."""
        return PointSet(self._points + (_as_point(p),))


class SkeletonGraph:
    """Undirected edge set over point ids, frozen after construction."""

    __slots__ = ("n", "beta", "edges", "adjacency")

    def __init__(self, n: int, beta: float, edges):
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if i > j:
                i, j = j, i
            if not (0 <= i and j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} nodes")
            norm.add((i, j))
        adj = [[] for _ in range(n)]
        for i, j in sorted(norm):
            adj[i].append(j)
            adj[j].append(i)
        self.n = n
        self.beta = beta
        self.edges = frozenset(norm)
        self.adjacency = tuple(tuple(a) for a in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def neighbors(self, i: int):
        return self.adjacency[i]

    def sorted_edges(self):
        return sorted(self.edges)


class InsertionDelta:
    """Edge changes caused by appending one point to an exact graph."""

    __slots__ = ("new_point_id", "added_edges", "removed_edges")

    def __init__(self, new_point_id, added_edges, removed_edges):
        self.new_point_id = int(new_point_id)
        self.added_edges = frozenset(tuple(sorted(e)) for e in added_edges)
        self.removed_edges = frozenset(tuple(sorted(e)) for e in removed_edges)


def _inside(d_px, d_qx, d_pq, half_beta, eps):
    g1, g2 = disc_margins(d_px, d_qx, d_pq, half_beta)
    return (g1 <= -eps) & (g2 <= -eps)


def _sq_dist_matrix(coords: np.ndarray) -> np.ndarray:
    dx = coords[:, 0][:, None] - coords[:, 0][None, :]
    dy = coords[:, 1][:, None] - coords[:, 1][None, :]
    return dx * dx + dy * dy


def _check_beta(beta: float) -> None:
    if not (math.isfinite(beta) and beta >= 1.0):
        raise ValueError(f"unsupported beta: {beta} (must be finite and >= 1)")


def build_naive(ps: PointSet, beta: float, tol: Tolerance = EXACT) -> SkeletonGraph:
    """Exact skeleton by testing every witness against every pair.

    O(n^3) work; fine up to n of a couple of thousand.  The reference all
    other construction paths are checked against.
    """
    _check_beta(beta)
    n = len(ps)
    if n < 2:
        return SkeletonGraph(n, beta, [])
    coords = ps.coords
    t = beta / 2.0
    eps = tol.eps
    dist = _sq_dist_matrix(coords)
    edges = []
    for i in range(n - 1):
        di = dist[i]
        rows = np.arange(i + 1, n)
        # inside[r, k]: witness k blocks pair (i, rows[r])
        g1, g2 = disc_margins(di[None, :], dist[rows], di[rows, None], t)
        inside = (g1 <= -eps) & (g2 <= -eps)
        inside[:, i] = False
        inside[rows - (i + 1), rows] = False
        blocked = inside.any(axis=1)
        for r, j in enumerate(rows):
            if not blocked[r]:
                edges.append((i, int(j)))
    return SkeletonGraph(n, beta, edges)


class GridIndex:
    """Uniform grid over point ids, keyed by integer cell coordinates."""

    def __init__(self, cell_size: float, buckets):
        if not (math.isfinite(cell_size) and cell_size > 0.0):
            raise ValueError(f"cell_size must be positive, got {cell_size}")
        self.cell_size = float(cell_size)
        self.buckets = dict(buckets)

    @classmethod
    def build(cls, ps: PointSet, cell_size: float | None = None) -> "GridIndex":
        """Index a point set; default cell is the median nearest-neighbor gap."""
        if cell_size is None:
            cell_size = _median_nn_distance(ps.coords)
        idx = cls(cell_size, {})
        for pid in range(len(ps)):
            p = ps[pid]
            idx.buckets.setdefault(idx.cell_of(p.x, p.y), []).append(pid)
        return idx

    def cell_of(self, x: float, y: float):
        cs = self.cell_size
        return (int(math.floor(x / cs)), int(math.floor(y / cs)))

    def candidate_ids(self, xmin, xmax, ymin, ymax):
        """Ids in cells overlapping the box, or None when a full scan is cheaper.

        Falls back to None once the box covers more than half the occupied
        cells (large-beta lunes); callers then test every point.  Results
        never depend on which branch is taken.
        """
        cx0, cy0 = self.cell_of(xmin, ymin)
        cx1, cy1 = self.cell_of(xmax, ymax)
        span = (cx1 - cx0 + 1) * (cy1 - cy0 + 1)
        if span > max(1, len(self.buckets) // 2):
            return None
        out = []
        for cx in range(cx0, cx1 + 1):
            for cy in range(cy0, cy1 + 1):
                ids = self.buckets.get((cx, cy))
                if ids:
                    out.extend(ids)
        return out


def _median_nn_distance(coords: np.ndarray) -> float:
    n = len(coords)
    if n < 2:
        return 1.0
    mins = np.empty(n)
    for s in range(0, n, 512):
        e = min(s + 512, n)
        dx = coords[s:e, 0][:, None] - coords[:, 0][None, :]
        dy = coords[s:e, 1][:, None] - coords[:, 1][None, :]
        block = dx * dx + dy * dy
        block[np.arange(s, e) - s, np.arange(s, e)] = np.inf
        mins[s:e] = block.min(axis=1)
    return float(np.median(np.sqrt(mins)))


def _verify_index(ps: PointSet, idx: GridIndex) -> None:
    total = sum(len(ids) for ids in idx.buckets.values())
    if total != len(ps):
        raise ValueError(f"stale index: holds {total} ids for {len(ps)} points")
    for pid in range(len(ps)):
        p = ps[pid]
        ids = idx.buckets.get(idx.cell_of(p.x, p.y))
        if not ids or pid not in ids:
            raise ValueError(f"stale index: point {pid} not in its cell")


def build_indexed(ps: PointSet, beta: float, idx: GridIndex, tol: Tolerance = EXACT) -> SkeletonGraph:
    """Same edge set as build_naive, pruned through the grid index.

    Far pairs are killed first by testing the nearest few points as
    witnesses (an exact elimination, never a heuristic); surviving pairs
    get a definitive witness scan restricted to grid cells overlapping the
    lune's bounding box, with an all-points fallback for huge lunes.
    """
    _check_beta(beta)
    _verify_index(ps, idx)
    n = len(ps)
    if n < 2:
        return SkeletonGraph(n, beta, [])
    coords = ps.coords
    xs = coords[:, 0]
    ys = coords[:, 1]
    t = beta / 2.0
    eps = tol.eps
    edges = []
    ids = np.arange(n)
    for i in range(n - 1):
        dxi = xs - xs[i]
        dyi = ys - ys[i]
        di = dxi * dxi + dyi * dyi
        alive = np.zeros(n, dtype=bool)
        alive[i + 1:] = True
        k = min(PREFILTER_WITNESSES, n - 1)
        near = np.argpartition(np.where(ids == i, np.inf, di), k - 1)[:k]
        for z in near:
            dzx = xs - xs[z]
            dzy = ys - ys[z]
            dz = dzx * dzx + dzy * dzy
            blocked = _inside(di[z], dz, di, t, eps)
            blocked[z] = False
            alive &= ~blocked
        for j in np.nonzero(alive)[0]:
            j = int(j)
            cand = _lune_box_candidates(ps, idx, i, j, t)
            if cand is None:
                djx = xs - xs[j]
                djy = ys - ys[j]
                dj = djx * djx + djy * djy
                inside = _inside(di, dj, di[j], t, eps)
                inside[i] = False
                inside[j] = False
            else:
                cand = np.asarray(cand, dtype=np.intp)
                cand = cand[(cand != i) & (cand != j)]
                djx = xs[cand] - xs[j]
                djy = ys[cand] - ys[j]
                dj = djx * djx + djy * djy
                inside = _inside(di[cand], dj, di[j], t, eps)
            if not inside.any():
                edges.append((i, j))
    return SkeletonGraph(n, beta, edges)


def _lune_box_candidates(ps, idx, i, j, t):
    lune = lune_of(ps[i], ps[j], 2.0 * t)
    r = lune.radius
    xmin = max(lune.c1.x, lune.c2.x) - r
    xmax = min(lune.c1.x, lune.c2.x) + r
    ymin = max(lune.c1.y, lune.c2.y) - r
    ymax = min(lune.c1.y, lune.c2.y) + r
    return idx.candidate_ids(xmin, xmax, ymin, ymax)


def _partner_ids(xs, ys, d2, t, eps):
    """Ids q whose lune with the probe point holds no existing point.

    d2 are squared distances from the probe to every existing point (all
    nonzero).  The probe itself is not in xs/ys.
    """
    n = len(d2)
    if n == 1:
        return [0]
    alive = np.ones(n, dtype=bool)
    k = min(PREFILTER_WITNESSES, n)
    near = np.argpartition(d2, k - 1)[:k] if n > k else np.arange(n)
    for z in near:
        dzx = xs - xs[z]
        dzy = ys - ys[z]
        dz = dzx * dzx + dzy * dzy
        blocked = _inside(d2[z], dz, d2, t, eps)
        blocked[z] = False
        alive &= ~blocked
    out = []
    for j in np.nonzero(alive)[0]:
        j = int(j)
        djx = xs - xs[j]
        djy = ys - ys[j]
        dj = djx * djx + djy * djy
        inside = _inside(d2, dj, d2[j], t, eps)
        inside[j] = False
        if not inside.any():
            out.append(j)
    return out


def insert_point(g: SkeletonGraph, ps: PointSet, beta: float, p, tol: Tolerance = EXACT) -> InsertionDelta:
    """Delta turning the exact skeleton of ps into the one of ps + {p}.

    Removed edges are exactly the existing edges whose lune holds p; added
    edges are the pairs (p, q) whose lune is empty in the enlarged set.
    """
    _check_beta(beta)
    p = _as_point(p)
    if g.n != len(ps):
        raise ValueError(f"graph has {g.n} nodes but point set has {len(ps)}")
    n = len(ps)
    t = beta / 2.0
    eps = tol.eps
    if n == 0:
        return InsertionDelta(0, [], [])
    coords = ps.coords
    xs = coords[:, 0]
    ys = coords[:, 1]
    dx = xs - p.x
    dy = ys - p.y
    d2 = dx * dx + dy * dy
    if (d2 == 0.0).any():
        raise ValueError(f"coincident point: ({p.x}, {p.y})")
    removed = []
    if g.edges:
        pairs = np.array(g.sorted_edges(), dtype=np.intp)
        ei = pairs[:, 0]
        ej = pairs[:, 1]
        ex = xs[ei] - xs[ej]
        ey = ys[ei] - ys[ej]
        edsq = ex * ex + ey * ey
        hit = _inside(d2[ei], d2[ej], edsq, t, eps)
        removed = [(int(a), int(b)) for a, b in pairs[hit]]
    added = [(q, n) for q in _partner_ids(xs, ys, d2, t, eps)]
    return InsertionDelta(n, added, removed)


def apply_delta(g: SkeletonGraph, delta: InsertionDelta) -> SkeletonGraph:
    """Graph after appending the point the delta was computed for."""
    if delta.new_point_id != g.n:
        raise ValueError(f"delta is for node {delta.new_point_id}, graph has {g.n} nodes")
    if not delta.removed_edges <= g.edges:
        raise ValueError("delta removes edges the graph does not have")
    edges = (set(g.edges) - delta.removed_edges) | delta.added_edges
    return SkeletonGraph(g.n + 1, g.beta, edges)


def is_connected(g: SkeletonGraph, mode: str = NO_ISOLATED) -> bool:
    """Connectivity under either criterion; a single node counts as connected."""
    if mode not in CONNECTIVITY_MODES:
        raise ValueError(f"unknown connectivity mode: {mode!r}")
    if g.n <= 1:
        return True
    if mode == NO_ISOLATED:
        return all(len(a) > 0 for a in g.adjacency)
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == g.n


def stability_violation(ps: PointSet):
    """First (i, j, k) where k sits strictly inside the limit strip of a
    beta=1 edge (i, j), or None when every edge survives any beta."""
    if len(ps) < 2:
        raise ValueError("stability needs at least 2 points")
    coords = ps.coords
    xs = coords[:, 0]
    ys = coords[:, 1]
    base = build_naive(ps, 1.0)
    for i, j in base.sorted_edges():
        ux = xs[j] - xs[i]
        uy = ys[j] - ys[i]
        s = (xs - xs[i]) * ux + (ys - ys[i]) * uy
        dij = ux * ux + uy * uy
        inside = (s > 0.0) & (s < dij)
        inside[i] = False
        inside[j] = False
        hits = np.nonzero(inside)[0]
        if len(hits):
            return (i, j, int(hits[0]))
    return None


def is_stable(ps: PointSet) -> bool:
    """True iff the beta=1 edge set equals the half-plane-limit edge set."""
    return stability_violation(ps) is None


# -- plain-text formats --------------------------------------------------

def format_points(ps: PointSet) -> str:
    return "".join(f"{p.x!r} {p.y!r}\n" for p in ps)


def parse_points(text: str, source: str = "<points>") -> PointSet:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{source}:{lineno}: expected 'x y', got {raw!r}")
        try:
            pts.append(Point(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
    return PointSet(pts)


def load_points(path) -> PointSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_points(fh.read(), source=str(path))


def save_points(ps: PointSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_points(ps))


def format_edges(edges) -> str:
    return "".join(f"{i} {j}\n" for i, j in sorted(tuple(sorted(e)) for e in edges))


def parse_edges(text: str, source: str = "<edges>"):
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{source}:{lineno}: expected 'i j', got {raw!r}")
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"{source}:{lineno}: node ids must be integers, got {raw!r}") from None
    return out


def load_edges(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edges(fh.read(), source=str(path))


def save_edges(edges, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edges(edges))
