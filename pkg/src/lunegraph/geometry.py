"""Planar predicates for lune-based neighbourhoods.

The lune of a pair (p, q) at parameter beta >= 1 is the intersection of two
discs of radius beta*|p-q|/2 centered at the affine combinations
(1-beta/2)*p + (beta/2)*q and (beta/2)*p + (1-beta/2)*q.  At beta=1 both
discs coincide with the disc of diameter pq (the Gabriel disc); as beta
grows the lune swells towards the open strip between the two lines
perpendicular to pq through p and through q.

Membership is boundary-inclusive: a point exactly on the lune boundary
counts as inside (this is what makes integer lattices keep exactly their
grid edges at every beta, including the cocircular beta=1 case).  The
strip predicate is strict, which is the limit behaviour of the inclusive
lunes.  All comparisons are on squared distances; no square roots on the
hot path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Point:
    """Immutable planar position in abstract length units."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate: ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Lune:
    """The two disc centers and common radius of a pair's neighbourhood."""

    c1: Point
    c2: Point
    radius: float


@dataclass(frozen=True)
class Tolerance:
    """Absolute slack on squared-distance comparisons.

    eps = 0 gives exact boundary-inclusive semantics: a witness on the lune
    boundary blocks.  eps > 0 requires a witness to be at least eps inside
    (in squared-distance units) before it blocks, which relaxes near-ties.
    """

    eps: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.eps) and self.eps >= 0.0):
            raise ValueError(f"tolerance eps must be finite and >= 0, got {self.eps}")


EXACT = Tolerance(0.0)


def _dist_sq(a: Point, b: Point) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def disc_margins(d_px, d_qx, d_pq, half_beta):
    """Margins of x against the two lune discs of a pair (p, q).

    Arguments are squared distances |px|^2, |qx|^2, |pq|^2 and beta/2.
    Returns (g1, g2) where g1 = |x-c1|^2 - r^2 and g2 = |x-c2|^2 - r^2 in
    exact arithmetic, but evaluated without forming the centers, so the
    expression stays well conditioned for very large beta.  x is inside
    disc i (boundary included) iff gi <= 0.  Works elementwise on arrays.
    """
    g1 = (1.0 - half_beta) * d_px + half_beta * d_qx - half_beta * d_pq
    g2 = (1.0 - half_beta) * d_qx + half_beta * d_px - half_beta * d_pq
    return g1, g2


def _check_pair(p: Point, q: Point, beta: float) -> None:
    if p.x == q.x and p.y == q.y:
        raise ValueError(f"coincident points: ({p.x}, {p.y})")
    if not (math.isfinite(beta) and beta >= 1.0):
        raise ValueError(f"unsupported beta: {beta} (must be finite and >= 1)")


def lune_of(p: Point, q: Point, beta: float) -> Lune:
    """Disc centers and radius of the beta-neighbourhood of (p, q)."""
    _check_pair(p, q, beta)
    t = beta / 2.0
    c1 = Point((1.0 - t) * p.x + t * q.x, (1.0 - t) * p.y + t * q.y)
    c2 = Point(t * p.x + (1.0 - t) * q.x, t * p.y + (1.0 - t) * q.y)
    radius = t * math.sqrt(_dist_sq(p, q))
    return Lune(c1, c2, radius)


def lune_contains(p: Point, q: Point, beta: float, x: Point, tol: Tolerance = EXACT) -> bool:
    """True iff x blocks the pair (p, q) at this beta.

    x must be inside both discs, boundary included, by at least tol.eps in
    squared distance.  The pair's own endpoints never block.
    """
    _check_pair(p, q, beta)
    if (x.x == p.x and x.y == p.y) or (x.x == q.x and x.y == q.y):
        return False
    g1, g2 = disc_margins(_dist_sq(p, x), _dist_sq(q, x), _dist_sq(p, q), beta / 2.0)
    return g1 <= -tol.eps and g2 <= -tol.eps


def limit_strip_contains(a: Point, b: Point, x: Point) -> bool:
    """True iff x lies strictly inside the open perpendicular strip of (a, b).

    The strip is bounded by the lines through a and through b perpendicular
    to the segment; equivalently 0 < (x-a).(b-a) < |b-a|^2, both strict.
    This is the limit of the boundary-inclusive lunes as beta grows.
    """
    if a.x == b.x and a.y == b.y:
        raise ValueError(f"coincident points: ({a.x}, {a.y})")
    s = (x.x - a.x) * (b.x - a.x) + (x.y - a.y) * (b.y - a.y)
    return 0.0 < s < _dist_sq(a, b)
