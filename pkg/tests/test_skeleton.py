import math
import random

import pytest

from lunegraph.geometry import Point, Tolerance
from lunegraph.skeleton import (
    NO_ISOLATED,
    PATH_CONNECTED,
    GridIndex,
    PointSet,
    SkeletonGraph,
    apply_delta,
    build_indexed,
    build_naive,
    format_edges,
    format_points,
    insert_point,
    is_connected,
    is_stable,
    load_points,
    parse_points,
    save_points,
    stability_violation,
)


def random_points(seed, n, extent=100.0):
    rng = random.Random(seed)
    return PointSet([(rng.uniform(-extent, extent), rng.uniform(-extent, extent)) for _ in range(n)])


def grid_points(m):
    return PointSet([(float(x), float(y)) for x in range(m) for y in range(m)])


def brute_force_edges(ps, beta):
    """Definitional edge set straight from scalar predicates (slow)."""
    from lunegraph.geometry import lune_contains

    n = len(ps)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if not any(
                lune_contains(ps[i], ps[j], beta, ps[k])
                for k in range(n)
                if k != i and k != j
            ):
                edges.add((i, j))
    return edges


def gabriel_oracle(ps):
    """Open-disc Gabriel edges: z blocks iff |pz|^2 + |qz|^2 < |pq|^2."""
    n = len(ps)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            dij = d2(ps[i], ps[j])
            if not any(
                d2(ps[i], ps[k]) + d2(ps[j], ps[k]) < dij
                for k in range(n)
                if k != i and k != j
            ):
                edges.add((i, j))
    return edges


def rng_oracle(ps):
    """Relative-neighbourhood edges: z blocks iff max(|pz|, |qz|) < |pq|."""
    n = len(ps)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            dij = d2(ps[i], ps[j])
            if not any(
                max(d2(ps[i], ps[k]), d2(ps[j], ps[k])) < dij
                for k in range(n)
                if k != i and k != j
            ):
                edges.add((i, j))
    return edges


def d2(a, b):
    return (a.x - b.x) ** 2 + (a.y - b.y) ** 2


class TestPointSet:
    def test_duplicate_points_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            PointSet([(0, 0), (1, 1), (0, 0)])

    def test_ids_are_positions(self):
        ps = PointSet([(3, 4), (5, 6)])
        assert ps[0] == Point(3.0, 4.0)
        assert ps[1] == Point(5.0, 6.0)

    def test_coords_read_only(self):
        ps = PointSet([(1, 2)])
        with pytest.raises(ValueError):
            ps.coords[0, 0] = 9.0


class TestBuildNaive:
    def test_collinear_middle_point_blocks_outer_pair(self):
        g = build_naive(PointSet([(0, 0), (1, 0), (2, 0)]), 1.0)
        assert g.edges == {(0, 1), (1, 2)}

    def test_single_point(self):
        g = build_naive(PointSet([(5, 5)]), 3.0)
        assert g.n == 1 and g.edge_count == 0

    def test_two_points_always_joined(self):
        g = build_naive(PointSet([(0, 0), (9, 9)]), 1e6)
        assert g.edges == {(0, 1)}

    def test_beta_below_one_rejected(self):
        with pytest.raises(ValueError, match="beta"):
            build_naive(PointSet([(0, 0), (1, 0)]), 0.5)

    def test_matches_scalar_predicate_bruteforce(self):
        ps = random_points(5, 30)
        for beta in (1.0, 1.7, 2.0, 6.0, 300.0):
            assert build_naive(ps, beta).edges == brute_force_edges(ps, beta)

    def test_gabriel_graph_at_beta_one(self):
        ps = random_points(101, 100)
        assert build_naive(ps, 1.0).edges == gabriel_oracle(ps)

    def test_relative_neighbourhood_graph_at_beta_two(self):
        ps = random_points(102, 100)
        assert build_naive(ps, 2.0).edges == rng_oracle(ps)

    def test_monotone_nesting_of_edge_sets(self):
        for seed in range(4):
            ps = random_points(200 + seed, 60)
            previous = None
            for beta in (1.0, 1.5, 2.0, 3.0, 10.0, 100.0):
                edges = build_naive(ps, beta).edges
                if previous is not None:
                    assert edges <= previous
                previous = edges

    def test_permutation_relabels_edges(self):
        ps = random_points(77, 40)
        g = build_naive(ps, 2.0)
        rng = random.Random(0)
        perm = list(range(len(ps)))
        rng.shuffle(perm)
        shuffled = PointSet([ps[i] for i in perm])
        expected = {tuple(sorted((perm.index(i), perm.index(j)))) for i, j in g.edges}
        assert build_naive(shuffled, 2.0).edges == expected

    def test_grid_keeps_exactly_grid_edges(self):
        for m in (3, 5):
            ps = grid_points(m)
            for beta in (1.0, 2.0, 10.0, 1e3, 1e6):
                assert build_naive(ps, beta).edge_count == 2 * m * (m - 1)

    def test_positive_tolerance_keeps_cocircular_diagonals(self):
        # boundary witnesses stop blocking once eps exceeds zero
        g = build_naive(grid_points(3), 1.0, Tolerance(1e-9))
        assert g.edge_count == 2 * 3 * 2 + 2 * 4


class TestBuildIndexed:
    @pytest.mark.parametrize("beta", [1.0, 2.0, 5.0, 50.0])
    def test_matches_naive_on_random_sets(self, beta):
        ps = random_points(300, 120)
        idx = GridIndex.build(ps)
        assert build_indexed(ps, beta, idx).edges == build_naive(ps, beta).edges

    @pytest.mark.parametrize("cell", [0.37, 5.0, 400.0])
    def test_cell_size_never_changes_results(self, cell):
        ps = random_points(301, 80)
        idx = GridIndex.build(ps, cell)
        assert build_indexed(ps, 2.0, idx).edges == build_naive(ps, 2.0).edges

    def test_empty_set(self):
        ps = PointSet([])
        g = build_indexed(ps, 2.0, GridIndex.build(ps))
        assert g.n == 0 and g.edge_count == 0

    def test_grid_at_large_beta(self):
        ps = grid_points(5)
        g = build_indexed(ps, 10.0, GridIndex.build(ps))
        assert g.edge_count == 40

    def test_stale_index_rejected(self):
        ps = random_points(1, 20)
        other = random_points(2, 20)
        idx = GridIndex.build(other)
        with pytest.raises(ValueError, match="stale"):
            build_indexed(ps, 1.0, idx)

    def test_indexed_handles_negative_coordinates(self):
        ps = PointSet([(-10.5, -3.2), (-8.0, -3.1), (-9.0, -7.7), (2.5, 1.0)])
        idx = GridIndex.build(ps)
        assert build_indexed(ps, 1.5, idx).edges == build_naive(ps, 1.5).edges

    def test_tolerance_threads_through_identically(self):
        tol = Tolerance(1e-9)
        ps = grid_points(3)
        naive = build_naive(ps, 1.0, tol)
        indexed = build_indexed(ps, 1.0, GridIndex.build(ps), tol)
        assert naive.edges == indexed.edges
        assert naive.edge_count == 20  # cocircular diagonals released by eps

    def test_default_cell_size_is_median_nn_gap(self):
        ps = random_points(17, 30)
        nn = []
        for i in range(30):
            nn.append(min(math.dist(tuple(ps[i]), tuple(ps[j])) for j in range(30) if j != i))
        nn.sort()
        median = (nn[14] + nn[15]) / 2
        assert GridIndex.build(ps).cell_size == pytest.approx(median)

    def test_bad_cell_size_rejected(self):
        with pytest.raises(ValueError, match="cell_size"):
            GridIndex(0.0, {})


class TestInsertPoint:
    def test_midpoint_splits_gabriel_edge(self):
        ps = PointSet([(0, 0), (2, 0)])
        g = build_naive(ps, 1.0)
        delta = insert_point(g, ps, 1.0, Point(1, 0))
        assert delta.removed_edges == {(0, 1)}
        assert delta.added_edges == {(0, 2), (1, 2)}

    def test_far_point_matches_fresh_build(self):
        ps = PointSet([(0, 0), (2, 0)])
        g = build_naive(ps, 1.0)
        delta = insert_point(g, ps, 1.0, Point(10, 10))
        bigger = ps.with_point(Point(10, 10))
        assert apply_delta(g, delta).edges == build_naive(bigger, 1.0).edges
        assert delta.removed_edges == set()

    def test_coincident_point_rejected(self):
        ps = PointSet([(0, 0), (2, 0)])
        g = build_naive(ps, 1.0)
        with pytest.raises(ValueError, match="coincident"):
            insert_point(g, ps, 1.0, Point(2, 0))

    @pytest.mark.parametrize("beta", [1.0, 2.0, 3.0])
    def test_insertion_sequence_equals_rebuild(self, beta):
        ps = random_points(400, 50)
        g = build_naive(ps, beta)
        rng = random.Random(401)
        for step in range(20):
            p = Point(rng.uniform(-100, 100), rng.uniform(-100, 100))
            delta = insert_point(g, ps, beta, p)
            assert all(e in g.edges for e in delta.removed_edges)
            assert all(delta.new_point_id in e for e in delta.added_edges)
            g = apply_delta(g, delta)
            ps = ps.with_point(p)
            if step % 5 == 4:
                assert g.edges == build_naive(ps, beta).edges
        assert g.edges == build_naive(ps, beta).edges

    def test_apply_delta_validates_node_id(self):
        ps = PointSet([(0, 0), (2, 0)])
        g = build_naive(ps, 1.0)
        from lunegraph.skeleton import InsertionDelta

        with pytest.raises(ValueError, match="node"):
            apply_delta(g, InsertionDelta(7, [], []))


class TestIsConnected:
    def test_two_disjoint_edges(self):
        g = SkeletonGraph(4, 1.0, [(0, 1), (2, 3)])
        assert is_connected(g, NO_ISOLATED)
        assert not is_connected(g, PATH_CONNECTED)

    def test_single_node_both_modes(self):
        g = SkeletonGraph(1, 1.0, [])
        assert is_connected(g, NO_ISOLATED)
        assert is_connected(g, PATH_CONNECTED)

    def test_isolated_node_detected(self):
        g = SkeletonGraph(3, 1.0, [(0, 1)])
        assert not is_connected(g, NO_ISOLATED)

    def test_unknown_mode_rejected(self):
        g = SkeletonGraph(1, 1.0, [])
        with pytest.raises(ValueError, match="mode"):
            is_connected(g, "strongly")


class TestStability:
    def test_unit_grid_is_stable(self):
        assert is_stable(grid_points(5))

    def test_equilateral_triangle_is_unstable(self):
        ps = PointSet([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
        assert not is_stable(ps)
        i, j, k = stability_violation(ps)
        assert {i, j, k} == {0, 1, 2}
        # the same loss is visible as a vanished edge at a huge beta
        assert build_naive(ps, 1e6).edge_count < build_naive(ps, 1.0).edge_count

    def test_two_points_are_stable(self):
        assert is_stable(PointSet([(0, 0), (5, 3)]))

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            is_stable(PointSet([(0, 0)]))

    def test_violation_matches_strip_predicate(self):
        from lunegraph.geometry import limit_strip_contains

        ps = random_points(55, 25)
        violation = stability_violation(ps)
        if violation is not None:
            i, j, k = violation
            assert limit_strip_contains(ps[i], ps[j], ps[k])
            assert (i, j) in build_naive(ps, 1.0).edges


class TestFileFormats:
    def test_points_round_trip(self, tmp_path):
        ps = random_points(9, 17)
        path = tmp_path / "pts.txt"
        save_points(ps, path)
        back = load_points(path)
        assert [tuple(p) for p in back] == [tuple(p) for p in ps]

    def test_comments_and_blanks_skipped(self):
        ps = parse_points("# header\n\n1 2\n3 4  # trailing note\n")
        assert [tuple(p) for p in ps] == [(1.0, 2.0), (3.0, 4.0)]

    def test_malformed_line_reports_location(self):
        with pytest.raises(ValueError, match="2"):
            parse_points("0 0\n1 2 3\n", source="bad.txt")

    def test_edge_format_sorted(self):
        text = format_edges([(3, 1), (0, 2), (1, 2)])
        assert text == "0 2\n1 2\n1 3\n"

    def test_point_format_full_precision(self):
        ps = PointSet([(0.1 + 0.2, 1 / 3)])
        again = parse_points(format_points(ps))
        assert tuple(again[0]) == tuple(ps[0])
