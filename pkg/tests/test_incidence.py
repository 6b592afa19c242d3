import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, strategies as st

from rigidparts.incidence import (
    Line3,
    bucket_edges,
    check_gk_bounds,
    dyadic_bucket,
    intersection_weight,
    plane_statistics,
    quadric_through_skew_triple,
    regulus_statistics,
    rich_points,
)
from rigidparts.motionlines import RotationPoint, apply_rotation, line_from_pair, perturbation_lines
from rigidparts.rigidity import Framework, Graph

from oracles import meet_pairs, planted_family, richness_oracle

TRI = Graph(3, ((0, 1), (0, 2), (1, 2)))


def concurrent(m, tau=RotationPoint((F(1), F(2)), F(3))):
    return [line_from_pair((F(k), F(k * k)), apply_rotation(tau, (F(k), F(k * k)))) for k in range(m)]


def ruling_a(a):
    return Line3((a, 0, 0), (0, 1, a))  # x = a, z = a y


def ruling_b(b):
    return Line3((0, b, 0), (1, 0, b))  # y = b, z = b x


class TestRichPoints:
    def test_concurrent(self):
        rm = rich_points(concurrent(3))
        assert list(rm.richness.values()) == [3]

    def test_triangle_of_lines(self):
        lines = [Line3((0, 0, 0), (1, 0, 0)), Line3((0, 0, 0), (0, 1, 0)), Line3((1, 0, 0), (-1, 1, 0))]
        assert sorted(rich_points(lines).richness.values()) == [2, 2, 2]
        assert intersection_weight(lines) == 3

    def test_skew(self):
        lines = [ruling_a(1), ruling_a(2)]
        assert len(rich_points(lines)) == 0 and intersection_weight(lines) == 0

    def test_weight_concurrent(self):
        assert intersection_weight(concurrent(7)) == 6

    @pytest.mark.parametrize("seed", range(5))
    def test_oracle(self, seed):
        lines = planted_family(random.Random(seed), max_lines=40)
        assert rich_points(lines).richness == richness_oracle(lines)

    @pytest.mark.parametrize("seed", range(5))
    def test_pair_count_identity(self, seed):
        lines = planted_family(random.Random(100 + seed), max_lines=40)
        rm = rich_points(lines)
        assert sum(comb(r, 2) for r in rm.richness.values()) == meet_pairs(lines)

    @given(st.randoms(use_true_random=False), st.integers(-3, 3), st.integers(1, 3))
    def test_weight_invariant_under_plane_motion(self, rng, w_num, w_den):
        p = [(F(rng.randint(-4, 4)), F(rng.randint(-4, 4))) for _ in range(8)]
        q = [(F(rng.randint(-4, 4)), F(rng.randint(-4, 4))) for _ in range(8)]
        pairs = list(dict.fromkeys(zip(p, q)))
        p, q = [a for a, _ in pairs], [b for _, b in pairs]
        base = intersection_weight(perturbation_lines(p, q))
        R = RotationPoint((F(1, 2), F(-1)), F(w_num, w_den))
        moved = intersection_weight(perturbation_lines([apply_rotation(R, x) for x in p], [apply_rotation(R, x) for x in q]))
        order = list(range(len(p)))
        rng.shuffle(order)
        shuffled = intersection_weight(perturbation_lines([p[i] for i in order], [q[i] for i in order]))
        assert base == moved == shuffled


class TestPlanes:
    def test_collinear_concurrent_vertical_plane(self):
        # collinear sources rotated about a point on their line: lines concurrent and coplanar
        A = [(F(k), F(0)) for k in range(4)]
        tau = RotationPoint((F(-1), F(0)), F(2))
        lines = perturbation_lines(A, [apply_rotation(tau, a) for a in A])
        assert plane_statistics(lines).max_lines == 4

    def test_skew_family(self):
        assert plane_statistics([ruling_a(k) for k in range(1, 5)]).max_lines == 1

    def test_two_parallel(self):
        lines = [line_from_pair((F(0), F(0)), (F(0), F(1))), line_from_pair((F(1), F(0)), (F(1), F(1)))]
        stats = plane_statistics(lines)
        assert stats.max_lines == 2 and list(stats.counts.values()) == [2]


class TestQuadric:
    def test_hyperbolic_paraboloid(self):
        lines = [Line3((a, 0, 0), (0, 1, a)) for a in (0, 1, 2)]
        q = quadric_through_skew_triple(*lines)
        # xy - z up to scale: monomials x^2, y^2, z^2, xy, xz, yz, x, y, z, 1
        assert q.coefficients == (0, 0, 0, 1, 0, 0, 0, 0, -1, 0)
        assert q.nondegenerate
        assert q.contains_line(Line3((3, 0, 0), (0, 1, 3)))
        for x, y in ((2, 5), (F(1, 3), -7)):
            assert q((x, y, x * y)) == 0

    def test_intersecting_rejected(self):
        with pytest.raises(ValueError):
            quadric_through_skew_triple(ruling_a(1), ruling_b(1), ruling_a(2))


class TestRegulus:
    def test_three_plus_three(self):
        lines = [ruling_a(k) for k in (1, 2, 3)] + [ruling_b(k) for k in (1, 2, 3)]
        stats = regulus_statistics(lines)
        assert (stats.max_lines, stats.max_intersecting_pairs) == (6, 9)
        assert stats.applicable

    def test_skew_off_quadric(self):
        lines = [ruling_a(1), ruling_a(2), ruling_a(3), Line3((0, 0, 1), (1, 1, 0))]
        stats = regulus_statistics(lines)
        assert stats.max_lines <= 3 and stats.max_intersecting_pairs == 0

    def test_no_skew_triple(self):
        stats = regulus_statistics(concurrent(5))
        assert (stats.max_lines, stats.max_intersecting_pairs, stats.applicable) == (0, 0, False)

    def test_size_limit(self):
        with pytest.raises(ValueError, match="size limit"):
            regulus_statistics(concurrent(5), size_limit=4)
        assert regulus_statistics(concurrent(5), size_limit=4, override=True).max_lines == 0


class TestBuckets:
    def test_dyadic(self):
        assert [dyadic_bucket(k) for k in (2, 3, 4, 5, 8, 9)] == [2, 2, 2, 3, 3, 4]

    def test_rotation_triangle(self):
        p = ((F(0), F(0)), (F(1), F(0)), (F(0), F(1)))
        tau = RotationPoint((F(2), F(1)), F(1, 3))
        b = bucket_edges(Framework(TRI, p), [apply_rotation(tau, x) for x in p])
        assert b.buckets == {2: [(0, 1), (0, 2), (1, 2)]} and not b.parallel
        assert set(b.richness.values()) == {3}

    def test_translation(self):
        p = ((F(0), F(0)), (F(1), F(0)), (F(0), F(1)))
        b = bucket_edges(Framework(TRI, p), [(x + 1, y + 3) for x, y in p])
        assert b.buckets == {} and b.parallel == [(0, 1), (0, 2), (1, 2)]

    def test_single_edge(self):
        g = Graph(2, ((0, 1),))
        b = bucket_edges(Framework(g, ((F(0), F(0)), (F(1), F(0)))), [(F(0), F(0)), (F(0), F(1))])
        assert b.buckets == {2: [(0, 1)]} and b.richness == {(0, 1): 2}

    def test_non_equivalent(self):
        p = ((F(0), F(0)), (F(1), F(0)), (F(0), F(1)))
        with pytest.raises(ValueError, match=r"edge \(0, 1\) has squared lengths 1 and 4"):
            bucket_edges(Framework(TRI, p), [(0, 0), (2, 0), (0, 1)])

    @given(st.randoms(use_true_random=False))
    def test_each_edge_once(self, rng):
        # two disjoint triangles, one rotated and one translated
        g = Graph(6, ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)))
        p = tuple((F(rng.randint(-5, 5)), F(rng.randint(-5, 5), 3) + k) for k in range(6))
        t1 = RotationPoint((F(rng.randint(-3, 3)), F(1)), F(rng.randint(1, 4)))
        q = [apply_rotation(t1, x) for x in p[:3]] + [(x + 2, y - 1) for x, y in p[3:]]
        try:
            fw = Framework(g, p)
        except ValueError:
            return
        b = bucket_edges(fw, q)
        placed = [e for es in b.buckets.values() for e in es] + b.parallel
        assert sorted(placed) == sorted(g.edges)


class TestBounds:
    def test_concurrent_ten(self):
        rep = check_gk_bounds(concurrent(10), 4)
        assert rep.intersection_weight == 9 and rep.within_bound and rep.hypotheses_hold
        assert rep.rich_profile[10] == 1

    def test_skew(self):
        rep = check_gk_bounds([ruling_a(k) for k in range(1, 6)], 1)
        assert rep.intersection_weight == 0 and rep.within_bound

    def test_failed_hypothesis_reported(self):
        lines = [ruling_a(k) for k in (1, 2, 3)] + [ruling_b(k) for k in (1, 2, 3)]
        rep = check_gk_bounds(lines, F(1, 2))
        assert "regulus" in rep.failed_hypotheses and not rep.hypotheses_hold

    @pytest.mark.parametrize("seed", range(3))
    def test_planted_counts_match_oracle(self, seed):
        lines = planted_family(random.Random(200 + seed), max_lines=30)
        rep = check_gk_bounds(lines, 4)
        oracle = richness_oracle(lines)
        assert rep.intersection_weight == sum(r - 1 for r in oracle.values())
