from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from rigidparts.exactgeom import Congruence, congruence_class, sqdist
from rigidparts.motionlines import (
    FamilyKind,
    Meet,
    MotionLine,
    Parallel,
    RotationPoint,
    Skew,
    apply_rotation,
    classify_line_family,
    common_plane,
    line_from_pair,
    meet_or_parallel,
    pair_from_line,
    perturbation_lines,
    rotation_from_angle,
)

from conftest import points2, rationals


def P(x, y):
    return (F(x), F(y))


class TestTransform:
    def test_horizontal_pair(self):
        ln = line_from_pair(P(0, 0), P(2, 0))
        assert ln.u == (1, 0) and ln.v == (0, 1)
        # the point at height t decodes to a rotation taking a to b
        for t in (F(0), F(1)):
            x = ln.at(t)
            assert apply_rotation(RotationPoint.from_point3(x), P(0, 0)) == P(2, 0)

    def test_equal_points_vertical(self):
        ln = line_from_pair(P(1, 2), P(1, 2))
        assert ln.vertical and ln.at(F(5)) == (1, 2, 5)

    def test_vertical_pair(self):
        ln = line_from_pair(P(0, 0), P(0, 1))
        assert ln.u == (0, F(1, 2)) and ln.v == (F(-1, 2), 0)

    def test_inverse_examples(self):
        assert pair_from_line(MotionLine((1, 0), (0, 1))) == (P(0, 0), P(2, 0))
        assert pair_from_line(MotionLine((1, 2), (0, 0))) == (P(1, 2), P(1, 2))

    @given(points2(), points2())
    def test_round_trip(self, a, b):
        assert pair_from_line(line_from_pair(a, b)) == (a, b)

    @given(points2(), points2(), rationals(30, 7))
    def test_decoded_rotation_maps_a_to_b(self, a, b, t):
        x = line_from_pair(a, b).at(t)
        assert apply_rotation(RotationPoint.from_point3(x), a) == b


class TestMeet:
    def test_quarter_turn(self):
        rel = meet_or_parallel(line_from_pair(P(1, 0), P(0, 1)), line_from_pair(P(0, 1), P(-1, 0)))
        assert rel == Meet((0, 0, 1))

    def test_translation(self):
        rel = meet_or_parallel(line_from_pair(P(0, 0), P(0, 1)), line_from_pair(P(1, 0), P(1, 1)))
        assert rel == Parallel()

    def test_shared_source(self):
        rel = meet_or_parallel(line_from_pair(P(0, 0), P(1, 0)), line_from_pair(P(0, 0), P(0, 1)))
        assert rel == Skew()

    def test_identical_rejected(self):
        ln = line_from_pair(P(0, 0), P(1, 0))
        with pytest.raises(ValueError):
            meet_or_parallel(ln, ln)

    @given(points2(4, 2), points2(4, 2), points2(4, 2), points2(4, 2))
    def test_distance_correspondence(self, a, b, c, d):
        assume((a, b) != (c, d))
        rel = meet_or_parallel(line_from_pair(a, b), line_from_pair(c, d))
        assert isinstance(rel, (Meet, Parallel)) == (sqdist(a, c) == sqdist(b, d))
        if isinstance(rel, Meet):
            tau = RotationPoint.from_point3(rel.point)
            assert apply_rotation(tau, a) == b and apply_rotation(tau, c) == d


class TestRotation:
    def test_half_turn(self):
        assert apply_rotation(RotationPoint(P(1, 0), 0), P(0, 0)) == P(2, 0)

    def test_quarter_turn(self):
        assert apply_rotation(RotationPoint(P(0, 0), 1), P(1, 0)) == P(0, 1)

    @given(points2(), rationals(), points2(), points2())
    def test_isometry_and_fixed_center(self, c, w, x, y):
        tau = RotationPoint(c, w)
        assert apply_rotation(tau, c) == c
        assert sqdist(apply_rotation(tau, x), apply_rotation(tau, y)) == sqdist(x, y)

    def test_from_angle(self):
        assert rotation_from_angle(P(0, 0), F(1, 2)).w == 2
        with pytest.raises(ValueError):
            rotation_from_angle(P(0, 0), 0)


A3 = [P(1, 0), P(0, 1), P(-1, -1)]


class TestFamilies:
    def test_concurrent(self):
        tau = RotationPoint(P(0, 0), 1)
        fam = classify_line_family(perturbation_lines(A3, [apply_rotation(tau, a) for a in A3]))
        assert fam.kind is FamilyKind.CONCURRENT
        assert fam.rotation == tau and fam.rotation.as_point3() == (0, 0, 1)

    def test_reflection_coplanar(self):
        A = [P(1, 2), P(3, -1), P(-2, 5)]
        fam = classify_line_family(perturbation_lines(A, [(x, -y) for x, y in A]))
        assert fam.kind is FamilyKind.COPLANAR

    def test_collinear_both(self):
        A = [P(0, 0), P(1, 1), P(3, 3)]
        tau = RotationPoint(P(1, 0), F(2, 3))
        fam = classify_line_family(perturbation_lines(A, [apply_rotation(tau, a) for a in A]))
        assert fam.kind is FamilyKind.BOTH

    def test_neither(self):
        lines = [MotionLine((0, 0), (1, 0)), MotionLine((0, 1), (0, 1)), MotionLine((1, 0), (1, 1))]
        assert classify_line_family(lines).kind is FamilyKind.NEITHER

    def test_translation_family_parallel(self):
        p = [P(0, 0), P(2, 1), P(-1, 3)]
        q = [(x + 1, y - 2) for x, y in p]
        lines = perturbation_lines(p, q)
        assert all(meet_or_parallel(lines[0], other) == Parallel() for other in lines[1:])

    def test_identity_family_vertical(self):
        p = [P(0, 0), P(2, 1), P(-1, 3)]
        assert all(ln.vertical for ln in perturbation_lines(p, p))

    @given(st.lists(points2(), min_size=3, max_size=5, unique=True), points2(), rationals())
    def test_rotation_family_is_concurrent(self, A, c, w):
        tau = RotationPoint(c, w)
        B = [apply_rotation(tau, a) for a in A]
        lines = perturbation_lines(A, B)
        assume(len(set(lines)) == len(lines))
        fam = classify_line_family(lines)
        assert fam.kind in (FamilyKind.CONCURRENT, FamilyKind.BOTH)
        cong = congruence_class(*zip(*[pair_from_line(ln) for ln in lines]))
        expected = Congruence.BOTH_DEGENERATE if fam.kind is FamilyKind.BOTH else Congruence.EQUAL_ORIENTATION
        assert cong is expected

    @given(st.lists(points2(), min_size=3, max_size=5, unique=True), rationals(), rationals())
    def test_reflection_family_is_coplanar(self, A, k, off):
        # reflection across the line y = k x + off, written with rational coefficients
        den = 1 + k * k

        def reflect(p):
            x, y = p
            d = (x + (y - off) * k) / den
            return (2 * d - x, 2 * d * k - y + 2 * off)

        B = [reflect(a) for a in A]
        lines = perturbation_lines(A, B)
        fam = classify_line_family(lines)
        cong = congruence_class(A, B)
        if fam.kind is FamilyKind.COPLANAR:
            assert cong is Congruence.OPPOSITE_ORIENTATION
        else:
            assert fam.kind is FamilyKind.BOTH and cong is Congruence.BOTH_DEGENERATE
        assert common_plane(lines) is not None
