from fractions import Fraction as F
from itertools import permutations

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from rigidparts.exactgeom import (
    Congruence,
    Line2,
    collinear3,
    congruence_class,
    conic_row,
    conic_through_six,
    det,
    fit_conic,
    format_rational,
    nullspace,
    points_on_two_lines,
    rank,
    rational,
)

from conftest import points2, rationals


def sympy_conic_det(pts):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in conic_row(p)] for p in pts]).det()


class TestRationalLiterals:
    def test_fraction_and_decimal(self):
        assert rational("3/4") == F(3, 4)
        assert rational("0.25") == F(1, 4)
        assert rational(" -7 ") == -7

    def test_zero_denominator(self):
        with pytest.raises(ValueError, match="zero denominator"):
            rational("1/0")

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            rational(0.5)

    @given(rationals(10**6, 10**6))
    def test_format_round_trip(self, x):
        assert rational(format_rational(x)) == x


class TestCollinear:
    @pytest.mark.parametrize(
        "pts, expected",
        [
            (((0, 0), (1, 0), (2, 0)), True),
            (((0, 0), (1, 0), (0, 1)), False),
            (((0, 0), (1, 1), (2, 2)), True),
        ],
    )
    def test_examples(self, pts, expected):
        assert collinear3(*[tuple(map(F, p)) for p in pts]) is expected

    @given(points2(), points2(), points2())
    def test_symmetric(self, a, b, c):
        values = {collinear3(*perm) for perm in permutations((a, b, c))}
        assert len(values) == 1


class TestConic:
    circle = [(1, 0), (-1, 0), (0, 1), (0, -1), (F(3, 5), F(4, 5)), (F(-3, 5), F(4, 5))]
    two_lines = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
    off_conic = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 3), (5, 1)]

    def pts(self, raw):
        return [tuple(map(F, p)) for p in raw]

    def test_circle(self):
        assert conic_through_six(self.pts(self.circle))

    def test_line_pair(self):
        assert conic_through_six(self.pts(self.two_lines))

    def test_off_conic_matches_sympy(self):
        pts = self.pts(self.off_conic)
        oracle = sympy_conic_det(pts)
        assert oracle != 0
        assert det([conic_row(p) for p in pts]) == F(int(oracle.p), int(oracle.q))
        assert not conic_through_six(pts)

    def test_fit_parabola(self):
        pts = [(F(x), F(x * x)) for x in range(-2, 3)]
        c = fit_conic(pts)
        A, B, C, D, E, Fc = c.coefficients
        assert (A, B, C, D, E, Fc) == (1, 0, 0, 0, -1, 0)
        assert not c.degenerate

    def test_fit_line_pair(self):
        c = fit_conic(self.pts(self.two_lines))
        assert c.coefficients == (0, 0, 1, 0, -1, 0)
        assert c.degenerate

    def test_fit_absent(self):
        assert fit_conic(self.pts(self.off_conic)) is None

    @given(st.lists(points2(), min_size=6, max_size=6), rationals(5, 3), rationals(5, 3), rationals(5, 3), rationals(5, 3), points2())
    def test_affine_invariance(self, pts, a, b, c, d, t):
        assume(a * d - b * c != 0)
        moved = [(a * x + b * y + t[0], c * x + d * y + t[1]) for x, y in pts]
        assert conic_through_six(pts) == conic_through_six(moved)

    @given(st.lists(points2(), min_size=5, max_size=5, unique=True))
    def test_five_points_always_fit(self, pts):
        c = fit_conic(pts)
        assert c is not None and all(c.contains(p) for p in pts)


class TestCongruence:
    A = [(F(0), F(0)), (F(2), F(1)), (F(-1), F(3))]

    def test_rotation(self):
        B = [(-y, x) for x, y in self.A]
        assert congruence_class(self.A, B) is Congruence.EQUAL_ORIENTATION

    def test_reflection(self):
        B = [(x, -y) for x, y in self.A]
        assert congruence_class(self.A, B) is Congruence.OPPOSITE_ORIENTATION

    def test_moved_point(self):
        B = list(self.A)
        B[2] = (F(-1), F(4))
        assert congruence_class(self.A, B) is Congruence.NOT_CONGRUENT

    def test_collinear(self):
        A = [(F(0), F(0)), (F(1), F(1)), (F(3), F(3))]
        assert congruence_class(A, A) is Congruence.BOTH_DEGENERATE

    @given(st.lists(points2(), min_size=3, max_size=6, unique=True))
    def test_self(self, A):
        expected = Congruence.BOTH_DEGENERATE if all(collinear3(A[0], A[1], c) for c in A[2:]) else Congruence.EQUAL_ORIENTATION
        assert congruence_class(A, A) is expected


class TestTwoLines:
    def test_horizontal_pair(self):
        pts = [(F(x), F(0)) for x in range(4)] + [(F(x), F(1)) for x in range(4)]
        lines = points_on_two_lines(pts)
        assert set(lines) == {Line2(F(0), F(1), F(0)), Line2(F(0), F(1), F(-1))}

    def test_circle(self):
        pts = [(F(1), F(0)), (F(-1), F(0)), (F(0), F(1)), (F(0), F(-1))]
        pts += [(F(3, 5), F(4, 5)), (F(-3, 5), F(4, 5)), (F(3, 5), F(-4, 5)), (F(-3, 5), F(-4, 5))]
        assert points_on_two_lines(pts) is None

    def test_two_points(self):
        l1, l2 = points_on_two_lines([(F(0), F(0)), (F(3), F(1))])
        assert l1.contains((0, 0)) and l1.contains((3, 1)) and l1 != l2

    @given(st.lists(points2(6, 2), min_size=1, max_size=8, unique=True))
    def test_matches_brute_force(self, pts):
        def brute():
            if len(pts) <= 2:
                return True
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    first = Line2.through(pts[i], pts[j])
                    rest = [p for p in pts if not first.contains(p)]
                    if len(rest) <= 2 or all(collinear3(rest[0], rest[1], r) for r in rest[2:]):
                        return True
            return False

        found = points_on_two_lines(pts)
        assert (found is not None) == brute()
        if found:
            assert all(found[0].contains(p) or found[1].contains(p) for p in pts)


class TestLinearAlgebra:
    @given(st.lists(st.lists(rationals(5, 3), min_size=4, max_size=4), min_size=1, max_size=5))
    def test_rank_and_nullspace_match_sympy(self, M):
        S = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M])
        assert rank(M) == S.rank()
        for v in nullspace(M):
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in M)
        assert len(nullspace(M)) == 4 - S.rank()

    @given(st.lists(st.lists(rationals(5, 3), min_size=3, max_size=3), min_size=3, max_size=3))
    def test_det_matches_sympy(self, M):
        S = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M]).det()
        assert det(M) == F(int(S.p), int(S.q))
