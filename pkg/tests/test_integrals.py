"""Bubble integrals I_a^b, sharp constants, the concentration limit, and
the f^2 coefficient identity."""

import math

import pytest

from hvcert.integrals import (
    DivergentIntegral,
    RadialProfile,
    best_constant,
    best_constant_l1,
    expansion_bracket,
    hardy_constant,
    i_closed,
    i_quadrature,
    i_truncated,
    inte_identity_check,
    k2_inverse_square,
    norme_f2_check,
    radial_yamabe,
    recurrence_check,
    rela_shorthand_report,
    sphere_volume,
    truncation_bound,
)


class TestBubbleIntegrals:
    def test_closed_form_against_quadrature(self):
        for a in range(2, 13):
            for b in range(0, 2 * a - 2, 2):
                closed = i_closed(a, b)
                quad = i_quadrature(a, b)
                assert abs(closed - quad) <= 1e-10 * abs(closed), (a, b)

    def test_known_value(self):
        # I_1^0 = int dt/(1+t^2) = pi/2, but a=1, b=0 needs 2a-b>1: ok
        assert abs(i_closed(1, 0) - math.pi / 2) < 1e-14

    def test_divergence_guards(self):
        with pytest.raises(DivergentIntegral):
            i_closed(2, -1)
        with pytest.raises(DivergentIntegral):
            i_closed(2, 3)    # 2a-b = 1 diverges at infinity

    def test_recurrences(self):
        for a in range(4, 13):
            for b in range(2, 2 * a - 4, 2):
                assert recurrence_check(a, b), (a, b)

    def test_recurrence_guards(self):
        with pytest.raises(DivergentIntegral):
            recurrence_check(5, 0)
        with pytest.raises(DivergentIntegral):
            recurrence_check(3, 3)

    def test_truncation_bound(self):
        # |I_a^b - I_a^b(eps)| <= eps^{2a-b-1} / ((2a-b-1) delta^{2a-b-1})
        for a, b in ((4, 2), (6, 5), (8, 3)):
            for eps in (1e-1, 1e-2, 1e-3):
                tail = i_closed(a, b) - i_truncated(a, b, 1.0, eps)
                bound = truncation_bound(a, b, 1.0, eps)
                # the subtraction floor is ~1e-16 of the full integral
                floor = 1e-15 * i_closed(a, b)
                assert -floor <= tail <= bound * (1 + 1e-9) + floor

    def test_truncated_approaches_full(self):
        full = i_closed(5, 4)
        gaps = [full - i_truncated(5, 4, 1.0, eps)
                for eps in (1e-1, 1e-2, 1e-3)]
        assert gaps[0] > gaps[1] > gaps[2] >= 0


class TestConstants:
    def test_sphere_volumes(self):
        assert abs(sphere_volume(1) - 2 * math.pi) < 1e-14
        assert abs(sphere_volume(2) - 4 * math.pi) < 1e-13
        assert abs(sphere_volume(3) - 2 * math.pi ** 2) < 1e-13

    def test_best_constant_l1_limit(self):
        # K(n, p) -> K(n, 1) as p -> 1
        for n in (3, 5, 8):
            assert abs(best_constant(n, 1.0001) - best_constant_l1(n)) < 1e-3

    def test_hardy(self):
        assert hardy_constant(5, 2) == pytest.approx(2 / 3)
        with pytest.raises(ValueError):
            hardy_constant(3, 3)

    def test_k2_inverse_square_matches_best_constant(self):
        # K(n,2)^{-2} from the closed form equals 1/K(n,2)^2
        for n in range(3, 10):
            assert k2_inverse_square(n) == pytest.approx(
                best_constant(n, 2) ** -2, rel=1e-12)


class TestInteIdentity:
    def test_holds_for_all_n(self):
        for n in range(3, 13):
            assert inte_identity_check(n)

    def test_shorthand_is_inconsistent(self):
        # the volume-factor-free shorthand does not hold; the report says so
        report = rela_shorthand_report(6)
        assert not report["consistent"]
        assert report["as_stated_lhs"] != pytest.approx(
            report["as_stated_rhs"], rel=1e-3)


class TestConcentration:
    def test_within_two_percent(self):
        for n in range(4, 9):
            value = radial_yamabe(RadialProfile(n, 1e-3, 1.0))
            target = k2_inverse_square(n)
            assert abs(value - target) <= 0.02 * target, n

    def test_monotone_in_epsilon(self):
        n = 5
        target = k2_inverse_square(n)
        errors = [abs(radial_yamabe(RadialProfile(n, eps, 1.0)) - target)
                  for eps in (1e-1, 1e-2, 1e-3)]
        assert errors[0] > errors[1] > errors[2]

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            RadialProfile(2, 1e-3, 1.0)
        with pytest.raises(ValueError):
            RadialProfile(5, 2.0, 1.0)


class TestF2Coefficient:
    def test_matches_plus_p2(self):
        for n, omega in ((16, 3), (20, 5), (30, 9)):
            report = norme_f2_check(n, omega)
            assert report["matches_plus_p2"], (n, omega)

    def test_does_not_match_minus_p2(self):
        for n, omega in ((16, 3), (20, 5), (30, 9)):
            report = norme_f2_check(n, omega)
            assert not report["matches_minus_p2"], (n, omega)

    def test_combination_requires_convergence(self):
        with pytest.raises(DivergentIntegral):
            norme_f2_check(12, 3)   # n = 2 omega + 6 diverges


class TestExpansionBracket:
    def test_logarithmic_flag_at_threshold(self):
        br = expansion_bracket(12, 3, 0.0, 1.0, 1.0, 0.0)
        assert br.logarithmic
        br = expansion_bracket(13, 3, 0.0, 1.0, 1.0, 0.0)
        assert not br.logarithmic

    def test_below_threshold_rejected(self):
        with pytest.raises(ValueError):
            expansion_bracket(11, 3, 0.0, 1.0, 1.0, 0.0)

    def test_linear_assembly(self):
        a = expansion_bracket(20, 3, 1.0, 0.0, 0.0, 0.0)
        assert a.value == pytest.approx((20 - 2) ** 2)
        b = expansion_bracket(20, 3, 0.0, 0.0, 1.0, 0.0)
        assert b.value == pytest.approx(4 * 19 * 18)
