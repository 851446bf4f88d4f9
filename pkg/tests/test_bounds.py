from fractions import Fraction
from random import Random

import pytest
from mpmath import mp, mpf

from sunitgen.bounds import (
    AlgebraShape,
    BoxScaleBelowOneError,
    archimedean_distortion,
    bound_report,
    box_scale,
    closed_form_coefficients,
    covolume_exponent,
    distortion_bounds,
    generator_height_bound,
    max_box_norm,
    max_box_norm_coarse,
    sup_constants,
    volume_constant,
)

HAMILTON = AlgebraShape(n=1, d=2, s=1, r1=1, r2=0, covolume=2)
TOL = mpf(10) ** -20


def close(got, want, tol=TOL):
    return abs(mpf(got) - mpf(want)) < tol


def valid_shapes(max_n=8, max_d=6):
    for n in range(1, max_n + 1):
        for r2 in range(n // 2 + 1):
            r1 = n - 2 * r2
            for d in range(1, max_d + 1):
                for s in range(0, min(n, r1) + 1):
                    if s > 0 and d < 2:
                        continue
                    yield AlgebraShape(n=n, d=d, s=s, r1=r1, r2=r2, covolume=1)


class TestShapeValidation:
    def test_place_count_consistency(self):
        with pytest.raises(ValueError):
            AlgebraShape(n=2, d=1, s=0, r1=1, r2=1)
        with pytest.raises(ValueError):
            AlgebraShape(n=1, d=1, s=1, r1=1, r2=0)  # s>0 forces d>=2
        with pytest.raises(ValueError):
            AlgebraShape(n=1, d=2, s=2, r1=1, r2=0)  # s > r1
        with pytest.raises(ValueError):
            AlgebraShape(n=1, d=2, s=0, r1=1, r2=0, covolume=0)

    def test_string_covolume_accepted(self):
        AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume="2.236067977")


class TestVolumeConstant:
    def test_hamilton(self):
        with mp.workdps(40):
            assert close(volume_constant(HAMILTON), 2 * mp.pi ** 2)

    def test_single_real_place(self):
        shape = AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume=1)
        assert close(volume_constant(shape), 2)

    def test_single_complex_place(self):
        shape = AlgebraShape(n=2, d=1, s=0, r1=0, r2=1, covolume=1)
        with mp.workdps(40):
            assert close(volume_constant(shape), 2 * mp.pi)


class TestBoxScale:
    def test_hamilton(self):
        with mp.workdps(40):
            assert close(box_scale(HAMILTON), 4 / mp.pi)

    def test_rational_unit_case(self):
        # 2^(d^2 n) * covolume / z = 2 * 1 / 2 = 1, so the scale is 1
        shape = AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume=1)
        assert close(box_scale(shape), 1)

    def test_homogeneity(self):
        rng = Random(61)
        with mp.workdps(40):
            for shape in (HAMILTON, AlgebraShape(n=2, d=2, s=0, r1=2, r2=0, covolume=3)):
                t = mpf(rng.randint(2, 9)) / rng.randint(1, 4)
                exponent = Fraction(shape.d ** 2) * (Fraction(shape.n) - Fraction(shape.s, 2))
                scaled_covol = mpf(shape.covolume) * t ** (exponent.numerator / mpf(exponent.denominator))
                scaled = AlgebraShape(n=shape.n, d=shape.d, s=shape.s,
                                      r1=shape.r1, r2=shape.r2, covolume=scaled_covol)
                assert close(box_scale(scaled), t * box_scale(shape), tol=mpf(10) ** -18)


class TestMaxBoxNorm:
    def test_hamilton(self):
        with mp.workdps(40):
            assert close(max_box_norm(HAMILTON), 16 / mp.pi ** 2)
            assert close(max_box_norm_coarse(HAMILTON), (8 / mp.pi) ** 4)

    def test_trivial_real(self):
        shape = AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume=1)
        assert close(max_box_norm(shape, scale=1), 1)

    def test_trivial_complex(self):
        shape = AlgebraShape(n=2, d=1, s=0, r1=0, r2=1, covolume=1)
        assert close(max_box_norm(shape, scale=1), 1)

    def test_coarse_dominates_when_all_types_present(self):
        rng = Random(67)
        with mp.workdps(80):
            for _ in range(40):
                r2 = rng.randint(1, 2)
                s = rng.randint(1, 2)
                r1 = s + rng.randint(1, 2)
                n = r1 + 2 * r2
                d = 2 * rng.randint(1, 2)
                covol = mpf(rng.randint(1, 50)) / rng.randint(1, 5)
                shape = AlgebraShape(n=n, d=d, s=s, r1=r1, r2=r2, covolume=covol)
                assert max_box_norm_coarse(shape) >= max_box_norm(shape) * (1 - mpf(10) ** -30)


class TestDistortion:
    def test_examples(self):
        assert distortion_bounds("real-split", 2) == (2, 1)
        assert distortion_bounds("ramified-H", 1) == (1, 1)
        assert distortion_bounds("complex", 3) == (9, 4)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            distortion_bounds("real-split", 0)
        with pytest.raises(ValueError):
            distortion_bounds("quaternionic", 2)

    def test_archimedean_product_examples(self):
        assert close(archimedean_distortion(HAMILTON), 1)
        assert close(archimedean_distortion(AlgebraShape(n=1, d=1, s=0, r1=1, r2=0)), 1)
        assert close(archimedean_distortion(AlgebraShape(n=2, d=2, s=0, r1=2, r2=0)), 4)

    def test_matches_per_place_delta_product(self):
        # product over places of (delta1*delta2)^(local degree), using the
        # per-kind bounds, must reproduce the closed form
        for shape in valid_shapes(max_n=5, max_d=5):
            if shape.s > 0 and shape.d % 2 != 0:
                continue  # half-size quaternionic blocks need even d
            with mp.workdps(40):
                product = mpf(1)
                d1, d2 = distortion_bounds("real-split", shape.d)
                product *= mpf(d1 * d2) ** (shape.r1 - shape.s)
                d1, d2 = distortion_bounds("complex", shape.d)
                product *= mpf(d1 * d2)  ** shape.r2
                if shape.s:
                    d1, d2 = distortion_bounds("ramified-H", shape.d // 2)
                    product *= mpf(d1 * d2) ** (2 * shape.s)
                assert close(archimedean_distortion(shape), product,
                             tol=product * mpf(10) ** -30)


class TestSupConstants:
    def test_hamilton_archimedean_only(self):
        with mp.workdps(40):
            sup = sup_constants(HAMILTON)
            four_over_pi = 4 / mp.pi
            assert close(sup.t1, four_over_pi)
            assert close(sup.t5, four_over_pi)
            assert close(sup.t6, four_over_pi)
            assert sup.t2 == sup.t3 == sup.t3_prime == sup.t4 == 1

    def test_hamilton_with_finite_places(self):
        with mp.workdps(40):
            sup = sup_constants(HAMILTON, max_finite_norm=5)
            assert close(sup.t2, 5)
            assert close(sup.t6, 20 / mp.pi)
            assert close(sup.finite_norm_scale, 5)

    def test_all_floors(self):
        shape = AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume="0.25")
        sup = sup_constants(shape)
        for value in (sup.t1, sup.t2, sup.t3, sup.t3_prime, sup.t4, sup.t5, sup.t6):
            assert close(value, 1)

    def test_t_constants_at_least_one(self):
        for shape in valid_shapes(max_n=4, max_d=4):
            sup = sup_constants(shape, max_finite_norm=3)
            assert sup.t1 >= 1 and sup.t2 >= 1 and sup.t5 >= 1 and sup.t6 >= 1


class TestHeightBounds:
    def test_hamilton_bound(self):
        with mp.workdps(40):
            report = bound_report(HAMILTON)
            assert close(report.height_bound, 4 / mp.pi)
            assert report.height_bound < 2

    def test_hamilton_bound_with_primes(self):
        with mp.workdps(40):
            report = bound_report(HAMILTON, finite_norms=[3, 5])
            assert close(report.height_bound, 20 / mp.pi)

    def test_d1_bound_is_t6(self):
        shape = AlgebraShape(n=2, d=1, s=0, r1=2, r2=0, covolume=7)
        with mp.workdps(40):
            sup = sup_constants(shape, max_finite_norm=3)
            assert close(generator_height_bound(shape, sup), sup.t6)


class TestClosedForms:
    def test_hamilton_coefficients(self):
        with mp.workdps(40):
            f1, f2 = closed_form_coefficients(HAMILTON)
            assert close(f1, 32 / mp.pi ** 2)
            assert close(f2, 32 / mp.pi ** 2)

    def test_commutative_coefficients(self):
        with mp.workdps(40):
            for n, r2 in ((1, 0), (2, 1), (3, 1)):
                shape = AlgebraShape(n=n, d=1, s=0, r1=n - 2 * r2, r2=r2, covolume=5)
                f1, f2 = closed_form_coefficients(shape)
                expected = (2 / mp.pi) ** r2
                assert close(f1, expected)
                assert close(f2, expected)

    def test_trivial_case(self):
        shape = AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume=1)
        f1, f2 = closed_form_coefficients(shape)
        assert close(f1, 1) and close(f2, 1)

    def test_scale_below_one_raises(self):
        shape = AlgebraShape(n=1, d=1, s=0, r1=1, r2=0, covolume="0.25")
        with pytest.raises(BoxScaleBelowOneError):
            closed_form_coefficients(shape)
        with pytest.raises(BoxScaleBelowOneError):
            bound_report(shape)
        report = bound_report(shape, strict=False)
        assert report.box_scale_below_one
        assert report.f1 is None and report.height_bound_closed_form is None

    def test_threshold_closed_form_matches_coarse_norm_cap(self):
        # f1 * covolume^e must equal the coarse norm cap to the power 1/d
        rng = Random(71)
        with mp.workdps(45):
            for _ in range(25):
                n = rng.randint(1, 4)
                shape = AlgebraShape(n=n, d=rng.choice([1, 2, 3]), s=0,
                                     r1=n, r2=0, covolume=rng.randint(1, 60))
                report = bound_report(shape, strict=False)
                if report.f1 is None:
                    continue
                want = mp.power(report.max_box_norm_coarse, mpf(1) / shape.d)
                assert close(report.place_norm_threshold_closed_form, want,
                             tol=abs(want) * mpf(10) ** -25 + mpf(10) ** -25)


class TestReport:
    def test_exponent_examples(self):
        assert covolume_exponent(HAMILTON) == 1
        assert covolume_exponent(AlgebraShape(n=1, d=1, s=0, r1=1, r2=0)) == 1
        assert covolume_exponent(AlgebraShape(n=3, d=2, s=2, r1=3, r2=0)) == Fraction(3, 4)

    def test_exponent_at_most_one_on_grid(self):
        for shape in valid_shapes():
            assert covolume_exponent(shape) <= 1

    def test_hamilton_threshold(self):
        with mp.workdps(40):
            report = bound_report(HAMILTON)
            assert close(report.place_norm_threshold, 4 / mp.pi)
            assert report.no_finite_places_below_2

    def test_monotonicity_in_covolume_and_norms(self):
        with mp.workdps(40):
            shape_small = AlgebraShape(n=2, d=2, s=1, r1=2, r2=0, covolume=4)
            shape_big = AlgebraShape(n=2, d=2, s=1, r1=2, r2=0, covolume=9)
            r_small = bound_report(shape_small)
            r_big = bound_report(shape_big)
            assert r_big.height_bound_closed_form > r_small.height_bound_closed_form
            r_norm = bound_report(shape_small, finite_norms=[11])
            assert r_norm.height_bound_closed_form > r_small.height_bound_closed_form

    def test_lenstra_specialization(self):
        # for a commutative algebra the log of the closed-form bound is
        # (1/2) log(disc) + log(max norm) + r2 log(2/pi)
        # discs are kept above (pi/2)^(2*r2) so the box scale stays >= 1,
        # as it does for genuine number-field discriminants
        with mp.workdps(60):
            for n in range(1, 6):
                for r2 in range(n // 2 + 1):
                    for disc in (8, 12, 49, 1000):
                        for m_s in (1, 2, 9):
                            covol = mp.sqrt(disc)
                            shape = AlgebraShape(n=n, d=1, s=0, r1=n - 2 * r2,
                                                 r2=r2, covolume=covol)
                            report = bound_report(shape, max_finite_norm=m_s)
                            got = mp.log(report.height_bound_closed_form)
                            want = (mp.log(disc) / 2 + mp.log(m_s)
                                    + r2 * mp.log(2 / mp.pi))
                            assert abs(got - want) < TOL

    def test_json_round_trip(self):
        import json
        report = bound_report(HAMILTON, finite_norms=[3])
        payload = report.to_json_dict()
        text = json.dumps(payload)
        parsed = json.loads(text)
        assert parsed["precision_digits"] == 64
        assert parsed["shape"]["covolume"] == "2"
        assert parsed["covolume_exponent"] == "1"
        assert parsed["t4"] == "1.0"
        # deterministic: a second run produces identical serialization
        assert json.dumps(bound_report(HAMILTON, finite_norms=[3]).to_json_dict()) == text

    def test_input_validation(self):
        with pytest.raises(ValueError):
            bound_report(HAMILTON, finite_norms=[3], max_finite_norm=5)
        with pytest.raises(ValueError):
            bound_report(HAMILTON, max_finite_norm=0)
