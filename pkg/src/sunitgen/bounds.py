"""Explicit height-bound constants for S-unit generators of division algebras.

Inputs are the shape of a central simple division algebra over a number
field: the field degree n, the algebra degree d (square root of the
dimension), the number s of ramified real places, the counts r1/r2 of real
and complex places, and the covolume of the order lattice under the
normalized measure on the archimedean algebra.

The pipeline scales a product of balls until Minkowski's lattice point
theorem applies, bounds the archimedean norms of box elements, and combines
a handful of operator-norm constants into two final numbers: a threshold on
finite-place norms that must belong to S, and a height bound below which
S-unit generators are guaranteed to exist.  All reals are computed with
mpmath at a configurable number of digits (default 64) plus guard digits,
so every reported value carries an absolute error well below 1e-30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp, mpf, mpmathify

__all__ = [
    "AlgebraShape",
    "SupConstants",
    "BoundReport",
    "BoxScaleBelowOneError",
    "DEFAULT_DIGITS",
    "volume_constant",
    "box_scale",
    "max_box_norm",
    "max_box_norm_coarse",
    "distortion_bounds",
    "archimedean_distortion",
    "sup_constants",
    "generator_height_bound",
    "closed_form_coefficients",
    "covolume_exponent",
    "bound_report",
]

DEFAULT_DIGITS = 64
GUARD_DIGITS = 15


class BoxScaleBelowOneError(ValueError):
    """The closed-form coefficients are only derived for box scale >= 1."""


@dataclass(frozen=True)
class AlgebraShape:
    """Shape parameters of a central simple division algebra over a number field.

    n: degree of the center over the rationals
    d: degree of the algebra (dimension d^2 over the center)
    s: number of real places where the algebra stays a division algebra
    r1, r2: number of real and complex places (n = r1 + 2*r2)
    covolume: volume of the archimedean algebra modulo the order lattice
        (equals the square root of the absolute lattice discriminant);
        accepted as int, Fraction, str or mpf so no precision is lost
    """

    n: int
    d: int
    s: int
    r1: int
    r2: int
    covolume: object = 1

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("degrees n and d must be positive")
        if self.r1 < 0 or self.r2 < 0 or self.n != self.r1 + 2 * self.r2:
            raise ValueError(f"need n = r1 + 2*r2, got n={self.n}, r1={self.r1}, r2={self.r2}")
        if not 0 <= self.s <= self.r1:
            raise ValueError(f"need 0 <= s <= r1, got s={self.s}, r1={self.r1}")
        if self.s > 0 and self.d < 2:
            raise ValueError("a ramified real place forces algebra degree d >= 2")
        if mpmathify(self.covolume) <= 0:
            raise ValueError("covolume must be positive")


def _pow(base, exponent: Fraction):
    """base ** exponent with an exact rational exponent."""
    if exponent == 0:
        return mpf(1)
    return mp.power(base, mpf(exponent.numerator) / exponent.denominator)


def volume_constant(shape: AlgebraShape, digits: int = DEFAULT_DIGITS):
    """Volume of the unit-scale product of balls in the archimedean algebra.

    The box of scale c has volume volume_constant * c^(d^2 * (n - s/2)):
    each split real place contributes (2c)^(d^2), each ramified real place
    (2*pi^2*c^2)^((d/2)^2), and each complex place (2*pi*c^2)^(d^2).
    """
    d2 = shape.d ** 2
    with mp.workdps(digits + GUARD_DIGITS):
        value = mpf(2) ** (d2 * (shape.r1 - shape.s))
        value *= _pow(2 * mp.pi ** 2, Fraction(d2 * shape.s, 4))
        value *= (2 * mp.pi) ** (d2 * shape.r2)
        return +value


def box_scale(shape: AlgebraShape, digits: int = DEFAULT_DIGITS):
    """Scale making the box volume exactly meet the Minkowski threshold.

    Solves volume_constant * c^(d^2*(n - s/2)) = 2^(d^2*n) * covolume, so
    the box is just large enough to contain a nonzero lattice point.
    """
    d2 = shape.d ** 2
    with mp.workdps(digits + GUARD_DIGITS):
        z = volume_constant(shape, digits)
        base = mpf(2) ** (d2 * shape.n) * mpmathify(shape.covolume) / z
        return +_pow(base, Fraction(2, d2 * (2 * shape.n - shape.s)))


def max_box_norm(shape: AlgebraShape, scale=None, digits: int = DEFAULT_DIGITS):
    """Smallest norm cap the box supports, using only place types present.

    A box element has archimedean norm at most max_box_norm^([kv:R]/n) at
    each place v.  Split real places contribute ((c*d)^(d^2))^n, ramified
    real places ((d*c/2)^(d^2/2))^n, complex places ((d*c^2)^(d^2))^(n/2);
    absent place types contribute nothing.
    """
    d, n, d2 = shape.d, shape.n, shape.d ** 2
    with mp.workdps(digits + GUARD_DIGITS):
        c = box_scale(shape, digits) if scale is None else mpmathify(scale)
        candidates = []
        if shape.r1 - shape.s > 0:
            candidates.append(_pow(c * d, Fraction(d2 * n)))
        if shape.s > 0:
            candidates.append(_pow(c * d / 2, Fraction(d2 * n, 2)))
        if shape.r2 > 0:
            candidates.append(_pow(d * c ** 2, Fraction(d2 * n, 2)))
        return +max(candidates)


def max_box_norm_coarse(shape: AlgebraShape, scale=None, digits: int = DEFAULT_DIGITS):
    """Uniform norm cap max(c*d, sqrt(d*c/2))^(n*d^2), independent of which
    place types are present.  Dominates max_box_norm when all types occur;
    kept for reproducing the coarse closed forms."""
    d, n, d2 = shape.d, shape.n, shape.d ** 2
    with mp.workdps(digits + GUARD_DIGITS):
        c = box_scale(shape, digits) if scale is None else mpmathify(scale)
        if 2 * c * d >= 1:
            return +_pow(c * d, Fraction(n * d2))
        return +_pow(c * d / 2, Fraction(n * d2, 2))


def distortion_bounds(kind: str, m: int) -> tuple[int, int]:
    """Bounds (delta1, delta2) on the archimedean operator-norm distortions.

    delta1 caps |yy'| / (|y| |y'|) and delta2 caps the adjugate growth
    |det'(y) y^-1| / |y|^(m-1) on m x m matrices over the local algebra.
    `kind` is one of 'real-split', 'complex', 'ramified-H'.  The returned
    values are exact integers (the caps, not the minimal constants).
    """
    if m < 1:
        raise ValueError("matrix size m must be positive")
    degrees = {"real-split": 1, "complex": 2, "ramified-H": 1}
    if kind not in degrees:
        raise ValueError(f"unknown local algebra kind {kind!r}")
    deg = degrees[kind]
    delta1 = m ** deg
    delta2 = 2 ** (deg * m * (m - 1))
    if kind != "ramified-H":
        # over a field the adjugate entries are (m-1)! term sums
        delta2 = min(delta2, math.factorial(m - 1) ** deg)
    return delta1, delta2


def archimedean_distortion(shape: AlgebraShape, digits: int = DEFAULT_DIGITS):
    """Product over archimedean places of the distortion-constant bounds.

    Equals ((d-1)! * d)^n times (d * 2^((d/2)(d-2)) / (4*(d-1)!))^s; the
    correction factor accounts for the ramified real places, where the local
    matrices are half-size over the quaternions.
    """
    d, n, s = shape.d, shape.n, shape.s
    with mp.workdps(digits + GUARD_DIGITS):
        fact = mpf(math.factorial(d - 1))
        value = (fact * d) ** n
        if s:
            ram = d * _pow(mpf(2), Fraction(d * (d - 2), 2)) / (4 * fact)
            value *= ram ** s
        return +value


def _finite_norm_scale(shape: AlgebraShape, max_norm, digits: int):
    """max finite norm raised to (largest archimedean local degree)/d."""
    exponent = Fraction(2 if shape.s > 0 else 1, shape.d)
    with mp.workdps(digits + GUARD_DIGITS):
        return +_pow(mpmathify(max_norm), exponent)


@dataclass(frozen=True)
class SupConstants:
    """Suprema entering the generator height bound.

    t1 caps box coordinates, t2 the archimedean size of the topological
    generators, t3/t3_prime the finite integral factors (1 by the choice of
    a maximal order), t4 the finite generator norms (1: generators are
    integral), t5 the box reduced norms and t6 the combined archimedean
    supremum.  t6_coarse is the closed-form cap m' * max(1, (c*d)^(n*d)).
    """

    t1: object
    t2: object
    t3: object
    t3_prime: object
    t4: object
    t5: object
    t6: object
    t6_coarse: object
    max_finite_norm: object
    finite_norm_scale: object


def sup_constants(shape: AlgebraShape, scale=None, norm_cap=None,
                  max_finite_norm=1, digits: int = DEFAULT_DIGITS) -> SupConstants:
    """Evaluate the six suprema for the product-of-balls box.

    `max_finite_norm` is the largest norm of a finite place in S (1 when S
    has no finite places).  t6 is computed exactly: the supremum over subsets
    of the archimedean places factors into an independent max per place.
    """
    d, n = shape.d, shape.n
    with mp.workdps(digits + GUARD_DIGITS):
        c = box_scale(shape, digits) if scale is None else mpmathify(scale)
        m_x = max_box_norm(shape, c, digits) if norm_cap is None else mpmathify(norm_cap)
        t1 = max(mpf(1), c)
        t5 = max(mpf(1), _pow(m_x, Fraction(1, d * n)))
        m_prime = _finite_norm_scale(shape, max_finite_norm, digits)
        t2 = _pow(m_prime, Fraction(1, n))
        one = mpf(1)
        t6 = one
        # per-place choice between the box factor and the norm factor
        for count, box_exp, deg in (
            (shape.r1 - shape.s, Fraction(d), 1),
            (shape.s, Fraction(d, 2), 1),
            (shape.r2, Fraction(2 * d), 2),
        ):
            if count:
                factor = max(_pow(t1, box_exp) * t2 ** deg, t5 ** deg)
                t6 *= factor ** count
        t6_coarse = m_prime * max(one, _pow(c * d, Fraction(n * d)))
        return SupConstants(
            t1=+t1, t2=+t2, t3=one, t3_prime=one, t4=one, t5=+t5,
            t6=+t6, t6_coarse=+t6_coarse,
            max_finite_norm=mpmathify(max_finite_norm),
            finite_norm_scale=+m_prime,
        )


def generator_height_bound(shape: AlgebraShape, sup: SupConstants,
                           digits: int = DEFAULT_DIGITS):
    """Height below which S-units generate, from the supremum constants."""
    with mp.workdps(digits + GUARD_DIGITS):
        mu = archimedean_distortion(shape, digits)
        return +(mu * sup.t6 * sup.t3 * sup.t3_prime * sup.t4)


def closed_form_coefficients(shape: AlgebraShape, digits: int = DEFAULT_DIGITS):
    """Coefficients (f1, f2) of covolume^e in the closed-form bounds.

    f1 scales the threshold on finite-place norms that must lie in S, f2 the
    generator height bound.  Only derived when the box scale is at least 1;
    otherwise BoxScaleBelowOneError is raised.
    """
    d, n, s, r2 = shape.d, shape.n, shape.s, shape.r2
    with mp.workdps(digits + GUARD_DIGITS):
        c = box_scale(shape, digits)
        if c < 1:
            raise BoxScaleBelowOneError(
                f"box scale {mp.nstr(c, 8)} < 1: closed-form coefficients unavailable")
        complex_part = _pow(2 / mp.pi, Fraction(2 * n * d * r2, 2 * n - s))
        ramified_part = _pow(2 * mp.sqrt(2) / mp.pi, Fraction(n * d * s, 2 * n - s))
        f1 = mpf(d) ** (n * d) * complex_part * ramified_part
        f2 = (mpf(d) ** (n * d + n + s)
              * mpf(math.factorial(d - 1)) ** (n - s)
              * _pow(mpf(2), Fraction(s * (d * d - 2 * d - 4), 2))
              * complex_part * ramified_part)
        return +f1, +f2


def covolume_exponent(shape: AlgebraShape) -> Fraction:
    """Exponent e = 2n / (d(2n - s)) of the covolume in the final bounds."""
    e = Fraction(2 * shape.n, shape.d * (2 * shape.n - shape.s))
    assert e <= 1
    return e


@dataclass(frozen=True)
class BoundReport:
    """Every derived constant of the bound pipeline, at stated precision.

    Real values are mpmath floats computed with `digits` significant digits
    plus guard digits.  covolume_exponent is an exact rational.  The closed
    form fields are None when the box scale is below 1.
    """

    shape: AlgebraShape
    digits: int
    volume_factor: object
    box_scale: object
    box_scale_below_one: bool
    max_box_norm: object
    max_box_norm_coarse: object
    covolume_exponent: Fraction
    t1: object
    t2: object
    t3: object
    t3_prime: object
    t4: object
    t5: object
    t6: object
    t6_coarse: object
    distortion_product: object
    max_finite_norm: object
    finite_norm_scale: object
    place_norm_threshold: object
    no_finite_places_below_2: bool
    height_bound: object
    f1: Optional[object]
    f2: Optional[object]
    place_norm_threshold_closed_form: Optional[object]
    height_bound_closed_form: Optional[object]

    def to_json_dict(self) -> dict:
        def fmt(v):
            if v is None:
                return None
            with mp.workdps(self.digits + GUARD_DIGITS):
                return mp.nstr(mpmathify(v), self.digits)

        return {
            "precision_digits": self.digits,
            "shape": {
                "n": self.shape.n, "d": self.shape.d, "s": self.shape.s,
                "r1": self.shape.r1, "r2": self.shape.r2,
                "covolume": str(self.shape.covolume),
            },
            "volume_factor": fmt(self.volume_factor),
            "box_scale": fmt(self.box_scale),
            "box_scale_below_one": self.box_scale_below_one,
            "max_box_norm": fmt(self.max_box_norm),
            "max_box_norm_coarse": fmt(self.max_box_norm_coarse),
            "covolume_exponent": str(self.covolume_exponent),
            "t1": fmt(self.t1),
            "t2": fmt(self.t2),
            "t3": fmt(self.t3),
            "t3_prime": fmt(self.t3_prime),
            "t4": fmt(self.t4),
            "t5": fmt(self.t5),
            "t6": fmt(self.t6),
            "t6_coarse": fmt(self.t6_coarse),
            "distortion_product": fmt(self.distortion_product),
            "max_finite_norm": fmt(self.max_finite_norm),
            "finite_norm_scale": fmt(self.finite_norm_scale),
            "place_norm_threshold": fmt(self.place_norm_threshold),
            "no_finite_places_below_2": self.no_finite_places_below_2,
            "height_bound": fmt(self.height_bound),
            "f1": fmt(self.f1),
            "f2": fmt(self.f2),
            "place_norm_threshold_closed_form": fmt(self.place_norm_threshold_closed_form),
            "height_bound_closed_form": fmt(self.height_bound_closed_form),
        }


def bound_report(shape: AlgebraShape, finite_norms: Sequence[int] = (),
                 max_finite_norm=None, digits: int = DEFAULT_DIGITS,
                 strict: bool = True) -> BoundReport:
    """Assemble the full report for a shape and a set of finite-place norms.

    `finite_norms` lists the norms of the finite places of S (primes for a
    rational center); alternatively pass `max_finite_norm` directly.  With
    strict=True a box scale below 1 raises BoxScaleBelowOneError from the
    closed-form branch; with strict=False the closed-form fields are None.

    Threshold semantics: S must contain every finite place whose norm is at
    most place_norm_threshold.  The `no_finite_places_below_2` flag is
    decided with outward rounding, so enlarging S is the failure mode, never
    omitting a required place.
    """
    if max_finite_norm is None:
        max_finite_norm = max(finite_norms, default=1)
    elif finite_norms:
        raise ValueError("pass either finite_norms or max_finite_norm, not both")
    if mpmathify(max_finite_norm) < 1:
        raise ValueError("the maximal finite norm is at least 1")

    with mp.workdps(digits + GUARD_DIGITS):
        z = volume_constant(shape, digits)
        c = box_scale(shape, digits)
        m_x = max_box_norm(shape, c, digits)
        m_x_coarse = max_box_norm_coarse(shape, c, digits)
        sup = sup_constants(shape, c, m_x, max_finite_norm, digits)
        mu = archimedean_distortion(shape, digits)
        hb = generator_height_bound(shape, sup, digits)
        e = covolume_exponent(shape)
        threshold = _pow(m_x, Fraction(1, shape.d))
        # outward rounding: only declare "no finite places needed" when the
        # threshold is below 2 by more than the numerical error margin
        slack = mpf(10) ** (5 - digits)
        no_places = bool(threshold * (1 + slack) + slack < 2)

        f1 = f2 = threshold_closed = hb_closed = None
        c_below_one = bool(c < 1)
        try:
            f1, f2 = closed_form_coefficients(shape, digits)
        except BoxScaleBelowOneError:
            if strict:
                raise
        if f1 is not None:
            covol_e = _pow(mpmathify(shape.covolume), e)
            threshold_closed = +(f1 * covol_e)
            hb_closed = +(f2 * sup.finite_norm_scale * covol_e)

        return BoundReport(
            shape=shape,
            digits=digits,
            volume_factor=z,
            box_scale=c,
            box_scale_below_one=c_below_one,
            max_box_norm=m_x,
            max_box_norm_coarse=m_x_coarse,
            covolume_exponent=e,
            t1=sup.t1, t2=sup.t2, t3=sup.t3, t3_prime=sup.t3_prime,
            t4=sup.t4, t5=sup.t5, t6=sup.t6, t6_coarse=sup.t6_coarse,
            distortion_product=mu,
            max_finite_norm=sup.max_finite_norm,
            finite_norm_scale=sup.finite_norm_scale,
            place_norm_threshold=+threshold,
            no_finite_places_below_2=no_places,
            height_bound=hb,
            f1=f1,
            f2=f2,
            place_norm_threshold_closed_form=threshold_closed,
            height_bound_closed_form=hb_closed,
        )
