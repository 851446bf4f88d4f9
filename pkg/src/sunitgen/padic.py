"""Finite-precision p-adic arithmetic and explicit 2x2 matrix splittings.

At an odd prime p the quaternion algebra splits: I and J map to the integer
matrices [[0,1],[-1,0]] and [[a,b],[b,-a]], where a^2 + b^2 = -1 mod p^k.
The splitting sends the Hurwitz order into the 2x2 p-integral matrices, and
the minimal entry valuation of the image recovers the local absolute value.

Scalars are stored in capped-relative form: value = p^valuation * unit with
the unit known modulo p^prec.  Every operation tracks the worst-case
precision loss and raises PrecisionError instead of returning a silently
degraded result; a result that cancels to zero keeps the absolute precision
to which the cancellation is certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quaternion import RatQuaternion, content_valuation, is_odd_prime

__all__ = [
    "DEFAULT_PRECISION",
    "MAX_PRECISION",
    "PrecisionError",
    "PrecisionOverflowError",
    "SingularMatrixError",
    "PAdicScalar",
    "PAdicMatrix2",
    "SplittingData",
    "solve_sum_of_squares",
    "hensel_lift_splitting",
    "splitting_data",
    "apply_splitting",
    "elementary_divisors",
    "local_abs",
]

DEFAULT_PRECISION = 32
MAX_PRECISION = 4096

_INF = math.inf


class PrecisionError(ArithmeticError):
    """Working precision is insufficient to certify the requested result."""


class PrecisionOverflowError(ValueError):
    """Requested precision exceeds the configured maximum exponent."""


class SingularMatrixError(ArithmeticError):
    """The matrix is exactly singular."""


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PAdicScalar:
    """A p-adic number known to finite precision.

    Nonzero: value = p^val * (unit + O(p^prec)) with unit a unit residue in
    [1, p^prec).  Zero-ish: unit == 0 and val is a certified lower bound on
    the valuation (math.inf for an exact zero).
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val, unit: int, prec: int):
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "PAdicScalar":
        return cls(p, _INF, 0, 0)

    @classmethod
    def zeroish(cls, p: int, abs_bound: int) -> "PAdicScalar":
        return cls(p, abs_bound, 0, 0)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int = DEFAULT_PRECISION) -> "PAdicScalar":
        return cls.from_rational(Fraction(n), p, prec)

    @classmethod
    def from_rational(cls, r: Fraction, p: int,
                      prec: int = DEFAULT_PRECISION) -> "PAdicScalar":
        if prec < 1:
            raise ValueError("precision must be at least 1")
        if prec > MAX_PRECISION:
            raise PrecisionOverflowError(f"precision {prec} exceeds {MAX_PRECISION}")
        r = Fraction(r)
        if r == 0:
            return cls.zero(p)
        vn = _vp_int(r.numerator, p)
        vd = _vp_int(r.denominator, p)
        mod = p ** prec
        num = r.numerator // p ** vn
        den = r.denominator // p ** vd
        unit = num * pow(den, -1, mod) % mod
        return cls(p, vn - vd, unit, prec)

    # -- predicates and accessors -------------------------------------------

    @property
    def is_zeroish(self) -> bool:
        return self.unit == 0

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.val == _INF

    @property
    def abs_prec(self):
        """Exponent a with value known modulo p^a."""
        return self.val if self.is_zeroish else self.val + self.prec

    def valuation(self):
        if self.is_exact_zero:
            return _INF
        if self.is_zeroish:
            raise PrecisionError(
                f"valuation only bounded below by {self.val} at working precision")
        return self.val

    def residue(self, k: int) -> int:
        """Integer representative modulo p^k; requires valuation >= 0."""
        if self.abs_prec < k:
            raise PrecisionError(f"value only known modulo p^{self.abs_prec}, need p^{k}")
        if self.is_zeroish:
            return 0
        if self.val < 0:
            raise ValueError("negative valuation has no integral residue")
        return self.unit * self.p ** self.val % self.p ** k

    def lift(self) -> Fraction:
        """The canonical rational lift p^val * unit (0 for zero-ish values)."""
        if self.is_zeroish:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "PAdicScalar"):
        if self.p != other.p:
            raise ValueError("mixed primes in p-adic arithmetic")

    def __add__(self, other: "PAdicScalar") -> "PAdicScalar":
        self._check(other)
        p = self.p
        ap = min(self.abs_prec, other.abs_prec)
        if ap == _INF:
            return PAdicScalar.zero(p)
        vals = [x.val for x in (self, other) if not x.is_zeroish]
        if not vals:
            return PAdicScalar.zeroish(p, ap)
        base = min(vals)
        rel = ap - base
        if rel <= 0:
            raise PrecisionError("addition lost all relative precision")
        mod = p ** rel
        total = 0
        for x in (self, other):
            if not x.is_zeroish:
                total += x.unit * p ** (x.val - base)
        total %= mod
        if total == 0:
            return PAdicScalar.zeroish(p, ap)
        w = _vp_int(total, p)
        unit = total // p ** w % p ** (rel - w)
        return PAdicScalar(p, base + w, unit, rel - w)

    def __neg__(self) -> "PAdicScalar":
        if self.is_zeroish:
            return self
        return PAdicScalar(self.p, self.val, (-self.unit) % self.p ** self.prec,
                           self.prec)

    def __sub__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self + (-other)

    def __mul__(self, other: "PAdicScalar") -> "PAdicScalar":
        self._check(other)
        p = self.p
        if self.is_zeroish or other.is_zeroish:
            # O(p^a) * p^v u = O(p^(a+v)); an exact zero absorbs everything
            if self.is_exact_zero or other.is_exact_zero:
                return PAdicScalar.zero(p)
            if self.is_zeroish and other.is_zeroish:
                return PAdicScalar.zeroish(p, self.val + other.val)
            bound = self.val if self.is_zeroish else other.val
            shift = other.val if self.is_zeroish else self.val
            return PAdicScalar.zeroish(p, bound + shift)
        prec = min(self.prec, other.prec)
        unit = self.unit * other.unit % self.p ** prec
        return PAdicScalar(p, self.val + other.val, unit, prec)

    def inverse(self) -> "PAdicScalar":
        if self.is_exact_zero:
            raise ZeroDivisionError("inverse of p-adic zero")
        if self.is_zeroish:
            raise PrecisionError("cannot invert a value indistinguishable from zero")
        mod = self.p ** self.prec
        return PAdicScalar(self.p, -self.val, pow(self.unit, -1, mod), self.prec)

    def congruent(self, other: "PAdicScalar", k: int) -> bool:
        """True iff self - other is divisible by p^k at working precision."""
        diff = self - other
        if diff.is_zeroish:
            if diff.val < k:
                raise PrecisionError("congruence undecidable at working precision")
            return True
        return diff.val >= k

    def __repr__(self):
        if self.is_exact_zero:
            return f"PAdicScalar(0; p={self.p})"
        if self.is_zeroish:
            return f"PAdicScalar(O({self.p}^{self.val}))"
        return f"PAdicScalar({self.unit}*{self.p}^{self.val} + O({self.p}^{self.abs_prec}))"


class PAdicMatrix2:
    """A 2x2 matrix of PAdicScalar entries sharing one prime."""

    __slots__ = ("p", "entries")

    def __init__(self, p: int, entries):
        entries = tuple(entries)
        if len(entries) != 4:
            raise ValueError("need four entries (row major)")
        for e in entries:
            if e.p != p:
                raise ValueError("entry prime mismatch")
        self.p = p
        self.entries = entries

    @classmethod
    def from_rational(cls, rows, p: int, prec: int = DEFAULT_PRECISION) -> "PAdicMatrix2":
        (a, b), (c, d) = rows
        return cls(p, [PAdicScalar.from_rational(Fraction(v), p, prec)
                       for v in (a, b, c, d)])

    def __mul__(self, other: "PAdicMatrix2") -> "PAdicMatrix2":
        if self.p != other.p:
            raise ValueError("mixed primes in matrix product")
        a11, a12, a21, a22 = self.entries
        b11, b12, b21, b22 = other.entries
        return PAdicMatrix2(self.p, [
            a11 * b11 + a12 * b21, a11 * b12 + a12 * b22,
            a21 * b11 + a22 * b21, a21 * b12 + a22 * b22,
        ])

    def det(self) -> PAdicScalar:
        a11, a12, a21, a22 = self.entries
        return a11 * a22 - a12 * a21

    def min_valuation(self):
        """Certified minimum valuation over the four entries."""
        exact_vals = [e.val for e in self.entries if not e.is_zeroish]
        bounds = [e.val for e in self.entries if e.is_zeroish]
        if not exact_vals:
            if all(b == _INF for b in bounds):
                raise SingularMatrixError("matrix is exactly zero")
            raise PrecisionError("all entries vanish at working precision")
        m = min(exact_vals)
        if any(b < m for b in bounds):
            raise PrecisionError("zero-ish entry bound below the candidate minimum")
        return m

    def abs_prec(self):
        return min(e.abs_prec for e in self.entries)

    def __repr__(self):
        return f"PAdicMatrix2(p={self.p}, {list(self.entries)!r})"


@dataclass(frozen=True)
class SplittingData:
    """The matrix splitting at an odd prime, to precision p^prec.

    rho(I) = [[0,1],[-1,0]] and rho(J) = [[a,b],[b,-a]] with
    a^2 + b^2 + 1 = 0 mod p^prec; rho(K) follows as rho(I)rho(J).
    """

    p: int
    prec: int
    a: int
    b: int

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        mod = self.p ** self.prec
        if (self.a ** 2 + self.b ** 2 + 1) % mod != 0:
            raise ValueError("a^2 + b^2 + 1 does not vanish at the stated precision")

    def modulus(self) -> int:
        return self.p ** self.prec

    def i_matrix(self):
        return ((0, 1), (-1, 0))

    def j_matrix(self):
        return ((self.a, self.b), (self.b, -self.a))

    def k_matrix(self):
        a, b = self.a, self.b
        return ((b, -a), (-a, -b))

    def integer_image(self, w: int, x: int, y: int, z: int) -> tuple[int, int, int, int]:
        """Row-major residues mod p^prec of the image of w + x*I + y*J + z*K."""
        mod = self.modulus()
        a, b = self.a, self.b
        return (
            (w + a * y + b * z) % mod,
            (x + b * y - a * z) % mod,
            (-x + b * y - a * z) % mod,
            (w - a * y - b * z) % mod,
        )


def solve_sum_of_squares(p: int) -> tuple[int, int]:
    """Smallest (x, y) with x^2 + y^2 = -1 mod p, x >= 1 then y minimal.

    x starts at 1 so the first coordinate is a unit, which keeps the Newton
    derivative 2x invertible for the precision lift.
    """
    if not is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    min_root: dict[int, int] = {}
    for y in range(p - 1, -1, -1):
        min_root[y * y % p] = y
    for x in range(1, p):
        t = (-1 - x * x) % p
        if t in min_root:
            return x, min_root[t]
    raise AssertionError(f"no unit solution of x^2+y^2=-1 mod {p}")  # unreachable


def hensel_lift_splitting(p: int, prec: int = DEFAULT_PRECISION) -> SplittingData:
    """Lift the mod-p solution of a^2 + b^2 = -1 to precision p^prec.

    Newton iteration on the first coordinate only (its derivative 2a is a
    unit); the second coordinate stays fixed.
    """
    if prec < 1:
        raise ValueError("precision must be at least 1")
    if prec > MAX_PRECISION:
        raise PrecisionOverflowError(f"precision {prec} exceeds {MAX_PRECISION}")
    a, b = solve_sum_of_squares(p)
    cur = 1
    while cur < prec:
        cur = min(2 * cur, prec)
        mod = p ** cur
        f = (a * a + b * b + 1) % mod
        a = (a - f * pow(2 * a, -1, mod)) % mod
    return SplittingData(p=p, prec=prec, a=a % p ** prec, b=b)


@lru_cache(maxsize=None)
def splitting_data(p: int, prec: int = DEFAULT_PRECISION) -> SplittingData:
    return hensel_lift_splitting(p, prec)


def apply_splitting(q: RatQuaternion, split: SplittingData) -> PAdicMatrix2:
    """Image of q under the splitting, as a p-adic matrix.

    Denominators divisible by p are fine: the valuation bookkeeping carries
    them, and the determinant of the image equals the reduced norm of q to
    working precision.
    """
    p, prec = split.p, split.prec
    w, x, y, z = [PAdicScalar.from_rational(c, p, prec) for c in q.coordinates()]
    a = PAdicScalar.from_int(split.a, p, prec)
    b = PAdicScalar.from_int(split.b, p, prec)
    ay, bz = a * y, b * z
    by, az = b * y, a * z
    return PAdicMatrix2(p, [w + ay + bz, x + by - az, -x + by - az, w - ay - bz])


def elementary_divisors(m: PAdicMatrix2) -> tuple[int, int]:
    """Exponents (e1, e2) of the diagonal normal form of an invertible matrix.

    e1 is the minimum entry valuation, e2 = val(det) - e1, and e1 <= e2.
    """
    e1 = m.min_valuation()
    det = m.det()
    if det.is_exact_zero:
        raise SingularMatrixError("matrix has determinant zero")
    if det.is_zeroish:
        raise PrecisionError("determinant vanishes at working precision")
    e2 = det.valuation() - e1
    assert e1 <= e2
    return e1, e2


def local_abs(q: RatQuaternion, p: int, prec: int = DEFAULT_PRECISION) -> Fraction:
    """Local absolute value |q|_p = p^(-e1) via the matrix splitting.

    Computed from the minimal entry valuation of the split image; agrees
    with p^(-content_valuation) computed on coordinates.
    """
    if q.is_zero():
        raise ValueError("local absolute value of zero is undefined")
    split = splitting_data(p, prec)
    e1 = apply_splitting(q, split).min_valuation()
    return Fraction(p) ** (-e1)
