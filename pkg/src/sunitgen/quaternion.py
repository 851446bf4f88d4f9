"""Exact arithmetic in Hamilton's rational quaternions and the Hurwitz order.

The algebra has basis {1, I, J, K} over the rationals, with I*I = J*J = -1
and I*J = K = -J*I.  The reduced norm of w + x*I + y*J + z*K is
w^2 + x^2 + y^2 + z^2.  The Hurwitz order is the lattice spanned by
1, I, J and (1 + I + J + K)/2; its elements are the quaternions whose four
coordinates are either all integers or all half-odd integers.

Everything here is exact: coordinates are `fractions.Fraction`, heights and
absolute values are returned as rationals, and there is no floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

__all__ = [
    "RatQuaternion",
    "HurwitzElement",
    "SPlaceSet",
    "ONE",
    "I",
    "J",
    "K",
    "OMEGA",
    "content_valuation",
    "height",
    "is_s_unit",
    "order_index",
    "parse_quaternion",
    "format_quaternion",
]


def _vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_fraction(r: Fraction, p: int) -> int:
    return _vp(r.numerator, p) - _vp(r.denominator, p)


def _prime_factors(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact rational coordinate")


@dataclass(frozen=True)
class RatQuaternion:
    """A quaternion with exact rational coordinates in the basis {1, I, J, K}."""

    w: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, _as_fraction(getattr(self, name)))

    # -- constructors ------------------------------------------------------

    @classmethod
    def scalar(cls, value) -> "RatQuaternion":
        return cls(_as_fraction(value), Fraction(0), Fraction(0), Fraction(0))

    @classmethod
    def from_string(cls, text: str) -> "RatQuaternion":
        return parse_quaternion(text)

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatQuaternion(self.w + other.w, self.x + other.x,
                             self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return RatQuaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = other.w, other.x, other.y, other.z
        return RatQuaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def __rmul__(self, other):
        # scalars commute, so this only has to handle numbers
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a quaternion by zero")
            return RatQuaternion(self.w / other, self.x / other,
                                 self.y / other, self.z / other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatQuaternion):
            return other
        if isinstance(other, (int, Fraction)):
            return RatQuaternion.scalar(other)
        return NotImplemented

    # -- algebra-specific operations ----------------------------------------

    def conjugate(self) -> "RatQuaternion":
        return RatQuaternion(self.w, -self.x, -self.y, -self.z)

    def reduced_norm(self) -> Fraction:
        return self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2

    def reduced_trace(self) -> Fraction:
        return 2 * self.w

    def inverse(self) -> "RatQuaternion":
        n = self.reduced_norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return RatQuaternion(self.w / n, -self.x / n, -self.y / n, -self.z / n)

    def is_zero(self) -> bool:
        return self.w == 0 and self.x == 0 and self.y == 0 and self.z == 0

    def is_scalar(self) -> bool:
        """True iff the element lies in the center, i.e. is rational."""
        return self.x == 0 and self.y == 0 and self.z == 0

    def coordinates(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w, self.x, self.y, self.z)

    def is_hurwitz(self) -> bool:
        """True iff all coordinates are integers or all are half-odd integers."""
        doubled = [2 * c for c in self.coordinates()]
        if any(d.denominator != 1 for d in doubled):
            return False
        parities = {d.numerator % 2 for d in doubled}
        return len(parities) == 1

    def to_hurwitz(self) -> "HurwitzElement":
        return HurwitzElement.from_quaternion(self)

    def __str__(self) -> str:
        return format_quaternion(self)

    def __repr__(self) -> str:
        return f"RatQuaternion({self})"


@dataclass(frozen=True, order=True)
class HurwitzElement:
    """An element of the Hurwitz order, stored via doubled integer coordinates.

    The element is (a + b*I + c*J + d*K)/2 with a, b, c, d integers of equal
    parity (all even for integral coordinates, all odd for the half-odd coset).
    The doubled storage makes the parity test branch-free and keeps the whole
    order a single integer lattice.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        coords = (self.a, self.b, self.c, self.d)
        if not all(isinstance(v, int) for v in coords):
            raise TypeError("doubled coordinates must be integers")
        if len({v % 2 for v in coords}) != 1:
            raise ValueError(f"coordinates {coords} do not have equal parity")

    @classmethod
    def from_quaternion(cls, q: RatQuaternion) -> "HurwitzElement":
        doubled = [2 * c for c in q.coordinates()]
        if any(d.denominator != 1 for d in doubled):
            raise ValueError(f"{q} is not in the Hurwitz order")
        return cls(*(d.numerator for d in doubled))

    @classmethod
    def from_integral(cls, w: int, x: int, y: int, z: int) -> "HurwitzElement":
        return cls(2 * w, 2 * x, 2 * y, 2 * z)

    def to_quaternion(self) -> RatQuaternion:
        return RatQuaternion(Fraction(self.a, 2), Fraction(self.b, 2),
                             Fraction(self.c, 2), Fraction(self.d, 2))

    def norm(self) -> int:
        return (self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2) // 4

    def conjugate(self) -> "HurwitzElement":
        return HurwitzElement(self.a, -self.b, -self.c, -self.d)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __mul__(self, other):
        if not isinstance(other, HurwitzElement):
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        # numerator product is divisible by 2 because the factors have
        # uniform parity; the result stays in doubled coordinates
        return HurwitzElement(
            (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2) // 2,
            (a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2) // 2,
            (a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2) // 2,
            (a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2) // 2,
        )

    def __neg__(self):
        return HurwitzElement(-self.a, -self.b, -self.c, -self.d)

    def __str__(self) -> str:
        return format_quaternion(self.to_quaternion())


ONE = RatQuaternion(1, 0, 0, 0)
I = RatQuaternion(0, 1, 0, 0)
J = RatQuaternion(0, 0, 1, 0)
K = RatQuaternion(0, 0, 0, 1)
OMEGA = RatQuaternion(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))

HURWITZ_ONE = HurwitzElement(2, 0, 0, 0)


@dataclass(frozen=True)
class SPlaceSet:
    """A finite set of places {infinity, l_1, ..., l_h} given by odd primes.

    The archimedean place is always included implicitly.  The prime 2 is
    excluded because the algebra is nonsplit there.
    """

    primes: tuple[int, ...]

    def __post_init__(self):
        norm = tuple(sorted(set(int(p) for p in self.primes)))
        for p in norm:
            if not is_odd_prime(p):
                raise ValueError(f"{p} is not an odd prime")
        object.__setattr__(self, "primes", norm)

    @classmethod
    def of(cls, *primes: int) -> "SPlaceSet":
        return cls(tuple(primes))

    @property
    def max_norm(self) -> int:
        """Largest finite-place norm in the set (1 when there are none)."""
        return max(self.primes, default=1)

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)


# -- local valuations and heights ------------------------------------------


def content_valuation(q: RatQuaternion, p: int) -> int:
    """Largest e such that p^(-e) * q lies in the p-local Hurwitz order.

    Defined for odd primes only: at odd p the local order is the plain
    coordinate lattice (1/2 is a p-adic unit), so the valuation is the
    minimum p-adic valuation of the nonzero coordinates.
    """
    if not is_odd_prime(p):
        raise ValueError(f"content valuation requires an odd prime, got {p}")
    if q.is_zero():
        raise ValueError("content valuation of zero is undefined")
    return min(_vp_fraction(c, p) for c in q.coordinates() if c != 0)


def _abs2(r: Fraction) -> Fraction:
    """Normalized 2-adic absolute value of a nonzero rational."""
    v = _vp_fraction(r, 2)
    return Fraction(1, 2 ** v) if v >= 0 else Fraction(2 ** (-v))


def height(q: RatQuaternion) -> Fraction:
    """Height of a nonzero quaternion, as an exact rational.

    The height is the product over all completions of max(1, |q|_v^d(v)).
    The archimedean factor is max(1, N(q)); the ramified place 2 contributes
    max(1, |N(q)|_2); each odd prime p contributes p^(-e) when the content
    valuation e is negative and 1 otherwise.  For an element of the Hurwitz
    order with norm at least 1 the height is exactly the reduced norm.
    """
    if q.is_zero():
        raise ValueError("height of zero is undefined")
    n = q.reduced_norm()
    h = max(Fraction(1), n) * max(Fraction(1), _abs2(n))
    den = lcm(*(c.denominator for c in q.coordinates()))
    for p in _prime_factors(den):
        if p == 2:
            continue
        e = content_valuation(q, p)
        if e < 0:
            h *= Fraction(p) ** (-e)
    return h


def is_s_unit(q: RatQuaternion, places: SPlaceSet) -> bool:
    """True iff q is an invertible element of the S-localized Hurwitz order.

    Equivalently: some product of powers of the S-primes clears q into the
    Hurwitz order, and the reduced norm has zero valuation at every prime
    outside S (including 2, where the algebra does not split).
    """
    if q.is_zero():
        return False
    scale = 1
    for p in places.primes:
        e = content_valuation(q, p)
        if e < 0:
            scale *= p ** (-e)
    if not (scale * q).is_hurwitz():
        return False
    n = q.reduced_norm()
    support = set(_prime_factors(n.numerator)) | set(_prime_factors(n.denominator))
    return all(p in places for p in support)


# -- lattice index ------------------------------------------------------------


def _det4(rows: list[list[int]]) -> int:
    """Determinant of a 4x4 integer matrix by cofactor expansion."""

    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    total = 0
    for col in range(4):
        minor = [[rows[r][c] for c in range(4) if c != col] for r in range(1, 4)]
        term = rows[0][col] * det3(minor)
        total += term if col % 2 == 0 else -term
    return total


def order_index(h: HurwitzElement) -> int:
    """Index of the right ideal h*O in the Hurwitz order O.

    Computed as the absolute determinant of right multiplication by h on the
    order, written in the lattice basis {1, I, J, (1+I+J+K)/2}.  Equals the
    square of the reduced norm.
    """
    q = h.to_quaternion()
    if q.is_zero():
        raise ValueError("zero generates a rank-0 ideal; index undefined")
    rows = []
    for basis in (ONE, I, J, OMEGA):
        image = basis * q
        delta = 2 * image.z
        alpha = image.w - image.z
        beta = image.x - image.z
        gamma = image.y - image.z
        coords = (alpha, beta, gamma, delta)
        assert all(c.denominator == 1 for c in coords)
        rows.append([c.numerator for c in coords])
    return abs(_det4(rows))


# -- text format ---------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)(?:\*?([IJK]))?|([IJK]))")


def parse_quaternion(text: str) -> RatQuaternion:
    """Parse `w + x*I + y*J + z*K` with integer or p/q coefficients.

    Whitespace is ignored, terms may appear in any order, and repeated basis
    terms are summed.  K denotes the product I*J.
    """
    s = "".join(text.split())
    if not s:
        raise ValueError("empty quaternion string")
    coeffs = {None: Fraction(0), "I": Fraction(0), "J": Fraction(0), "K": Fraction(0)}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse quaternion at ...{s[pos:]!r}")
        sign, num, basis_a, basis_b = m.groups()
        if not first and not sign:
            raise ValueError(f"missing sign between terms at ...{s[pos:]!r}")
        value = Fraction(num) if num else Fraction(1)
        if sign == "-":
            value = -value
        coeffs[basis_a or basis_b] += value
        pos = m.end()
        first = False
    return RatQuaternion(coeffs[None], coeffs["I"], coeffs["J"], coeffs["K"])


def format_quaternion(q: RatQuaternion) -> str:
    """Canonical printer; round-trips bit-exactly through parse_quaternion."""
    parts: list[str] = []
    for coeff, symbol in ((q.w, None), (q.x, "I"), (q.y, "J"), (q.z, "K")):
        if coeff == 0:
            continue
        mag = abs(coeff)
        if symbol is None:
            body = str(mag)
        elif mag == 1:
            body = symbol
        else:
            body = f"{mag}*{symbol}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(parts) if parts else "0"
