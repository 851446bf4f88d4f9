"""Enumeration of Hurwitz elements by reduced norm.

Norm-m elements are the integer solutions of a^2 + b^2 + c^2 + d^2 = 4m with
all coordinates of equal parity (doubled-coordinate convention).  The count
is 24 times the sum of odd divisors of m; the 24 norm-1 elements form the
unit group of the order (the binary tetrahedral group).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import isqrt

from .errors import VerificationError
from .quaternion import HURWITZ_ONE, HurwitzElement, SPlaceSet

__all__ = [
    "elements_of_norm",
    "units",
    "element_order",
    "unit_group_report",
    "UnitGroupReport",
    "generating_set",
    "elements_of_height_at_most",
    "odd_divisor_sum",
]


def _aligned_start(low: int, parity: int) -> int:
    return low if low % 2 == parity else low + 1


def elements_of_norm(m: int) -> list[HurwitzElement]:
    """All Hurwitz elements of reduced norm m, in lexicographic order."""
    if m < 1:
        raise ValueError("norm must be a positive integer")
    target = 4 * m
    limit = isqrt(target)
    found: list[HurwitzElement] = []
    for parity in (0, 1):
        for a in range(_aligned_start(-limit, parity), limit + 1, 2):
            ra = target - a * a
            if ra < 0:
                continue
            lb = isqrt(ra)
            for b in range(_aligned_start(-lb, parity), lb + 1, 2):
                rb = ra - b * b
                if rb < 0:
                    continue
                lc = isqrt(rb)
                for c in range(_aligned_start(-lc, parity), lc + 1, 2):
                    rc = rb - c * c
                    if rc < 0:
                        continue
                    d = isqrt(rc)
                    if d * d == rc and d % 2 == parity:
                        found.append(HurwitzElement(a, b, c, d))
                        if d:
                            found.append(HurwitzElement(a, b, c, -d))
    found.sort()
    return found


@cache
def units() -> tuple[HurwitzElement, ...]:
    """The 24 units of the Hurwitz order."""
    return tuple(elements_of_norm(1))


def element_order(u: HurwitzElement) -> int:
    """Multiplicative order of a unit."""
    if not u.is_unit():
        raise ValueError("order is only defined for units")
    power = u
    for k in range(1, 25):
        if power == HURWITZ_ONE:
            return k
        power = power * u
    raise VerificationError(f"{u} did not return to 1 within 24 steps")


@dataclass(frozen=True)
class UnitGroupReport:
    count: int
    order_histogram: dict[int, int]
    involutions: int


def unit_group_report() -> UnitGroupReport:
    """Check closure of the 24 norm-1 elements and report their orders.

    Raises VerificationError if the set is not closed under multiplication
    and inversion, or if it has more than one element of order 2.
    """
    group = units()
    member = set(group)
    if len(group) != 24:
        raise VerificationError(f"expected 24 units, found {len(group)}")
    for u in group:
        if u.conjugate() not in member:
            raise VerificationError(f"unit set not closed under inversion at {u}")
        for v in group:
            if u * v not in member:
                raise VerificationError(f"unit set not closed under product {u} * {v}")
    histogram = dict(sorted(Counter(element_order(u) for u in group).items()))
    involutions = histogram.get(2, 0)
    if involutions != 1:
        raise VerificationError(f"expected exactly one involution, found {involutions}")
    return UnitGroupReport(count=len(group), order_histogram=histogram,
                           involutions=involutions)


def generating_set(places: SPlaceSet) -> list[HurwitzElement]:
    """Elements with reduced norm 1 or equal to one of the S-primes."""
    out = list(units())
    for p in places.primes:
        out.extend(elements_of_norm(p))
    out.sort()
    return out


def elements_of_height_at_most(x) -> list[HurwitzElement]:
    """Integral S-units of height up to x (their height equals their norm)."""
    bound = Fraction(x)
    if bound < 1:
        raise ValueError("height bound must be at least 1")
    out: list[HurwitzElement] = []
    for m in range(1, int(bound) + 1):
        out.extend(elements_of_norm(m))
    out.sort()
    return out


def odd_divisor_sum(m: int) -> int:
    """Sum of the odd divisors of m (the norm-class count is 24 times this)."""
    if m < 1:
        raise ValueError("expected a positive integer")
    while m % 2 == 0:
        m //= 2
    return sum(d for d in range(1, m + 1) if m % d == 0)
