"""Shared helpers and independent oracles for the test suite.

The oracles here are deliberately written with different algorithms than the
library code they check (structure-constant table instead of the expanded
product formula, full-box scan instead of the pruned enumeration, and so on).
"""

from fractions import Fraction
from itertools import product
from math import isqrt
from random import Random

from sunitgen.quaternion import HurwitzElement, RatQuaternion

# multiplication table of the basis {1, I, J, K}: entry [i][j] is a pair
# (sign, index) with 1 -> 0, I -> 1, J -> 2, K -> 3
BASIS_TABLE = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def table_multiply(q1: RatQuaternion, q2: RatQuaternion) -> RatQuaternion:
    """Reference product driven by the basis multiplication table."""
    out = [Fraction(0)] * 4
    for i, c1 in enumerate(q1.coordinates()):
        if c1 == 0:
            continue
        for j, c2 in enumerate(q2.coordinates()):
            if c2 == 0:
                continue
            sign, idx = BASIS_TABLE[i][j]
            out[idx] += sign * c1 * c2
    return RatQuaternion(*out)


def random_rat_quaternion(rng: Random, span: int = 24, max_den: int = 12,
                          nonzero: bool = True) -> RatQuaternion:
    while True:
        coords = [Fraction(rng.randint(-span, span), rng.randint(1, max_den))
                  for _ in range(4)]
        q = RatQuaternion(*coords)
        if not nonzero or not q.is_zero():
            return q


def random_hurwitz(rng: Random, span: int = 20, nonzero: bool = True) -> HurwitzElement:
    while True:
        parity = rng.randint(0, 1)
        coords = [2 * rng.randint(-span // 2, span // 2) + parity for _ in range(4)]
        h = HurwitzElement(*coords)
        if not nonzero or h.norm() != 0:
            return h


def box_scan_norm_classes(max_norm: int) -> dict[int, list[HurwitzElement]]:
    """Naive full-box scan: every Hurwitz element of norm 1..max_norm.

    Iterates the complete coordinate cube |a|,|b|,|c|,|d| <= 2*sqrt(max_norm)
    and filters by the parity and norm conditions, with no pruning.
    """
    limit = isqrt(4 * max_norm)
    classes: dict[int, list[HurwitzElement]] = {m: [] for m in range(1, max_norm + 1)}
    rng4 = range(-limit, limit + 1)
    for a, b, c, d in product(rng4, repeat=4):
        if not (a % 2 == b % 2 == c % 2 == d % 2):
            continue
        four_norm = a * a + b * b + c * c + d * d
        if four_norm % 4 != 0:
            continue
        m = four_norm // 4
        if 1 <= m <= max_norm:
            classes[m].append(HurwitzElement(a, b, c, d))
    for elems in classes.values():
        elems.sort()
    return classes
