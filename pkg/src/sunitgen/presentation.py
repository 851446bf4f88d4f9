"""Two-generator words and the relator verification for S = {3, 5}.

The S-unit group for the primes {3, 5} is generated (modulo center) by the
images of a = -1 + I - J - 3K and b = -9 - 7I - J + 7K, subject to eight
relators.  The reduced norms of a and b are 12 and 180, so a and b are only
S-units after halving; accordingly a relator word evaluates to a nonzero
rational scalar rather than to 1, and the verification checks exactly that.
Each report also records the value the relator takes under the halved
assignment a/2, b/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import VerificationError
from .quaternion import (
    HurwitzElement,
    RatQuaternion,
    SPlaceSet,
    content_valuation,
    is_s_unit,
)

__all__ = [
    "GENERATOR_A",
    "GENERATOR_B",
    "RELATORS",
    "Word",
    "evaluate",
    "is_central",
    "RelatorReport",
    "verify_relators",
    "rescale_to_s_unit",
]

GENERATOR_A = RatQuaternion(-1, 1, -1, -3)
GENERATOR_B = RatQuaternion(-9, -7, -1, 7)

# relator words, stored as data so the transcription is reviewable in one place
RELATORS: tuple[tuple[str, str], ...] = (
    ("r1", "(b^-1 a^-1 b a^-1)^3"),
    ("r2", "(b^-1 a^-2 b a^-1 b^-1 a^-1)^2"),
    ("r3", "(a^-1 b^-1 a^-1 b^-1 a^-1 b a^-1)^2"),
    ("r4", "b^-1 a b a b^-1 a^-1 b^2 a b^-1 a b a^2 b^-1 a b a b^-1 a^2 b a^2 "
           "b^-1 a^-1 b a^-2 b^-1 a^-2"),
    ("r5", "(b a^2 b^-1 a b a^-1 b)^2"),
    ("r6", "b^-1 a^3 b a^2 b^-1 a b^-1 a^-2 b a^-1 b^-1 a"),
    ("r7", "b^-2 a^-1 b a^-1 b^-1 a b a^2 b^-2 a^-2 b a^-1"),
    ("r8", "a b^-1 a^2 b a^-1 b^-1 a^-2 b a^-2 b^-1 a b a"),
)


def _reduce(pairs) -> tuple[tuple[str, int], ...]:
    out: list[list] = []
    for gen, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the generators a and b."""

    syllables: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for gen, exp in self.syllables:
            if gen not in ("a", "b"):
                raise ValueError(f"unknown generator {gen!r}")
            if not isinstance(exp, int) or exp == 0:
                raise ValueError("exponents must be nonzero integers")
        if self.syllables != _reduce(self.syllables):
            raise ValueError("word is not freely reduced")

    @classmethod
    def of(cls, *pairs) -> "Word":
        return cls(_reduce(pairs))

    @classmethod
    def parse(cls, text: str) -> "Word":
        pairs, pos = _parse_sequence(text.replace(" ", ""), 0)
        if pos != len(text.replace(" ", "")):
            raise ValueError(f"trailing input in word: {text!r}")
        return cls(_reduce(pairs))

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.syllables + other.syllables))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.syllables if g == gen)

    def length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)


def _parse_sequence(s: str, pos: int):
    pairs: list[tuple[str, int]] = []
    while pos < len(s) and s[pos] != ")":
        if s[pos] == "(":
            inner, pos = _parse_sequence(s, pos + 1)
            if pos >= len(s) or s[pos] != ")":
                raise ValueError("unbalanced parenthesis in word")
            pos += 1
            exp, pos = _parse_exponent(s, pos)
            if exp < 0:
                inner = [(g, -e) for g, e in reversed(inner)]
                exp = -exp
            pairs.extend(inner * exp)
        elif s[pos] in ("a", "b"):
            gen = s[pos]
            exp, pos = _parse_exponent(s, pos + 1)
            pairs.append((gen, exp))
        else:
            raise ValueError(f"unexpected character {s[pos]!r} in word")
    return pairs, pos


def _parse_exponent(s: str, pos: int):
    if pos >= len(s) or s[pos] != "^":
        return 1, pos
    pos += 1
    start = pos
    if pos < len(s) and s[pos] == "-":
        pos += 1
    while pos < len(s) and s[pos].isdigit():
        pos += 1
    if pos == start or s[start:pos] == "-":
        raise ValueError("missing exponent after ^")
    return int(s[start:pos]), pos


def evaluate(word: Word, assignment: Mapping[str, RatQuaternion]) -> RatQuaternion:
    """Exact product of generator powers; inverses via quaternion inversion."""
    for value in assignment.values():
        if value.is_zero():
            raise ZeroDivisionError("generator assigned the zero quaternion")
    result = RatQuaternion(1, 0, 0, 0)
    for gen, exp in word.syllables:
        result = result * assignment[gen] ** exp
    return result


def is_central(q: RatQuaternion) -> bool:
    """True iff q commutes with everything, i.e. is a rational scalar."""
    return q.is_scalar()


@dataclass(frozen=True)
class RelatorReport:
    name: str
    word: Word
    value: RatQuaternion
    scalar: Fraction
    halved_scalar: Fraction

    @property
    def central(self) -> bool:
        return self.value.is_scalar()


def verify_relators() -> list[RelatorReport]:
    """Evaluate all eight relators and check each is a nonzero central scalar.

    halved_scalar is the value under the assignment a/2, b/2 (each letter of
    exponent e contributes 2^-e).  Raises VerificationError if any relator is
    non-central or zero.
    """
    assignment = {"a": GENERATOR_A, "b": GENERATOR_B}
    reports = []
    for name, text in RELATORS:
        word = Word.parse(text)
        value = evaluate(word, assignment)
        if not is_central(value):
            raise VerificationError(f"relator {name} is not central: {value}")
        if value.is_zero():
            raise VerificationError(f"relator {name} evaluated to zero")
        scalar = value.w
        total_exp = word.exponent_sum("a") + word.exponent_sum("b")
        halved = scalar * Fraction(2) ** (-total_exp)
        reports.append(RelatorReport(name=name, word=word, value=value,
                                     scalar=scalar, halved_scalar=halved))
    return reports


def rescale_to_s_unit(q: RatQuaternion, places: SPlaceSet):
    """Find a rational c = 2^i * product of S-primes with q/c an S-unit witness.

    Returns (c, hurwitz) with q/c in the order and its norm supported on the
    S-primes, or None when no such scalar exists.  The exponents are forced:
    the norm must become a 2-unit (fixing i) and the odd exponents are the
    content valuations (making q/c primitive at each S-prime).
    """
    if q.is_zero():
        return None
    norm = q.reduced_norm()
    v2 = 0
    num, den = norm.numerator, norm.denominator
    while num % 2 == 0:
        num //= 2
        v2 += 1
    while den % 2 == 0:
        den //= 2
        v2 -= 1
    if v2 % 2 != 0:
        return None
    scale = Fraction(2) ** (v2 // 2)
    for p in places.primes:
        scale *= Fraction(p) ** content_valuation(q, p)
    candidate = q / scale
    if not candidate.is_hurwitz():
        return None
    if not is_s_unit(candidate, places):
        return None
    return scale, HurwitzElement.from_quaternion(candidate)
