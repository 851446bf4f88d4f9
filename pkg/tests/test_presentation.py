from fractions import Fraction
from random import Random

import pytest

from sunitgen.errors import VerificationError
from sunitgen.presentation import (
    GENERATOR_A,
    GENERATOR_B,
    RELATORS,
    RelatorReport,
    Word,
    evaluate,
    is_central,
    rescale_to_s_unit,
    verify_relators,
)
from sunitgen.quaternion import I, ONE, RatQuaternion, SPlaceSet


class TestWord:
    def test_parse_single_letters(self):
        assert Word.parse("a").syllables == (("a", 1),)
        assert Word.parse("a^-1").syllables == (("a", -1),)
        assert Word.parse("a^2 b^-3").syllables == (("a", 2), ("b", -3))

    def test_parse_groups(self):
        w = Word.parse("(b^-1 a^-1 b a^-1)^3")
        assert w.length() == 12
        assert w.syllables[:4] == (("b", -1), ("a", -1), ("b", 1), ("a", -1))

    def test_group_with_negative_power_inverts(self):
        w = Word.parse("(a b)^-1")
        assert w.syllables == (("b", -1), ("a", -1))

    def test_free_reduction(self):
        assert Word.of(("a", 1), ("a", -1)).syllables == ()
        assert Word.of(("a", 1), ("a", 2), ("b", 1)).syllables == (("a", 3), ("b", 1))

    def test_invalid(self):
        with pytest.raises(ValueError):
            Word.parse("c")
        with pytest.raises(ValueError):
            Word.parse("(a b")
        with pytest.raises(ValueError):
            Word.parse("a^")
        with pytest.raises(ValueError):
            Word((("a", 1), ("a", 1)))  # not reduced

    def test_concat_and_inverse(self):
        w1, w2 = Word.parse("a b^-1"), Word.parse("b a^2")
        assert (w1 * w2).syllables == (("a", 3),)
        assert w1.inverse().syllables == (("b", 1), ("a", -1))

    def test_exponent_sum(self):
        w = Word.parse("(b^-1 a^-1 b a^-1)^3")
        assert w.exponent_sum("a") == -6
        assert w.exponent_sum("b") == 0


class TestEvaluate:
    def test_empty_word(self):
        assert evaluate(Word.of(), {"a": GENERATOR_A, "b": GENERATOR_B}) == ONE

    def test_single_generator(self):
        assert evaluate(Word.parse("a"), {"a": GENERATOR_A, "b": GENERATOR_B}) == GENERATOR_A

    def test_cancellation(self):
        w = Word.of(("a", 1)) * Word.of(("a", -1))
        assert evaluate(w, {"a": GENERATOR_A, "b": GENERATOR_B}) == ONE

    def test_homomorphism_on_random_words(self):
        rng = Random(47)
        assignment = {"a": GENERATOR_A, "b": GENERATOR_B}
        for _ in range(60):
            pairs1 = [(rng.choice("ab"), rng.choice([-2, -1, 1, 2])) for _ in range(4)]
            pairs2 = [(rng.choice("ab"), rng.choice([-2, -1, 1, 2])) for _ in range(4)]
            w1, w2 = Word.of(*pairs1), Word.of(*pairs2)
            assert evaluate(w1 * w2, assignment) == evaluate(w1, assignment) * evaluate(w2, assignment)

    def test_zero_assignment_rejected(self):
        with pytest.raises(ZeroDivisionError):
            evaluate(Word.parse("a"), {"a": RatQuaternion(0, 0, 0, 0)})


class TestCentrality:
    def test_examples(self):
        assert is_central(RatQuaternion(Fraction(7, 2), 0, 0, 0))
        assert not is_central(I)

    def test_central_elements_commute(self):
        rng = Random(53)
        from support import random_rat_quaternion
        for _ in range(50):
            c = RatQuaternion.scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
            q = random_rat_quaternion(rng)
            assert c * q == q * c


class TestRelators:
    def test_all_eight_central_nonzero(self):
        reports = verify_relators()
        assert [r.name for r in reports] == [name for name, _ in RELATORS]
        for r in reports:
            assert r.central
            assert r.scalar != 0
            assert r.value == RatQuaternion.scalar(r.scalar)

    def test_scalar_squares_match_norms(self):
        # the square of the scalar must equal N(a)^Ea * N(b)^Eb
        for r in verify_relators():
            ea = r.word.exponent_sum("a")
            eb = r.word.exponent_sum("b")
            assert r.scalar ** 2 == Fraction(12) ** ea * Fraction(180) ** eb

    def test_halved_scalars_are_s_units(self):
        # under the assignment a/2, b/2 every relator is a rational scalar
        # whose support lies in {3, 5}
        for r in verify_relators():
            ea = r.word.exponent_sum("a")
            eb = r.word.exponent_sum("b")
            assert r.halved_scalar == r.scalar / Fraction(2) ** (ea + eb)
            residual = abs(r.halved_scalar)
            num, den = residual.numerator, residual.denominator
            for p in (3, 5):
                while num % p == 0:
                    num //= p
                while den % p == 0:
                    den //= p
            assert num == den == 1

    def test_r6_explicitly(self):
        word = Word.parse("b^-1 a^3 b a^2 b^-1 a b^-1 a^-2 b a^-1 b^-1 a")
        value = evaluate(word, {"a": GENERATOR_A, "b": GENERATOR_B})
        assert value.is_scalar() and not value.is_zero()

    def test_transcription_lengths(self):
        lengths = {name: Word.parse(text).length() for name, text in RELATORS}
        assert lengths == {"r1": 12, "r2": 14, "r3": 14, "r4": 32,
                           "r5": 16, "r6": 16, "r7": 16, "r8": 16}


class TestRescale:
    def test_generator_a(self):
        places = SPlaceSet.of(3, 5)
        scale, witness = rescale_to_s_unit(GENERATOR_A, places)
        assert scale == 2
        assert witness.to_quaternion() == GENERATOR_A / 2
        assert witness.norm() == 3

    def test_generator_b(self):
        places = SPlaceSet.of(3, 5)
        scale, witness = rescale_to_s_unit(GENERATOR_B, places)
        assert scale == 2
        assert witness.norm() == 45

    def test_unit_needs_no_rescale(self):
        scale, witness = rescale_to_s_unit(I, SPlaceSet.of(3))
        assert scale == 1
        assert witness.to_quaternion() == I

    def test_failure_is_none(self):
        # norm 2 can never be rescaled into odd-prime support
        assert rescale_to_s_unit(ONE + I, SPlaceSet.of(3, 5)) is None
        assert rescale_to_s_unit(RatQuaternion(0, 0, 0, 0), SPlaceSet.of(3)) is None

    def test_rescaled_witness_is_s_unit(self):
        from sunitgen.quaternion import is_s_unit
        places = SPlaceSet.of(3, 5)
        rng = Random(59)
        found = 0
        for _ in range(200):
            exps = [rng.randint(0, 2) for _ in range(2)]
            base = (GENERATOR_A ** exps[0]) * (GENERATOR_B ** exps[1])
            result = rescale_to_s_unit(base, places)
            if result is not None:
                scale, witness = result
                assert is_s_unit(witness.to_quaternion(), places)
                found += 1
        assert found > 0
