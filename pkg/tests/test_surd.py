import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypvol.surd import (
    Interval,
    MultiSurd,
    SurdMonomial,
    galois_conjugate,
    parse_surd,
    squarefree_decompose,
)
from hypvol.errors import PrecisionExhausted


RADICANDS = [1, 2, 3, 5, 6, 7, 10, 13, 26]

coeffs = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=16
)
surds = st.builds(
    lambda pairs: MultiSurd(dict(pairs)),
    st.lists(st.tuples(st.sampled_from(RADICANDS), coeffs), max_size=4),
)


def test_squarefree_decompose():
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(8) == (2, 2)
    assert squarefree_decompose(26) == (26, 1)
    assert squarefree_decompose(36) == (1, 6)
    assert squarefree_decompose(360) == (10, 6)


def test_canonicalization_folds_square_factors():
    assert MultiSurd.sqrt(8) == MultiSurd.sqrt(2, 2)
    assert MultiSurd.sqrt(9) == MultiSurd(3)
    assert MultiSurd({2: 1, 8: Fraction(-1, 2)}).is_zero()


def test_monomial_requires_squarefree():
    SurdMonomial(Fraction(1, 4), 26)
    with pytest.raises(ValueError):
        SurdMonomial(Fraction(1), 8)


def test_mul_gcd_reduction():
    # sqrt(2)*sqrt(26) = 2*sqrt(13)
    assert MultiSurd.sqrt(2) * MultiSurd.sqrt(26) == MultiSurd.sqrt(13, 2)


def test_mul_square_of_monomial():
    w = MultiSurd.sqrt(26, Fraction(1, 4))
    assert w * w == MultiSurd(Fraction(13, 8))


def test_mul_golden_ratio_square():
    # ((1 + sqrt 5)/4)^2 = 3/8 + sqrt(5)/8, cross-checked against floats
    x = MultiSurd({1: Fraction(1, 4), 5: Fraction(1, 4)})
    sq = x * x
    assert sq == MultiSurd({1: Fraction(3, 8), 5: Fraction(1, 8)})
    assert math.isclose(float(sq), float(x) ** 2, rel_tol=1e-14)


def test_sign_basics():
    assert MultiSurd(0).sign() == 0
    assert (MultiSurd.sqrt(26, Fraction(1, 4)) - 1).sign() == 1
    assert (MultiSurd(3) - MultiSurd.sqrt(2, 2)).sign() == 1
    assert (MultiSurd.sqrt(2, 2) - 3).sign() == -1


def test_sign_tight_difference():
    # sqrt(2) + sqrt(3) vs sqrt(5 + 2*sqrt(6)) are equal; perturb slightly
    x = MultiSurd.sqrt(2) + MultiSurd.sqrt(3) - MultiSurd(Fraction(31463, 10000))
    assert x.sign() == (1 if math.sqrt(2) + math.sqrt(3) > 3.1463 else -1)


def test_sign_precision_exhausted():
    x = MultiSurd.sqrt(2) - MultiSurd(Fraction(141421356237309504880168872, 10**26))
    with pytest.raises(PrecisionExhausted):
        x.sign(start_prec=16, max_prec=32)


def test_inverse_and_division():
    x = MultiSurd({1: 1, 5: 1})
    assert x * x.inverse() == MultiSurd(1)
    y = MultiSurd({2: Fraction(3, 7), 13: Fraction(-1, 2), 1: 2})
    assert (y / y) == MultiSurd(1)
    with pytest.raises(ZeroDivisionError):
        MultiSurd(0).inverse()


def test_pow():
    x = MultiSurd({1: 1, 2: 1})
    assert x ** 0 == MultiSurd(1)
    assert x ** 3 == x * x * x
    assert x ** -2 == (x * x).inverse()


def test_interval_contains_value_at_every_precision():
    rng = random.Random(42)
    for _ in range(50):
        x = MultiSurd(
            {rng.choice(RADICANDS): Fraction(rng.randint(-40, 40), rng.randint(1, 9))
             for _ in range(rng.randint(0, 4))}
        )
        ref = x.to_mpf(512)
        for prec in (64, 128, 256, 512):
            box = x.to_interval(prec)
            assert box.contains(ref)
        # float() conversion sits inside any reasonable-precision box
        fbox = x.to_interval(64)
        slack = 8 * abs(float(x)) * 2.0 ** -52 + 1e-300
        assert fbox.lo - slack <= float(x) <= fbox.hi + slack


def test_interval_endpoints_ordered():
    import mpmath

    with pytest.raises(ValueError):
        Interval(mpmath.mpf(2), mpmath.mpf(1))


@settings(max_examples=200, deadline=None)
@given(surds, surds, surds)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


@settings(max_examples=200, deadline=None)
@given(surds)
def test_square_positive(x):
    assert (x * x).sign() == (0 if x.is_zero() else 1)


@settings(max_examples=150, deadline=None)
@given(surds, surds, st.sets(st.sampled_from([2, 3, 5, 7, 13]), max_size=3))
def test_galois_conjugate_is_ring_homomorphism(a, b, flips):
    assert galois_conjugate(a * b, flips) == galois_conjugate(a, flips) * galois_conjugate(b, flips)
    assert galois_conjugate(a + b, flips) == galois_conjugate(a, flips) + galois_conjugate(b, flips)


def test_galois_conjugate_examples():
    x = MultiSurd({1: 1, 5: 1})
    assert galois_conjugate(x, {5}) == MultiSurd({1: 1, 5: -1})
    q = MultiSurd(Fraction(22, 7))
    assert galois_conjugate(q, {2, 3}) == q
    y = MultiSurd({2: 1, 3: Fraction(1, 2), 6: -2, 1: 5})
    for flips in ({2}, {3}, {6}, {2, 3}):
        assert galois_conjugate(galois_conjugate(y, flips), flips) == y


def test_galois_conjugate_flips_composite_radicand():
    y = MultiSurd.sqrt(26)
    assert galois_conjugate(y, {26}) == -y
    # the induced character also moves sqrt(2) consistently: chi(2) = -1
    z = MultiSurd.sqrt(2) + MultiSurd.sqrt(26)
    flipped = galois_conjugate(z, {26})
    assert flipped == -z or flipped == MultiSurd.sqrt(2) - MultiSurd.sqrt(26)


def test_galois_conjugate_inconsistent_flip_set():
    x = MultiSurd.sqrt(2) + MultiSurd.sqrt(3) + MultiSurd.sqrt(6)
    with pytest.raises(ValueError):
        galois_conjugate(x, {2, 3, 6})


def test_parse_surd():
    assert parse_surd("sqrt(26)/4") == MultiSurd.sqrt(26, Fraction(1, 4))
    assert parse_surd("3/2") == MultiSurd(Fraction(3, 2))
    assert parse_surd("1/4 + 1/4*sqrt(5)") == MultiSurd({1: Fraction(1, 4), 5: Fraction(1, 4)})
    assert parse_surd("3 - 2*sqrt(2)") == MultiSurd({1: 3, 2: -2})
    assert parse_surd("2*sqrt(8)") == MultiSurd.sqrt(2, 4)
    assert parse_surd("-sqrt(2)") == MultiSurd.sqrt(2, -1)


@pytest.mark.parametrize("bad", ["sqrt(-2)", "sqrt 2", "2 +", "x", "sqrt(2)!", "()"])
def test_parse_surd_rejects(bad):
    with pytest.raises(ValueError):
        parse_surd(bad)


def test_comparison_operators():
    assert MultiSurd.sqrt(2) < MultiSurd(2)
    assert MultiSurd.sqrt(2) > 1
    assert MultiSurd(Fraction(3, 2)) <= MultiSurd(Fraction(3, 2))
