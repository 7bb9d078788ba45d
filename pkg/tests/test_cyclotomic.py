"""Exactness laws for the cyclotomic layer.

Expected values here are either classical identities checkable by hand or
values recomputed inside the test by an independent brute-force oracle
(direct group-ring summation, float embedding only as a wide-margin
diagnostic, never as the assertion of record).
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tameps.cyclotomic import (
    CyclotomicNumber,
    EpsilonValue,
    RootOfUnity,
    is_root_of_unity,
    parse_root,
    parse_serialized,
    serialize_cyclotomic,
    serialize_epsilon,
    sqrt_prime_embed,
    sqrt_q_embed,
)
from tameps.errors import ConfigError, ContractError

Z = CyclotomicNumber.zeta
ONE = CyclotomicNumber.one()


def legendre(x, p):
    t = pow(x, (p - 1) // 2, p)
    return 1 if t == 1 else -1


class TestCanonicalForm:
    def test_vanishing_sum_of_pth_roots(self):
        for p in (2, 3, 5, 7):
            total = CyclotomicNumber(p, {e: 1 for e in range(p)})
            assert total.is_zero()

    def test_zeta4_squared_is_minus_one(self):
        assert Z(4) * Z(4) == CyclotomicNumber.rational(-1)

    def test_level_reduction_zeta6(self):
        # zeta_6 = 1 + zeta_3 by the vanishing relation at p = 3
        w = Z(6)
        assert w.level == 3
        assert w == ONE + Z(3)

    def test_embedding_consistency_across_levels(self):
        assert Z(5, 2) == Z(15, 6)
        assert Z(8, 3) == Z(24, 9)

    def test_rationals_collapse_to_level_one(self):
        x = Z(7) + Z(7, 6) + Z(7, 2) + Z(7, 5) + Z(7, 3) + Z(7, 4)
        assert x == CyclotomicNumber.rational(-1)
        assert x.level == 1

    def test_canonical_equality_is_field_equality(self):
        # zeta_3^2 written two ways
        a = Z(3, 2)
        b = -ONE - Z(3)
        assert a == b
        assert hash(a) == hash(b)

    def test_conj_and_galois(self):
        x = Z(5) + 2 * Z(5, 2)
        assert x.conj() == Z(5, 4) + 2 * Z(5, 3)
        assert x.galois(2) == Z(5, 2) + 2 * Z(5, 4)
        with pytest.raises(ConfigError):
            x.galois(5)

    def test_inverse_small(self):
        x = ONE + Z(5)
        assert x * x.inverse() == ONE
        with pytest.raises(ZeroDivisionError):
            CyclotomicNumber.zero().inverse()


coeff_st = st.integers(min_value=-4, max_value=4)
level_st = st.sampled_from([1, 3, 4, 5, 8, 9, 12, 15])


@st.composite
def cyclo_st(draw):
    n = draw(level_st)
    support = draw(st.lists(st.integers(0, n - 1), max_size=4, unique=True))
    return CyclotomicNumber(n, {e: draw(coeff_st) for e in support})


@settings(max_examples=60, deadline=None, derandomize=True)
@given(cyclo_st(), cyclo_st(), cyclo_st())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None, derandomize=True)
@given(cyclo_st(), cyclo_st())
def test_conjugation_is_a_ring_map(a, b):
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


@settings(max_examples=40, deadline=None, derandomize=True)
@given(cyclo_st())
def test_serialization_round_trip(a):
    assert parse_serialized(serialize_cyclotomic(a)) == a


@settings(max_examples=40, deadline=None, derandomize=True)
@given(cyclo_st())
def test_complex_embedding_tracks_ring_ops(a):
    # diagnostic only, but the float image should be consistent
    za = a.embed_complex()
    zb = (a * a).embed_complex()
    assert abs(za * za - zb) < 1e-6 * (1 + abs(za) ** 2)


class TestSqrtEmbedding:
    def test_sqrt5_equals_legendre_gauss_sum(self):
        # oracle: direct quadratic Gauss sum over F_5
        oracle = CyclotomicNumber(5, {x: legendre(x, 5) for x in range(1, 5)})
        s = sqrt_prime_embed(5)
        assert s == oracle
        assert s * s == CyclotomicNumber.rational(5)

    def test_sqrt7_is_minus_i_times_gauss_sum(self):
        oracle = CyclotomicNumber(7, {x: legendre(x, 7) for x in range(1, 7)})
        s = sqrt_prime_embed(7)
        assert s == Z(4, 3) * oracle
        assert s * s == CyclotomicNumber.rational(7)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
    def test_square_and_positivity(self, p):
        s = sqrt_prime_embed(p)
        assert s * s == CyclotomicNumber.rational(p)
        # wide-margin float diagnostic for the sign convention
        assert abs(s.embed_complex() - math.sqrt(p)) < 1e-6

    def test_sqrt_q_even_and_odd_f(self):
        assert sqrt_q_embed(3, 2) == CyclotomicNumber.rational(3)
        assert sqrt_q_embed(5, 3) == 5 * sqrt_prime_embed(5)


class TestEpsilonValue:
    def test_normalize_folds_even_half_powers(self):
        v = EpsilonValue(Z(3), 7, 5)
        assert v.half == 1
        assert v.z == Z(3) * Fraction(1, 49)

    def test_multiplication_accumulates_half_powers(self):
        v = EpsilonValue(Z(3), 7, 1)
        w = v * v
        assert w.half == 0
        assert w.z == Z(3, 2) * Fraction(1, 7)

    def test_cross_characteristic_multiplication_rejected(self):
        with pytest.raises(ContractError):
            EpsilonValue(ONE, 3, 0) * EpsilonValue(ONE, 5, 0)

    def test_sqrt_p_cancels_half_power(self):
        v = EpsilonValue(sqrt_prime_embed(11), 11, 1)
        assert v == EpsilonValue.one(11)

    def test_equality_across_half_parity(self):
        # 5 * 5^(-1/2) equals sqrt(5) embedded exactly
        v = EpsilonValue(CyclotomicNumber.rational(5), 5, 1)
        w = EpsilonValue(sqrt_prime_embed(5), 5, 0)
        assert v == w

    def test_abs_squared_is_real_and_exact(self):
        v = EpsilonValue(ONE + Z(5), 5, 1)
        a2 = v.abs_squared()
        assert a2.conj() == a2
        # |1+zeta_5|^2 = 2 + zeta_5 + zeta_5^4, scaled by 1/5
        assert a2 == (2 + Z(5) + Z(5, 4)) * Fraction(1, 5)

    def test_inverse_unitary_and_general(self):
        v = EpsilonValue(Z(8, 3), 7, 0)
        assert v * v.inverse() == EpsilonValue.one(7)
        w = EpsilonValue(ONE + Z(5), 5, 1)
        assert w * w.inverse() == EpsilonValue.one(5)

    def test_pow_including_negative(self):
        v = EpsilonValue(Z(8), 3, 1)
        assert v ** 4 == EpsilonValue(Z(8, 4), 3, 0) * Fraction(1, 9)
        assert v ** -2 == (v * v).inverse()

    def test_serialization_round_trip(self):
        v = EpsilonValue(Z(12, 5) + 2, 3, 1)
        assert parse_serialized(serialize_epsilon(v)) == v


class TestRootOfUnityDetection:
    def test_plain_roots(self):
        for n, e in [(1, 0), (4, 1), (8, 3), (5, 2), (12, 7)]:
            v = EpsilonValue(Z(n, e) if n > 1 else ONE, 7, 0)
            expected = n // math.gcd(n, e) if n > 1 else 1
            assert is_root_of_unity(v) == expected

    def test_negative_roots(self):
        assert is_root_of_unity(EpsilonValue(-ONE, 5, 0)) == 2
        assert is_root_of_unity(EpsilonValue(-Z(3), 5, 0)) == 6

    def test_multi_term_canonical_root(self):
        # zeta_3^2 has a two-term canonical form but order 3
        assert is_root_of_unity(EpsilonValue(Z(3, 2), 7, 0)) == 3

    def test_wrong_magnitude_is_rejected(self):
        assert is_root_of_unity(EpsilonValue(2 * ONE, 5, 0)) is None
        assert is_root_of_unity(EpsilonValue(ONE, 5, 1)) is None

    def test_unit_circle_non_root_rejected(self):
        # (3+4i)/5 has |.| = 1 but is not an algebraic integer: not a root
        v = EpsilonValue((3 + 4 * Z(4)) * Fraction(1, 5), 5, 0)
        assert v.abs_squared() == ONE
        assert is_root_of_unity(v) is None

    def test_zero_input_rejected(self):
        with pytest.raises(ContractError):
            is_root_of_unity(EpsilonValue(CyclotomicNumber.zero(), 5, 0))


class TestRootExpressionGrammar:
    def test_basic_forms(self):
        assert parse_root("1") == RootOfUnity.one()
        assert parse_root("-1") == RootOfUnity.zeta(2)
        assert parse_root("i") == RootOfUnity.zeta(4)
        assert parse_root("zeta(8)^3") == RootOfUnity.zeta(8, 3)

    def test_products_and_negatives(self):
        assert parse_root("i*i") == RootOfUnity.zeta(2)
        assert parse_root("zeta(3) * zeta(3)^2") == RootOfUnity.one()
        assert parse_root("-zeta(4)^2") == RootOfUnity.one()
        assert parse_root("zeta(8)^-1") == RootOfUnity.zeta(8, 7)

    def test_rejects_garbage(self):
        for bad in ["", "zeta", "zeta(0)", "2", "zeta(8)^^2", "zeta(8)+1"]:
            with pytest.raises(ConfigError):
                parse_root(bad)


class TestRootOfUnityClass:
    def test_group_structure(self):
        a = RootOfUnity.zeta(8, 3)
        b = RootOfUnity.zeta(12, 5)
        assert (a * b).exp == (Fraction(3, 8) + Fraction(5, 12)) % 1
        assert a * a.inverse() == RootOfUnity.one()
        assert (a ** 8) == RootOfUnity.one()
        assert a.order == 8

    def test_to_cyclotomic_is_multiplicative(self):
        a = RootOfUnity.zeta(8, 3)
        b = RootOfUnity.zeta(6, 1)
        assert (a * b).to_cyclotomic() == a.to_cyclotomic() * b.to_cyclotomic()
