"""Finite-field layer: deterministic construction, dlog, traces, embeddings.

Frozen small-field values below were derived by hand (modular arithmetic on
paper) before this module existed, then pinned here.
"""

import pytest
from hypothesis import given, settings, strategies as st

from tameps.errors import ConfigError, ContractError
from tameps.residue import (
    fq_make,
    fq_embed,
    fq_embedding,
    fq_trace_norm,
)


class TestDeterministicConstruction:
    def test_prime_field_modulus_is_x(self):
        F = fq_make(7, 1)
        assert F.modulus == (0, 1)

    def test_f9_modulus(self):
        # hand check: x^2+1 has no root mod 3 and is the value-smallest monic
        assert fq_make(3, 2).modulus == (1, 0, 1)

    def test_f25_modulus(self):
        # x^2+1 has root 2; x^2+2 needs x^2=3, a non-square mod 5
        assert fq_make(5, 2).modulus == (2, 0, 1)

    def test_f9_generator(self):
        F = fq_make(3, 2)
        assert F.g.coeffs == (1, 1)
        # hand powers: (1+x)^2 = 2x, (2x)^2 = -1, so the order is 8
        assert (F.g ** 2).coeffs == (0, 2)
        assert (F.g ** 4) == -F.one
        assert (F.g ** 8) == F.one

    def test_f25_generator_and_powers(self):
        F = fq_make(5, 2)
        assert F.g.coeffs == (1, 1)
        # hand powers mod x^2+2
        assert (F.g ** 4).coeffs == (3, 1)
        assert (F.g ** 8).coeffs == (2, 1)
        assert (F.g ** 12).coeffs == (4, 0)
        assert (F.g ** 24) == F.one

    @pytest.mark.parametrize("p,root", [(3, 2), (5, 2), (7, 3), (13, 2)])
    def test_smallest_primitive_roots(self, p, root):
        assert fq_make(p, 1).g.coeffs == (root,)

    def test_rejects_even_characteristic(self):
        with pytest.raises(ConfigError):
            fq_make(2, 3)

    def test_rejects_composite_characteristic(self):
        with pytest.raises(ConfigError):
            fq_make(15, 1)

    def test_rejects_oversized_field(self):
        with pytest.raises(ConfigError):
            fq_make(3, 13)  # 3^13 > 2^20

    def test_cache_returns_identical_object(self):
        assert fq_make(3, 2) is fq_make(3, 2)


class TestArithmetic:
    def test_dlog_round_trip_f49(self):
        F = fq_make(7, 2)
        for k in range(F.q - 1):
            assert F.dlog(F.gpow(k)) == k

    def test_dlog_of_zero_raises(self):
        F = fq_make(3, 2)
        with pytest.raises(ZeroDivisionError):
            F.dlog(F.zero)

    def test_inverse(self):
        F = fq_make(5, 2)
        for a in F.nonzero_elements():
            assert a * a.inverse() == F.one

    def test_negative_and_zero_powers(self):
        F = fq_make(7, 1)
        a = F.from_int(3)
        assert a ** 0 == F.one
        assert a ** (-1) == a.inverse()
        assert (a ** (-2)) * (a ** 2) == F.one

    def test_frobenius_is_additive_f9(self):
        F = fq_make(3, 2)
        for a in F.elements():
            for b in F.elements():
                assert (a + b).frobenius() == a.frobenius() + b.frobenius()

    @given(st.integers(0, 48), st.integers(0, 48))
    @settings(deadline=None, derandomize=True)
    def test_gpow_is_a_homomorphism(self, i, j):
        F = fq_make(7, 2)
        assert F.gpow(i) * F.gpow(j) == F.gpow(i + j)

    def test_elem_validates_length(self):
        F = fq_make(3, 2)
        with pytest.raises(ConfigError):
            F.elem((1,))


class TestTraceNorm:
    def test_f9_trace_norm_of_x_frozen(self):
        # x^2 = -1 in F_9, so x^3 = -x: Tr(x) = x + x^3 = 0, N(x) = x^4 = 1
        F9, F3 = fq_make(3, 2), fq_make(3, 1)
        x = F9.elem((0, 1))
        tr, nm = fq_trace_norm(x, 1)
        assert tr == F3.zero
        assert nm == F3.one

    def test_trace_additive_norm_multiplicative(self):
        F = fq_make(3, 4)
        elems = [F.gpow(k) for k in range(0, 80, 7)]
        for a in elems:
            for b in elems:
                ta, _ = fq_trace_norm(a, 2)
                tb, _ = fq_trace_norm(b, 2)
                ts, _ = fq_trace_norm(a + b, 2)
                assert ts == ta + tb
                _, na = fq_trace_norm(a, 2)
                _, nb = fq_trace_norm(b, 2)
                _, np_ = fq_trace_norm(a * b, 2)
                assert np_ == na * nb

    def test_norm_is_power_map_on_dlogs(self):
        # N: F_{q^s} -> F_q sends g to a generator power with exponent (q^s-1)/(q-1)
        F, sub = fq_make(5, 2), fq_make(5, 1)
        t = (F.q - 1) // (sub.q - 1)
        emb = fq_embedding(sub, F)
        for k in range(F.q - 1):
            _, nm = fq_trace_norm(F.gpow(k), 1)
            assert emb.apply(nm) == F.gpow(t * k)

    def test_trace_surjective_onto_prime_field(self):
        F = fq_make(7, 3)
        seen = {F.tr_abs(F.gpow(k)) for k in range(0, F.q - 1, 5)}
        assert seen == set(range(7))

    def test_tr_abs_matches_frobenius_sum(self):
        F = fq_make(5, 2)
        for a in F.elements():
            s = a + a.frobenius()
            assert s.coeffs[1] == 0
            assert F.tr_abs(a) == s.coeffs[0]

    def test_rejects_bad_subfield_degree(self):
        F = fq_make(3, 4)
        with pytest.raises(ConfigError):
            fq_trace_norm(F.g, 3)


class TestEmbeddings:
    def test_prime_subfield_fixed(self):
        # the dlog-transport shortcut would send 2 to 3 here; a ring
        # embedding must fix constants
        F5, F25 = fq_make(5, 1), fq_make(5, 2)
        for n in range(5):
            assert fq_embed(F5.from_int(n), F25) == F25.from_int(n)

    def test_embedding_is_a_ring_map(self):
        F9, F81 = fq_make(3, 2), fq_make(3, 4)
        emb = fq_embedding(F9, F81)
        for a in F9.elements():
            for b in F9.elements():
                assert emb.apply(a + b) == emb.apply(a) + emb.apply(b)
                assert emb.apply(a * b) == emb.apply(a) * emb.apply(b)

    def test_tower_compatibility(self):
        # F_3 -> F_9 -> F_81 must agree with the direct F_3 -> F_81
        F3, F9, F81 = fq_make(3, 1), fq_make(3, 2), fq_make(3, 4)
        for a in F3.elements():
            via = fq_embed(fq_embed(a, F9), F81)
            assert via == fq_embed(a, F81)

    def test_pullback_inverts_apply(self):
        F9, F81 = fq_make(3, 2), fq_make(3, 4)
        emb = fq_embedding(F9, F81)
        for a in F9.elements():
            assert emb.pullback(emb.apply(a)) == a

    def test_pullback_rejects_outside_image(self):
        F9, F81 = fq_make(3, 2), fq_make(3, 4)
        emb = fq_embedding(F9, F81)
        with pytest.raises(ContractError):
            emb.pullback(F81.g)  # generator of F_81 is not in F_9

    def test_no_embedding_between_incomparable_fields(self):
        with pytest.raises(ConfigError):
            fq_embedding(fq_make(3, 2), fq_make(3, 3))

    def test_identity_embedding(self):
        F = fq_make(7, 2)
        emb = fq_embedding(F, F)
        assert emb.apply(F.g) == F.g
