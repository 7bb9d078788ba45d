"""Gauss sums, local constants, norm duals, lambda factors.

Expected values here were fixed ahead of the implementation: residue
Gauss sums from the square/nonsquare split of small prime fields, local
constants from the classical quadratic sums, lambda values by evaluating
the dual-character product by hand.  The slow reference summation
brute_epsilon goes through the additive character's own evaluation path
and shares no folding code with the production summation.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tameps.abelian import (
    ResAddChar,
    ResMultChar,
    compose_trace,
    conductor2_characters,
    davenport_hasse_check,
    deligne_twist_check,
    gauss_sum,
    lambda_closed_form,
    lambda_product,
    lamprecht_tate_epsilon,
    legendre_residue,
    norm_group,
    tate_epsilon,
)
from tameps.characters import (
    AdditiveChar,
    TableChar,
    TameChar,
    char_conductor,
    find_c,
    psi_standard,
)
from tameps.cyclotomic import (
    CyclotomicNumber,
    EpsilonValue,
    RootOfUnity,
    is_root_of_unity,
    sqrt_prime_embed,
)
from tameps.errors import ConfigError, ContractError, PrecisionError
from tameps.localring import embed_unramified, make_ring, unit_group, unit_reps
from tameps.residue import fq_make


I = RootOfUnity(1, 4)


def brute_epsilon(chi, psi, a):
    # reference: literal sum over unit representatives, no exponent folding
    ring = chi.ring
    vc = a + psi.level
    c = ring.pi_pow(vc)
    psi_c = psi.compose_scale(-vc)
    total = CyclotomicNumber.zero()
    for x in unit_reps(ring, a):
        term = chi.value(x).inverse() * psi_c.value(x)
        total = total + term.to_cyclotomic()
    return EpsilonValue(total, ring.p, a * ring.f) * chi.value(c)


# -- residue Gauss sums ------------------------------------------------

def test_gauss_sum_sqrt5():
    k = fq_make(5, 1)
    theta = ResMultChar(k, 2)
    psibar = ResAddChar(k, k.one)
    got = gauss_sum(theta, psibar)
    want = CyclotomicNumber(5, {1: 1, 4: 1, 2: -1, 3: -1})
    assert got == want
    assert got == sqrt_prime_embed(5)


def test_gauss_sum_trivial_mult_char():
    k = fq_make(7, 1)
    assert gauss_sum(ResMultChar(k, 0), ResAddChar(k, k.one)) == \
        CyclotomicNumber.rational(-1)


def test_gauss_sum_refuses_trivial_additive():
    k = fq_make(5, 1)
    with pytest.raises(ConfigError):
        gauss_sum(ResMultChar(k, 1), ResAddChar(k, k.zero))


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (3, 2), (13, 1), (7, 2)])
def test_gauss_sum_absolute_value(p, f):
    k = fq_make(p, f)
    psibar = ResAddChar(k, k.one)
    for mult in range(1, k.q - 1):
        g = gauss_sum(ResMultChar(k, mult), psibar)
        assert g * g.conj() == CyclotomicNumber.rational(k.q)


def test_gauss_sum_beta_translation():
    # replacing beta rescales by theta(beta)^-1
    k = fq_make(7, 1)
    theta = ResMultChar(k, 2)
    base = gauss_sum(theta, ResAddChar(k, k.one))
    b = k.from_int(3)
    moved = gauss_sum(theta, ResAddChar(k, b))
    assert moved == base * theta.value(b).inverse().to_cyclotomic()


# -- local constants: conductor 0 and 1 --------------------------------

def test_epsilon_unramified_character():
    F = make_ring(5, 1, 1)
    chi = TameChar(F, 0, RootOfUnity(1, 3))
    assert tate_epsilon(chi, psi_standard(F)) == 1
    assert tate_epsilon(chi, AdditiveChar(F, 1)) == RootOfUnity(1, 3)
    assert tate_epsilon(chi, AdditiveChar(F, -2)) == RootOfUnity(-2, 3)


def test_epsilon_quadratic_q3():
    F = make_ring(3, 1, 1)
    assert tate_epsilon(TameChar(F, 1), psi_standard(F)) == I


def test_epsilon_quadratic_q5():
    F = make_ring(5, 1, 1)
    assert tate_epsilon(TameChar(F, 2), psi_standard(F)) == 1


def test_epsilon_quadratic_q7():
    F = make_ring(7, 1, 1)
    assert tate_epsilon(TameChar(F, 3), psi_standard(F)) == I


def test_epsilon_scale_unit_invariance():
    F = make_ring(5, 1, 1)
    psi = psi_standard(F)
    chi = TameChar(F, 1)
    default = tate_epsilon(chi, psi)
    for eps in (F.teich(F.k.g), F.one + F.pi_pow(1)):
        moved = tate_epsilon(chi, psi, c=eps * F.pi_pow(1))
        assert moved == default


def test_epsilon_wrong_scale_valuation_refused():
    F = make_ring(5, 1, 1)
    with pytest.raises(ContractError):
        tate_epsilon(TameChar(F, 1), psi_standard(F), c=F.pi_pow(2))


def test_epsilon_negative_total_valuation_refused():
    F = make_ring(5, 1, 1)
    with pytest.raises(ConfigError):
        tate_epsilon(TameChar(F, 1), AdditiveChar(F, -2))


def test_epsilon_unramified_twist_moves_prefactor_only():
    # multiplying by an unramified character scales W by its pi-value
    F = make_ring(7, 1, 1)
    psi = psi_standard(F)
    chi = TameChar(F, 2)
    om = TameChar(F, 0, RootOfUnity(1, 6))
    lhs = tate_epsilon(chi * om, psi, conductor=1)
    rhs = tate_epsilon(chi, psi) * RootOfUnity(1, 6)
    assert lhs == rhs


# -- local constants against the reference sum -------------------------

def _conductor2_char(F, unit_image_num, principal_image_num):
    gens = unit_group(F, 2)
    images = [RootOfUnity(unit_image_num, gens[0][1]),
              RootOfUnity(principal_image_num, gens[1][1])]
    images.extend(RootOfUnity(principal_image_num, o) for _, o in gens[2:])
    return TableChar(F, 2, gens, images)


@pytest.mark.parametrize("shift", [-1, 0, 1])
def test_epsilon_matches_reference_q3_conductor2(shift):
    F = make_ring(3, 1, 1)
    chi = _conductor2_char(F, 1, 1)
    psi = AdditiveChar(F, shift)
    assert tate_epsilon(chi, psi) == brute_epsilon(chi, psi, 2)


def test_epsilon_matches_reference_q5_conductor2():
    F = make_ring(5, 1, 1)
    psi = psi_standard(F)
    for un, pn in [(1, 1), (3, 2), (0, 1), (2, 4)]:
        chi = _conductor2_char(F, un, pn)
        assert char_conductor(chi) == 2
        assert tate_epsilon(chi, psi) == brute_epsilon(chi, psi, 2)


def test_epsilon_matches_reference_q3_conductor3():
    F = make_ring(3, 1, 1)
    gens = unit_group(F, 3)
    images = [RootOfUnity(1, gens[0][1]), RootOfUnity(1, gens[1][1])]
    chi = TableChar(F, 3, gens, images)
    assert char_conductor(chi) == 3
    for shift in (0, 1):
        psi = AdditiveChar(F, shift)
        assert tate_epsilon(chi, psi) == brute_epsilon(chi, psi, 3)


def test_epsilon_matches_reference_ramified_ring():
    # quadratic ramified ring: exercises the pi-row and Eisenstein folding
    E = make_ring(3, 1, 2)
    psi = psi_standard(E)
    tame = TameChar(E, 1, RootOfUnity(1, 2))
    assert tate_epsilon(tame, psi) == brute_epsilon(tame, psi, 1)
    gens = unit_group(E, 2)
    images = [RootOfUnity(1, o) for _, o in gens]
    chi = TableChar(E, 2, gens, images)
    a = char_conductor(chi)
    assert a == 2
    assert tate_epsilon(chi, psi) == brute_epsilon(chi, psi, 2)


def test_epsilon_matches_reference_residue_degree_two():
    F = make_ring(3, 2, 1)
    psi = psi_standard(F)
    chi = _conductor2_char(F, 1, 1)
    assert char_conductor(chi) == 2
    assert tate_epsilon(chi, psi) == brute_epsilon(chi, psi, 2)


def test_epsilon_values_are_unitary():
    F = make_ring(5, 1, 1)
    psi = psi_standard(F)
    for tm in range(4):
        for rp in (RootOfUnity.one(), RootOfUnity(1, 5)):
            w = tate_epsilon(TameChar(F, tm, rp), psi)
            assert w.is_unitary()


def test_epsilon_precision_guard():
    F = make_ring(3, 1, 1, prec=2)
    with pytest.raises(PrecisionError):
        tate_epsilon(TameChar(F, 1), psi_standard(F), conductor=5)


def test_epsilon_size_guard():
    F = make_ring(5, 2, 1)
    with pytest.raises(ConfigError):
        tate_epsilon(TameChar(F, 1), psi_standard(F), conductor=5)


# -- collapsed form ----------------------------------------------------

def test_collapse_matches_direct_even():
    F = make_ring(5, 1, 1)
    psi = psi_standard(F)
    chi = _conductor2_char(F, 1, 2)
    assert lamprecht_tate_epsilon(chi, psi) == tate_epsilon(chi, psi)


def test_collapse_matches_direct_odd():
    F = make_ring(3, 1, 1)
    gens = unit_group(F, 3)
    chi = TableChar(F, 3, gens, [RootOfUnity(1, gens[0][1]),
                                 RootOfUnity(2, gens[1][1])])
    assert char_conductor(chi) == 3
    for shift in (-1, 0, 1):
        psi = AdditiveChar(F, shift)
        assert lamprecht_tate_epsilon(chi, psi) == tate_epsilon(chi, psi)


def test_collapse_matches_direct_f2():
    F = make_ring(3, 2, 1)
    psi = psi_standard(F)
    chi = _conductor2_char(F, 3, 1)
    assert lamprecht_tate_epsilon(chi, psi) == tate_epsilon(chi, psi)


def test_collapse_accepts_explicit_scale():
    F = make_ring(5, 1, 1)
    psi = psi_standard(F)
    chi = _conductor2_char(F, 1, 1)
    c, vc, eps = find_c(chi, psi)
    assert lamprecht_tate_epsilon(chi, psi, c=c) == tate_epsilon(chi, psi)


def test_collapse_refuses_small_conductor():
    F = make_ring(5, 1, 1)
    with pytest.raises(ConfigError):
        lamprecht_tate_epsilon(TameChar(F, 1), psi_standard(F))


# -- norm duals --------------------------------------------------------

def test_norm_group_unramified_cubic():
    F = make_ring(5, 1, 1)
    E = make_ring(5, 3, 1)
    ng = norm_group(E, F)
    assert ng.index == 3
    assert ng.pi_val == 3
    orders = sorted(ch.root_pi.order for ch in ng.characters)
    assert orders == [1, 3, 3]
    for ch in ng.characters:
        assert ch.teich_mult == 0  # unramified extension: units are all norms


def test_norm_group_ramified_quadratic():
    F = make_ring(5, 1, 1)
    E = make_ring(5, 1, 2)
    ng = norm_group(E, F)
    assert ng.index == 2
    nontriv = [ch for ch in ng.characters
               if ch.teich_mult or ch.root_pi != RootOfUnity.one()]
    assert len(nontriv) == 1
    eta = nontriv[0]
    # -p is the norm of the uniformizer, so eta kills it
    assert eta.value(F.from_int(-5)) == RootOfUnity.one()
    assert eta.value(F.teich(F.k.g)) == RootOfUnity(1, 2)


def test_norm_group_mixed_quartic():
    F = make_ring(3, 1, 1)
    E = make_ring(3, 2, 2)
    ng = norm_group(E, F)
    assert ng.index == 4


def test_norm_group_rejects_ramified_base():
    with pytest.raises(ConfigError):
        norm_group(make_ring(3, 1, 2), make_ring(3, 1, 2))


# -- lambda: closed form against the dual product ----------------------

RAMIFIED_QUADRATIC_CASES = [
    (3, 1, False), (3, 1, True),
    (5, 1, False), (5, 1, True),
    (7, 1, False), (7, 1, True),
    (13, 1, False),
    (3, 2, False),
]


@pytest.mark.parametrize("p,f,twist", RAMIFIED_QUADRATIC_CASES)
@pytest.mark.parametrize("shift", [-1, 0, 1])
def test_lambda_quadratic_routes_agree(p, f, twist, shift):
    F = make_ring(p, f, 1)
    u = F.k.g if twist else None
    E = make_ring(p, f, 2, u=u)
    psi = AdditiveChar(F, shift)
    closed, kind = lambda_closed_form(E, F, psi)
    assert kind == "even-cyclic-ramified"
    assert closed == lambda_product(E, F, psi)


def test_lambda_quadratic_frozen_values():
    q3, q5, q7 = (make_ring(p, 1, 1) for p in (3, 5, 7))
    assert lambda_closed_form(make_ring(3, 1, 2), q3, psi_standard(q3))[0] == I ** -1
    assert lambda_closed_form(make_ring(5, 1, 2), q5, psi_standard(q5))[0] == 1
    assert lambda_closed_form(make_ring(5, 1, 2), q5, AdditiveChar(q5, -1))[0] == 1
    assert lambda_closed_form(
        make_ring(5, 1, 2, u=q5.k.g), q5, psi_standard(q5))[0] == -1
    assert lambda_closed_form(make_ring(7, 1, 2), q7, AdditiveChar(q7, -1))[0] == I
    assert lambda_closed_form(make_ring(7, 1, 2), q7, psi_standard(q7))[0] == I ** -1


@pytest.mark.parametrize("p,f,e,twist", [
    (5, 1, 4, False), (5, 1, 4, True), (13, 1, 4, False),
    (7, 1, 6, False), (5, 2, 8, False), (13, 1, 12, False),
])
@pytest.mark.parametrize("shift", [-1, 0])
def test_lambda_even_cyclic_routes_agree(p, f, e, twist, shift):
    F = make_ring(p, f, 1)
    u = F.k.g if twist else None
    E = make_ring(p, f, e, u=u)
    psi = AdditiveChar(F, shift)
    closed, kind = lambda_closed_form(E, F, psi)
    assert kind == "even-cyclic-ramified"
    assert closed == lambda_product(E, F, psi)


def test_lambda_quartic_frozen():
    F = make_ring(5, 1, 1)
    E = make_ring(5, 1, 4)
    assert lambda_closed_form(E, F, psi_standard(F))[0] == -1


def test_lambda_sextic_frozen():
    F = make_ring(7, 1, 1)
    E = make_ring(7, 1, 6)
    assert lambda_closed_form(E, F, psi_standard(F))[0] == I


@pytest.mark.parametrize("p,f,e,fbase", [
    (7, 1, 3, 1), (13, 1, 3, 1), (5, 3, 1, 1), (7, 3, 3, 1), (13, 3, 3, 1),
])
def test_lambda_odd_degree_is_one(p, f, e, fbase):
    F = make_ring(p, fbase, 1)
    E = make_ring(p, f, e)
    psi = psi_standard(F)
    closed, kind = lambda_closed_form(E, F, psi)
    assert kind == "odd-degree"
    assert closed == 1
    assert lambda_product(E, F, psi) == 1


@pytest.mark.parametrize("frel,shift", [(2, 0), (2, 1), (4, -1), (3, 0)])
def test_lambda_unramified_routes_agree(frel, shift):
    F = make_ring(5, 1, 1)
    E = make_ring(5, frel, 1)
    psi = AdditiveChar(F, shift)
    closed, kind = lambda_closed_form(E, F, psi)
    if frel % 2:
        assert kind == "odd-degree"
    else:
        assert kind == "unramified"
    assert closed == lambda_product(E, F, psi)


def test_lambda_mixed_even_has_no_closed_form():
    F = make_ring(3, 1, 1)
    E = make_ring(3, 2, 2)
    psi = psi_standard(F)
    with pytest.raises(ConfigError):
        lambda_closed_form(E, F, psi)
    lam = lambda_product(E, F, psi)
    assert is_root_of_unity(lam) is not None


def test_lambda_nonabelian_ramification_refused():
    F = make_ring(5, 1, 1)
    E = make_ring(5, 1, 3)  # 3 does not divide q - 1 = 4
    with pytest.raises(ConfigError):
        lambda_closed_form(E, F, psi_standard(F))


def test_legendre_residue():
    k = fq_make(7, 1)
    assert [legendre_residue(k.from_int(t)) for t in (1, 2, 3, 4, 5, 6)] == \
        [1, 1, -1, 1, -1, -1]
    with pytest.raises(ConfigError):
        legendre_residue(k.zero)


# -- trace composition and embeddings ----------------------------------

def test_embed_into_ramified_ring_is_a_homomorphism():
    F = make_ring(7, 1, 1)
    K = make_ring(7, 3, 3)
    x, y = F.from_int(10), F.teich(F.k.g)
    ex, ey = embed_unramified(x, K), embed_unramified(y, K)
    assert embed_unramified(x * y, K) == ex * ey
    assert embed_unramified(x + y, K) == ex + ey
    assert embed_unramified(F.from_int(10), K) == K.from_int(10)
    # Teichmuller lifts stay Teichmuller
    assert ey == K.teich(ey.residue())


def test_compose_trace_unramified_step():
    F = make_ring(5, 1, 1)
    E = make_ring(5, 2, 1)
    for shift in (0, -1):
        psi = AdditiveChar(F, shift)
        psi_e = compose_trace(psi, E)
        assert psi_e.level == psi.level
        for x in (F.from_int(3), F.teich(F.k.g), F.pi_pow(1)):
            assert psi_e.value(embed_unramified(x, E)) == psi.value(x) ** 2


def _relative_trace_to_base(x, F):
    # totally ramified tame step: Tr(x) = e * (row 0 as a base element)
    return F.elem([list(x.rows[0])]) * F.from_int(x.ring.e)


@pytest.mark.parametrize("p,e", [(5, 2), (7, 3), (5, 4)])
def test_compose_trace_ramified_step(p, e):
    F = make_ring(p, 1, 1)
    E = make_ring(p, 1, e)
    psi = AdditiveChar(F, -1)
    psi_e = compose_trace(psi, E)
    assert psi_e.level == e * psi.level + (e - 1)
    samples = [E.one, E.teich(E.k.g), E.pi_pow(1),
               E.teich(E.k.g) + E.pi_pow(1),
               E.from_int(3) + E.pi_pow(e - 1)]
    for x in samples:
        want = psi.value(_relative_trace_to_base(x, F))
        assert psi_e.value(x) == want


def test_compose_trace_rejects_ramified_base():
    E = make_ring(5, 1, 2)
    with pytest.raises(ConfigError):
        compose_trace(AdditiveChar(E, 0), E)


# -- lifting check -----------------------------------------------------

def test_lift_identity_degree():
    F = make_ring(5, 1, 1)
    res = davenport_hasse_check(TameChar(F, 1), psi_standard(F), 1)
    assert res.equal


def test_lift_odd_degree_tame():
    F = make_ring(7, 1, 1)
    res = davenport_hasse_check(TameChar(F, 3), psi_standard(F), 3)
    assert res.equal


def test_lift_even_degree_tame_sign():
    # degree-2 lift of the order-2 character: classical sign flip
    F = make_ring(5, 1, 1)
    res = davenport_hasse_check(TameChar(F, 2), psi_standard(F), 2)
    assert not res.equal
    assert res.lhs == 1
    assert res.rhs == res.lhs * (-1)


def test_lift_even_degree_conductor_two():
    # conductor >= 2: the collapse argument gives exact equality
    F = make_ring(5, 1, 1)
    chi = _conductor2_char(F, 1, 1)
    res = davenport_hasse_check(chi, psi_standard(F), 2)
    assert res.equal


def test_lift_refuses_ramified_presentation():
    E = make_ring(5, 1, 2)
    with pytest.raises(ConfigError):
        davenport_hasse_check(TameChar(E, 1), psi_standard(E), 2)


# -- stable twist check ------------------------------------------------

def test_stable_twist_even_conductor():
    F = make_ring(3, 1, 1)
    chi_big = _conductor2_char(F, 1, 1)
    res = deligne_twist_check(chi_big, TameChar(F, 1), psi_standard(F))
    assert res.equal


def test_stable_twist_odd_conductor():
    F = make_ring(3, 1, 1)
    gens = unit_group(F, 3)
    chi_big = TableChar(F, 3, gens, [RootOfUnity(0, 1), RootOfUnity(1, 9)])
    assert char_conductor(chi_big) == 3
    res = deligne_twist_check(chi_big, TameChar(F, 1), psi_standard(F))
    assert res.equal


def test_stable_twist_threshold_enforced():
    F = make_ring(3, 1, 1)
    chi_big = _conductor2_char(F, 1, 1)
    chi_small = _conductor2_char(F, 0, 1)
    with pytest.raises(ConfigError):
        deligne_twist_check(chi_big, chi_small, psi_standard(F))


# -- conductor-two families --------------------------------------------

@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (3, 2)])
def test_conductor2_family_size(p, f):
    F = make_ring(p, f, 1)
    fam = conductor2_characters(F)
    assert len(fam) == (F.q - 1) ** 2
    for chi in fam[:6]:
        assert char_conductor(chi) == 2


def test_conductor2_constants_are_roots_of_unity():
    F = make_ring(3, 1, 1)
    psi = psi_standard(F)
    for chi in conductor2_characters(F):
        w = tate_epsilon(chi, psi, conductor=2)
        assert is_root_of_unity(w) is not None


@settings(deadline=None, max_examples=30)
@given(p=st.sampled_from([3, 5, 7]), tm=st.integers(0, 11),
       rp=st.integers(0, 5), shift=st.sampled_from([-1, 0, 1]),
       pick=st.integers(0, 1000))
def test_epsilon_unitary_and_scale_free(p, tm, rp, shift, pick):
    F = make_ring(p, 1, 1)
    chi = TameChar(F, tm, RootOfUnity(rp, 6))
    psi = AdditiveChar(F, shift)
    a = char_conductor(chi)
    w = tate_epsilon(chi, psi, conductor=a)
    assert w.is_unitary()
    if a >= 1:
        reps = unit_reps(F, 2)
        eps = reps[pick % len(reps)]
        moved = tate_epsilon(chi, psi, c=eps * F.pi_pow(a + psi.level),
                             conductor=a)
        assert moved == w


def test_quartic_character_constant_is_not_a_root_of_unity():
    # order-4 residue character of F_5: the normalized Gauss sum has
    # absolute value 1 in every embedding but infinite order
    F = make_ring(5, 1, 1)
    w = tate_epsilon(TameChar(F, 1), psi_standard(F))
    assert w.is_unitary()
    assert is_root_of_unity(w) is None
    # the order-2 character right next to it is a root of unity
    assert is_root_of_unity(tate_epsilon(TameChar(F, 2), psi_standard(F))) == 1
