"""Heisenberg representations: construction, routes, determinants, counts.

The frozen p=3, m=2 data was solved by hand ahead of the implementation:
the compatibility congruence -2s = 4 mod 8 picks s in {2, 6}, so theta
takes the generator to a primitive 8th root whose square is -1.  The
route comparisons (unramified against each ramified subextension) are
the load-bearing checks; nothing in the construction of one route feeds
the other.
"""

import math

import pytest

from tameps.characters import ONE, TableChar, TameChar, char_conductor
from tameps.cyclotomic import RootOfUnity
from tameps.errors import ConfigError
from tameps.heisenberg import (
    HeisenbergDatum,
    HeisenbergRep,
    bicyclic_counts,
    brute_bicyclic_counts,
    conductor_via_subextension,
    conductor_via_unramified,
    cyclic_subgroup_count,
    det_char,
    det_char_via_subextension,
    line_complement_count,
    m_primary_part,
    order_m_element_count,
    solve_theta,
    subextension,
)
from tameps.localring import embed_unramified, make_ring, unit_group
from tameps.residue import fq_trace_norm

BUILD_CASES = [(3, 2), (7, 2), (7, 3), (5, 4), (13, 3), (13, 4)]


def eta_mult_for(q, m):
    return next(e for e in range(1, q - 1)
                if (q - 1) // math.gcd(q - 1, e) == m)


def minimal_rep(p, m, root_pi=ONE, twist=None):
    F = make_ring(p, 1, 1)
    datum = HeisenbergDatum(F, eta_mult_for(F.q, m))
    return HeisenbergRep(datum, solve_theta(datum)[0], root_pi, twist)


def wild_char(F, level, unit_image_num, principal_image_num):
    gens = unit_group(F, level)
    images = [RootOfUnity(unit_image_num, gens[0][1]),
              RootOfUnity(principal_image_num, gens[1][1])]
    images.extend(RootOfUnity(principal_image_num, o) for _, o in gens[2:])
    return TableChar(F, level, gens, images)


# -- datum and pairing -------------------------------------------------

def test_datum_rejects_ramified_base():
    E = make_ring(3, 1, 2)
    with pytest.raises(ConfigError):
        HeisenbergDatum(E, 1)


def test_datum_rejects_trivial_eta():
    F = make_ring(5, 1, 1)
    with pytest.raises(ConfigError):
        HeisenbergDatum(F, 0)
    with pytest.raises(ConfigError):
        HeisenbergDatum(F, 4)


def test_datum_order():
    F = make_ring(13, 1, 1)
    assert HeisenbergDatum(F, 6).m == 2
    assert HeisenbergDatum(F, 4).m == 3
    assert HeisenbergDatum(F, 3).m == 4
    assert HeisenbergDatum(F, 1).m == 12


def test_pairing_alternating_and_skew():
    F = make_ring(7, 1, 1)
    d = HeisenbergDatum(F, 3)
    xs = [(0, F.k.g), (1, F.k.one), (2, F.k.gpow(4)), (-1, F.k.gpow(5))]
    for x in xs:
        assert d.pairing(x, x) == ONE
        for y in xs:
            assert d.pairing(x, y) * d.pairing(y, x) == ONE


def test_pairing_bilinear():
    F = make_ring(7, 1, 1)
    d = HeisenbergDatum(F, 3)
    x, y, z = (1, F.k.g), (0, F.k.gpow(2)), (2, F.k.gpow(3))
    combined = (y[0] + z[0], y[1] * z[1])
    assert d.pairing(x, combined) == d.pairing(x, y) * d.pairing(x, z)


def test_pairing_nondegenerate():
    F = make_ring(5, 1, 1)
    d = HeisenbergDatum(F, 1)
    probes = [(v, F.k.gpow(t)) for v in range(d.m) for t in range(F.q - 1)]
    for x in probes:
        if x[0] % d.m == 0 and d.eta(x[1]) == ONE:
            continue
        assert any(d.pairing(x, y) != ONE for y in probes)


# -- solving for theta -------------------------------------------------

def test_frozen_theta_set_p3():
    F = make_ring(3, 1, 1)
    datum = HeisenbergDatum(F, 1)
    assert solve_theta(datum) == [2, 6]
    rep = HeisenbergRep(datum, 2)
    assert rep.theta(rep.E1.k.g) == RootOfUnity(1, 4)
    assert rep.theta(rep.E1.k.g) ** 2 == RootOfUnity(1, 2)


def test_incompatible_theta_rejected_p3():
    F = make_ring(3, 1, 1)
    datum = HeisenbergDatum(F, 1)
    for s in (0, 1, 3, 4, 5, 7):
        with pytest.raises(ConfigError):
            HeisenbergRep(datum, s)


@pytest.mark.parametrize("p,m", BUILD_CASES)
def test_theta_solutions_build(p, m):
    F = make_ring(p, 1, 1)
    datum = HeisenbergDatum(F, eta_mult_for(F.q, m))
    sols = solve_theta(datum)
    assert len(sols) == F.q - 1
    for s in sols[:3]:
        rep = HeisenbergRep(datum, s)
        assert rep.m == m
        assert rep.conductor() == m


def test_exact_order_eta_count():
    # eta of exact order m: phi(m) residue characters
    F = make_ring(13, 1, 1)
    for m, expect in [(2, 1), (3, 2), (4, 2), (6, 2), (12, 4)]:
        got = sum(1 for e in range(1, 12)
                  if 12 // math.gcd(12, e) == m)
        assert got == expect
        datum = HeisenbergDatum(F, eta_mult_for(13, m))
        assert datum.m == m


def test_residue_norm_convention_matches_trace_norm_for_prime_base():
    # over a prime base field every embedding is the same map, so the
    # measured r0 must equal the tagged residue norm of the generator
    for p, m in [(3, 2), (7, 3), (5, 4)]:
        rep = minimal_rep(p, m)
        _, nm = fq_trace_norm(rep.E1.k.g, rep.F.f)
        assert rep.r0 == rep.F.k.dlog(nm)
        assert (rep.r0 * rep.x0) % (rep.F.q - 1) == 1


# -- subextension routes -----------------------------------------------

@pytest.mark.parametrize("p,m", BUILD_CASES)
def test_subextension_uniformizer_relation(p, m):
    rep = minimal_rep(p, m)
    F, K = rep.F, rep.K
    for j in range(m):
        sub = subextension(rep, j)
        lhs = sub.pi_in_K ** m
        rhs = embed_unramified(F.teich(F.k.gpow(j)), K) * K.from_int(F.p)
        assert lhs == rhs
        assert sub.ring.e == m and sub.ring.f == F.f


@pytest.mark.parametrize("p,m", [(3, 2), (7, 3), (5, 4)])
def test_subextension_root_choices(p, m):
    # the m root_twist choices give m distinct uniformizer values with a
    # common m-th power; no other m^2-nd root shift survives the power test
    rep = minimal_rep(p, m)
    for j in range(m):
        roots = [subextension(rep, j, rt).tame.root_pi for rt in range(m)]
        assert len(set(roots)) == m
        powers = {r ** m for r in roots}
        assert len(powers) == 1
        target = powers.pop()
        hits = sum(1 for i in range(m * m)
                   if (roots[0] * RootOfUnity(i, m * m)) ** m == target)
        assert hits == m


@pytest.mark.parametrize("p,m", BUILD_CASES)
def test_chi_K_normal_form_matches_composite(p, m):
    rep = minimal_rep(p, m)
    K = rep.K
    fast, slow = rep.chi_K(), rep.chi_K_composite()
    samples = [
        K.teich(K.k.g),
        K.teich(K.k.gpow(7)),
        K.pi_pow(1),
        K.teich(K.k.gpow(3)) * K.pi_pow(1),
        K.one + K.pi_pow(1) * K.teich(K.k.gpow(2)),
    ]
    for x in samples:
        assert fast.value(x) == slow.value(x)


def test_chi_K_normal_form_matches_composite_twisted():
    F = make_ring(7, 1, 1)
    tw = wild_char(F, 2, 1, 1)
    rep = minimal_rep(7, 3, twist=tw)
    K = rep.K
    fast, slow = rep.chi_K(), rep.chi_K_composite()
    for x in [K.teich(K.k.g), K.pi_pow(1), K.one + K.pi_pow(1),
              K.one + K.pi_pow(2) * K.teich(K.k.gpow(5))]:
        assert fast.value(x) == slow.value(x)


def test_subextension_character_on_norms():
    # chi_j composed with the norm from K agrees with chi_K at pi_K:
    # N(pi_K) = [w] p and p = [g^-j] pi_j^m inside E_j
    for p, m in [(3, 2), (7, 3), (5, 4)]:
        rep = minimal_rep(p, m)
        F = rep.F
        for j in range(m):
            sub = subextension(rep, j)
            Ej = sub.ring
            wp = Ej.teich(sub.norm_pi_unit * F.k.gpow(-j)) * Ej.pi_pow(m)
            assert sub.chi.value(wp) == rep.chi_K().value(rep.K.pi_pow(1))


# -- conductors --------------------------------------------------------

@pytest.mark.parametrize("p,m", BUILD_CASES)
def test_conductor_routes_minimal(p, m):
    rep = minimal_rep(p, m)
    assert rep.is_minimal()
    assert rep.conductor() == m
    assert rep.swan() == 0
    assert conductor_via_unramified(rep) == m
    for j in range(m):
        assert conductor_via_subextension(rep, j) == m
    assert char_conductor(rep.chi_K()) == 1


@pytest.mark.parametrize("p,m,level", [(3, 2, 2), (3, 2, 3), (7, 2, 2),
                                       (7, 3, 2), (5, 4, 2)])
def test_conductor_routes_twisted(p, m, level):
    F = make_ring(p, 1, 1)
    tw = wild_char(F, level, 1, 1)
    h = char_conductor(tw)
    assert h == level
    rep = minimal_rep(p, m, twist=tw)
    assert not rep.is_minimal()
    assert rep.conductor() == m * h
    assert rep.swan() == m * (h - 1)
    assert conductor_via_unramified(rep) == m * h
    for j in range(m):
        assert conductor_via_subextension(rep, j) == m * h
        assert char_conductor(subextension(rep, j).chi) == 1 + m * (h - 1)
    assert char_conductor(rep.chi_K()) == m * (h - 1) + 1


def test_tame_twist_rejected():
    F = make_ring(7, 1, 1)
    datum = HeisenbergDatum(F, 3)
    s = solve_theta(datum)[0]
    with pytest.raises(ConfigError):
        HeisenbergRep(datum, s, twist=TameChar(F, 2))


def test_twist_must_live_on_base():
    F = make_ring(7, 1, 1)
    other = make_ring(7, 2, 1)
    datum = HeisenbergDatum(F, 3)
    s = solve_theta(datum)[0]
    with pytest.raises(ConfigError):
        HeisenbergRep(datum, s, twist=wild_char(other, 2, 1, 1))


# -- determinants ------------------------------------------------------

def det_probes(F):
    return [F.teich(F.k.g), F.teich(F.k.gpow(3)), F.pi_pow(1),
            F.one + F.pi_pow(1), F.from_int(F.p + 1),
            F.teich(F.k.gpow(2)) * F.pi_pow(1)]


@pytest.mark.parametrize("p,m", BUILD_CASES)
def test_det_routes_agree_minimal(p, m):
    rep = minimal_rep(p, m)
    dc = det_char(rep)
    for j in range(m):
        route = det_char_via_subextension(rep, j)
        for x in det_probes(rep.F):
            assert dc.value(x) == route.value(x)


def test_det_routes_agree_twisted():
    F = make_ring(7, 1, 1)
    rep = minimal_rep(7, 3, twist=wild_char(F, 2, 1, 1))
    dc = det_char(rep)
    for j in range(3):
        route = det_char_via_subextension(rep, j)
        for x in det_probes(F):
            assert dc.value(x) == route.value(x)


def test_det_multiplicative():
    rep = minimal_rep(5, 4)
    dc = det_char(rep)
    xs = det_probes(rep.F)[:4]
    for a in xs:
        for b in xs:
            assert dc.value(a * b) == dc.value(a) * dc.value(b)


def test_det_uniformizer_sign():
    # minimal rep with root_pi = 1: det(p) = (-1)^(m+1) theta(1) = parity sign
    rep2 = minimal_rep(3, 2)
    assert det_char(rep2).value(rep2.F.pi_pow(1)) == RootOfUnity(1, 2)
    rep3 = minimal_rep(7, 3)
    assert det_char(rep3).value(rep3.F.pi_pow(1)) == ONE


def test_det_sees_root_pi():
    rep = minimal_rep(7, 3, root_pi=RootOfUnity(1, 3))
    assert det_char(rep).value(rep.F.pi_pow(1)) == RootOfUnity(1, 3)
    dc = det_char(rep)
    route = det_char_via_subextension(rep, 1)
    for x in det_probes(rep.F):
        assert dc.value(x) == route.value(x)


# -- counting ----------------------------------------------------------

def test_counts_frozen():
    assert bicyclic_counts(6) == {
        "cyclic_subgroups": 12, "max_order_elements": 24, "complements": 6}
    assert bicyclic_counts(4) == {
        "cyclic_subgroups": 6, "max_order_elements": 12, "complements": 4}


@pytest.mark.parametrize("m", list(range(1, 31)))
def test_counts_against_enumeration(m):
    assert bicyclic_counts(m) == brute_bicyclic_counts(m)


def test_counts_reject_bad_input():
    with pytest.raises(ConfigError):
        cyclic_subgroup_count(0)
    with pytest.raises(ConfigError):
        brute_bicyclic_counts(31)


def test_line_complement_count_is_order():
    for m in (2, 3, 4, 6, 12):
        assert line_complement_count(m) == m


def test_m_primary_part():
    assert m_primary_part(2, 7) == 2
    assert m_primary_part(4, 5) == 4
    assert m_primary_part(3, 13) == 3
    assert m_primary_part(6, 7) == 6
    assert m_primary_part(6, 13) == 12
    assert m_primary_part(1, 11) == 1


def test_element_count_consistency():
    # elements of maximal order split evenly over the cyclic subgroups
    for m in (2, 3, 4, 5, 6, 8, 9, 12):
        per_group = order_m_element_count(m) // cyclic_subgroup_count(m)
        phi = sum(1 for t in range(1, m + 1) if math.gcd(t, m) == 1)
        assert per_group == phi
