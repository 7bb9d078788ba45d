"""Heisenberg representations of tame local data.

A nontrivial residue character eta of order m > 1 over an unramified base
F determines an alternating pairing on pairs (valuation, unit residue);
the irreducible objects attached to it are m-dimensional representations
induced from characters of the unramified degree-m extension E1.  The
inducing character chi is pinned down by a dlog multiplier theta on the
big residue field, a value at p, and an optional wild twist pulled back
from the base through the norm.

The same representation is reached through any of the m totally ramified
degree-m extensions E_j = F(pi_j), pi_j^m = [g^j] p: all of them sit
inside the common splitting ring K (unramified of degree m over each
E_j, totally ramified over E1), and the character chi_j of E_j is solved
from the requirement that chi_j and chi agree after composing with the
norms from K.  Its uniformizer value is only defined up to an m-th root
of unity; any fixed choice induces the same representation, which is why
subextension() takes an explicit root_twist and downstream code checks
invariance instead of hiding the ambiguity.

All residue bookkeeping is pinned to the one embedding that the ring
embedding into K actually realizes: the image of the base generator is
measured, never assumed, so a Frobenius-twisted presentation cannot
silently shift a discrete log.
"""

from dataclasses import dataclass
from math import gcd, lcm
from typing import Dict, List, Optional, Tuple

from .cyclotomic import RootOfUnity
from .errors import ConfigError, ContractError
from .localring import RElem, Ring, embed_unramified, make_ring
from .residue import FqElem
from .characters import (
    ONE,
    MultChar,
    NormCompositeChar,
    TameChar,
    char_conductor,
)
from .abelian import norm_group


def _embedding_data(F: Ring, m: int, prec: int = 0) -> Tuple[Ring, int, int]:
    """(K, t_emb, r1) for the splitting ring K of degree m over F.

    t_emb is the measured dlog of the embedded base generator in K's
    residue field; it is t' r1 with t' = (q^m-1)/(q-1) and r1 coprime to
    q - 1 because the embedded generator keeps exact order q - 1.  The
    residue norm from K down to the base sends the big generator to
    g^(r1^-1) in this embedding's coordinates.
    """
    q = F.q
    K = make_ring(F.p, F.f * m, m, prec=max(prec, F.prec))
    tprime = (q ** m - 1) // (q - 1)
    t_emb = K.k.dlog(embed_unramified(F.teich(F.k.g), K).residue())
    if t_emb % tprime:
        raise ContractError("embedded base generator lost its unit order")
    r1 = t_emb // tprime
    if gcd(r1, q - 1) != 1:
        raise ContractError("embedded base generator fails to generate")
    return K, t_emb, r1


class HeisenbergDatum:
    """A base ring together with a nontrivial residue character eta."""

    def __init__(self, F: Ring, eta_mult: int):
        if F.e != 1:
            raise ConfigError("the base must be presented unramified")
        q = F.q
        self.F = F
        self.eta_mult = eta_mult % (q - 1)
        self.m = (q - 1) // gcd(q - 1, self.eta_mult) if self.eta_mult else 1
        if self.m < 2:
            raise ConfigError("eta is trivial; no Heisenberg structure to build")

    def eta(self, xi: FqElem) -> RootOfUnity:
        return RootOfUnity(self.eta_mult * self.F.k.dlog(xi), self.F.q - 1)

    def pairing(self, x: Tuple[int, FqElem], y: Tuple[int, FqElem]) -> RootOfUnity:
        """The alternating pairing <(a, e1), (b, e2)> = eta(e1)^b eta(e2)^-a."""
        a, e1 = x
        b, e2 = y
        return self.eta(e1) ** b * self.eta(e2) ** (-a)


class HeisenbergRep:
    """The induced representation attached to a compatible theta.

    theta_mult fixes theta on Teichmueller units of E1 as the dlog
    multiplier at modulus q^m - 1, root_pi fixes the value at p, and
    twist (conductor >= 2, on the base) adds the non-minimal wild part.
    Tame twists are rejected: folding them into theta keeps every
    character here in one normal form.
    """

    def __init__(self, datum: HeisenbergDatum, theta_mult: int,
                 root_pi: RootOfUnity = ONE, twist: Optional[MultChar] = None):
        F = datum.F
        q, m, p = F.q, datum.m, F.p
        self.datum = datum
        self.F = F
        self.m = m
        qm1 = q ** m - 1
        self.theta_mult = theta_mult % qm1
        if twist is not None:
            if twist.ring is not F:
                raise ConfigError("the twist must live on the base ring")
            h = char_conductor(twist)
            if h < 2:
                raise ConfigError(
                    "tame twist rejected: fold it into theta and root_pi")
            self.h = h
        else:
            self.h = 1
        self.twist = twist
        # ramified-route evaluations reach valuation a + n <= m h, each
        # division by pi costs a stored digit, and the unit left over
        # still has to clear a norm product and a level-h truncation
        self.deep_prec = max(F.prec, m * (m + 1) * self.h + 1)
        self.E1 = make_ring(p, F.f * m, 1, prec=F.prec)
        self.K, self.t_emb, r1 = _embedding_data(F, m, self.deep_prec)

        # residue norm K -> F sends G to g^r0; x0 inverts r0 mod q-1
        self.r0 = pow(r1, -1, q - 1)
        self.x0 = r1 % (q - 1)

        lhs = RootOfUnity(self.theta_mult * (1 - q), qm1)
        rhs = RootOfUnity(datum.eta_mult * self.r0, q - 1)
        if lhs != rhs:
            raise ConfigError(
                "theta does not restrict to eta along the norm-one units")
        for i in range(1, m):
            if (self.theta_mult * (q ** i - 1)) % qm1 == 0:
                raise ContractError(
                    "theta is fixed by a proper Frobenius power; induction "
                    "would be reducible")

        self.t = root_pi
        tame = TameChar(self.E1, self.theta_mult, root_pi)
        self.chi = tame * NormCompositeChar(twist, self.E1) if twist else tame

    def theta(self, xi: FqElem) -> RootOfUnity:
        return RootOfUnity(self.theta_mult * self.E1.k.dlog(xi),
                           self.F.q ** self.m - 1)

    def is_minimal(self) -> bool:
        return self.twist is None

    def conductor(self) -> int:
        return self.m * max(1, self.h)

    def swan(self) -> int:
        return self.conductor() - self.m

    def chi_K(self) -> MultChar:
        """chi composed with the norm from K, in tame normal form.

        K/E1 is totally ramified of degree m, so Teichmueller units norm
        to their m-th powers and pi_K norms to (-1)^(m+1) p; the twist
        part composes to the same twist through the norm from K to the
        base.  Summing with this form avoids a norm per term.
        """
        q, m = self.F.q, self.m
        rp = self.theta(self.E1.k.from_int(-1)) ** (m + 1) * self.t
        tame = TameChar(self.K, (self.theta_mult * m) % (q ** m - 1), rp)
        return tame * NormCompositeChar(self.twist, self.K) if self.twist else tame

    def chi_K_composite(self) -> MultChar:
        """The same character as chi_K, evaluated through actual norms."""
        return NormCompositeChar(self.chi, self.K)


def solve_theta(datum: HeisenbergDatum) -> List[int]:
    """All theta multipliers compatible with eta, by exhaustive search.

    The compatibility congruence is linear in the multiplier, so the
    solutions form one coset: exactly q - 1 of them, spaced by
    (q^m - 1)/(q - 1).  Both facts are asserted.
    """
    F = datum.F
    q, m = F.q, datum.m
    qm1 = q ** m - 1
    _, _, r1 = _embedding_data(F, m)
    rhs = RootOfUnity(datum.eta_mult * pow(r1, -1, q - 1), q - 1)
    out = [s for s in range(qm1)
           if RootOfUnity(s * (1 - q), qm1) == rhs]
    if len(out) != q - 1:
        raise ContractError("compatible theta count is off")
    step = qm1 // (q - 1)
    if any(b - a != step for a, b in zip(out, out[1:])):
        raise ContractError("compatible thetas do not form a single coset")
    return out


@dataclass
class SubextData:
    """One totally ramified route to the representation."""

    ring: Ring
    j: int
    root_twist: int
    b: int
    tame: TameChar
    chi: MultChar
    pi_in_K: RElem
    norm_pi_unit: FqElem


def subextension(rep: HeisenbergRep, j: int, root_twist: int = 0) -> SubextData:
    """The ramified route E_j = F(pi_j), pi_j^m = [g^j] p, with its character.

    pi_j embeds into K as [G^(b j)] pi_K with b = t_emb / m, and the norm
    of pi_K back down to E_j is [w] p with w = g^(j (1 - t'/m)); the
    Frobenius-orbit product that produces w is recomputed independently
    and compared.  The character's tame residue multiplier solves
    tau(g^r0) = theta(G)^m, and the uniformizer value is an m-th root of
    theta(-1)^(m+1) root_pi / tau(w g^-j), shifted by root_twist.
    """
    F, K, m = rep.F, rep.K, rep.m
    q = F.q
    qm1 = q ** m - 1
    tprime = qm1 // (q - 1)
    j %= m
    Ej = make_ring(F.p, F.f, m, u=F.k.gpow(j), prec=rep.deep_prec)
    if rep.t_emb % m:
        raise ContractError("embedding index not divisible by the degree")
    b = rep.t_emb // m

    pi_in_K = K.teich(K.k.gpow(b * j)) * K.pi_pow(1)
    rhs = embed_unramified(F.teich(F.k.gpow(j)), K) * K.from_int(F.p)
    if pi_in_K ** m != rhs:
        raise ContractError("embedded uniformizer fails its Eisenstein relation")

    # N_{K/E_j}(pi_K): the conjugates are [G^(b j (1 - q^i))] pi_K, so the
    # Teichmueller parts multiply to G^(b j (m - t')); pulling that back
    # through the measured embedding and peeling [g^j] off pi_j^m
    # collapses to w = g^(j (1 - t'/m))
    A = (b * j * (m - tprime)) % qm1
    if A % tprime:
        raise ContractError("norm unit escaped the base residue field")
    w = F.k.gpow(((A // tprime) * rep.r0) % (q - 1))
    if w != F.k.gpow(j * (1 - tprime // m)):
        raise ContractError("norm unit closed form disagrees with the orbit")

    tau_g = rep.theta(rep.E1.k.gpow(rep.x0)) ** m
    if (q - 1) % tau_g.exp.denominator:
        raise ContractError("residue character of the ramified route "
                            "escaped the base units")
    tm_j = int(tau_g.exp * (q - 1)) % (q - 1)
    if RootOfUnity(tm_j * rep.r0, q - 1) != rep.theta(rep.E1.k.g) ** m:
        raise ContractError("tame part fails its defining norm relation")

    target = rep.theta(rep.E1.k.from_int(-1)) ** (m + 1) * rep.t
    wg = w * F.k.gpow(-j)
    corr = RootOfUnity(tm_j * F.k.dlog(wg), q - 1)
    rootm = target * corr.inverse()
    ex = rootm.exp
    t_j = RootOfUnity(ex.numerator, ex.denominator * m) * RootOfUnity(root_twist, m)
    if t_j ** m != rootm:
        raise ContractError("uniformizer value is not an m-th root of its target")

    tame = TameChar(Ej, tm_j, t_j)
    chi = tame * NormCompositeChar(rep.twist, Ej) if rep.twist else tame
    return SubextData(Ej, j, root_twist % m, b, tame, chi, pi_in_K, w)


# -- conductors --------------------------------------------------------

def conductor_via_unramified(rep: HeisenbergRep) -> int:
    """a(rho) through E1: unramified induction scales the conductor by m."""
    return rep.m * char_conductor(rep.chi)


def conductor_via_subextension(rep: HeisenbergRep, j: int) -> int:
    """a(rho) through E_j: tame discriminant exponent plus the conductor."""
    sub = subextension(rep, j)
    return (rep.m - 1) + char_conductor(sub.chi)


def conductors(rep: HeisenbergRep, j: int = 0,
               with_splitting: bool = True) -> Dict[str, int]:
    """All conductor data for one representation, cross-checked.

    Measures the character conductors on E1, on E_j, and (unless
    with_splitting is off, for rings too large to enumerate) on the
    splitting ring K, recomputes a(rho) along both induction routes,
    and ties them together with the ramified-step conductor relation
    a(chi_K) = m a(chi_E1) - (m - 1) before returning anything.
    """
    m = rep.m
    a_un = char_conductor(rep.chi)
    a_sub = char_conductor(subextension(rep, j).chi)
    total = m * a_un
    if total != (m - 1) + a_sub:
        raise ContractError("conductor routes through E1 and E_j split")
    out = {
        "conductor": total,
        "swan": total - m,
        "chi_unramified": a_un,
        "chi_subfield": a_sub,
    }
    if with_splitting:
        a_split = char_conductor(rep.chi_K())
        if a_split != a_sub:
            raise ContractError("unramified step K/E_j moved the conductor")
        if a_split != m * a_un - (m - 1):
            raise ContractError("ramified step K/E1 conductor relation failed")
        out["chi_splitting"] = a_split
    if total != rep.conductor():
        raise ContractError("measured conductor disagrees with the closed form")
    if out["swan"] % m:
        raise ContractError("swan exponent is not a multiple of the dimension")
    out["eta_jump"] = out["swan"] // m
    return out


# -- determinant -------------------------------------------------------

class DetChar(MultChar):
    """det(rho) on the base: parity sign of the unramified induction at
    the valuation, times chi restricted along the embedding into E1."""

    def __init__(self, rep: HeisenbergRep):
        self.rep = rep
        self.ring = rep.F
        self.level_bound = max(1, rep.h)
        # det of the induced-from-trivial rep: pi goes to the product of
        # all m-th roots of unity, i.e. zeta_m^(m(m-1)/2) = (-1)^(m+1)
        self._par = 1 - rep.m % 2

    def value(self, x: RElem) -> RootOfUnity:
        v = x.valuation()
        if v is None:
            raise ContractError("determinant evaluated at zero")
        sign = RootOfUnity(self._par * v, 2)
        return sign * self.rep.chi.value(embed_unramified(x, self.rep.E1))


class _RouteDetChar(MultChar):
    # same determinant through a ramified route: the product of the
    # norm-dual characters of E_j/F times chi_j restricted to the base
    def __init__(self, rep: HeisenbergRep, j: int):
        self.rep = rep
        self.sub = subextension(rep, j)
        self.ring = rep.F
        self.level_bound = max(1, rep.h)
        self.duals = norm_group(self.sub.ring, rep.F).characters

    def value(self, x: RElem) -> RootOfUnity:
        out = self.sub.chi.value(embed_unramified(x, self.sub.ring))
        for ch in self.duals:
            out = out * ch.value(x)
        return out


def det_char(rep: HeisenbergRep) -> DetChar:
    return DetChar(rep)


def det_char_via_subextension(rep: HeisenbergRep, j: int) -> MultChar:
    return _RouteDetChar(rep, j)


# -- counting the bicyclic lattice -------------------------------------

def _prime_factors(m: int) -> List[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _totient(m: int) -> int:
    out = m
    for l in _prime_factors(m):
        out = out // l * (l - 1)
    return out


def cyclic_subgroup_count(m: int) -> int:
    """Cyclic subgroups of order m inside (Z/m)^2: m * prod(1 + 1/l)."""
    if m < 1:
        raise ConfigError("order must be positive")
    out = m
    for l in _prime_factors(m):
        out = out // l * (l + 1)
    return out


def order_m_element_count(m: int) -> int:
    return _totient(m) * cyclic_subgroup_count(m)


def line_complement_count(m: int) -> int:
    """Complements of a fixed order-m line in (Z/m)^2: the <(c, 1)>."""
    return m


def bicyclic_counts(m: int) -> Dict[str, int]:
    return {
        "cyclic_subgroups": cyclic_subgroup_count(m),
        "max_order_elements": order_m_element_count(m),
        "complements": line_complement_count(m),
    }


def brute_bicyclic_counts(m: int) -> Dict[str, int]:
    """The same counts by enumerating (Z/m)^2; usable up to m about 30."""
    if m > 30:
        raise ConfigError("brute enumeration capped at m = 30")

    def order(a, b):
        return lcm(m // gcd(a, m), m // gcd(b, m))

    elems = [(a, b) for a in range(m) for b in range(m)]
    maxers = [v for v in elems if order(*v) == m]

    def span(v):
        a, b = v
        return frozenset(((a * t) % m, (b * t) % m) for t in range(m))

    groups = {span(v) for v in maxers}
    base_line = span((1, 0))
    complements = {g for g in groups if len(g & base_line) == 1}
    return {
        "cyclic_subgroups": len(groups),
        "max_order_elements": len(maxers),
        "complements": len(complements),
    }


def m_primary_part(m: int, q: int) -> int:
    """prod over primes l | m of the full l-part of q - 1."""
    if m < 1 or (q - 1) % m:
        raise ConfigError("dimension must divide q - 1")
    out = 1
    for l in _prime_factors(m):
        e = 0
        while (q - 1) % l ** (e + 1) == 0:
            e += 1
        out *= l ** e
    return out


def closure_group_order(m: int, q: int) -> int:
    """Order of the smallest Galois group carrying the whole family:
    m^2 times the m-primary part of q - 1."""
    return m * m * m_primary_part(m, q)
