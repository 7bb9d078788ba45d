"""Gauss sums, local constants, and lambda functions of abelian data.

The local constant of a multiplicative character chi with conductor
exponent a against an additive character psi of level n is the normalized
Gauss sum

    W(chi, psi) = chi(c) q^(-a/2) sum_{x in U/U^a} chi^(-1)(x) psi(x/c),

where v(c) = a + n.  The sum is independent of which unit multiple of
pi^(a+n) plays the role of c: replacing c by c*eps re-indexes the sum by
x -> x*eps and the prefactor chi(eps) cancels exactly.  For a = 0 the
convention is W = chi(pi)^n.

For a >= 2 and a scale c that is matched to chi in the sense

    chi(1 + x) = psi(x / c)   whenever 2 v(x) >= a,

the full unit sum collapses: all of it cancels except one residue line.
That collapsed form, the norm-dual description of tame extensions, the
lambda function (as a dual-character product and in closed form), and the
lifting/twisting checks built from these live here.
"""

from dataclasses import dataclass
from math import lcm
from typing import Dict, List, Optional, Tuple

from .abgroup import dual_vectors
from .cyclotomic import (
    CyclotomicNumber,
    EpsilonValue,
    RootOfUnity,
)
from .errors import ConfigError, ContractError, PrecisionError
from .localring import (
    RElem,
    Ring,
    divide_by_pi,
    embed_unramified,
    make_ring,
    norm_to,
    trace_qp,
    unit_group,
)
from .residue import Fq, FqElem
from .characters import (
    ONE,
    AdditiveChar,
    MultChar,
    NormCompositeChar,
    TableChar,
    TameChar,
    char_conductor,
    find_c,
)

TATE_SUM_BOUND = 1_200_000


# -- residue-field Gauss sums ------------------------------------------

class ResMultChar:
    """theta(x) = zeta_(q-1)^(mult * dlog x) on the residue field."""

    def __init__(self, field: Fq, mult: int):
        self.field = field
        self.mult = mult % (field.q - 1)

    def is_trivial(self) -> bool:
        return self.mult == 0

    def order(self) -> int:
        q1 = self.field.q - 1
        from math import gcd
        return q1 // gcd(q1, self.mult) if self.mult else 1

    def value(self, x: FqElem) -> RootOfUnity:
        return RootOfUnity(self.mult * self.field.dlog(x), self.field.q - 1)


class ResAddChar:
    """psibar(x) = zeta_p^(Tr(beta x)) on the residue field."""

    def __init__(self, field: Fq, beta: FqElem):
        if beta.field is not field:
            raise ConfigError("beta must live in the stated field")
        self.field = field
        self.beta = beta

    def is_trivial(self) -> bool:
        return self.beta.is_zero()

    def value(self, x: FqElem) -> RootOfUnity:
        return RootOfUnity(self.field.tr_abs(self.beta * x), self.field.p)


def gauss_sum(theta: ResMultChar, psibar: ResAddChar) -> CyclotomicNumber:
    """G(theta, psibar) = sum over the nonzero residues, exactly."""
    field = theta.field
    if psibar.field is not field:
        raise ConfigError("characters live over different residue fields")
    if psibar.is_trivial():
        raise ConfigError("additive character is degenerate")
    if theta.is_trivial():
        return CyclotomicNumber.rational(-1)
    q, p = field.q, field.p
    D = lcm(q - 1, p)
    du, dp = D // (q - 1), D // p
    counts: Dict[int, int] = {}
    cur = psibar.beta
    for j in range(q - 1):
        e = (theta.mult * j * du + field.tr_abs(cur) * dp) % D
        counts[e] = counts.get(e, 0) + 1
        cur = cur * field.g
    return CyclotomicNumber(D, counts)


# -- trace-compatible additive characters ------------------------------

def compose_trace(psi: AdditiveChar, E: Ring) -> AdditiveChar:
    """psi o Tr_{E/F} where F is psi's (unramified) ring inside E."""
    F = psi.ring
    if F.e != 1:
        raise ConfigError("trace composition starts from an unramified base")
    if E.p != F.p or E.f % F.f:
        raise ConfigError("target does not contain the base ring")
    unit = embed_unramified(psi.unit, E) if psi.unit is not None else None
    if E.e == 1:
        out = AdditiveChar(E, psi.shift, unit)
    else:
        # p^shift = pi^(e*shift) [u]^(-shift) keeps the scale integral-free
        tw = E.teich(E.u ** ((-psi.shift) % (E.q - 1)))
        out = AdditiveChar(E, E.e * psi.shift, tw if unit is None else tw * unit)
    if out.level != E.e * psi.level + (E.e - 1):
        raise ContractError("conductor bookkeeping failed under trace composition")
    return out


# -- the local constant ------------------------------------------------

def _exp_at(r: RootOfUnity, D: int) -> int:
    den = r.exp.denominator
    if D % den:
        raise ContractError("exponent denominator escaped the planned level")
    return (r.exp.numerator * (D // den)) % D


def tate_epsilon(chi: MultChar, psi: AdditiveChar, c: Optional[RElem] = None,
                 conductor: Optional[int] = None) -> EpsilonValue:
    """W(chi, psi) by direct summation over U/U^a.

    c defaults to the plain power pi^(a + n); any unit multiple gives the
    same value.  conductor overrides the measured a(chi) when the caller
    already knows it (probing a table character twice is wasteful).
    """
    ring = chi.ring
    if psi.ring is not ring:
        raise ConfigError("character pair must share a ring")
    a = char_conductor(chi) if conductor is None else conductor
    n = psi.level
    if a == 0:
        return EpsilonValue.from_root(chi.value(ring.pi_pow(1)) ** n, ring.p)
    vc = a + n
    if vc < 0:
        raise ConfigError("a(chi) + n(psi) < 0; rescale psi before summing")
    if c is None:
        c = ring.pi_pow(vc)
        c_unit = None
    else:
        if c.ring is not ring:
            raise ConfigError("scale element lives in the wrong ring")
        v = c.valuation()
        if v != vc:
            raise ContractError(f"scale valuation {v}, expected a + n = {vc}")
        w = divide_by_pi(c, vc) if vc else c
        c_unit = None if w == ring.one else w

    s = vc - psi.shift
    kd = -(-s // ring.e)
    if ring.M < kd:
        raise PrecisionError(
            f"trace needs {kd} p-digits, ring stores {ring.M}; raise prec")
    if ring.prec < a:
        raise PrecisionError(
            f"conductor {a} exceeds the ring's {ring.prec} pi-digits")
    W0 = ring.pi_pow(ring.e * kd - s)
    if kd:
        W0 = W0 * ring.teich_u_inv ** kd
    if psi.unit is not None:
        W0 = W0 * psi.unit
    if c_unit is not None:
        W0 = W0 * c_unit.unit_inverse()
    pk = ring.p ** kd
    k = ring.k
    q = ring.q

    rg = chi.value(ring.teich(k.g)).inverse()

    if a == 1:
        D = lcm(rg.exp.denominator, pk)
        mg = _exp_at(rg, D)
        step = D // pk
        counts: Dict[int, int] = {}
        cur = W0.residue()
        for j in range(q - 1):
            t = (ring.e * k.tr_abs(cur)) % ring.p
            key = (mg * j + t * step) % D
            counts[key] = counts.get(key, 0) + 1
            cur = cur * k.g
        z = CyclotomicNumber(D, counts)
        return EpsilonValue(z, ring.p, a * ring.f) * chi.value(c)

    if (q - 1) * q ** (a - 1) > TATE_SUM_BOUND:
        raise ConfigError(
            f"unit sum of size {(q - 1) * q ** (a - 1)} refused; "
            "use the collapsed form")

    kelems = list(k.elements())
    level_elems: List[List[Optional[RElem]]] = []
    level_vals: List[List[RootOfUnity]] = []
    for i in range(1, a):
        es: List[Optional[RElem]] = []
        vs: List[RootOfUnity] = []
        for d in kelems:
            if d.is_zero():
                es.append(None)
                vs.append(ONE)
            else:
                el = ring.one_plus_pi_teich(i, d)
                es.append(el)
                vs.append(chi.value(el).inverse())
        level_elems.append(es)
        level_vals.append(vs)

    D = pk
    D = lcm(D, rg.exp.denominator)
    for vs in level_vals:
        for v in vs:
            D = lcm(D, v.exp.denominator)
    mg = _exp_at(rg, D)
    level_exps = [[_exp_at(v, D) for v in vs] for vs in level_vals]
    step = D // pk
    counts = {}
    last = a - 1

    def rec(level: int, elem: RElem, exp: int):
        if level > last:
            t, _ = trace_qp(elem)
            key = (exp + (t % pk) * step) % D
            counts[key] = counts.get(key, 0) + 1
            return
        es = level_elems[level - 1]
        xs = level_exps[level - 1]
        for idx in range(q):
            el = es[idx]
            rec(level + 1, elem if el is None else elem * el, exp + xs[idx])

    cur_res = k.one
    for j in range(q - 1):
        rec(1, ring.teich(cur_res) * W0, (mg * j) % D)
        cur_res = cur_res * k.g
    z = CyclotomicNumber(D, counts)
    return EpsilonValue(z, ring.p, a * ring.f) * chi.value(c)


def lamprecht_tate_epsilon(chi: MultChar, psi: AdditiveChar,
                           c: Optional[RElem] = None,
                           conductor: Optional[int] = None) -> EpsilonValue:
    """Collapsed W(chi, psi) for conductor >= 2 through a matched scale.

    Even a: W = chi(c) psi(1/c).  Odd a = 2d+1: one residue line is left,
    W = chi(c) q^(-1/2) sum_{t in k} chi^(-1)(1 + pi^d [t]) psi((1 + pi^d [t])/c).
    The scale must satisfy chi(1+x) = psi(x/c) on v(x) >= ceil(a/2); the
    default is located by find_c.
    """
    ring = chi.ring
    if psi.ring is not ring:
        raise ConfigError("character pair must share a ring")
    a = char_conductor(chi) if conductor is None else conductor
    if a < 2:
        raise ConfigError("collapse applies to conductor at least 2")
    if c is None:
        c, vc, eps = find_c(chi, psi, conductor=a)
    else:
        vc = c.valuation()
        if vc != a + psi.level:
            raise ContractError("scale valuation does not match a + n")
        eps = divide_by_pi(c, vc) if vc else c
    psi_c = psi.compose_scale(-vc, eps.unit_inverse())
    pref = chi.value(c)
    if a % 2 == 0:
        return EpsilonValue.from_root(pref * psi_c.value(ring.one), ring.p)
    d = a // 2
    terms: List[RootOfUnity] = []
    for t in ring.k.elements():
        x = ring.one if t.is_zero() else ring.one_plus_pi_teich(d, t)
        terms.append(chi.value(x).inverse() * psi_c.value(x))
    D = 1
    for r in terms:
        D = lcm(D, r.exp.denominator)
    counts: Dict[int, int] = {}
    for r in terms:
        e = _exp_at(r, D)
        counts[e] = counts.get(e, 0) + 1
    z = CyclotomicNumber(D, counts)
    return EpsilonValue(z, ring.p, ring.f) * pref


# -- norm subgroups of tame extensions ---------------------------------

@dataclass
class NormGroupData:
    """F^x modulo norms from E, in (valuation, dlog) coordinates."""

    index: int
    characters: List[TameChar]
    rows: List[List[int]]
    pi_val: int
    pi_unit_dlog: int
    teich_dlog: int


def _validate_pair(E: Ring, F: Ring):
    if F.e != 1:
        raise ConfigError("base of the extension must be unramified")
    if E.p != F.p or E.f % F.f:
        raise ConfigError("not an extension of the base ring")


def norm_group(E: Ring, F: Ring) -> NormGroupData:
    """Describe F^x / N(E^x) and its full character group.

    Norms are computed on the generators pi_E and [g_E]; together with
    U_F^1 (inside the norm image for tame extensions) they present the
    quotient on the lattice Z x Z/(q-1) of (valuation, unit dlog) pairs.
    The character count is checked against [E:F].
    """
    _validate_pair(E, F)
    q = F.q
    n_deg = (E.f // F.f) * E.e
    npi = norm_to(E.pi_pow(1), F)
    v1 = npi.valuation()
    if v1 != E.f // F.f:
        raise ContractError("norm of a uniformizer has the wrong valuation")
    s1 = F.k.dlog(divide_by_pi(npi, v1).residue() if v1 else npi.residue())
    nt = norm_to(E.teich(E.k.g), F)
    if nt.valuation() != 0:
        raise ContractError("norm of a Teichmueller unit is not a unit")
    s2 = F.k.dlog(nt.residue())
    rows = [[0, q - 1], [v1, s1], [0, s2]]
    order, ys = dual_vectors(rows, 2)
    if order != n_deg:
        raise ContractError(
            f"norm index {order} disagrees with the degree {n_deg}")
    chars: List[TameChar] = []
    for y_pi, y_u in ys:
        tm = y_u * (q - 1)
        if tm.denominator != 1:
            raise ContractError("unit exponent is not integral")
        ch = TameChar(F, int(tm), RootOfUnity(y_pi))
        if ch.value(npi) != ONE or ch.value(nt) != ONE:
            raise ContractError("dual character fails to kill a norm")
        chars.append(ch)
    return NormGroupData(order, chars, rows, v1, s1, s2)


def lambda_product(E: Ring, F: Ring, psi: AdditiveChar) -> EpsilonValue:
    """lambda_{E/F}(psi) as the product of W over the norm-dual characters.

    The induced representation of the trivial character decomposes into
    exactly the characters trivial on norms, and the trivial summand
    contributes W = 1, so the product over the whole dual is the lambda
    factor itself.
    """
    if psi.ring is not F:
        raise ConfigError("psi must live on the base ring")
    ng = norm_group(E, F)
    out = EpsilonValue.one(F.p)
    for ch in ng.characters:
        out = out * tate_epsilon(ch, psi)
    return out


# -- closed forms ------------------------------------------------------

def legendre_residue(x: FqElem) -> int:
    """+1 on nonzero squares, -1 otherwise (odd q)."""
    if x.is_zero():
        raise ConfigError("residue symbol of zero")
    return 1 if x.field.dlog(x) % 2 == 0 else -1


def _quadratic_ramified_closed(u: FqElem, F: Ring, nlevel: int) -> RootOfUnity:
    # value at a level -1 additive character, then transported:
    # scaling by p multiplies lambda by the norm class of p, which is
    # the residue symbol of -u since pi_K^2 = [u] p makes -[u]p a norm.
    p, s = F.p, F.f
    if p % 4 == 1:
        base = RootOfUnity(s - 1, 2)
    else:
        base = RootOfUnity(s - 1, 2) * RootOfUnity(s, 4)
    if legendre_residue(-u) == -1 and (nlevel + 1) % 2:
        base = base * RootOfUnity(1, 2)
    return base


def _tame_char_order(ch: TameChar) -> int:
    from math import gcd
    q1 = ch.ring.q - 1
    o1 = q1 // gcd(q1, ch.teich_mult) if ch.teich_mult else 1
    return lcm(o1, ch.root_pi.order)


def lambda_closed_form(E: Ring, F: Ring, psi: AdditiveChar) -> Tuple[EpsilonValue, str]:
    """Closed lambda_{E/F}(psi) for the shapes that admit one.

    Odd degree Galois data have trivial lambda.  Unramified extensions
    reduce to a power of a root of unity determined by psi's level.  An
    even-degree totally ramified cyclic extension reduces to the
    quadratic subfield value times a sign read off any generator of the
    dual group; the sign is generator-independent and this is asserted.
    """
    _validate_pair(E, F)
    if psi.ring is not F:
        raise ConfigError("psi must live on the base ring")
    f_rel = E.f // F.f
    e = E.e
    deg = e * f_rel
    n = psi.level
    if e > 1 and (F.q - 1) % e:
        raise ConfigError("ramified part is not abelian over the base")
    if deg % 2:
        return EpsilonValue.one(F.p), "odd-degree"
    if e == 1:
        r = RootOfUnity(n * (deg * (deg - 1) // 2), deg)
        return EpsilonValue.from_root(r, F.p), "unramified"
    if f_rel == 1:
        half = deg // 2
        tpar = (half * (half - 1)) // 2
        ng = norm_group(E, F)
        neg = F.teich(F.k.from_int(-1))
        vals = set()
        for ch in ng.characters:
            if _tame_char_order(ch) == deg:
                vals.add(ch.value(neg) ** tpar)
        if len(vals) != 1:
            raise ContractError("sign depends on the chosen dual generator")
        quad = _quadratic_ramified_closed(E.u, F, n)
        return EpsilonValue.from_root(vals.pop() * quad, F.p), "even-cyclic-ramified"
    raise ConfigError("no closed form for a mixed even extension here")


# -- lifting and twisting checks ---------------------------------------

@dataclass
class CheckResult:
    label: str
    lhs: EpsilonValue
    rhs: EpsilonValue

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def davenport_hasse_check(chi: MultChar, psi: AdditiveChar, d: int) -> CheckResult:
    """Compare W(chi, psi)^d with W over the unramified degree-d lift."""
    E = chi.ring
    if E.e != 1:
        raise ConfigError("lifting check needs an unramified presentation")
    if d < 1:
        raise ConfigError("lift degree must be positive")
    K = make_ring(E.p, E.f * d, 1, prec=E.prec)
    chiK = NormCompositeChar(chi, K)
    psiK = compose_trace(psi, K)
    lhs = tate_epsilon(chi, psi) ** d
    rhs = tate_epsilon(chiK, psiK)
    return CheckResult(f"lift-deg-{d}", lhs, rhs)


def deligne_twist_check(chi_big: MultChar, chi_small: MultChar,
                        psi: AdditiveChar) -> CheckResult:
    """W(chi_small * chi_big, psi) against chi_small(c) W(chi_big, psi).

    Valid when a(chi_big) >= 2 a(chi_small): on the matched window the
    small character cannot see the difference, so the twist only moves
    the prefactor.  Smaller conductors are refused, not computed.
    """
    ring = chi_big.ring
    if chi_small.ring is not ring or psi.ring is not ring:
        raise ConfigError("all three characters must share a ring")
    h = char_conductor(chi_big)
    asmall = char_conductor(chi_small)
    if h < 2 * max(asmall, 1):
        raise ConfigError(
            f"twist inequality violated: a(big)={h} < 2*max(a(small),1)={2 * max(asmall, 1)}")
    c, vc, eps = find_c(chi_big, psi, conductor=h)
    lhs = tate_epsilon(chi_small * chi_big, psi, conductor=h)
    rhs = tate_epsilon(chi_big, psi, conductor=h) * chi_small.value(c)
    return CheckResult("stable-twist", lhs, rhs)


# -- families ----------------------------------------------------------

def conductor2_characters(F: Ring, root_pi: RootOfUnity = ONE) -> List[TableChar]:
    """Every character of conductor exactly 2, as table characters."""
    gens = unit_group(F, 2)
    radix = [o for _, o in gens]
    out: List[TableChar] = []

    def build(idx: int, images: List[RootOfUnity]):
        if idx == len(gens):
            ch = TableChar(F, 2, gens, list(images), root_pi)
            if char_conductor(ch) == 2:
                out.append(ch)
            return
        for t in range(radix[idx]):
            images.append(RootOfUnity(t, radix[idx]))
            build(idx + 1, images)
            images.pop()

    build(0, [])
    if F.e == 1 and len(out) != (F.q - 1) * (F.q - 1):
        raise ContractError("conductor-2 family has the wrong size")
    return out
