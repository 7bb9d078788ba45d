"""Local constants of Heisenberg representations, by two kinds of route.

w_direct computes W(rho, psi) from inductivity through a ramified
subextension: the lambda factor of E_j/F times the abelian local
constant of the route character.  Everything else in this module is a
closed formula or functional identity evaluated independently and
packaged as a WReport against the direct value, so a disagreement
arrives as data (the exact discrepancy factor) instead of an assertion
failure buried in a sum.

The closed forms trade the degree-q^... abelian sum for residue-field
sums of length q: the tame residue character tau of the route and the
base twist are the only characters that survive the collapse.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from .abelian import (
    compose_trace,
    lambda_product,
    lamprecht_tate_epsilon,
    norm_group,
    tate_epsilon,
)
from .characters import AdditiveChar, MultChar, char_conductor, find_c
from .cyclotomic import (
    CyclotomicNumber,
    EpsilonValue,
    RootOfUnity,
    is_root_of_unity,
)
from .errors import ConfigError, ContractError
from .heisenberg import HeisenbergRep, det_char, subextension
from .localring import RElem
from .residue import FqElem


@dataclass
class WReport:
    """One identity check: direct value on the left, formula on the right."""

    label: str
    lhs: EpsilonValue
    rhs: EpsilonValue
    flagged: bool = False
    note: str = ""

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def discrepancy(self) -> EpsilonValue:
        """rhs / lhs: the factor the closed form is off by."""
        return self.rhs * self.lhs.inverse()


def _check_base(rep: HeisenbergRep, psi: AdditiveChar) -> None:
    if psi.ring is not rep.F:
        raise ConfigError("the additive character must live on the base ring")


def _epsilon_any(chi: MultChar, psi: AdditiveChar) -> EpsilonValue:
    # the direct unit sum over the splitting ring blows up past conductor
    # one, so route wild characters through the collapsed evaluation
    a = char_conductor(chi)
    if a >= 2:
        return lamprecht_tate_epsilon(chi, psi, conductor=a)
    return tate_epsilon(chi, psi, conductor=a)


def w_direct(rep: HeisenbergRep, psi: AdditiveChar,
             j: int = 0, root_twist: int = 0) -> EpsilonValue:
    """W(rho, psi) through the ramified route E_j.

    Inductivity in degree [E_j : F] = m: the lambda factor of the
    extension times the abelian constant of the route character against
    psi composed with the trace.  Memoized per (psi, j, root_twist) on
    the representation, since table suites revisit the same value.
    """
    _check_base(rep, psi)
    cache = rep.__dict__.setdefault("_w_cache", {})
    key = (id(psi), j % rep.m, root_twist % rep.m)
    hit = cache.get(key)
    if hit is not None and hit[0] is psi:
        return hit[1]
    sub = subextension(rep, j, root_twist)
    psi_j = compose_trace(psi, sub.ring)
    val = lambda_product(sub.ring, rep.F, psi) * tate_epsilon(sub.chi, psi_j)
    cache[key] = (psi, val)
    return val


def _delta_value(rep: HeisenbergRep, c: RElem) -> RootOfUnity:
    # product of the norm-dual characters of E_0/F at c; always +-1
    out = RootOfUnity(0, 1)
    for ch in norm_group(subextension(rep, 0).ring, rep.F).characters:
        out = out * ch.value(c)
    if out ** 2 != RootOfUnity(0, 1):
        raise ContractError("dual product is not quadratic")
    return out


def _R_factor(rep: HeisenbergRep, psi: AdditiveChar, c: RElem) -> EpsilonValue:
    """lambda of a ramified route times the dual product at c.

    A fourth root of unity; trivial in odd degree, where the lambda
    closed form is 1 and the dual product is a full odd cyclic group.
    """
    R = lambda_product(subextension(rep, 0).ring, rep.F, psi) * _delta_value(rep, c)
    if R ** 4 != EpsilonValue.one(rep.F.p):
        raise ContractError("route constant is not a fourth root of unity")
    if rep.m % 2 and R != EpsilonValue.one(rep.F.p):
        raise ContractError("odd-degree route constant failed to collapse")
    return R


def _route_tame_mult(rep: HeisenbergRep) -> int:
    return subextension(rep, 0).tame.teich_mult


def _scaled_psi(psi: AdditiveChar, v: int, unit: Optional[RElem]) -> AdditiveChar:
    inv = unit.unit_inverse() if unit is not None else None
    return psi.compose_scale(-v, inv)


def w_invariant_minimal(rep: HeisenbergRep, psi: AdditiveChar,
                        eps: Optional[FqElem] = None,
                        j: int = 0) -> WReport:
    """Minimal conductor: W = R * det(rho)(c) q^(-1/2) sum over the
    residue field of tau^-1(x) psi(m [x] / c), with v(c) = 1 + n(psi).

    The Teichmueller unit of c may be supplied (eps); the value is
    invariant because moving it through the sum costs the dual product
    twice.
    """
    _check_base(rep, psi)
    if not rep.is_minimal():
        raise ConfigError("closed form requires a minimal representation")
    if psi.level < -1:
        raise ConfigError("c would not be integral at this psi level")
    F = rep.F
    q, p, m = F.q, F.p, rep.m
    vc = 1 + psi.level
    c_unit = F.teich(eps) if eps is not None else None
    c = F.pi_pow(vc) if c_unit is None else c_unit * F.pi_pow(vc)
    R = _R_factor(rep, psi, c)
    tm = _route_tame_mult(rep)
    psi_c = _scaled_psi(psi, vc, c_unit)
    mm = F.from_int(m)
    total = CyclotomicNumber.zero()
    for t in range(q - 1):
        term = RootOfUnity(-tm * t, q - 1) * psi_c.value(mm * F.teich(F.k.gpow(t)))
        total = total + term.to_cyclotomic()
    rhs = R * (EpsilonValue(total, p, F.f) * det_char(rep).value(c))
    return WReport("invariant-minimal", w_direct(rep, psi, j), rhs)


def _h_sum(rep: HeisenbergRep, psi_c: AdditiveChar) -> EpsilonValue:
    # q^(-1/2) sum over t of twist(1 + pi^(h//2) [t])^(-m) psi_c(m (1 + ...))
    F = rep.F
    hp = rep.h // 2
    mm = F.from_int(rep.m)
    total = CyclotomicNumber.zero()
    for t in F.k.elements():
        u = F.one if t.is_zero() else F.one_plus_pi_teich(hp, t)
        term = rep.twist.value(u) ** (-rep.m) * psi_c.value(mm * u)
        total = total + term.to_cyclotomic()
    return EpsilonValue(total, F.p, F.f)


def w_nonminimal(rep: HeisenbergRep, psi: AdditiveChar, j: int = 0) -> WReport:
    """Twisted conductor m h: four parity branches of the closed form.

    The one branch with both m and h even is reported flagged: the
    simple form misses the direct value by a positive factor, and the
    report carries the exact discrepancy rather than forcing agreement.
    """
    _check_base(rep, psi)
    if rep.is_minimal():
        raise ConfigError("closed form requires a nontrivial wild twist")
    F, m, h = rep.F, rep.m, rep.h
    c, vc, c_eps = find_c(rep.twist, psi)
    det_c = det_char(rep).value(c)
    psi_c = _scaled_psi(psi, vc, c_eps)
    simple = psi_c.value(F.from_int(m))
    lhs = w_direct(rep, psi, j)
    if m % 2:
        if h % 2 == 0:
            rhs = EpsilonValue((det_c * simple).to_cyclotomic(), F.p, 0)
            return WReport("nonminimal-closed", lhs, rhs, note="m odd, h even")
        rhs = _h_sum(rep, psi_c) * det_c
        return WReport("nonminimal-closed", lhs, rhs, note="m odd, h odd")
    R = _R_factor(rep, psi, c)
    if h % 2:
        rhs = R * (_h_sum(rep, psi_c) * det_c)
        return WReport("nonminimal-closed", lhs, rhs, note="m even, h odd")
    scale = EpsilonValue(CyclotomicNumber.rational(F.p ** F.f), F.p, F.f)
    rhs = R * scale * EpsilonValue((det_c * simple).to_cyclotomic(), F.p, 0)
    return WReport("nonminimal-closed", lhs, rhs, flagged=True,
                   note="m even, h even: simple form expected to miss")


def w_congruence(rep: HeisenbergRep, psi: AdditiveChar) -> WReport:
    """W(rho)^m against the lambda of K/F times W of the K-character.

    Induction bookkeeping forces exact equality in every degree; the
    lambda factor itself is trivial in odd degree and a fourth root of
    unity in even degree, recorded in the report note.
    """
    _check_base(rep, psi)
    lhs = w_direct(rep, psi) ** rep.m
    data = norm_group(rep.K, rep.F)
    if data.index != rep.m * rep.m:
        raise ContractError("splitting ring norm index is off")
    psi_K = compose_trace(psi, rep.K)
    lam = lambda_product(rep.K, rep.F, psi)
    rhs = lam * _epsilon_any(rep.chi_K(), psi_K)
    if rep.m % 2:
        if lam != 1:
            raise ContractError("odd-degree lambda came out nontrivial")
        note = "lambda = 1"
    else:
        lam_order = is_root_of_unity(lam)
        if lam_order is None or 4 % lam_order:
            raise ContractError("even-degree lambda left the fourth roots")
        note = "lambda of order %d" % lam_order
    return WReport("degree-power-congruence", lhs, rhs, note=note)


def w_large_conductor(rep: HeisenbergRep, psi: AdditiveChar) -> WReport:
    """Stability: for a wild twist, W(rho0 x chi) = W(chi)^m det(rho0)(c)."""
    _check_base(rep, psi)
    if rep.is_minimal():
        raise ConfigError("stability check needs a twisted representation")
    rep0 = HeisenbergRep(rep.datum, rep.theta_mult, rep.t)
    c, _, _ = find_c(rep.twist, psi)
    lhs = w_direct(rep, psi)
    rhs = tate_epsilon(rep.twist, psi) ** rep.m * det_char(rep0).value(c)
    return WReport("large-conductor-stability", lhs, rhs)


def unramified_twist_check(rep: HeisenbergRep, psi: AdditiveChar,
                           omega_pi: RootOfUnity) -> WReport:
    """Twist by the unramified character sending p to omega_pi.

    On the inducing side the twist multiplies the uniformizer value by
    omega_pi^m; on the constant it costs omega_pi^(a(rho) + m n(psi)).
    """
    _check_base(rep, psi)
    twisted = HeisenbergRep(rep.datum, rep.theta_mult,
                            rep.t * omega_pi ** rep.m, rep.twist)
    lhs = w_direct(twisted, psi)
    rhs = w_direct(rep, psi) * omega_pi ** (rep.conductor() + rep.m * psi.level)
    return WReport("unramified-twist", lhs, rhs)


def unramified_lift_check(rep: HeisenbergRep, psi: AdditiveChar,
                          j: int = 0) -> WReport:
    """W of the K-character against the m-th power along the unramified
    lift K/E_j, with the classical conductor-one sign (-1)^(m-1)."""
    _check_base(rep, psi)
    if not rep.is_minimal():
        raise ConfigError("lift comparison implemented for conductor one only")
    sub = subextension(rep, j)
    psi_j = compose_trace(psi, sub.ring)
    psi_K = compose_trace(psi, rep.K)
    lhs = tate_epsilon(rep.chi_K(), psi_K)
    rhs = tate_epsilon(sub.chi, psi_j) ** rep.m * ((-1) ** (rep.m - 1))
    return WReport("unramified-lift", lhs, rhs)


@dataclass
class TorsionReport:
    """Exact torsion data for one W value.

    value and order describe W itself; gamma is the K-level constant
    W(chi_K, psi_K) whose torsion controls everything, since
    W^m = lambda * gamma with lambda^4 = 1.
    """
    value: EpsilonValue
    order: Optional[int]
    gamma: EpsilonValue
    gamma_order: Optional[int]


def root_of_unity_analysis(rep: HeisenbergRep, psi: AdditiveChar
                           ) -> TorsionReport:
    """Decide exactly whether W is a root of unity, with a witness.

    W has finite order precisely when the normalized K-level Gauss
    quotient gamma does, and then the order divides 4 * m * ord(gamma).
    Both directions of the equivalence are asserted, so the returned
    witness amounts to a proof either way.
    """
    w = w_direct(rep, psi)
    order = is_root_of_unity(w)
    psi_K = compose_trace(psi, rep.K)
    gamma = _epsilon_any(rep.chi_K(), psi_K)
    gamma_order = is_root_of_unity(gamma)
    if (order is None) != (gamma_order is None):
        raise ContractError("torsion of W and of its Gauss quotient split")
    if order is not None and (4 * rep.m * gamma_order) % order:
        raise ContractError("torsion order escaped the 4 m n bound")
    return TorsionReport(w, order, gamma, gamma_order)
