"""Characters of tame local rings.

Additive characters are all of the form x -> psi_0(Tr_{E/Q_p}(pi^t u x))
where psi_0 is the standard character of Q_p (exponential of the p-adic
fractional part).  The pair (t, u) is kept symbolic so that negative
powers of pi never have to exist as ring elements: evaluation rewrites
pi^(-s) as pi^(ek-s) [u]^(-k) p^(-k) and reads the fractional part off the
integer trace mod p^k.  If the ring does not carry k digits the evaluation
refuses with PrecisionError rather than return a truncated lie.

Multiplicative characters come in evaluation strategies sharing one
interface: tame characters read the residue dlog, table characters
memorize a finite unit group, norm composites push evaluation through a
norm map, and products/powers combine them.  A character's conductor
exponent is measured, not trusted: probe the filtration units 1 + pi^i [d]
from a structural upper bound downwards.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cyclotomic import RootOfUnity
from .errors import ConfigError, ContractError, PrecisionError
from .localring import (
    RElem,
    Ring,
    divide_by_pi,
    norm_to,
    trace_qp,
    truncate_key,
    unit_reps,
)

ONE = RootOfUnity(0, 1)


class AdditiveChar:
    """psi(x) = psi_0(Tr(pi^shift * unit * x)) on a tame ring."""

    def __init__(self, ring: Ring, shift: int = 0, unit: Optional[RElem] = None):
        self.ring = ring
        self.shift = shift
        if unit is not None:
            if unit.ring is not ring:
                raise ConfigError("scale unit must live in the character's ring")
            if unit.residue().is_zero():
                raise ConfigError("scale unit must be a unit")
        self.unit = unit

    @property
    def level(self) -> int:
        """n(psi): largest n with psi trivial on pi^(-n) O."""
        return self.shift + self.ring.different_exponent

    def compose_scale(self, vshift: int, unit: Optional[RElem] = None) -> "AdditiveChar":
        """The character x -> psi(pi^vshift * unit * x)."""
        if unit is None:
            new_unit = self.unit
        elif self.unit is None:
            new_unit = unit
        else:
            new_unit = self.unit * unit
        return AdditiveChar(self.ring, self.shift + vshift, new_unit)

    def exponent_parts(self, x: RElem) -> Tuple[int, int]:
        """The value as (T, p^k): psi(x) = exp(2 pi i T / p^k)."""
        R = self.ring
        if x.ring is not R:
            raise ConfigError("argument ring mismatch")
        if self.shift >= 0:
            return 0, 1
        y = x if self.unit is None else self.unit * x
        s = -self.shift
        k = -(-s // R.e)
        z = y * R.pi_pow(R.e * k - s)
        if k:
            z = z * R.teich_u_inv ** k
        t, digits = trace_qp(z)
        if digits < k:
            raise PrecisionError(
                f"additive character needs {k} trace digits, ring holds {digits}"
            )
        pk = R.p ** k
        return t % pk, pk

    def exponent(self, x: RElem) -> Fraction:
        t, pk = self.exponent_parts(x)
        return Fraction(t, pk)

    def value(self, x: RElem) -> RootOfUnity:
        t, pk = self.exponent_parts(x)
        return RootOfUnity(t, pk)


def psi_standard(ring: Ring) -> AdditiveChar:
    return AdditiveChar(ring, 0, None)


# -- multiplicative characters ----------------------------------------

class MultChar:
    """Interface: value(x) on nonzero x, a structural conductor bound."""

    ring: Ring
    level_bound: int

    def value(self, x: RElem) -> RootOfUnity:
        raise NotImplementedError

    def __mul__(self, other: "MultChar") -> "MultChar":
        return ProductChar(self, other)

    def __pow__(self, k: int) -> "MultChar":
        return PowChar(self, k)

    def inverse(self) -> "MultChar":
        return PowChar(self, -1)

    def _split(self, x: RElem) -> Tuple[int, RElem]:
        v = x.valuation()
        if v is None:
            raise PrecisionError("character evaluated at zero (below precision)")
        return v, (x if v == 0 else divide_by_pi(x, v))


class TameChar(MultChar):
    """Character trivial on principal units: chi([xi] pi^v u1) = z^(t dlog xi) r^v."""

    def __init__(self, ring: Ring, teich_mult: int, root_pi: RootOfUnity = ONE):
        self.ring = ring
        self.teich_mult = teich_mult % (ring.q - 1)
        self.root_pi = root_pi
        self.level_bound = 1

    def value(self, x: RElem) -> RootOfUnity:
        v, w = self._split(x)
        xi = w.residue()
        out = RootOfUnity(self.teich_mult * self.ring.k.dlog(xi), self.ring.q - 1)
        if v:
            out = out * self.root_pi ** v
        return out


TABLE_CHAR_BOUND = 200000


class TableChar(MultChar):
    """Character defined by images of a finite unit basis, fully memorized."""

    def __init__(self, ring: Ring, level: int,
                 gens: Sequence[Tuple[RElem, int]],
                 images: Sequence[RootOfUnity],
                 root_pi: RootOfUnity = ONE):
        if len(gens) != len(images):
            raise ConfigError("one image per generator required")
        self.ring = ring
        self.level = level
        self.level_bound = level
        self.root_pi = root_pi
        size = 1
        for _, o in gens:
            size *= o
        if size > TABLE_CHAR_BOUND:
            raise ConfigError(f"unit table of size {size} refused")
        for (g, o), im in zip(gens, images):
            if not (im ** o) == ONE:
                raise ConfigError("image order must divide the generator order")
        self.table: Dict[Tuple, RootOfUnity] = {truncate_key(ring.one, level): ONE}
        elems = [(ring.one, ONE)]
        for (g, o), im in zip(gens, images):
            cur = list(elems)
            z, zv = ring.one, ONE
            for _ in range(o - 1):
                z = z * g
                zv = zv * im
                for s, sv in cur:
                    w, wv = s * z, sv * zv
                    self.table[truncate_key(w, level)] = wv
                    elems.append((w, wv))
        if len(self.table) != size:
            raise ContractError("unit basis for character table is not independent")

    def value(self, x: RElem) -> RootOfUnity:
        v, w = self._split(x)
        key = truncate_key(w, self.level)
        got = self.table.get(key)
        if got is None:
            raise ContractError("unit falls outside the character's table")
        if v:
            got = got * self.root_pi ** v
        return got


class NormCompositeChar(MultChar):
    """chi_base composed with the norm to the base's (unramified) ring."""

    def __init__(self, base: MultChar, ring: Ring):
        if base.ring.e != 1:
            raise ConfigError("norm composite needs an unramified base presentation")
        self.base = base
        self.ring = ring
        rel_e = ring.e
        b = base.level_bound
        self.level_bound = rel_e * (b - 1) + 1 if b >= 1 else 0
        self._pi_image: Optional[RootOfUnity] = None

    def value(self, x: RElem) -> RootOfUnity:
        # norming a deep pi-power as one conjugate product underflows the
        # stored digits, so split the valuation off and norm the unit part
        v, w = self._split(x)
        out = self.base.value(norm_to(w, self.base.ring))
        if v:
            if self._pi_image is None:
                self._pi_image = self.base.value(
                    norm_to(self.ring.pi_pow(1), self.base.ring))
            out = out * self._pi_image ** v
        return out


class ProductChar(MultChar):
    def __init__(self, a: MultChar, b: MultChar):
        if a.ring is not b.ring:
            raise ConfigError("product characters must share a ring")
        self.a, self.b = a, b
        self.ring = a.ring
        self.level_bound = max(a.level_bound, b.level_bound)

    def value(self, x: RElem) -> RootOfUnity:
        return self.a.value(x) * self.b.value(x)


class PowChar(MultChar):
    def __init__(self, base: MultChar, k: int):
        self.base, self.k = base, k
        self.ring = base.ring
        self.level_bound = base.level_bound

    def value(self, x: RElem) -> RootOfUnity:
        return self.base.value(x) ** self.k


class TrivialChar(MultChar):
    def __init__(self, ring: Ring):
        self.ring = ring
        self.level_bound = 0

    def value(self, x: RElem) -> RootOfUnity:
        v = x.valuation()
        if v is None:
            raise PrecisionError("character evaluated at zero (below precision)")
        return ONE


def char_conductor(chi: MultChar) -> int:
    """Measured conductor exponent a(chi): probe filtration units."""
    ring = chi.ring
    bound = max(chi.level_bound, 1)
    deepest = 0
    for i in range(1, bound):
        if any(
            chi.value(ring.one_plus_pi_teich(i, d)) != ONE
            for d in ring.k.nonzero_elements()
        ):
            deepest = max(deepest, i)
    if deepest:
        return deepest + 1
    if chi.value(ring.teich(ring.k.g)) != ONE:
        return 1
    return 0


def char_order(chi: MultChar, probes: Sequence[RElem]) -> int:
    """lcm of value orders over the probe elements."""
    from math import lcm

    n = 1
    for x in probes:
        n = lcm(n, chi.value(x).order)
    return n


def find_c(chi: MultChar, psi: AdditiveChar,
           conductor: Optional[int] = None) -> Tuple[RElem, int, RElem]:
    """A scale c = pi^(a+n) eps with chi(1+x) = psi(x/c) on ceil(a/2) <= v(x).

    Returns (c, v(c), eps).  For a <= 1 the compatibility window is empty
    and c = pi^(a+n) works as is.  The unit eps is located by exhaustive
    search over U/U^(floor(a/2)) and verified on the full digit window, in
    generator-power-then-digit order, so the choice is deterministic.
    """
    ring = chi.ring
    if psi.ring is not ring:
        raise ConfigError("character pair must share a ring")
    h = char_conductor(chi) if conductor is None else conductor
    n = psi.level
    vc = h + n
    if vc < 0:
        raise ConfigError("total scale valuation is negative; shift psi first")
    if h <= 1:
        c = ring.pi_pow(vc)
        return c, vc, ring.one
    hp = h // 2
    hc = h - hp
    window = _digit_window(ring, hc, h)
    for eps in unit_reps(ring, max(hp, 1)):
        scaled = psi.compose_scale(-vc, eps.unit_inverse())
        if all(
            chi.value(ring.one + x) == scaled.value(x)
            for x in window
        ):
            return ring.pi_pow(vc) * eps, vc, eps
    raise ContractError("no compatible Gauss scale exists at this conductor")


def _digit_window(ring: Ring, lo: int, hi: int) -> List[RElem]:
    """All sums x = sum_{lo <= i < hi} pi^i [d_i], zero digits included."""
    out = [ring.zero]
    for i in range(lo, hi):
        pp = ring.pi_pow(i)
        nxt = []
        for base in out:
            for d in ring.k.elements():
                nxt.append(base if d.is_zero() else base + ring.teich(d) * pp)
        out = nxt
    return out
