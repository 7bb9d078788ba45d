"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are group-ring vectors over Q indexed by Z/N.  The canonical form
lives on the tensor-product basis of Q(zeta_N) = (x)_p Q(zeta_{p^a}): an
exponent is kept iff each of its prime-power CRT components has top digit
< p-1; a component with top digit p-1 is rewritten through
1 + x^{p^{a-1}} + ... + x^{(p-1)p^{a-1}} = 0.  Equality of canonical forms
is equality in the field, with no floating-point anywhere.

EpsilonValue wraps a cyclotomic number together with a half-integer power
of the residue characteristic, so Gauss-sum normalizations q^{-a/2} stay
exact; sqrt(p) itself embeds via the classical quadratic Gauss sum.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple, Union

from .errors import ConfigError, ContractError

Rational = Union[int, Fraction]


def _factorize(n: int) -> Dict[int, int]:
    fact: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fact[d] = fact.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        fact[n] = fact.get(n, 0) + 1
    return fact


class _Level:
    """Cached per-level data: factorization, CRT split, expansion memo."""

    __slots__ = ("n", "fact", "ppows", "crt_units", "_expand_memo")

    def __init__(self, n: int):
        self.n = n
        self.fact = _factorize(n)
        self.ppows = [p ** a for p, a in sorted(self.fact.items())]
        # crt_units[i] is 1 mod ppows[i] and 0 mod every other prime power
        self.crt_units = []
        for q in self.ppows:
            rest = n // q
            self.crt_units.append(rest * pow(rest, -1, q) % n)
        self._expand_memo: Dict[int, Tuple[Tuple[int, int], ...]] = {}

    def expand(self, e: int) -> Tuple[Tuple[int, int], ...]:
        """Canonical-basis expansion of zeta^e as ((exponent, sign), ...)."""
        e %= self.n
        memo = self._expand_memo.get(e)
        if memo is not None:
            return memo
        # per prime power: list of (residue, sign) options
        primes = sorted(self.fact.items())
        options = []
        for (p, a), q in zip(primes, self.ppows):
            r = e % q
            top, low = divmod(r, q // p)
            if top == p - 1:
                options.append([(low + j * (q // p), -1) for j in range(p - 1)])
            else:
                options.append([(r, 1)])
        terms: Dict[int, int] = {}
        stack = [(0, 1, 0)]  # (partial exponent, sign, option index)
        while stack:
            acc, sign, i = stack.pop()
            if i == len(options):
                terms[acc] = terms.get(acc, 0) + sign
                continue
            unit = self.crt_units[i]
            for r, s in options[i]:
                stack.append(((acc + r * unit) % self.n, sign * s, i + 1))
        memo = tuple(sorted(terms.items()))
        self._expand_memo[e] = memo
        return memo


_LEVELS: Dict[int, _Level] = {}


def _level(n: int) -> _Level:
    lev = _LEVELS.get(n)
    if lev is None:
        lev = _LEVELS[n] = _Level(n)
    return lev


class CyclotomicNumber:
    """An element of Q(zeta_N), always held in canonical form at minimal level."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Dict[int, Rational]):
        if level < 1:
            raise ConfigError("cyclotomic level must be >= 1")
        lev = _level(level)
        canon: Dict[int, Rational] = {}
        for e, c in coeffs.items():
            if not c:
                continue
            for e2, sign in lev.expand(e):
                v = canon.get(e2, 0) + (c if sign > 0 else -c)
                if v:
                    canon[e2] = v
                else:
                    canon.pop(e2, None)
        # reduce to the minimal dividing level: a prime p drops once every
        # canonical exponent is divisible by p
        changed = True
        while changed and level > 1 and canon:
            changed = False
            for p in list(_level(level).fact):
                if all(e % p == 0 for e in canon):
                    level //= p
                    nxt: Dict[int, Rational] = {}
                    lev2 = _level(level)
                    for e, c in canon.items():
                        for e2, sign in lev2.expand(e // p):
                            v = nxt.get(e2, 0) + (c if sign > 0 else -c)
                            if v:
                                nxt[e2] = v
                            else:
                                nxt.pop(e2, None)
                    canon = nxt
                    changed = True
                    break
        if not canon:
            level = 1
        self.level = level
        self.coeffs = canon

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "CyclotomicNumber":
        return CyclotomicNumber(1, {})

    @staticmethod
    def one() -> "CyclotomicNumber":
        return CyclotomicNumber(1, {0: 1})

    @staticmethod
    def rational(c: Rational) -> "CyclotomicNumber":
        return CyclotomicNumber(1, {0: c})

    @staticmethod
    def zeta(n: int, e: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber(n, {e % n: 1})

    # -- ring structure -----------------------------------------------

    def _at_level(self, m: int) -> Dict[int, Rational]:
        if m == self.level:
            return self.coeffs
        k = m // self.level
        return {e * k: c for e, c in self.coeffs.items()}

    def __add__(self, other) -> "CyclotomicNumber":
        other = _coerce(other)
        m = math.lcm(self.level, other.level)
        out = dict(self._at_level(m))
        for e, c in other._at_level(m).items():
            out[e] = out.get(e, 0) + c
        return CyclotomicNumber(m, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "CyclotomicNumber":
        out = CyclotomicNumber.zero()
        out.level = self.level
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self.__add__(_coerce(other).__neg__())

    def __rsub__(self, other):
        return _coerce(other).__sub__(self)

    def __mul__(self, other) -> "CyclotomicNumber":
        if isinstance(other, (int, Fraction)):
            out = CyclotomicNumber.zero()
            if other:
                out.level = self.level
                out.coeffs = {e: c * other for e, c in self.coeffs.items()}
            return out
        other = _coerce(other)
        m = math.lcm(self.level, other.level)
        a = self._at_level(m)
        b = other._at_level(m)
        if len(a) > len(b):
            a, b = b, a
        raw: Dict[int, Rational] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = (e1 + e2) % m
                raw[e] = raw.get(e, 0) + c1 * c2
        return CyclotomicNumber(m, raw)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "CyclotomicNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conj(self) -> "CyclotomicNumber":
        n = self.level
        return CyclotomicNumber(n, {(n - e) % n: c for e, c in self.coeffs.items()})

    def galois(self, k: int) -> "CyclotomicNumber":
        n = self.level
        if math.gcd(k, n) != 1:
            raise ConfigError(f"galois exponent {k} not prime to level {n}")
        return CyclotomicNumber(n, {(e * k) % n: c for e, c in self.coeffs.items()})

    # -- predicates and conversions -----------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.level == 1

    def as_fraction(self) -> Fraction:
        if self.level != 1:
            raise ContractError("as_fraction on a non-rational cyclotomic number")
        return Fraction(self.coeffs.get(0, 0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.level, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"CyclotomicNumber({serialize_cyclotomic(self)!r})"

    # -- inversion ----------------------------------------------------

    def _basis(self) -> Tuple[int, ...]:
        lev = _level(self.level)
        exps = [0]
        for (p, a), q, unit in zip(
            sorted(lev.fact.items()), lev.ppows, lev.crt_units
        ):
            keep = [r for r in range(q) if (r // (q // p)) != p - 1]
            exps = [(e + r * unit) % self.level for e in exps for r in keep]
        return tuple(sorted(exps))

    def inverse(self) -> "CyclotomicNumber":
        """Exact inverse via the multiplication matrix on the canonical basis."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.level == 1:
            return CyclotomicNumber.rational(1 / Fraction(self.coeffs[0]))
        basis = self._basis()
        dim = len(basis)
        if dim > 160:
            raise ConfigError(f"inverse at level {self.level} (degree {dim}) refused")
        index = {e: i for i, e in enumerate(basis)}
        cols = []
        for e in basis:
            prod = self * CyclotomicNumber.zeta(self.level, e)
            col = [Fraction(0)] * dim
            for e2, c in prod._at_level(self.level).items():
                col[index[e2]] = Fraction(c)
            cols.append(col)
        # solve M x = e_0 over Q, M[i][j] = cols[j][i]
        m = [[cols[j][i] for j in range(dim)] + [Fraction(1 if basis[i] == 0 else 0)]
             for i in range(dim)]
        for col in range(dim):
            piv = next((r for r in range(col, dim) if m[r][col]), None)
            if piv is None:
                raise ContractError("singular multiplication matrix for a nonzero element")
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            m[col] = [v * inv for v in m[col]]
            for r in range(dim):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return CyclotomicNumber(
            self.level, {basis[i]: m[i][dim] for i in range(dim) if m[i][dim]}
        )

    # -- diagnostics ---------------------------------------------------

    def embed_complex(self) -> complex:
        """Float image under zeta_N -> e^(2*pi*i/N).  Diagnostic only: no
        library decision path may branch on this value."""
        n = self.level
        return sum(
            float(c) * complex(math.cos(2 * math.pi * e / n), math.sin(2 * math.pi * e / n))
            for e, c in self.coeffs.items()
        ) if self.coeffs else 0j


def _coerce(x) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CyclotomicNumber.rational(x)
    if isinstance(x, RootOfUnity):
        return x.to_cyclotomic()
    raise TypeError(f"cannot coerce {type(x).__name__} to CyclotomicNumber")


class RootOfUnity:
    """e^(2*pi*i*exp) for exp in Q/Z; the value class for all character images.

    Products and powers are exponent arithmetic on Fractions mod 1, so
    character evaluation never touches group-ring vectors until values are
    summed.
    """

    __slots__ = ("exp",)

    def __init__(self, num, den: int = 1):
        self.exp = Fraction(num, den) % 1

    @staticmethod
    def one() -> "RootOfUnity":
        return RootOfUnity(0)

    @staticmethod
    def zeta(n: int, e: int = 1) -> "RootOfUnity":
        return RootOfUnity(e, n)

    @property
    def order(self) -> int:
        return self.exp.denominator

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.exp + other.exp)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.exp * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(-self.exp)

    conj = inverse

    def __eq__(self, other) -> bool:
        if isinstance(other, RootOfUnity):
            return self.exp == other.exp
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.to_cyclotomic() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.exp)

    def __repr__(self):
        return f"RootOfUnity({self.exp.numerator}/{self.exp.denominator})"

    def to_cyclotomic(self, level: Optional[int] = None) -> CyclotomicNumber:
        n = self.exp.denominator
        if level is None:
            level = n
        if level % n:
            raise ConfigError(f"level {level} does not contain an order-{n} root")
        return CyclotomicNumber.zeta(level, self.exp.numerator * (level // n))


def prod_roots(roots: Iterable[RootOfUnity]) -> RootOfUnity:
    out = RootOfUnity.one()
    for r in roots:
        out = out * r
    return out


# -- square roots of the residue characteristic -----------------------

_SQRT_CACHE: Dict[int, CyclotomicNumber] = {}


def sqrt_prime_embed(p: int) -> CyclotomicNumber:
    """The positive square root of an odd prime p inside Q(zeta_{4p}).

    Built from the quadratic Gauss sum g = sum chi2(x) zeta_p^x, which is
    sqrt(p) for p = 1 mod 4 and i*sqrt(p) for p = 3 mod 4; positivity refers
    to the embedding zeta_N -> e^(2*pi*i/N).
    """
    s = _SQRT_CACHE.get(p)
    if s is not None:
        return s
    if p == 2 or p % 2 == 0:
        raise ConfigError("sqrt_prime_embed needs an odd prime")
    g = CyclotomicNumber(p, {x: _legendre(x, p) for x in range(1, p)})
    if p % 4 == 1:
        s = g
    else:
        s = CyclotomicNumber.zeta(4, 3) * g
    if s * s != CyclotomicNumber.rational(p):
        raise ContractError("quadratic Gauss sum failed s^2 = p")
    _SQRT_CACHE[p] = s
    return s


def _legendre(x: int, p: int) -> int:
    t = pow(x, (p - 1) // 2, p)
    return 1 if t == 1 else (-1 if t == p - 1 else 0)


def sqrt_q_embed(p: int, f: int) -> CyclotomicNumber:
    """Exact sqrt(p^f): rational for even f, p^((f-1)/2)*sqrt(p) otherwise."""
    if f % 2 == 0:
        return CyclotomicNumber.rational(p ** (f // 2))
    return sqrt_prime_embed(p) * (p ** ((f - 1) // 2))


class EpsilonValue:
    """z * p^(-half/2) with z cyclotomic and p the residue characteristic.

    half_power is normalized into {0, 1}: even parts fold into the rational
    coefficients of z.  All Gauss-sum and local-constant values live here.
    """

    __slots__ = ("z", "p", "half")

    def __init__(self, z, p: int, half: int = 0):
        if half < 0:
            raise ConfigError("negative half power; scale z instead")
        z = _coerce(z)
        if half >= 2:
            z = z * Fraction(1, p ** (half // 2))
            half %= 2
        self.z = z
        self.p = p
        self.half = half

    @staticmethod
    def one(p: int) -> "EpsilonValue":
        return EpsilonValue(CyclotomicNumber.one(), p)

    @staticmethod
    def from_root(r: RootOfUnity, p: int) -> "EpsilonValue":
        return EpsilonValue(r.to_cyclotomic(), p)

    def __mul__(self, other) -> "EpsilonValue":
        if isinstance(other, (int, Fraction, CyclotomicNumber, RootOfUnity)):
            return EpsilonValue(self.z * _coerce(other), self.p, self.half)
        if not isinstance(other, EpsilonValue):
            return NotImplemented
        if other.p != self.p:
            raise ContractError(
                f"epsilon values over different residue characteristics: {self.p} vs {other.p}"
            )
        return EpsilonValue(self.z * other.z, self.p, self.half + other.half)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "EpsilonValue":
        if k < 0:
            return self.inverse() ** (-k)
        out = EpsilonValue.one(self.p)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def inverse(self) -> "EpsilonValue":
        a2 = self.z * self.z.conj()  # |z|^2, in the real subfield
        if a2.is_zero():
            raise ZeroDivisionError("inverse of zero epsilon value")
        if a2.is_rational():
            r = a2.as_fraction()
            return EpsilonValue(self.z.conj() * (self.p ** self.half / r), self.p, self.half)
        return EpsilonValue(self.exact_embed().inverse(), self.p, 0)

    def conj(self) -> "EpsilonValue":
        return EpsilonValue(self.z.conj(), self.p, self.half)

    def exact_embed(self) -> CyclotomicNumber:
        """The value as a plain cyclotomic number, using the exact sqrt(p)."""
        if self.half == 0:
            return self.z
        return self.z * sqrt_prime_embed(self.p) * Fraction(1, self.p)

    def abs_squared(self) -> CyclotomicNumber:
        return self.z * self.z.conj() * Fraction(1, self.p ** self.half)

    def is_unitary(self) -> bool:
        return self.abs_squared() == CyclotomicNumber.one()

    def is_zero(self) -> bool:
        return self.z.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CyclotomicNumber, RootOfUnity)):
            other = EpsilonValue(_coerce(other), self.p)
        if not isinstance(other, EpsilonValue):
            return NotImplemented
        if self.p != other.p:
            raise ContractError("comparing epsilon values over different characteristics")
        if self.half == other.half:
            return self.z == other.z
        return self.exact_embed() == other.exact_embed()

    def __hash__(self):
        return hash((self.p, self.exact_embed()))

    def __repr__(self):
        return f"EpsilonValue({serialize_epsilon(self)!r})"

    def embed_complex(self) -> complex:
        return self.z.embed_complex() * self.p ** (-self.half / 2)


def is_root_of_unity(v: EpsilonValue) -> Optional[int]:
    """Exact multiplicative order of v, or None if v is not a root of unity.

    Decision path: |v|^2 must equal 1 exactly, then v^(2M) must equal 1 with
    M = lcm(level, 4p); torsion of Q(zeta_M) has order dividing 2M, so the
    test is complete.  No floating point is consulted.
    """
    if v.is_zero():
        raise ContractError("is_root_of_unity on zero input")
    if v.abs_squared() != CyclotomicNumber.one():
        return None
    w = v.exact_embed()
    if len(w.coeffs) == 1:
        (e, c), = w.coeffs.items()
        if c == 1 or c == -1:
            fr = (Fraction(e, w.level) + (Fraction(1, 2) if c == -1 else 0)) % 1
            return fr.denominator
    m = 2 * math.lcm(w.level, 4 * v.p)
    if w ** m != CyclotomicNumber.one():
        return None
    order = m
    for ell in _factorize(m):
        while order % ell == 0 and w ** (order // ell) == CyclotomicNumber.one():
            order //= ell
    return order


# -- text forms -------------------------------------------------------

def root_text(r: RootOfUnity) -> str:
    """Canonical expression for a root of unity; parse_root inverts it."""
    num, den = r.exp.numerator, r.exp.denominator
    if den == 1:
        return "1"
    if den == 2:
        return "-1"
    if den == 4:
        return "i" if num == 1 else "-i"
    return f"zeta({den})^{num}" if num != 1 else f"zeta({den})"


def epsilon_text(v: EpsilonValue) -> str:
    """Root expression when v has finite order, full serialization if not."""
    n = is_root_of_unity(v)
    if n is not None:
        for k in range(n):
            if v == RootOfUnity(k, n):
                return root_text(RootOfUnity(k, n))
        raise ContractError("finite order reported but no matching root")
    return serialize_epsilon(v)


def _fmt_rational(c: Rational) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize_cyclotomic(z: CyclotomicNumber) -> str:
    body = ",".join(f"{e}={_fmt_rational(c)}" for e, c in sorted(z.coeffs.items()))
    return f"level:{z.level};coeffs:[{body}]"


def serialize_epsilon(v: EpsilonValue) -> str:
    body = ",".join(f"{e}={_fmt_rational(c)}" for e, c in sorted(v.z.coeffs.items()))
    return f"level:{v.z.level};q:{v.p};half:{v.half};coeffs:[{body}]"


_SER_RE = re.compile(
    r"^level:(\d+);(?:q:(\d+);half:(\d+);)?coeffs:\[([^\]]*)\]$"
)


def parse_serialized(s: str):
    """Inverse of the serializers; returns CyclotomicNumber or EpsilonValue."""
    m = _SER_RE.match(s.strip())
    if not m:
        raise ConfigError(f"unparseable serialized value: {s!r}")
    level = int(m.group(1))
    coeffs: Dict[int, Rational] = {}
    if m.group(4):
        for part in m.group(4).split(","):
            e, _, c = part.partition("=")
            coeffs[int(e)] = Fraction(c)
    z = CyclotomicNumber(level, coeffs)
    if m.group(2) is None:
        return z
    return EpsilonValue(z, int(m.group(2)), int(m.group(3)))


# -- root-of-unity expression grammar ---------------------------------

_FACTOR_RE = re.compile(r"^(-)?(1|i|zeta\((\d+)\)(?:\^(-?\d+))?)$")


def parse_root(expr: str) -> RootOfUnity:
    """Parse expressions like "1", "-1", "i", "zeta(8)^3", "-zeta(5)*i"."""
    out = RootOfUnity.one()
    for raw in expr.replace(" ", "").split("*"):
        m = _FACTOR_RE.match(raw)
        if not m:
            raise ConfigError(f"bad root-of-unity factor {raw!r} in {expr!r}")
        neg, body = m.group(1), m.group(2)
        if body == "1":
            r = RootOfUnity.one()
        elif body == "i":
            r = RootOfUnity.zeta(4)
        else:
            n = int(m.group(3))
            if n < 1:
                raise ConfigError(f"zeta({n}) is not a root of unity")
            k = int(m.group(4)) if m.group(4) is not None else 1
            r = RootOfUnity.zeta(n, k)
        if neg:
            r = r * RootOfUnity.zeta(2)
        out = out * r
    return out
