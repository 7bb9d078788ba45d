"""Finite fields F_q, q = p^f odd, with dense discrete-log tables.

Construction is deterministic: the modulus is the lexicographically smallest
monic irreducible of degree f over F_p (coefficients compared from the
constant term up), and the distinguished generator g is the first
multiplicative generator in the same coefficient order.  A full dlog table
g^k -> k is materialized at construction, which is what bounds q: fields
beyond 2^20 elements are refused.

Subfield structure goes through explicit embeddings.  The image of a
subfield generator is the smallest-dlog root of its minimal polynomial in
the big field, which is a genuine ring embedding (a bare dlog-exponent
transport generally is not) and restricts to the identity on the prime
field.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import ConfigError, ContractError

MAX_Q = 1 << 20


def _poly_trim(a: Tuple[int, ...]) -> Tuple[int, ...]:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mulmod(a, b, mod, p):
    # mod is monic of degree f; a, b have degree < f
    f = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for d in range(len(res) - 1, f - 1, -1):
        c = res[d]
        if c:
            res[d] = 0
            for k in range(f):
                res[d - f + k] = (res[d - f + k] - c * mod[k]) % p
    return _poly_trim(tuple(res[:f] + [0] * (f - len(res))) if len(res) < f else tuple(res[:f]))


def _poly_powmod(a, e, mod, p):
    result = (1,)
    base = _poly_trim(tuple(a))
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        # a mod b
        a = list(a)
        db, lead = len(b) - 1, b[-1]
        inv = pow(lead, -1, p)
        while len(a) - 1 >= db and _poly_trim(tuple(a)):
            da = len(_poly_trim(tuple(a))) - 1
            if da < db:
                break
            coef = a[da] * inv % p
            for k in range(db + 1):
                a[da - db + k] = (a[da - db + k] - coef * b[k]) % p
        a, b = b, _poly_trim(tuple(a))
    return a


def _is_irreducible(poly: Tuple[int, ...], p: int) -> bool:
    # poly monic of degree f; irreducible iff x^(p^f) = x mod poly and
    # gcd(x^(p^(f/l)) - x, poly) = 1 for every prime l | f
    f = len(poly) - 1
    if f == 1:
        return True
    x = (0, 1)
    xq = _poly_powmod(x, p ** f, poly, p)
    if _poly_trim(xq) != _poly_trim(x):
        return False
    ell = 2
    ff = f
    seen = set()
    while ff > 1:
        while ff % ell:
            ell += 1
        if ell not in seen:
            seen.add(ell)
            xe = _poly_powmod(x, p ** (f // ell), poly, p)
            diff = list(xe) + [0] * max(0, 2 - len(xe))
            diff = [(c - (1 if i == 1 else 0)) % p for i, c in enumerate(diff)]
            g = _poly_gcd(tuple(diff), poly, p)
            if len(g) - 1 != 0:
                return False
        ff //= ell
    return True


class FqElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: "Fq", coeffs: Tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "FqElem") -> "FqElem":
        f = self.field
        return FqElem(f, tuple((a + b) % f.p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FqElem") -> "FqElem":
        f = self.field
        return FqElem(f, tuple((a - b) % f.p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FqElem":
        f = self.field
        return FqElem(f, tuple(-a % f.p for a in self.coeffs))

    def __mul__(self, other) -> "FqElem":
        f = self.field
        if isinstance(other, int):
            return FqElem(f, tuple(a * other % f.p for a in self.coeffs))
        prod = _poly_mulmod(self.coeffs, other.coeffs, f.modulus, f.p)
        return FqElem(f, tuple(prod) + (0,) * (f.f - len(prod)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int) -> "FqElem":
        f = self.field
        if self.is_zero():
            if e <= 0:
                raise ZeroDivisionError("0 to a nonpositive power")
            return self
        e %= f.q - 1
        return f.gpow(f.dlog(self) * e % (f.q - 1)) if e else f.one

    def inverse(self) -> "FqElem":
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return f.gpow((f.q - 1 - f.dlog(self)) % (f.q - 1))

    def frobenius(self, times: int = 1) -> "FqElem":
        return self ** (self.field.p ** times)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return f"FqElem(F_{self.field.q}, {self.coeffs})"


class Fq:
    """F_{p^f} with fixed modulus, generator, and dlog table."""

    def __init__(self, p: int, f: int):
        if p < 3 or not _is_prime(p):
            raise ConfigError(f"residue characteristic must be an odd prime, got {p}")
        if f < 1:
            raise ConfigError("field degree must be positive")
        q = p ** f
        if q > MAX_Q:
            raise ConfigError(f"residue field size {q} exceeds the table bound {MAX_Q}")
        self.p, self.f, self.q = p, f, q
        self.modulus = self._find_modulus()
        self.zero = FqElem(self, (0,) * f)
        self.one = FqElem(self, (1,) + (0,) * (f - 1))
        self._powers: List[FqElem] = []
        self._dlog: Dict[Tuple[int, ...], int] = {}
        self.g = self._find_generator()
        self._trace_vec = self._build_trace_vec()

    # deterministic construction ---------------------------------------

    def _find_modulus(self) -> Tuple[int, ...]:
        # candidates ordered by integer value sum(c_i p^i): constant digit fastest
        for tail in itertools.product(range(self.p), repeat=self.f):
            poly = tuple(reversed(tail)) + (1,)
            if poly[0] == 0 and self.f > 1:
                continue  # divisible by x
            if _is_irreducible(poly, self.p):
                return poly
        raise ContractError("no irreducible polynomial found")

    def _find_generator(self) -> FqElem:
        order = self.q - 1
        prime_divs = _prime_divisors(order)
        for tail in itertools.product(range(self.p), repeat=self.f):
            cand = FqElem(self, tuple(reversed(tail)))
            if cand.is_zero():
                continue
            if all(not self._pow_raw(cand, order // ell) == self.one for ell in prime_divs):
                self._build_dlog(cand)
                return cand
        raise ContractError("no multiplicative generator found")

    def _pow_raw(self, a: FqElem, e: int) -> FqElem:
        prod = _poly_powmod(a.coeffs, e, self.modulus, self.p)
        return FqElem(self, tuple(prod) + (0,) * (self.f - len(prod)))

    def _build_dlog(self, g: FqElem):
        # images of basis monomials under multiplication by g
        gx = []
        for j in range(self.f):
            prod = _poly_mulmod(g.coeffs, tuple([0] * j + [1]), self.modulus, self.p)
            gx.append(tuple(prod) + (0,) * (self.f - len(prod)))
        cur = self.one.coeffs
        powers, dlog = [], {}
        for k in range(self.q - 1):
            powers.append(FqElem(self, cur))
            dlog[cur] = k
            nxt = [0] * self.f
            for j, cj in enumerate(cur):
                if cj:
                    row = gx[j]
                    for i in range(self.f):
                        nxt[i] += cj * row[i]
            cur = tuple(c % self.p for c in nxt)
        if cur != self.one.coeffs:
            raise ContractError("generator power enumeration did not close")
        self._powers, self._dlog = powers, dlog

    def _build_trace_vec(self) -> Tuple[int, ...]:
        vec = []
        for j in range(self.f):
            b = FqElem(self, tuple([0] * j + [1] + [0] * (self.f - 1 - j)))
            t = self.zero
            for i in range(self.f):
                t = t + self._pow_raw(b, self.p ** i)
            if any(t.coeffs[1:]):
                raise ContractError("absolute trace left the prime field")
            vec.append(t.coeffs[0])
        return tuple(vec)

    # accessors --------------------------------------------------------

    def elem(self, coeffs) -> FqElem:
        t = tuple(c % self.p for c in coeffs)
        if len(t) != self.f:
            raise ConfigError(f"need {self.f} coefficients for F_{self.q}")
        return FqElem(self, t)

    def from_int(self, n: int) -> FqElem:
        return FqElem(self, (n % self.p,) + (0,) * (self.f - 1))

    def dlog(self, a: FqElem) -> int:
        if a.is_zero():
            raise ZeroDivisionError("dlog of zero")
        return self._dlog[a.coeffs]

    def gpow(self, k: int) -> FqElem:
        return self._powers[k % (self.q - 1)]

    def tr_abs(self, a: FqElem) -> int:
        """Absolute trace to F_p as an integer in [0, p)."""
        return sum(c * t for c, t in zip(a.coeffs, self._trace_vec)) % self.p

    def elements(self) -> Iterator[FqElem]:
        for tail in itertools.product(range(self.p), repeat=self.f):
            yield FqElem(self, tuple(reversed(tail)))

    def nonzero_elements(self) -> Iterator[FqElem]:
        return iter(self._powers)

    def __repr__(self):
        return f"Fq({self.p},{self.f})"


_FQ_CACHE: Dict[Tuple[int, int], Fq] = {}


def fq_make(p: int, f: int) -> Fq:
    key = (p, f)
    field = _FQ_CACHE.get(key)
    if field is None:
        field = _FQ_CACHE[key] = Fq(p, f)
    return field


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_divisors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- subfield embeddings ----------------------------------------------

_EMBED_CACHE: Dict[Tuple[int, int, int], "FqEmbedding"] = {}


class FqEmbedding:
    """The canonical field embedding F_{p^d} -> F_{p^f} for d | f."""

    def __init__(self, small: Fq, big: Fq):
        if small.p != big.p or big.f % small.f:
            raise ConfigError(
                f"no embedding F_{small.q} -> F_{big.q}: degrees must divide"
            )
        self.small, self.big = small, big
        self.t = (big.q - 1) // (small.q - 1)
        self._image_of_g = self._locate_generator_image()
        self._gamma_dlog = big.dlog(self._image_of_g)

    def _locate_generator_image(self) -> FqElem:
        small, big = self.small, self.big
        # minimal polynomial of small.g over F_p, computed in the small field
        minpoly = [small.one]
        orbit = {small.g.coeffs}
        a = small.g
        for _ in range(small.f):
            # multiply minpoly by (y - a)
            nxt = [small.zero] * (len(minpoly) + 1)
            for i, c in enumerate(minpoly):
                nxt[i + 1] = nxt[i + 1] + c
                nxt[i] = nxt[i] - c * a
            minpoly = nxt
            a = a.frobenius()
            if a.coeffs in orbit:
                break
            orbit.add(a.coeffs)
        coeffs_fp = []
        for c in minpoly:
            if any(c.coeffs[1:]):
                raise ContractError("minimal polynomial left the prime field")
            coeffs_fp.append(c.coeffs[0])
        # roots live in the unique subfield of size small.q: scan it
        best: Optional[FqElem] = None
        best_dlog = None
        for k in range(small.q - 1):
            cand = big.gpow(self.t * k)
            acc = big.zero
            for c in reversed(coeffs_fp):
                acc = acc * cand + big.from_int(c)
            if acc.is_zero():
                dl = big.dlog(cand)
                if best is None or dl < best_dlog:
                    best, best_dlog = cand, dl
        if best is None:
            raise ContractError("generator minimal polynomial has no root in the subfield")
        return best

    def apply(self, a: FqElem) -> FqElem:
        if a.field is not self.small:
            raise ConfigError("element is not in the embedding's source field")
        if a.is_zero():
            return self.big.zero
        return self.big.gpow(self._gamma_dlog * self.small.dlog(a) % (self.big.q - 1))

    def pullback(self, r: FqElem) -> FqElem:
        """Inverse on the image; errors if r is not in the subfield's image."""
        if r.field is not self.big:
            raise ConfigError("element is not in the embedding's target field")
        if r.is_zero():
            return self.small.zero
        k = self.big.dlog(r)
        if k % self.t:
            raise ContractError(f"element not in the F_{self.small.q} image")
        s = self._gamma_dlog // self.t  # gamma = g_big^(t*s), gcd(s, q_small-1) = 1
        j = (k // self.t) * pow(s, -1, self.small.q - 1) % (self.small.q - 1)
        return self.small.gpow(j)


def fq_embedding(small: Fq, big: Fq) -> FqEmbedding:
    key = (small.p, small.f, big.f)
    emb = _EMBED_CACHE.get(key)
    if emb is None:
        emb = _EMBED_CACHE[key] = FqEmbedding(small, big)
    return emb


def fq_embed(a: FqElem, into: Fq) -> FqElem:
    return fq_embedding(a.field, into).apply(a)


def fq_trace_norm(a: FqElem, subfield_degree: int) -> Tuple[FqElem, FqElem]:
    """Relative trace and norm to F_{p^d}, tagged as subfield elements."""
    field = a.field
    if field.f % subfield_degree:
        raise ConfigError("subfield degree must divide the field degree")
    d = subfield_degree
    steps = field.f // d
    tr, nm = field.zero, field.one
    b = a
    for _ in range(steps):
        tr = tr + b
        nm = nm * b
        b = b.frobenius(d)
    sub = fq_make(field.p, d)
    emb = fq_embedding(sub, field)
    return emb.pullback(tr), emb.pullback(nm)
