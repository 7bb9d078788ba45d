"""Truncated arithmetic in tame local fields presented as Eisenstein towers.

A Ring models O_E/(pi^N) for a tame extension E/Q_p in normalized form:
E = U(pi) with U/Q_p unramified of degree f and pi^e = [u] p, where u is a
unit of the residue field k = F_{p^f} and [.] is the Teichmuller lift.
Requiring gcd(e, p) = 1 makes this presentation reach every tame E.

Elements are e x f integer matrices: row i holds the U-coordinates of the
pi^i digit, an integer vector mod p^m in the power basis of the monic lift
of k's modulus.  The term pi^i A_i has valuation i + e*v_p(A_i), and
distinct rows contribute valuations in distinct classes mod e, so the
minimum over rows is the exact valuation: no cross-row cancellation is
possible.  That one fact is what makes truncated valuations trustworthy.

Traces to Q_p collapse: Tr_{E/U}(pi^i) vanishes for 0 < i < e, so the
absolute trace only sees row 0 through precomputed power sums of the
modulus.  Norms go through two explicit steps, a division-free Berkowitz
determinant over U for the ramified part and a change-of-basis matrix over
the target subfield for the unramified part.  Berkowitz is used because
O_U/p^m has zero divisors, so Gaussian elimination is not available.

Every element carries the p-digit count m its rows are known to.  Additions
and multiplications keep min(m); dividing by pi costs one digit.  Consumers
that need more digits than an element has must raise PrecisionError, never
guess.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConfigError, ContractError, PrecisionError
from .residue import Fq, FqElem, fq_make, fq_embed, fq_embedding


# -- unramified coordinate arithmetic (tuples of f ints) ---------------

def _umul(a: Sequence[int], b: Sequence[int], ml: Sequence[int], f: int, mod: int):
    if f == 1:
        return (a[0] * b[0] % mod,)
    res = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] += ai * bj
    for d in range(2 * f - 2, f - 1, -1):
        c = res[d] % mod
        if c:
            res[d] = 0
            for k in range(f):
                if ml[k]:
                    res[d - f + k] -= c * ml[k]
    return tuple(v % mod for v in res[:f])


def _upow(a, n: int, ml, f: int, mod: int):
    result = (1,) + (0,) * (f - 1)
    base = tuple(a)
    while n:
        if n & 1:
            result = _umul(result, base, ml, f, mod)
        base = _umul(base, base, ml, f, mod)
        n >>= 1
    return result


class Ring:
    """O_E/(pi^prec) for E tame over Q_p, normalized as U(pi), pi^e = [u]p."""

    def __init__(self, p: int, f: int, e: int, u: Optional[FqElem] = None,
                 prec: int = 24):
        if e < 1 or f < 1:
            raise ConfigError("ramification and residue degrees must be positive")
        if math.gcd(e, p) != 1:
            raise ConfigError(f"wild ramification rejected: p={p} divides e={e}")
        self.p, self.f, self.e = p, f, e
        self.k = fq_make(p, f)
        self.q = self.k.q
        if u is None:
            u = self.k.one
        if u.field is not self.k or u.is_zero():
            raise ConfigError("Eisenstein unit must be a nonzero residue element")
        if e == 1 and u != self.k.one:
            raise ConfigError("unramified rings are normalized to pi = p")
        self.u = u
        if prec < 2 * e:
            raise ConfigError("working precision below two uniformizer digits")
        self.prec = prec                       # pi-adic digits guaranteed
        self.M = (prec + e - 1) // e + 1       # p-adic digits stored per row
        self.pM = p ** self.M
        self.mlift = tuple(self.k.modulus[:f])  # monic lift, low coeffs only
        self.different_exponent = e - 1         # tame: d(E/Q_p) = e - 1
        self._teich_cache: Dict[Tuple[int, ...], "RElem"] = {}
        self._one_plus_cache: Dict[Tuple[int, Tuple[int, ...]], "RElem"] = {}
        self._pi_pows: List["RElem"] = []
        self.zero = self._make([(0,) * f] * e, self.M)
        self.one = self._make([(1,) + (0,) * (f - 1)] + [(0,) * f] * (e - 1), self.M)
        self._trace_sums = self._newton_power_sums()
        self.teich_u = self.teich(u)
        self.teich_u_inv = self.teich(u.inverse())

    def _make(self, rows, m: int) -> "RElem":
        return RElem(self, tuple(tuple(r) for r in rows), m)

    def _newton_power_sums(self) -> Tuple[int, ...]:
        # power sums of the modulus roots: s_j = Tr_{U/Qp}(omega^j) mod p^M
        f, mod = self.f, self.pM
        a = [0] * (f + 1)  # a[i] = coeff of x^(f-i)
        for i in range(1, f + 1):
            a[i] = self.mlift[f - i] if f - i < len(self.mlift) else 0
        s = [f % mod] + [0] * (f - 1)
        for kk in range(1, f):
            acc = kk * a[kk]
            for i in range(1, kk):
                acc += a[i] * s[kk - i]
            s[kk] = (-acc) % mod
        return tuple(s)

    # constructors -----------------------------------------------------

    def from_int(self, n: int) -> "RElem":
        rows = [[0] * self.f for _ in range(self.e)]
        rows[0][0] = n % self.pM
        return self._make(rows, self.M)

    def elem(self, rows, m: Optional[int] = None) -> "RElem":
        m = self.M if m is None else m
        mod = self.p ** m
        rr = [tuple(c % mod for c in row) for row in rows]
        if len(rr) != self.e or any(len(r) != self.f for r in rr):
            raise ConfigError("element shape must be e rows of f coordinates")
        return self._make(rr, m)

    @property
    def pi(self) -> "RElem":
        return self.pi_pow(1)

    def pi_pow(self, t: int) -> "RElem":
        if t < 0:
            raise ConfigError("negative uniformizer powers are not ring elements")
        while len(self._pi_pows) <= t:
            if not self._pi_pows:
                self._pi_pows.append(self.one)
            else:
                self._pi_pows.append(self._shift_up(self._pi_pows[-1]))
        return self._pi_pows[t]

    def _shift_up(self, x: "RElem") -> "RElem":
        # multiply by pi: rows move up one slot, top row folds to [u]*p
        e, f = self.e, self.f
        mod = self.p ** x.m
        top = x.rows[e - 1]
        rows = [(0,) * f] + list(x.rows[: e - 1])
        if any(top):
            fold = _umul(top, self.teich_u.rows[0], self.mlift, f, mod)
            rows[0] = tuple((rows[0][j] + self.p * fold[j]) % mod for j in range(f))
        return self._make(rows, x.m)

    def teich(self, xi: FqElem) -> "RElem":
        """Teichmuller lift of a residue element (0 maps to 0)."""
        if xi.field is not self.k:
            raise ConfigError("Teichmuller argument must live in the residue field")
        got = self._teich_cache.get(xi.coeffs)
        if got is None:
            if xi.is_zero():
                got = self.zero
            else:
                f, mod = self.f, self.pM
                cur = tuple(xi.coeffs)
                for _ in range(self.M + 1):
                    cur = _upow(cur, self.q, self.mlift, f, mod)
                if _upow(cur, self.q, self.mlift, f, mod) != cur:
                    raise ContractError("Teichmuller iteration did not stabilize")
                got = self._make([cur] + [(0,) * f] * (self.e - 1), self.M)
            self._teich_cache[xi.coeffs] = got
        return got

    def one_plus_pi_teich(self, i: int, d: FqElem) -> "RElem":
        """The standard principal unit 1 + pi^i [d], cached."""
        if i < 1:
            raise ConfigError("principal units need a positive uniformizer power")
        key = (i, d.coeffs)
        got = self._one_plus_cache.get(key)
        if got is None:
            got = self.one + self.teich(d) * self.pi_pow(i)
            self._one_plus_cache[key] = got
        return got

    def unram_ring(self) -> "Ring":
        return make_ring(self.p, self.f, 1, prec=self.M)

    def __repr__(self):
        return f"Ring(p={self.p},f={self.f},e={self.e},u={self.u.coeffs},prec={self.prec})"


class RElem:
    __slots__ = ("ring", "rows", "m")

    def __init__(self, ring: Ring, rows: Tuple[Tuple[int, ...], ...], m: int):
        self.ring = ring
        self.rows = rows
        self.m = m

    def _coerce(self, other) -> "RElem":
        if isinstance(other, int):
            return self.ring.from_int(other)
        if not isinstance(other, RElem) or other.ring is not self.ring:
            raise ConfigError("mixed-ring arithmetic is not defined")
        return other

    def __add__(self, other) -> "RElem":
        other = self._coerce(other)
        m = min(self.m, other.m)
        mod = self.ring.p ** m
        rows = tuple(
            tuple((a + b) % mod for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        )
        return RElem(self.ring, rows, m)

    def __sub__(self, other) -> "RElem":
        return self.__add__(self._coerce(other).__neg__())

    def __neg__(self) -> "RElem":
        mod = self.ring.p ** self.m
        return RElem(self.ring, tuple(tuple(-a % mod for a in r) for r in self.rows), self.m)

    def __mul__(self, other) -> "RElem":
        other = self._coerce(other)
        R = self.ring
        e, f = R.e, R.f
        m = min(self.m, other.m)
        mod = R.p ** m
        acc = [[0] * f for _ in range(2 * e - 1)] if e > 1 else [[0] * f]
        for i, Ai in enumerate(self.rows):
            if any(Ai):
                for j, Bj in enumerate(other.rows):
                    if any(Bj):
                        prod = _umul(Ai, Bj, R.mlift, f, mod)
                        tgt = acc[i + j]
                        for t in range(f):
                            tgt[t] += prod[t]
        # fold pi^(e+t) = pi^t [u] p

        for s in range(2 * e - 2, e - 1, -1):
            row = tuple(v % mod for v in acc[s])
            if any(row):
                fold = _umul(row, R.teich_u.rows[0], R.mlift, f, mod)
                tgt = acc[s - e]
                for t in range(f):
                    tgt[t] += R.p * fold[t]
        rows = tuple(tuple(v % mod for v in acc[i]) for i in range(e))
        return RElem(R, rows, m)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "RElem":
        base = self if n >= 0 else self.unit_inverse()
        n = abs(n)
        result = self.ring.one
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def valuation(self) -> Optional[int]:
        """Exact pi-adic valuation; None when indistinguishable from zero."""
        R, best = self.ring, None
        for i, row in enumerate(self.rows):
            nz = [c for c in row if c]
            if not nz:
                continue
            vp = min(_int_vp(c, R.p, self.m) for c in nz)
            if vp >= self.m:
                continue
            v = i + R.e * vp
            if best is None or v < best:
                best = v
        avail = R.e * self.m
        if best is not None and best < avail:
            return best
        return None

    def available_prec(self) -> int:
        return self.ring.e * self.m

    def residue(self) -> FqElem:
        R = self.ring
        return R.k.elem(tuple(c % R.p for c in self.rows[0]))

    def is_unit(self) -> bool:
        return not self.residue().is_zero()

    def unit_inverse(self) -> "RElem":
        R = self.ring
        r = self.residue()
        if r.is_zero():
            raise ConfigError("inverse requires a unit")
        y = R.teich(r.inverse())
        steps = max(1, (R.e * self.m).bit_length() + 1)
        two = R.from_int(2)
        for _ in range(steps):
            y = y * (two - self * y)
        if (self * y - R.one).valuation() is not None:
            raise ContractError("unit inverse iteration failed to converge")
        return y

    def __eq__(self, other) -> bool:
        # values compare at the shared precision; hashing is deliberately
        # disabled, dictionary keys must go through truncate_key
        if not isinstance(other, RElem):
            return NotImplemented
        if self.ring is not other.ring:
            return False
        mod = self.ring.p ** min(self.m, other.m)
        return all(
            a % mod == b % mod
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    __hash__ = None

    def __repr__(self):
        return f"RElem({self.rows}, m={self.m})"


def _int_vp(c: int, p: int, cap: int) -> int:
    v = 0
    while v < cap and c % p == 0:
        c //= p
        v += 1
    return v


_RING_CACHE: Dict[Tuple, Ring] = {}


def make_ring(p: int, f: int, e: int, u: Optional[FqElem] = None,
              prec: int = 24) -> Ring:
    key = (p, f, e, None if u is None else u.coeffs, prec)
    ring = _RING_CACHE.get(key)
    if ring is None:
        ring = _RING_CACHE[key] = Ring(p, f, e, u, prec)
    return ring


# -- absolute trace ----------------------------------------------------

def trace_qp(x: RElem) -> Tuple[int, int]:
    """Tr_{E/Q_p}(x) as (integer mod p^m, m).

    Only row 0 contributes: Tr_{E/U}(pi^i) = 0 for 0 < i < e because the
    multiplication matrix of pi^i has an empty diagonal there, and
    Tr_{E/U}(x) = e * A_0.
    """
    R = x.ring
    mod = R.p ** x.m
    t = 0
    for j, c in enumerate(x.rows[0]):
        if c:
            t += c * R._trace_sums[j]
    return (R.e * t) % mod, x.m


# -- Berkowitz determinant over a commutative coefficient ring ---------

def _berkowitz_det(A, zero, one, add, mul, neg):
    n = len(A)
    if n == 0:
        return one
    poly = [one, neg(A[0][0])]
    for r in range(1, n):
        a = A[r][r]
        Rrow = A[r][:r]
        Col = [A[i][r] for i in range(r)]
        t = [one, neg(a)]
        w = Col[:]
        for k in range(r):
            s = zero
            for i in range(r):
                s = add(s, mul(Rrow[i], w[i]))
            t.append(neg(s))
            if k < r - 1:
                w = [
                    _dot_row(A[i][:r], w, zero, add, mul)
                    for i in range(r)
                ]
        new = []
        for i in range(r + 2):
            acc = zero
            lo = max(0, i - (len(t) - 1))
            for j in range(lo, min(i, r) + 1):
                acc = add(acc, mul(t[i - j], poly[j]))
            new.append(acc)
        poly = new
    det = poly[n]
    if n % 2:
        det = neg(det)
    return det


def _dot_row(row, w, zero, add, mul):
    s = zero
    for a, b in zip(row, w):
        s = add(s, mul(a, b))
    return s


# -- norms -------------------------------------------------------------

def norm_to_unramified(x: RElem) -> RElem:
    """Norm along the totally ramified step E -> U as an element of U."""
    R = x.ring
    U = R.unram_ring()
    if R.e == 1:
        return RElem(U, x.rows, x.m)
    mod = R.p ** x.m
    f = R.f
    cols = []
    cur = x
    for _ in range(R.e):
        cols.append(cur.rows)
        cur = R._shift_up(cur)
    A = [[cols[j][i] for j in range(R.e)] for i in range(R.e)]
    zero_u = (0,) * f
    one_u = (1,) + (0,) * (f - 1)
    det = _berkowitz_det(
        A,
        zero_u,
        one_u,
        lambda a, b: tuple((ai + bi) % mod for ai, bi in zip(a, b)),
        lambda a, b: _umul(a, b, R.mlift, f, mod),
        lambda a: tuple(-ai % mod for ai in a),
    )
    return RElem(U, (det,), x.m)


class _UnramStep:
    """Change-of-basis data for the unramified norm F_{p^f} tower step."""

    def __init__(self, p: int, f: int, d: int, M: int):
        if f % d:
            raise ConfigError("unramified norm target degree must divide f")
        self.p, self.f, self.d, self.M = p, f, d, M
        self.mod = p ** M
        big = fq_make(p, f)
        small = fq_make(p, d)
        self.small_ml = tuple(small.modulus[:d])
        self.big_ml = tuple(big.modulus[:f])
        root0 = fq_embedding(small, big).apply(small.elem((0, 1) if d > 1 else (1,)))
        if d == 1:
            # prime field: the embedding is n -> n, no basis work needed
            self.root = (1,) + (0,) * (f - 1)
        else:
            self.root = self._hensel_root(tuple(small.modulus), root0.coeffs)
        self.emb_pows = self._root_powers()
        self.binv = self._basis_inverse()

    def _hensel_root(self, poly_int: Tuple[int, ...], start):
        f, mod, ml = self.f, self.mod, self.big_ml
        r = tuple(start)
        dpoly = tuple(i * c for i, c in enumerate(poly_int))[1:]
        for _ in range(self.M.bit_length() + 2):
            val = _ueval(poly_int, r, ml, f, mod)
            dval = _ueval(dpoly, r, ml, f, mod)
            dinv = _uinv(dval, ml, f, self.p, mod)
            corr = _umul(val, dinv, ml, f, mod)
            r = tuple((a - b) % mod for a, b in zip(r, corr))
        if any(_ueval(poly_int, r, ml, f, mod)):
            raise ContractError("Hensel lift of the subfield generator failed")
        return r

    def _root_powers(self) -> List[Tuple[int, ...]]:
        f, mod, ml = self.f, self.mod, self.big_ml
        out = [(1,) + (0,) * (f - 1)]
        for _ in range(1, self.d):
            out.append(_umul(out[-1], self.root, ml, f, mod))
        return out

    def _basis_inverse(self) -> List[List[int]]:
        # columns indexed (j, k) -> x^j * root^k, j < f/d, k < d
        f, d, mod, ml = self.f, self.d, self.mod, self.big_ml
        cols = []
        for j in range(f // d):
            xj = tuple(0 if t != j else 1 for t in range(f))
            for k in range(d):
                cols.append(_umul(xj, self.emb_pows[k], ml, f, mod))
        B = [[cols[c][r] for c in range(f)] for r in range(f)]
        return _mat_inverse_mod(B, self.p, mod)

    def norm(self, coords: Sequence[int], m: int) -> Tuple[int, ...]:
        f, d, ml = self.f, self.d, self.big_ml
        mod = self.p ** m
        n = f // d
        entries = [[None] * n for _ in range(n)]
        for j in range(n):
            xj = tuple(0 if t != j else 1 for t in range(f))
            w = _umul(tuple(coords), xj, ml, f, mod)
            c = [sum(self.binv[r][t] * w[t] for t in range(f)) % mod for r in range(f)]
            for i in range(n):
                entries[i][j] = tuple(c[i * d + k] for k in range(d))
        zero_s = (0,) * d
        one_s = (1,) + (0,) * (d - 1)
        return _berkowitz_det(
            entries,
            zero_s,
            one_s,
            lambda a, b: tuple((ai + bi) % mod for ai, bi in zip(a, b)),
            lambda a, b: _umul(a, b, self.small_ml, d, mod),
            lambda a: tuple(-ai % mod for ai in a),
        )


def _ueval(poly_int: Sequence[int], at, ml, f: int, mod: int):
    acc = (0,) * f
    for c in reversed(poly_int):
        acc = _umul(acc, at, ml, f, mod)
        acc = ((acc[0] + c) % mod,) + acc[1:]
    return acc


def _uinv(a, ml, f: int, p: int, mod: int):
    k = fq_make(p, f)
    r = k.elem(tuple(c % p for c in a))
    y = tuple(r.inverse().coeffs)
    one = (1,) + (0,) * (f - 1)
    for _ in range(mod.bit_length() + 1):
        ay = _umul(a, y, ml, f, mod)
        corr = tuple((2 * (i == 0) - c) % mod for i, c in enumerate(ay))
        y = _umul(y, corr, ml, f, mod)
    if _umul(a, y, ml, f, mod) != one:
        raise ContractError("coordinate inverse iteration failed")
    return y


def _mat_inverse_mod(B: List[List[int]], p: int, mod: int) -> List[List[int]]:
    n = len(B)
    A = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(B)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if A[r][col] % p:
                piv = r
                break
        if piv is None:
            raise ContractError("basis change matrix is singular mod p")
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, mod)
        A[col] = [v * inv % mod for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                c = A[r][col]
                A[r] = [(vr - c * vc) % mod for vr, vc in zip(A[r], A[col])]
    return [row[n:] for row in A]


_STEP_CACHE: Dict[Tuple[int, int, int, int], _UnramStep] = {}


def _unram_step(p: int, f: int, d: int, M: int) -> _UnramStep:
    key = (p, f, d, M)
    st = _STEP_CACHE.get(key)
    if st is None:
        st = _STEP_CACHE[key] = _UnramStep(p, f, d, M)
    return st


def unramified_norm(x: RElem, target: Ring) -> RElem:
    R = x.ring
    if R.e != 1 or target.e != 1:
        raise ConfigError("unramified norm applies between unramified rings")
    m = min(x.m, target.M)
    mod = target.p ** m
    if R.f == target.f:
        return RElem(target, (tuple(c % mod for c in x.rows[0]),), m)
    st = _unram_step(R.p, R.f, target.f, R.M)
    det = st.norm(x.rows[0], m)
    return RElem(target, (det,), m)


def norm_to(x: RElem, target: Ring) -> RElem:
    """Norm from x's ring to an unramified subring of degree dividing f."""
    if target.e != 1:
        raise ConfigError("norm target must be presented unramified")
    y = norm_to_unramified(x)
    return unramified_norm(y, target)


def embed_unramified(x: RElem, big: Ring) -> RElem:
    """Ring embedding of an unramified element into row 0 of a bigger ring."""
    R = x.ring
    if R.e != 1:
        raise ConfigError("only unramified sources embed this way")
    if big.f % R.f:
        raise ConfigError("no embedding: source degree must divide target degree")
    m = min(x.m, big.M)
    mod = big.p ** m
    if R.f == big.f:
        row0 = tuple(c % mod for c in x.rows[0])
    else:
        st = _unram_step(big.p, big.f, R.f, big.M)
        acc = [0] * big.f
        for k, c in enumerate(x.rows[0]):
            if c:
                for t in range(big.f):
                    acc[t] += c * st.emb_pows[k][t]
        row0 = tuple(v % mod for v in acc)
    rows = (row0,) + ((0,) * big.f,) * (big.e - 1)
    return RElem(big, rows, m)


# -- congruence and truncation helpers ---------------------------------

def congruent(x: RElem, y: RElem, level: int) -> bool:
    d = x - y
    v = d.valuation()
    if v is None:
        if d.available_prec() < level:
            raise PrecisionError(
                f"cannot certify congruence mod pi^{level} at precision {d.available_prec()}"
            )
        return True
    return v >= level


def truncate_key(x: RElem, level: int) -> Tuple:
    """Canonical hashable form of x mod pi^level."""
    R = x.ring
    out = []
    for i, row in enumerate(x.rows):
        need = max(0, -(-(level - i) // R.e))  # ceil((level-i)/e)
        if need > x.m:
            raise PrecisionError(f"row {i} has {x.m} digits, needs {need}")
        out.append(tuple(c % R.p ** need for c in row) if need else (0,) * R.f)
    return (level, tuple(out))


def divide_by_pi(x: RElem, t: int = 1) -> RElem:
    """Exact division by pi^t; costs t stored p-digits."""
    R = x.ring
    cur = x
    for _ in range(t):
        first = cur.rows[0]
        if any(c % R.p for c in first):
            raise ConfigError("element is not divisible by pi")
        m = cur.m - 1
        if m < 1:
            raise PrecisionError("no digits left after dividing by pi")
        mod = R.p ** m
        carried = tuple(c // R.p % mod for c in first)
        if R.e == 1:
            rows = (carried,)
        else:
            top = _umul(carried, R.teich_u_inv.rows[0], R.mlift, R.f, mod)
            rows = tuple(tuple(c % mod for c in r) for r in cur.rows[1:]) + (top,)
        cur = RElem(R, rows, m)
    return cur


# -- unit groups -------------------------------------------------------

UNIT_GROUP_SIZE_BOUND = 300000


def _group_size(ring: Ring, level: int) -> int:
    return (ring.q - 1) * ring.q ** (level - 1)


def principal_unit_reps(ring: Ring, level: int) -> List[RElem]:
    """All of U^1/U^level as 1 + sum pi^i [d_i]: complete and irredundant."""
    out = [ring.one]
    for i in range(1, level):
        pp = ring.pi_pow(i)
        nxt = []
        for base in out:
            for d in ring.k.elements():
                if d.is_zero():
                    nxt.append(base)
                else:
                    nxt.append(base + ring.teich(d) * pp)
        out = nxt
    return out


def unit_reps(ring: Ring, level: int) -> List[RElem]:
    """All of (O/pi^level)^* as [xi] * (principal part)."""
    pu = principal_unit_reps(ring, level)
    out = []
    for k in range(ring.q - 1):
        t = ring.teich(ring.k.gpow(k))
        out.extend(t * y for y in pu)
    return out


def _elem_order_mod(x: RElem, level: int, group_order: int) -> int:
    one_key = truncate_key(x.ring.one, level)

    def powkey(n):
        return truncate_key(x ** n, level)

    order = group_order
    for ell in _prime_list(group_order):
        while order % ell == 0 and powkey(order // ell) == one_key:
            order //= ell
    return order


def _prime_list(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def unit_group(ring: Ring, level: int) -> List[Tuple[RElem, int]]:
    """Independent generators (g, order) of (O/pi^level)^*.

    Unramified rings get the closed-form basis.  Ramified rings fall back
    to a verified greedy search, which handles the extra p-torsion that
    appears when p - 1 divides e, at the price of enumerating the group.
    """
    if level < 1:
        raise ConfigError("unit group level must be at least 1")
    size = _group_size(ring, level)
    gens: List[Tuple[RElem, int]] = [(ring.teich(ring.k.g), ring.q - 1)]
    if ring.e == 1:
        for j in range(ring.f):
            if level >= 2:
                w = ring.elem([[ring.p if t == j else 0 for t in range(ring.f)]])
                gens.append((ring.one + w, ring.p ** (level - 1)))
        check = 1
        for _, o in gens:
            check *= o
        if check != size:
            raise ContractError("closed-form unit basis has the wrong order product")
        if size <= 5000:
            _assert_bijective(ring, level, gens, size)
        return gens
    if size > UNIT_GROUP_SIZE_BOUND:
        raise ConfigError(
            f"unit group of size {size} exceeds the enumeration bound"
        )
    # greedy basis of the principal-unit p-group: always try the highest
    # remaining order; the powers-outside-span test keeps the sum direct,
    # and an element of maximal order in a complement always passes, so
    # the search cannot stall even with extra p-torsion in play
    one_key = truncate_key(ring.one, level)
    span = {one_key: ring.one}
    _extend_span(span, ring.teich(ring.k.g), ring.q - 1, level)
    pu_order = ring.q ** (level - 1)
    candidates = []
    for y in principal_unit_reps(ring, level):
        ky = truncate_key(y, level)
        if ky == one_key:
            continue
        o = _elem_order_mod(y, level, pu_order)
        candidates.append((-o, ky, o, y))
    candidates.sort(key=lambda t: (t[0], t[1]))
    for _, _, o, y in candidates:
        if len(span) == size:
            break
        powers = []
        z = ring.one
        ok = True
        for _ in range(o - 1):
            z = z * y
            if truncate_key(z, level) in span:
                ok = False
                break
            powers.append(z)
        if not ok:
            continue
        gens.append((y, o))
        base = list(span.values())
        for z in powers:
            for s in base:
                w = s * z
                span[truncate_key(w, level)] = w
        expect = 1
        for _, oo in gens:
            expect *= oo
        if len(span) != expect:
            raise ContractError("unit group span lost independence")
    if len(span) != size:
        raise ContractError("unit group generators do not span")
    return gens


def _extend_span(span, g: RElem, order: int, level: int):
    base = list(span.values())
    z = g.ring.one
    for _ in range(order - 1):
        z = z * g
        for s in base:
            w = s * z
            span[truncate_key(w, level)] = w


def _assert_bijective(ring: Ring, level: int, gens, size: int):
    seen = {truncate_key(ring.one, level)}
    elems = [ring.one]
    for g, o in gens:
        cur = list(elems)
        z = ring.one
        for _ in range(o - 1):
            z = z * g
            for s in cur:
                w = s * z
                k = truncate_key(w, level)
                if k in seen:
                    raise ContractError("unit group basis is not independent")
                seen.add(k)
                elems.append(w)
    if len(seen) != size:
        raise ContractError("unit group basis does not enumerate the group")
