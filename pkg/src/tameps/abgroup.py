"""Smith normal form over Z and character duals of finite quotients.

A finite abelian group is handed to us as Z^k modulo the row span of an
integer relation matrix M.  Putting M into Smith normal form U M V = D
turns the quotient into a direct sum of cyclic groups Z/d_i, and the
characters of the quotient are exactly

    x  ->  exp(2 pi i <y, x>),    y = V (t_1/d_1, ..., t_k/d_k),

with 0 <= t_i < d_i.  Everything is exact: entries are Python ints, the
character vectors are Fractions, and both transformation matrices are
verified unimodular before anything is returned.
"""

from fractions import Fraction
from itertools import product as _iproduct
from typing import List, Sequence, Tuple

from .errors import ConfigError, ContractError

Matrix = List[List[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    n, mid, m = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(mid):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def integer_det(A: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for t in range(n - 1):
        if M[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if M[i][t]), None)
            if swap is None:
                return 0
            M[t], M[swap] = M[swap], M[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                M[i][j] = (M[i][j] * M[t][t] - M[i][t] * M[t][j]) // prev
            M[i][t] = 0
        prev = M[t][t]
    return sign * M[n - 1][n - 1]


def smith_normal_form(rows: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """(D, U, V) with U M V = D diagonal, d_1 | d_2 | ..., U and V unimodular."""
    r = len(rows)
    if r == 0:
        raise ConfigError("empty relation matrix")
    k = len(rows[0])
    if any(len(row) != k for row in rows):
        raise ConfigError("ragged relation matrix")
    M = [list(row) for row in rows]
    U = _identity(r)
    V = _identity(k)

    def row_op(i, j, c):          # row_i -= c * row_j, mirrored in U
        for t in range(k):
            M[i][t] -= c * M[j][t]
        for t in range(r):
            U[i][t] -= c * U[j][t]

    def col_op(i, j, c):          # col_i -= c * col_j, mirrored in V
        for t in range(r):
            M[t][i] -= c * M[t][j]
        for t in range(k):
            V[t][i] -= c * V[t][j]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for t in range(r):
            M[t][i], M[t][j] = M[t][j], M[t][i]
        for t in range(k):
            V[t][i], V[t][j] = V[t][j], V[t][i]

    t = 0
    while t < min(r, k):
        # locate a smallest nonzero entry in the trailing block
        pivot = None
        best = None
        for i in range(t, r):
            for j in range(t, k):
                v = abs(M[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        dirty = False
        for i in range(t + 1, r):
            q, rem = divmod(M[i][t], M[t][t])
            if q:
                row_op(i, t, q)
            if rem:
                dirty = True
        for j in range(t + 1, k):
            q, rem = divmod(M[t][j], M[t][t])
            if q:
                col_op(j, t, q)
            if rem:
                dirty = True
        if dirty:
            continue
        # enforce the divisibility chain before moving on
        stuck = False
        for i in range(t + 1, r):
            for j in range(t + 1, k):
                if M[i][j] % M[t][t]:
                    row_op(t, i, -1)
                    stuck = True
                    break
            if stuck:
                break
        if stuck:
            continue
        if M[t][t] < 0:
            for j in range(k):
                M[t][j] = -M[t][j]
            for j in range(r):
                U[t][j] = -U[t][j]
        t += 1

    if abs(integer_det(U)) != 1 or abs(integer_det(V)) != 1:
        raise ContractError("transformation matrices drifted off GL_n(Z)")
    check = _mat_mul(_mat_mul(U, [list(row) for row in rows]), V)
    if check != M:
        raise ContractError("normal form does not reconstruct U M V")
    for i in range(min(r, k) - 1):
        if M[i][i] and M[i + 1][i + 1] % M[i][i]:
            raise ContractError("divisibility chain broken in normal form")
    return M, U, V


def dual_vectors(rows: Sequence[Sequence[int]], k: int) -> Tuple[int, List[Tuple[Fraction, ...]]]:
    """All characters of Z^k / <rows> as exponent vectors y, plus the order.

    Each y is a k-tuple of Fractions in [0,1) and stands for the character
    x -> exp(2 pi i <y,x>).  Raises ConfigError if the quotient is infinite.
    The enumeration order is a fixed mixed-radix sweep, so callers get a
    deterministic listing.
    """
    D, _U, V = smith_normal_form(rows)
    r = len(rows)
    d = [D[i][i] if i < r else 0 for i in range(k)]
    if any(di == 0 for di in d):
        raise ConfigError("relation matrix has deficient rank: infinite quotient")
    order = 1
    for di in d:
        order *= di
    out: List[Tuple[Fraction, ...]] = []
    for ts in _iproduct(*[range(di) for di in d]):
        w = [Fraction(t, di) for t, di in zip(ts, d)]
        y = tuple(
            sum(Fraction(V[i][j]) * w[j] for j in range(k)) % 1
            for i in range(k)
        )
        for row in rows:
            pairing = sum(Fraction(row[j]) * y[j] for j in range(k))
            if pairing.denominator != 1:
                raise ContractError("dual vector fails to kill a relation row")
        out.append(y)
    if len(set(out)) != order:
        raise ContractError("dual enumeration produced a collision")
    return order, out
