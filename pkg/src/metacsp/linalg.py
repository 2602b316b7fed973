"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding ``int`` or ``Fraction`` entries.
Nothing here touches floating point. Sizes are expected to be small (a
handful of rows) while entries may grow to hundreds of digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Number = "int | Fraction"
Vector = tuple
Matrix = tuple


def _norm(x):
    """Collapse integral fractions to ``int`` so hashing and printing stay tidy."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def vec(entries: Iterable) -> Vector:
    return tuple(_norm(Fraction(e)) if not isinstance(e, int) else e for e in entries)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Matrix:
    return tuple((0,) * n for _ in range(m))


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = tuple(zip(*B))
    return tuple(tuple(_norm(sum(a * b for a, b in zip(row, col))) for col in Bt) for row in A)


def matvec(A: Matrix, v: Vector) -> Vector:
    return tuple(_norm(sum(a * x for a, x in zip(row, v))) for row in A)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(_norm(a + b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(_norm(a - b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, A: Matrix) -> Matrix:
    return tuple(tuple(_norm(c * a) for a in row) for row in A)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(_norm(a + b) for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(_norm(a - b) for a, b in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    return tuple(_norm(c * a) for a in v)


def is_integral(obj) -> bool:
    """True when every entry of a vector or matrix is an integer."""
    if isinstance(obj, (int, Fraction)):
        return isinstance(obj, int) or obj.denominator == 1
    return all(is_integral(x) for x in obj)


def denominator_lcm(obj) -> int:
    if isinstance(obj, int):
        return 1
    if isinstance(obj, Fraction):
        return obj.denominator
    m = 1
    for x in obj:
        m = math.lcm(m, denominator_lcm(x))
    return m


def max_abs(A) -> "int | Fraction":
    if isinstance(A, (int, Fraction)):
        return abs(A)
    return max((max_abs(x) for x in A), default=0)


def mat_pow(M: Matrix, e: int) -> Matrix:
    """``M**e`` by binary exponentiation; ``e == 0`` gives the identity."""
    if e < 0:
        raise ValueError("negative exponent; invert first")
    result = identity(len(M))
    base = M
    while e:
        if e & 1:
            result = matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return result


def mat_inv(A: Matrix) -> Matrix:
    """Inverse over the rationals (Gauss-Jordan). Raises ``ZeroDivisionError`` if singular."""
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(_norm(x) for x in row[n:]) for row in aug)


def det(A: Matrix):
    """Determinant by fraction-free (Bareiss) elimination for integer input."""
    n = len(A)
    if n == 0:
        return 1
    if not is_integral(A):
        c = denominator_lcm(A)
        return _norm(Fraction(det(mat_scale(c, A)), c ** n))
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A: Matrix) -> int:
    if not A:
        return 0
    c = denominator_lcm(A)
    return _echelon([list(r) for r in mat_scale(c, A)])[2]


def commutes(A: Matrix, B: Matrix) -> bool:
    return matmul(A, B) == matmul(B, A)


def submatrix(A: Matrix, rows: range, cols: range) -> Matrix:
    return tuple(tuple(A[i][j] for j in cols) for i in rows)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``D == Q @ N @ P`` with ``D = diag(k_1..k_r, 0..0)`` and ``P``, ``Q`` unimodular."""

    D: Matrix
    P: Matrix
    Q: Matrix
    rank: int

    @property
    def invariants(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(self.rank))


def snf(N: Matrix) -> SnfResult:
    """Smith normal form with transforms.

    Classical elimination: the pivot is always the nonzero entry of least
    absolute value in the active block, rows and columns are cleared by
    rounded division, and a row is folded into the pivot row whenever an
    entry of the remaining block is not divisible by the pivot.
    """
    if not is_integral(N):
        raise ValueError("snf needs an integer matrix")
    m, n = shape(N)
    A = [list(row) for row in N]
    Q = [list(row) for row in identity(m)]
    P = [list(row) for row in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        Q[i], Q[j] = Q[j], Q[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        Q[dst] = [a + f * b for a, b in zip(Q[dst], Q[src])]

    def add_col(dst, src, f):
        for row in A:
            row[dst] += f * row[src]
        for row in P:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -_round_div(A[i][t], p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -_round_div(A[t][j], p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if abs(A[i][j]) < abs(p):
                    if i != t:
                        swap_rows(t, i)
                    else:
                        swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            Q[t] = [-a for a in Q[t]]
        t += 1
    return SnfResult(D=mat(A), P=mat(P), Q=mat(Q), rank=t)


def _round_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ceil_root_power(base: int, num: int, den: int, factor: int = 1) -> int:
    """``ceil(factor * base**(num/den))`` exactly, for ``den`` in ``{1, 2}``."""
    if den == 1:
        return factor * base ** num
    if num % 2 == 0:
        return factor * base ** (num // 2)
    return _ceil_sqrt(factor * factor * base ** num)


def invariant_factor_bound(N: Matrix) -> int:
    """``ceil(r**(r/2) * a**r)`` with ``r`` the rank and ``a`` the largest |entry|.

    Bounds the product of the invariant factors via Hadamard's inequality on
    any nonsingular ``r x r`` minor.
    """
    r = rank(N)
    a = max_abs(N)
    return ceil_root_power(r, r, 2, a ** r)


def hadamard_s_bound(N: Matrix) -> int:
    """``ceil(sqrt(s) * a**s)``, the square-size form of the bound (not always valid)."""
    s = len(N)
    return ceil_root_power(s, 1, 2, max_abs(N) ** s)


# ---------------------------------------------------------------------------
# Hermite normal form and lattices


def _echelon(A: list[list[int]], track: bool = False):
    """Integer row echelon form in place; returns (H, U, rank) with ``U @ A0 == H``.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    row = 0
    for col in range(n):
        if row == m:
            break
        while True:
            nz = [i for i in range(row, m) if A[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[row], A[piv] = A[piv], A[row]
            if track:
                U[row], U[piv] = U[piv], U[row]
            p = A[row][col]
            done = True
            for i in range(row + 1, m):
                if A[i][col]:
                    f = A[i][col] // p
                    A[i] = [a - f * b for a, b in zip(A[i], A[row])]
                    if track:
                        U[i] = [a - f * b for a, b in zip(U[i], U[row])]
                    done = done and A[i][col] == 0
            if done:
                break
        if not A[row][col]:
            continue
        if A[row][col] < 0:
            A[row] = [-a for a in A[row]]
            if track:
                U[row] = [-a for a in U[row]]
        p = A[row][col]
        for i in range(row):
            f = A[i][col] // p
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
                if track:
                    U[i] = [a - f * b for a, b in zip(U[i], U[row])]
        row += 1
    return A, U, row


def hnf(A: Matrix) -> Matrix:
    """Hermite normal form of the row lattice of an integer matrix.

    Rows of the result are the nonzero rows of the echelon form: pivots
    strictly move right, are positive, and every entry in a pivot's column
    above it is reduced into ``[0, pivot)``. Read with basis vectors as
    columns this is the lower-triangular convention. Equal row lattices give
    identical output.
    """
    if not is_integral(A):
        raise ValueError("hnf needs an integer matrix")
    if not A:
        return ()
    H, _, r = _echelon([list(row) for row in A])
    return mat(H[:r])


def integer_left_kernel(A: Matrix) -> Matrix:
    """Basis (rows) of ``{x in Z^m : x @ A == 0}`` for integer ``A``."""
    m = len(A)
    if m == 0:
        return ()
    c = denominator_lcm(A)
    _, U, r = _echelon([list(row) for row in mat_scale(c, A)], track=True)
    return mat(U[r:])


class Lattice:
    """A finitely generated subgroup of ``Q^dim`` held by its canonical basis.

    The basis is ``HNF(c * generators) / c`` for ``c`` the common
    denominator; scaling commutes with the normal form, so equal lattices
    always carry equal bases.
    """

    __slots__ = ("dim", "basis", "_pivots")

    def __init__(self, dim: int, generators: Iterable[Sequence] = ()):
        gens = [vec(g) for g in generators]
        for g in gens:
            if len(g) != dim:
                raise ValueError(f"generator {g} is not in dimension {dim}")
        self.dim = dim
        if not gens:
            self.basis = ()
        else:
            c = denominator_lcm(gens)
            H = hnf(mat_scale(c, gens))
            self.basis = tuple(vec_scale(Fraction(1, c), h) for h in H)
        self._pivots = tuple(next(j for j, x in enumerate(h) if x) for h in self.basis)

    @classmethod
    def from_columns(cls, A: Matrix) -> "Lattice":
        return cls(len(A), transpose(A) if A else ())

    @classmethod
    def standard(cls, dim: int, scale=1) -> "Lattice":
        """``scale * Z^dim``."""
        return cls(dim, [vec_scale(scale, e) for e in identity(dim)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence):
        """Rational coefficients of ``v`` in the basis, or ``None`` outside the span."""
        r = list(vec(v))
        coeffs = []
        for h, p in zip(self.basis, self._pivots):
            if any(r[j] for j in range(p)):
                return None
            c = Fraction(r[p]) / h[p]
            coeffs.append(_norm(c))
            if c:
                r = [a - c * b for a, b in zip(r, h)]
        if any(r):
            return None
        return tuple(coeffs)

    def __contains__(self, v) -> bool:
        c = self.coordinates(v)
        return c is not None and is_integral(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, self.basis))

    def __le__(self, other: "Lattice") -> bool:
        return all(b in other for b in self.basis)

    def __repr__(self):
        return f"Lattice(dim={self.dim}, basis={self.basis})"


def lattice_equal(L1: Lattice, L2: Lattice) -> bool:
    return L1 == L2


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Intersection via the integer kernel of the stacked bases."""
    if L1.dim != L2.dim:
        raise ValueError("ambient dimensions differ")
    if not L1.basis or not L2.basis:
        return Lattice(L1.dim)
    k1 = len(L1.basis)
    K = integer_left_kernel(L1.basis + L2.basis)
    gens = [tuple(sum(x[i] * L1.basis[i][j] for i in range(k1)) for j in range(L1.dim))
            for x in K]
    return Lattice(L1.dim, gens)


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    return Lattice(L1.dim, L1.basis + L2.basis)


def lattice_index(L_sub: Lattice, L_sup: Lattice):
    """``[L_sup : L_sub]``; ``math.inf`` when ``L_sub`` has smaller rank."""
    coords = []
    for b in L_sub.basis:
        c = L_sup.coordinates(b)
        if c is None or not is_integral(c):
            raise ValueError("first lattice is not contained in the second")
        coords.append(c)
    if L_sub.rank < L_sup.rank:
        return math.inf
    return abs(det(tuple(coords)))
