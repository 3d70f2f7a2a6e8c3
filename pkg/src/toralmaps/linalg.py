"""Exact linear algebra over Z and Q.

Matrices are lists of rows of Python ints (or ``Fraction`` where noted).
A matrix with zero rows cannot carry its column count, so the functions
that need it take an explicit ``ncols``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch


# -- small helpers ------------------------------------------------------------

def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zero_matrix(m, n):
    return [[0] * n for _ in range(m)]


def mat_mul(A, B, inner=None):
    if inner is None:
        inner = len(B)
    ncols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(ncols)] for i in range(len(A))]


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A, ncols=None):
    if ncols is None:
        ncols = len(A[0]) if A else 0
    return [[A[i][j] for i in range(len(A))] for j in range(ncols)]


def det(A):
    """Exact determinant by fraction-valued elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            result = -result
        result *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return result.numerator if result.denominator == 1 else result


def is_unimodular(A):
    return len(A) == 0 or det(A) in (1, -1)


def mod1(q):
    """Reduce a rational into [0, 1)."""
    if not isinstance(q, Fraction):
        q = Fraction(q)
    n, d = q.numerator, q.denominator
    return q if 0 <= n < d else Fraction(n % d, d)


def reduce_mod1(vec):
    return tuple(mod1(q) for q in vec)


def sparse_rows(M):
    """``M`` as rows of ``(column, coefficient)`` pairs with zeros dropped."""
    return tuple(tuple((j, a) for j, a in enumerate(row) if a) for row in M)


def sparse_mat_vec(rows, v):
    return tuple(
        sum((v[j] if a == 1 else a * v[j] for j, a in row), Fraction(0)) for row in rows
    )


def is_integral(vec):
    return all(Fraction(q).denominator == 1 for q in vec)


# -- Smith normal form --------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U * A * V == D`` with ``U``, ``V`` unimodular.

    ``Uinv`` and ``Vinv`` are carried along because the torus solvers need
    to change coordinates in both directions.
    """

    U: list
    D: list
    V: list
    Uinv: list
    Vinv: list
    shape: tuple

    @property
    def diagonal(self):
        m, n = self.shape
        return [self.D[i][i] for i in range(min(m, n))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self):
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(A, ncols=None):
    """Smith normal form by row and column operations.

    The pivot is always the entry of smallest nonzero absolute value in the
    remaining block.  Divisibility ``d1 | d2 | ...`` is enforced by folding
    an offending row into the pivot row and re-reducing.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    for row in A:
        if len(row) != n:
            raise DimensionMismatch(f"ragged matrix: row of length {len(row)}, expected {n}")
    D = [[int(x) for x in row] for row in A]
    U, Uinv = identity_matrix(m), identity_matrix(m)
    V, Vinv = identity_matrix(n), identity_matrix(n)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_add(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for r in Uinv:
            r[src] -= q * r[dst]

    def col_add(dst, src, q):
        # col_dst += q * col_src
        for r in D:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    def row_neg(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                Di = D[i]
                for j in range(k, n):
                    a = Di[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != k:
                row_swap(i, k)
            if j != k:
                col_swap(j, k)
            p = D[k][k]
            dirty = False
            for i in range(k + 1, m):
                if D[i][k]:
                    row_add(i, k, -(D[i][k] // p))
                    dirty = dirty or D[i][k] != 0
            for j in range(k + 1, n):
                if D[k][j]:
                    col_add(j, k, -(D[k][j] // p))
                    dirty = dirty or D[k][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(k + 1, m) for j in range(k + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            row_add(k, bad, 1)
        if k < m and D[k][k] < 0:
            row_neg(k)
    return SmithDecomposition(U, D, V, Uinv, Vinv, (m, n))


# -- solving, kernels, cokernels ---------------------------------------------

def solve_integer(A, b, ncols=None, snf=None):
    """Some integer ``x`` with ``A x = b``, or ``None`` if none exists.

    A precomputed Smith decomposition of ``A`` may be passed as ``snf``.
    """
    m = len(A)
    if len(b) != m:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, matrix has {m} rows")
    if snf is None:
        snf = smith_normal_form(A, ncols)
    n = snf.shape[1]
    c = mat_vec(snf.U, b)
    y = [0] * n
    diag = snf.diagonal
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    x = mat_vec(snf.V, y)
    assert mat_vec(A, x) == list(b)
    return x


def kernel_lattice(A, ncols=None):
    """A Z-basis of ``{x in Z^n : A x = 0}``, as a list of vectors."""
    snf = smith_normal_form(A, ncols)
    n = snf.shape[1]
    r = snf.rank
    return [[snf.V[i][j] for i in range(n)] for j in range(r, n)]


@dataclass(frozen=True)
class AbelianGroupStructure:
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion factors {self.torsion} do not form a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion factors must be >= 2")

    @property
    def is_finite(self):
        return self.free_rank == 0

    @property
    def order(self):
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " x ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def cokernel_structure(A, nrows=None, ncols=None):
    """Structure of ``Z^rows / A Z^cols``."""
    m = len(A) if nrows is None else nrows
    if len(A) != m:
        raise DimensionMismatch("row count mismatch")
    snf = smith_normal_form(A, ncols)
    return AbelianGroupStructure(m - snf.rank, tuple(d for d in snf.invariant_factors if d > 1))


def rank(A, ncols=None):
    """Exact rank over Q, eliminating on sparse rows."""
    rows = []
    for row in A:
        r = {j: Fraction(x) for j, x in enumerate(row) if x}
        if r:
            rows.append(r)
    rk = 0
    while rows:
        # pivot on the shortest row to limit fill-in
        rows.sort(key=len)
        piv = rows.pop(0)
        j, pv = min(piv.items(), key=lambda kv: (abs(kv[1]) != 1, kv[0]))
        rk += 1
        rest = []
        for r in rows:
            x = r.get(j)
            if x:
                f = x / pv
                for c, y in piv.items():
                    v = r.get(c, 0) - f * y
                    if v:
                        r[c] = v
                    else:
                        r.pop(c, None)
            if r:
                rest.append(r)
        rows = rest
    return rk


def quotient_structure(A, B, ncols_A, ncols_B):
    """Structure of ``ker(A) / im(B)`` for integer matrices with ``A B = 0``.

    ``coker(B)`` splits as ``ker(A)/im(B)`` plus the free group
    ``Z^n / ker(A)``, so the torsion comes from the Smith form of ``B`` and
    the free rank is ``n - rank(B) - rank(A)``.
    """
    n = ncols_A
    if len(B) != n:
        raise DimensionMismatch("B must map into the source of A")
    snf = smith_normal_form(B, ncols_B)
    free = n - snf.rank - rank(A, ncols_A)
    return AbelianGroupStructure(free, tuple(d for d in snf.invariant_factors if d > 1))


# -- torus equations -----------------------------------------------------------

def torus_solve(A, b, ncols=None):
    """Solve ``A x = b (mod Z^m)`` for ``x`` in the torus ``(R/Z)^n``.

    ``A`` is an integer matrix and ``b`` a rational vector.  When a real
    solution exists a rational one does too; the one returned has
    coordinates reduced into [0, 1).  Returns ``None`` if unsolvable.
    """
    m = len(A)
    if len(b) != m:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, matrix has {m} rows")
    snf = smith_normal_form(A, ncols)
    n = snf.shape[1]
    c = mat_vec(snf.U, [Fraction(q) for q in b])
    diag = snf.diagonal
    y = [Fraction(0)] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if Fraction(c[i]).denominator != 1:
                return None
        else:
            y[i] = Fraction(c[i]) / d
    x = reduce_mod1(mat_vec(snf.V, y))
    assert is_integral([r - q for r, q in zip(mat_vec(A, x), b)])
    return x


@dataclass(frozen=True)
class TorusKernel:
    """``{x in (R/Z)^n : A x = 0 mod Z^m}`` in Smith coordinates.

    With ``x = V y`` the condition reads ``d_i y_i in Z`` for the nonzero
    invariant factors and leaves the remaining ``y_i`` free.  The free
    directions span the identity component; the rest is a finite group
    ``prod Z/d_i``.
    """

    snf: SmithDecomposition

    @property
    def dimension(self):
        return self.snf.shape[1] - self.snf.rank

    @property
    def lattice(self):
        n, r = self.snf.shape[1], self.snf.rank
        return [[self.snf.V[i][j] for i in range(n)] for j in range(r, n)]

    @property
    def finite_factors(self):
        """``(index, d)`` for each invariant factor ``d > 1``."""
        return [(i, d) for i, d in enumerate(self.snf.diagonal) if d > 1]

    @property
    def component_count(self):
        out = 1
        for _, d in self.finite_factors:
            out *= d
        return out

    def generator(self, i):
        """Torsion point ``V e_i / d_i``."""
        d = self.snf.diagonal[i]
        return reduce_mod1(Fraction(self.snf.V[r][i], d) for r in range(self.snf.shape[1]))

    def component_representatives(self):
        """One torsion point per connected component, in a fixed order."""
        n = self.snf.shape[1]
        reps = [tuple(Fraction(0) for _ in range(n))]
        for i, d in self.finite_factors:
            gen = self.generator(i)
            reps = [
                reduce_mod1(a + k * g for a, g in zip(rep, gen))
                for rep in reps for k in range(d)
            ]
        return reps

    def component_key(self, x):
        """Which component ``x`` lies on, as residues ``d_i y_i mod d_i``."""
        y = mat_vec(self.snf.Vinv, [Fraction(q) for q in x])
        return tuple(int(y[i] * d) % d for i, d in self.finite_factors)


def torus_kernel(A, ncols=None):
    return TorusKernel(smith_normal_form(A, ncols))
