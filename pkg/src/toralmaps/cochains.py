"""Normalized twisted cochains on a finite group.

An n-cochain assigns a coordinate vector to each n-tuple of non-identity
elements; tuples containing the identity are implicitly zero.  Coefficients
are one of

* ``LATTICE`` -- ``Z^d``,
* ``VECTOR``  -- ``Q^d`` (standing in for the Lie algebra),
* ``TORUS``   -- ``(Q/Z)^d``, values kept reduced into [0, 1),

twisted by a representation ``rho: G -> GL_d(Z)``.

Coboundary convention, for ``n >= 1``::

    (dc)(g1..g_{n+1}) = rho(g1) c(g2..g_{n+1})
                        + sum_{i=1..n} (-1)^i c(.., g_i g_{i+1}, ..)
                        + (-1)^{n+1} c(g1..g_n)

which in degrees 1 and 2 reads ``dmu(g1,g2) = mu(g1) - mu(g1 g2) +
rho(g1) mu(g2)`` and makes ``dnu = 0`` equivalent to
``nu(g1 g2, g3) + nu(g1, g2) = nu(g1, g2 g3) + rho(g1) nu(g2, g3)``.
In degree 0 we use ``(dt)(g) = t - rho(g) t`` so that degree-1
coboundaries are exactly the shifts produced by conjugating with the torus
element ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

from .errors import DimensionMismatch, NotACocycle, SizeLimitExceeded, WrongCoefficients
from .linalg import (
    AbelianGroupStructure,
    identity_matrix,
    is_integral,
    is_unimodular,
    kernel_lattice,
    mat_mul,
    quotient_structure,
    TorusKernel,
    reduce_mod1,
    smith_normal_form,
    solve_integer,
    sparse_mat_vec,
    sparse_rows,
    torus_solve,
)

LATTICE = "lattice"
VECTOR = "vector"
TORUS = "torus"
KINDS = (LATTICE, VECTOR, TORUS)

DEFAULT_MAX_DEGREE = 3
DEFAULT_MATRIX_CAP = 2_000_000


@dataclass(frozen=True, eq=False)
class Representation:
    group: object
    rank: int
    matrices: tuple

    def __post_init__(self):
        G, d = self.group, self.rank
        if len(self.matrices) != G.order:
            raise DimensionMismatch("one matrix per group element required")
        for g in G:
            M = self.matrices[g]
            if len(M) != d or any(len(r) != d for r in M):
                raise DimensionMismatch(f"matrix for {g} is not {d}x{d}")
        if d and tuple(map(tuple, self.matrices[0])) != tuple(map(tuple, identity_matrix(d))):
            raise DimensionMismatch("identity must act trivially")

    @cached_property
    def _sparse(self):
        return tuple(sparse_rows(M) for M in self.matrices)

    def act(self, g, v):
        if g == 0:
            return tuple(v)
        return sparse_mat_vec(self._sparse[g], v)

    def is_valid(self):
        G = self.group
        for g in G:
            if self.rank and not is_unimodular([list(r) for r in self.matrices[g]]):
                return False
            for h in G:
                prod_m = mat_mul(self.matrices[g], self.matrices[h])
                if tuple(map(tuple, prod_m)) != tuple(map(tuple, self.matrices[G.mul(g, h)])):
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.group == other.group
            and self.rank == other.rank
            and tuple(map(lambda M: tuple(map(tuple, M)), self.matrices))
            == tuple(map(lambda M: tuple(map(tuple, M)), other.matrices))
        )

    def __hash__(self):
        return hash((self.group, self.rank))

    @cached_property
    def nonidentity(self):
        return tuple(range(1, self.group.order))

    def basis(self, n):
        """Ordered non-identity ``n``-tuples indexing the normalized ``C^n``."""
        return list(product(self.nonidentity, repeat=n))

    def fixed_lattice(self):
        """Z-basis of the invariant sublattice."""
        d = self.rank
        rows = []
        for g in self.group:
            M = self.matrices[g]
            rows += [[M[i][j] - int(i == j) for j in range(d)] for i in range(d)]
        return kernel_lattice(rows, d)


def trivial_representation(G, d=1):
    I = tuple(tuple(r) for r in identity_matrix(d))
    return Representation(G, d, tuple(I for _ in G))


def representation_from_toral(H, gamma):
    """``ad o gamma`` for ``gamma: G -> pi_0(H)``."""
    return Representation(gamma.source, H.rank, tuple(H.action[gamma(g)] for g in gamma.source))


def _zero(d):
    return tuple(Fraction(0) for _ in range(d))


def _normalize_value(kind, v):
    if kind == TORUS:
        return reduce_mod1(v)
    v = tuple(Fraction(x) for x in v)
    if kind == LATTICE and not is_integral(v):
        raise WrongCoefficients(f"non-integral value {v} in a lattice cochain")
    return v


@dataclass(frozen=True, eq=False)
class Cochain:
    degree: int
    kind: str
    rep: Representation = field(repr=False)
    values: dict

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        d = self.rep.rank
        clean = {}
        for key, v in self.values.items():
            key = tuple(key)
            if len(key) != self.degree:
                raise DimensionMismatch(f"key {key} in a degree {self.degree} cochain")
            if len(v) != d:
                raise DimensionMismatch(f"value of length {len(v)} for rank {d}")
            v = _normalize_value(self.kind, v)
            if 0 in key or not any(v):
                continue
            clean[key] = v
        object.__setattr__(self, "values", clean)

    def __call__(self, *gs):
        if len(gs) != self.degree:
            raise DimensionMismatch(f"degree {self.degree} cochain evaluated at {len(gs)} elements")
        return self.values.get(tuple(gs), _zero(self.rep.rank))

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.kind == other.kind
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.degree, self.kind, frozenset(self.values.items())))

    def is_zero(self):
        return not self.values

    def _combine(self, other, sign):
        if other.degree != self.degree:
            raise DimensionMismatch("degree mismatch")
        d = self.rep.rank
        out = dict(self.values)
        for key, v in other.values.items():
            cur = out.get(key, _zero(d))
            out[key] = tuple(a + sign * b for a, b in zip(cur, v))
        return Cochain(self.degree, self.kind, self.rep, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Cochain(self.degree, self.kind, self.rep, {k: tuple(-x for x in v) for k, v in self.values.items()})

    def scale(self, q):
        q = Fraction(q)
        return Cochain(self.degree, self.kind, self.rep, {k: tuple(q * x for x in v) for k, v in self.values.items()})

    def as_kind(self, kind):
        return Cochain(self.degree, kind, self.rep, self.values)

    def to_vector(self):
        d = self.rep.rank
        out = []
        for key in self.rep.basis(self.degree):
            out.extend(self.values.get(key, _zero(d)))
        return out

    @classmethod
    def from_vector(cls, degree, kind, rep, vec):
        d = rep.rank
        basis = rep.basis(degree)
        if len(vec) != d * len(basis):
            raise DimensionMismatch(f"vector of length {len(vec)} for a cochain space of dimension {d * len(basis)}")
        values = {key: tuple(vec[i * d:(i + 1) * d]) for i, key in enumerate(basis)}
        return cls(degree, kind, rep, values)

    def to_json(self):
        from .io import fraction_str

        return {
            ",".join(str(g) for g in key): [fraction_str(x) for x in v]
            for key, v in sorted(self.values.items())
        }


def zero_cochain(degree, kind, rep):
    return Cochain(degree, kind, rep, {})


# -- coboundary -------------------------------------------------------------------

def coboundary(c):
    """The twisted bar coboundary; see the module docstring for signs."""
    rep, G, n, d = c.rep, c.rep.group, c.degree, c.rep.rank
    out = {}
    if n == 0:
        t = c.values.get((), _zero(d))
        for g in rep.nonidentity:
            gt = rep.act(g, t)
            out[(g,)] = tuple(a - b for a, b in zip(t, gt))
        return Cochain(1, c.kind, rep, out)
    vals = c.values
    zero = _zero(d)
    for gs in product(rep.nonidentity, repeat=n + 1):
        acc = list(rep.act(gs[0], vals.get(gs[1:], zero)))
        for i in range(n):
            merged = G.mul(gs[i], gs[i + 1])
            if merged == 0:
                continue
            key = gs[:i] + (merged,) + gs[i + 2:]
            v = vals.get(key)
            if v is not None:
                if i % 2 == 0:
                    acc = [a - x for a, x in zip(acc, v)]
                else:
                    acc = [a + x for a, x in zip(acc, v)]
        v = vals.get(gs[:n])
        if v is not None:
            sign = -1 if (n + 1) % 2 else 1
            acc = [a + sign * x for a, x in zip(acc, v)]
        if any(acc):
            out[gs] = tuple(acc)
    return Cochain(n + 1, c.kind, rep, out)


def coboundary_matrix(rep, n, cap=DEFAULT_MATRIX_CAP):
    """Integer matrix of ``d: C^n -> C^{n+1}`` in the :meth:`Representation.basis`
    ordering (coordinates interleaved per tuple)."""
    return _coboundary_matrix(rep.group.table, tuple(map(_freeze, rep.matrices)), rep.rank, n, cap)


def _freeze(M):
    return tuple(tuple(r) for r in M)


@lru_cache(maxsize=64)
def _coboundary_matrix(table, mats, d, n, cap):
    k = len(table) - 1
    rows_n = d * k ** (n + 1)
    cols_n = d * k ** n
    if rows_n * cols_n > cap:
        raise SizeLimitExceeded(f"coboundary matrix {rows_n}x{cols_n} exceeds cap {cap}")
    M = [[0] * cols_n for _ in range(rows_n)]

    def pos(gs):
        # tuples of non-identity elements in base k, most significant first
        i = 0
        for g in gs:
            i = i * k + (g - 1)
        return i

    for ridx, gs in enumerate(product(range(1, k + 1), repeat=n + 1)):
        row0 = ridx * d
        if n == 0:
            g = gs[0]
            for a in range(d):
                for b in range(d):
                    M[row0 + a][b] += int(a == b) - mats[g][a][b]
            continue
        c0 = pos(gs[1:]) * d
        A = mats[gs[0]]
        for a in range(d):
            for b in range(d):
                M[row0 + a][c0 + b] += A[a][b]
        for i in range(n):
            merged = table[gs[i]][gs[i + 1]]
            if merged == 0:
                continue
            c = pos(gs[:i] + (merged,) + gs[i + 2:]) * d
            sign = -1 if i % 2 == 0 else 1
            for a in range(d):
                M[row0 + a][c + a] += sign
        c = pos(gs[:n]) * d
        sign = -1 if (n + 1) % 2 else 1
        for a in range(d):
            M[row0 + a][c + a] += sign
    return M, rows_n, cols_n


@lru_cache(maxsize=64)
def _coboundary_snf(table, mats, d, n, cap):
    M, _, cols = _coboundary_matrix(table, mats, d, n, cap)
    return smith_normal_form(M, cols)


def coboundary_snf(rep, n, cap=DEFAULT_MATRIX_CAP):
    return _coboundary_snf(rep.group.table, tuple(map(_freeze, rep.matrices)), rep.rank, n, cap)


def is_cocycle(c):
    """``(True, None)`` if ``dc = 0`` (mod ``Z^d`` for torus cochains),
    otherwise ``(False, witness_tuple)``."""
    dc = coboundary(c)
    for key in sorted(dc.values):
        return False, key
    return True, None


# -- contracting homotopy -------------------------------------------------------

def contracting_homotopy(nu):
    """Haar average ``H nu(g) = (1/|G|) sum_x rho(x)^-1 nu(x, g)``.

    On vector-valued 2-cocycles ``d(H nu) = nu`` exactly.
    """
    if nu.kind != VECTOR:
        raise WrongCoefficients(f"averaging needs Q^d coefficients, got {nu.kind}")
    if nu.degree != 2:
        raise DimensionMismatch("contracting homotopy is defined on 2-cochains")
    rep, G, d = nu.rep, nu.rep.group, nu.rep.rank
    order = G.order
    out = {}
    zero = _zero(d)
    for g in rep.nonidentity:
        acc = [Fraction(0)] * d
        for x in rep.nonidentity:
            v = nu.values.get((x, g))
            if v is not None:
                w = rep.act(G.inv(x), v)
                acc = [a + b for a, b in zip(acc, w)]
        if any(acc):
            out[(g,)] = tuple(a / order for a in acc)
        else:
            out[(g,)] = zero
    return Cochain(1, VECTOR, rep, out)


# -- cohomology -------------------------------------------------------------------

def cohomology_lattice(rep, n, max_degree=DEFAULT_MAX_DEGREE, cap=DEFAULT_MATRIX_CAP):
    """``H^n(G, Z^d_rho)`` from the normalized bar complex."""
    if n < 0 or n > max_degree:
        raise SizeLimitExceeded(f"degree {n} outside supported range 0..{max_degree}")
    A, _, cols_a = coboundary_matrix(rep, n, cap)
    if n == 0:
        return AbelianGroupStructure(len(kernel_lattice(A, cols_a)))
    B, _, cols_b = coboundary_matrix(rep, n - 1, cap)
    return quotient_structure(A, B, cols_a, cols_b)


def lift_torus(nu):
    """Coordinate representatives in [0, 1) of a torus cochain, as a vector cochain."""
    if nu.kind != TORUS:
        raise WrongCoefficients(f"expected torus coefficients, got {nu.kind}")
    return nu.as_kind(VECTOR)


def torus_class_vanishes(nu, lift=None):
    """Decide whether a torus 2-cocycle is a coboundary.

    ``lift`` overrides the vector-valued representative of ``nu`` (any
    representative works; the default uses coordinates in [0, 1)).  The
    integral 3-cocycle ``omega = d(lift)`` must be the coboundary of a
    lattice 2-cochain ``m``; then ``lift - m`` is a vector 2-cocycle and its
    Haar average cobounds ``nu`` mod ``Z^d``.

    Returns ``(True, mu)`` with ``d mu = nu`` or ``(False, None)``.
    """
    if nu.kind != TORUS or nu.degree != 2:
        raise WrongCoefficients("expected a torus 2-cochain")
    ok, witness = is_cocycle(nu)
    if not ok:
        raise NotACocycle(f"not a torus 2-cocycle (fails at {witness})", witness=witness)
    rep = nu.rep
    if lift is None:
        lift = lift_torus(nu)
    elif lift.kind != VECTOR or lift.as_kind(TORUS) != nu:
        raise WrongCoefficients("lift does not reduce to the given torus cochain")
    if not lift.values:
        return True, zero_cochain(1, TORUS, rep)
    omega = coboundary(lift).to_vector()
    if not is_integral(omega):
        raise NotACocycle("lift has a non-integral coboundary")
    D2, _, cols = coboundary_matrix(rep, 2)
    m = solve_integer(D2, [int(x) for x in omega], cols, snf=coboundary_snf(rep, 2))
    if m is None:
        return False, None
    m = Cochain.from_vector(2, VECTOR, rep, m)
    mu = contracting_homotopy(lift - m).as_kind(TORUS)
    if coboundary(mu) != nu:
        from .errors import ObstructionSolverFailure

        raise ObstructionSolverFailure("cobounding cochain failed verification")
    return True, mu


# -- degree-1 torus cocycles ------------------------------------------------------

@dataclass(frozen=True)
class Z1Structure:
    """``Z^1(G, T_rho)`` as a closed subgroup of the torus ``C^1``.

    ``torus_rank`` is the dimension of its identity component, which equals
    the coboundaries ``B^1``; the components therefore enumerate
    ``H^1(G, T_rho)``, one torus cocycle per class in ``representatives``.
    """

    rep: Representation
    torus_rank: int
    representatives: tuple
    kernel: object = field(repr=False)

    @property
    def class_count(self):
        return len(self.representatives)

    def class_index(self, z):
        """Index into ``representatives`` of the class of the torus 1-cocycle ``z``."""
        key = self.kernel.component_key(z.to_vector())
        return self._keys[key]

    @cached_property
    def _keys(self):
        return {self.kernel.component_key(r.to_vector()): i for i, r in enumerate(self.representatives)}


def z1_torus_structure(rep, cap=DEFAULT_MATRIX_CAP):
    K = TorusKernel(coboundary_snf(rep, 1, cap))
    reps = tuple(Cochain.from_vector(1, TORUS, rep, list(v)) for v in K.component_representatives())
    reps = tuple(sorted(reps, key=lambda z: z.to_vector()))
    return Z1Structure(rep, K.dimension, reps, K)


def torus_cobound_degree1(z):
    """A torus point ``t`` with ``dt = z`` (degree-0 convention above), or ``None``."""
    if z.degree != 1:
        raise DimensionMismatch("expected a 1-cochain")
    rep, d = z.rep, z.rep.rank
    rows = []
    rhs = []
    for g in rep.nonidentity:
        M = rep.matrices[g]
        rows += [[int(i == j) - M[i][j] for j in range(d)] for i in range(d)]
        rhs += list(z(g))
    return torus_solve(rows, rhs, d)
