"""1-truncated compact Lie groups presented as torus extensions.

A group ``H`` with component group ``pi`` and identity component
``T = R^d / Z^d`` is given by an action ``alpha: pi -> GL_d(Z)`` and a
normalized 2-cocycle ``c: pi x pi -> T``.  Elements are pairs ``(t, p)``
with product

    (t1, p1)(t2, p2) = (t1 + alpha(p1) t2 + c(p1, p2), p1 p2).

Only torsion points of the torus (rational coordinates mod 1) are
representable.  The Lie algebra ``V = Q^d`` stands in for ``R^d``; the
exponential map is reduction mod ``Z^d`` and the adjoint action is
``alpha`` of the component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import product

from . import groups
from .errors import (
    ActionNotHomomorphism,
    ActionNotUnimodular,
    CocycleIdentityFails,
    CocycleNotNormalized,
    DimensionMismatch,
    ParentMismatch,
)
from .linalg import (
    identity_matrix,
    is_integral,
    is_unimodular,
    mat_mul,
    reduce_mod1,
    sparse_mat_vec,
    sparse_rows,
)

DEFAULT_GRID_DENOMINATOR = 8


def _vec(xs):
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True, eq=False)
class ToralGroup:
    component_group: groups.FiniteGroup
    rank: int
    action: tuple
    cocycle_table: dict = field(repr=False)
    name: str = ""

    def __repr__(self):
        return f"ToralGroup({self.name or '?'}, pi={self.component_group.name}, rank={self.rank})"

    @property
    def pi(self):
        return self.component_group

    def alpha(self, p):
        return self.action[p]

    def c(self, p, q):
        return self.cocycle_table.get((p, q), self.zero_point)

    @cached_property
    def zero_point(self):
        return tuple(Fraction(0) for _ in range(self.rank))

    def element(self, t, p=0):
        t = reduce_mod1(t)
        if len(t) != self.rank:
            raise DimensionMismatch(f"torus point of length {len(t)} in a rank {self.rank} group")
        return ToralElement(t, p, self)

    @property
    def identity(self):
        return ToralElement(self.zero_point, 0, self)

    @cached_property
    def _sparse_action(self):
        return tuple(sparse_rows(M) for M in self.action)

    def act(self, p, v):
        if p == 0:
            return tuple(v)
        return sparse_mat_vec(self._sparse_action[p], v)

    def mul(self, a, b):
        t = tuple(x + y for x, y in zip(a.t, self.act(a.p, b.t)))
        c = self.cocycle_table.get((a.p, b.p))
        if c is not None:
            t = tuple(x + z for x, z in zip(t, c))
        return ToralElement(reduce_mod1(t), self.pi.mul(a.p, b.p), self)

    def inv(self, a):
        q = self.pi.inv(a.p)
        t = tuple(-x - y for x, y in zip(self.act(q, a.t), self.c(q, a.p)))
        return ToralElement(reduce_mod1(t), q, self)

    def conj(self, h, x):
        """``h x h^-1``."""
        return self.mul(self.mul(h, x), self.inv(h))

    def commutes(self, a, b):
        return self.mul(a, b) == self.mul(b, a)

    def exp(self, v):
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in a rank {self.rank} group")
        return ToralElement(reduce_mod1(v), 0, self)

    def ad(self, h, v):
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in a rank {self.rank} group")
        return self.act(h.p, v)

    def torsion_grid(self, N, components=None):
        """All elements whose torus coordinates lie in ``(1/N) Z``."""
        comps = range(self.pi.order) if components is None else components
        pts = list(product(range(N), repeat=self.rank))
        return [
            ToralElement(tuple(Fraction(k, N) for k in pt), p, self)
            for p in comps for pt in pts
        ]

    def to_json(self):
        from .io import fraction_str

        return {
            "name": self.name,
            "rank": self.rank,
            "component_group": {"table": [list(r) for r in self.pi.table]},
            "action": {str(p): [list(r) for r in self.action[p]] for p in self.pi},
            "cocycle": {
                f"({p},{q})": [fraction_str(x) for x in v]
                for (p, q), v in sorted(self.cocycle_table.items())
            },
        }


@dataclass(frozen=True)
class ToralElement:
    t: tuple
    p: int
    parent: ToralGroup = field(compare=False, hash=False, repr=False)

    def __mul__(self, other):
        return elem_mul(self, other)

    def inverse(self):
        return self.parent.inv(self)

    def sort_key(self):
        return (self.p, self.t)

    def __repr__(self):
        ts = ",".join(str(x) for x in self.t)
        return f"({ts}|{self.p})"


def make_toral_group(pi, rank, action=None, cocycle=None, name=""):
    """Validate extension data and build a :class:`ToralGroup`.

    ``action`` maps component indices to ``rank x rank`` integer matrices
    (omitted entries are an error unless ``rank == 0``).  ``cocycle`` maps
    pairs ``(p, q)`` to torus points; omitted pairs are zero.
    """
    n = pi.order
    action = dict(action or {})
    mats = []
    for p in range(n):
        if rank == 0:
            mats.append(())
            continue
        if p not in action:
            if p == 0:
                action[p] = identity_matrix(rank)
            else:
                raise ActionNotHomomorphism(f"no action matrix for component {p}", witness=(p,))
        M = tuple(tuple(int(x) for x in row) for row in action[p])
        if len(M) != rank or any(len(r) != rank for r in M):
            raise DimensionMismatch(f"action matrix for {p} is not {rank}x{rank}")
        if not is_unimodular([list(r) for r in M]):
            raise ActionNotUnimodular(f"action matrix for component {p} is not unimodular", witness=(p,))
        mats.append(M)
    if rank and mats[0] != tuple(tuple(r) for r in identity_matrix(rank)):
        raise ActionNotHomomorphism("identity component does not act trivially", witness=(0, 0))
    for p, q in product(range(n), repeat=2):
        if rank and tuple(map(tuple, mat_mul(mats[p], mats[q]))) != mats[pi.mul(p, q)]:
            raise ActionNotHomomorphism(f"alpha({p}) alpha({q}) != alpha({p}*{q})", witness=(p, q))

    table = {}
    for key, val in (cocycle or {}).items():
        p, q = key
        val = reduce_mod1(_vec(val))
        if len(val) != rank:
            raise DimensionMismatch(f"cocycle value at {key} has length {len(val)}")
        if any(val):
            table[(int(p), int(q))] = val
    zero = tuple(Fraction(0) for _ in range(rank))
    for p in range(n):
        if table.get((0, p), zero) != zero or table.get((p, 0), zero) != zero:
            raise CocycleNotNormalized(f"cocycle is nonzero at a pair involving the identity and {p}", witness=(p,))
    H = ToralGroup(pi, rank, tuple(mats), table, name)
    for p1, p2, p3 in product(range(n), repeat=3):
        lhs = [
            a - b + c - d
            for a, b, c, d in zip(
                H.act(p1, H.c(p2, p3)), H.c(pi.mul(p1, p2), p3), H.c(p1, pi.mul(p2, p3)), H.c(p1, p2)
            )
        ]
        if not is_integral(lhs):
            raise CocycleIdentityFails(f"cocycle identity fails at ({p1},{p2},{p3})", witness=(p1, p2, p3))
    return H


def same_group(A, B):
    return A is B or (
        A.pi == B.pi and A.rank == B.rank and A.action == B.action and A.cocycle_table == B.cocycle_table
    )


def elem_mul(a, b):
    if not same_group(a.parent, b.parent):
        raise ParentMismatch("elements belong to different groups")
    return a.parent.mul(a, b)


def elem_inv(a):
    return a.parent.inv(a)


def exp_map(v, H):
    return H.exp(_vec(v))


def ad_action(h, v):
    return h.parent.ad(h, _vec(v))


# -- crossed module check -----------------------------------------------------

@dataclass
class CrossedModuleReport:
    passed: bool
    checks: dict
    failures: list

    def to_json(self):
        return {
            "passed": self.passed,
            "checks": dict(sorted(self.checks.items())),
            "failures": [str(f) for f in self.failures[:20]],
        }


def farey_points(D):
    """Rationals in [0, 1) with denominator at most ``D``."""
    return sorted({Fraction(a, b) for b in range(1, D + 1) for a in range(b)})


def check_crossed_module(H, D=DEFAULT_GRID_DENOMINATOR, max_vectors=600):
    """Verify the crossed-module axioms for ``(H, V, exp, ad)`` exactly on a
    deterministic grid of torsion samples.

    Vectors run over all points whose coordinates have denominator at most
    ``D`` (thinned to a ``(1/D)Z`` grid when that set exceeds
    ``max_vectors``); group elements run over every component with torus
    parts in ``(1/2) Z^d``.
    """
    d = H.rank
    coords = farey_points(D)
    if len(coords) ** d > max_vectors:
        coords = [Fraction(k, D) for k in range(D)]
    # shift off the lattice so V-representatives outside [0,1) are exercised
    vectors = [tuple(x + (1 if i == 0 else 0) * (j % 2) for i, x in enumerate(v))
               for j, v in enumerate(product(coords, repeat=d))]
    elements = H.torsion_grid(2)
    checks = {"equivariance": 0, "peiffer": 0, "exp_homomorphism": 0, "ad_factors_through_pi": 0}
    failures = []
    for h in elements:
        for v in vectors:
            checks["equivariance"] += 1
            lhs = H.exp(H.ad(h, v))
            rhs = H.conj(h, H.exp(v))
            if lhs != rhs:
                failures.append(("equivariance", h, v))
            checks["ad_factors_through_pi"] += 1
            if H.ad(h, v) != H.ad(H.element(H.zero_point, h.p), v):
                failures.append(("ad_factors_through_pi", h, v))
    small = vectors[: min(len(vectors), 40)]
    for v in small:
        ev = H.exp(v)
        for w in small:
            checks["peiffer"] += 1
            if H.ad(ev, w) != tuple(w):
                failures.append(("peiffer", v, w))
            checks["exp_homomorphism"] += 1
            if H.exp(tuple(a + b for a, b in zip(v, w))) != H.mul(ev, H.exp(w)):
                failures.append(("exp_homomorphism", v, w))
    return CrossedModuleReport(not failures, checks, failures)


# -- catalog ------------------------------------------------------------------

def _z2():
    return groups.cyclic_group(2)


def circle_group():
    return make_toral_group(groups.trivial_group(), 1, name="U1")


def torus_group(d=2):
    return make_toral_group(groups.trivial_group(), d, name=f"T{d}")


def orthogonal_group_2():
    return make_toral_group(_z2(), 1, {1: [[-1]]}, name="O2")


def pin_group_2():
    return make_toral_group(_z2(), 1, {1: [[-1]]}, {(1, 1): [Fraction(1, 2)]}, name="Pin2")


def torus_swap_group():
    return make_toral_group(_z2(), 2, {1: [[0, 1], [1, 0]]}, name="T2xZ2")


def finite_as_toral(G):
    return make_toral_group(G, 0, name=G.name)


def finite_catalog(name):
    """Finite groups by name: ``Z<n>``, ``V4``/``Z2xZ2``, ``S<n>``, ``D<2n>``, ``Q8``."""
    key = name.strip()
    if key in ("1", "e", "trivial", "Z1"):
        return groups.trivial_group()
    if key in ("V4", "Z2xZ2", "K4"):
        return groups.direct_product(_z2(), _z2(), name="Z2xZ2")
    if key == "Q8":
        return groups.quaternion_group()
    if key[0] == "Z" and key[1:].isdigit():
        return groups.cyclic_group(int(key[1:]))
    if key[0] == "S" and key[1:].isdigit() and 1 <= int(key[1:]) <= 5:
        return groups.symmetric_group(int(key[1:]))
    if key[0] == "D" and key[1:].isdigit() and int(key[1:]) >= 4 and int(key[1:]) % 2 == 0:
        return groups.dihedral_group(int(key[1:]) // 2)
    raise KeyError(name)


TORAL_CATALOG = {
    "U1": circle_group,
    "T2": torus_group,
    "O2": orthogonal_group_2,
    "Pin2": pin_group_2,
    "T2xZ2": torus_swap_group,
}

CATALOG_TARGETS = ("U1", "T2", "O2", "Pin2", "T2xZ2", "Z3", "S3")


def toral_catalog(name):
    """Toral groups by name; finite catalog groups are returned as rank 0."""
    if name in TORAL_CATALOG:
        return TORAL_CATALOG[name]()
    return finite_as_toral(finite_catalog(name))
