"""The nerve of the exponential crossed module and cocycle pairs.

An n-simplex of ``N(H, V)`` consists of ``h_ij in H`` for ``0 <= i <= j <= n``
and ``v_ijk in V = Q^d`` for ``i <= j <= k`` with

1. ``h_ii = e`` and ``v_iij = v_ijj = 0``,
2. ``h_ik = exp(v_ijk) h_ij h_jk``,
3. ``v_ikl + v_ijk = v_ijl + alpha(h_ij) v_jkl``.

All V-formulas are written additively.  V-values are never reduced mod
``Z^d``: distinguishing ``v`` from ``v + k`` is the whole point of the
covering ``exp: V -> T``.

A cocycle pair ``(zeta, nu)`` for a finite group ``G`` is a simplicial map
from the nerve of ``G`` (an n-simplex is a tuple ``(g_1, .., g_n)``) into
``N(H, V)``: ``zeta(g1 g2) = exp(nu(g1, g2)) zeta(g1) zeta(g2)`` and ``nu``
is a 2-cocycle for the action ``ad o zeta``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

from .cochains import (
    VECTOR,
    Cochain,
    coboundary,
    coboundary_matrix,
    contracting_homotopy,
    representation_from_toral,
)
from .errors import DomainError, IncompatibleFaces, InvalidPair, NotMonotone
from .groups import FiniteHom
from .linalg import identity_matrix, is_integral, kernel_lattice
from .toral import ToralElement

DEFAULT_SAMPLES = 50
DEFAULT_MAX_DENOMINATOR = 8
DEFAULT_SEED = 0


def _zero(d):
    return tuple(Fraction(0) for _ in range(d))


def _add(*vs):
    return tuple(sum(xs) for xs in zip(*vs))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _act_inv(H, h, v):
    """``alpha(h)^-1 v``."""
    return H.act(H.pi.inv(h.p), v)


# -- simplices ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NerveSimplex:
    level: int
    parent: object = field(repr=False)
    h: dict = field(repr=False)
    v: dict = field(repr=False)

    def __eq__(self, other):
        return (
            isinstance(other, NerveSimplex)
            and self.level == other.level
            and self.h == other.h
            and self.v == other.v
        )

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.h.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        hs = " ".join(f"h{i}{j}={x!r}" for (i, j), x in sorted(self.h.items()) if i < j)
        return f"NerveSimplex(level={self.level}, {hs})"

    def violations(self):
        """Failed nerve identities as ``(condition, indices)`` pairs."""
        H, n = self.parent, self.level
        zero = H.zero_point
        out = []
        for i in range(n + 1):
            if self.h[(i, i)] != H.identity:
                out.append((1, (i, i)))
        for i, j in combinations_with_replacement(range(n + 1), 2):
            if self.v[(i, i, j)] != zero or self.v[(i, j, j)] != zero:
                out.append((1, (i, j)))
        for i, j, k in combinations_with_replacement(range(n + 1), 3):
            rhs = H.mul(H.mul(H.exp(self.v[(i, j, k)]), self.h[(i, j)]), self.h[(j, k)])
            if self.h[(i, k)] != rhs:
                out.append((2, (i, j, k)))
        for i, j, k, l in combinations_with_replacement(range(n + 1), 4):
            lhs = _add(self.v[(i, k, l)], self.v[(i, j, k)])
            rhs = _add(self.v[(i, j, l)], H.ad(self.h[(i, j)], self.v[(j, k, l)]))
            if lhs != rhs:
                out.append((3, (i, j, k, l)))
        return out

    def is_valid(self):
        return not self.violations()


@dataclass(frozen=True)
class NerveCoordinates:
    """Free coordinates ``h_0i`` (``1 <= i <= n``) and ``v_0ij`` (``1 <= i < j <= n``)."""

    level: int
    h0: tuple
    v0: tuple  # ((i, j), vector) pairs in lexicographic order of (i, j)

    def v0_map(self):
        return dict(self.v0)


def project(s):
    n = s.level
    h0 = tuple(s.h[(0, i)] for i in range(1, n + 1))
    v0 = tuple(((i, j), s.v[(0, i, j)]) for i, j in combinations(range(1, n + 1), 2))
    return NerveCoordinates(n, h0, v0)


def from_coordinates(c, H):
    """The unique simplex with the given free coordinates.

    ``h_ij = h_0i^-1 exp(v_0ij)^-1 h_0j`` and
    ``v_ijk = alpha(h_0i)^-1 (v_0jk + v_0ij - v_0ik)``.
    """
    n, zero = c.level, H.zero_point
    if len(c.h0) != n:
        raise DomainError(f"expected {n} coordinates h_0i, got {len(c.h0)}")
    h0 = [H.identity] + list(c.h0)
    given = c.v0_map()

    def v0(i, j):
        if i == 0 or i == j:
            return zero
        return tuple(Fraction(x) for x in given[(i, j)])

    h, v = {}, {}
    for i, j in combinations_with_replacement(range(n + 1), 2):
        h[(i, j)] = H.mul(H.mul(H.inv(h0[i]), H.inv(H.exp(v0(i, j)))), h0[j])
    for i, j, k in combinations_with_replacement(range(n + 1), 3):
        v[(i, j, k)] = _act_inv(H, h0[i], _sub(_add(v0(j, k), v0(i, j)), v0(i, k)))
    return NerveSimplex(n, H, h, v)


# -- simplicial operators ----------------------------------------------------------

def simplicial_operator(s, delta):
    """Reindex along a monotone ``delta: [m] -> [n]`` given as its list of values."""
    delta = tuple(int(x) for x in delta)
    n = s.level
    if not delta or any(a > b for a, b in zip(delta, delta[1:])) or delta[0] < 0 or delta[-1] > n:
        raise NotMonotone(f"{list(delta)} is not a monotone map into [{n}]")
    m = len(delta) - 1
    h = {(i, j): s.h[(delta[i], delta[j])] for i, j in combinations_with_replacement(range(m + 1), 2)}
    v = {
        (i, j, k): s.v[(delta[i], delta[j], delta[k])]
        for i, j, k in combinations_with_replacement(range(m + 1), 3)
    }
    return NerveSimplex(m, s.parent, h, v)


def face_map(n, k):
    """``d_k: [n-1] -> [n]``, skipping ``k``."""
    return tuple(i for i in range(n + 1) if i != k)


def degeneracy_map(n, k):
    """``s_k: [n+1] -> [n]``, hitting ``k`` twice."""
    return tuple(range(k + 1)) + tuple(range(k, n + 1))


def face(s, k):
    return simplicial_operator(s, face_map(s.level, k))


def degeneracy(s, k):
    return simplicial_operator(s, degeneracy_map(s.level, k))


# -- matching --------------------------------------------------------------------

def matching_tuple(s):
    """All ``n + 1`` faces of ``s``; they are compatible by construction."""
    if s.level < 1:
        raise DomainError("matching tuples need level >= 1")
    faces = [face(s, k) for k in range(s.level + 1)]
    ok, witness = faces_compatible(faces)
    if not ok:
        raise IncompatibleFaces(f"faces of a simplex disagree at {witness}")
    return faces


def faces_compatible(faces):
    """The matching condition ``d_i x_j = d_(j-1) x_i`` for ``i < j``."""
    if not faces or faces[0].level == 0:
        return True, None
    for j in range(len(faces)):
        for i in range(j):
            if face(faces[j], i) != face(faces[i], j - 1):
                return False, (i, j)
    return True, None


@dataclass(frozen=True)
class MatchingFiber:
    """Fillers of a compatible face tuple.

    ``fillers`` holds at most one simplex.  ``lattice`` is the translation
    lattice of the full fiber (the identity basis at level 2, where fillers
    form a ``Z^d``-torsor; empty otherwise).  ``pi_expression`` is set at
    level 3.
    """

    level: int
    fillers: tuple
    lattice: tuple = ()
    pi_expression: tuple | None = None
    reason: str = ""


def _from_faces(n, faces, H, v012=None):
    """Assemble all simplex data determined by the faces (plus ``v_012`` at level 2)."""
    h, v = {}, {}

    def lookup(idx):
        missing = next(k for k in range(n + 1) if k not in idx)
        return faces[missing], tuple(i if i < missing else i - 1 for i in idx)

    for idx in combinations_with_replacement(range(n + 1), 2):
        f, sub = lookup(idx)
        h[idx] = f.h[sub]
    for idx in combinations_with_replacement(range(n + 1), 3):
        if len(set(idx)) == n + 1:
            v[idx] = v012
        else:
            f, sub = lookup(idx)
            v[idx] = f.v[sub]
    return NerveSimplex(n, H, h, v)


def pi_expression(faces, H):
    """``v_023 + v_012 - alpha(h_01) v_123 - v_013`` read off a level-3 face tuple."""
    d0, d1, d2, d3 = faces
    v123, v023, v013, v012 = d0.v[(0, 1, 2)], d1.v[(0, 1, 2)], d2.v[(0, 1, 2)], d3.v[(0, 1, 2)]
    h01 = d3.h[(0, 1)]
    return _sub(_sub(_add(v023, v012), H.ad(h01, v123)), v013)


def solve_matching(n, faces):
    """Fillers of a compatible tuple of ``n + 1`` faces of level ``n - 1``.

    * ``n = 2``: ``exp(v_012)`` must equal ``h_02 h_12^-1 h_01^-1``; if that
      lies in the identity component the fiber is a ``Z^d``-torsor and the
      filler with coordinates in [0, 1) is returned.
    * ``n = 3``: every datum is fixed by the faces; the one remaining
      identity holds iff the pi-expression vanishes.  For faces that are
      nerve simplices it is automatically integral.
    * ``n >= 4``: the faces determine a unique filler.
    """
    faces = list(faces)
    if n < 2:
        raise DomainError("fillers are only computed for n >= 2")
    if len(faces) != n + 1 or any(f.level != n - 1 for f in faces):
        raise IncompatibleFaces(f"expected {n + 1} faces of level {n - 1}")
    H = faces[0].parent
    ok, witness = faces_compatible(faces)
    if not ok:
        raise IncompatibleFaces(f"faces {witness} disagree on a shared face")
    if n == 2:
        h01, h02, h12 = faces[2].h[(0, 1)], faces[1].h[(0, 1)], faces[0].h[(0, 1)]
        target = H.mul(H.mul(h02, H.inv(h12)), H.inv(h01))
        lattice = tuple(tuple(r) for r in identity_matrix(H.rank))
        if target.p != 0:
            return MatchingFiber(2, (), lattice, reason="h_02 h_12^-1 h_01^-1 is not in the identity component")
        s = _from_faces(2, faces, H, target.t)
        if not s.is_valid():
            return MatchingFiber(2, (), lattice, reason="faces are not nerve simplices")
        return MatchingFiber(2, (s,), lattice)
    if n == 3:
        expr = pi_expression(faces, H)
        if any(expr):
            why = "pi-expression is a nonzero integer vector" if is_integral(expr) else "pi-expression is not integral"
            return MatchingFiber(3, (), (), expr, why)
        s = _from_faces(3, faces, H)
        if not s.is_valid():
            return MatchingFiber(3, (), (), expr, "faces are not nerve simplices")
        return MatchingFiber(3, (s,), (), expr)
    s = _from_faces(n, faces, H)
    if not s.is_valid():
        return MatchingFiber(n, (), (), reason="faces are not nerve simplices")
    return MatchingFiber(n, (s,))


# -- the nerve of a finite group -------------------------------------------------

def group_nerve_face(G, gs, i):
    n = len(gs)
    if i == 0:
        return tuple(gs[1:])
    if i == n:
        return tuple(gs[:-1])
    return tuple(gs[: i - 1]) + (G.mul(gs[i - 1], gs[i]),) + tuple(gs[i + 1:])


def group_nerve_degeneracy(gs, i):
    return tuple(gs[:i]) + (0,) + tuple(gs[i:])


def degenerate_locus(G, n):
    """Union of the images of all degeneracies into level ``n``."""
    if n == 0:
        return set()
    out = set()
    for gs in product(range(G.order), repeat=n - 1):
        for i in range(n):
            out.add(group_nerve_degeneracy(gs, i))
    return out


# -- cocycle pairs ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CocyclePair:
    G: object = field(repr=False)
    H: object = field(repr=False)
    zeta: tuple
    nu: dict

    def nu_at(self, a, b):
        return self.nu.get((a, b), self.H.zero_point)

    def __eq__(self, other):
        return (
            isinstance(other, CocyclePair)
            and self.zeta == other.zeta
            and self._nonzero_nu() == other._nonzero_nu()
        )

    def __hash__(self):
        return hash(self.zeta)

    def _nonzero_nu(self):
        return {k: v for k, v in self.nu.items() if any(v)}

    def in_E0(self):
        return not self._nonzero_nu()

    def component(self):
        return FiniteHom(self.G, self.H.pi, tuple(z.p for z in self.zeta))

    def nu_cochain(self):
        rep = representation_from_toral(self.H, self.component())
        return Cochain(2, VECTOR, rep, dict(self._nonzero_nu()))


@dataclass(frozen=True)
class PairReport:
    conditions: dict  # condition number -> witness or None
    gamma: tuple | None

    @property
    def passed(self):
        return all(w is None for w in self.conditions.values())

    def to_json(self):
        return {
            "passed": self.passed,
            "conditions": {str(k): (list(w) if w is not None else None) for k, w in self.conditions.items()},
            "gamma": list(self.gamma) if self.gamma is not None else None,
        }


def make_pair(G, H, zeta, nu):
    zeta = tuple(zeta)
    clean = {}
    for (a, b), v in nu.items():
        clean[(a, b)] = tuple(Fraction(x) for x in v)
    return CocyclePair(G, H, zeta, clean)


def validate_pair(p):
    G, H = p.G, p.H
    zero = H.zero_point
    conds = {1: None, 2: None, 3: None}
    if p.zeta[0] != H.identity:
        conds[1] = (0,)
    else:
        for g in G:
            if p.nu_at(g, 0) != zero or p.nu_at(0, g) != zero:
                conds[1] = (g,)
                break
    for a, b in product(G, repeat=2):
        rhs = H.mul(H.mul(H.exp(p.nu_at(a, b)), p.zeta[a]), p.zeta[b])
        if p.zeta[G.mul(a, b)] != rhs:
            conds[2] = (a, b)
            break
    nonidentity = range(1, G.order)
    for a, b, c in product(nonidentity, repeat=3):
        lhs = _add(p.nu_at(G.mul(a, b), c), p.nu_at(a, b))
        rhs = _add(p.nu_at(a, G.mul(b, c)), H.ad(p.zeta[a], p.nu_at(b, c)))
        if lhs != rhs:
            conds[3] = (a, b, c)
            break
    gamma = None
    if all(w is None for w in conds.values()):
        gamma = p.component().images
        P = H.pi
        if not FiniteHom(G, P, gamma).is_valid():
            # conditions (1)-(2) force this; reaching here is a bug
            from .errors import InternalInvariantViolation

            raise InternalInvariantViolation("component of zeta is not a homomorphism")
    return PairReport(conds, gamma)


def _require_valid(p):
    report = validate_pair(p)
    if not report.passed:
        failed = {k: w for k, w in report.conditions.items() if w is not None}
        raise InvalidPair(f"not a cocycle pair: {failed}", witness=failed)
    return report


def pair_to_simplex(p, gs, check=True):
    """The simplex ``h_ij = zeta(g_(i+1) .. g_j)``, ``v_ijk = nu(g_ij, g_jk)``."""
    if check:
        _require_valid(p)
    G, H = p.G, p.H
    n = len(gs)
    g = {}
    for i in range(n + 1):
        acc = 0
        g[(i, i)] = 0
        for j in range(i + 1, n + 1):
            acc = G.mul(acc, gs[j - 1])
            g[(i, j)] = acc
    h = {(i, j): p.zeta[g[(i, j)]] for i, j in combinations_with_replacement(range(n + 1), 2)}
    v = {
        (i, j, k): p.nu_at(g[(i, j)], g[(j, k)])
        for i, j, k in combinations_with_replacement(range(n + 1), 3)
    }
    return NerveSimplex(n, H, h, v)


def retract(p, t, check=True):
    """``K_t(zeta, nu) = (exp(t H nu) zeta, nu - t dH nu)``."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise DomainError(f"retraction parameter {t} outside [0, 1]")
    if check:
        _require_valid(p)
    H = p.H
    nu = p.nu_cochain()
    avg = contracting_homotopy(nu)
    zeta = []
    for g in p.G:
        shift = tuple(t * x for x in avg(g)) if g else H.zero_point
        zeta.append(H.mul(H.exp(shift), p.zeta[g]))
    nu_t = nu - coboundary(avg).scale(t)
    return CocyclePair(p.G, H, tuple(zeta), dict(nu_t.values))


# -- random sampling --------------------------------------------------------------

def random_rational(rng, max_den=DEFAULT_MAX_DENOMINATOR, bound=2):
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_torus_point(rng, d, max_den=DEFAULT_MAX_DENOMINATOR):
    return tuple(Fraction(rng.randrange(den), den) for den in (rng.randint(1, max_den) for _ in range(d)))


def random_element(rng, H, max_den=DEFAULT_MAX_DENOMINATOR):
    return H.element(random_torus_point(rng, H.rank, max_den), rng.randrange(H.pi.order))


def random_coordinates(rng, H, n, max_den=DEFAULT_MAX_DENOMINATOR):
    h0 = tuple(random_element(rng, H, max_den) for _ in range(n))
    v0 = tuple(
        ((i, j), tuple(random_rational(rng, max_den) for _ in range(H.rank)))
        for i, j in combinations(range(1, n + 1), 2)
    )
    return NerveCoordinates(n, h0, v0)


def random_simplex(rng, H, n, max_den=DEFAULT_MAX_DENOMINATOR):
    return from_coordinates(random_coordinates(rng, H, n, max_den), H)


_CYCLE_BASES = {}


def _integral_cocycle_basis(rep):
    """Z-basis of the integral normalized 2-cocycles, memoized per action."""
    key = (rep.group.table, tuple(tuple(map(tuple, M)) for M in rep.matrices))
    if key not in _CYCLE_BASES:
        D2, _, cols = coboundary_matrix(rep, 2)
        _CYCLE_BASES[key] = kernel_lattice(D2, cols)
    return _CYCLE_BASES[key]


def random_pair(rng, G, H, homs, max_den=DEFAULT_MAX_DENOMINATOR):
    """A random valid pair built from a homomorphism ``phi`` drawn from ``homs``.

    ``zeta = exp(mu) phi`` for a random vector 1-cochain ``mu``, and
    ``nu = -d mu + m`` with ``m`` a random integral 2-cocycle, which is what
    condition (2) forces up to ``ker exp``.
    """
    from .mapping import hom_from_images

    phi = rng.choice(homs)
    h = random_element(rng, H, max_den)
    phi = hom_from_images(G, H, [H.conj(h, x) for x in phi.images])
    rep = representation_from_toral(H, phi.gamma)
    mu = Cochain(1, VECTOR, rep, {
        (g,): tuple(random_rational(rng, max_den) for _ in range(H.rank)) for g in range(1, G.order)
    })
    nu = -coboundary(mu)
    if H.rank and G.order > 1:
        basis = _integral_cocycle_basis(rep)
        if basis:
            vec = [0] * len(basis[0])
            for b in basis:
                k = rng.randint(-1, 1)
                vec = [x + k * y for x, y in zip(vec, b)]
            nu = nu + Cochain.from_vector(2, VECTOR, rep, vec)
    zeta = [H.mul(H.exp(mu(g) if g else H.zero_point), phi(g)) for g in G]
    return CocyclePair(G, H, tuple(zeta), dict(nu.values))


# -- batch checks used by the command line ---------------------------------------

def nerve_check(H, levels=5, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, max_den=DEFAULT_MAX_DENOMINATOR):
    """Exercise reconstruction, simplicial identities and matching on random simplices."""
    rng = random.Random(seed)
    results = {}

    def record(name, ok):
        passed, total = results.get(name, (0, 0))
        results[name] = (passed + bool(ok), total + 1)

    for n in range(1, levels + 1):
        for _ in range(samples):
            c = random_coordinates(rng, H, n, max_den)
            s = from_coordinates(c, H)
            record("invariants", s.is_valid())
            record("round_trip", project(s) == c and from_coordinates(project(s), H) == s)
            for k in range(n + 1):
                record("face_then_degeneracy", face(degeneracy(s, k), k) == s)
            for i in range(n + 1 if n >= 2 else 0):
                for j in range(i + 1, n + 1):
                    record("face_identity", face(face(s, j), i) == face(face(s, i), j - 1))
            faces = matching_tuple(s)
            record("matching_compatible", faces_compatible(faces)[0])
            if n >= 2:
                fiber = solve_matching(n, faces)
                if n == 2:
                    ok = len(fiber.fillers) == 1 and is_integral(
                        _sub(fiber.fillers[0].v[(0, 1, 2)], s.v[(0, 1, 2)])
                    )
                else:
                    ok = list(fiber.fillers) == [s]
                record(f"filler_level_{n}", ok)
    return {
        "target": H.name,
        "levels": levels,
        "samples": samples,
        "seed": seed,
        "checks": {k: {"passed": a, "total": b} for k, (a, b) in sorted(results.items())},
        "passed": all(a == b for a, b in results.values()),
    }


def retract_check(G, H, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, max_den=DEFAULT_MAX_DENOMINATOR,
                  times=(Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))):
    """Run ``K_t`` on random pairs and verify the retraction properties."""
    from .mapping import enumerate_hom_classes

    rng = random.Random(seed)
    homs = [c.representative for c in enumerate_hom_classes(G, H)]
    results = {}

    def record(name, ok):
        passed, total = results.get(name, (0, 0))
        results[name] = (passed + bool(ok), total + 1)

    for _ in range(samples):
        p = random_pair(rng, G, H, homs, max_den)
        gamma = validate_pair(p).gamma
        record("input_valid", gamma is not None)
        for t in times:
            q = retract(p, t, check=False)
            rep = validate_pair(q)
            record("stays_valid", rep.passed)
            record("component_constant", rep.gamma == gamma)
        record("K0_identity", retract(p, 0, check=False) == p)
        end = retract(p, 1, check=False)
        record("K1_in_E0", end.in_E0())
        e0 = retract(end, Fraction(1, 2), check=False)
        record("fixes_E0", e0 == end)
    return {
        "source": G.name,
        "target": H.name,
        "samples": samples,
        "seed": seed,
        "checks": {k: {"passed": a, "total": b} for k, (a, b) in sorted(results.items())},
        "passed": all(a == b for a, b in results.values()),
    }
