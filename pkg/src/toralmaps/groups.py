"""Finite groups as multiplication tables.

Elements are the integers ``0 .. order-1`` and the identity is always ``0``.
``table[a][b]`` is the index of the product ``a*b``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import (
    MixedSignature,
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotClosed,
    SizeLimitExceeded,
)

DEFAULT_HOM_CAP = 20_000
DEFAULT_SUBGROUP_CAP = 48
DEFAULT_GROUP_CAP = 5_000


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple
    labels: tuple | None = None
    name: str = ""

    @property
    def order(self):
        return len(self.table)

    @property
    def identity(self):
        return 0

    def __len__(self):
        return len(self.table)

    def __iter__(self):
        return iter(range(len(self.table)))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def mul(self, a, b):
        return self.table[a][b]

    @cached_property
    def _inverses(self):
        inv = [None] * self.order
        for a in self:
            row = self.table[a]
            for b in self:
                if row[b] == 0:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a):
        return self._inverses[a]

    def conj(self, p, x):
        """``p x p^-1``."""
        return self.table[self.table[p][x]][self._inverses[p]]

    def prod(self, elements):
        acc = 0
        for x in elements:
            acc = self.table[acc][x]
        return acc

    def power(self, a, k):
        acc = 0
        for _ in range(k):
            acc = self.table[acc][a]
        return acc

    def element_order(self, a):
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def exponent(self):
        from math import lcm

        e = 1
        for a in self:
            e = lcm(e, self.element_order(a))
        return e

    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in self for b in self)

    def label(self, a):
        return self.labels[a] if self.labels else str(a)

    @cached_property
    def generators(self):
        """Greedy generating set: scan elements in index order and keep
        each one not already in the span of the previous picks."""
        gens = []
        span = {0}
        for x in self:
            if x not in span:
                gens.append(x)
                span = set(closure(self, list(span) + [x]))
            if len(span) == self.order:
                break
        return tuple(gens)


def validate_group(table, labels=None, name=""):
    """Check the group axioms for a square index table and return a
    :class:`FiniteGroup`.  Raises on the first violated axiom, carrying a
    witness where one exists."""
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise NotClosed("empty table")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise NotClosed(f"row {i} has length {len(row)}, expected {n}", witness=(i,))
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                raise NotClosed(f"entry ({i},{j}) = {x!r} out of range", witness=(i, j))
    for x in range(n):
        if rows[0][x] != x or rows[x][0] != x:
            others = [e for e in range(n) if all(rows[e][y] == y == rows[y][e] for y in range(n))]
            hint = f"; element {others[0]} is an identity, relabel it to 0" if others else ""
            raise NoIdentity(f"0 is not a two-sided identity (fails at {x}){hint}", witness=x)
    for a, b, c in product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", witness=(a, b, c))
    for a in range(n):
        if not any(rows[a][b] == 0 and rows[b][a] == 0 for b in range(n)):
            raise NoInverse(f"element {a} has no two-sided inverse", witness=a)
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise NotClosed(f"{len(labels)} labels for a group of order {n}")
    return FiniteGroup(tuple(tuple(r) for r in rows), labels, name)


def closure(G, elements):
    """Subgroup generated by ``elements``, as a sorted list."""
    seen = {0}
    gens = [x for x in set(elements) if x != 0]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = G.table[x][s]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


# -- constructors -----------------------------------------------------------

def cyclic_group(n):
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)),
                       tuple(str(a) for a in range(n)), f"Z{n}")


def direct_product(G, H, name=None):
    n, m = G.order, H.order
    table = tuple(
        tuple(G.table[a // m][b // m] * m + H.table[a % m][b % m] for b in range(n * m))
        for a in range(n * m)
    )
    labels = tuple(f"({G.label(a // m)},{H.label(a % m)})" for a in range(n * m))
    return FiniteGroup(table, labels, name or f"{G.name}x{H.name}")


def group_from_permutations(generators, degree, name="", size_cap=DEFAULT_GROUP_CAP):
    """Materialize the subgroup of Sym(degree) generated by ``generators``.

    Permutations are image lists; the product ``p*q`` is ``p`` after ``q``,
    i.e. ``(p*q)(i) = p[q[i]]``.  Elements are numbered in BFS order from
    the identity so that the identity lands on index 0.
    """
    from .errors import ParseError

    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ParseError(f"{list(g)} is not a permutation of {degree} letters")
        gens.append(g)
    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(x[s[i]] for i in range(degree))
            if y not in index:
                if len(elements) >= size_cap:
                    raise SizeLimitExceeded(f"permutation group exceeds {size_cap} elements")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    table = tuple(
        tuple(index[tuple(p[q[i]] for i in range(degree))] for q in elements)
        for p in elements
    )
    labels = tuple(str(list(p)) for p in elements)
    return FiniteGroup(table, labels, name)


def symmetric_group(n):
    if n == 1:
        return FiniteGroup(((0,),), ("()",), "S1")
    cycle = list(range(1, n)) + [0]
    swap = [1, 0] + list(range(2, n))
    return group_from_permutations([swap, cycle], n, name=f"S{n}")


def dihedral_group(n):
    """Symmetries of the regular n-gon, order 2n."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return group_from_permutations([rot, ref], n, name=f"D{2 * n}")


def quaternion_group():
    # Q8 inside Sym(8) via its left regular action; elements +-1,+-i,+-j,+-k
    # indexed 1,i,j,k,-1,-i,-j,-k.
    def mul(a, b):
        qa, sa = a % 4, a // 4
        qb, sb = b % 4, b // 4
        table = {(0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
                 (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
                 (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
                 (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1)}
        q, s = table[qa, qb]
        return q + 4 * ((s + sa + sb) % 2)

    i_perm = [mul(1, x) for x in range(8)]
    j_perm = [mul(2, x) for x in range(8)]
    return group_from_permutations([i_perm, j_perm], 8, name="Q8")


def trivial_group():
    return FiniteGroup(((0,),), ("e",), "Z1")


# -- homomorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class FiniteHom:
    source: FiniteGroup = field(repr=False)
    target: FiniteGroup = field(repr=False)
    images: tuple

    def __call__(self, g):
        return self.images[g]

    def is_valid(self):
        S, T = self.source, self.target
        if self.images[0] != 0:
            return False
        return all(
            self.images[S.table[a][b]] == T.table[self.images[a]][self.images[b]]
            for a in S for b in S
        )

    def conjugate(self, p):
        """The homomorphism ``g -> p phi(g) p^-1``."""
        T = self.target
        return FiniteHom(self.source, T, tuple(T.conj(p, x) for x in self.images))


def make_hom(source, target, images):
    images = tuple(int(x) for x in images)
    if len(images) != source.order:
        raise NotAHomomorphism(f"expected {source.order} images, got {len(images)}")
    if images[0] != 0:
        raise NotAHomomorphism("identity not sent to identity", witness=(0,))
    for a in source:
        for b in source:
            if images[source.table[a][b]] != target.table[images[a]][images[b]]:
                raise NotAHomomorphism(f"fails multiplicativity at ({a},{b})", witness=(a, b))
    return FiniteHom(source, target, images)


def enumerate_finite_homs(G, P, size_cap=DEFAULT_HOM_CAP):
    """All homomorphisms ``G -> P``, sorted by image array.

    Backtracks over images of the greedy generators of ``G``, propagating
    each partial assignment through the subgroup it generates and pruning
    on the first inconsistency.
    """
    if G.order * P.order > size_cap:
        raise SizeLimitExceeded(f"|G|*|P| = {G.order * P.order} exceeds cap {size_cap}")
    gens = G.generators
    results = []

    def extend(partial, assigned):
        images = dict(partial)
        queue = deque(images)
        while queue:
            x = queue.popleft()
            for s in assigned:
                y = G.table[x][s]
                iy = P.table[images[x]][images[s]]
                if y in images:
                    if images[y] != iy:
                        return None
                else:
                    images[y] = iy
                    queue.append(y)
        return images

    def backtrack(k, partial):
        if k == len(gens):
            results.append(tuple(partial[g] for g in G))
            return
        s = gens[k]
        order_s = G.element_order(s)
        for target in P:
            # cheap necessary condition before propagation
            if order_s % P.element_order(target):
                continue
            trial = dict(partial)
            if s in trial and trial[s] != target:
                continue
            trial[s] = target
            extended = extend(trial, gens[: k + 1])
            if extended is not None:
                backtrack(k + 1, extended)

    backtrack(0, {0: 0})
    results = sorted(set(results))
    return [FiniteHom(G, P, im) for im in results]


@dataclass(frozen=True)
class HomOrbit:
    representative: FiniteHom
    members: tuple
    stabilizer: tuple


def conjugacy_orbits(P, homs):
    """Partition ``homs`` into orbits of conjugation by ``P``.

    The representative of an orbit is its lexicographically least image
    array and the stabilizer is that of the representative.
    """
    homs = list(homs)
    if not homs:
        return []
    src = homs[0].source
    for f in homs:
        if f.source != src or f.target != P:
            raise MixedSignature("homomorphisms do not share source and target")
    remaining = {f.images: f for f in homs}
    orbits = []
    for images in sorted(remaining):
        if images not in remaining:
            continue
        rep = remaining[images]
        orbit = {}
        stab = []
        for p in P:
            conj = tuple(P.conj(p, x) for x in images)
            orbit[conj] = True
            if conj == images:
                stab.append(p)
        members = tuple(sorted(orbit))
        for m in members:
            remaining.pop(m, None)
        orbits.append(HomOrbit(rep, tuple(FiniteHom(src, P, m) for m in members), tuple(stab)))
    return orbits


# -- subgroups ----------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupList:
    parent: FiniteGroup = field(repr=False)
    subgroups: tuple
    up_to_conjugacy: bool


def all_subgroups(G, up_to_conjugacy=False, size_cap=DEFAULT_SUBGROUP_CAP):
    """Every subgroup of ``G`` as a sorted tuple of element indices.

    Any subgroup is reached from the trivial one by repeatedly adjoining a
    single element and closing, so a search over that lattice is complete.
    Output is sorted by (order, elements).  With ``up_to_conjugacy`` only the
    least member of each conjugacy class is kept.
    """
    if G.order > size_cap:
        raise SizeLimitExceeded(f"|G| = {G.order} exceeds subgroup cap {size_cap}")
    found = {(0,)}
    queue = deque([(0,)])
    while queue:
        S = queue.popleft()
        members = set(S)
        for g in G:
            if g in members:
                continue
            T = tuple(closure(G, list(S) + [g]))
            if T not in found:
                found.add(T)
                queue.append(T)
    subs = sorted(found, key=lambda s: (len(s), s))
    if up_to_conjugacy:
        reps = []
        seen = set()
        for S in subs:
            if S in seen:
                continue
            cls = {tuple(sorted(G.conj(p, x) for x in S)) for p in G}
            seen |= cls
            reps.append(min(cls))
        subs = sorted(reps, key=lambda s: (len(s), s))
    return SubgroupList(G, tuple(subs), up_to_conjugacy)


def subgroup_as_group(G, elements, name=None):
    """Re-index a subgroup of ``G`` as a standalone group.

    Returns ``(K, embedding)`` where ``embedding[k]`` is the element of ``G``
    corresponding to element ``k`` of ``K``.
    """
    elements = sorted(set(elements))
    if elements[0] != 0:
        raise NotClosed("subgroup must contain the identity")
    pos = {x: i for i, x in enumerate(elements)}
    try:
        table = tuple(tuple(pos[G.table[a][b]] for b in elements) for a in elements)
    except KeyError as exc:
        raise NotClosed(f"{elements} is not closed under multiplication") from exc
    labels = tuple(G.label(x) for x in elements)
    K = FiniteGroup(table, labels, name or f"{G.name}<{len(elements)}>")
    return K, tuple(elements)


def abelian_invariants(G):
    """Invariant factors of an abelian group, e.g. ``[2, 2]`` for the Klein
    four-group; ``[]`` for the trivial group.

    For each prime p the number of cyclic p-power factors of order at least
    ``p^k`` is ``log_p |G[p^k]| - log_p |G[p^(k-1)]|``.
    """
    if not G.is_abelian():
        raise ValueError(f"{G!r} is not abelian")
    n = G.order
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    elementary = []
    for p in primes:
        logs = [0]
        k = 1
        while True:
            count = sum(1 for x in G if G.power(x, p ** k) == 0)
            e = 0
            while count > 1:
                count //= p
                e += 1
            logs.append(e)
            if e == logs[-2]:
                break
            k += 1
        # at_least[k] = number of cyclic factors of order >= p^k
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        for k, cnt in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            elementary += [p ** k] * (cnt - nxt)
    # combine elementary divisors into a divisibility chain
    by_prime = {}
    for q in elementary:
        p = next(p for p in primes if q % p == 0)
        by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    factors = []
    for i in range(length):
        f = 1
        for qs in by_prime.values():
            if i < len(qs):
                f *= qs[i]
        factors.append(f)
    return sorted(factors)
