"""Brute-force cross-check for the homomorphism classification.

Nothing here uses cochains or Smith normal form.  Homomorphisms are found
by trying every assignment of torsion points to the generators of ``G``,
classes by applying every conjugator from a finer torsion grid, and
centralizers by counting commuting grid points at two resolutions: a
closed subgroup with ``m`` components and an ``r``-dimensional identity
component has ``m L^r`` points of denominator dividing ``L`` (once ``L`` is
fine enough for every component to meet the grid), so the count at ``L``
and ``2L`` gives both ``r`` and ``m``.

The grid denominator is ``L = lcm(N, exp G)`` rather than ``N`` itself, so
that torsion forced by the source group (order-3 rotations for ``Z/3``,
say) is always representable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm

from .errors import SizeLimitExceeded
from .io import vector_json
from .toral import ToralElement

DEFAULT_DENOMINATOR = 16
DEFAULT_HARD_CAP = 2_000_000


def grid_denominator(G, H, N):
    den = 1
    for v in H.cocycle_table.values():
        for x in v:
            den = lcm(den, x.denominator)
    return lcm(N, G.exponent, den)


def _grid(H, L, cap):
    size = L ** H.rank * H.pi.order
    if size > cap:
        raise SizeLimitExceeded(f"torsion grid has {size} points, cap is {cap}")
    return H.torsion_grid(L)


def _power(H, x, k):
    acc = H.identity
    for _ in range(k):
        acc = H.mul(acc, x)
    return acc


def _in_grid(x, L):
    return all((q * L).denominator == 1 for q in x.t)


def brute_force_homs(G, H, L, cap=DEFAULT_HARD_CAP):
    """All homomorphisms ``G -> H`` whose values have denominators dividing ``L``.

    Each is returned as the tuple of its values on every element of ``G``.
    """
    grid = _grid(H, L, cap)
    gens = G.generators
    candidates = []
    for s in gens:
        k = G.element_order(s)
        candidates.append([x for x in grid if _power(H, x, k) == H.identity])
    space = 1
    for c in candidates:
        space *= len(c)
    if space > cap:
        raise SizeLimitExceeded(f"{space} generator assignments, cap is {cap}")
    found = []
    for assignment in product(*candidates):
        images = {0: H.identity}
        for s, x in zip(gens, assignment):
            images[s] = x
        consistent = True
        queue = deque(images)
        while queue and consistent:
            a = queue.popleft()
            for s in gens:
                b = G.mul(a, s)
                value = H.mul(images[a], images[s])
                if b in images:
                    if images[b] != value:
                        consistent = False
                        break
                else:
                    images[b] = value
                    queue.append(b)
        if not consistent or len(images) != G.order:
            continue
        values = tuple(images[g] for g in G)
        if all(_in_grid(x, L) for x in values):
            found.append(values)
    return sorted(set(found), key=lambda vs: tuple(x.sort_key() for x in vs))


def _conjugate_values(H, h, values):
    hinv = H.inv(h)
    return tuple(H.mul(H.mul(h, x), hinv) for x in values)


def brute_force_classes(G, H, homs, M, cap=DEFAULT_HARD_CAP):
    """Partition ``homs`` by conjugation with every element of the ``1/M`` grid."""
    conjugators = _grid(H, M, cap)
    if len(conjugators) * max(1, len(homs)) > cap * 8:
        raise SizeLimitExceeded("conjugation search exceeds the hard cap")
    remaining = set(homs)
    classes = []
    for phi in homs:
        if phi not in remaining:
            continue
        orbit = {phi}
        for h in conjugators:
            psi = _conjugate_values(H, h, phi)
            if psi in remaining:
                orbit.add(psi)
        remaining -= orbit
        classes.append(sorted(orbit, key=lambda vs: tuple(x.sort_key() for x in vs)))
    return classes


def centralizer_counts(H, values, L, cap=DEFAULT_HARD_CAP):
    """Number of ``1/L`` grid points commuting with every value, per component."""
    counts = [0] * H.pi.order
    for h in _grid(H, L, cap):
        if all(H.commutes(h, x) for x in values):
            counts[h.p] += 1
    return counts


@dataclass(frozen=True)
class OracleClass:
    representative: tuple
    size_in_grid: int
    torus_rank: int
    component_order: int
    orbit_component_count: int


@dataclass(frozen=True, eq=False)
class OracleReport:
    source: object = field(repr=False)
    target: object = field(repr=False)
    denominator: int
    grid_denominator: int
    conjugator_denominator: int
    homs_found: int
    classes: tuple

    @property
    def unbased_components(self):
        return len(self.classes)

    @property
    def based_components(self):
        return sum(c.orbit_component_count for c in self.classes)

    def canonical_classes(self):
        """``(canonical representative, torus rank, component order, orbit count)``
        per class, sorted by canonical key, for diffing against ``hom``."""
        from .mapping import canonical_form, hom_from_images

        out = []
        for c in self.classes:
            phi = canonical_form(hom_from_images(self.source, self.target, c.representative))
            out.append((phi, c.torus_rank, c.component_order, c.orbit_component_count))
        return sorted(out, key=lambda row: row[0].key())

    def summary(self):
        return [(phi.key(), r, m, k) for phi, r, m, k in self.canonical_classes()]

    def to_json(self):
        classes = []
        for phi, r, m, k in self.canonical_classes():
            classes.append({
                "gamma": list(phi.gamma.images),
                "torus_part": [vector_json(t) for t in phi.torus_part],
                "centralizer": {"torus_rank": r, "component_order": m, "component_table": None},
                "pi1": {"order": m},
                "pi2_rank": r,
                "orbit_component_count": k,
            })
        return {
            "source": {"name": self.source.name, "order": self.source.order},
            "target": {"name": self.target.name, "rank": self.target.rank,
                       "components": self.target.pi.order},
            "classes": classes,
            "unbased_components": self.unbased_components,
            "based_components": self.based_components,
            "oracle": {
                "denominator": self.denominator,
                "grid_denominator": self.grid_denominator,
                "conjugator_denominator": self.conjugator_denominator,
                "homs_found": self.homs_found,
            },
        }


def _rank_and_components(H, values, L, cap):
    low = centralizer_counts(H, values, L, cap)
    high = centralizer_counts(H, values, 2 * L, cap)
    ratio = Fraction(sum(high), sum(low))
    r = 0
    while 2 ** r < ratio:
        r += 1
    if 2 ** r != ratio:
        raise SizeLimitExceeded(
            f"centralizer counts {sum(low)} -> {sum(high)} are not in ratio 2^r; grid too coarse"
        )
    m = Fraction(sum(low), L ** r)
    if m.denominator != 1:
        raise SizeLimitExceeded("centralizer count is not a multiple of L^r; grid too coarse")
    meets = sum(1 for n in low if n)
    return r, int(m), H.pi.order // meets


def oracle_report(G, H, N=DEFAULT_DENOMINATOR, cap=DEFAULT_HARD_CAP):
    L = grid_denominator(G, H, N)
    M = 2 * G.order * L
    homs = brute_force_homs(G, H, L, cap)
    classes = []
    for members in brute_force_classes(G, H, homs, M, cap):
        rep = members[0]
        r, m, k = _rank_and_components(H, rep, L, cap)
        classes.append(OracleClass(rep, len(members), r, m, k))
    return OracleReport(G, H, N, L, M, len(homs), tuple(classes))


def hom_values(phi):
    """Values of a :class:`~toralmaps.mapping.ToralHom` as a tuple of elements."""
    return tuple(ToralElement(phi.torus_part[g], phi.gamma(g), phi.target) for g in phi.source)
