"""Homomorphisms from a finite group into a toral group, up to conjugacy.

For ``gamma: G -> pi`` a lift ``g -> (t(g), gamma(g))`` is a homomorphism
exactly when ``dt = -gamma^*c`` in the twisted cochain complex of
``alpha o gamma``.  So ``gamma`` lifts iff the pulled-back cocycle is a
torus coboundary; the lifts then form a coset of ``Z^1(G, T)``, and
conjugation by torus elements moves within cosets of ``B^1``.  Conjugation
by ``(0, p)`` moves lifts of ``gamma`` to lifts of ``p gamma p^-1``.

Classes are identified by a canonical form: conjugate so that ``gamma`` is
the least member of its ``pi``-orbit, project the torus part onto a fixed
complement of ``B^1`` (Smith coordinates of the degree-0 coboundary), and
take the least result over the stabilizer of ``gamma``.  Two homomorphisms
are conjugate iff their canonical forms coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import groups
from .cochains import TORUS, Cochain, representation_from_toral, torus_class_vanishes, z1_torus_structure
from .errors import NotAHomomorphism, ObstructionSolverFailure, SignatureMismatch
from .groups import FiniteGroup, FiniteHom, abelian_invariants, all_subgroups, conjugacy_orbits
from .io import fraction_str, vector_json
from .linalg import mat_vec, reduce_mod1, smith_normal_form, torus_kernel, torus_solve
from .toral import ToralElement, ToralGroup, same_group

DEFAULT_TABLE_CAP = 256
HIGHER_HOMOTOPY_NOTE = (
    "each component is a classifying space BC of a 1-truncated group C, "
    "so homotopy groups above pi_2 vanish"
)


# -- homomorphisms ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ToralHom:
    """``g -> (t(g), gamma(g))``; ``torus_part[g]`` is the torus point ``t(g)``."""

    source: FiniteGroup = field(repr=False)
    target: ToralGroup = field(repr=False)
    gamma: FiniteHom
    torus_part: tuple

    def __call__(self, g):
        return ToralElement(self.torus_part[g], self.gamma(g), self.target)

    @property
    def images(self):
        return tuple(self(g) for g in self.source)

    def key(self):
        return (self.gamma.images, self.torus_part)

    def __eq__(self, other):
        return (
            isinstance(other, ToralHom)
            and self.source == other.source
            and same_group(self.target, other.target)
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = ", ".join(repr(x) for x in self.images)
        return f"ToralHom[{parts}]"

    def check(self):
        """``(True, None)`` or ``(False, (g1, g2))`` for a failing pair."""
        G, H = self.source, self.target
        if self.gamma.images[0] != 0 or any(self.torus_part[0]):
            return False, (0, 0)
        imgs = self.images
        for a in G:
            for b in G:
                if H.mul(imgs[a], imgs[b]) != imgs[G.mul(a, b)]:
                    return False, (a, b)
        return True, None

    def is_valid(self):
        return self.check()[0]

    def conjugate(self, h):
        """The homomorphism ``g -> h phi(g) h^-1``."""
        return hom_from_images(self.source, self.target, [self.target.conj(h, x) for x in self.images])

    def restrict(self, K, embedding):
        """Restriction along ``embedding: K -> source`` (a tuple of indices)."""
        return hom_from_images(K, self.target, [self(embedding[k]) for k in K])

    def to_json(self):
        return {
            "gamma": list(self.gamma.images),
            "torus_part": [vector_json(t) for t in self.torus_part],
        }


def hom_from_images(G, H, images, validate=False):
    images = list(images)
    if len(images) != G.order:
        raise NotAHomomorphism(f"expected {G.order} images, got {len(images)}")
    gamma = FiniteHom(G, H.pi, tuple(x.p for x in images))
    phi = ToralHom(G, H, gamma, tuple(reduce_mod1(x.t) for x in images))
    if validate:
        ok, witness = phi.check()
        if not ok:
            raise NotAHomomorphism(f"fails multiplicativity at {witness}", witness=witness)
    return phi


def make_toral_hom(G, H, images):
    """Validated homomorphism from a list of :class:`ToralElement` or ``(t, p)`` pairs."""
    elems = []
    for x in images:
        if isinstance(x, ToralElement):
            if not same_group(x.parent, H):
                raise SignatureMismatch("image does not lie in the target group")
            elems.append(x)
        else:
            t, p = x
            elems.append(H.element(t, p))
    return hom_from_images(G, H, elems, validate=True)


def trivial_hom(G, H):
    return hom_from_images(G, H, [H.identity] * G.order)


def _hom_from_cochain(gamma, H, t):
    G = gamma.source
    return ToralHom(G, H, gamma, tuple(t(g) if g else H.zero_point for g in G))


# -- torus linear algebra helpers -----------------------------------------------

def _commutator_rows(H, gamma):
    """Stacked ``I - alpha(gamma(g))`` over non-identity ``g``."""
    d = H.rank
    rows = []
    for g in range(1, gamma.source.order):
        A = H.alpha(gamma(g))
        rows += [[int(i == j) - A[i][j] for j in range(d)] for i in range(d)]
    return rows


@lru_cache(maxsize=None)
def _coset_projector(H, gamma_images, G):
    gamma = FiniteHom(G, H.pi, gamma_images)
    rows = _commutator_rows(H, gamma)
    snf = smith_normal_form(rows, H.rank)
    return snf


def _canonical_torus(H, gamma, torus_part):
    """Canonical point of ``torus_part + B^1`` for the action ``alpha o gamma``.

    With ``U D0 V = diag`` the coboundaries are, in ``U``-coordinates, the
    span of the first ``rank(D0)`` axes; zeroing those coordinates picks a
    point of the coset that depends only on the coset.
    """
    d, n = H.rank, gamma.source.order
    if d == 0 or n == 1:
        return torus_part
    snf = _coset_projector(H, gamma.images, gamma.source)
    x = [q for g in range(1, n) for q in torus_part[g]]
    w = mat_vec(snf.U, x)
    for i in range(snf.rank):
        w[i] = Fraction(0)
    w = reduce_mod1(w)
    y = reduce_mod1(mat_vec(snf.Uinv, w))
    out = [H.zero_point]
    for g in range(1, n):
        out.append(tuple(y[(g - 1) * d:g * d]))
    return tuple(out)


def canonical_form(phi):
    """The canonical representative of the conjugacy class of ``phi``."""
    H, P = phi.target, phi.target.pi
    conj = {p: phi.gamma.conjugate(p).images for p in P}
    least = min(conj.values())
    best = None
    for p in P:
        if conj[p] != least:
            continue
        psi = phi.conjugate(H.element(H.zero_point, p))
        cand = ToralHom(phi.source, H, psi.gamma, _canonical_torus(H, psi.gamma, psi.torus_part))
        if best is None or cand.key() < best.key():
            best = cand
    return best


# -- conjugacy --------------------------------------------------------------

def conjugacy_test(phi, psi):
    """An element ``h`` with ``h phi(g) h^-1 = psi(g)`` for all ``g``, or ``None``.

    For each ``p`` carrying ``gamma_phi`` to ``gamma_psi`` the remaining
    torus conjugator solves ``(I - alpha(gamma_psi(g))) s = t_psi(g) - t'(g)``
    mod ``Z^d``, decided by Smith normal form.
    """
    if phi.source != psi.source or not same_group(phi.target, psi.target):
        raise SignatureMismatch("homomorphisms have different source or target")
    H, P, G = phi.target, phi.target.pi, phi.source
    rows = _commutator_rows(H, psi.gamma)
    for p in P:
        if phi.gamma.conjugate(p).images != psi.gamma.images:
            continue
        cp = H.element(H.zero_point, p)
        moved = phi.conjugate(cp)
        rhs = [a - b for g in range(1, G.order) for a, b in zip(psi.torus_part[g], moved.torus_part[g])]
        s = torus_solve(rows, rhs, H.rank)
        if s is None:
            continue
        h = H.mul(H.element(s, 0), cp)
        if any(H.conj(h, phi(g)) != psi(g) for g in G):
            raise ObstructionSolverFailure("conjugator failed verification")
        return h
    return None


# -- centralizers ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CentralizerPresentation:
    """``C_H(phi)`` as identity-component data plus one element per component.

    ``torus_lattice`` is a ``d x r`` integer matrix whose columns span the
    sublattice fixed by every ``alpha(gamma(g))``.  ``component_reps[0]`` is
    the identity; ``component_group`` is the multiplication table of the
    component reps modulo the identity component (``None`` above the cap).
    """

    phi: ToralHom = field(repr=False)
    torus_rank: int
    torus_lattice: tuple
    component_reps: tuple
    component_group: FiniteGroup | None = field(repr=False)
    component_images: tuple = ()

    @property
    def component_group_order(self):
        return len(self.component_reps)

    @property
    def orbit_component_count(self):
        """Components of ``H / C``: ``|pi|`` over the image of ``pi_0(C)`` in ``pi``."""
        return self.phi.target.pi.order // len(self.component_images)

    def pi1_json(self):
        out = {"order": self.component_group_order}
        K = self.component_group
        if K is not None:
            abelian = K.is_abelian()
            out["abelian"] = abelian
            if abelian:
                inv = abelian_invariants(K)
                out["invariant_factors"] = inv
                out["structure"] = " x ".join(f"Z/{n}" for n in inv) or "0"
        return out

    def to_json(self):
        K = self.component_group
        return {
            "torus_rank": self.torus_rank,
            "torus_lattice": [list(r) for r in self.torus_lattice],
            "component_order": self.component_group_order,
            "component_reps": [{"t": vector_json(h.t), "p": h.p} for h in self.component_reps],
            "component_table": [list(r) for r in K.table] if K is not None else None,
        }


def centralizer(phi, table_cap=DEFAULT_TABLE_CAP):
    H, G, P = phi.target, phi.source, phi.target.pi
    d = H.rank
    rows = _commutator_rows(H, phi.gamma)
    K = torus_kernel(rows, d)
    lattice = tuple(tuple(K.lattice[j][i] for j in range(K.dimension)) for i in range(d))
    finite = K.component_representatives()
    qs = [phi.gamma(g) for g in range(1, G.order)]
    valid = []
    for p in P:
        if any(P.mul(p, q) != P.mul(q, p) for q in qs):
            continue
        rhs = []
        for g, q in zip(range(1, G.order), qs):
            t = phi.torus_part[g]
            rhs += [
                a - b + c - e
                for a, b, c, e in zip(t, H.act(p, t), H.c(q, p), H.c(p, q))
            ]
        u = torus_solve(rows, rhs, d)
        if u is not None:
            valid.append((p, u))
    reps = [H.element([a + b for a, b in zip(u, f)], p) for p, u in valid for f in finite]
    images = phi.images
    for h in reps:
        if any(not H.commutes(h, x) for x in images):
            raise ObstructionSolverFailure(f"centralizer element {h} does not commute")
    table = None
    if len(reps) <= table_cap:
        base = dict(valid)

        def key(h):
            return (h.p, K.component_key([a - b for a, b in zip(h.t, base[h.p])]))

        index = {key(h): i for i, h in enumerate(reps)}
        if len(index) != len(reps):
            raise ObstructionSolverFailure("centralizer component reps collide")
        rows_ = tuple(tuple(index[key(H.mul(a, b))] for b in reps) for a in reps)
        table = FiniteGroup(rows_, tuple(repr(h) for h in reps), "pi0(C)")
    return CentralizerPresentation(phi, K.dimension, lattice, tuple(reps), table, tuple(p for p, _ in valid))


# -- classes and reports -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HomClass:
    representative: ToralHom
    centralizer: CentralizerPresentation

    @property
    def orbit_component_count(self):
        return self.centralizer.orbit_component_count

    @property
    def pi2_rank(self):
        return self.centralizer.torus_rank

    def to_json(self):
        rep = self.representative.to_json()
        d = self.representative.target.rank
        return {
            "gamma": rep["gamma"],
            "torus_part": rep["torus_part"],
            "centralizer": self.centralizer.to_json(),
            "pi1": self.centralizer.pi1_json(),
            "pi2_rank": self.pi2_rank,
            "orbit_component_count": self.orbit_component_count,
            "orbit_dimension": d - self.centralizer.torus_rank,
        }


def enumerate_hom_classes(G, H, size_cap=groups.DEFAULT_HOM_CAP):
    """All conjugacy classes of homomorphisms ``G -> H``, sorted by representative."""
    found = {}
    homs = groups.enumerate_finite_homs(G, H.pi, size_cap)
    for orbit in conjugacy_orbits(H.pi, homs):
        gamma = orbit.representative
        rep = representation_from_toral(H, gamma)
        pulled = Cochain(2, TORUS, rep, {
            (a, b): H.c(gamma(a), gamma(b)) for a in range(1, G.order) for b in range(1, G.order)
        })
        ok, mu = torus_class_vanishes(-pulled)
        if not ok:
            continue
        for z in z1_torus_structure(rep).representatives:
            phi = _hom_from_cochain(gamma, H, mu + z)
            ok, witness = phi.check()
            if not ok:
                raise ObstructionSolverFailure(f"lift over {gamma.images} fails at {witness}")
            cf = canonical_form(phi)
            found.setdefault(cf.key(), cf)
    return [HomClass(found[k], centralizer(found[k])) for k in sorted(found)]


def classify(phi, classes):
    """Index of the class containing ``phi``, or ``None``."""
    key = canonical_form(phi).key()
    for i, cls in enumerate(classes):
        if cls.representative.key() == key:
            return i
    return None


@dataclass(frozen=True, eq=False)
class MappingSpaceReport:
    source: FiniteGroup = field(repr=False)
    target: ToralGroup = field(repr=False)
    classes: tuple

    @property
    def unbased_components(self):
        return len(self.classes)

    @property
    def based_components(self):
        return sum(c.orbit_component_count for c in self.classes)

    def to_json(self):
        return {
            "source": {"name": self.source.name, "order": self.source.order},
            "target": {
                "name": self.target.name,
                "rank": self.target.rank,
                "components": self.target.pi.order,
            },
            "classes": [c.to_json() for c in self.classes],
            "unbased_components": self.unbased_components,
            "based_components": self.based_components,
            "note": HIGHER_HOMOTOPY_NOTE,
        }

    def summary(self):
        """Class invariants in report order, for diffing against other enumerations."""
        return [
            (c.representative.key(), c.centralizer.torus_rank, c.centralizer.component_group_order,
             c.orbit_component_count)
            for c in self.classes
        ]


def mapping_space_report(G, H, size_cap=groups.DEFAULT_HOM_CAP):
    return MappingSpaceReport(G, H, tuple(enumerate_hom_classes(G, H, size_cap)))


@dataclass(frozen=True, eq=False)
class FixedPointEntry:
    elements: tuple
    subgroup: FiniteGroup = field(repr=False)
    embedding: tuple = field(repr=False)
    report: MappingSpaceReport = field(repr=False)


@dataclass(frozen=True, eq=False)
class FixedPointReport:
    source: FiniteGroup = field(repr=False)
    target: ToralGroup = field(repr=False)
    entries: tuple

    def entry(self, elements):
        for e in self.entries:
            if e.elements == tuple(elements):
                return e
        raise KeyError(elements)

    def to_json(self):
        return {
            "source": {"name": self.source.name, "order": self.source.order},
            "target": {"name": self.target.name, "rank": self.target.rank},
            "subgroups": [
                {
                    "elements": list(e.elements),
                    "order": len(e.elements),
                    "components": e.report.unbased_components,
                    "report": e.report.to_json(),
                }
                for e in self.entries
            ],
        }


def fixed_points_report(G, H, size_cap=groups.DEFAULT_HOM_CAP):
    """One mapping-space report per conjugacy class of subgroups of ``G``."""
    entries = []
    for S in all_subgroups(G, up_to_conjugacy=True).subgroups:
        K, emb = groups.subgroup_as_group(G, S)
        entries.append(FixedPointEntry(tuple(S), K, emb, mapping_space_report(K, H, size_cap)))
    return FixedPointReport(G, H, tuple(entries))


def report_text(report):
    """Short human-readable rendering of a :class:`MappingSpaceReport`."""
    lines = [
        f"Map(B{report.source.name}, B{report.target.name}): "
        f"{report.unbased_components} components ({report.based_components} based)"
    ]
    for i, c in enumerate(report.classes):
        rep = c.representative
        imgs = ", ".join(
            f"{g}->({','.join(fraction_str(x) for x in rep.torus_part[g])}|{rep.gamma(g)})"
            for g in rep.source
        )
        pi1 = c.centralizer.pi1_json()
        pi1s = pi1.get("structure", f"order {pi1['order']}")
        lines.append(
            f"  [{i}] {imgs}; pi1 = {pi1s}; pi2 = Z^{c.pi2_rank}; "
            f"based orbit components = {c.orbit_component_count}"
        )
    return "\n".join(lines) + "\n"
