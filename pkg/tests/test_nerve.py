import random
from fractions import Fraction as F
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from toralmaps.errors import DomainError, IncompatibleFaces, InvalidPair, NotMonotone
from toralmaps.linalg import is_integral
from toralmaps.mapping import enumerate_hom_classes
from toralmaps.nerve import (
    NerveCoordinates,
    NerveSimplex,
    degeneracy,
    degeneracy_map,
    degenerate_locus,
    face,
    face_map,
    faces_compatible,
    from_coordinates,
    group_nerve_degeneracy,
    group_nerve_face,
    make_pair,
    matching_tuple,
    nerve_check,
    pair_to_simplex,
    project,
    random_coordinates,
    random_pair,
    random_simplex,
    retract,
    retract_check,
    simplicial_operator,
    solve_matching,
    validate_pair,
)
from toralmaps.toral import finite_catalog, toral_catalog

O2, PIN2, U1, T2Z2 = (toral_catalog(n) for n in ("O2", "Pin2", "U1", "T2xZ2"))
TARGETS = [O2, PIN2, T2Z2, U1]
Z2 = finite_catalog("Z2")
seeds = st.integers(0, 10 ** 6)


def vec(*xs):
    return tuple(F(x) for x in xs)


def modified(s, **changes):
    """Copy of ``s`` with some v-values replaced, keyed like ``v012=(..)``."""
    v = dict(s.v)
    for key, val in changes.items():
        v[tuple(int(c) for c in key[1:])] = tuple(F(x) for x in val)
    return NerveSimplex(s.level, s.parent, dict(s.h), v)


# -- reconstruction -----------------------------------------------------------------

@pytest.mark.parametrize("H", TARGETS, ids=lambda H: H.name)
def test_zero_coordinates_give_the_constant_simplex(H):
    for n in range(4):
        c = NerveCoordinates(n, (H.identity,) * n, tuple(((i, j), H.zero_point) for i, j in combinations(range(1, n + 1), 2)))
        s = from_coordinates(c, H)
        assert s.is_valid()
        assert set(s.h.values()) <= {H.identity}
        assert set(s.v.values()) <= {H.zero_point}


@pytest.mark.parametrize("H", TARGETS, ids=lambda H: H.name)
@settings(max_examples=30)
@given(seed=seeds, n=st.integers(1, 4))
def test_round_trip(H, seed, n):
    c = random_coordinates(random.Random(seed), H, n)
    s = from_coordinates(c, H)
    assert s.is_valid()
    assert project(s) == c
    assert from_coordinates(project(s), H) == s


def test_exhaustive_round_trip_on_a_small_grid():
    elements = O2.torsion_grid(2)
    values = [vec(x) for x in (-1, F(-1, 2), 0, F(1, 2), 1)]
    count = 0
    for n in (1, 2):
        pairs = list(combinations(range(1, n + 1), 2))
        for h0 in product(elements, repeat=n):
            for vs in product(values, repeat=len(pairs)):
                c = NerveCoordinates(n, h0, tuple(zip(pairs, vs)))
                s = from_coordinates(c, O2)
                assert s.is_valid() and project(s) == c
                count += 1
    assert count == 4 + 16 * 5


def test_level_two_formulas():
    # h_12 = h_01^-1 exp(v_012)^-1 h_02 and v_012 is the free coordinate itself
    h01, h02 = O2.element(vec(F(1, 3)), 1), O2.element(vec(F(1, 5)), 0)
    c = NerveCoordinates(2, (h01, h02), (((1, 2), vec(F(7, 4))),))
    s = from_coordinates(c, O2)
    assert s.v[(0, 1, 2)] == vec(F(7, 4))
    assert s.h[(1, 2)] == O2.mul(O2.mul(O2.inv(h01), O2.inv(O2.exp(vec(F(7, 4))))), h02)


# -- simplicial operators ---------------------------------------------------------

def test_operator_maps():
    assert face_map(3, 1) == (0, 2, 3)
    assert face_map(2, 2) == (0, 1)
    assert degeneracy_map(2, 1) == (0, 1, 1, 2)
    assert degeneracy_map(0, 0) == (0, 0)


def test_non_monotone_operators_are_rejected():
    s = random_simplex(random.Random(1), O2, 2)
    for delta in ([1, 0], [0, 3], [-1, 0], []):
        with pytest.raises(NotMonotone):
            simplicial_operator(s, delta)


def test_identity_operator_and_vertices():
    s = random_simplex(random.Random(2), T2Z2, 3)
    assert simplicial_operator(s, range(4)) == s
    assert simplicial_operator(s, [2, 2]).h[(0, 1)] == T2Z2.identity


@pytest.mark.parametrize("H", [O2, T2Z2], ids=lambda H: H.name)
@settings(max_examples=15)
@given(seed=seeds, n=st.integers(1, 4))
def test_simplicial_identities(H, seed, n):
    s = random_simplex(random.Random(seed), H, n)
    for i, j in product(range(n + 1), repeat=2):
        if i < j and n >= 2:
            assert face(face(s, j), i) == face(face(s, i), j - 1)
    for i, j in product(range(n + 2), range(n + 1)):
        lhs = face(degeneracy(s, j), i)
        if i < j:
            assert lhs == degeneracy(face(s, i), j - 1)
        elif i in (j, j + 1):
            assert lhs == s
        else:
            assert lhs == degeneracy(face(s, i - 1), j)
    for i, j in product(range(n + 1), repeat=2):
        if i <= j:
            assert degeneracy(degeneracy(s, j), i) == degeneracy(degeneracy(s, i), j + 1)


# -- matching --------------------------------------------------------------------

def test_level_one_matching_is_a_pair_of_points():
    s = random_simplex(random.Random(3), O2, 1)
    faces = matching_tuple(s)
    assert [f.level for f in faces] == [0, 0]
    assert faces_compatible(faces) == (True, None)
    with pytest.raises(DomainError):
        solve_matching(1, faces)


@pytest.mark.parametrize("H", TARGETS, ids=lambda H: H.name)
@settings(max_examples=20)
@given(seed=seeds)
def test_level_two_fiber_is_an_integer_torsor(H, seed):
    s = random_simplex(random.Random(seed), H, 2)
    fiber = solve_matching(2, matching_tuple(s))
    (f,) = fiber.fillers
    assert f.is_valid()
    assert all(0 <= x < 1 for x in f.v[(0, 1, 2)])
    assert is_integral([a - b for a, b in zip(f.v[(0, 1, 2)], s.v[(0, 1, 2)])])
    assert len(fiber.lattice) == H.rank
    # every integer shift of the free coordinate is another filler
    shifted = modified(s, v012=[x + 3 for x in s.v[(0, 1, 2)]])
    assert shifted.is_valid()
    assert matching_tuple(shifted) == matching_tuple(s)


def test_level_two_fiber_empty_off_identity_component():
    def edge(h):
        return from_coordinates(NerveCoordinates(1, (h,), ()), O2)

    sigma = O2.element(vec(0), 1)
    faces = [edge(O2.identity), edge(O2.identity), edge(sigma)]  # h12, h02, h01
    fiber = solve_matching(2, faces)
    assert fiber.fillers == () and fiber.reason


@pytest.mark.parametrize("H", TARGETS, ids=lambda H: H.name)
@settings(max_examples=20)
@given(seed=seeds)
def test_level_three_real_simplices_have_exactly_themselves(H, seed):
    s = random_simplex(random.Random(seed), H, 3)
    fiber = solve_matching(3, matching_tuple(s))
    assert fiber.fillers == (s,)
    assert not any(fiber.pi_expression)


def test_level_three_integer_shift_obstructs():
    s = random_simplex(random.Random(4), T2Z2, 3)
    faces = matching_tuple(s)
    # face 2 sees v_013 as its v_012; shifting by an integer keeps it a simplex
    f2 = modified(faces[2], v012=[a + b for a, b in zip(faces[2].v[(0, 1, 2)], (2, -1))])
    assert f2.is_valid()
    faces[2] = f2
    assert faces_compatible(faces)[0]
    fiber = solve_matching(3, faces)
    assert fiber.fillers == ()
    assert fiber.pi_expression == vec(-2, 1)


def test_level_three_non_integral_expression():
    s = random_simplex(random.Random(5), T2Z2, 3)
    faces = matching_tuple(s)
    faces[2] = modified(faces[2], v012=[a + b for a, b in zip(faces[2].v[(0, 1, 2)], (F(-1, 3), 0))])
    fiber = solve_matching(3, faces)
    assert fiber.fillers == ()
    assert fiber.pi_expression == vec(F(1, 3), 0)
    assert "not integral" in fiber.reason


@pytest.mark.parametrize("n", [4, 5])
@pytest.mark.parametrize("H", [O2, T2Z2, PIN2], ids=lambda H: H.name)
def test_high_levels_have_unique_fillers(H, n):
    rng = random.Random(n)
    for _ in range(5):
        s = random_simplex(rng, H, n)
        assert solve_matching(n, matching_tuple(s)).fillers == (s,)


def test_incompatible_faces_raise():
    rng = random.Random(6)
    a, b = random_simplex(rng, O2, 3), random_simplex(rng, O2, 3)
    faces = matching_tuple(a)
    faces[1] = face(b, 1)
    with pytest.raises(IncompatibleFaces):
        solve_matching(3, faces)
    with pytest.raises(IncompatibleFaces):
        solve_matching(3, matching_tuple(a)[:3])


# -- the nerve of a finite group ---------------------------------------------------

@pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
def test_degenerate_locus_is_where_some_entry_is_trivial(name):
    G = finite_catalog(name)
    for n in range(4):
        expected = {gs for gs in product(range(G.order), repeat=n) if 0 in gs}
        assert degenerate_locus(G, n) == expected


def test_group_nerve_operators():
    G = finite_catalog("S3")
    gs = (1, 2, 3)
    assert group_nerve_face(G, gs, 0) == (2, 3)
    assert group_nerve_face(G, gs, 3) == (1, 2)
    assert group_nerve_face(G, gs, 1) == (G.mul(1, 2), 3)
    assert group_nerve_degeneracy(gs, 1) == (1, 0, 2, 3)


# -- cocycle pairs ------------------------------------------------------------------

def homs_of(G, H):
    return [c.representative for c in enumerate_hom_classes(G, H)]


def test_homomorphisms_are_pairs_in_E0():
    for phi in homs_of(Z2, O2):
        p = make_pair(Z2, O2, phi.images, {})
        assert validate_pair(p).passed and p.in_E0()


def test_pair_violations_have_witnesses():
    sigma = O2.element(vec(F(1, 8)), 1)
    good = make_pair(Z2, O2, [O2.identity, sigma], {})
    assert validate_pair(good).passed
    bad_unit = make_pair(Z2, O2, [O2.identity, sigma], {(0, 1): vec(1)})
    assert validate_pair(bad_unit).conditions[1] is not None
    bad_mult = make_pair(Z2, O2, [O2.identity, O2.element(vec(F(1, 8)), 0)], {})
    assert validate_pair(bad_mult).conditions[2] == (1, 1)
    # an integer nu keeps the product rule but breaks the twisted cocycle identity
    bad_cocycle = make_pair(Z2, O2, [O2.identity, sigma], {(1, 1): vec(1)})
    report = validate_pair(bad_cocycle)
    assert report.conditions[2] is None and report.conditions[3] == (1, 1, 1)
    with pytest.raises(InvalidPair):
        pair_to_simplex(bad_cocycle, (1,))
    with pytest.raises(InvalidPair):
        retract(bad_mult, 1)


@pytest.mark.parametrize("src,H", [("Z2", O2), ("V4", T2Z2), ("S3", O2), ("Z4", PIN2)], ids=lambda x: getattr(x, "name", x))
@settings(max_examples=10)
@given(seed=seeds)
def test_pairs_give_natural_simplices(src, H, seed):
    G = finite_catalog(src)
    rng = random.Random(seed)
    p = random_pair(rng, G, H, homs_of(G, H))
    assert validate_pair(p).passed
    for n in range(4):
        gs = tuple(rng.randrange(G.order) for _ in range(n))
        s = pair_to_simplex(p, gs)
        assert s.is_valid()
        for i in range(n + 1 if n else 0):
            assert face(s, i) == pair_to_simplex(p, group_nerve_face(G, gs, i))
        for i in range(n + 1):
            assert degeneracy(s, i) == pair_to_simplex(p, group_nerve_degeneracy(gs, i))


@pytest.mark.parametrize("src,H", [("Z2", O2), ("V4", T2Z2), ("S3", O2), ("Z4", PIN2), ("Z3", U1)], ids=lambda x: getattr(x, "name", x))
@settings(max_examples=10)
@given(seed=seeds)
def test_retraction_properties(src, H, seed):
    G = finite_catalog(src)
    p = random_pair(random.Random(seed), G, H, homs_of(G, H))
    gamma = validate_pair(p).gamma
    assert retract(p, 0) == p
    for t in (F(1, 4), F(2, 3)):
        q = retract(p, t)
        assert validate_pair(q).gamma == gamma
    end = retract(p, 1)
    assert end.in_E0() and validate_pair(end).gamma == gamma
    assert retract(end, F(1, 2)) == end


def test_retraction_parameter_range():
    p = make_pair(Z2, O2, [O2.identity, O2.identity], {})
    with pytest.raises(DomainError):
        retract(p, F(3, 2))


def test_reflection_pair_is_already_a_homomorphism():
    # in O(2) the cocycle identity forces nu(s, s) = -nu(s, s), so nu = 0
    p = make_pair(Z2, O2, [O2.identity, O2.element(vec(F(1, 8)), 1)], {})
    assert validate_pair(p).passed and p.in_E0()
    assert retract(p, 1) == p


def test_circle_hand_example():
    # zeta(s) = 1/8 with nu(s, s) = -1/4; the average is -1/8, so K_1 is trivial
    p = make_pair(Z2, U1, [U1.identity, U1.element(vec(F(1, 8)))], {(1, 1): vec(F(-1, 4))})
    assert validate_pair(p).passed
    half = retract(p, F(1, 2))
    assert half.zeta[1] == U1.element(vec(F(1, 16)))
    assert half.nu_at(1, 1) == vec(F(-1, 8))
    end = retract(p, 1)
    assert end.zeta == (U1.identity, U1.identity) and end.in_E0()


def test_batch_checks_pass():
    assert nerve_check(O2, levels=4, samples=8, seed=3)["passed"]
    report = retract_check(finite_catalog("V4"), T2Z2, samples=10, seed=3)
    assert report["passed"] and report["checks"]["K1_in_E0"]["total"] == 10
