from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from toralmaps import groups
from toralmaps.cochains import (
    LATTICE,
    TORUS,
    VECTOR,
    Cochain,
    Representation,
    coboundary,
    coboundary_matrix,
    cohomology_lattice,
    contracting_homotopy,
    is_cocycle,
    torus_class_vanishes,
    torus_cobound_degree1,
    trivial_representation,
    z1_torus_structure,
    zero_cochain,
)
from toralmaps.errors import NotACocycle, WrongCoefficients
from toralmaps.linalg import AbelianGroupStructure, mat_vec
from toralmaps.toral import finite_catalog

Z2 = groups.cyclic_group(2)
SIGN = Representation(Z2, 1, (((1,),), ((-1,),)))
TRIV = trivial_representation(Z2)

fracs = st.fractions(min_value=-2, max_value=2, max_denominator=8)


def reps():
    out = []
    for name in ("Z2", "Z3", "Z4", "V4", "S3"):
        G = finite_catalog(name)
        out.append(trivial_representation(G))
        out.append(trivial_representation(G, 2))
    out.append(SIGN)
    return out


def random_cochain(data, rep, degree, kind=VECTOR):
    G = rep.group
    values = {}
    for key in rep.basis(degree):
        values[key] = tuple(data.draw(fracs) for _ in range(rep.rank))
    return Cochain(degree, kind, rep, values)


def test_zero_coboundary():
    assert coboundary(zero_cochain(1, VECTOR, SIGN)).is_zero()


def test_degree0_convention_matches_conjugation_shift():
    # O(2)-type action: dt(sigma) = t - (-t) = 2t
    t = Cochain(0, TORUS, SIGN, {(): (F(1, 8),)})
    assert coboundary(t)(1) == (F(1, 4),)


def test_degree1_constant():
    mu = Cochain(1, VECTOR, TRIV, {(1,): (F(3, 7),)})
    assert coboundary(mu)(1, 1) == (F(6, 7),)


@pytest.mark.parametrize("rep", reps(), ids=lambda r: f"{r.group.name}-{r.rank}")
@settings(max_examples=15)
@given(data=st.data())
def test_d_squared_is_zero(rep, data):
    for n in (0, 1, 2):
        c = random_cochain(data, rep, n)
        assert coboundary(coboundary(c)).is_zero()


@pytest.mark.parametrize("rep", reps(), ids=lambda r: f"{r.group.name}-{r.rank}")
def test_matrix_matches_formula(rep):
    for n in (0, 1, 2):
        D, rows, cols = coboundary_matrix(rep, n)
        for j in range(cols):
            e = [0] * cols
            e[j] = 1
            c = Cochain.from_vector(n, VECTOR, rep, e)
            assert coboundary(c).to_vector() == [F(x) for x in mat_vec(D, e)]


def test_is_cocycle_examples():
    assert is_cocycle(coboundary(Cochain(1, TORUS, SIGN, {(1,): (F(1, 3),)})))[0]
    pin = Cochain(2, TORUS, SIGN, {(1, 1): (F(1, 2),)})
    assert is_cocycle(pin) == (True, None)
    G = finite_catalog("Z3")
    rep = trivial_representation(G)
    nu = coboundary(Cochain(1, VECTOR, rep, {(1,): (F(1, 5),), (2,): (F(2, 3),)}))
    bad = Cochain(2, VECTOR, rep, {**nu.values, (1, 2): tuple(x + F(1, 7) for x in nu(1, 2))})
    ok, witness = is_cocycle(bad)
    assert not ok and len(witness) == 3


def test_homotopy_example():
    q = F(5, 3)
    nu = Cochain(2, VECTOR, TRIV, {(1, 1): (q,)})
    H = contracting_homotopy(nu)
    assert H(1) == (q / 2,)
    assert coboundary(H) == nu


def test_homotopy_of_zero():
    assert contracting_homotopy(zero_cochain(2, VECTOR, SIGN)).is_zero()


def test_homotopy_needs_vector_coefficients():
    with pytest.raises(WrongCoefficients):
        contracting_homotopy(zero_cochain(2, TORUS, SIGN))


@pytest.mark.parametrize("rep", reps(), ids=lambda r: f"{r.group.name}-{r.rank}")
@given(data=st.data())
def test_homotopy_cobounds_coboundaries(rep, data):
    nu = coboundary(random_cochain(data, rep, 1))
    assert coboundary(contracting_homotopy(nu)) == nu


def test_lattice_coefficients_must_be_integral():
    with pytest.raises(WrongCoefficients):
        Cochain(1, LATTICE, TRIV, {(1,): (F(1, 2),)})


def test_cohomology_examples():
    assert cohomology_lattice(TRIV, 0) == AbelianGroupStructure(1)
    assert cohomology_lattice(TRIV, 1) == AbelianGroupStructure(0)
    assert cohomology_lattice(TRIV, 2) == AbelianGroupStructure(0, (2,))
    assert cohomology_lattice(SIGN, 1) == AbelianGroupStructure(0, (2,))
    assert cohomology_lattice(SIGN, 2) == AbelianGroupStructure(0)
    assert cohomology_lattice(trivial_representation(Z2, 3), 0) == AbelianGroupStructure(3)


@pytest.mark.parametrize("m", range(1, 7))
def test_cyclic_period_two(m):
    rep = trivial_representation(groups.cyclic_group(m))
    torsion = (m,) if m > 1 else ()
    assert [cohomology_lattice(rep, n) for n in range(4)] == [
        AbelianGroupStructure(1),
        AbelianGroupStructure(0),
        AbelianGroupStructure(0, torsion),
        AbelianGroupStructure(0),
    ]


def test_obstruction_examples():
    assert torus_class_vanishes(zero_cochain(2, TORUS, SIGN))[0]
    pin = Cochain(2, TORUS, SIGN, {(1, 1): (F(1, 2),)})
    assert torus_class_vanishes(pin) == (False, None)
    ok, mu = torus_class_vanishes(Cochain(2, TORUS, TRIV, {(1, 1): (F(1, 2),)}))
    assert ok and mu(1) == (F(1, 4),)


def test_pin2_obstruction_exhaustive():
    # no mu(sigma) in (1/16)Z/Z cobounds: d mu(sigma, sigma) = mu - mu = 0
    pin = Cochain(2, TORUS, SIGN, {(1, 1): (F(1, 2),)})
    for k in range(16):
        mu = Cochain(1, TORUS, SIGN, {(1,): (F(k, 16),)})
        assert coboundary(mu) != pin


def test_obstruction_rejects_non_cocycles():
    G = finite_catalog("Z3")
    rep = trivial_representation(G)
    with pytest.raises(NotACocycle):
        torus_class_vanishes(Cochain(2, TORUS, rep, {(1, 1): (F(1, 3),)}))


@pytest.mark.parametrize("rep", reps(), ids=lambda r: f"{r.group.name}-{r.rank}")
@given(data=st.data())
def test_torus_coboundaries_vanish(rep, data):
    mu = random_cochain(data, rep, 1, TORUS)
    ok, found = torus_class_vanishes(coboundary(mu))
    assert ok and coboundary(found) == coboundary(mu)


def test_z1_examples():
    inv = z1_torus_structure(SIGN)
    assert inv.torus_rank == 1 and inv.class_count == 1
    triv = z1_torus_structure(TRIV)
    assert triv.torus_rank == 0 and triv.class_count == 2
    assert sorted(z(1) for z in triv.representatives) == [(F(0),), (F(1, 2),)]
    assert z1_torus_structure(trivial_representation(groups.trivial_group())).class_count == 1


def test_z1_exhaustive_trivial_action():
    # z(sigma) + z(sigma) = 0 on the circle: exactly {0, 1/2} among denominators <= 4
    found = set()
    for den in range(1, 5):
        for k in range(den):
            z = Cochain(1, TORUS, TRIV, {(1,): (F(k, den),)})
            if is_cocycle(z)[0]:
                found.add(z(1))
    assert found == {(F(0),), (F(1, 2),)}


def test_cobound_degree1():
    z = Cochain(1, TORUS, SIGN, {(1,): (F(1, 4),)})
    t = torus_cobound_degree1(z)
    assert coboundary(Cochain(0, TORUS, SIGN, {(): t})) == z
    assert torus_cobound_degree1(Cochain(1, TORUS, TRIV, {(1,): (F(1, 2),)})) is None
