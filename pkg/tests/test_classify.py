from itertools import product

import pytest

from evenclifford import linalg as la
from evenclifford.classify import (
    automorphism_group,
    find_isomorphisms,
    orbit_partition,
    verify_bijection,
    verify_exact_rows,
    witt_classes,
    witt_partition,
)
from evenclifford.clifford import AlgebraMap, c0_of_similarity, is_algebra_iso, scaling_iso, upsilon
from evenclifford.errors import FieldTooLarge, NotSemiregular
from evenclifford.quadform import (
    BilinearForm3,
    DiscriminantTwist,
    QuadraticForm3,
    Similarity,
    act_similarity,
    all_forms,
    default_lift,
    half_discriminant,
    is_semiregular,
    lower_lift,
)
from evenclifford.ring import prime_field

F2, F3, F5 = prime_field(2), prime_field(3), prime_field(5)


@pytest.fixture(scope="module")
def f2_witt():
    return witt_classes(F2)


def test_f2_partitions_agree(f2_witt):
    witt = sorted((sorted(c) for c in f2_witt.classes), key=lambda c: c[0])
    orb = orbit_partition(F2)
    assert witt == orb
    assert sum(len(c) for c in orb) == 64


def test_f2_representatives_are_least(f2_witt):
    for rep, members in zip(f2_witt.representatives, f2_witt.classes):
        assert rep == min(members)


def test_f2_semiregular_classes(f2_witt):
    semi = [c for c in f2_witt.classes if is_semiregular(QuadraticForm3(F2, c[0]))]
    assert len(semi) == 1
    assert all(half_discriminant(QuadraticForm3(F2, x)) == 1 for x in semi[0])


def test_partition_independent_of_lift():
    assert witt_partition(F2) == witt_partition(F2, lift=lower_lift)


def test_f3_twist_shares_orbit():
    orb = orbit_partition(F3, check_witnesses=False)
    where = {x: i for i, c in enumerate(orb) for x in c}
    assert where[(1, 1, 1, 0, 0, 0)] == where[(2, 2, 2, 0, 0, 0)]


def test_explicit_isos_join_classes():
    q = QuadraticForm3(F3, (1, 2, 0, 1, 0, 1))
    s = Similarity(F3, ((1, 1, 0), (0, 1, 2), (0, 0, 2)), 1)
    phi = c0_of_similarity(s, q)
    q2 = act_similarity(s, q)
    assert is_algebra_iso(phi, upsilon(default_lift(q)), upsilon(default_lift(q2)))
    assert find_isomorphisms(upsilon(default_lift(q)), upsilon(default_lift(q2)))
    lam = scaling_iso(q, DiscriminantTwist(F3, 2))
    src = BilinearForm3(F3, la.scale(F3, 2, default_lift(q).matrix))
    assert is_algebra_iso(lam, upsilon(src), upsilon(default_lift(q)))


def test_no_iso_between_split_and_square_zero():
    A = upsilon(default_lift(QuadraticForm3(F3, (1, 1, 1, 0, 0, 0))))
    Z = upsilon(default_lift(QuadraticForm3(F3, (0,) * 6)))
    assert find_isomorphisms(A, Z) == []


def test_automorphisms_of_square_zero_f2():
    Z = upsilon(default_lift(QuadraticForm3(F2, (0,) * 6)))
    aut = {a.matrix for a in automorphism_group(Z)}
    # oracle: test all 2^12 unit-preserving maps one by one
    brute = set()
    for bits in product(range(2), repeat=12):
        cols = [(1, 0, 0, 0)] + [bits[4 * i : 4 * i + 4] for i in range(3)]
        phi = AlgebraMap(F2, la.transpose(cols))
        if is_algebra_iso(phi, Z, Z):
            brute.add(phi.matrix)
    assert aut == brute
    assert len(aut) == 168  # translations f_i -> f_i + c break f_i^2 = 0
    assert AlgebraMap.identity(F2).matrix in aut


def test_automorphisms_quaternion_type_f3_have_det_one():
    A = upsilon(default_lift(QuadraticForm3(F3, (1, 1, 1, 0, 0, 0))))
    aut = automorphism_group(A)
    assert len(aut) == 24
    assert all(phi.det == 1 for phi in aut)


@pytest.mark.parametrize(
    "p,coeffs,mu2",
    [(2, (0, 0, 1, 0, 0, 1), 1), (2, (1, 1, 1, 0, 0, 1), 1), (3, (1, 1, 1, 0, 0, 0), 2), (3, (0, 0, 1, 0, 0, 1), 2)],
)
def test_exact_rows(p, coeffs, mu2):
    F = prime_field(p)
    rep = verify_exact_rows(F, QuadraticForm3(F, coeffs))
    assert rep["pass"], rep["checks"]
    assert rep["order_mu2"] == mu2
    assert rep["order_o"] == rep["order_aut_prime"] * mu2


def test_exact_rows_needs_semiregular():
    with pytest.raises(NotSemiregular):
        verify_exact_rows(F3, QuadraticForm3(F3, (1, 0, 0, 0, 0, 0)))


def test_field_limits():
    with pytest.raises(FieldTooLarge):
        witt_partition(F5)
    with pytest.raises(FieldTooLarge):
        orbit_partition(F5)
    A = upsilon(default_lift(QuadraticForm3(F5, (1, 1, 1, 0, 0, 0))))
    with pytest.raises(FieldTooLarge):
        automorphism_group(A)


def test_verify_bijection_f2():
    rep = verify_bijection(F2)
    assert rep["pass"]
    assert rep["witt_classes"] == rep["orbit_classes"]
    assert rep["semiregular_classes"] == rep["azumaya_classes"] == 1


def test_every_form_counted_once(f2_witt):
    seen = [x for c in f2_witt.classes for x in c]
    assert sorted(seen) == [q.coeffs for q in all_forms(F2)]


def test_kernel_matches_plain_enumeration_f2():
    import random

    rng = random.Random(12)
    forms = all_forms(F2)
    for _ in range(12):
        A = upsilon(default_lift(rng.choice(forms)))
        B = upsilon(default_lift(rng.choice(forms)))
        fast = {m.matrix for m in find_isomorphisms(A, B, first=False)}
        slow = set()
        for bits in product(range(2), repeat=12):
            phi = AlgebraMap(F2, la.transpose([(1, 0, 0, 0)] + [bits[4 * i : 4 * i + 4] for i in range(3)]))
            if is_algebra_iso(phi, A, B):
                slow.add(phi.matrix)
        assert fast == slow
