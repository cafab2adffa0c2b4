import random
from fractions import Fraction

import pytest
from hypothesis import given

from evenclifford import linalg as la
from evenclifford.clifford import (
    AlgebraMap,
    AlgebraStructure4,
    CliffordElement,
    CliffordTable,
    base_change_algebra,
    base_change_bilinear,
    bourbaki_t,
    c0_of_similarity,
    clifford_product,
    even_clifford_structure,
    is_algebra_iso,
    lambda2_matrix,
    lift_section,
    opposite,
    parse_variant,
    psi_between,
    psi_even_matrix,
    psi_even_via_recursion,
    scaling_iso,
    t_tensor,
    transfer_to_lambda2,
    upsilon,
    upsilon_via_clifford,
)
from evenclifford.errors import NotAnAlgebraIso, NotASimilarity, SquareRootUnavailable
from evenclifford.quadform import (
    BilinearForm3,
    DiscriminantTwist,
    QuadraticForm3,
    Similarity,
    act_similarity,
    all_bilinear,
    default_lift,
    gl_act_bilinear,
    induced_quadratic,
    similarities,
)
from evenclifford.ring import QQ, ZZ, parse_ring, prime_field
from strategies import bilinears, forms, ring_and, similarities as sims

F2, F3, F5 = prime_field(2), prime_field(3), prime_field(5)


def gen(R, i):
    return CliffordElement.basis(R, (i,))


def B(R, rows):
    return BilinearForm3(R, rows)


def E(R, i, j):
    return B(R, tuple(tuple(1 if (r, c) == (i, j) else 0 for c in range(3)) for r in range(3)))


# -- full Clifford algebra ----------------------------------------------------------


def test_generator_squares_to_coefficient():
    q = QuadraticForm3(F5, (2, 3, 4, 1, 1, 1))
    for i in range(3):
        assert clifford_product(q, gen(F5, i), gen(F5, i)) == CliffordElement.scalar(F5, q.a(i))


def test_e1e2_squared_is_minus_one_for_sum_of_squares():
    q = QuadraticForm3(QQ, (1, 1, 1, 0, 0, 0))
    x = CliffordElement.basis(QQ, (0, 1))
    assert clifford_product(q, x, x) == CliffordElement.scalar(QQ, -1)


def test_zero_form_kills_repeated_generator():
    q = QuadraticForm3(QQ, (0,) * 6)
    e23 = CliffordElement.basis(QQ, (1, 2))
    e31 = clifford_product(q, gen(QQ, 2), gen(QQ, 0))
    assert clifford_product(q, e23, e31) == CliffordElement(QQ, (0,) * 8)


def test_clifford_product_is_associative_on_basis():
    q = QuadraticForm3(F3, (1, 2, 0, 1, 2, 1))
    t = CliffordTable(q)
    basis = [CliffordElement(F3, tuple(int(k == i) for k in range(8))) for i in range(8)]
    for x in basis:
        for y in basis:
            for z in basis:
                assert t.mul(t.mul(x, y), z) == t.mul(x, t.mul(y, z))


# -- Bourbaki operators -------------------------------------------------------------


def test_t_of_one_vanishes():
    assert t_tensor(F5, (1, 2, 3), {(): 1}) == {}


def test_t_of_generator():
    q = QuadraticForm3(QQ, (1, 1, 1, 0, 0, 0))
    assert bourbaki_t((1, 0, 0), {(0,): 1}, q) == CliffordElement.scalar(QQ, 1)


def test_t_is_square_zero_and_anticommutes():
    rng = random.Random(5)
    R = F5
    for _ in range(50):
        word = tuple(rng.randrange(3) for _ in range(rng.randint(0, 6)))
        f = [rng.randrange(5) for _ in range(3)]
        g = [rng.randrange(5) for _ in range(3)]
        x = {word: 1}
        assert t_tensor(R, f, t_tensor(R, f, x)) == {}
        fg = t_tensor(R, f, t_tensor(R, g, x))
        gf = t_tensor(R, g, t_tensor(R, f, x))
        assert all(R.add(fg.get(w, 0), gf.get(w, 0)) == 0 for w in set(fg) | set(gf))


def test_psi_examples():
    signs = la.diag(QQ, [1, 1, -1, 1])
    assert psi_even_matrix(B(QQ, la.zeros(QQ, 3))) == signs
    assert psi_even_matrix(B(QQ, la.identity(QQ, 3))) == signs
    m = psi_even_matrix(E(F5, 1, 2))
    assert m[0] == (1, 1, 0, 0) and m[1:] == la.diag(F5, [1, 1, -1, 1])[1:]


def test_psi_closed_form_matches_recursion():
    rng = random.Random(11)
    for R in (F5, QQ, parse_ring("dual:3")):
        for _ in range(20):
            b = B(R, tuple(tuple(R.random(rng) for _ in range(3)) for _ in range(3)))
            assert psi_even_via_recursion(b) == psi_even_matrix(b)


def test_psi_composition_identity():
    """psi_{b1+b2} = psi_{b2} o psi_{b1} along q_{b1+b2} -> q_{b2} -> 0."""
    rng = random.Random(3)
    zero = QuadraticForm3(F5, (0,) * 6)
    for _ in range(20):
        b1 = B(F5, tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3)))
        b2 = B(F5, tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3)))
        two_step = la.matmul(F5, psi_between(b2, zero), psi_between(b1, induced_quadratic(b2)))
        assert two_step == psi_between(b1 + b2, zero)


# -- Upsilon ------------------------------------------------------------------------


def test_upsilon_of_zero_is_square_zero():
    A = upsilon(B(QQ, la.zeros(QQ, 3)))
    assert all(A.constants[i][j] == (0, 0, 0, 0) for i in range(1, 4) for j in range(1, 4))


def test_quaternion_table():
    A = upsilon(B(QQ, la.identity(QQ, 3)))
    f = [A.basis(i) for i in range(4)]
    minus = lambda v: tuple(-x for x in v)  # noqa: E731
    for i in (1, 2, 3):
        assert A.mul(f[i], f[i]) == minus(f[0])
    assert A.mul(f[1], f[2]) == minus(f[3])
    assert A.mul(f[2], f[3]) == minus(f[1])
    assert A.mul(f[3], f[1]) == minus(f[2])


def test_hyperbolic_plane_idempotent_f2():
    # q = x1 x2: (e1e2)^2 = e1e2, and f3 = e1e2 - 1 is again idempotent in char 2
    A = upsilon(E(F2, 0, 1))
    f3 = A.basis(3)
    assert A.constants[3][3][1:] == (0, 0, 1)
    assert A.mul(f3, f3) == f3
    assert f3 not in (A.basis(0), (0, 0, 0, 0))


def test_upsilon_closed_form_matches_rewriting_exhaustive_f2():
    for b in all_bilinear(F2):
        A = upsilon(b)
        assert A == upsilon_via_clifford(b)
        assert A.is_unital() and A.is_associative()


def test_upsilon_random_rings():
    rng = random.Random(0)
    for R in (F3, F5, QQ, ZZ, parse_ring("zmod:2^3"), parse_ring("dual:5")):
        for _ in range(15):
            b = B(R, tuple(tuple(R.random(rng) for _ in range(3)) for _ in range(3)))
            A = upsilon(b)
            assert A == upsilon_via_clifford(b)
            assert A.is_unital() and A.is_associative()


def test_upsilon_is_gl3_equivariant():
    rng = random.Random(7)
    for _ in range(30):
        b = B(F5, tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3)))
        while True:
            g = tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3))
            if la.is_invertible(F5, g):
                break
        M = la.mat(F5, [[1, 0, 0, 0]] + [[0, *row] for row in lambda2_matrix(F5, g)])
        assert upsilon(gl_act_bilinear(g, b)) == upsilon(b).transport(M)


# -- maps between algebras -------------------------------------------------------------


def test_identity_similarity_gives_identity():
    q = QuadraticForm3(F5, (1, 2, 3, 4, 0, 1))
    assert c0_of_similarity(Similarity.identity(F5), q).matrix == la.identity(F5, 4)


def test_permutation_similarity_gives_signed_permutation():
    q = QuadraticForm3(QQ, (1, 1, 1, 0, 0, 0))
    cyc = ((0, 0, 1), (1, 0, 0), (0, 1, 0))  # e1 -> e2 -> e3 -> e1, det 1
    M = c0_of_similarity(Similarity(QQ, cyc, 1), q).matrix
    block = [row[1:] for row in M[1:]]
    assert M[0] == (1, 0, 0, 0)
    for row in block:
        assert sorted(abs(x) for x in row) == [0, 0, 1]


def test_c0_rejects_non_similarity():
    q = QuadraticForm3(F5, (1, 1, 1, 0, 0, 0))
    with pytest.raises(NotASimilarity):
        c0_of_similarity(Similarity(F5, la.diag(F5, [1, 1, 2]), 1), q, q)


def test_scaling_iso_examples():
    q = QuadraticForm3(QQ, (1, 1, 1, 0, 0, 0))
    assert scaling_iso(q, DiscriminantTwist(QQ, 1)).matrix == la.identity(QQ, 4)
    M = scaling_iso(q, DiscriminantTwist(QQ, -1))
    assert M.matrix == la.diag(QQ, [1, -1, -1, -1])
    src = BilinearForm3(QQ, la.scale(QQ, -1, default_lift(q).matrix))
    assert is_algebra_iso(M, upsilon(src), upsilon(default_lift(q)))


def test_scaling_iso_composes():
    rng = random.Random(2)
    for _ in range(20):
        q = QuadraticForm3(F5, tuple(rng.randrange(5) for _ in range(6)))
        lam, mu = rng.randrange(1, 5), rng.randrange(1, 5)
        b = default_lift(q)
        b_lam = BilinearForm3(F5, la.scale(F5, lam, b.matrix))
        lhs = scaling_iso(q, DiscriminantTwist(F5, lam), b) @ scaling_iso(q.scaled(lam), DiscriminantTwist(F5, mu), b_lam)
        rhs = scaling_iso(q, DiscriminantTwist(F5, F5.mul(lam, mu)), b)
        assert lhs.matrix == rhs.matrix


def test_transfer_identity_and_independence():
    q = QuadraticForm3(F5, (1, 2, 3, 1, 0, 4))
    assert transfer_to_lambda2(AlgebraMap.identity(F5), q, q) == la.identity(F5, 3)
    s = Similarity(F5, ((1, 2, 0), (0, 1, 3), (1, 0, 1)), 2)
    q2 = act_similarity(s, q)
    alt = BilinearForm3(F5, ((0, 1, 2), (4, 0, 3), (3, 2, 0)))
    b, b2 = default_lift(q), default_lift(q2)
    c, c2 = b + alt, b2 + alt.transpose()
    N1 = transfer_to_lambda2(c0_of_similarity(s, q, q2, b, b2), q, q2, b, b2)
    N2 = transfer_to_lambda2(c0_of_similarity(s, q, q2, c, c2), q, q2, c, c2)
    assert N1 == N2
    expect = F5.mul(F5.pow(s.l, -3), F5.pow(s.det, 2))
    assert la.det(F5, N1) == expect


def test_transfer_rejects_non_iso():
    q = QuadraticForm3(F5, (1, 1, 1, 0, 0, 0))
    bad = AlgebraMap(F5, la.diag(F5, [1, 2, 1, 1]))
    with pytest.raises(NotAnAlgebraIso):
        transfer_to_lambda2(bad, q, q)


def test_is_algebra_iso_examples():
    A = upsilon(B(F5, la.zeros(F5, 3)))
    assert is_algebra_iso(AlgebraMap.identity(F5), A, A)
    assert is_algebra_iso(AlgebraMap(F5, la.diag(F5, [1, 2, 1, 1])), A, A)
    collapse = AlgebraMap(F5, ((1, 1, 0, 0), (0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
    assert not is_algebra_iso(collapse, A, A)


# -- lifting sections -------------------------------------------------------------------


def test_lift_of_identity():
    q = QuadraticForm3(F5, (1, 1, 1, 0, 0, 0))
    s = lift_section(AlgebraMap.identity(F5), q, q, "splus:1")
    assert s == Similarity.identity(F5)


def test_sprime_needs_square_determinant():
    q = QuadraticForm3(F3, (1, 1, 1, 0, 0, 0))
    phi = scaling_iso(q, DiscriminantTwist(F3, 2))  # Lambda^2 block 2*Id, det 8 = 2
    assert la.det(F3, phi.lambda2_block()) == 2
    with pytest.raises(SquareRootUnavailable):
        lift_section(phi, q.scaled(2), q, "sprime", b=BilinearForm3(F3, la.scale(F3, 2, default_lift(q).matrix)))


@pytest.mark.parametrize("variant", ["splus:1", "splus:3", "splus:-1", "s:1", "s:5", "sprime"])
def test_section_identity_all_variants(variant):
    rng = random.Random(variant)
    for _ in range(25):
        q = QuadraticForm3(F5, tuple(rng.randrange(5) for _ in range(6)))
        while True:
            g = tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3))
            if la.is_invertible(F5, g):
                break
        s = Similarity(F5, g, rng.randrange(1, 5))
        q2 = act_similarity(s, q)
        phi = c0_of_similarity(s, q, q2)
        d = la.det(F5, phi.lambda2_block())
        try:
            lifted = lift_section(phi, q, q2, variant)
        except SquareRootUnavailable:
            assert variant == "sprime" and F5.pow(d, 2) != 1 and d not in (1, 4)
            continue
        assert c0_of_similarity(lifted, q, q2).matrix == phi.matrix
        name, n = parse_variant(variant)
        if name == "sprime":
            assert lifted.l == 1 and F5.pow(lifted.det, 2) == d
        else:
            assert lifted.l == F5.pow(d, n)
            assert F5.mul(F5.pow(lifted.det, 2), F5.pow(lifted.l, -3)) == d


def test_variant_parsing():
    assert parse_variant("sprime") == ("sprime", None)
    assert parse_variant("s:3") == ("s", 3)
    with pytest.raises(ValueError):
        parse_variant("s:2")
    with pytest.raises(ValueError):
        parse_variant("t:1")


def test_kernel_lemma_exhaustive_f3():
    q = QuadraticForm3(F3, (1, 1, 1, 0, 0, 0))
    ident = la.identity(F3, 4)
    for s in similarities(q):
        if c0_of_similarity(s, q, q).matrix == ident:
            scalar = F3.mul(F3.inv(s.l), s.det)
            assert s.g == la.scale(F3, scalar, la.identity(F3, 3))


def test_functoriality():
    rng = random.Random(9)
    for _ in range(20):
        q = QuadraticForm3(F5, tuple(rng.randrange(5) for _ in range(6)))
        ss = []
        while len(ss) < 2:
            g = tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3))
            if la.is_invertible(F5, g):
                ss.append(Similarity(F5, g, rng.randrange(1, 5)))
        s, s1 = ss
        q_mid = act_similarity(s, q)
        q_end = act_similarity(s1, q_mid)
        comp = s1 @ s
        assert comp.l == F5.mul(s.l, s1.l)
        lhs = c0_of_similarity(comp, q, q_end)
        rhs = c0_of_similarity(s1, q_mid, q_end) @ c0_of_similarity(s, q, q_mid)
        assert lhs.matrix == rhs.matrix


# -- opposite and base change ----------------------------------------------------------


def test_opposite_examples():
    rng = random.Random(1)
    A = upsilon(B(F5, tuple(tuple(rng.randrange(5) for _ in range(3)) for _ in range(3))))
    assert opposite(opposite(A)) == A
    for b in all_bilinear(F2):
        assert opposite(upsilon(b)) == upsilon(-b.transpose())
    comm = upsilon(B(F2, la.diag(F2, [1, 0, 1])))
    assert comm.is_commutative() and opposite(comm) == comm


def test_base_change_examples():
    A = upsilon(B(ZZ, la.identity(ZZ, 3)))
    assert base_change_algebra(A, F5) == upsilon(base_change_bilinear(B(ZZ, la.identity(ZZ, 3)), F5))
    reduced = base_change_algebra(A, F2)
    assert reduced.mul(reduced.basis(1), reduced.basis(1)) == reduced.basis(0)
    D = parse_ring("dual:3")
    bd = B(D, ((D.parse("1+2e"), 0, D.parse("0+1e")), (1, 2, 0), (0, D.parse("2+2e"), 1)))
    assert base_change_algebra(upsilon(bd), F3) == upsilon(base_change_bilinear(bd, F3))


def test_algebra_json_round_trip():
    A = upsilon(B(QQ, ((Fraction(1, 2), 1, 0), (0, 2, 3), (1, 0, -1))))
    assert AlgebraStructure4.from_dict(A.to_dict()) == A
    M = AlgebraMap(F5, la.diag(F5, [1, 2, 3, 4]))
    assert AlgebraMap.from_dict(M.to_dict()) == M


def test_even_clifford_structure_dimension():
    A = even_clifford_structure(QuadraticForm3(F3, (1, 2, 1, 0, 1, 0)))
    assert A.is_unital() and A.is_associative()


# -- properties -------------------------------------------------------------------------


@given(ring_and(bilinears))
def test_upsilon_unital_associative(pair):
    _, b = pair
    A = upsilon(b)
    assert A.is_unital() and A.is_associative()


@given(ring_and(bilinears))
def test_opposite_matches_negative_transpose(pair):
    _, b = pair
    assert opposite(upsilon(b)) == upsilon(-b.transpose())


@given(ring_and(forms).flatmap(lambda p: sims(p[0]).map(lambda s: (*p, s))))
def test_det_identity_property(triple):
    R, q, s = triple
    q2 = act_similarity(s, q)
    N = transfer_to_lambda2(c0_of_similarity(s, q), q, q2)
    assert la.det(R, N) == R.mul(R.pow(s.l, -3), R.pow(s.det, 2))


@given(ring_and(forms).flatmap(lambda p: sims(p[0]).map(lambda s: (*p, s))))
def test_splus_section_property(triple):
    R, q, s = triple
    q2 = act_similarity(s, q)
    phi = c0_of_similarity(s, q, q2)
    lifted = lift_section(phi, q, q2, "splus:1")
    assert c0_of_similarity(lifted, q, q2).matrix == phi.matrix
    assert lifted.l == la.det(R, phi.lambda2_block())
