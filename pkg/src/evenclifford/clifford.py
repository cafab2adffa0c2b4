"""Clifford algebras of ternary forms, Bourbaki operators and even-part maps.

Conventions
-----------
* Full Clifford basis ``e_S`` for ``S`` in the order
  ``(), (1,), (2,), (3,), (1,2), (1,3), (2,3), (1,2,3)`` (generators are
  0-based internally).
* Even Clifford ("clifford-side") basis ``(1, e2e3, e1e3, e1e2)``.
* Even exterior ("lambda-side") basis ``(1, f1, f2, f3)`` with
  ``f1 = e2^e3``, ``f2 = e3^e1``, ``f3 = e1^e2``.
* A 4x4 matrix ``M`` acts on column vectors; column ``j`` is the image of
  basis vector ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import linalg as la
from .errors import NotAnAlgebraIso, NotASimilarity, SquareRootUnavailable
from .quadform import (
    BilinearForm3,
    DiscriminantTwist,
    QuadraticForm3,
    Similarity,
    act_similarity,
    default_lift,
    induced_quadratic,
    is_similarity,
)
from .ring import Ring, parse_ring, ring_hom_apply, unit_square_roots

SUBSETS = [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
SUBSET_INDEX = {s: i for i, s in enumerate(SUBSETS)}

# even clifford-side basis as words, and their positions among SUBSETS
EVEN_WORDS = [(), (1, 2), (0, 2), (0, 1)]
EVEN_SLOTS = [SUBSET_INDEX[w] for w in EVEN_WORDS]

# lambda-side f_i = sign * (wedge of the even word): f2 = e3^e1 = -e1^e3
LAMBDA_SIGNS = (1, 1, -1, 1)


# -- rewriting engine -----------------------------------------------------------


class _Reducer:
    """Normal forms of words in C(q) via ``e_i e_i -> a_i`` and
    ``e_j e_i -> u_ij - e_i e_j`` (``i < j``).

    Works over anything exposing ``add/sub/mul/zero`` so the same code runs
    over exact rings and over symbolic shims.
    """

    def __init__(self, ring, a, u):
        self.ring = ring
        self.a = a
        self.u = u  # dict (i, j) with i < j -> u_ij
        self.memo = {}

    def reduce(self, word):
        word = tuple(word)
        hit = self.memo.get(word)
        if hit is not None:
            return hit
        R = self.ring
        for k in range(len(word) - 1):
            i, j = word[k], word[k + 1]
            if i == j:
                rest = self.reduce(word[:k] + word[k + 2:])
                out = [R.mul(self.a[i], c) for c in rest]
                break
            if i > j:
                shorter = self.reduce(word[:k] + word[k + 2:])
                swapped = self.reduce(word[:k] + (j, i) + word[k + 2:])
                uij = self.u[(j, i)]
                out = [R.sub(R.mul(uij, c), d) for c, d in zip(shorter, swapped)]
                break
        else:
            out = [R.zero] * 8
            out[SUBSET_INDEX[word]] = R.one
        out = tuple(out)
        self.memo[word] = out
        return out


def _reducer(q: QuadraticForm3) -> _Reducer:
    a = [q.a(i) for i in range(3)]
    u = {(0, 1): q.u(0, 1), (0, 2): q.u(0, 2), (1, 2): q.u(1, 2)}
    return _Reducer(q.ring, a, u)


@dataclass(frozen=True)
class CliffordElement:
    """``sum c_S e_S`` in normal form; ``coeffs`` is indexed as ``SUBSETS``."""

    ring: Ring
    coeffs: tuple

    @classmethod
    def basis(cls, ring, subset):
        c = [ring.zero] * 8
        c[SUBSET_INDEX[tuple(subset)]] = ring.one
        return cls(ring, tuple(c))

    @classmethod
    def scalar(cls, ring, x):
        c = [ring.zero] * 8
        c[0] = ring(x)
        return cls(ring, tuple(c))

    @classmethod
    def vector(cls, ring, v):
        c = [ring.zero] * 8
        for i in range(3):
            c[1 + i] = ring(v[i])
        return cls(ring, tuple(c))

    def __add__(self, other):
        R = self.ring
        return CliffordElement(R, tuple(R.add(x, y) for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        R = self.ring
        return CliffordElement(R, tuple(R.sub(x, y) for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, c):
        R = self.ring
        return CliffordElement(R, tuple(R.mul(R(c), x) for x in self.coeffs))

    def even_part(self):
        """Coordinates on the clifford-side even basis ``(1, e2e3, e1e3, e1e2)``."""
        return tuple(self.coeffs[s] for s in EVEN_SLOTS)

    def is_even(self):
        R = self.ring
        return all(R.is_zero(self.coeffs[i]) for i in (1, 2, 3, 7))


class CliffordTable:
    """Multiplication in C(q) with lazily cached basis products."""

    def __init__(self, q: QuadraticForm3):
        self.q = q
        self.ring = q.ring
        self._red = _reducer(q)
        self._products = {}

    def basis_product(self, i, j):
        key = (i, j)
        hit = self._products.get(key)
        if hit is None:
            hit = self._red.reduce(SUBSETS[i] + SUBSETS[j])
            self._products[key] = hit
        return hit

    def reduce_word(self, word):
        return CliffordElement(self.ring, self._red.reduce(word))

    def mul(self, x: CliffordElement, y: CliffordElement) -> CliffordElement:
        R = self.ring
        out = [R.zero] * 8
        for i, xi in enumerate(x.coeffs):
            if R.is_zero(xi):
                continue
            for j, yj in enumerate(y.coeffs):
                if R.is_zero(yj):
                    continue
                c = R.mul(xi, yj)
                for k, v in enumerate(self.basis_product(i, j)):
                    if not R.is_zero(v):
                        out[k] = R.add(out[k], R.mul(c, v))
        return CliffordElement(R, tuple(out))


def clifford_product(q: QuadraticForm3, x: CliffordElement, y: CliffordElement) -> CliffordElement:
    return CliffordTable(q).mul(x, y)


# -- tensor-algebra words and Bourbaki operators --------------------------------
#
# A tensor element is a dict mapping words (tuples of generator indices) to
# nonzero coefficients.  The line bundle I is trivialised, so the Laurent-Rees
# factor contributes nothing beyond scalars.


def tensor_add(ring, x, y, sign=1):
    out = dict(x)
    for w, c in y.items():
        v = ring.add(out.get(w, ring.zero), c if sign > 0 else ring.neg(c))
        if ring.is_zero(v):
            out.pop(w, None)
        else:
            out[w] = v
    return out


def tensor_scale(ring, c, x):
    out = {}
    for w, v in x.items():
        v = ring.mul(c, v)
        if not ring.is_zero(v):
            out[w] = v
    return out


def _left_letter(ring, i, x):
    return {(i,) + w: c for w, c in x.items()}


def t_tensor(ring, f, x):
    """The antiderivation ``t_f`` on the tensor algebra.

    ``t_f(1) = 0`` and ``t_f(v (x) y) = f(v) y - v (x) t_f(y)``.
    """
    out = {}
    for word, c in x.items():
        out = tensor_add(ring, out, tensor_scale(ring, c, _t_word(ring, tuple(f), word)))
    return out


def _t_word(ring, f, word):
    if not word:
        return {}
    head, tail = word[0], word[1:]
    first = {tail: f[head]} if not ring.is_zero(f[head]) else {}
    rest = _left_letter(ring, head, _t_word(ring, f, tail))
    return tensor_add(ring, first, rest, sign=-1)


def psi_tensor(ring, b, x):
    """Bourbaki's ``Psi_b`` on the tensor algebra.

    ``Psi_b(1) = 1`` and ``Psi_b(v (x) y) = v (x) Psi_b(y) + t_{b_v}(Psi_b(y))``
    with ``b_v = b(v, .)``.
    """
    out = {}
    for word, c in x.items():
        out = tensor_add(ring, out, tensor_scale(ring, c, _psi_word(ring, b, word)))
    return out


def _psi_word(ring, b, word):
    if not word:
        return {(): ring.one}
    head, tail = word[0], word[1:]
    inner = _psi_word(ring, b, tail)
    row = b.matrix[head]  # b_{e_head} as a covector
    return tensor_add(ring, _left_letter(ring, head, inner), t_tensor(ring, row, inner))


def reduce_tensor(q: QuadraticForm3, x) -> CliffordElement:
    """Image of a tensor element in C(q)."""
    table = CliffordTable(q)
    R = q.ring
    out = CliffordElement(R, tuple([R.zero] * 8))
    for word, c in x.items():
        out = out + table.reduce_word(word).scale(c)
    return out


def bourbaki_t(f, x, q: QuadraticForm3) -> CliffordElement:
    """``t_f(x)`` for a tensor element ``x``, reduced to normal form in C(q)."""
    R = q.ring
    return reduce_tensor(q, t_tensor(R, [R(v) for v in f], x))


# -- rank-4 algebra structures -------------------------------------------------


@dataclass(frozen=True)
class AlgebraStructure4:
    """``f_i f_j = sum_k constants[i][j][k] f_k`` with ``f_0`` the unit."""

    ring: Ring
    constants: tuple

    def __post_init__(self):
        R = self.ring
        c = tuple(tuple(tuple(R(x) for x in row) for row in plane) for plane in self.constants)
        if len(c) != 4 or any(len(p) != 4 or any(len(r) != 4 for r in p) for p in c):
            raise ValueError("structure constants must be 4x4x4")
        object.__setattr__(self, "constants", c)

    def mul(self, x, y):
        R = self.ring
        out = [R.zero] * 4
        c = self.constants
        for i in range(4):
            if R.is_zero(x[i]):
                continue
            for j in range(4):
                if R.is_zero(y[j]):
                    continue
                s = R.mul(x[i], y[j])
                for k in range(4):
                    out[k] = R.add(out[k], R.mul(s, c[i][j][k]))
        return tuple(out)

    def basis(self, i):
        R = self.ring
        return tuple(R.one if j == i else R.zero for j in range(4))

    def is_unital(self):
        R = self.ring
        c = self.constants
        for j in range(4):
            for k in range(4):
                delta = R.one if j == k else R.zero
                if c[0][j][k] != delta or c[j][0][k] != delta:
                    return False
        return True

    def is_associative(self):
        R = self.ring
        c = self.constants
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    for n in range(4):
                        lhs = R.sum(R.mul(c[i][j][m], c[m][k][n]) for m in range(4))
                        rhs = R.sum(R.mul(c[j][k][m], c[i][m][n]) for m in range(4))
                        if lhs != rhs:
                            return False
        return True

    def is_commutative(self):
        c = self.constants
        return all(c[i][j] == c[j][i] for i in range(4) for j in range(4))

    def transport(self, M):
        """Structure making ``M`` an isomorphism from ``self``: ``x*y = M(M^-1 x . M^-1 y)``."""
        R = self.ring
        Minv = la.inverse(R, M)
        cols = la.transpose(Minv)  # M^-1 f_i
        new = [[None] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(4):
                new[i][j] = la.matvec(R, M, self.mul(cols[i], cols[j]))
        return AlgebraStructure4(R, new)

    def to_dict(self):
        fmt = self.ring.format
        return {
            "ring": self.ring.descriptor,
            "constants": [[[fmt(x) for x in row] for row in plane] for plane in self.constants],
        }

    @classmethod
    def from_dict(cls, data):
        R = parse_ring(data["ring"])
        return cls(R, [[[R.parse(str(x)) for x in row] for row in plane] for plane in data["constants"]])


@dataclass(frozen=True)
class AlgebraMap:
    """Unit-preserving linear map between rank-4 algebras, lambda-side bases."""

    ring: Ring
    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", la.mat(self.ring, self.matrix))

    def __matmul__(self, other: "AlgebraMap") -> "AlgebraMap":
        return AlgebraMap(self.ring, la.matmul(self.ring, self.matrix, other.matrix))

    def __call__(self, v):
        return la.matvec(self.ring, self.matrix, v)

    def inverse(self):
        return AlgebraMap(self.ring, la.inverse(self.ring, self.matrix))

    @property
    def det(self):
        return la.det(self.ring, self.matrix)

    def lambda2_block(self):
        return tuple(row[1:] for row in self.matrix[1:])

    @classmethod
    def identity(cls, ring):
        return cls(ring, la.identity(ring, 4))

    def to_dict(self):
        fmt = self.ring.format
        return {"ring": self.ring.descriptor, "matrix": [[fmt(x) for x in row] for row in self.matrix]}

    @classmethod
    def from_dict(cls, data):
        R = parse_ring(data["ring"])
        return cls(R, [[R.parse(str(x)) for x in row] for row in data["matrix"]])


def is_algebra_iso(phi: AlgebraMap, A: AlgebraStructure4, A2: AlgebraStructure4) -> bool:
    R = phi.ring
    M = phi.matrix
    if tuple(M[i][0] for i in range(4)) != A2.basis(0):
        return False
    if not la.is_invertible(R, M):
        return False
    images = la.transpose(M)
    for i in range(4):
        for j in range(4):
            if la.matvec(R, M, A.mul(A.basis(i), A.basis(j))) != A2.mul(images[i], images[j]):
                return False
    return True


def opposite(A: AlgebraStructure4) -> AlgebraStructure4:
    c = A.constants
    return AlgebraStructure4(A.ring, [[c[j][i] for j in range(4)] for i in range(4)])


def base_change_algebra(A: AlgebraStructure4, dst: Ring) -> AlgebraStructure4:
    src = A.ring
    return AlgebraStructure4(
        dst, [[[ring_hom_apply(src, dst, x) for x in row] for row in plane] for plane in A.constants]
    )


def base_change_bilinear(b: BilinearForm3, dst: Ring) -> BilinearForm3:
    return BilinearForm3(dst, [[ring_hom_apply(b.ring, dst, x) for x in row] for row in b.matrix])


def base_change_form(q: QuadraticForm3, dst: Ring) -> QuadraticForm3:
    return QuadraticForm3(dst, tuple(ring_hom_apply(q.ring, dst, x) for x in q.coeffs))


# -- even Clifford algebra and the maps psi_b -----------------------------------


def even_clifford_structure(q: QuadraticForm3) -> AlgebraStructure4:
    """C_0(q) on the clifford-side basis ``(1, e2e3, e1e3, e1e2)``, by rewriting."""
    red = _reducer(q)
    consts = [[None] * 4 for _ in range(4)]
    for i, wi in enumerate(EVEN_WORDS):
        for j, wj in enumerate(EVEN_WORDS):
            full = red.reduce(wi + wj)
            consts[i][j] = tuple(full[s] for s in EVEN_SLOTS)
    return AlgebraStructure4(q.ring, consts)


def psi_even_matrix(b: BilinearForm3):
    """Matrix of ``psi_b`` on C_0: clifford-side basis -> lambda-side basis.

    ``1 -> 1`` and ``e_i e_j -> e_i ^ e_j + b(e_i, e_j)``.
    """
    R = b.ring
    m = b.matrix
    z, o = R.zero, R.one
    return (
        (o, m[1][2], m[0][2], m[0][1]),
        (z, o, z, z),
        (z, z, R.neg(o), z),
        (z, z, z, o),
    )


def upsilon_via_clifford(b: BilinearForm3) -> AlgebraStructure4:
    """Upsilon(b) computed by rewriting in C(q_b) and transporting along psi_b."""
    return even_clifford_structure(induced_quadratic(b)).transport(psi_even_matrix(b))


def upsilon(b: BilinearForm3) -> AlgebraStructure4:
    """Structure constants of C_0(q_b) transported to ``(1, f1, f2, f3)`` along psi_b.

    Evaluates the closed-form polynomials in :mod:`evenclifford._upsilon_poly`.
    """
    from ._upsilon_poly import upsilon_constants

    return AlgebraStructure4(b.ring, upsilon_constants(b.ring, b.matrix))


def lambda2_matrix(ring: Ring, g):
    """``Lambda^2(g)`` on ``(f1, f2, f3)``: columns are cross products of columns of ``g``."""
    cols = la.transpose(la.mat(ring, g))
    out = []
    for j, k in ((1, 2), (2, 0), (0, 1)):
        v, w = cols[j], cols[k]
        out.append(_cross(ring, v, w))
    return la.transpose(out)


def _cross(R, v, w):
    return (
        R.sub(R.mul(v[1], w[2]), R.mul(v[2], w[1])),
        R.sub(R.mul(v[2], w[0]), R.mul(v[0], w[2])),
        R.sub(R.mul(v[0], w[1]), R.mul(v[1], w[0])),
    )


def block_matrix(ring: Ring, top, block):
    """4x4 ``[[1, top], [0, block]]``."""
    z = ring.zero
    rows = [(ring.one,) + tuple(top)]
    for r in block:
        rows.append((z,) + tuple(r))
    return tuple(rows)


def retransport(phi: AlgebraMap, src_lifts, dst_lifts) -> AlgebraMap:
    """Re-express ``phi`` (defined w.r.t. lifts ``src_lifts = (b, b2)``) for ``dst_lifts``."""
    R = phi.ring
    b, b2 = src_lifts
    c, c2 = dst_lifts
    clifford_side = la.matmul(R, la.inverse(R, psi_even_matrix(b2)), la.matmul(R, phi.matrix, psi_even_matrix(b)))
    return AlgebraMap(R, la.matmul(R, psi_even_matrix(c2), la.matmul(R, clifford_side, la.inverse(R, psi_even_matrix(c)))))


def _lifts(q, q2, b, b2):
    return (default_lift(q) if b is None else b, default_lift(q2) if b2 is None else b2)


def c0_of_similarity(
    s: Similarity,
    q: QuadraticForm3,
    q2: Optional[QuadraticForm3] = None,
    b: Optional[BilinearForm3] = None,
    b2: Optional[BilinearForm3] = None,
) -> AlgebraMap:
    """Algebra isomorphism C_0(q) -> C_0(q2) with ``e_i e_j -> l^-1 g(e_i) g(e_j)``.

    ``q2`` defaults to ``act_similarity(s, q)``; when given it is checked.
    The result is expressed on lambda-side bases through the lifts ``b`` of
    ``q`` and ``b2`` of ``q2`` (default: upper-triangular lifts).
    """
    R = q.ring
    if q2 is None:
        q2 = act_similarity(s, q)
    elif not is_similarity(s, q, q2):
        raise NotASimilarity("(g, l) is not a similarity between the given forms")
    b, b2 = _lifts(q, q2, b, b2)
    table = CliffordTable(q2)
    linv = R.inv(s.l)
    gcols = la.transpose(s.g)
    gens = [CliffordElement.vector(R, col) for col in gcols]
    cols = [(R.one, R.zero, R.zero, R.zero)]
    for word in EVEN_WORDS[1:]:
        i, j = word
        img = table.mul(gens[i], gens[j]).scale(linv)
        cols.append(img.even_part())
    clifford_side = la.transpose(cols)
    M = la.matmul(R, psi_even_matrix(b2), la.matmul(R, clifford_side, la.inverse(R, psi_even_matrix(b))))
    return AlgebraMap(R, M)


def scaling_iso(q: QuadraticForm3, t: DiscriminantTwist, b: Optional[BilinearForm3] = None) -> AlgebraMap:
    """Isomorphism C_0(lam q) -> C_0(q) with ``e_i e_j s t -> lam e_i e_j s``.

    Uses the lift ``lam * b`` on the source when ``b`` lifts ``q``.
    """
    R = q.ring
    b = default_lift(q) if b is None else b
    lam = t.lam
    src_lift = BilinearForm3(R, la.scale(R, lam, b.matrix))
    ident = Similarity(R, la.identity(R, 3), R.inv(lam))
    return c0_of_similarity(ident, q.scaled(lam), q2=q, b=src_lift, b2=b)


def transfer_to_lambda2(
    phi: AlgebraMap,
    q: QuadraticForm3,
    q2: QuadraticForm3,
    b: Optional[BilinearForm3] = None,
    b2: Optional[BilinearForm3] = None,
):
    """The induced automorphism on ``Lambda^2`` (3x3, basis ``f1, f2, f3``)."""
    b, b2 = _lifts(q, q2, b, b2)
    if not is_algebra_iso(phi, upsilon(b), upsilon(b2)):
        raise NotAnAlgebraIso("phi is not an algebra isomorphism C_0(q) -> C_0(q')")
    return phi.lambda2_block()


def parse_variant(variant):
    """``"sprime"``, ``"s:<n>"`` or ``"splus:<n>"`` with ``n = 2k+1`` odd."""
    if isinstance(variant, tuple):
        return variant
    if variant == "sprime":
        return ("sprime", None)
    name, _, num = variant.partition(":")
    if name not in ("s", "splus") or not num:
        raise ValueError(f"unknown lift variant {variant!r}")
    n = int(num)
    if n % 2 == 0:
        raise ValueError(f"lift index must be odd (2k+1), got {n}")
    return (name, n)


def lift_section(
    phi: AlgebraMap,
    q: QuadraticForm3,
    q2: QuadraticForm3,
    variant="splus:1",
    b: Optional[BilinearForm3] = None,
    b2: Optional[BilinearForm3] = None,
) -> Similarity:
    """Similarity ``(g, l)`` from ``q`` to ``q2`` whose induced C_0 map is ``phi``.

    ``g = (l^-1 r) * (N^T)^-1`` with ``N`` the Lambda^2 block of ``phi``,
    ``d = det N`` and ``r`` a square root of ``l^3 d``:

    * ``sprime``   -- ``l = 1``; ``r = 1`` if ``d = 1``, else the first square root of ``d``.
    * ``s:n``      -- ``l = d^n``; ``r`` the first square root of ``d^(3n+1)``.
    * ``splus:n``  -- ``l = d^n``; ``r = d^((3n+1)/2)``.
    """
    R = q.ring
    name, n = parse_variant(variant)
    N = transfer_to_lambda2(phi, q, q2, b, b2)
    d = la.det(R, N)
    if name == "sprime":
        l = R.one
        if d == R.one:
            r = R.one
        else:
            roots = unit_square_roots(R, d)
            if not roots:
                raise SquareRootUnavailable(f"det = {R.format(d)} is not a square in {R.descriptor}")
            r = roots[0]
    elif name == "s":
        l = R.pow(d, n)
        roots = unit_square_roots(R, R.pow(d, 3 * n + 1))
        if not roots:
            raise SquareRootUnavailable(f"no square root of det^{3 * n + 1} in {R.descriptor}")
        r = roots[0]
    else:
        l = R.pow(d, n)
        r = R.pow(d, (3 * n + 1) // 2)
    g0 = la.inverse(R, la.transpose(N))
    g = la.scale(R, R.mul(R.inv(l), r), g0)
    s = Similarity(R, g, l)
    if not is_similarity(s, q, q2):
        raise NotASimilarity("lifted pair is not a similarity; phi is not induced by one")
    return s


def psi_between(b: BilinearForm3, q: QuadraticForm3):
    """Clifford-side matrix of ``psi_b : C_0(q + q_b) -> C_0(q)`` via the tensor recursion."""
    R = q.ring
    table = CliffordTable(q)
    cols = []
    for word in EVEN_WORDS:
        img = psi_tensor(R, b, {word: R.one})
        el = CliffordElement(R, tuple([R.zero] * 8))
        for w, c in img.items():
            el = el + table.reduce_word(w).scale(c)
        cols.append(el.even_part())
    return la.transpose(cols)


def psi_even_via_recursion(b: BilinearForm3):
    """``psi_b`` on the even basis words, computed with the Bourbaki recursion
    and read off in the lambda-side basis.  Independent of :func:`psi_even_matrix`."""
    R = b.ring
    zero_form = QuadraticForm3(R, (0,) * 6)
    M = psi_between(b, zero_form)
    signs = [R(s) for s in LAMBDA_SIGNS]
    return tuple(tuple(R.mul(signs[i], x) for x in row) for i, row in enumerate(M))
