"""Quadratic and bilinear forms on a free rank-3 module.

Coefficient order for quadratic forms is fixed everywhere as
``(a1, a2, a3, u23, u13, u12)``, i.e. ``q(x) = sum a_i x_i^2 + sum_{i<j} u_ij x_i x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import linalg as la
from .errors import FieldTooLarge, InfiniteRing, NotASimilarity, SingularMatrix
from .ring import Ring, ResidueRing, parse_ring

# position of u_ij in the coefficient tuple, 0-based generator indices
OFFDIAG = {(1, 2): 3, (0, 2): 4, (0, 1): 5}


@dataclass(frozen=True)
class QuadraticForm3:
    ring: Ring
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 6:
            raise ValueError("a ternary quadratic form has six coefficients")
        object.__setattr__(self, "coeffs", tuple(self.ring(c) for c in self.coeffs))

    def a(self, i):
        return self.coeffs[i]

    def u(self, i, j):
        if i == j:
            raise ValueError("u_ij needs i != j")
        return self.coeffs[OFFDIAG[(min(i, j), max(i, j))]]

    def __call__(self, x):
        R = self.ring
        x = [R(v) for v in x]
        total = R.sum(R.mul(self.coeffs[i], R.mul(x[i], x[i])) for i in range(3))
        for (i, j), k in OFFDIAG.items():
            total = R.add(total, R.mul(self.coeffs[k], R.mul(x[i], x[j])))
        return total

    def scaled(self, lam):
        R = self.ring
        return QuadraticForm3(R, tuple(R.mul(R(lam), c) for c in self.coeffs))

    def to_dict(self):
        return {"ring": self.ring.descriptor, "coeffs": [self.ring.format(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, data):
        R = parse_ring(data["ring"])
        return cls(R, tuple(R.parse(str(c)) for c in data["coeffs"]))

    @classmethod
    def parse(cls, ring: Ring, text: str):
        parts = [p for p in text.split(",")]
        if len(parts) != 6:
            raise ValueError(f"expected 6 comma-separated coefficients, got {len(parts)}")
        return cls(ring, tuple(ring.parse(p) for p in parts))


@dataclass(frozen=True)
class BilinearForm3:
    """``b(x, y) = sum_ij matrix[i][j] x_i y_j``; not assumed symmetric."""

    ring: Ring
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(self.ring(x) for x in row) for row in self.matrix)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("bilinear form needs a 3x3 matrix")
        object.__setattr__(self, "matrix", rows)

    def __call__(self, x, y):
        R = self.ring
        return R.sum(
            R.mul(self.matrix[i][j], R.mul(R(x[i]), R(y[j]))) for i in range(3) for j in range(3)
        )

    def __add__(self, other):
        return BilinearForm3(self.ring, la.add(self.ring, self.matrix, other.matrix))

    def __neg__(self):
        return BilinearForm3(self.ring, la.neg(self.ring, self.matrix))

    def transpose(self):
        return BilinearForm3(self.ring, la.transpose(self.matrix))

    def to_dict(self):
        fmt = self.ring.format
        return {"ring": self.ring.descriptor, "matrix": [[fmt(x) for x in row] for row in self.matrix]}

    @classmethod
    def from_dict(cls, data):
        R = parse_ring(data["ring"])
        return cls(R, tuple(tuple(R.parse(str(x)) for x in row) for row in data["matrix"]))

    @classmethod
    def parse(cls, ring: Ring, text: str):
        """Nine comma-separated entries, row-major."""
        parts = text.split(",")
        if len(parts) != 9:
            raise ValueError(f"expected 9 comma-separated entries, got {len(parts)}")
        vals = [ring.parse(p) for p in parts]
        return cls(ring, (tuple(vals[0:3]), tuple(vals[3:6]), tuple(vals[6:9])))


@dataclass(frozen=True)
class Similarity:
    """A pair ``(g, l)``: invertible ``g`` with unit multiplier ``l``."""

    ring: Ring
    g: tuple
    l: object

    def __post_init__(self):
        R = self.ring
        object.__setattr__(self, "g", la.mat(R, self.g))
        object.__setattr__(self, "l", R(self.l))
        if not la.is_invertible(R, self.g):
            raise SingularMatrix("similarity matrix is not invertible")
        if not R.is_unit(self.l)[0]:
            raise NotASimilarity(f"multiplier {R.format(self.l)} is not a unit")

    def __matmul__(self, other: "Similarity") -> "Similarity":
        """``self @ other`` applies ``other`` first."""
        R = self.ring
        return Similarity(R, la.matmul(R, self.g, other.g), R.mul(self.l, other.l))

    @property
    def det(self):
        return la.det(self.ring, self.g)

    @classmethod
    def identity(cls, ring):
        return cls(ring, la.identity(ring, 3), ring.one)


@dataclass(frozen=True)
class DiscriminantTwist:
    """Free-module twisted discriminant bundle: multiplication by the unit ``lam``."""

    ring: Ring
    lam: object

    def __post_init__(self):
        object.__setattr__(self, "lam", self.ring(self.lam))
        if not self.ring.is_unit(self.lam)[0]:
            raise NotASimilarity(f"twist {self.ring.format(self.lam)} is not a unit")


# -- forms <-> bilinear forms -------------------------------------------------


def induced_quadratic(b: BilinearForm3) -> QuadraticForm3:
    R, m = b.ring, b.matrix
    coeffs = [m[0][0], m[1][1], m[2][2], None, None, None]
    for (i, j), k in OFFDIAG.items():
        coeffs[k] = R.add(m[i][j], m[j][i])
    return QuadraticForm3(R, tuple(coeffs))


def polar_bilinear(q: QuadraticForm3) -> BilinearForm3:
    R = q.ring
    rows = [[R.zero] * 3 for _ in range(3)]
    for i in range(3):
        rows[i][i] = R.add(q.a(i), q.a(i))
    for (i, j), k in OFFDIAG.items():
        rows[i][j] = rows[j][i] = q.coeffs[k]
    return BilinearForm3(R, tuple(map(tuple, rows)))


def default_lift(q: QuadraticForm3) -> BilinearForm3:
    """Upper-triangular bilinear form inducing ``q``."""
    R = q.ring
    rows = [[R.zero] * 3 for _ in range(3)]
    for i in range(3):
        rows[i][i] = q.a(i)
    for (i, j), k in OFFDIAG.items():
        rows[i][j] = q.coeffs[k]
    return BilinearForm3(R, tuple(map(tuple, rows)))


def lower_lift(q: QuadraticForm3) -> BilinearForm3:
    """Lower-triangular bilinear form inducing ``q`` (the second lift scheme)."""
    return default_lift(q).transpose()


def gl_act_bilinear(g, b: BilinearForm3) -> BilinearForm3:
    """``(g.b)(x, y) = b(g^-1 x, g^-1 y)``."""
    R = b.ring
    h = la.inverse(R, g)
    return BilinearForm3(R, la.matmul(R, la.transpose(h), la.matmul(R, b.matrix, h)))


def compose_linear(q: QuadraticForm3, h) -> QuadraticForm3:
    """The form ``x -> q(h x)``."""
    R = q.ring
    B = default_lift(q).matrix
    return induced_quadratic(BilinearForm3(R, la.matmul(R, la.transpose(h), la.matmul(R, B, h))))


def act_similarity(s: Similarity, q: QuadraticForm3) -> QuadraticForm3:
    """``q'(y) = l q(g^-1 y)``, the target making ``s`` a similarity ``q -> q'``."""
    R = q.ring
    h = la.inverse(R, s.g)
    return compose_linear(q, h).scaled(s.l)


def is_similarity(s: Similarity, q: QuadraticForm3, q2: QuadraticForm3) -> bool:
    """Check ``q2(g x) = l q(x)`` on the six coefficient identities."""
    return compose_linear(q2, s.g) == q.scaled(s.l)


def check_similarity(s: Similarity, q: QuadraticForm3, q2: QuadraticForm3):
    if not is_similarity(s, q, q2):
        raise NotASimilarity("q'(g x) != l q(x)")


# -- half-discriminant ----------------------------------------------------------


def half_discriminant(q: QuadraticForm3):
    """``4 a1 a2 a3 + u23 u13 u12 - a1 u23^2 - a2 u13^2 - a3 u12^2``.

    Equals half the determinant of the polar Gram matrix, computed without
    dividing by 2 so it is meaningful in characteristic 2.
    """
    R = q.ring
    a1, a2, a3, u23, u13, u12 = q.coeffs
    m = R.mul
    val = R.mul(R(4), m(a1, m(a2, a3)))
    val = R.add(val, m(u23, m(u13, u12)))
    val = R.sub(val, m(a1, m(u23, u23)))
    val = R.sub(val, m(a2, m(u13, u13)))
    val = R.sub(val, m(a3, m(u12, u12)))
    return val


def is_semiregular(q: QuadraticForm3) -> bool:
    return q.ring.is_unit(half_discriminant(q))[0]


def twist(q: QuadraticForm3, t: DiscriminantTwist) -> QuadraticForm3:
    return q.scaled(t.lam)


# -- finite-ring group enumeration --------------------------------------------

_NUMPY_GL_LIMIT = 2_000_000  # n**9 entries at most
_PYTHON_GL_LIMIT = 300_000


def _require_finite(ring):
    if not ring.is_finite:
        raise InfiniteRing(f"{ring.descriptor} is infinite")


@lru_cache(maxsize=None)
def _gl3_array(n: int, p: int):
    """All invertible 3x3 matrices mod ``n`` (a power of ``p``), row-major lex order."""
    if n**9 > _NUMPY_GL_LIMIT:
        raise FieldTooLarge(f"GL3 enumeration over Z/{n} exceeds the desk-scale budget")
    vals = np.arange(n, dtype=np.int64)
    grids = np.stack(np.meshgrid(*([vals] * 9), indexing="ij"), axis=-1).reshape(-1, 3, 3)
    d = _det3_np(grids) % n
    mats = grids[d % p != 0]
    mats.setflags(write=False)
    return mats


def _det3_np(m):
    return (
        m[:, 0, 0] * (m[:, 1, 1] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 1])
        - m[:, 0, 1] * (m[:, 1, 0] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 0])
        + m[:, 0, 2] * (m[:, 1, 0] * m[:, 2, 1] - m[:, 1, 1] * m[:, 2, 0])
    )


def _compose_all_np(coeffs, H, n):
    """Coefficient rows of ``q o h`` for every ``h`` in the stack ``H``."""
    a1, a2, a3, u23, u13, u12 = coeffs
    B = np.array([[a1, u12, u13], [0, a2, u23], [0, 0, a3]], dtype=np.int64)
    C = np.einsum("nki,kl,nlj->nij", H, B, H) % n
    return np.stack(
        [C[:, 0, 0], C[:, 1, 1], C[:, 2, 2], C[:, 1, 2] + C[:, 2, 1], C[:, 0, 2] + C[:, 2, 0], C[:, 0, 1] + C[:, 1, 0]],
        axis=1,
    ) % n


def gl3_elements(ring: Ring):
    """All of GL_3 over a finite ring, as tuples of row tuples."""
    _require_finite(ring)
    if isinstance(ring, ResidueRing):
        return [tuple(map(tuple, m.tolist())) for m in _gl3_array(ring.n, ring.p)]
    if ring.size**9 > _PYTHON_GL_LIMIT:
        raise FieldTooLarge(f"GL3 enumeration over {ring.descriptor} exceeds the desk-scale budget")
    elems = list(ring.elements())
    out = []
    for entries in product(elems, repeat=9):
        g = (entries[0:3], entries[3:6], entries[6:9])
        if la.is_invertible(ring, g):
            out.append(g)
    return out


def orbit(q: QuadraticForm3) -> set:
    """Coefficient tuples of all ``lam * (q o h)``, ``h`` in GL_3, ``lam`` a unit."""
    R = q.ring
    _require_finite(R)
    units = R.units()
    if isinstance(R, ResidueRing):
        base = _compose_all_np(q.coeffs, _gl3_array(R.n, R.p), R.n)
        base = np.unique(base, axis=0)
        out = set()
        for lam in units:
            out.update(map(tuple, ((lam * base) % R.n).tolist()))
        return out
    out = set()
    for h in gl3_elements(R):
        qh = compose_linear(q, h)
        for lam in units:
            out.add(qh.scaled(lam).coeffs)
    return out


def orbit_equivalent(q: QuadraticForm3, q2: QuadraticForm3):
    """Search ``g`` in GL_3 and units ``l`` with ``q2 = l * (q o g^-1)``.

    Returns ``(True, Similarity)`` with a witness, or ``(False, None)``.
    """
    R = q.ring
    _require_finite(R)
    if q == q2:
        return True, Similarity.identity(R)
    units = R.units()
    if isinstance(R, ResidueRing):
        H = _gl3_array(R.n, R.p)
        base = _compose_all_np(q.coeffs, H, R.n)
        target = np.array(q2.coeffs, dtype=np.int64)
        for lam in units:
            hits = np.nonzero(np.all((lam * base) % R.n == target, axis=1))[0]
            if hits.size:
                h = tuple(map(tuple, H[hits[0]].tolist()))
                return True, Similarity(R, la.inverse(R, h), lam)
        return False, None
    for h in gl3_elements(R):
        qh = compose_linear(q, h)
        for lam in units:
            if qh.scaled(lam) == q2:
                return True, Similarity(R, la.inverse(R, h), lam)
    return False, None


def similarities(q: QuadraticForm3, q2: QuadraticForm3 | None = None) -> list:
    """Every similarity ``q -> q2`` (default ``q2 = q``, giving GO(q)) over a finite ring."""
    R = q.ring
    _require_finite(R)
    q2 = q if q2 is None else q2
    out = []
    if isinstance(R, ResidueRing):
        H = _gl3_array(R.n, R.p)
        # l * q(h y) = q2(y)  with h = g^-1
        base = _compose_all_np(q.coeffs, H, R.n)
        target = np.array(q2.coeffs, dtype=np.int64)
        for lam in R.units():
            for idx in np.nonzero(np.all((lam * base) % R.n == target, axis=1))[0]:
                h = tuple(map(tuple, H[idx].tolist()))
                out.append(Similarity(R, la.inverse(R, h), lam))
        return out
    for h in gl3_elements(R):
        qh = compose_linear(q, h)
        for lam in R.units():
            if qh.scaled(lam) == q2:
                out.append(Similarity(R, la.inverse(R, h), lam))
    return out


def all_forms(ring: Ring):
    """Every quadratic form over a finite ring, in lexicographic coefficient order."""
    _require_finite(ring)
    elems = list(ring.elements())
    return [QuadraticForm3(ring, c) for c in product(elems, repeat=6)]


def all_bilinear(ring: Ring):
    _require_finite(ring)
    elems = list(ring.elements())
    return [
        BilinearForm3(ring, (c[0:3], c[3:6], c[6:9])) for c in product(elems, repeat=9)
    ]
