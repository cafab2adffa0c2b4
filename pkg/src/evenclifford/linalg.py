"""Small dense matrices over a :class:`~evenclifford.ring.Ring`.

Matrices are tuples of row tuples.  Determinants and inverses use cofactor
expansion so they are valid over any commutative ring; elimination routines
(`rref`, `nullspace`) require a field.
"""

from __future__ import annotations

from itertools import permutations

from .errors import NotAField, SingularMatrix


def mat(ring, rows):
    return tuple(tuple(ring(x) for x in row) for row in rows)


def identity(ring, n):
    return tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n))


def zeros(ring, n, m=None):
    m = n if m is None else m
    return tuple(tuple(ring.zero for _ in range(m)) for _ in range(n))


def diag(ring, entries):
    n = len(entries)
    return tuple(
        tuple(ring(entries[i]) if i == j else ring.zero for j in range(n)) for i in range(n)
    )


def transpose(A):
    return tuple(zip(*A))


def matmul(ring, A, B):
    Bt = transpose(B)
    add, mul = ring.add, ring.mul
    out = []
    for row in A:
        new = []
        for col in Bt:
            acc = ring.zero
            for x, y in zip(row, col):
                acc = add(acc, mul(x, y))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def matvec(ring, A, v):
    return tuple(ring.sum(ring.mul(a, x) for a, x in zip(row, v)) for row in A)


def scale(ring, c, A):
    return tuple(tuple(ring.mul(c, x) for x in row) for row in A)


def add(ring, A, B):
    return tuple(tuple(ring.add(x, y) for x, y in zip(r, s)) for r, s in zip(A, B))


def neg(ring, A):
    return tuple(tuple(ring.neg(x) for x in row) for row in A)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


_PERMS = {n: [(p, _perm_sign(p)) for p in permutations(range(n))] for n in range(1, 5)}


def det(ring, A):
    n = len(A)
    if n == 0:
        return ring.one
    total = ring.zero
    for perm, sign in _PERMS[n]:
        term = ring.one
        for i in range(n):
            term = ring.mul(term, A[i][perm[i]])
        total = ring.add(total, term) if sign > 0 else ring.sub(total, term)
    return total


def minor(A, i, j):
    return tuple(tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(A) if r != i)


def adjugate(ring, A):
    n = len(A)
    if n == 1:
        return ((ring.one,),)
    cof = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = det(ring, minor(A, i, j))
            cof[i][j] = d if (i + j) % 2 == 0 else ring.neg(d)
    return transpose(cof)


def inverse(ring, A):
    d = det(ring, A)
    ok, dinv = ring.is_unit(d)
    if not ok:
        raise SingularMatrix(f"determinant {ring.format(d)} is not a unit")
    return scale(ring, dinv, adjugate(ring, A))


def is_invertible(ring, A) -> bool:
    return ring.is_unit(det(ring, A))[0]


def rref(ring, rows):
    """Reduced row echelon form of a list of row vectors; returns (rows, pivots)."""
    if not ring.is_field:
        raise NotAField(f"{ring.descriptor} is not a field")
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if not ring.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = ring.inv(M[r][c])
        M[r] = [ring.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and not ring.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]], pivots


def nullspace(ring, A):
    """Basis (echelon-normalised) of ``{x : A x = 0}``."""
    ncols = len(A[0])
    R, pivots = rref(ring, A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero] * ncols
        v[f] = ring.one
        for row, pc in zip(R, pivots):
            v[pc] = ring.neg(row[f])
        basis.append(tuple(v))
    # present the basis in reduced echelon form as well
    if basis:
        basis, _ = rref(ring, basis)
    return basis
