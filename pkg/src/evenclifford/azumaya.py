"""Specialised rank-4 algebras: Azumaya test, inverse of Upsilon, realisation as C_0."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from . import linalg as la
from ._upsilon_poly import recover_entries
from .clifford import AlgebraMap, AlgebraStructure4, block_matrix, is_algebra_iso, lambda2_matrix, upsilon
from .errors import FieldTooLarge, NotAField, NotSpecialized
from .quadform import (
    BilinearForm3,
    DiscriminantTwist,
    all_bilinear,
    half_discriminant,
    induced_quadratic,
    is_semiregular,
)
from .ring import ResidueRing, Ring, prime_field

MAX_AZUMAYA_P = 5


def center(A: AlgebraStructure4):
    """Solve ``x f_j = f_j x`` (j = 1..3); returns ``(dimension, echelon basis)``."""
    R = A.ring
    if not R.is_field:
        raise NotAField(f"{R.descriptor} is not a field")
    c = A.constants
    rows = []
    for j in range(1, 4):
        for k in range(4):
            rows.append(tuple(R.sub(c[i][j][k], c[j][i][k]) for i in range(4)))
    basis = la.nullspace(R, rows)
    return len(basis), basis


def _require_small_field(R: Ring):
    if not R.is_field:
        raise NotAField(f"{R.descriptor} is not a field")
    if not isinstance(R, ResidueRing) or R.p > MAX_AZUMAYA_P:
        raise FieldTooLarge(f"ideal enumeration needs a prime field with p <= {MAX_AZUMAYA_P}")


@lru_cache(maxsize=None)
def echelon_subspaces(p: int, n: int = 4):
    """Every subspace of ``F_p^n`` as its reduced-echelon basis (tuple of rows).

    The count is the sum of Gaussian binomials: 67 for ``(2, 4)``, 212 for
    ``(3, 4)``, 1120 for ``(5, 4)``.
    """
    out = []
    for d in range(n + 1):
        for pivots in combinations(range(n), d):
            free_slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
            for vals in product(range(p), repeat=len(free_slots)):
                rows = [[0] * n for _ in range(d)]
                for r, pc in enumerate(pivots):
                    rows[r][pc] = 1
                for (r, c), v in zip(free_slots, vals):
                    rows[r][c] = v
                out.append(tuple(map(tuple, rows)))
    return tuple(out)


@lru_cache(maxsize=None)
def _proper_subspace_stacks(p: int):
    """Per dimension d in 1..3: (bases (S, d, 4), annihilators (S, 4-d, 4)) as arrays."""
    F = prime_field(p)
    stacks = {}
    for U in echelon_subspaces(p):
        d = len(U)
        if d in (0, 4):
            continue
        K = la.nullspace(F, U)  # w with U w = 0; v in U iff K v = 0
        stacks.setdefault(d, ([], [], []))
        stacks[d][0].append(U)
        stacks[d][1].append(K)
    return {
        d: (np.array(Us, dtype=np.int64), np.array(Ks, dtype=np.int64), Us)
        for d, (Us, Ks, _) in stacks.items()
    }


def _mult_matrices(A: AlgebraStructure4):
    """Left and right multiplication by f_1..f_3 as integer arrays (6, 4, 4)."""
    c = np.array(A.constants, dtype=np.int64)
    left = [c[j].T for j in range(1, 4)]  # column i = f_j f_i
    right = [c[:, j, :].T for j in range(1, 4)]  # column i = f_i f_j
    return np.stack(left + right)


def find_ideal(A: AlgebraStructure4):
    """A proper nonzero two-sided ideal (echelon basis), or ``None``.

    Exhaustive over all subspaces of the 4-dimensional algebra.
    """
    R = A.ring
    _require_small_field(R)
    p = R.p
    X = _mult_matrices(A)
    for d, (U, K, raw) in sorted(_proper_subspace_stacks(p).items()):
        # K @ X @ U^T must vanish for every multiplier X
        test = np.einsum("sak,xkl,sbl->sxab", K, X, U) % p
        hits = np.nonzero(~test.reshape(len(U), -1).any(axis=1))[0]
        if hits.size:
            return raw[hits[0]]
    return None


def is_azumaya(A: AlgebraStructure4) -> bool:
    """Central (centre of dimension 1) and simple (no proper two-sided ideal)."""
    _require_small_field(A.ring)
    dim, _ = center(A)
    if dim != 1:
        return False
    return find_ideal(A) is None


def recover_bilinear(A: AlgebraStructure4) -> BilinearForm3:
    """The unique ``B`` with ``upsilon(B) == A``; raises :class:`NotSpecialized` otherwise."""
    R = A.ring
    B = BilinearForm3(R, recover_entries(R, A.constants))
    if upsilon(B) != A:
        raise NotSpecialized("structure is not in the image of Upsilon")
    return B


def realize_as_c0(A: AlgebraStructure4):
    """``(q, twist)`` with ``A`` isomorphic to C_0(q); the twist is trivial in the free case."""
    B = recover_bilinear(A)
    R = A.ring
    if not is_algebra_iso(AlgebraMap.identity(R), A, upsilon(B)):
        raise NotSpecialized("identity is not an isomorphism onto Upsilon(B)")
    return induced_quadratic(B), DiscriminantTwist(R, R.one)


def gl_act_algebra(A: AlgebraStructure4, g) -> AlgebraStructure4:
    """Transport ``A`` along ``diag(1, Lambda^2 g)``."""
    R = A.ring
    return A.transport(block_matrix(R, (R.zero,) * 3, lambda2_matrix(R, g)))


def find_non_specialized(ring: Ring, max_tables: int = 64):
    """Search for a unital associative structure outside the image of Upsilon.

    Perturbs single non-unit structure constants of Upsilon(B) for ``B`` in
    enumeration order and keeps the first associative result that
    :func:`recover_bilinear` rejects.  Returns ``None`` if nothing is found
    within ``max_tables`` starting tables.
    """
    elems = list(ring.elements())
    for n, B in enumerate(all_bilinear(ring)):
        if n >= max_tables:
            break
        base = [[list(row) for row in plane] for plane in upsilon(B).constants]
        for i, j, k in product(range(1, 4), range(1, 4), range(4)):
            for v in elems:
                if v == base[i][j][k]:
                    continue
                trial = [[list(row) for row in plane] for plane in base]
                trial[i][j][k] = v
                A = AlgebraStructure4(ring, trial)
                if not (A.is_unital() and A.is_associative()):
                    continue
                try:
                    recover_bilinear(A)
                except NotSpecialized:
                    return A
    return None


def _sweep_record(B: BilinearForm3):
    q = induced_quadratic(B)
    R = B.ring
    semi = is_semiregular(q)
    azu = is_azumaya(upsilon(B))
    return {
        "B": B.to_dict()["matrix"],
        "d0": R.format(half_discriminant(q)),
        "semiregular": semi,
        "azumaya": azu,
        "agree": semi == azu,
    }


def _sweep_chunk(args):
    descriptor, mats = args
    from .ring import parse_ring

    R = parse_ring(descriptor)
    return [_sweep_record(BilinearForm3(R, m)) for m in mats]


def semiregular_azumaya_agree(field: Ring, sample: int | None = None, seed: int = 0, jobs: int = 1):
    """Compare ``is_semiregular(q_B)`` with ``is_azumaya(Upsilon(B))``.

    Exhaustive when ``sample`` is ``None``, otherwise ``sample`` bilinear forms
    drawn with ``random.Random(seed)``.  Returns a report with one record per
    form (the JSON-lines payload) and aggregate counts.
    """
    _require_small_field(field)
    if sample is None:
        forms = [B.matrix for B in all_bilinear(field)]
    else:
        rng = random.Random(seed)
        forms = [
            tuple(tuple(field.random(rng) for _ in range(3)) for _ in range(3)) for _ in range(sample)
        ]
    if jobs > 1:
        # contiguous chunks keep record order independent of ``jobs``
        step = -(-len(forms) // jobs)
        chunks = [forms[i : i + step] for i in range(0, len(forms), step)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_sweep_chunk, [(field.descriptor, c) for c in chunks]))
        records = [r for part in parts for r in part]
    else:
        records = _sweep_chunk((field.descriptor, forms))
    disagreements = [r for r in records if not r["agree"]]
    return {
        "field": field.descriptor,
        "checked": len(records),
        "agreements": len(records) - len(disagreements),
        "disagreements": disagreements,
        "semiregular": sum(r["semiregular"] for r in records),
        "records": records,
    }


def realize_check_orbit(A: AlgebraStructure4, B: BilinearForm3) -> bool:
    """``realize_as_c0(A)`` lands in the orbit of ``q_B`` (finite rings)."""
    from .quadform import orbit_equivalent

    q, _ = realize_as_c0(A)
    return orbit_equivalent(q, induced_quadratic(B))[0]


__all__ = [
    "center",
    "echelon_subspaces",
    "find_ideal",
    "find_non_specialized",
    "gl_act_algebra",
    "is_azumaya",
    "realize_as_c0",
    "realize_check_orbit",
    "recover_bilinear",
    "semiregular_azumaya_agree",
]
