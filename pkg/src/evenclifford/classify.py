"""Exhaustive classification over F_2 and F_3.

Two quadratic forms are *Witt-equivalent* when the even Clifford algebras of
some lifts are isomorphic as unital algebras; they are *orbit-equivalent*
when ``q' = l * (q o g^-1)`` for some ``g`` in GL_3 and unit ``l``.  Both
partitions are computed by brute force and compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from . import linalg as la
from .azumaya import is_azumaya
from .clifford import (
    AlgebraMap,
    AlgebraStructure4,
    c0_of_similarity,
    is_algebra_iso,
    lift_section,
    psi_even_matrix,
    upsilon,
)
from .errors import FieldTooLarge, NotAField, NotSemiregular
from .quadform import (
    QuadraticForm3,
    Similarity,
    all_forms,
    default_lift,
    half_discriminant,
    is_semiregular,
    lower_lift,
    orbit,
    orbit_equivalent,
    similarities,
)
from .ring import ResidueRing, Ring

CLASSIFY_PRIMES = (2, 3)
_CHUNK = 1 << 16


def _require_classify_field(R: Ring):
    if not R.is_field:
        raise NotAField(f"{R.descriptor} is not a field")
    if not isinstance(R, ResidueRing) or R.p not in CLASSIFY_PRIMES:
        raise FieldTooLarge(f"exhaustive classification is limited to F_2 and F_3, got {R.descriptor}")


# -- isomorphism search -------------------------------------------------------


@dataclass
class _Kernel:
    """Precomputed arrays for searching unital isomorphisms ``A -> B``."""

    p: int
    C: np.ndarray  # constants of A
    D: np.ndarray  # constants of B
    vectors: np.ndarray = field(init=False)

    def __post_init__(self):
        p = self.p
        self.vectors = np.array(list(product(range(p), repeat=4)), dtype=np.int64)

    def mul(self, x, y):
        return np.einsum("ni,nj,ijk->nk", x, y, self.D) % self.p

    def expected(self, i, j, X):
        """Image of ``f_i f_j`` under the candidate map with columns ``X[1..3]``."""
        c = self.C[i, j]
        out = np.zeros_like(X[1])
        out[:, 0] = c[0]
        for k in (1, 2, 3):
            out += c[k] * X[k]
        return out % self.p

    def blocks(self):
        """Candidate triples ``(x1, x2, x3)`` not yet excluded, in chunks.

        Images of ``f1`` and ``f2`` range over all of ``F_p^4``.  The four
        products among them pin down ``c_ij3 * x3``; when some ``c_ij3`` is
        a unit this fixes ``x3``, otherwise the four residuals must vanish
        and ``x3`` ranges over all of ``F_p^4``.  Nothing is discarded that
        could satisfy the product equations.
        """
        p, V = self.p, self.vectors
        n = len(V)
        X1 = np.repeat(V, n, axis=0)
        X2 = np.tile(V, (n, 1))
        X = {1: X1, 2: X2}
        resid = {}
        for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)):
            c = self.C[i, j]
            r = self.mul(X[i], X[j])
            r[:, 0] -= c[0]
            r = (r - c[1] * X1 - c[2] * X2) % p
            resid[(i, j)] = r
        pivot = next(((i, j) for (i, j) in resid if self.C[i, j, 3] % p), None)
        if pivot is not None:
            inv = pow(int(self.C[pivot][3]), -1, p)
            X3 = (resid[pivot] * inv) % p
            for s in range(0, len(X1), _CHUNK):
                yield X1[s : s + _CHUNK], X2[s : s + _CHUNK], X3[s : s + _CHUNK]
            return
        keep = np.ones(len(X1), dtype=bool)
        for r in resid.values():
            keep &= ~r.any(axis=1)
        P1, P2 = X1[keep], X2[keep]
        per = max(1, _CHUNK // n)
        for s in range(0, len(P1), per):
            a, b = P1[s : s + per], P2[s : s + per]
            m = len(a)
            yield np.repeat(a, n, axis=0), np.repeat(b, n, axis=0), np.tile(V, (m, 1))

    def check(self, X1, X2, X3):
        p = self.p
        X = {1: X1, 2: X2, 3: X3}
        ok = np.ones(len(X1), dtype=bool)
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                ok &= np.all(self.mul(X[i], X[j]) == self.expected(i, j, X), axis=1)
                if not ok.any():
                    return ok
        # first column is the unit, so invertibility is the 3x3 minor on rows 1..3
        M = np.stack([X1[:, 1:], X2[:, 1:], X3[:, 1:]], axis=2)
        det = (
            M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
            - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
            + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0])
        ) % p
        return ok & (det != 0)


def _as_map(R: Ring, x1, x2, x3) -> AlgebraMap:
    cols = [(1, 0, 0, 0), tuple(x1), tuple(x2), tuple(x3)]
    return AlgebraMap(R, la.transpose([tuple(int(v) for v in c) for c in cols]))


def find_isomorphisms(A: AlgebraStructure4, B: AlgebraStructure4, first: bool = True) -> list:
    """Unit-preserving algebra isomorphisms ``A -> B`` by exhaustive search.

    With ``first=True`` the search stops at the first hit (list of length
    0 or 1).  Every returned map is re-verified with exact arithmetic.
    """
    R = A.ring
    if B.ring != R:
        raise ValueError("algebras live over different rings")
    _require_classify_field(R)
    if not (A.is_unital() and B.is_unital()):
        raise ValueError("isomorphism search needs unital structures")
    ker = _Kernel(R.p, np.array(A.constants, dtype=np.int64), np.array(B.constants, dtype=np.int64))
    found = []
    for X1, X2, X3 in ker.blocks():
        hits = np.nonzero(ker.check(X1, X2, X3))[0]
        for h in hits:
            phi = _as_map(R, X1[h], X2[h], X3[h])
            if not is_algebra_iso(phi, A, B):  # pragma: no cover - kernel soundness guard
                raise AssertionError("vectorised search produced a non-isomorphism")
            found.append(phi)
            if first:
                return found
    return found


def are_isomorphic(A: AlgebraStructure4, B: AlgebraStructure4) -> bool:
    return bool(find_isomorphisms(A, B, first=True))


def automorphism_group(A: AlgebraStructure4) -> list:
    """All unit-preserving automorphisms of ``A`` (F_2 or F_3)."""
    return find_isomorphisms(A, A, first=False)


# -- partitions ---------------------------------------------------------------


def _canonical(classes) -> list:
    """Classes as sorted lists, ordered by their least element."""
    return sorted((sorted(c) for c in classes), key=lambda c: c[0])


@dataclass
class WittClasses:
    field: Ring
    classes: list  # sorted lists of coefficient tuples
    representatives: list  # least member of each class
    algebras: list  # Upsilon(lift(representative))


def witt_classes(
    field: Ring, lift: Callable = default_lift, check_lifts: bool = True
) -> WittClasses:
    """Group all forms by the isomorphism class of Upsilon(lift(q)).

    Forms are visited in lexicographic order and compared with the
    representative of every class found so far, so each representative is
    the least member of its class.  A form joins at most one class, so the
    order in which classes are tried does not affect the result.  With
    ``check_lifts`` each form also has ``psi_{b'} psi_b^-1`` verified as an
    isomorphism between its upper and lower lifts.
    """
    _require_classify_field(field)
    reps: list = []
    algebras: list = []
    members: list = []
    for q in all_forms(field):
        b = lift(q)
        A = upsilon(b)
        if check_lifts:
            _check_lift_independence(q)
        # most populous classes first: same answer, fewer failed searches
        for idx in sorted(range(len(algebras)), key=lambda k: -len(members[k])):
            if are_isomorphic(A, algebras[idx]):
                members[idx].append(q.coeffs)
                break
        else:
            reps.append(q.coeffs)
            algebras.append(A)
            members.append([q.coeffs])
    return WittClasses(field, [sorted(m) for m in members], reps, algebras)


def _check_lift_independence(q: QuadraticForm3):
    R = q.ring
    b, b2 = default_lift(q), lower_lift(q)
    phi = AlgebraMap(R, la.matmul(R, psi_even_matrix(b2), la.inverse(R, psi_even_matrix(b))))
    if not is_algebra_iso(phi, upsilon(b), upsilon(b2)):
        raise AssertionError(f"lifts of {q.coeffs} give non-isomorphic algebras")


def witt_partition(field: Ring, lift: Callable = default_lift) -> list:
    return _canonical(witt_classes(field, lift).classes)


def orbit_partition(field: Ring, check_witnesses: bool = True) -> list:
    """Partition of all forms into ``q -> l * (q o g^-1)`` orbits.

    With ``check_witnesses`` every member gets an explicit witness ``(g, l)``
    from its class representative, and ``d0(q') = l^3 det(g)^-2 d0(q)`` is
    asserted for it.
    """
    _require_classify_field(field)
    seen: dict = {}
    classes: list = []
    for q in all_forms(field):
        if q.coeffs in seen:
            continue
        orb = orbit(q)
        for c in orb:
            seen[c] = len(classes)
        classes.append(orb)
        if check_witnesses:
            for c in sorted(orb):
                _check_orbit_witness(q, QuadraticForm3(field, c))
    return _canonical(classes)


def _check_orbit_witness(q: QuadraticForm3, q2: QuadraticForm3):
    R = q.ring
    ok, s = orbit_equivalent(q, q2)
    if not ok:
        raise AssertionError(f"{q2.coeffs} listed in the orbit of {q.coeffs} without a witness")
    dg = la.det(R, s.g)
    expect = R.mul(R.mul(R.pow(s.l, 3), R.pow(dg, -2)), half_discriminant(q))
    if half_discriminant(q2) != expect:
        raise AssertionError(f"half-discriminant law fails for witness {q.coeffs} -> {q2.coeffs}")


def verify_bijection(field: Ring) -> dict:
    """Compare the Witt and orbit partitions and the Azumaya classes.

    Returns the report with an extra ``"pass"`` key.
    """
    wc = witt_classes(field)
    witt = _canonical(wc.classes)
    orb = orbit_partition(field)
    lower = witt_partition(field, lift=lower_lift)
    semiregular = set()
    azumaya = set()
    for rep, A in zip(wc.representatives, wc.algebras):
        q = QuadraticForm3(field, rep)
        if is_semiregular(q):
            semiregular.add(rep)
        if is_azumaya(A):
            azumaya.add(rep)
    report = {
        "field": field.descriptor,
        "forms": field.size**6,
        "witt_classes": len(witt),
        "orbit_classes": len(orb),
        "equal": witt == orb,
        "lift_independent": witt == lower,
        "semiregular_classes": len(semiregular),
        "azumaya_classes": len(azumaya),
        "semiregular_is_azumaya": semiregular == azumaya,
    }
    report["pass"] = bool(
        report["equal"] and report["lift_independent"] and report["semiregular_is_azumaya"]
    )
    return report


# -- orthogonal groups versus automorphisms -----------------------------------


def _mu2(R: Ring) -> list:
    return [c for c in R.units() if R.mul(c, c) == R.one]


def _is_square(R: Ring, x) -> bool:
    return any(R.mul(r, r) == x for r in R.elements())


def _sim_key(s: Similarity):
    return (s.g, s.l)


def verify_exact_rows(field: Ring, q: QuadraticForm3) -> dict:
    """Check the orthogonal-group rows for a semiregular ``q``.

    * ``O(q) -> Aut'`` is onto with kernel ``mu_2 * Id``;
    * ``GO(q) -> Aut`` is onto with kernel the scalars ``(c Id, c^2)``;
    * ``SO(q) -> S-Aut`` is bijective;
    * every automorphism has determinant 1;
    * ``s+_1`` is a homomorphism on ``Aut`` splitting ``GO -> Aut``,
      taking ``S-Aut`` into ``SO``;
    * ``|image of O| * |mu_2| = |O|``.
    """
    _require_classify_field(field)
    if q.ring != field:
        raise ValueError("form is not over the requested field")
    if not is_semiregular(q):
        raise NotSemiregular(f"{q.coeffs} is not semiregular")
    R = field
    A = upsilon(default_lift(q))
    aut = automorphism_group(A)
    aut_set = {phi.matrix for phi in aut}
    dets = {phi.matrix: phi.det for phi in aut}
    aut_prime = {m for m in aut_set if _is_square(R, dets[m])}
    s_aut = {m for m in aut_set if dets[m] == R.one}

    go = similarities(q)
    image = {}
    for s in go:
        image[_sim_key(s)] = c0_of_similarity(s, q, q).matrix
    ortho = [s for s in go if s.l == R.one]
    so = [s for s in ortho if s.det == R.one]
    ident = la.identity(R, 4)

    o_image = {image[_sim_key(s)] for s in ortho}
    o_kernel = sorted(s.g for s in ortho if image[_sim_key(s)] == ident)
    mu2 = _mu2(R)
    mu2_scalars = sorted(la.scale(R, c, la.identity(R, 3)) for c in mu2)

    go_image = {image[_sim_key(s)] for s in go}
    go_kernel = sorted(_sim_key(s) for s in go if image[_sim_key(s)] == ident)
    scalars = sorted((la.scale(R, c, la.identity(R, 3)), R.mul(c, c)) for c in R.units())

    so_images = [image[_sim_key(s)] for s in so]

    checks = {
        "images_are_automorphisms": all(m in aut_set for m in image.values()),
        "o_onto_aut_prime": o_image == aut_prime,
        "o_kernel_mu2": o_kernel == mu2_scalars,
        "go_onto_aut": go_image == aut_set,
        "go_kernel_scalars": go_kernel == scalars,
        "so_bijective_s_aut": len(set(so_images)) == len(so_images) and set(so_images) == s_aut,
        "aut_det_one": all(d == R.one for d in dets.values()),
        "counting": len(o_image) * len(mu2) == len(ortho),
    }

    lifts = {}
    for phi in aut:
        lifts[phi.matrix] = lift_section(phi, q, q, "splus:1")
    checks["splus_splits"] = all(
        c0_of_similarity(s, q, q).matrix == m for m, s in lifts.items()
    )
    checks["splus_homomorphism"] = all(
        lifts[la.matmul(R, m1, m2)] == (lifts[m1] @ lifts[m2]) for m1 in aut_set for m2 in aut_set
    )
    so_keys = {_sim_key(s) for s in so}
    checks["splus_s_aut_in_so"] = all(_sim_key(lifts[m]) in so_keys for m in s_aut)

    return {
        "field": R.descriptor,
        "form": [R.format(x) for x in q.coeffs],
        "order_go": len(go),
        "order_o": len(ortho),
        "order_so": len(so),
        "order_aut": len(aut),
        "order_aut_prime": len(aut_prime),
        "order_s_aut": len(s_aut),
        "order_mu2": len(mu2),
        "checks": checks,
        "pass": all(checks.values()),
    }


__all__ = [
    "WittClasses",
    "are_isomorphic",
    "automorphism_group",
    "find_isomorphisms",
    "orbit_partition",
    "verify_bijection",
    "verify_exact_rows",
    "witt_classes",
    "witt_partition",
]
