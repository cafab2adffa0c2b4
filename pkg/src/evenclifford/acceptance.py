"""The acceptance suites, one function per criterion.

Every suite takes an :class:`AcceptanceConfig` and returns a
:class:`SuiteResult`.  All randomness flows from ``random.Random(cfg.seed)``
re-seeded per suite, so suites are reproducible individually and in any
order.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import linalg as la
from .azumaya import find_non_specialized, recover_bilinear, semiregular_azumaya_agree
from .classify import verify_bijection, verify_exact_rows
from .clifford import (
    base_change_algebra,
    base_change_bilinear,
    c0_of_similarity,
    lift_section,
    opposite,
    psi_even_matrix,
    psi_even_via_recursion,
    t_tensor,
    tensor_add,
    transfer_to_lambda2,
    upsilon,
)
from .errors import NotSpecialized, SquareRootUnavailable
from .quadform import (
    BilinearForm3,
    QuadraticForm3,
    Similarity,
    act_similarity,
    all_bilinear,
    all_forms,
    compose_linear,
    gl3_elements,
    half_discriminant,
)
from .ring import QQ, ZZ, Ring, parse_ring, prime_field

F2, F3, F5 = prime_field(2), prime_field(3), prime_field(5)


@dataclass
class AcceptanceConfig:
    seed: int = 0
    jobs: int = 1
    det_identity_samples: int = 500
    section_samples: int = 200
    section_pairs: int = 100
    azumaya_f5_samples: int = 2000
    involution_samples: int = 1000
    inverse_samples: int = 1000
    base_change_samples: int = 500
    half_disc_samples: int = 500
    bourbaki_samples: int = 200
    bourbaki_word_samples: int = 200
    exact_row_forms: dict = field(
        default_factory=lambda: {
            "fp:2": [(0, 0, 1, 0, 0, 1), (1, 1, 1, 0, 0, 1)],
            "fp:3": [(1, 1, 1, 0, 0, 0), (0, 0, 1, 0, 0, 1)],
        }
    )


@dataclass
class SuiteResult:
    number: int
    name: str
    passed: bool
    details: dict
    seconds: float = 0.0

    def to_dict(self):
        return asdict(self)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}"


# -- sampling -----------------------------------------------------------------


def random_element(R: Ring, rng: random.Random):
    return R.random(rng)


def random_unit(R: Ring, rng: random.Random):
    while True:
        x = R.random(rng)
        if R.is_unit(x)[0]:
            return x


def random_matrix(R: Ring, rng: random.Random, n: int = 3):
    return tuple(tuple(R.random(rng) for _ in range(n)) for _ in range(n))


def random_invertible(R: Ring, rng: random.Random):
    while True:
        g = random_matrix(R, rng)
        if la.is_invertible(R, g):
            return g


def random_form(R: Ring, rng: random.Random) -> QuadraticForm3:
    return QuadraticForm3(R, tuple(R.random(rng) for _ in range(6)))


def random_bilinear(R: Ring, rng: random.Random) -> BilinearForm3:
    return BilinearForm3(R, random_matrix(R, rng))


def random_similarity(R: Ring, rng: random.Random) -> Similarity:
    return Similarity(R, random_invertible(R, rng), random_unit(R, rng))


def _rng(cfg: AcceptanceConfig, number: int) -> random.Random:
    return random.Random(f"{cfg.seed}:{number}")


# -- suites -------------------------------------------------------------------


def f2_bijection(cfg: AcceptanceConfig):
    rep = verify_bijection(F2)
    return rep["pass"], rep


def f3_bijection(cfg: AcceptanceConfig):
    rep = verify_bijection(F3)
    return rep["pass"], rep


def det_identity(cfg: AcceptanceConfig):
    rng = _rng(cfg, 3)
    details = {}
    ok = True
    for R in (F5, QQ):
        bad = 0
        for _ in range(cfg.det_identity_samples):
            q = random_form(R, rng)
            s = random_similarity(R, rng)
            q2 = act_similarity(s, q)
            N = transfer_to_lambda2(c0_of_similarity(s, q), q, q2)
            expect = R.mul(R.pow(s.l, -3), R.pow(s.det, 2))
            bad += la.det(R, N) != expect
        details[R.descriptor] = {"checked": cfg.det_identity_samples, "failures": bad}
        ok &= bad == 0
    return ok, details


def _equal_up_to_mu2(R, s, t):
    if s.l != t.l:
        return False
    return any(la.scale(R, c, t.g) == s.g for c in R.units() if R.mul(c, c) == R.one)


def section(cfg: AcceptanceConfig):
    R = F5
    rng = _rng(cfg, 4)
    fails = {"splits": 0, "multiplier": 0}
    for _ in range(cfg.section_samples):
        q = random_form(R, rng)
        s = random_similarity(R, rng)
        q2 = act_similarity(s, q)
        phi = c0_of_similarity(s, q)
        lifted = lift_section(phi, q, q2, "splus:1")
        fails["splits"] += c0_of_similarity(lifted, q, q2).matrix != phi.matrix
        fails["multiplier"] += lifted.l != la.det(R, phi.lambda2_block())
    mult = {"splus:1": 0, "splus:3": 0, "s:1": 0, "s:3": 0, "sprime": 0}
    sprime_skipped = 0
    for _ in range(cfg.section_pairs):
        q1 = random_form(R, rng)
        s1, s2 = random_similarity(R, rng), random_similarity(R, rng)
        q2 = act_similarity(s1, q1)
        q3 = act_similarity(s2, q2)
        p1, p2 = c0_of_similarity(s1, q1, q2), c0_of_similarity(s2, q2, q3)
        p21 = p2 @ p1
        for v in mult:
            try:
                a = lift_section(p1, q1, q2, v)
                b = lift_section(p2, q2, q3, v)
                c = lift_section(p21, q1, q3, v)
            except SquareRootUnavailable:
                sprime_skipped += 1
                continue
            if v.startswith("splus"):
                mult[v] += c != (b @ a)
            else:
                mult[v] += not _equal_up_to_mu2(R, c, b @ a)
    details = {
        "samples": cfg.section_samples,
        "pairs": cfg.section_pairs,
        "failures": fails,
        "multiplicativity_failures": mult,
        "sprime_pairs_outside_domain": sprime_skipped,
    }
    ok = not any(fails.values()) and not any(mult.values())
    return ok, details


def semiregular_azumaya(cfg: AcceptanceConfig):
    details = {}
    ok = True
    for R, sample in ((F2, None), (F3, None), (F5, cfg.azumaya_f5_samples)):
        rep = semiregular_azumaya_agree(R, sample=sample, seed=cfg.seed, jobs=cfg.jobs)
        details[R.descriptor] = {
            "checked": rep["checked"],
            "agreements": rep["agreements"],
            "semiregular": rep["semiregular"],
            "disagreements": rep["disagreements"][:5],
        }
        ok &= rep["agreements"] == rep["checked"]
    return ok, details


def involution(cfg: AcceptanceConfig):
    rng = _rng(cfg, 6)
    details = {}
    sources = [(F2, all_bilinear(F2))]
    for R in (F5, QQ):
        sources.append((R, [random_bilinear(R, rng) for _ in range(cfg.involution_samples)]))
    for R, forms in sources:
        bad = sum(opposite(upsilon(B)) != upsilon(-B.transpose()) for B in forms)
        details[R.descriptor] = {"checked": len(forms), "failures": bad}
    return all(d["failures"] == 0 for d in details.values()), details


def upsilon_inverse(cfg: AcceptanceConfig):
    rng = _rng(cfg, 7)
    details = {}
    sources = [(F2, all_bilinear(F2))]
    for R in (F3, F5, QQ):
        sources.append((R, [random_bilinear(R, rng) for _ in range(cfg.inverse_samples)]))
    for R, forms in sources:
        bad = sum(recover_bilinear(upsilon(B)) != B for B in forms)
        details[R.descriptor] = {"checked": len(forms), "failures": bad}
    witness = find_non_specialized(F2)
    rejected = False
    if witness is not None:
        try:
            recover_bilinear(witness)
        except NotSpecialized:
            rejected = True
    details["non_specialized_witness"] = None if witness is None else witness.to_dict()["constants"]
    details["witness_rejected"] = rejected
    ok = all(d["failures"] == 0 for k, d in details.items() if isinstance(d, dict)) and rejected
    return ok, details


def base_change(cfg: AcceptanceConfig):
    rng = _rng(cfg, 8)
    pairs = [(ZZ, F2), (ZZ, F3), (ZZ, F5), (parse_ring("dual:3"), F3)]
    details = {}
    for src, dst in pairs:
        bad = 0
        for _ in range(cfg.base_change_samples):
            B = random_bilinear(src, rng)
            bad += base_change_algebra(upsilon(B), dst) != upsilon(base_change_bilinear(B, dst))
        details[f"{src.descriptor}->{dst.descriptor}"] = {"checked": cfg.base_change_samples, "failures": bad}
    return all(d["failures"] == 0 for d in details.values()), details


def orthogonal_rows(cfg: AcceptanceConfig):
    details = {}
    ok = True
    for desc, forms in cfg.exact_row_forms.items():
        R = parse_ring(desc)
        for coeffs in forms:
            rep = verify_exact_rows(R, QuadraticForm3(R, coeffs))
            details[f"{desc} {coeffs}"] = rep
            ok &= rep["pass"]
    return ok, details


def _d0_laws(R, q, g, lam):
    h = la.inverse(R, g)
    d = half_discriminant(q)
    moved = half_discriminant(compose_linear(q, h)) == R.mul(R.pow(la.det(R, g), -2), d)
    scaled = half_discriminant(q.scaled(lam)) == R.mul(R.pow(lam, 3), d)
    return moved and scaled


def half_discriminant_laws(cfg: AcceptanceConfig):
    rng = _rng(cfg, 10)
    details = {}
    gl = gl3_elements(F2)
    bad = sum(not _d0_laws(F2, q, g, F2.one) for q in all_forms(F2) for g in gl)
    details["fp:2"] = {"checked": len(gl) * 64, "group_order": len(gl), "failures": bad}
    for R in (F3, F5, QQ):
        bad = 0
        for _ in range(cfg.half_disc_samples):
            bad += not _d0_laws(R, random_form(R, rng), random_invertible(R, rng), random_unit(R, rng))
        details[R.descriptor] = {"checked": cfg.half_disc_samples, "failures": bad}
    return all(d["failures"] == 0 for d in details.values()), details


def _random_tensor(R, rng, max_len=5, terms=3):
    x = {}
    for _ in range(terms):
        word = tuple(rng.randrange(3) for _ in range(rng.randint(0, max_len)))
        x = tensor_add(R, x, {word: random_unit(R, rng)})
    return x


def bourbaki(cfg: AcceptanceConfig):
    R = F5
    rng = _rng(cfg, 11)
    psi_bad = sum(
        psi_even_via_recursion(b) != psi_even_matrix(b)
        for b in (random_bilinear(R, rng) for _ in range(cfg.bourbaki_samples))
    )
    square_bad = anti_bad = 0
    for _ in range(cfg.bourbaki_word_samples):
        f = [R.random(rng) for _ in range(3)]
        g = [R.random(rng) for _ in range(3)]
        x = _random_tensor(R, rng)
        square_bad += t_tensor(R, f, t_tensor(R, f, x)) != {}
        anti = tensor_add(R, t_tensor(R, f, t_tensor(R, g, x)), t_tensor(R, g, t_tensor(R, f, x)))
        anti_bad += anti != {}
    details = {
        "psi_checked": cfg.bourbaki_samples,
        "psi_failures": psi_bad,
        "words_checked": cfg.bourbaki_word_samples,
        "t_square_failures": square_bad,
        "t_anticommute_failures": anti_bad,
    }
    return psi_bad == 0 and square_bad == 0 and anti_bad == 0, details


SUITES = {
    "f2-bijection": (1, f2_bijection),
    "f3-bijection": (2, f3_bijection),
    "det-identity": (3, det_identity),
    "section": (4, section),
    "semiregular-azumaya": (5, semiregular_azumaya),
    "involution": (6, involution),
    "upsilon-inverse": (7, upsilon_inverse),
    "base-change": (8, base_change),
    "orthogonal-rows": (9, orthogonal_rows),
    "half-discriminant": (10, half_discriminant_laws),
    "bourbaki": (11, bourbaki),
}


def run_suite(name: str, cfg: AcceptanceConfig | None = None) -> SuiteResult:
    cfg = AcceptanceConfig() if cfg is None else cfg
    number, fn = SUITES[name]
    start = time.perf_counter()
    passed, details = fn(cfg)
    return SuiteResult(number, name, bool(passed), details, round(time.perf_counter() - start, 3))


def _run_named(args):
    name, cfg = args
    return run_suite(name, cfg)


def run_suites(names, cfg: AcceptanceConfig | None = None) -> list:
    """Run suites in order; with ``cfg.jobs > 1`` they run in worker processes.

    Results always come back in the requested order.
    """
    cfg = AcceptanceConfig() if cfg is None else cfg
    names = list(names)
    if cfg.jobs > 1 and len(names) > 1:
        inner = AcceptanceConfig(**{**asdict(cfg), "jobs": 1})
        with ProcessPoolExecutor(cfg.jobs) as pool:
            return list(pool.map(_run_named, [(n, inner) for n in names]))
    return [run_suite(n, cfg) for n in names]
