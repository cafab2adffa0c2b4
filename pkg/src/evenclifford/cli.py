"""Command-line front end.  Every command prints one canonical JSON object.

Exit status: 0 success, 1 failed verification or domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import linalg as la
from .acceptance import SUITES, AcceptanceConfig, run_suites
from .azumaya import MAX_AZUMAYA_P, is_azumaya, recover_bilinear
from .classify import automorphism_group, orbit_partition, witt_classes
from .clifford import AlgebraStructure4, c0_of_similarity, lift_section, opposite, upsilon
from .errors import AlgebraError, DescriptorError
from .quadform import (
    BilinearForm3,
    QuadraticForm3,
    Similarity,
    act_similarity,
    default_lift,
    half_discriminant,
    induced_quadratic,
    is_semiregular,
)
from .ring import ResidueRing, parse_ring


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _entries(text: str, count: int, flag: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise UsageError(f"{flag} expects {count} comma-separated entries, got {len(parts)}")
    return parts


def _ring(args):
    if args.ring is None:
        raise UsageError("--ring is required")
    return parse_ring(args.ring)


def _form(args, R) -> QuadraticForm3:
    if args.form is None:
        raise UsageError("--form is required")
    return QuadraticForm3(R, tuple(R.parse(x) for x in _entries(args.form, 6, "--form")))


def _bilinear(args, R) -> BilinearForm3:
    if args.bilinear is None:
        raise UsageError("--bilinear is required")
    e = [R.parse(x) for x in _entries(args.bilinear, 9, "--bilinear")]
    return BilinearForm3(R, (e[0:3], e[3:6], e[6:9]))


def _lift_for(args, R, q):
    """``--bilinear`` when given (must induce ``q``), else the default lift."""
    if args.bilinear is None:
        return default_lift(q)
    b = _bilinear(args, R)
    if induced_quadratic(b) != q:
        raise UsageError("--bilinear does not induce --form")
    return b


def _fmt_matrix(R, m):
    return [[R.format(x) for x in row] for row in m]


def _finite_small_field(R) -> bool:
    return R.is_field and isinstance(R, ResidueRing) and R.p <= MAX_AZUMAYA_P


# -- commands -------------------------------------------------------------------


def cmd_c0(args):
    R = _ring(args)
    q = _form(args, R)
    b = _lift_for(args, R, q)
    return {"ring": R.descriptor, "form": list(q.to_dict()["coeffs"]), "lift": _fmt_matrix(R, b.matrix),
            "constants": upsilon(b).to_dict()["constants"]}, 0


def cmd_d0(args):
    R = _ring(args)
    q = _form(args, R)
    return {"d0": R.format(half_discriminant(q)), "semiregular": is_semiregular(q)}, 0


def cmd_semiregular(args):
    R = _ring(args)
    q = _form(args, R) if args.form is not None else induced_quadratic(_bilinear(args, R))
    out = {"d0": R.format(half_discriminant(q)), "semiregular": is_semiregular(q)}
    if _finite_small_field(R):
        b = _bilinear(args, R) if args.form is None else _lift_for(args, R, q)
        out["azumaya"] = is_azumaya(upsilon(b))
    return out, 0


def cmd_upsilon(args):
    R = _ring(args)
    b = _bilinear(args, R)
    return {"ring": R.descriptor, "bilinear": _fmt_matrix(R, b.matrix), "constants": upsilon(b).to_dict()["constants"]}, 0


def cmd_recover(args):
    R = _ring(args)
    if args.constants is not None:
        flat = [R.parse(x) for x in _entries(args.constants, 64, "--constants")]
        A = AlgebraStructure4(R, [[flat[16 * i + 4 * j : 16 * i + 4 * j + 4] for j in range(4)] for i in range(4)])
        B = recover_bilinear(A)
        return {"bilinear": _fmt_matrix(R, B.matrix)}, 0
    b = _bilinear(args, R)
    back = recover_bilinear(upsilon(b))
    ok = back == b
    return {"bilinear": _fmt_matrix(R, back.matrix), "round_trip": ok}, 0 if ok else 1


def cmd_opposite(args):
    R = _ring(args)
    b = _bilinear(args, R)
    op = opposite(upsilon(b))
    partner = -b.transpose()
    ok = op == upsilon(partner)
    return {"constants": op.to_dict()["constants"], "partner": _fmt_matrix(R, partner.matrix), "matches": ok}, 0 if ok else 1


def _similarity(args, R) -> Similarity:
    if args.similarity is None:
        return Similarity.identity(R)
    e = [R.parse(x) for x in _entries(args.similarity, 10, "--similarity")]
    return Similarity(R, (e[0:3], e[3:6], e[6:9]), e[9])


def cmd_lift(args):
    R = _ring(args)
    q = _form(args, R)
    s = _similarity(args, R)
    q2 = act_similarity(s, q)
    phi = c0_of_similarity(s, q, q2)
    lifted = lift_section(phi, q, q2, args.variant)
    ok = c0_of_similarity(lifted, q, q2).matrix == phi.matrix
    return {
        "variant": args.variant,
        "target_form": list(q2.to_dict()["coeffs"]),
        "phi": _fmt_matrix(R, phi.matrix),
        "g": _fmt_matrix(R, lifted.g),
        "l": R.format(lifted.l),
        "det_lambda2": R.format(la.det(R, phi.lambda2_block())),
        "section": ok,
    }, 0 if ok else 1


def cmd_classify(args):
    if args.field is None:
        raise UsageError("--field is required")
    F = parse_ring(args.field)
    wc = witt_classes(F)
    orb = orbit_partition(F)
    witt = sorted((sorted(c) for c in wc.classes), key=lambda c: c[0])
    semiregular = azumaya = 0
    rows = []
    for rep, A, members in zip(wc.representatives, wc.algebras, wc.classes):
        q = QuadraticForm3(F, rep)
        semi, azu = is_semiregular(q), is_azumaya(A)
        semiregular += semi
        azumaya += azu
        rows.append({"representative": [F.format(x) for x in rep], "size": len(members),
                     "semiregular": semi, "azumaya": azu})
    rows.sort(key=lambda r: r["representative"])
    return {
        "field": F.descriptor,
        "witt_classes": len(witt),
        "orbit_classes": len(orb),
        "equal": witt == orb,
        "semiregular_classes": semiregular,
        "azumaya_classes": azumaya,
        "classes": rows,
    }, 0 if witt == orb else 1


def cmd_autgroup(args):
    R = _ring(args)
    q = _form(args, R)
    b = _lift_for(args, R, q)
    aut = automorphism_group(upsilon(b))
    dets = sorted({R.format(phi.det) for phi in aut})
    return {"order": len(aut), "determinants": dets,
            "automorphisms": [_fmt_matrix(R, phi.matrix) for phi in aut]}, 0


def cmd_verify(args):
    if args.all:
        names = list(SUITES)
    elif args.suite:
        names = args.suite
        for n in names:
            if n not in SUITES:
                raise UsageError(f"--suite: unknown suite {n!r}; choose from {', '.join(SUITES)}")
    else:
        raise UsageError("verify needs --suite NAME or --all")
    cfg = AcceptanceConfig(seed=args.seed, jobs=args.jobs)
    results = run_suites(names, cfg)
    ok = all(r.passed for r in results)
    return {"pass": ok, "seed": args.seed, "suites": [r.to_dict() for r in results]}, 0 if ok else 1


COMMANDS = {
    "c0": cmd_c0,
    "d0": cmd_d0,
    "semiregular": cmd_semiregular,
    "upsilon": cmd_upsilon,
    "recover": cmd_recover,
    "opposite": cmd_opposite,
    "lift": cmd_lift,
    "classify": cmd_classify,
    "autgroup": cmd_autgroup,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="evenclifford", description="Even Clifford algebras of ternary forms.")
    ap.add_argument("command", choices=list(COMMANDS))
    ap.add_argument("--ring", help="z, q, fp:<p>, zmod:<p>^<k> or dual:<p>")
    ap.add_argument("--form", help="a1,a2,a3,u23,u13,u12")
    ap.add_argument("--bilinear", help="b11,b12,...,b33 (row-major)")
    ap.add_argument("--constants", help="64 structure constants c[i][j][k], flattened")
    ap.add_argument("--similarity", help="g11,...,g33,l (default: identity)")
    ap.add_argument("--variant", default="splus:1", help="sprime, s:<2k+1> or splus:<2k+1>")
    ap.add_argument("--field", help="fp:2 or fp:3")
    ap.add_argument("--suite", action="append", help="acceptance suite (repeatable)")
    ap.add_argument("--all", action="store_true", help="run every acceptance suite")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(dumps({"error": "UsageError", "message": str(exc)}))
        ap.print_usage(sys.stderr)
        return 2
    except DescriptorError as exc:
        # malformed ring descriptor or element literal: a usage problem
        print(dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    except AlgebraError as exc:
        print(dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    except ValueError as exc:
        print(dumps({"error": "UsageError", "message": str(exc)}))
        return 2
    print(dumps(payload))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
