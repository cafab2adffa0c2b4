#!/usr/bin/env python3
"""Classify ternary forms over F_2 or F_3 and sweep the Azumaya locus.

Writes to ``--out`` (default ``results/<field>/``):

    classes.json        Witt classes with representative, size, d0, semiregular, Azumaya
    automorphisms.json  automorphism-group orders of each class representative
    sweep.jsonl         one record per bilinear form: semiregular vs Azumaya
    summary.json        partition comparison and timings

    python scripts/run_classification.py --field fp:2
    python scripts/run_classification.py --field fp:3 --jobs 4
"""

import argparse
import json
import pathlib
import sys
import time

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from evenclifford.azumaya import is_azumaya, semiregular_azumaya_agree  # noqa: E402
from evenclifford.classify import automorphism_group, orbit_partition, witt_classes  # noqa: E402
from evenclifford.quadform import QuadraticForm3, half_discriminant, is_semiregular  # noqa: E402
from evenclifford.ring import parse_ring  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="fp:2", choices=["fp:2", "fp:3"])
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for the Azumaya sweep")
    ap.add_argument("--out", type=pathlib.Path, default=None)
    ap.add_argument("--skip-sweep", action="store_true")
    args = ap.parse_args(argv)

    F = parse_ring(args.field)
    out = args.out or ROOT / "results" / args.field.replace(":", "")
    out.mkdir(parents=True, exist_ok=True)
    timings = {}

    t = time.perf_counter()
    wc = witt_classes(F)
    timings["witt"] = time.perf_counter() - t
    t = time.perf_counter()
    orb = orbit_partition(F)
    timings["orbit"] = time.perf_counter() - t
    witt = sorted((sorted(c) for c in wc.classes), key=lambda c: c[0])

    rows, autos = [], []
    t = time.perf_counter()
    for rep, A, members in zip(wc.representatives, wc.algebras, wc.classes):
        q = QuadraticForm3(F, rep)
        fmt = [F.format(x) for x in rep]
        rows.append({
            "representative": fmt,
            "size": len(members),
            "d0": F.format(half_discriminant(q)),
            "semiregular": is_semiregular(q),
            "azumaya": is_azumaya(A),
        })
        autos.append({"representative": fmt, "order": len(automorphism_group(A))})
    timings["invariants"] = time.perf_counter() - t
    (out / "classes.json").write_text(json.dumps(rows, indent=1) + "\n")
    (out / "automorphisms.json").write_text(json.dumps(autos, indent=1) + "\n")

    summary = {
        "field": F.descriptor,
        "forms": F.size**6,
        "witt_classes": len(witt),
        "orbit_classes": len(orb),
        "equal": witt == orb,
    }
    if not args.skip_sweep:
        t = time.perf_counter()
        sweep = semiregular_azumaya_agree(F, jobs=args.jobs)
        timings["sweep"] = time.perf_counter() - t
        with open(out / "sweep.jsonl", "w") as fh:
            for r in sweep["records"]:
                fh.write(json.dumps(r, sort_keys=True) + "\n")
        summary.update(bilinear_forms=sweep["checked"], disagreements=len(sweep["disagreements"]))
    summary["seconds"] = {k: round(v, 2) for k, v in timings.items()}
    (out / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")

    print(json.dumps(summary, sort_keys=True))
    for r, a in zip(rows, autos):
        print(f"  {','.join(r['representative']):>12}  size {r['size']:4d}  d0 {r['d0']}  "
              f"semiregular {r['semiregular']!s:5}  azumaya {r['azumaya']!s:5}  |Aut| {a['order']}")
    return 0 if summary["equal"] and not summary.get("disagreements") else 1


if __name__ == "__main__":
    sys.exit(main())
