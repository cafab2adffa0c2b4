#!/usr/bin/env python3
"""Derive Upsilon(B) symbolically and write src/evenclifford/_upsilon_poly.py.

Runs the package's own rewriting engine over SymPy symbols b11..b33, transports
the even Clifford table along psi_B, and then solves for each b_ij as a
polynomial in the structure constants.  The emitted module is data only
(integer-coefficient monomial lists) plus a tiny evaluator.

    python scripts/derive_upsilon.py            # rewrite the module
    python scripts/derive_upsilon.py --check    # exit 1 if it is stale
"""

import argparse
import pathlib
import sys

import sympy as sp

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from evenclifford.clifford import EVEN_SLOTS, EVEN_WORDS, _Reducer  # noqa: E402

TARGET = ROOT / "src" / "evenclifford" / "_upsilon_poly.py"


class SymRing:
    zero = sp.Integer(0)
    one = sp.Integer(1)

    def add(self, x, y):
        return sp.expand(x + y)

    def sub(self, x, y):
        return sp.expand(x - y)

    def mul(self, x, y):
        return sp.expand(x * y)

    def neg(self, x):
        return -x

    def is_zero(self, x):
        return sp.expand(x) == 0


B = sp.Matrix(3, 3, lambda i, j: sp.Symbol(f"b{i + 1}{j + 1}"))
SYMS = [B[i, j] for i in range(3) for j in range(3)]


def symbolic_upsilon():
    R = SymRing()
    a = [B[i, i] for i in range(3)]
    u = {(0, 1): B[0, 1] + B[1, 0], (0, 2): B[0, 2] + B[2, 0], (1, 2): B[1, 2] + B[2, 1]}
    red = _Reducer(R, a, u)
    C = [[None] * 4 for _ in range(4)]
    for i, wi in enumerate(EVEN_WORDS):
        for j, wj in enumerate(EVEN_WORDS):
            full = red.reduce(wi + wj)
            C[i][j] = sp.Matrix([full[s] for s in EVEN_SLOTS])
    psi = sp.Matrix(
        [[1, B[1, 2], B[0, 2], B[0, 1]], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]
    )
    psi_inv = psi.inv()

    def cmul(x, y):
        out = sp.zeros(4, 1)
        for i in range(4):
            for j in range(4):
                out += x[i] * y[j] * C[i][j]
        return out

    consts = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            v = psi * cmul(psi_inv[:, i], psi_inv[:, j])
            consts[i][j] = [sp.expand(v[k]) for k in range(4)]
    return consts


def monomials(expr):
    if expr == 0:
        return []
    poly = sp.Poly(expr, *SYMS)
    terms = []
    for exps, coeff in sorted(poly.terms()):
        idx = []
        for pos, e in enumerate(exps):
            idx.extend([(pos // 3, pos % 3)] * e)
        terms.append((int(coeff), tuple(idx)))
    return terms


def inverse_formulas(consts):
    """Express each b_ij through the structure constants.

    Every b_ij shows up linearly (up to sign) in some constant whose remaining
    terms are already-recovered quantities; search for such a constant.
    """
    c = sp.symbols("c0:64")
    flat = {}
    for i in range(4):
        for j in range(4):
            for k in range(4):
                flat[16 * i + 4 * j + k] = consts[i][j][k]
    known = {}
    for _ in range(9):
        progress = False
        for (r, s) in [(i, j) for i in range(3) for j in range(3)]:
            if (r, s) in known:
                continue
            target = B[r, s]
            for idx, expr in flat.items():
                if expr == 0:
                    continue
                p = sp.Poly(expr, target)
                if p.degree() != 1:
                    continue
                lead = p.coeffs()[0]
                if lead not in (1, -1):
                    continue
                rest = sp.expand(expr - lead * target)
                if not rest.free_symbols <= {B[a, b] for (a, b) in known}:
                    continue
                sol = sp.expand(lead * (c[idx] - rest.subs({B[a, b]: v for (a, b), v in known.items()})))
                known[(r, s)] = sol
                progress = True
                break
        if not progress:
            break
    if len(known) != 9:
        raise RuntimeError(f"could not invert Upsilon; recovered {sorted(known)}")
    formulas = {}
    for (r, s), expr in known.items():
        poly = sp.Poly(expr, *c)
        terms = []
        for exps, coeff in sorted(poly.terms()):
            idx = []
            for pos, e in enumerate(exps):
                idx.extend([pos] * e)
            terms.append((int(coeff), tuple(idx)))
        formulas[(r, s)] = terms
    return formulas


HEADER = '''"""Generated by scripts/derive_upsilon.py -- do not edit by hand.

UPSILON[i][j][k] lists the terms ``(coeff, ((r, s), ...))`` of the structure
constant c[i][j][k] of Upsilon(B) as a polynomial in the entries B[r][s].

RECOVER[(r, s)] lists terms ``(coeff, (idx, ...))`` expressing B[r][s] as a
polynomial in the flattened constants ``c[16 i + 4 j + k]``.
"""

'''

FOOTER = '''

def _evaluate(ring, terms, lookup):
    total = ring.zero
    for coeff, factors in terms:
        term = ring(coeff)
        for f in factors:
            term = ring.mul(term, lookup(f))
        total = ring.add(total, term)
    return total


def upsilon_constants(ring, matrix):
    look = lambda rs: matrix[rs[0]][rs[1]]  # noqa: E731
    return [[[_evaluate(ring, UPSILON[i][j][k], look) for k in range(4)] for j in range(4)] for i in range(4)]


def recover_entries(ring, constants):
    flat = [constants[i][j][k] for i in range(4) for j in range(4) for k in range(4)]
    return [[_evaluate(ring, RECOVER[(r, s)], flat.__getitem__) for s in range(3)] for r in range(3)]
'''


def render():
    consts = symbolic_upsilon()
    table = [[[monomials(consts[i][j][k]) for k in range(4)] for j in range(4)] for i in range(4)]
    rec = inverse_formulas(consts)
    lines = [HEADER, "UPSILON = [\n"]
    for i in range(4):
        lines.append("    [\n")
        for j in range(4):
            lines.append(f"        {table[i][j]!r},\n")
        lines.append("    ],\n")
    lines.append("]\n\nRECOVER = {\n")
    for key in sorted(rec):
        lines.append(f"    {key!r}: {rec[key]!r},\n")
    lines.append("}\n")
    lines.append(FOOTER)
    return "".join(lines), consts, rec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    ap.add_argument("--show", action="store_true", help="print the symbolic table")
    args = ap.parse_args()
    text, consts, rec = render()
    if args.show:
        names = ["1", "f1", "f2", "f3"]
        for i in range(4):
            for j in range(4):
                print(f"{names[i]}*{names[j]} =", " + ".join(f"({consts[i][j][k]})*{names[k]}" for k in range(4)))
        for key in sorted(rec):
            print(f"b{key[0] + 1}{key[1] + 1} =", rec[key])
    if args.check:
        current = TARGET.read_text() if TARGET.exists() else ""
        if current != text:
            print("stale:", TARGET)
            return 1
        print("up to date")
        return 0
    TARGET.write_text(text)
    print("wrote", TARGET)
    return 0


if __name__ == "__main__":
    sys.exit(main())
