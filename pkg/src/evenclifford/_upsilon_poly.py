"""Generated by scripts/derive_upsilon.py -- do not edit by hand.

UPSILON[i][j][k] lists the terms ``(coeff, ((r, s), ...))`` of the structure
constant c[i][j][k] of Upsilon(B) as a polynomial in the entries B[r][s].

RECOVER[(r, s)] lists terms ``(coeff, (idx, ...))`` expressing B[r][s] as a
polynomial in the flattened constants ``c[16 i + 4 j + k]``.
"""

UPSILON = [
    [
        [[(1, ())], [], [], []],
        [[], [(1, ())], [], []],
        [[], [], [(1, ())], []],
        [[], [], [], [(1, ())]],
    ],
    [
        [[], [(1, ())], [], []],
        [[(1, ((1, 2), (2, 1))), (-1, ((1, 1), (2, 2)))], [(1, ((2, 1),)), (-1, ((1, 2),))], [], []],
        [[(-1, ((1, 2), (2, 0))), (1, ((1, 0), (2, 2)))], [(-1, ((2, 0),))], [(-1, ((1, 2),))], [(-1, ((2, 2),))]],
        [[(1, ((1, 1), (2, 0))), (-1, ((1, 0), (2, 1)))], [(1, ((1, 0),))], [(1, ((1, 1),))], [(1, ((2, 1),))]],
    ],
    [
        [[], [], [(1, ())], []],
        [[(-1, ((0, 2), (2, 1))), (1, ((0, 1), (2, 2)))], [(1, ((0, 2),))], [(1, ((2, 1),))], [(1, ((2, 2),))]],
        [[(1, ((0, 2), (2, 0))), (-1, ((0, 0), (2, 2)))], [], [(-1, ((2, 0),)), (1, ((0, 2),))], []],
        [[(-1, ((0, 1), (2, 0))), (1, ((0, 0), (2, 1)))], [(-1, ((0, 0),))], [(-1, ((0, 1),))], [(-1, ((2, 0),))]],
    ],
    [
        [[], [], [], [(1, ())]],
        [[(1, ((0, 2), (1, 1))), (-1, ((0, 1), (1, 2)))], [(-1, ((0, 1),))], [(-1, ((1, 1),))], [(-1, ((1, 2),))]],
        [[(-1, ((0, 2), (1, 0))), (1, ((0, 0), (1, 2)))], [(1, ((0, 0),))], [(1, ((1, 0),))], [(1, ((0, 2),))]],
        [[(1, ((0, 1), (1, 0))), (-1, ((0, 0), (1, 1)))], [], [], [(1, ((1, 0),)), (-1, ((0, 1),))]],
    ],
]

RECOVER = {
    (0, 0): [(-1, (45,))],
    (0, 1): [(-1, (46,))],
    (0, 2): [(1, (37,))],
    (1, 0): [(1, (29,))],
    (1, 1): [(1, (30,))],
    (1, 2): [(-1, (26,))],
    (2, 0): [(-1, (25,))],
    (2, 1): [(-1, (26,)), (1, (21,))],
    (2, 2): [(-1, (27,))],
}


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
