"""Worked examples with known answers, shared by several test modules."""

from fractions import Fraction

from ptegcheck.maxplus import NEG_INF as _
from ptegcheck.maxplus import NEG_INF, POS_INF, MaxPlusMatrix
from ptegcheck.periodic import StaticGraph
from ptegcheck.pteg import PTEG, CharacteristicMatrices, Interval, Place
from ptegcheck.ultimate import UltimatelyPeriodicSpec

INF = POS_INF
HALF = Fraction(1, 2)


def M(rows) -> MaxPlusMatrix:
    return MaxPlusMatrix.from_rows(rows)


def place(src, dst, tokens, lo, up=INF, name=None) -> Place:
    return Place(src, dst, tokens, Interval(lo, up), name)


def two_loop_graph(alpha, beta) -> StaticGraph:
    return StaticGraph(M([[alpha, _], [_, -3]]), M([[_, _], [0, _]]), M([[beta, _], [_, 2]]))


def two_loop_net(alpha, beta) -> PTEG:
    """t1 -> t2 with no token, self-loops [beta, -alpha] on t1 and [2, 3] on t2."""
    return PTEG(("t1", "t2"), (place(0, 1, 0, 0), place(0, 0, 1, beta, -alpha),
                               place(1, 1, 1, 2, 3)))


def two_loop_matrices(alpha, beta) -> CharacteristicMatrices:
    # same constraints without the Interval check, so beta > -alpha is representable
    return CharacteristicMatrices(M([[_, _], [0, _]]), M([[beta, _], [_, 2]]),
                                  M([[INF, INF], [INF, INF]]), M([[-alpha, INF], [INF, 3]]))


HEAT = PTEG(("t1", "t2", "t3"), (
    place(0, 1, 1, 2, 3, "p21"),
    place(1, 0, 0, 0, INF, "p12"),
    place(1, 2, 0, HALF, INF, "p32"),
    place(2, 1, 1, HALF, INF, "p23"),
    place(2, 2, 1, 0, 4, "p33"),
    place(0, 2, 1, 6, INF, "p31"),
))

NONPERIODIC = PTEG(("t1", "t2", "t3", "t4"), (
    place(0, 1, 0, 1, 1),
    place(1, 2, 1, 1, 1),
    place(2, 3, 0, 2, 2),
    place(3, 0, 1, 0, 0),
))

# the only consistent schedule from t0 = 0: two seeds, then +4 every two firings
NONPERIODIC_SCHEDULE = [(0, 1, 1, 3), (3, 4, 2, 4)]
for _k in range(4):
    NONPERIODIC_SCHEDULE.append(tuple(v + 4 for v in NONPERIODIC_SCHEDULE[-2]))

PHI_INPUT = M([
    [_, _, -3, _, _],
    [0, _, _, _, _],
    [_, 0, _, _, _],
    [_, _, -1, _, 2],
    [_, _, _, _, _],
])

PHI_TRACE = [
    M([[0, -3, -3, 1, _],
       [0, 0, -3, _, _],
       [0, 0, 0, _, _],
       [-1, -1, -1, 0, 2],
       [_, _, _, _, 0]]),
    M([[0, 0, 0, 1, 3],
       [0, 0, 0, 1, 3],
       [0, 0, 0, 1, 3],
       [-1, -1, -1, 0, 2],
       [-3, _, _, _, 0]]),
    M([[0, 0, 0, 1, 3],
       [0, 0, 0, 1, 3],
       [0, 0, 0, 1, 3],
       [-1, -1, -1, 0, 2],
       [-3, -3, -3, -2, 0]]),
]


def _one(n, i, j, v):
    rows = [[NEG_INF] * n for _row in range(n)]
    rows[i][j] = v
    return rows


ULTIMATE = UltimatelyPeriodicSpec(
    neg=StaticGraph(M(_one(4, 3, 3, 0)), M(_one(4, 0, 3, 0)), M(_one(4, 0, 0, 0))),
    transient=M(_one(4, 1, 0, 1)),
    pos=StaticGraph(
        M([[_, _, _, _], [_, _, _, _], [_, 1, _, _], [_, _, _, -1]]),
        M(_one(4, 3, 2, 0)),
        M([[_, 0, _, _], [0, _, _, _], [_, _, _, _], [_, _, _, _]]),
    ),
)

ULTIMATE_COMBINED = M([[_, _, _, 0], [1, _, _, _], [1, _, _, _], [-1, 0, _, _]])
