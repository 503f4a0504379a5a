"""P-time event graphs: model, consistency checks, witnesses and validation.

Transitions are indexed from 0 in Python; a place with source ``j``, target
``i``, ``m`` tokens and interval ``[lo, up]`` constrains the firing times by
``lo <= x_i(k + m) - x_j(k) <= up``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .maxplus import (
    NEG_INF,
    POS_INF,
    ExtendedReal,
    MaxPlusMatrix,
    ext,
    in_nonegset,
    kleene_plus,
    kleene_star,
    mat_oplus,
    mat_otimes,
    positive_circuit,
)
from .periodic import (
    PeriodicKind,
    PeriodicVerdict,
    StaticGraph,
    detect_inf_weight_N,
    truncated_incidence,
)
from .ultimate import UltimateKind, UltimateVerdict


class NetError(ValueError):
    """Invalid P-TEG description."""


class InconsistentNetError(ValueError):
    pass


class Semantics(str, enum.Enum):
    LOOSE = "loose"
    STRICT = "strict"


@dataclass(frozen=True)
class Interval:
    lower: ExtendedReal
    upper: ExtendedReal = POS_INF

    def __post_init__(self):
        lo, up = ext(self.lower), ext(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        if lo == POS_INF or lo == NEG_INF:
            raise NetError("interval lower bound must be finite")
        if lo < 0:
            raise NetError(f"negative lower bound {lo}")
        if up == NEG_INF:
            raise NetError("interval upper bound cannot be -inf")
        if lo > up:
            raise NetError(f"empty interval [{lo}, {up}]")


@dataclass(frozen=True)
class Place:
    source: int
    target: int
    tokens: int
    interval: Interval
    name: Optional[str] = None


@dataclass(frozen=True)
class PTEG:
    transitions: tuple
    places: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "places", tuple(self.places))
        n = len(self.transitions)
        if n < 1:
            raise NetError("a net needs at least one transition")
        if len(set(self.transitions)) != n:
            raise NetError("duplicate transition labels")
        for p in self.places:
            if not (0 <= p.source < n and 0 <= p.target < n):
                raise NetError(f"place {p.name or ''} references an unknown transition")
            if p.tokens < 0:
                raise NetError("token counts must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.transitions)


def normalize_marking(net: PTEG) -> PTEG:
    """Equivalent net with at most one initial token per place.

    A place j -> i holding m >= 2 tokens becomes a chain
    j -> u_1 -> ... -> u_{m-1} -> i of one-token places; the inner places
    carry [0, 0] and the last one keeps the original interval.  Original
    transitions keep their indices.
    """
    if all(p.tokens <= 1 for p in net.places):
        return net
    labels = list(net.transitions)
    taken = set(labels)
    places = []
    zero = Interval(0, 0)
    for idx, p in enumerate(net.places):
        if p.tokens <= 1:
            places.append(p)
            continue
        base = p.name or f"p{idx + 1}"
        prev = p.source
        for m in range(1, p.tokens):
            label = f"{base}~u{m}"
            while label in taken:
                label += "'"
            taken.add(label)
            labels.append(label)
            u = len(labels) - 1
            places.append(Place(prev, u, 1, zero, f"{base}~{m}"))
            prev = u
        places.append(Place(prev, p.target, 1, p.interval, f"{base}~{p.tokens}"))
    return PTEG(tuple(labels), tuple(places))


@dataclass(frozen=True)
class CharacteristicMatrices:
    A0: MaxPlusMatrix
    A1: MaxPlusMatrix
    B0: MaxPlusMatrix
    B1: MaxPlusMatrix


def characteristic_matrices(net: PTEG) -> CharacteristicMatrices:
    """Lower (A) and upper (B) residence bounds for 0- and 1-token places.

    Places sharing source, target and token count are merged by intersecting
    their intervals.
    """
    n = net.n
    A = {0: [[NEG_INF] * n for _ in range(n)], 1: [[NEG_INF] * n for _ in range(n)]}
    B = {0: [[POS_INF] * n for _ in range(n)], 1: [[POS_INF] * n for _ in range(n)]}
    for p in net.places:
        if p.tokens > 1:
            raise NetError("characteristic matrices need at most one token per place; "
                           "call normalize_marking first")
        i, j, mu = p.target, p.source, p.tokens
        A[mu][i][j] = max(A[mu][i][j], p.interval.lower)
        B[mu][i][j] = min(B[mu][i][j], p.interval.upper)
        if A[mu][i][j] > B[mu][i][j]:
            raise NetError(f"places {net.transitions[j]} -> {net.transitions[i]} with "
                           f"{mu} token(s) have disjoint intervals")
    mk = lambda rows: MaxPlusMatrix(tuple(tuple(r) for r in rows))
    return CharacteristicMatrices(mk(A[0]), mk(A[1]), mk(B[0]), mk(B[1]))


def lcr_matrices(cm: CharacteristicMatrices) -> StaticGraph:
    n = cm.A0.n
    L = [[-cm.B1[j, i] for j in range(n)] for i in range(n)]
    C = [[max(cm.A0[i, j], -cm.B0[j, i]) for j in range(n)] for i in range(n)]
    R = [[cm.A1[i, j] if i != j else max(0, cm.A1[i, i]) for j in range(n)] for i in range(n)]
    mk = lambda rows: MaxPlusMatrix(tuple(tuple(r) for r in rows))
    return StaticGraph(mk(L), mk(C), mk(R))


NetLike = Union[PTEG, CharacteristicMatrices]


def static_graph(net: NetLike) -> StaticGraph:
    """L, C, R of ``net`` after marking normalization.

    Characteristic matrices are accepted as they are; a lower bound above
    the matching upper bound is kept and simply makes the net inconsistent.
    """
    if isinstance(net, CharacteristicMatrices):
        return lcr_matrices(net)
    return lcr_matrices(characteristic_matrices(normalize_marking(net)))


def _size(net: NetLike) -> int:
    return net.A0.n if isinstance(net, CharacteristicMatrices) else net.n


@dataclass(frozen=True)
class Trajectory:
    """Firing times ``x[k - 1][i]`` of the k-th firing of transition i."""

    x: tuple
    t0: Optional[ExtendedReal] = None

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(tuple(ext(v) for v in row) for row in self.x))
        if self.t0 is not None:
            object.__setattr__(self, "t0", ext(self.t0))

    @property
    def length(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class ConsistencyReport:
    semantics: Semantics
    consistent: bool
    certificate: Union[PeriodicVerdict, UltimateVerdict]
    graph: StaticGraph
    witness: Optional[Trajectory] = None


def check_loose(net: NetLike, early_exit: bool = True) -> ConsistencyReport:
    g = static_graph(net)
    verdict = detect_inf_weight_N(g, early_exit)
    return ConsistencyReport(Semantics.LOOSE, verdict.no_inf_path, verdict, g)


def check_strict(net: NetLike) -> ConsistencyReport:
    """Consistency under strict initial conditions.

    Follows the positive-part iteration on Kleene stars with an all-zero
    transient block; the neg part of the equivalent ultimately periodic
    graph is empty.
    """
    g = static_graph(net)
    L, C, R = g.L, g.C, g.R
    n = g.n
    Ct = MaxPlusMatrix.full(n, 0)

    def fail(kind, **kw):
        return ConsistencyReport(Semantics.STRICT, False, UltimateVerdict(kind, **kw), g)

    if not in_nonegset(C).member:
        pv = PeriodicVerdict(PeriodicKind.POSITIVE_CIRCUIT, shift_bound=0, evaluations=1,
                             failing_matrix=C, circuit=positive_circuit(C))
        return fail(UltimateKind.POS_PART_DIVERGES, pos=pv)
    P = kleene_plus(C)
    S = kleene_star(C)
    evaluations = 1
    for h in range(n * n + 1):
        X = mat_oplus(mat_otimes(mat_otimes(L, S), R), C)
        evaluations += 1
        if not in_nonegset(X).member:
            pv = PeriodicVerdict(PeriodicKind.POSITIVE_CIRCUIT, shift_bound=h + 1,
                                 evaluations=evaluations, failing_matrix=X,
                                 circuit=positive_circuit(X))
            return fail(UltimateKind.POS_PART_DIVERGES, pos=pv)
        P_next = kleene_plus(X)
        S_next = kleene_star(X)
        if S == S_next:
            pv = PeriodicVerdict(PeriodicKind.NO_INF_PATH, pi_limit=P_next,
                                 evaluations=evaluations)
            M = mat_oplus(Ct, mat_otimes(mat_otimes(L, S_next), R))
            if in_nonegset(M).member:
                verdict = UltimateVerdict(UltimateKind.NO_INF_PATH, pos=pv, combined=M,
                                          fixpoint_h=h)
                return ConsistencyReport(Semantics.STRICT, True, verdict, g)
            return fail(UltimateKind.TRANSIENT_POSITIVE_CIRCUIT, pos=pv, combined=M,
                        circuit=positive_circuit(M), fixpoint_h=h)
        P, S = P_next, S_next
    entries = tuple((i, j) for i in range(n) for j in range(n) if P_next[i, j] > P[i, j])
    pv = PeriodicVerdict(PeriodicKind.DIVERGENCE, diverging_entries=entries,
                         evaluations=evaluations)
    return fail(UltimateKind.POS_PART_DIVERGES, pos=pv)


def check(net: NetLike, semantics: Union[Semantics, str]) -> ConsistencyReport:
    if Semantics(semantics) is Semantics.LOOSE:
        return check_loose(net)
    return check_strict(net)


def witness_prefix(net: NetLike, semantics: Union[Semantics, str], K: int, t0=0) -> Trajectory:
    """Earliest firing times for the first K firings of every transition.

    Solves the precedence constraints truncated to firings 1..K (strict mode
    adds the block of x(0) = t0) via the row maxima of the Kleene star, then
    anchors the result: ``x(0) = t0`` for strict, smallest firing time equal
    to ``t0`` for loose.  Only constraints inside the prefix are enforced.
    """
    semantics = Semantics(semantics)
    if K < 1:
        raise ValueError("K must be at least 1")
    t0 = ext(t0)
    report = check(net, semantics)
    if not report.consistent:
        raise InconsistentNetError(f"net is not consistent under {semantics.value} semantics")
    g = report.graph
    n = g.n
    if semantics is Semantics.LOOSE:
        S = kleene_star(truncated_incidence(g, K))
        y = [max(row) for row in S.rows]
        # firing times never decrease, so the earliest visible one is in the first block
        shift = t0 - min(y[:_size(net)])
        blocks = range(K)
        traj_t0 = None
    else:
        T = truncated_incidence(g, K + 1)
        rows = [list(r) for r in T.rows]
        for i in range(n):
            for j in range(n):
                rows[i][j] = 0
        S = kleene_star(MaxPlusMatrix(tuple(tuple(r) for r in rows)))
        y = [max(row) for row in S.rows]
        shift = t0 - y[0]
        blocks = range(1, K + 1)
        traj_t0 = t0
    m = _size(net)
    x = tuple(tuple(y[b * n + i] + shift for i in range(m)) for b in blocks)
    return Trajectory(x, traj_t0)


@dataclass(frozen=True)
class Violation:
    """One violated inequality; ``slack`` is the amount by which it fails."""

    constraint: str
    transition: int
    k: int
    slack: ExtendedReal
    place: Optional[int] = None


def validate_trajectory(net: PTEG, semantics: Union[Semantics, str],
                        traj: Trajectory) -> list:
    """Check every constraint of ``net`` that lies inside the trajectory prefix.

    Works on the net as given (places may hold several tokens).  Under strict
    semantics each of the first ``m`` firings of a place's target consumes an
    initial token that arrived at ``t0``.
    """
    semantics = Semantics(semantics)
    n, K = net.n, traj.length
    if K < 1:
        raise ValueError("empty trajectory")
    if any(len(row) != n for row in traj.x):
        raise ValueError(f"trajectory rows must have {n} entries")
    x = traj.x
    out = []
    for i in range(n):
        for k in range(1, K):
            if x[k][i] < x[k - 1][i]:
                out.append(Violation("nondecreasing", i, k + 1, x[k - 1][i] - x[k][i]))
    for idx, p in enumerate(net.places):
        i, j, mu = p.target, p.source, p.tokens
        lo, up = p.interval.lower, p.interval.upper
        for k in range(1, K - mu + 1):
            d = x[k + mu - 1][i] - x[k - 1][j]
            if d < lo:
                out.append(Violation("lower", i, k + mu, lo - d, idx))
            if d > up:
                out.append(Violation("upper", i, k + mu, d - up, idx))
    if semantics is Semantics.STRICT:
        if traj.t0 is None:
            raise ValueError("strict validation needs t0")
        t0 = traj.t0
        for i in range(n):
            if x[0][i] < t0:
                out.append(Violation("after_t0", i, 1, t0 - x[0][i]))
        for idx, p in enumerate(net.places):
            i = p.target
            lo, up = p.interval.lower, p.interval.upper
            for m in range(1, min(p.tokens, K) + 1):
                d = x[m - 1][i] - t0
                if d < lo:
                    out.append(Violation("initial_lower", i, m, lo - d, idx))
                if d > up:
                    out.append(Violation("initial_upper", i, m, d - up, idx))
    return out
