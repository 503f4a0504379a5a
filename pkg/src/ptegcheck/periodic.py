"""N-periodic graphs generated by a static graph (L, C, R).

``Pi(h)[i, j]`` is the supremal weight of paths from node (j, 1) to node
(i, 1) of the N-periodic graph whose right-shift is at most ``h``.  It obeys

    Pi(0) = C+,    Pi(h + 1) = (L Pi(h)* R ⊕ C)+

and the graph is free of ∞-weight paths iff Pi(n²) is finite and
Pi(n² + 1) == Pi(n²).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .maxplus import (
    NEG_INF,
    POS_INF,
    Circuit,
    MaxPlusError,
    MaxPlusMatrix,
    ext,
    kleene_plus,
    kleene_star,
    mat_oplus,
    mat_otimes,
    positive_circuit,
)


@dataclass(frozen=True)
class StaticGraph:
    """Matrices for arcs of shift -1 (L), 0 (C) and +1 (R)."""

    L: MaxPlusMatrix
    C: MaxPlusMatrix
    R: MaxPlusMatrix

    def __post_init__(self):
        if not (self.L.n == self.C.n == self.R.n):
            raise MaxPlusError("L, C and R must have the same dimension")
        for name in ("L", "C", "R"):
            if getattr(self, name).has_pos_inf():
                raise MaxPlusError(f"{name} has a +inf entry")

    @property
    def n(self) -> int:
        return self.C.n

    def swapped(self) -> "StaticGraph":
        """The static graph with L and R exchanged (shift axis reversed)."""
        return StaticGraph(self.R, self.C, self.L)


class PeriodicKind(str, enum.Enum):
    NO_INF_PATH = "no_inf_path"
    POSITIVE_CIRCUIT = "positive_circuit"
    DIVERGENCE = "divergence"


@dataclass(frozen=True)
class PeriodicVerdict:
    kind: PeriodicKind
    pi_limit: Optional[MaxPlusMatrix] = None
    shift_bound: Optional[int] = None
    diverging_entries: tuple = ()
    evaluations: int = 0
    # arc matrix whose precedence graph holds the positive circuit
    # (C for shift 0, L Pi(h-1)* R ⊕ C otherwise) and one such circuit
    failing_matrix: Optional[MaxPlusMatrix] = None
    circuit: Optional[Circuit] = None
    # Pi(n²) and Pi(n²+1) when the sequence diverges
    pi_pair: tuple = field(default=())

    @property
    def no_inf_path(self) -> bool:
        return self.kind is PeriodicKind.NO_INF_PATH


def pi_initial(g: StaticGraph) -> MaxPlusMatrix:
    return kleene_plus(g.C)


def _arc_matrix(g: StaticGraph, P: MaxPlusMatrix) -> MaxPlusMatrix:
    return mat_oplus(mat_otimes(mat_otimes(g.L, kleene_star(P)), g.R), g.C)


def pi_next(g: StaticGraph, P: MaxPlusMatrix) -> MaxPlusMatrix:
    """(L P* R ⊕ C)+ ; P must be free of +inf."""
    return kleene_plus(_arc_matrix(g, P))


def _scale_factor(g: StaticGraph) -> int:
    den = 1
    for M in (g.L, g.C, g.R):
        for row in M.rows:
            for v in row:
                if isinstance(v, Fraction) and v.denominator != 1:
                    den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def _scale(M: MaxPlusMatrix, s) -> MaxPlusMatrix:
    out = []
    for row in M.rows:
        r = []
        for v in row:
            if v == NEG_INF or v == POS_INF:
                r.append(v)
            else:
                q = v * s
                if isinstance(q, Fraction) and q.denominator == 1:
                    q = q.numerator
                r.append(q)
        out.append(tuple(r))
    return MaxPlusMatrix(tuple(out))


def _unscale_verdict(v: PeriodicVerdict, s: int) -> PeriodicVerdict:
    if s == 1:
        return v
    inv = Fraction(1, s)
    un = (lambda M: None if M is None else _scale(M, inv))
    circuit = v.circuit
    if circuit is not None:
        circuit = Circuit(circuit.nodes, ext(circuit.weight * inv))
    return PeriodicVerdict(
        kind=v.kind,
        pi_limit=un(v.pi_limit),
        shift_bound=v.shift_bound,
        diverging_entries=v.diverging_entries,
        evaluations=v.evaluations,
        failing_matrix=un(v.failing_matrix),
        circuit=circuit,
        pi_pair=tuple(un(M) for M in v.pi_pair),
    )


def _positive(X: MaxPlusMatrix, h: int, evaluations: int) -> PeriodicVerdict:
    return PeriodicVerdict(PeriodicKind.POSITIVE_CIRCUIT, shift_bound=h,
                           evaluations=evaluations, failing_matrix=X,
                           circuit=positive_circuit(X))


def detect_inf_weight_N(g: StaticGraph, early_exit: bool = True) -> PeriodicVerdict:
    """Decide whether the N-periodic graph of ``g`` has an ∞-weight path.

    Computes Pi(0), Pi(1), ... up to Pi(n²+1) at most.  With ``early_exit``
    the loop stops at the first fixpoint Pi(h+1) == Pi(h), which is sound
    since Pi(h+1) depends on Pi(h) only.  ``evaluations`` in the result counts
    the Pi matrices computed.
    """
    s = _scale_factor(g)
    gs = g if s == 1 else StaticGraph(_scale(g.L, s), _scale(g.C, s), _scale(g.R, s))
    return _unscale_verdict(_detect(gs, early_exit), s)


def _detect(g: StaticGraph, early_exit: bool) -> PeriodicVerdict:
    n = g.n
    last = n * n
    P = pi_initial(g)
    evaluations = 1
    if P.has_pos_inf():
        return _positive(g.C, 0, evaluations)
    for h in range(last + 1):
        X = _arc_matrix(g, P)
        Q = kleene_plus(X)
        evaluations += 1
        if Q.has_pos_inf():
            return _positive(X, h + 1, evaluations)
        if h == last:
            if Q == P:
                return PeriodicVerdict(PeriodicKind.NO_INF_PATH, pi_limit=P,
                                       evaluations=evaluations)
            entries = tuple((i, j) for i in range(n) for j in range(n) if Q[i, j] > P[i, j])
            return PeriodicVerdict(PeriodicKind.DIVERGENCE, diverging_entries=entries,
                                   evaluations=evaluations, pi_pair=(P, Q))
        if early_exit and Q == P:
            return PeriodicVerdict(PeriodicKind.NO_INF_PATH, pi_limit=P,
                                   evaluations=evaluations)
        P = Q
    raise AssertionError("unreachable")


def pi_sequence(g: StaticGraph, h_max: int) -> list:
    """[Pi(0), ..., Pi(h_max)], stopping early if an entry becomes +inf."""
    seq = [pi_initial(g)]
    while len(seq) <= h_max and not seq[-1].has_pos_inf():
        seq.append(pi_next(g, seq[-1]))
    return seq


def truncated_incidence(g: StaticGraph, K: int) -> MaxPlusMatrix:
    """Block matrix of the periodic graph restricted to shifts 1..K.

    Node (i, k) (0-based i, 1-based k) maps to row ``(k - 1) * n + i``.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    n = g.n
    N = K * n
    rows = [[NEG_INF] * N for _ in range(N)]
    for b in range(K):
        _put(rows, g.C, b, b, n)
        if b + 1 < K:
            _put(rows, g.L, b, b + 1, n)
            _put(rows, g.R, b + 1, b, n)
    return MaxPlusMatrix(tuple(tuple(r) for r in rows))


def _put(rows, M: MaxPlusMatrix, bi: int, bj: int, n: int) -> None:
    for i in range(n):
        for j in range(n):
            rows[bi * n + i][bj * n + j] = M[i, j]
