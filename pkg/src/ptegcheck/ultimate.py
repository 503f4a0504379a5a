"""Ultimately periodic graphs: a negative periodic part, a transient matrix at
shift 0 and a positive (N-periodic) part, all on the same n base nodes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .maxplus import (
    NEG_INF,
    Circuit,
    MaxPlusError,
    MaxPlusMatrix,
    in_nonegset,
    kleene_star,
    mat_oplus,
    mat_otimes,
    positive_circuit,
)
from .periodic import PeriodicVerdict, StaticGraph, detect_inf_weight_N


@dataclass(frozen=True)
class UltimatelyPeriodicSpec:
    neg: StaticGraph
    transient: MaxPlusMatrix
    pos: StaticGraph

    def __post_init__(self):
        if not (self.neg.n == self.transient.n == self.pos.n):
            raise MaxPlusError("all parts must share the same dimension")
        if self.transient.has_pos_inf():
            raise MaxPlusError("transient matrix has a +inf entry")

    @property
    def n(self) -> int:
        return self.transient.n

    def mirrored(self) -> "UltimatelyPeriodicSpec":
        """Reverse every arc and flip the shift axis.

        The result has an ∞-weight path iff this graph has one.
        """
        t = lambda g: StaticGraph(g.L.transpose(), g.C.transpose(), g.R.transpose())
        return UltimatelyPeriodicSpec(t(self.pos), self.transient.transpose(), t(self.neg))


class UltimateKind(str, enum.Enum):
    NO_INF_PATH = "no_inf_path"
    NEG_PART_DIVERGES = "neg_part_diverges"
    POS_PART_DIVERGES = "pos_part_diverges"
    TRANSIENT_POSITIVE_CIRCUIT = "transient_positive_circuit"


@dataclass(frozen=True)
class UltimateVerdict:
    kind: UltimateKind
    neg: Optional[PeriodicVerdict] = None
    pos: Optional[PeriodicVerdict] = None
    combined: Optional[MaxPlusMatrix] = None
    circuit: Optional[Circuit] = None
    # strict net checks record where the positive-part sequence settled
    fixpoint_h: Optional[int] = None

    @property
    def no_inf_path(self) -> bool:
        return self.kind is UltimateKind.NO_INF_PATH

    @property
    def detail(self):
        if self.kind is UltimateKind.NEG_PART_DIVERGES:
            return self.neg
        if self.kind is UltimateKind.POS_PART_DIVERGES:
            return self.pos
        return self.combined


def transient_matrix(spec: UltimatelyPeriodicSpec, pi_neg: MaxPlusMatrix,
                     pi_pos: MaxPlusMatrix) -> MaxPlusMatrix:
    """R_n Pi_n* L_n ⊕ C_t ⊕ L_p Pi_p* R_p."""
    left = mat_otimes(mat_otimes(spec.neg.R, kleene_star(pi_neg)), spec.neg.L)
    right = mat_otimes(mat_otimes(spec.pos.L, kleene_star(pi_pos)), spec.pos.R)
    return mat_oplus(mat_oplus(left, spec.transient), right)


def detect_inf_weight_U(spec: UltimatelyPeriodicSpec, early_exit: bool = True) -> UltimateVerdict:
    # the negative part unrolls towards -inf, i.e. an N-periodic graph with L and R swapped
    neg = detect_inf_weight_N(spec.neg.swapped(), early_exit)
    if not neg.no_inf_path:
        return UltimateVerdict(UltimateKind.NEG_PART_DIVERGES, neg=neg)
    pos = detect_inf_weight_N(spec.pos, early_exit)
    if not pos.no_inf_path:
        return UltimateVerdict(UltimateKind.POS_PART_DIVERGES, neg=neg, pos=pos)
    M = transient_matrix(spec, neg.pi_limit, pos.pi_limit)
    if not in_nonegset(M).member:
        return UltimateVerdict(UltimateKind.TRANSIENT_POSITIVE_CIRCUIT, neg=neg, pos=pos,
                               combined=M, circuit=positive_circuit(M))
    return UltimateVerdict(UltimateKind.NO_INF_PATH, neg=neg, pos=pos, combined=M)


def truncated_incidence(spec: UltimatelyPeriodicSpec, K: int) -> MaxPlusMatrix:
    """Finite block matrix of the graph restricted to shifts -K..K.

    Block index ``b = k + K``; node (i, k) maps to row ``b * n + i``.
    Arcs between shifts k and k+s use the negative part when either end is
    negative, the positive part when either end is positive, and C_t at 0.
    """
    n = spec.n
    B = 2 * K + 1
    rows = [[NEG_INF] * (B * n) for _ in range(B * n)]

    def put(M, k_target, k_source):
        bi, bj = k_target + K, k_source + K
        for i in range(n):
            for j in range(n):
                if M[i, j] != NEG_INF:
                    rows[bi * n + i][bj * n + j] = M[i, j]

    for k in range(-K, K + 1):
        if k < 0:
            put(spec.neg.C, k, k)
        elif k > 0:
            put(spec.pos.C, k, k)
        else:
            put(spec.transient, 0, 0)
        if k + 1 <= K:
            # arc (j, k) -> (i, k+1) has shift +1 (R); (j, k+1) -> (i, k) has shift -1 (L)
            part = spec.neg if k < 0 else spec.pos
            put(part.R, k + 1, k)
            put(part.L, k, k + 1)
    return MaxPlusMatrix(tuple(tuple(r) for r in rows))
