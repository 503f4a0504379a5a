"""Exact max-plus scalars and dense square matrices.

Finite scalars are exact rationals (``int`` or ``fractions.Fraction``); the two
infinities are the float constants :data:`NEG_INF` and :data:`POS_INF`.  Both
compare correctly against ``int`` and ``Fraction`` so ``max`` and ``<`` give
the total order -inf < finite < +inf directly.

Matrix convention: ``A[i, j]`` is the weight of the arc ``j -> i`` in the
precedence graph of ``A``, so ``(A @ B)[i, j] = max_k A[i, k] + B[k, j]``.
Indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

NEG_INF = float("-inf")
POS_INF = float("inf")

ExtendedReal = Union[int, Fraction, float]

_INF_WORDS = {
    "inf": POS_INF,
    "+inf": POS_INF,
    "infinity": POS_INF,
    "+infinity": POS_INF,
    "-inf": NEG_INF,
    "-infinity": NEG_INF,
}


class MaxPlusError(ValueError):
    """Malformed max-plus input (shape mismatch, forbidden +inf, ...)."""


def ext(value) -> ExtendedReal:
    """Convert ``value`` to an exact extended real.

    Accepts ints, Fractions, Decimals, the strings ``"inf"``/``"-inf"``,
    rational strings such as ``"0.5"`` or ``"-7/3"``, and floats.  Finite
    floats go through ``repr`` so ``0.1`` becomes ``1/10``, not the binary
    approximation.  Integral results are returned as ``int``.
    """
    if isinstance(value, bool):
        raise MaxPlusError(f"not a number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value != value:
            raise MaxPlusError("NaN is not an extended real")
        if value in (POS_INF, NEG_INF):
            return value
        q = Fraction(repr(value))
    elif isinstance(value, str):
        word = value.strip().lower()
        if word in _INF_WORDS:
            return _INF_WORDS[word]
        try:
            q = Fraction(word)
        except (ValueError, ZeroDivisionError) as exc:
            raise MaxPlusError(f"cannot parse {value!r} as a rational") from exc
    elif isinstance(value, Decimal):
        if not value.is_finite():
            raise MaxPlusError(f"not finite: {value!r}")
        q = Fraction(value)
    elif isinstance(value, Rational):
        q = Fraction(value)
    else:
        raise MaxPlusError(f"unsupported scalar type {type(value).__name__}")
    return q.numerator if q.denominator == 1 else q


def is_finite(a: ExtendedReal) -> bool:
    return a != NEG_INF and a != POS_INF


def oplus(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal:
    return a if a >= b else b


def otimes(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal:
    # -inf absorbs everything, including +inf
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def neg(a: ExtendedReal) -> ExtendedReal:
    """Opposite in the standard sense: -(+inf) = -inf and vice versa."""
    return -a


@dataclass(frozen=True, eq=False)
class MaxPlusMatrix:
    """Immutable dense n x n matrix over the completed max-plus semiring."""

    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        if n < 1:
            raise MaxPlusError("matrix dimension must be at least 1")
        for r in self.rows:
            if len(r) != n:
                raise MaxPlusError("matrix must be square")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "MaxPlusMatrix":
        return cls(tuple(tuple(ext(v) for v in r) for r in rows))

    @classmethod
    def epsilon(cls, n: int) -> "MaxPlusMatrix":
        """All entries -inf (neutral for oplus)."""
        return cls(tuple((NEG_INF,) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "MaxPlusMatrix":
        return cls(tuple(tuple(0 if i == j else NEG_INF for j in range(n)) for i in range(n)))

    @classmethod
    def full(cls, n: int, value) -> "MaxPlusMatrix":
        v = ext(value)
        return cls(tuple((v,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, MaxPlusMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __or__(self, other):
        return mat_oplus(self, other)

    def __matmul__(self, other):
        return mat_otimes(self, other)

    def __ge__(self, other):
        _check_same_dim(self, other)
        return all(a >= b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __le__(self, other):
        return other.__ge__(self)

    def __repr__(self):
        body = "; ".join(" ".join(_short(v) for v in r) for r in self.rows)
        return f"MaxPlusMatrix([{body}])"

    def replace(self, i: int, j: int, value) -> "MaxPlusMatrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = ext(value)
        return MaxPlusMatrix(tuple(tuple(r) for r in rows))

    def transpose(self) -> "MaxPlusMatrix":
        return MaxPlusMatrix(tuple(zip(*self.rows)))

    def has_pos_inf(self) -> bool:
        return any(v == POS_INF for r in self.rows for v in r)

    def is_rmax(self) -> bool:
        """True when no entry is +inf."""
        return not self.has_pos_inf()

    def block(self, row0: int, col0: int, size: int) -> "MaxPlusMatrix":
        return MaxPlusMatrix(tuple(tuple(r[col0:col0 + size]) for r in self.rows[row0:row0 + size]))


def _short(v) -> str:
    if v == NEG_INF:
        return "."
    if v == POS_INF:
        return "+inf"
    return str(v)


def _check_same_dim(A: MaxPlusMatrix, B: MaxPlusMatrix) -> None:
    if A.n != B.n:
        raise MaxPlusError(f"dimension mismatch: {A.n} vs {B.n}")


def _require_rmax(A: MaxPlusMatrix) -> None:
    if A.has_pos_inf():
        raise MaxPlusError("matrix has a +inf entry; expected entries in R u {-inf}")


def mat_oplus(A: MaxPlusMatrix, B: MaxPlusMatrix) -> MaxPlusMatrix:
    _check_same_dim(A, B)
    return MaxPlusMatrix(tuple(
        tuple(a if a >= b else b for a, b in zip(ra, rb)) for ra, rb in zip(A.rows, B.rows)
    ))


def mat_otimes(A: MaxPlusMatrix, B: MaxPlusMatrix) -> MaxPlusMatrix:
    _check_same_dim(A, B)
    n = A.n
    cols = list(zip(*B.rows))
    out = []
    for ra in A.rows:
        nz = [(k, a) for k, a in enumerate(ra) if a != NEG_INF]
        row = []
        for j in range(n):
            cj = cols[j]
            best = NEG_INF
            for k, a in nz:
                b = cj[k]
                if b != NEG_INF:
                    v = a + b
                    if v > best:
                        best = v
            row.append(best)
        out.append(tuple(row))
    return MaxPlusMatrix(tuple(out))


def _plus_rows(rows: Sequence[Sequence]) -> list:
    """Floyd-Warshall closure plus +inf saturation; works on a list copy."""
    n = len(rows)
    d = [list(r) for r in rows]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            di = d[i]
            dik = di[k]
            if dik == NEG_INF:
                continue
            for j in range(n):
                dkj = dk[j]
                if dkj != NEG_INF:
                    v = dik + dkj
                    if v > di[j]:
                        di[j] = v
    # With a positive circuit the closure values above are not suprema, but
    # reachability is still exact; any node k with d[k][k] > 0 lies in a
    # strongly connected component holding a positive circuit.
    hot = [k for k in range(n) if d[k][k] > 0]
    if hot:
        reach_to = [[i for i in range(n) if d[i][k] != NEG_INF] for k in hot]
        reach_from = [[j for j in range(n) if d[k][j] != NEG_INF] for k in hot]
        for srcs, dsts in zip(reach_to, reach_from):
            for i in srcs:
                di = d[i]
                for j in dsts:
                    di[j] = POS_INF
    return d


def kleene_plus(A: MaxPlusMatrix) -> MaxPlusMatrix:
    """A+ = A ⊕ A² ⊕ ...; entries are +inf exactly where an ∞-weight path exists."""
    _require_rmax(A)
    return MaxPlusMatrix(tuple(tuple(r) for r in _plus_rows(A.rows)))


def kleene_star(A: MaxPlusMatrix) -> MaxPlusMatrix:
    _require_rmax(A)
    d = _plus_rows(A.rows)
    for i in range(len(d)):
        if d[i][i] < 0:
            d[i][i] = 0
    return MaxPlusMatrix(tuple(tuple(r) for r in d))


@dataclass(frozen=True)
class NonegsetVerdict:
    """Whether a finite precedence graph is free of ∞-weight paths."""

    member: bool
    witness_node: Optional[int] = None


def in_nonegset(A: MaxPlusMatrix) -> NonegsetVerdict:
    P = kleene_plus(A)
    for i in range(P.n):
        if P[i, i] > 0:
            return NonegsetVerdict(False, i)
    return NonegsetVerdict(True)


@dataclass(frozen=True)
class Circuit:
    """Elementary circuit ``nodes[0] -> nodes[1] -> ... -> nodes[0]``."""

    nodes: tuple
    weight: ExtendedReal


def circuit_weight(A: MaxPlusMatrix, nodes: Sequence[int]) -> ExtendedReal:
    total = 0
    m = len(nodes)
    for t in range(m):
        total = otimes(total, A[nodes[(t + 1) % m], nodes[t]])
    return total


def positive_circuit(A: MaxPlusMatrix) -> Optional[Circuit]:
    """Return some elementary positive-weight circuit of G(A), or None.

    Longest-path Bellman-Ford from a virtual source joined to every node by a
    0-weight arc; a relaxation in pass n+1 leaves a cycle in the predecessor
    graph, and every such cycle has positive weight.
    """
    _require_rmax(A)
    n = A.n
    arcs = [(j, i, A[i, j]) for i in range(n) for j in range(n) if A[i, j] != NEG_INF]
    dist = [0] * n
    pred = [None] * n
    last = None
    for _ in range(n + 1):
        last = None
        for j, i, w in arcs:
            v = dist[j] + w
            if v > dist[i]:
                dist[i] = v
                pred[i] = j
                last = i
        if last is None:
            return None
    v = last
    for _ in range(n):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.reverse()
    # rotate so the smallest node index leads; keeps certificates deterministic
    k = cycle.index(min(cycle))
    cycle = cycle[k:] + cycle[:k]
    return Circuit(tuple(cycle), circuit_weight(A, cycle))
