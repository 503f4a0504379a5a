"""Finite systems of precedence constraints ``x >= A ⊗ x``.

Feasibility follows Gallai: a real solution exists iff G(A) has no
positive-weight circuit.  The Φ operator and its closure A^⊛ are provided
for finite matrices; node pairs passed to a good order are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .maxplus import (
    NEG_INF,
    Circuit,
    MaxPlusError,
    MaxPlusMatrix,
    in_nonegset,
    kleene_star,
    positive_circuit,
)

GoodOrder = Callable[[int, int], int]


class NotInNonegsetError(MaxPlusError):
    """The precedence graph contains an ∞-weight path."""


class ClosureDidNotConverge(RuntimeError):
    pass


def cantor_index(i: int, j: int) -> int:
    """Cantor pairing ``(i + j - 2)(i + j - 1)/2 + i`` on 1-based pairs."""
    if i < 1 or j < 1:
        raise ValueError("cantor_index expects 1-based indices")
    return (i + j - 2) * (i + j - 1) // 2 + i


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    solution: Optional[tuple] = None
    certificate: Optional[int] = None
    circuit: Optional[Circuit] = None


def has_solution(A: MaxPlusMatrix) -> FeasibilityResult:
    """Decide ``x >= A ⊗ x`` over the reals and return a solution if one exists.

    The solution is ``x = A* ⊗ 0``, i.e. the row maxima of ``A*``; it is the
    least solution with every component at least 0.
    """
    verdict = in_nonegset(A)
    if not verdict.member:
        return FeasibilityResult(False, certificate=verdict.witness_node,
                                 circuit=positive_circuit(A))
    S = kleene_star(A)
    x = tuple(max(row) for row in S.rows)
    return FeasibilityResult(True, solution=x)


def satisfies(A: MaxPlusMatrix, x) -> bool:
    """Literal check of ``x_i >= A_ij + x_j`` for every finite ``A_ij``."""
    n = A.n
    return all(
        x[i] >= A[i, j] + x[j]
        for i in range(n) for j in range(n) if A[i, j] != NEG_INF
    )


def _phi_from_star(S: MaxPlusMatrix, order: GoodOrder) -> MaxPlusMatrix:
    n = S.n
    best = None
    for i in range(n):
        for j in range(n):
            if S[i, j] == NEG_INF and S[j, i] != NEG_INF:
                key = order(i + 1, j + 1)
                if best is None or key < best[0]:
                    best = (key, i, j)
    if best is None:
        return S
    _, i, j = best
    return S.replace(i, j, -S[j, i])


def phi_step(A: MaxPlusMatrix, order: GoodOrder = cantor_index) -> MaxPlusMatrix:
    """One application of Φ: ``A*`` with one reverse arc added between
    one-way connected nodes (the least such pair under ``order``)."""
    verdict = in_nonegset(A)
    if not verdict.member:
        raise NotInNonegsetError(f"positive circuit through node {verdict.witness_node + 1}")
    return _phi_from_star(kleene_star(A), order)


def phi_trace(A: MaxPlusMatrix, order: GoodOrder = cantor_index,
              max_iters: Optional[int] = None) -> list:
    """``[Φ¹(A), Φ²(A), ..., Φᵏ(A)]`` stopping at the first fixpoint ``Φᵏ = Φᵏ⁻¹``.

    The fixpoint itself is not repeated in the returned list.
    """
    if max_iters is None:
        max_iters = A.n * A.n + A.n
    trace = []
    X = A
    for _ in range(max_iters + 1):
        Y = phi_step(X, order)
        if trace and Y == X:
            return trace
        trace.append(Y)
        X = Y
    raise ClosureDidNotConverge(f"Φ did not reach a fixpoint within {max_iters} iterations")


def phi_closure(A: MaxPlusMatrix, order: GoodOrder = cantor_index,
                max_iters: Optional[int] = None) -> MaxPlusMatrix:
    """A^⊛, the fixpoint of repeated Φ (finite for finite matrices)."""
    return phi_trace(A, order, max_iters)[-1]
