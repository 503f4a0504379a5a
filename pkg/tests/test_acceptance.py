"""Acceptance suite: one test per criterion, summarized at the end of the run.

Every numeric comparison is exact (integers and Fractions); the only
tolerance is the wall-clock limit of the runtime check.
"""

import random
import time
from fractions import Fraction

import pytest

from ptegcheck.maxplus import NEG_INF, POS_INF, MaxPlusMatrix, in_nonegset, kleene_plus, kleene_star
from ptegcheck.periodic import PeriodicKind, detect_inf_weight_N, pi_sequence, truncated_incidence
from ptegcheck.precedence import has_solution, phi_step, phi_trace, satisfies
from ptegcheck.pteg import (
    PTEG,
    Interval,
    Place,
    check_loose,
    check_strict,
    normalize_marking,
    validate_trajectory,
    witness_prefix,
)
from ptegcheck.ultimate import UltimateKind, detect_inf_weight_U
from oracles import (
    brute_feasible,
    brute_positive_circuit,
    prefix_constraint_matrix,
    random_interval,
    random_matrix,
    random_net,
    random_static_graph,
)
from reference_nets import (
    HEAT,
    NONPERIODIC,
    PHI_INPUT,
    PHI_TRACE,
    ULTIMATE,
    ULTIMATE_COMBINED,
    M,
    two_loop_graph,
    two_loop_matrices,
    two_loop_net,
)

_ = NEG_INF

RUNTIME_LIMIT_S = 10.0
BLOCK_KLEENE_GRAPHS = 500
GALLAI_MATRICES = 500
NORMALIZATION_NETS = 200
ITERATION_CORPUS = 300


def criterion(number, title):
    return pytest.mark.acceptance(number=number, title=title)


@criterion(1, "Pi-sequence regression on the two-loop graph")
def test_pi_sequence_regression():
    seq = pi_sequence(two_loop_graph(-5, 4), 5)
    assert seq[4] == M([[-1, _], [4, -1]])
    assert seq[5] == M([[-1, _], [5, -1]])
    v = detect_inf_weight_N(two_loop_graph(-5, 4))
    assert v.kind is PeriodicKind.DIVERGENCE and v.diverging_entries == ((1, 0),)

    seq = pi_sequence(two_loop_graph(-1, 1), 5)
    assert seq[4] == seq[5] == M([[0, _], [0, -1]])
    assert detect_inf_weight_N(two_loop_graph(-1, 1)).kind is PeriodicKind.NO_INF_PATH

    v = detect_inf_weight_N(two_loop_graph(-1, 2))
    assert v.kind is PeriodicKind.POSITIVE_CIRCUIT and v.shift_bound == 1


@criterion(2, "Phi closure trace on the five-node matrix")
def test_phi_trace_regression():
    assert phi_trace(PHI_INPUT) == PHI_TRACE
    assert len(PHI_TRACE) == 3
    S = kleene_star(PHI_INPUT)
    step = phi_step(PHI_INPUT)
    changed = [(i, j) for i in range(5) for j in range(5) if S[i, j] != step[i, j]]
    assert changed == [(0, 3)] and step[0, 3] == 1


@criterion(3, "ultimately periodic example: fixpoints and combined matrix")
def test_ultimate_regression():
    for part in (ULTIMATE.neg.swapped(), ULTIMATE.pos):
        seq = pi_sequence(part, 17)
        assert len(seq) == 18
        fix = next(h for h in range(17) if seq[h] == seq[h + 1])
        assert fix <= 16
        # entries stay in R_max: -inf allowed, +inf not
        assert seq[16] == seq[17] and not seq[16].has_pos_inf()
    v = detect_inf_weight_U(ULTIMATE)
    assert v.combined == ULTIMATE_COMBINED
    assert not in_nonegset(v.combined).member
    assert v.kind is UltimateKind.TRANSIENT_POSITIVE_CIRCUIT


@criterion(4, "P-TEG consistency verdicts on the reference nets")
def test_pteg_verdicts():
    assert check_loose(two_loop_net(-1, 1)).consistent
    assert not check_loose(two_loop_matrices(-1, 2)).consistent
    assert not check_loose(two_loop_net(-5, 4)).consistent

    assert check_loose(HEAT).consistent
    strict = check_strict(HEAT)
    assert not strict.consistent
    assert strict.certificate.circuit is not None
    assert strict.certificate.circuit.weight == 2

    rep = check_strict(NONPERIODIC)
    assert rep.consistent and rep.certificate.fixpoint_h == 1


@criterion(5, "earliest strict witness of the nonperiodic net")
def test_nonperiodic_witness():
    w = witness_prefix(NONPERIODIC, "strict", 6, t0=0)
    expected = [(0, 1, 1, 3), (3, 4, 2, 4)]
    while len(expected) < 6:
        expected.append(tuple(4 + v for v in expected[-2]))
    assert [tuple(r) for r in w.x] == expected
    assert validate_trajectory(NONPERIODIC, "strict", w) == []


@criterion(6, "Pi(h) equals the top-left block of the truncated closure")
def test_block_kleene_property():
    saturated = 0
    for seed in range(BLOCK_KLEENE_GRAPHS):
        rng = random.Random(10_000 + seed)
        n = rng.randint(1, 3)
        g = random_static_graph(rng, n)
        seq = pi_sequence(g, 4)
        for h in range(5):
            block = kleene_plus(truncated_incidence(g, h + 1)).block(0, 0, n)
            if h < len(seq):
                assert block == seq[h], (seed, h)
            else:
                # past the first +inf the recursion stops; the block keeps those entries
                first = seq[-1]
                assert all(block[i, j] == POS_INF
                           for i in range(n) for j in range(n) if first[i, j] == POS_INF)
        saturated += seq[-1].has_pos_inf()
    assert saturated > 0


@criterion(7, "feasibility agrees with brute-force circuit search")
def test_gallai_property():
    outcomes = set()
    for seed in range(GALLAI_MATRICES):
        rng = random.Random(20_000 + seed)
        A = random_matrix(rng, rng.randint(1, 6))
        res = has_solution(A)
        assert res.feasible == (brute_positive_circuit(A) is None), seed
        if res.feasible:
            x = res.solution
            assert satisfies(A, x)
            for i in range(A.n):
                for j in range(A.n):
                    if A[i, j] != NEG_INF:
                        assert x[i] >= A[i, j] + x[j]
        outcomes.add(res.feasible)
    assert outcomes == {True, False}


@criterion(8, "Pi evaluation count with and without early exit")
def test_iteration_bound():
    graphs = [two_loop_graph(a, b) for a, b in ((-1, 1), (-1, 2), (-5, 4))]
    for seed in range(ITERATION_CORPUS):
        rng = random.Random(30_000 + seed)
        graphs.append(random_static_graph(rng, rng.randint(1, 3)))
    no_inf = 0
    for g in graphs:
        full = detect_inf_weight_N(g, early_exit=False)
        fast = detect_inf_weight_N(g)
        bound = g.n * g.n + 2
        if full.kind is PeriodicKind.NO_INF_PATH:
            assert full.evaluations == bound
            no_inf += 1
        assert full.evaluations <= bound and fast.evaluations <= bound
        assert fast.kind is full.kind and fast.pi_limit == full.pi_limit
        assert fast.shift_bound == full.shift_bound
    assert no_inf > 0


def _net_with_multi_token_place(rng):
    n = rng.randint(1, 3)
    base = random_net(rng, n, rng.randint(0, 4))
    heavy = Place(rng.randrange(n), rng.randrange(n), rng.choice((2, 3)), random_interval(rng))
    kept = tuple(p for p in base.places
                 if (p.source, p.target, p.tokens) != (heavy.source, heavy.target, heavy.tokens))
    return PTEG(base.transitions, kept + (heavy,))


def _prefix_feasible(net, strict, K):
    # clamped: the chain transitions fire in order, so the normalized prefix
    # carries caps the raw truncation of a multi-token place would drop
    A = prefix_constraint_matrix(net, strict, K, clamp=True)
    feasible = brute_feasible(A)
    assert feasible == in_nonegset(A).member
    return feasible


@criterion(9, "marking normalization preserves prefix feasibility")
def test_normalization_equivalence():
    seen = set()
    for seed in range(NORMALIZATION_NETS):
        rng = random.Random(40_000 + seed)
        net = _net_with_multi_token_place(rng)
        norm = normalize_marking(net)
        growth = sum(max(0, p.tokens - 1) for p in net.places)
        assert norm.n == net.n + growth
        assert all(p.tokens <= 1 for p in norm.places)
        for strict in (False, True):
            for K in range(1, 6):
                before = _prefix_feasible(net, strict, K)
                assert _prefix_feasible(norm, strict, K) == before, (seed, strict, K)
                seen.add(before)
    assert seen == {True, False}


def planted_dense_net(rng, n, density, slack):
    """Dense net built around the periodic schedule x_i(k) = a_i + period * k.

    Every place interval contains the schedule's residence time, so the net
    is consistent under loose initial conditions.
    """
    period = rng.randint(1, 5)
    offsets = [Fraction(rng.randint(0, 40), rng.choice((1, 2, 4))) for _ in range(n)]
    places = []
    for target in range(n):
        for source in range(n):
            for tokens in (0, 1):
                if rng.random() >= density:
                    continue
                residence = offsets[target] - offsets[source] + period * tokens
                if residence < 0:
                    continue
                lower = max(0, residence - rng.randint(0, slack))
                places.append(Place(source, target, tokens,
                                    Interval(lower, residence + rng.randint(0, slack))))
    return PTEG(tuple(f"t{i + 1}" for i in range(n)), tuple(places))


@criterion(10, "loose check on dense 40-transition nets within the time limit")
def test_runtime_dense_nets():
    nets = []
    for seed in range(4):
        rng = random.Random(50_000 + seed)
        nets.append((True, planted_dense_net(rng, 40, 0.5, slack=seed % 3)))
    for seed in range(3):
        rng = random.Random(60_000 + seed)
        nets.append((None, random_net(rng, 40, 1600)))
    for expect_consistent, net in nets:
        start = time.perf_counter()
        rep = check_loose(net)
        elapsed = time.perf_counter() - start
        assert elapsed < RUNTIME_LIMIT_S, elapsed
        if expect_consistent:
            assert rep.consistent
