import random

import pytest

from lca.coins import CoinTape, Color, Tag
from lca.components import QueryFailed
from lca.instances import CnfFormula, Hypergraph, gen_cnf, gen_hypergraph
from lca.lll import (
    DANGEROUS1,
    DANGEROUS2,
    SAFE,
    CnfSession,
    ColoringSession,
    InfeasibleParams,
    VertexState,
    check_params,
    check_params_cnf,
    phase2_cap,
    phase3_cap,
    retries,
)
from lca.verify import sweep, verify_coloring, verify_report, verify_sat

from conftest import StubTape, enumerate_params


@pytest.mark.parametrize(
    "k,d,expected",
    [(6, 1, (1, 1, 4)), (3, 1, None), (19, 2, (7, 7, 5))],
)
def test_check_params_examples(k, d, expected):
    assert enumerate_params(k, d, 16, 2) == expected
    assert check_params(k, d) == expected


@pytest.mark.parametrize(
    "k,d,expected",
    [(5, 1, (1, 1, 3)), (4, 1, None), (16, 2, (6, 6, 4))],
)
def test_check_params_cnf_examples(k, d, expected):
    assert enumerate_params(k, d, 8, 1) == expected
    assert check_params_cnf(k, d) == expected


def test_check_params_small_grid():
    for k in range(1, 25):
        for d in range(0, 5):
            assert check_params(k, d) == enumerate_params(k, d, 16, 2)
            assert check_params_cnf(k, d) == enumerate_params(k, d, 8, 1)


def test_caps_and_retries():
    assert retries(65536, c3=1) == 4
    assert retries(1) >= 1 and phase2_cap(0) >= 1 and phase3_cap(0) >= 1
    assert phase2_cap(1023) == 80


def test_infeasible_session_rejected():
    h = Hypergraph.from_edges(3, [[0, 1, 2]])
    with pytest.raises(InfeasibleParams):
        ColoringSession(h, 0)


def test_empty_hypergraph_returns_coin():
    h = Hypergraph.from_edges(5, [])
    s = ColoringSession(h, 11, params=(1, 1, 4))
    tape = CoinTape(11, Tag.COLOR)
    assert [s.query(x) for x in range(5)] == [tape.color_coin(x, 0) for x in range(5)]


def test_single_edge_first_color_makes_dangerous():
    h = Hypergraph.from_edges(6, [list(range(6))])
    for seed in range(5):
        s = ColoringSession(h, seed)
        assert s.k1 == 1
        s.query(0)
        assert s.edge_state[0] == DANGEROUS1
        assert [s.vertex_state(x) for x in range(1, 6)] == [VertexState.TROUBLE1] * 5
        assert s.check_invariants() == []


def test_phase2_without_dangerous2_returns_epoch_coin():
    h = Hypergraph.from_edges(6, [list(range(6))])
    for seed in range(50):
        s = ColoringSession(h, seed)
        first = s.query(0)
        got = s.query(1)
        if s.edge_state[0] == SAFE and not any(s.trouble):
            epoch = s.epochs[0]
            assert got == CoinTape(seed, Tag.COLOR).color_coin(1, epoch) != first
            return
    pytest.fail("no seed produced a Phase-2 recoloring without a dangerous-2 event")


def test_phase3_lexicographic_first_completion():
    h = Hypergraph.from_edges(6, [list(range(6))])
    s = ColoringSession(h, 0, params=(1, 1, 4))
    s.value[0] = s.value[1] = int(Color.RED)
    for y in range(2, 6):
        s.trouble[y] = 2
    s.edge_state[0] = DANGEROUS2
    assert s.check_invariants() == []
    assert s.query(3) == Color.RED
    assert [s.query(x) for x in range(6)] == [Color.RED] * 5 + [Color.BLUE]
    assert s.resolved3 == {0: {2: 0, 3: 0, 4: 0, 5: 1}}
    assert s.phase3_sizes == [1]  # both queries hit the memoized assignment


def test_phase2_cap_breach_fails():
    h = gen_hypergraph(600, 100, 6, 1, 3)
    s = ColoringSession(h, 3, c1=0)
    failed = 0
    for x in range(h.m):
        try:
            s.query(x)
        except QueryFailed:
            failed += 1
    assert s.phase2_cap == 1
    assert failed == len(s.failures)


@pytest.mark.parametrize("seed", range(30))
def test_small_instances_sweep_sound(seed):
    h = gen_hypergraph(60, 10, 6, 1, seed)
    order = f"random:{seed}"
    rep = sweep("color", h, seed, order=order)
    assert rep.ok
    assert verify_coloring(h, rep.answers) is None
    assert all(n <= rep.session.phase3_cap for n in rep.session.phase3_sizes)
    assert rep.session.check_invariants() == []


@pytest.mark.parametrize("seed", range(3))
def test_invariants_after_every_query(seed):
    h = gen_hypergraph(1200, 200, 6, 1, seed)
    s = ColoringSession(h, seed)
    order = list(range(h.m))
    random.Random(seed).shuffle(order)
    for x in order:
        try:
            s.query(x)
        except QueryFailed:
            pass
        assert s.check_invariants() == []


def test_replay_is_deterministic():
    h = gen_hypergraph(1200, 200, 6, 1, 5)
    a = sweep("color", h, 5, order="random:1").answer_vector()
    b = sweep("color", h, 5, order="random:1").answer_vector()
    assert a == b


def test_dense_params_sweep_sound():
    h = gen_hypergraph(19 * 200, 200, 19, 2, 1)
    rep = sweep("color", h, 1)
    assert verify_report(rep, h) is None


def test_dangerous1_rate_isolated_edges():
    # an isolated k-edge with k1 = 1 is always dangerous after its first vertex; use k1 = 3
    k, trials, hits = 8, 4000, 0
    h = Hypergraph.from_edges(k, [list(range(k))])
    for seed in range(trials):
        s = ColoringSession(h, seed, params=(3, 3, 2))
        for x in range(k):
            if s.vertex_state(x) == VertexState.UNCOLORED:
                s.query_value(x)
        hits += s.dangerous1_events
    p = 2 ** (1 - 3)
    sigma = (p * (1 - p) / trials) ** 0.5
    assert abs(hits / trials - p) <= 4 * sigma


# --- k-CNF -----------------------------------------------------------------------


def test_true_literal_makes_clause_safe():
    f = CnfFormula.from_clauses(2, [[1, 2]])
    s = CnfSession(f, 0, params=(1, 1, 1), tape=StubTape(colors=lambda e, p: 1))
    assert s.query(0) is True
    assert s.clause_state[0] == SAFE


def test_false_literal_makes_clause_dangerous():
    f = CnfFormula.from_clauses(2, [[1, 2]])
    s = CnfSession(f, 0, params=(1, 1, 1), tape=StubTape(colors=lambda e, p: 0))
    assert s.query(0) is False
    assert s.clause_state[0] == DANGEROUS1
    assert s.vertex_state(1) == VertexState.TROUBLE1


def test_negative_literal_semantics():
    f = CnfFormula.from_clauses(2, [[-1, 2]])
    s = CnfSession(f, 0, params=(1, 1, 1), tape=StubTape(colors=lambda e, p: 0))
    assert s.query(0) is False
    assert s.clause_state[0] == SAFE


@pytest.mark.parametrize("seed", range(5))
def test_fresh_variables_answer_their_coin(seed):
    f = gen_cnf(500, 100, 5, 1, seed)
    s = CnfSession(f, seed)
    tape = CoinTape(seed, Tag.CNF)
    fresh_seen = 0
    for x in range(f.m):
        if s.vertex_state(x) == VertexState.UNCOLORED:
            fresh_seen += 1
            assert s.query(x) == bool(tape.color_coin(x, 0))
        else:
            s.query(x)
    assert fresh_seen > 0


@pytest.mark.parametrize("seed", range(10))
def test_cnf_sweep_sound(seed):
    f = gen_cnf(500, 100, 5, 1, seed)
    rep = sweep("cnf", f, seed, order=f"random:{seed}")
    assert rep.ok
    assert verify_sat(f, rep.answers) is None
    assert rep.session.check_invariants() == []


def test_cnf_dense_params_sweep_sound():
    f = gen_cnf(16 * 200, 200, 16, 2, 4)
    rep = sweep("cnf", f, 4)
    assert verify_report(rep, f) is None
