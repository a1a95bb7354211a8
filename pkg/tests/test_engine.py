import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_net
from oracles import Unbounded, soundness as oracle_soundness
from wfav.engine import (
    BoundExceeded,
    Configuration,
    NotEnabled,
    Transition,
    WfaNet,
    check_soundness,
    enabled,
    fire,
    fire_sequence,
    initial_configuration,
    reachability_graph,
)
from wfav.iq import analyze_all
from wfav.mapper import map_to_net
from wfav.parser import parse_wfa_net, parse_wfa_net_with_warnings


def net(text: str, strict: bool = True) -> WfaNet:
    if not strict:
        return parse_wfa_net_with_warnings(text, strict=False)[0]
    n = parse_wfa_net(text)
    assert not isinstance(n, list), n
    return n


MINIMAL = "place src\nplace snk\ntrans t1 res=M\narc src t1\narc t1 snk\ninitial src\nfinal snk\n"
SEQ = ("place src\nplace mid\nplace snk\ntrans t_G2 res=A pd={I}\ntrans t_G3 res=A rd={I}\n"
       "arc src t_G2\narc t_G2 mid\narc mid t_G3\narc t_G3 snk\ninitial src\nfinal snk\n")
REVERSED = SEQ.replace("arc src t_G2", "arc src t_G3").replace("arc t_G2 mid", "arc t_G3 mid") \
    .replace("arc mid t_G3", "arc mid t_G2").replace("arc t_G3 snk", "arc t_G2 snk")


def test_pure_marking_enablement():
    n = net(MINIMAL)
    assert enabled(n, initial_configuration(n), "t1")


def test_information_flow_blocks_unproduced_reads():
    n = net(MINIMAL.replace("res=M", "res=M rd={I1}"))
    e = enabled(n, initial_configuration(n), "t1")
    assert not e and e.reason == "information-flow"
    assert enabled(n, initial_configuration(n), "t1", info_flow=False)


def test_iq_gate_on_the_stub_quote_fixture(load):
    model = load("flashcrash_stub.gqm")
    n, trace = map_to_net(model, verdicts=analyze_all(model))
    c = fire_sequence(n, initial_configuration(n), ["t_post_flicker", "t_post_stub"], iq_blocked=None)
    e = enabled(n, c, "t_match_orders", iq_blocked=trace.iq_blocked)
    assert not e and e.reason == "iq"
    assert enabled(n, c, "t_match_orders")


def test_marking_is_checked_first():
    n = net(MINIMAL.replace("res=M", "res=M rd={I1}"))
    e = enabled(n, Configuration.of({"snk": 1}), "t1")
    assert e.reason == "marking"


def test_fire_moves_the_token_and_records_production():
    n = net(MINIMAL.replace("res=M", "res=M pd={I1}"))
    c = fire(n, initial_configuration(n), "t1")
    assert c.tokens() == {"snk": 1}
    assert ("I1", "M", 1) in c.info_state


def test_fire_rejects_disabled_transitions():
    n = net(MINIMAL)
    with pytest.raises(NotEnabled):
        fire(n, Configuration.of({"snk": 1}), "t1")


def test_send_delivers_to_the_destination():
    n = net(MINIMAL.replace("res=M", "res=M pd={I} sd={I:B}"))
    c = fire(n, initial_configuration(n), "t1")
    assert {("I", "M"), ("I", "B")} <= c.info


def test_sequence_order_matters():
    n = net(SEQ)
    end = fire_sequence(n, initial_configuration(n), ["t_G2", "t_G3"])
    assert end.tokens() == {"snk": 1}
    r = net(REVERSED)
    assert not enabled(r, initial_configuration(r), "t_G3")


def test_minimal_reachability():
    g = reachability_graph(net(MINIMAL))
    assert (len(g.nodes), len(g.edges)) == (2, 1)


def test_or_block_configurations(load):
    # the free-choice or-block: both branches lead to the same final configuration
    model = load('actor A kind=agent\ngoal G1 "x" actor=A\ngoal G2 "a" actor=A atomic-no-info\n'
                 'goal G3 "b" actor=A atomic-no-info\ndecompose G1 or G2 G3\n')
    n, _ = map_to_net(model)
    g = reachability_graph(n)
    assert len(g.nodes) == oracle_soundness(n).reachable == 2
    assert len(g.edges) == 2


def test_unbounded_self_loop():
    n = net("place src\nplace snk\ntrans t res=M\ntrans e res=M\narc src t\narc t src\narc t snk\n"
            "arc snk e\narc e snk\ninitial src\nfinal snk\n", strict=False)
    with pytest.raises(BoundExceeded) as exc:
        reachability_graph(n, bound=1)
    assert exc.value.witness and exc.value.bound == 1
    with pytest.raises(BoundExceeded) as exc3:
        reachability_graph(n, bound=3)
    assert len(exc3.value.witness) > len(exc.value.witness)


def test_and_block_net_is_sound(load):
    model = load("andblock.gqm")
    n, _ = map_to_net(model)
    assert check_soundness(n).sound


def test_dead_reader():
    n = net(SEQ.replace("pd={I}", "pd={J}"))
    r = check_soundness(n)
    assert not r.sound and r.dead_transitions == ("t_G3",)
    assert not r.option_to_complete


def test_improper_completion_witness():
    n = net("place src\nplace a\nplace b\nplace snk\ntrans split res=M\ntrans early res=M\ntrans join res=M\n"
            "arc src split\narc split a\narc split b\narc a early\narc early snk\narc a join\narc b join\n"
            "arc join snk\ninitial src\nfinal snk\n")
    r = check_soundness(n)
    assert not r.proper_completion
    assert r.improper_witness == ("split", "early")
    c = fire_sequence(n, initial_configuration(n), r.improper_witness)
    assert c.tokens() == {"snk": 1, "b": 1}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_token_conservation_and_info_monotonicity(seed):
    rng = random.Random(seed)
    n = random_net(rng)
    c = initial_configuration(n)
    for _ in range(12):
        live = [t for t in sorted(n.transitions) if enabled(n, c, t)]
        if not live:
            break
        t = rng.choice(live)
        nxt = fire(n, c, t)
        assert nxt.total_tokens() - c.total_tokens() == len(n.postset(t)) - len(n.preset(t))
        assert c.info_state <= nxt.info_state
        c = nxt


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_exploration_is_independent_of_transition_order(seed):
    n = random_net(random.Random(seed))
    ids = sorted(n.transitions)
    renamed = {t: f"z{len(ids) - k:02d}" for k, t in enumerate(ids)}  # reverses the firing order
    arcs = frozenset((renamed.get(a, a), renamed.get(b, b)) for a, b in n.arcs)
    trans = {renamed[t]: Transition(renamed[t], x.res, x.pd, x.rd, x.md, x.sd) for t, x in n.transitions.items()}
    m = WfaNet(n.places, trans, arcs, n.initial, n.final)
    try:
        g1 = reachability_graph(n)
    except BoundExceeded:
        with pytest.raises(BoundExceeded):
            reachability_graph(m)
        return
    g2 = reachability_graph(m)
    back = {v: k for k, v in renamed.items()}
    assert set(g1.nodes) == set(g2.nodes)
    assert g1.edge_set() == {(a, back[t], b) for a, t, b in g2.edge_set()}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_information_free_nets_match_classical_soundness(seed):
    n = random_net(random.Random(seed), infos=())
    try:
        a = check_soundness(n)
        b = check_soundness(n, info_flow=False)
    except BoundExceeded:
        return
    assert a.to_dict() | {"info_flow": None} == b.to_dict() | {"info_flow": None}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_soundness_matches_the_path_oracle(seed, info_flow):
    n = random_net(random.Random(seed))
    try:
        r = check_soundness(n, info_flow=info_flow)
    except BoundExceeded:
        with pytest.raises(Unbounded):
            oracle_soundness(n, info_flow=info_flow)
        return
    o = oracle_soundness(n, info_flow=info_flow)
    assert (r.option_to_complete, r.proper_completion, r.no_dead_transitions) == \
        (o.option_to_complete, o.proper_completion, o.no_dead_transitions)
    assert r.node_count == o.reachable


def test_soundness_report_serializes_witnesses():
    d = check_soundness(net(SEQ.replace("pd={I}", "pd={J}"))).to_dict()
    assert d["dead_transitions"] == ["t_G3"] and d["stuck_witness"] == []  # the initial configuration is already stuck
