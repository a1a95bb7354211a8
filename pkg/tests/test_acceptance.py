"""Acceptance criteria, one group of ``test_criterion_N_*`` tests each.

The conftest hook prints a PASS/FAIL line per criterion after the run.
"""

import random
import time
from collections import Counter

import pytest

from conftest import MUTATIONS, corpus_models, corpus_nets, fixture_path
from generators import or_product, program_text, random_net, random_program, random_tree, runs_by_structure, tree_to_gqm
from oracles import Unbounded, count_complete_runs, datalog_model, soundness as oracle_soundness
from wfav.datalog import evaluate, parse_program
from wfav.engine import BoundExceeded, check_soundness
from wfav.iq import Dimension, analyze_all, check_consistency, check_timeliness
from wfav.iq import direct
from wfav.mapper import map_to_net, verify_mapping
from wfav.parser import (
    parse_goal_model,
    parse_wfa_net_with_warnings,
    print_goal_model,
    print_wfa_net,
)
from wfav.pipeline import read_text, run_check, run_verify


def errors(outcome):
    return Counter(v.property_id for v in outcome.report.violations if v.is_error)


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# ---- 1. flash crash reproduction

def test_criterion_1_stub_quotes_are_untrustworthy():
    path = fixture_path("flashcrash_stub.gqm")
    out, secs = timed(lambda: run_check(str(path), read_text(path)))
    assert errors(out) == Counter({"Q3": 2})
    assert {v.elements for v in out.report.violations} == {("match_orders", "stub_quote"),
                                                           ("match_orders", "flicker_quote")}
    assert secs < 1.0


def test_criterion_1_circuit_breaker_is_incomplete_and_inconsistent():
    path = fixture_path("flashcrash_cb.gqm")
    out, secs = timed(lambda: run_check(str(path), read_text(path)))
    assert errors(out) == Counter({"Q5": 2, "Q7": 2})
    assert not out.report.diagnostics
    assert secs < 1.0


# ---- 2. mapping correctness

TREES = [random_tree(random.Random(seed), max_depth=4, max_fanout=3) for seed in range(100)]


def test_criterion_2_random_trees_verify_cleanly():
    def go():
        for tree in TREES:
            m = parse_goal_model(tree_to_gqm(tree))
            net, trace = map_to_net(m)
            assert verify_mapping(m, net, trace) == []
    _, secs = timed(go)
    assert secs < 10.0


def test_criterion_2_run_count_equals_or_product():
    # the stated law; it only holds while no or-branch has more than one run itself
    bad = []
    for k, tree in enumerate(TREES):
        net, _ = map_to_net(parse_goal_model(tree_to_gqm(tree)))
        runs = count_complete_runs(net)
        assert runs == runs_by_structure(tree)  # what the mapping actually yields
        if runs != or_product(tree):
            bad.append((k, runs, or_product(tree)))
    assert not bad, f"{len(bad)}/100 trees differ from the or-product law, e.g. tree {bad[0][0]}: " \
                    f"{bad[0][1]} runs vs product {bad[0][2]}"


def test_criterion_2_run_count_structural_law():
    # sum over or-branches, product over and-members
    for tree in TREES:
        net, _ = map_to_net(parse_goal_model(tree_to_gqm(tree)))
        assert count_complete_runs(net) == runs_by_structure(tree)


# ---- 3. soundness vs oracle

def _agree(net, info_flow):
    try:
        r = check_soundness(net, info_flow=info_flow)
    except BoundExceeded:
        with pytest.raises(Unbounded):
            oracle_soundness(net, info_flow=info_flow)
        return
    o = oracle_soundness(net, info_flow=info_flow)
    assert (r.option_to_complete, r.proper_completion, r.no_dead_transitions) == \
        (o.option_to_complete, o.proper_completion, o.no_dead_transitions), net


def _small_corpus_nets():
    nets = []
    for p in corpus_nets():
        n, _ = parse_wfa_net_with_warnings(p.read_text(), str(p), strict=False)
        if n is not None and not n.structural_problems():
            nets.append(n)
    for p in corpus_models():
        nets.append(map_to_net(parse_goal_model(p.read_text()))[0])
    return [n for n in nets if len(n.places) <= 8]


def test_criterion_3_soundness_matches_oracle():
    def go():
        nets = _small_corpus_nets()
        assert len(nets) >= 20
        rng = random.Random(2024)
        nets += [random_net(rng) for _ in range(200)]
        for n in nets:
            for info_flow in (False, True):
                _agree(n, info_flow)
    _, secs = timed(go)
    assert secs < 30.0


# ---- 4. datalog

def test_criterion_4_seminaive_equals_naive_fixpoint():
    def go():
        for seed in range(100):
            rules, facts = random_program(random.Random(seed), n_preds=6, max_facts=30)
            prog = parse_program(program_text(rules, facts))
            got = {(a.predicate, a.terms) for a in evaluate(prog).atoms}
            assert got == datalog_model(rules, facts), seed
    _, secs = timed(go)
    assert secs < 5.0


def test_criterion_4_transitive_closure_chain():
    def go():
        for n in range(1, 11):
            text = "".join(f"e(n{k},n{k + 1}).\n" for k in range(n))
            text += "tc(X,Y) :- e(X,Y).\ntc(X,Z) :- tc(X,Y), e(Y,Z).\n"
            assert len(evaluate(parse_program(text)).tuples("tc")) == n * (n + 1) // 2
    _, secs = timed(go)
    assert secs < 5.0


# ---- 5. IQ rule strictness

TIMED = """\
actor A kind=agent
actor B kind=agent
goal root "r" actor=A
goal make "m" actor=A
goal use "u" actor=B
decompose root and make use
info I owner=A volatility={vol}
produce make I check=B at={p}
provide A B I kind=IP time=1
permit g A B I ops={{R}}
trust B A info=I
read use I type=R check=B purpose="p" at={r}
"""


def _timely(vol, p, r):
    [v] = [v for v in check_timeliness(parse_goal_model(TIMED.format(vol=vol, p=p, r=r)))
           if v.goal == "use"]
    return v.satisfied


@pytest.mark.parametrize("vol", range(1, 9))
def test_criterion_5_read_timeliness_boundary(vol):
    for p in range(0, 4):
        assert not _timely(vol, p, p + vol)  # currency == volatility
        assert _timely(vol, p, p + vol - 1)  # one tick fresher
        assert not _timely(vol, p, p + vol + 3)


SHARED = """\
actor hub kind=agent
actor m1 kind=agent
actor m2 kind=agent
actor m3 kind=agent
goal root "r" actor=hub
goal make "m" actor=hub
goal r1 "x" actor=m1
goal r2 "y" actor=m2
goal r3 "z" actor=m3
decompose root and make r1 r2 r3
info cb owner=hub volatility=50
produce make cb check=B at=0
provide hub m1 cb kind=IP time=1
provide hub m2 cb kind=IP time=1
provide hub m3 cb kind=IP time=1
permit g1 hub m1 cb ops={{R}}
permit g2 hub m2 cb ops={{R}}
permit g3 hub m3 cb ops={{R}}
trust m1 hub info=cb
trust m2 hub info=cb
trust m3 hub info=cb
read r1 cb type=R check=B purpose="{p1}" at={t1}
read r2 cb type=R check=B purpose="{p2}" at={t2}
read r3 cb type=R check=B purpose="{p3}" at={t3}
"""


@pytest.mark.parametrize("t1", range(1, 5))
def test_criterion_5_consistency_is_equality_of_read_times(t1):
    for t2 in range(1, 5):
        for t3 in range(1, 5):
            for purposes in (("cb", "cb", "cb"), ("cb", "cb", "other"), ("a", "b", "c")):
                m = parse_goal_model(SHARED.format(t1=t1, t2=t2, t3=t3, p1=purposes[0],
                                                   p2=purposes[1], p3=purposes[2]))
                got = {v.goal: v.satisfied for v in check_consistency(m)}
                times = {"r1": t1, "r2": t2, "r3": t3}
                purpose = dict(zip(("r1", "r2", "r3"), purposes))
                for g in times:
                    group = [h for h in times if purpose[h] == purpose[g]]
                    assert got[g] == (len({times[h] for h in group}) == 1), (g, times, purposes)


# ---- 6. dual implementation

def test_criterion_6_rules_equal_direct_on_every_fixture():
    models = corpus_models()
    assert len(models) >= 12
    seen = set()
    for p in models:
        m = parse_goal_model(p.read_text())
        rules = analyze_all(m)
        assert rules == direct.analyze_all(m), p.name
        seen |= {(v.dimension, v.satisfied) for v in rules}
    assert seen == {(d, s) for d in Dimension for s in (True, False)}


# ---- 7. round trips and determinism

def test_criterion_7_round_trips_are_byte_stable():
    for p in corpus_models():
        once = print_goal_model(parse_goal_model(p.read_text()))
        assert print_goal_model(parse_goal_model(once)) == once, p.name
    for p in corpus_nets():
        net, _ = parse_wfa_net_with_warnings(p.read_text(), strict=False)
        once = print_wfa_net(net)
        assert print_wfa_net(parse_wfa_net_with_warnings(once, strict=False)[0]) == once, p.name


def test_criterion_7_pipeline_is_deterministic():
    for p in corpus_models():
        text = p.read_text()
        a, b = run_check(p.name, text), run_check(p.name, text)
        assert a.report.to_json() == b.report.to_json(), p.name
        if a.net is not None:
            assert print_wfa_net(a.net) == print_wfa_net(b.net)
            assert a.trace.to_json() == b.trace.to_json()


# ---- 8. mutation detection

NET_MUTANTS = {
    "M1": "clean.gqm", "M2": "clean.gqm", "M3": "clean.gqm", "M4": "clean.gqm", "M5": "clean.gqm",
    "C1": "clean.gqm", "C2": "clean.gqm", "C3": "deadlock.gqm", "C4": "early_exit.gqm", "C5": "choice.gqm",
    "I1": "clean.gqm", "I2": "clean.gqm", "I3": "clean.gqm", "I4": "dataflow.gqm",
}
# proper completion failing means a token is left behind, so option to complete fails too
ALSO_ALLOWED = {"C4": {"C3"}}


def _mutant_findings(pid):
    if pid.startswith("Q"):
        path = MUTATIONS / f"{pid}.gqm"
        return errors(run_check(path.name, path.read_text()))
    model = MUTATIONS / NET_MUTANTS[pid]
    if not model.exists():
        model = fixture_path(NET_MUTANTS[pid])
    net = MUTATIONS / f"{pid}.wfa"
    trace = net.with_suffix(".trace")
    out = run_verify(model.name, model.read_text(), net.name, net.read_text(),
                     trace.read_text() if trace.exists() else None)
    assert not out.report.diagnostics, out.report.diagnostics
    return errors(out)


def test_criterion_8_every_property_is_caught_in_isolation():
    caught, extra = [], {}
    pids = list(NET_MUTANTS) + [f"Q{k}" for k in range(1, 8)]
    assert len(pids) == 21
    for pid in pids:
        found = set(_mutant_findings(pid))
        if pid in found:
            caught.append(pid)
        stray = found - {pid} - ALSO_ALLOWED.get(pid, set())
        if stray:
            extra[pid] = sorted(stray)
    assert len(caught) == 21 and not extra, (sorted(set(pids) - set(caught)), extra)


def test_criterion_8_clean_baselines():
    for name in ("clean.gqm",):
        p = fixture_path(name)
        assert errors(run_check(name, p.read_text())) == Counter()
    for name in ("deadlock.gqm", "early_exit.gqm", "choice.gqm", "dataflow.gqm"):
        p = MUTATIONS / name
        assert errors(run_check(name, p.read_text())) == Counter(), name
