import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATA, corpus_models, corpus_nets
from wfav.model import GoalModel
from wfav.parser import (
    ParseError,
    load_goal_model,
    parse_goal_model,
    parse_wfa_net,
    parse_wfa_net_with_warnings,
    print_goal_model,
    print_wfa_net,
)


def test_minimal_program():
    m = parse_goal_model('actor M kind=role\ngoal G1 "apply CB" actor=M atomic-no-info\n')
    assert isinstance(m, GoalModel)
    assert list(m.actors) == ["M"] and list(m.goals) == ["G1"]
    assert m.goals["G1"].label == "apply CB"


def test_dangling_reference_has_a_span():
    text = 'actor M kind=agent\ngoal G1 "x" actor=M\nread G1 I1 type=R check=B purpose="coordinate_cb" at=3\n'
    diags = parse_goal_model(text, "m.gqm")
    assert isinstance(diags, list) and diags
    d = diags[0]
    assert d.severity == "error"
    assert (d.span.file, d.span.line, d.span.column) == ("m.gqm", 3, 9)
    assert "I1" in d.message
    assert str(d).startswith("m.gqm:3:9: error: ")


@pytest.mark.parametrize("text, fragment", [
    ("frobnicate x\n", "unknown keyword"),
    ("actor A kind=alien\n", "kind"),
    ("actor A kind=agent\nactor A kind=agent\n", "duplicate"),
    ('actor A kind=agent\ninfo I owner=A volatility=-1\n', "volatility"),
    ('actor A kind=agent\ngoal G "unterminated actor=A\n', ""),
])
def test_syntax_errors_are_diagnostics(text, fragment):
    diags = parse_goal_model(text)
    assert isinstance(diags, list) and diags
    assert all(d.severity == "error" for d in diags)
    assert any(fragment in d.message for d in diags)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.text(alphabet='actorgalinfx ="{}#=,_1\t', max_size=30), max_size=6))
def test_every_diagnostic_points_inside_the_input(lines):
    text = "\n".join(lines)
    out = parse_goal_model(text)
    if isinstance(out, GoalModel):
        return
    split = text.split("\n")
    for d in out:
        assert 1 <= d.span.line <= len(split)
        assert 1 <= d.span.column <= len(split[d.span.line - 1]) + 1


def test_stock_market_counts():
    m = load_goal_model(str(DATA.parent.parent / "src/wfav/fixtures/stock_market.gqm"))
    assert (len(m.actors), len(m.goals), len(m.information)) == (3, 7, 2)
    assert m.trusts and m.provisions


def test_load_raises_parse_error(tmp_path):
    p = tmp_path / "bad.gqm"
    p.write_text("nonsense\n")
    with pytest.raises(ParseError) as exc:
        load_goal_model(p)
    assert exc.value.diagnostics[0].span.file == str(p)


def test_minimal_net():
    net = parse_wfa_net("place src\nplace snk\ntrans t1 res=M rd={I1}\narc src t1\narc t1 snk\n"
                        "initial src\nfinal snk\n")
    assert not isinstance(net, list)
    assert net.places == {"src", "snk"}
    assert net.transitions["t1"].rd == {"I1"}
    assert net.structural_problems() == []


def test_consecutive_places_diagnostic():
    text = ("place a\nplace b\nplace c\ntrans t res=M\narc a b\narc b c\narc a t\narc t c\n"
            "initial a\nfinal c\n")
    diags = parse_wfa_net(text, "n.wfa")
    assert isinstance(diags, list)
    assert any("consecutive places" in d.message for d in diags)
    net, warnings = parse_wfa_net_with_warnings(text, "n.wfa", strict=False)
    assert net is not None and all(w.severity == "warning" for w in warnings)


def test_trading_process_round_trip():
    text = (DATA / "trading.wfa").read_text()
    net = parse_wfa_net(text)
    assert parse_wfa_net(print_wfa_net(net)) == net


def test_empty_model_prints_header_only():
    assert print_goal_model(GoalModel()) == "# wfav goal model v1\n"


@pytest.mark.parametrize("path", corpus_models(), ids=lambda p: p.name)
def test_model_round_trip(path):
    m = parse_goal_model(path.read_text(), str(path))
    printed = print_goal_model(m)
    assert printed == print_goal_model(m)
    again = parse_goal_model(printed)
    assert again == m
    assert print_goal_model(again) == printed


@pytest.mark.parametrize("path", corpus_nets(), ids=lambda p: p.name)
def test_net_round_trip(path):
    net, _ = parse_wfa_net_with_warnings(path.read_text(), str(path), strict=False)
    printed = print_wfa_net(net)
    again, _ = parse_wfa_net_with_warnings(printed, strict=False)
    assert again == net
    assert print_wfa_net(again) == printed


def test_printing_is_insensitive_to_statement_order():
    lines = (DATA.parent.parent / "src/wfav/fixtures/clean.gqm").read_text().splitlines()
    head = [l for l in lines if l.startswith(("actor", "goal", "info"))]
    rest = [l for l in lines if l not in head and not l.startswith("#")]
    random.Random(7).shuffle(rest)
    a = parse_goal_model("\n".join(lines))
    b = parse_goal_model("\n".join(head + rest))
    assert print_goal_model(a) == print_goal_model(b)


def test_parsing_is_deterministic():
    text = 'actor A kind=agent\ngoal G "x" actor=B\nread G I type=Q\n'
    assert list(map(str, parse_goal_model(text))) == list(map(str, parse_goal_model(text)))
