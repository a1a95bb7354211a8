"""Text formats for goal models (``.gqm``) and WFA-nets (``.wfa``).

Both formats are line oriented: one statement per line, ``#`` starts a
comment, attributes are written ``key=value``. Values are identifiers,
integers, double-quoted strings or ``{a,b}`` sets. Every name must be
declared before it is referenced.

Goal model statements::

    actor M kind=role
    actor nyse kind=agent plays={M}
    goal G1 "apply CB" actor=M atomic-no-info
    decompose G0 and G1 G2
    info I1 owner=M volatility=5
    partof I2 I1
    produce G1 I1 check=B at=0
    read G2 I1 type=R check=B purpose="coordinate_cb" parts={I2} at=3
    modify G2 I1 at=4
    send G1 I1 to=nyse timeliness=2 at=1
    provide M nyse I1 kind=IP time=1
    permit P1 M nyse I1 ops={R,S}
    delegate M nyse goal=G1
    trust nyse M info=I1
    distrust nyse M perm=P1

WFA-net statements::

    place p_source
    trans t1 res=M pd={I1} rd={I0} md={} sd={I1:nyse}
    arc p_source t1
    initial p_source
    final p_sink
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .engine import Transition, WfaNet
from .model import (
    Actor,
    ActorKind,
    Decomposition,
    DecompositionKind,
    Delegation,
    Goal,
    GoalModel,
    Information,
    ModifyRel,
    Operation,
    PermissionGrant,
    Polarity,
    ProduceRel,
    Provision,
    ProvisionKind,
    ReadRel,
    ReadType,
    SendRel,
    SubjectKind,
    TrustRel,
)

GOAL_HEADER = "# wfav goal model v1"
NET_HEADER = "# wfav wfa-net v1"

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(
    r"""(?P<kv>(?P<key>[A-Za-z_][A-Za-z0-9_-]*)=(?P<val>"(?:[^"\\]|\\.)*"|\{[^}]*\}|[^\s"{}]*))
      | (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<word>[^\s"={}]+)
      | (?P<bad>\S)""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    severity: str  # "error" or "warning"
    message: str

    def __str__(self) -> str:
        return f"{self.span.file}:{self.span.line}:{self.span.column}: {self.severity}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(map(str, diagnostics)))


@dataclass
class _Tok:
    kind: str  # "word", "str", "kv"
    text: str
    col: int
    key: str = ""
    value: str = ""
    value_col: int = 0


class _Abort(Exception):
    pass


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _tokenize(line: str) -> tuple[list[_Tok], str | None, int]:
    """Split a line into tokens; return (tokens, error, error column)."""
    body = line
    # strip a trailing comment, respecting quotes
    in_str = esc = False
    for i, ch in enumerate(line):
        if esc:
            esc = False
        elif ch == "\\" and in_str:
            esc = True
        elif ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            body = line[:i]
            break
    toks = []
    for m in _TOKEN.finditer(body):
        col = m.start() + 1
        if m.group("bad") is not None:
            return toks, f"unexpected character {m.group('bad')!r}", col
        if m.group("kv") is not None:
            toks.append(_Tok("kv", m.group("kv"), col, m.group("key"), m.group("val"), m.start("val") + 1))
        elif m.group("str") is not None:
            toks.append(_Tok("str", _unquote(m.group("str")), col))
        else:
            toks.append(_Tok("word", m.group("word"), col))
    return toks, None, 0


class _Statement:
    """Positional words and key=value attributes of one line, with error helpers."""

    def __init__(self, parser: "_LineParser", toks: list[_Tok], lineno: int):
        self.p = parser
        self.lineno = lineno
        self.keyword = toks[0]
        self.args = [t for t in toks[1:] if t.kind != "kv"]
        self.attrs: dict[str, _Tok] = {}
        for t in toks[1:]:
            if t.kind == "kv":
                if t.key in self.attrs:
                    self.error(t.col, f"duplicate attribute {t.key}")
                self.attrs[t.key] = t
        self.used: set[str] = set()

    def error(self, col: int, msg: str):
        self.p.diag(self.lineno, col, "error", msg)
        raise _Abort

    def end_col(self) -> int:
        return self.keyword.col + len(self.keyword.text)

    def ident(self, i: int, what: str) -> tuple[str, int]:
        if i >= len(self.args):
            self.error(self.end_col(), f"missing {what}")
        t = self.args[i]
        if t.kind != "word" or not IDENT.match(t.text):
            self.error(t.col, f"malformed {what} {t.text!r}")
        return t.text, t.col

    def string(self, i: int, what: str) -> str:
        if i >= len(self.args) or self.args[i].kind != "str":
            col = self.args[i].col if i < len(self.args) else self.end_col()
            self.error(col, f"expected quoted {what}")
        return self.args[i].text

    def nargs(self, n: int, flags: Iterable[str] = ()) -> set[str]:
        """Check positional count; extra positional words must be known flags."""
        seen = set()
        for t in self.args[n:]:
            if t.kind == "word" and t.text in flags:
                seen.add(t.text)
            else:
                self.error(t.col, f"unexpected {t.text!r}")
        return seen

    def attr(self, key: str, required: bool = True) -> _Tok | None:
        t = self.attrs.get(key)
        self.used.add(key)
        if t is None and required:
            self.error(self.end_col(), f"missing attribute {key}=")
        return t

    def attr_int(self, key: str, required: bool = True, positive: bool = False) -> int | None:
        t = self.attr(key, required)
        if t is None:
            return None
        if not re.fullmatch(r"\d+", t.value):
            self.error(t.value_col, f"malformed attribute {key}={t.value} (expected non-negative integer)")
        v = int(t.value)
        if positive and v <= 0:
            self.error(t.value_col, f"attribute {key} must be positive")
        return v

    def attr_choice(self, key: str, choices: dict[str, object], required: bool = True):
        t = self.attr(key, required)
        if t is None:
            return None
        if t.value not in choices:
            self.error(t.value_col, f"malformed attribute {key}={t.value} (expected {'|'.join(choices)})")
        return choices[t.value]

    def attr_str(self, key: str) -> str:
        t = self.attr(key)
        if t.value.startswith('"'):
            return _unquote(t.value)
        if not t.value:
            self.error(t.value_col, f"empty attribute {key}")
        return t.value

    def attr_set(self, key: str, required: bool = False) -> list[tuple[str, int]]:
        t = self.attr(key, required)
        if t is None:
            return []
        if not (t.value.startswith("{") and t.value.endswith("}")):
            self.error(t.value_col, f"malformed attribute {key}={t.value} (expected {{...}})")
        inner = t.value[1:-1]
        out = []
        offset = t.value_col + 1
        for part in inner.split(","):
            stripped = part.strip()
            col = offset + (len(part) - len(part.lstrip()))
            offset += len(part) + 1
            if stripped:
                out.append((stripped, col))
        return out

    def finish(self):
        for key, t in self.attrs.items():
            if key not in self.used:
                self.error(t.col, f"unknown attribute {key}")


class _LineParser:
    def __init__(self, text: str, filename: str):
        self.text = text
        self.filename = filename
        self.diagnostics: list[ParseDiagnostic] = []

    def diag(self, line: int, col: int, severity: str, msg: str):
        self.diagnostics.append(ParseDiagnostic(SourceSpan(self.filename, line, max(col, 1)), severity, msg))

    def statements(self):
        for lineno, line in enumerate(self.text.splitlines(), start=1):
            toks, err, col = _tokenize(line)
            if err:
                self.diag(lineno, col, "error", err)
                continue
            if not toks:
                continue
            if toks[0].kind != "word":
                self.diag(lineno, toks[0].col, "error", "statement must start with a keyword")
                continue
            try:
                yield _Statement(self, toks, lineno)
            except _Abort:
                continue

    @property
    def failed(self) -> bool:
        return any(d.severity == "error" for d in self.diagnostics)


_BOOL_CHECK = {"B": True, "NB": False}
_OPS = {op.value: op for op in Operation}


def parse_goal_model(text: str, filename: str = "<input>") -> GoalModel | list[ParseDiagnostic]:
    """Parse a ``.gqm`` document. Returns the model, or the diagnostics on any error."""
    lp = _LineParser(text, filename)
    actors: dict[str, Actor] = {}
    goals: dict[str, Goal] = {}
    decomps: dict[str, Decomposition] = {}
    infos: dict[str, dict] = {}
    permissions: dict[str, PermissionGrant] = {}
    rels: dict[str, set] = defaultdict(set)
    declared: dict[str, str] = {}

    def declare(st: _Statement, ident: str, col: int, kind: str):
        if ident in declared:
            st.error(col, f"duplicate id {ident} (already declared as {declared[ident]})")
        declared[ident] = kind

    def ref(st: _Statement, ident: str, col: int, coll, what: str):
        if ident not in coll:
            st.error(col, f"undefined {what} {ident}")

    for st in lp.statements():
        kw = st.keyword.text
        try:
            if kw == "actor":
                aid, col = st.ident(0, "actor id")
                st.nargs(1)
                kind = st.attr_choice("kind", {"agent": ActorKind.AGENT, "role": ActorKind.ROLE})
                plays = st.attr_set("plays")
                for r, rc in plays:
                    ref(st, r, rc, actors, "actor")
                st.finish()
                declare(st, aid, col, "actor")
                actors[aid] = Actor(aid, kind, frozenset(r for r, _ in plays))
            elif kw == "goal":
                gid, col = st.ident(0, "goal id")
                label = st.string(1, "label")
                flags = st.nargs(2, ("atomic-no-info", "nomap"))
                owner = st.attr("actor")
                ref(st, owner.value, owner.value_col, actors, "actor")
                st.finish()
                declare(st, gid, col, "goal")
                goals[gid] = Goal(gid, label, owner.value, "atomic-no-info" in flags, "nomap" in flags)
            elif kw == "decompose":
                parent, pcol = st.ident(0, "goal id")
                ref(st, parent, pcol, goals, "goal")
                if len(st.args) < 2 or st.args[1].text not in ("and", "or"):
                    st.error(st.args[1].col if len(st.args) > 1 else st.end_col(), "expected and|or")
                kind = DecompositionKind(st.args[1].text)
                children = []
                for i in range(2, len(st.args)):
                    c, ccol = st.ident(i, "goal id")
                    ref(st, c, ccol, goals, "goal")
                    children.append(c)
                st.finish()
                if parent in decomps:
                    st.error(pcol, f"goal {parent} is already decomposed")
                decomps[parent] = Decomposition(parent, kind, tuple(children))
            elif kw == "info":
                iid, col = st.ident(0, "info id")
                st.nargs(1)
                owner = st.attr("owner")
                ref(st, owner.value, owner.value_col, actors, "actor")
                vol = st.attr_int("volatility")
                st.finish()
                declare(st, iid, col, "info")
                infos[iid] = {"id": iid, "owner": owner.value, "volatility": vol, "parts": set()}
            elif kw == "partof":
                part, c1 = st.ident(0, "info id")
                whole, c2 = st.ident(1, "info id")
                st.nargs(2)
                ref(st, part, c1, infos, "info")
                ref(st, whole, c2, infos, "info")
                st.finish()
                infos[whole]["parts"].add(part)
            elif kw in ("produce", "read", "modify", "send"):
                g, gc = st.ident(0, "goal id")
                i, ic = st.ident(1, "info id")
                st.nargs(2)
                ref(st, g, gc, goals, "goal")
                ref(st, i, ic, infos, "info")
                if kw == "produce":
                    rel = ProduceRel(g, i, st.attr_choice("check", _BOOL_CHECK), st.attr_int("at"))
                elif kw == "read":
                    rtype = st.attr_choice("type", {"R": ReadType.REQUIRED, "O": ReadType.OPTIONAL})
                    check = st.attr_choice("check", _BOOL_CHECK)
                    purpose = st.attr_str("purpose").strip()
                    parts = st.attr_set("parts")
                    for p, pc in parts:
                        ref(st, p, pc, infos, "info")
                    rel = ReadRel(g, i, rtype, check, purpose, st.attr_int("at"), frozenset(p for p, _ in parts))
                elif kw == "modify":
                    rel = ModifyRel(g, i, st.attr_int("at", required=False))
                else:
                    to = st.attr("to")
                    ref(st, to.value, to.value_col, actors, "actor")
                    rel = SendRel(g, i, to.value, st.attr_int("timeliness", positive=True), st.attr_int("at"))
                st.finish()
                rels[kw].add(rel)
            elif kw == "provide":
                a, ac = st.ident(0, "actor id")
                b, bc = st.ident(1, "actor id")
                i, ic = st.ident(2, "info id")
                st.nargs(3)
                ref(st, a, ac, actors, "actor")
                ref(st, b, bc, actors, "actor")
                ref(st, i, ic, infos, "info")
                kind = st.attr_choice("kind", {"P": ProvisionKind.P, "IP": ProvisionKind.IP})
                rels[kw].add(Provision(a, b, i, kind, st.attr_int("time", positive=True)))
                st.finish()
            elif kw == "permit":
                pid, pc = st.ident(0, "permission id")
                a, ac = st.ident(1, "actor id")
                b, bc = st.ident(2, "actor id")
                i, ic = st.ident(3, "info id")
                st.nargs(4)
                ref(st, a, ac, actors, "actor")
                ref(st, b, bc, actors, "actor")
                ref(st, i, ic, infos, "info")
                ops = set()
                for o, oc in st.attr_set("ops", required=True):
                    if o not in _OPS:
                        st.error(oc, f"unknown operation {o} (expected P, R, M or S)")
                    ops.add(_OPS[o])
                st.finish()
                declare(st, pid, pc, "permission")
                permissions[pid] = PermissionGrant(pid, a, b, i, frozenset(ops))
            elif kw in ("delegate", "trust", "distrust"):
                a, ac = st.ident(0, "actor id")
                b, bc = st.ident(1, "actor id")
                st.nargs(2)
                ref(st, a, ac, actors, "actor")
                ref(st, b, bc, actors, "actor")
                allowed = {"goal": (SubjectKind.GOAL, goals), "perm": (SubjectKind.PERMISSION, permissions)}
                if kw != "delegate":
                    allowed["info"] = (SubjectKind.INFO, infos)
                given = [k for k in allowed if k in st.attrs]
                if len(given) != 1:
                    st.error(st.end_col(), f"{kw} needs exactly one of " + ", ".join(f"{k}=" for k in allowed))
                skind, coll = allowed[given[0]]
                subj = st.attr(given[0])
                ref(st, subj.value, subj.value_col, coll, given[0])
                st.finish()
                if kw == "delegate":
                    rels[kw].add(Delegation(a, b, skind, subj.value))
                else:
                    pol = Polarity.TRUST if kw == "trust" else Polarity.DISTRUST
                    rels["trust"].add(TrustRel(a, b, pol, skind, subj.value))
            else:
                st.error(st.keyword.col, f"unknown keyword {kw}")
        except _Abort:
            continue

    if lp.failed:
        return lp.diagnostics
    return GoalModel(
        actors=actors,
        goals=goals,
        decompositions=decomps,
        information={k: Information(v["id"], v["owner"], v["volatility"], frozenset(v["parts"]))
                     for k, v in infos.items()},
        produces=frozenset(rels["produce"]),
        reads=frozenset(rels["read"]),
        modifies=frozenset(rels["modify"]),
        sends=frozenset(rels["send"]),
        provisions=frozenset(rels["provide"]),
        delegations=frozenset(rels["delegate"]),
        permissions=permissions,
        trusts=frozenset(rels["trust"]),
    )


def _set(items: Iterable[str]) -> str:
    return "{" + ",".join(sorted(items)) + "}"


def _check(b: bool) -> str:
    return "B" if b else "NB"


def print_goal_model(model: GoalModel) -> str:
    lines = [GOAL_HEADER]
    order = sorted(model.actors.values(), key=lambda a: (a.kind is not ActorKind.ROLE, a.id))
    for a in order:
        extra = f" plays={_set(a.plays)}" if a.plays else ""
        lines.append(f"actor {a.id} kind={a.kind.value}{extra}")
    for g in sorted(model.goals.values(), key=lambda g: g.id):
        flags = (" atomic-no-info" if g.atomic_no_info else "") + (" nomap" if g.nomap else "")
        lines.append(f"goal {g.id} {_quote(g.label)} actor={g.actor}{flags}")
    for d in sorted(model.decompositions.values(), key=lambda d: d.parent):
        lines.append(f"decompose {d.parent} {d.kind.value} {' '.join(d.children)}")
    for i in sorted(model.information.values(), key=lambda i: i.id):
        lines.append(f"info {i.id} owner={i.owner} volatility={i.volatility}")
    for whole, part in sorted((i.id, p) for i in model.information.values() for p in i.parts):
        lines.append(f"partof {part} {whole}")
    for r in sorted(model.produces, key=lambda r: (r.goal, r.info)):
        lines.append(f"produce {r.goal} {r.info} check={_check(r.check)} at={r.at}")
    for r in sorted(model.reads, key=lambda r: (r.goal, r.info)):
        parts = f" parts={_set(r.parts)}" if r.parts else ""
        lines.append(f"read {r.goal} {r.info} type={r.read_type.value} check={_check(r.check)} "
                     f"purpose={_quote(r.purpose)}{parts} at={r.at}")
    for r in sorted(model.modifies, key=lambda r: (r.goal, r.info, -1 if r.at is None else r.at)):
        at = "" if r.at is None else f" at={r.at}"
        lines.append(f"modify {r.goal} {r.info}{at}")
    for r in sorted(model.sends, key=lambda r: (r.goal, r.info, r.destination, r.at, r.timeliness)):
        lines.append(f"send {r.goal} {r.info} to={r.destination} timeliness={r.timeliness} at={r.at}")
    for p in sorted(model.provisions, key=lambda p: (p.source, p.target, p.info, p.kind.value, p.time)):
        lines.append(f"provide {p.source} {p.target} {p.info} kind={p.kind.value} time={p.time}")
    for g in sorted(model.permissions.values(), key=lambda g: g.id):
        ops = _set(op.value for op in g.ops)
        lines.append(f"permit {g.id} {g.grantor} {g.grantee} {g.info} ops={ops}")
    for d in sorted(model.delegations, key=lambda d: (d.subject_kind.value, d.subject, d.delegator, d.delegatee)):
        lines.append(f"delegate {d.delegator} {d.delegatee} {d.subject_kind.value}={d.subject}")
    for t in sorted(model.trusts, key=lambda t: (t.polarity.value != "trust", t.trustor, t.trustee,
                                                  t.scope_kind.value, t.scope)):
        lines.append(f"{t.polarity.value} {t.trustor} {t.trustee} {t.scope_kind.value}={t.scope}")
    return "\n".join(lines) + "\n"


def parse_wfa_net(text: str, filename: str = "<input>", strict: bool = True) -> WfaNet | list[ParseDiagnostic]:
    """Parse a ``.wfa`` document; returns the net or the error diagnostics.

    WF-net well-formedness problems (consecutive places, several sources, ...)
    are errors when ``strict``. Use :func:`parse_wfa_net_with_warnings` to get
    them as warnings alongside the net instead.
    """
    net, diags = parse_wfa_net_with_warnings(text, filename, strict)
    return diags if net is None else net


def parse_wfa_net_with_warnings(
    text: str, filename: str = "<input>", strict: bool = False
) -> tuple[WfaNet | None, list[ParseDiagnostic]]:
    lp = _LineParser(text, filename)
    places: dict[str, int] = {}
    transitions: dict[str, Transition] = {}
    trans_line: dict[str, int] = {}
    arcs: dict[tuple[str, str], tuple[int, int]] = {}
    ends: dict[str, tuple[str, int, int]] = {}

    for st in lp.statements():
        kw = st.keyword.text
        try:
            if kw == "place":
                pid, col = st.ident(0, "place id")
                st.nargs(1)
                st.finish()
                if pid in places or pid in transitions:
                    st.error(col, f"duplicate node {pid}")
                places[pid] = st.lineno
            elif kw == "trans":
                tid, col = st.ident(0, "transition id")
                st.nargs(1)
                res = st.attr("res")
                if not IDENT.match(res.value):
                    st.error(res.value_col, f"malformed actor {res.value!r}")
                sets = {}
                for key in ("pd", "rd", "md"):
                    items = st.attr_set(key)
                    for name, c in items:
                        if not IDENT.match(name):
                            st.error(c, f"malformed info id {name!r}")
                    sets[key] = frozenset(n for n, _ in items)
                sd = set()
                for item, c in st.attr_set("sd"):
                    info, sep, dest = item.partition(":")
                    if not sep or not IDENT.match(info.strip()) or not IDENT.match(dest.strip()):
                        st.error(c, f"malformed send entry {item!r} (expected info:actor)")
                    sd.add((info.strip(), dest.strip()))
                st.finish()
                if tid in places or tid in transitions:
                    st.error(col, f"duplicate node {tid}")
                transitions[tid] = Transition(tid, res.value, sets["pd"], sets["rd"], sets["md"], frozenset(sd))
                trans_line[tid] = st.lineno
            elif kw == "arc":
                a, ac = st.ident(0, "node id")
                b, bc = st.ident(1, "node id")
                st.nargs(2)
                st.finish()
                for n, c in ((a, ac), (b, bc)):
                    if n not in places and n not in transitions:
                        st.error(c, f"undefined node {n}")
                if (a, b) in arcs:
                    st.error(ac, f"duplicate arc {a} {b}")
                arcs[(a, b)] = (st.lineno, ac)
            elif kw in ("initial", "final"):
                pid, col = st.ident(0, "place id")
                st.nargs(1)
                st.finish()
                if pid not in places:
                    st.error(col, f"undefined place {pid}")
                if kw in ends:
                    st.error(st.keyword.col, f"{kw} place declared twice")
                ends[kw] = (pid, st.lineno, col)
            else:
                st.error(st.keyword.col, f"unknown keyword {kw}")
        except _Abort:
            continue

    last_line = max(1, len(text.splitlines()))
    for kw in ("initial", "final"):
        if kw not in ends and not lp.failed:
            lp.diag(last_line, 1, "error", f"missing {kw} statement")
    if lp.failed:
        return None, lp.diagnostics

    net = WfaNet(frozenset(places), transitions, frozenset(arcs), ends["initial"][0], ends["final"][0])
    severity = "error" if strict else "warning"
    for code, message, elements in net.structural_problems():
        if code in ("consecutive-places", "consecutive-activities") and tuple(elements) in arcs:
            line, col = arcs[tuple(elements)]
        elif code == "source":
            line, col = ends["initial"][1], ends["initial"][2]
        elif code == "sink":
            line, col = ends["final"][1], ends["final"][2]
        else:
            first = elements[0] if elements else None
            line = places.get(first) or trans_line.get(first) or 1
            col = 1
        lp.diag(line, col, severity, f"not a WF-net: {message}")
    if lp.failed:
        return None, lp.diagnostics
    return net, lp.diagnostics


def print_wfa_net(net: WfaNet) -> str:
    lines = [NET_HEADER]
    for p in sorted(net.places):
        lines.append(f"place {p}")
    for tid in sorted(net.transitions):
        t = net.transitions[tid]
        parts = [f"trans {tid} res={t.res}"]
        for key in ("pd", "rd", "md"):
            vals = getattr(t, key)
            if vals:
                parts.append(f"{key}={_set(vals)}")
        if t.sd:
            parts.append("sd=" + _set(f"{i}:{d}" for i, d in t.sd))
        lines.append(" ".join(parts))
    for a, b in sorted(net.arcs):
        lines.append(f"arc {a} {b}")
    lines.append(f"initial {net.initial}")
    lines.append(f"final {net.final}")
    return "\n".join(lines) + "\n"


def load_goal_model(path) -> GoalModel:
    """Read and parse a ``.gqm`` file, raising :class:`ParseError` on diagnostics."""
    with open(path, encoding="utf-8") as fh:
        out = parse_goal_model(fh.read(), str(path))
    if isinstance(out, list):
        raise ParseError(out)
    return out


def load_wfa_net(path, strict: bool = True) -> WfaNet:
    with open(path, encoding="utf-8") as fh:
        net, diags = parse_wfa_net_with_warnings(fh.read(), str(path), strict=strict)
    if net is None:
        raise ParseError(diags)
    return net
