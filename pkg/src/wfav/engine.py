"""Workflow nets with actors: structure, token game, reachability, soundness.

A configuration is a marking plus the information each actor holds. An
activity is enabled when its input places are marked (control flow), the
information it reads, modifies or sends is held by its responsible actor
(information flow), and no IQ requirement attached to it is violated. The
last two clauses can be switched off to analyse the underlying WF-net.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Transition:
    id: str
    res: str
    pd: frozenset[str] = frozenset()
    rd: frozenset[str] = frozenset()
    md: frozenset[str] = frozenset()
    sd: frozenset[tuple[str, str]] = frozenset()  # (info, destination actor)

    def uses(self) -> set[str]:
        """Information that must already be held before firing."""
        return (set(self.rd) | set(self.md) | {i for i, _ in self.sd}) - set(self.pd)


@dataclass(frozen=True)
class WfaNet:
    places: frozenset[str]
    transitions: Mapping[str, Transition]
    arcs: frozenset[tuple[str, str]]
    initial: str
    final: str

    def __post_init__(self):
        pre: dict[str, list[str]] = {t: [] for t in self.transitions}
        post: dict[str, list[str]] = {t: [] for t in self.transitions}
        for a, b in sorted(self.arcs):
            if a in self.places and b in self.transitions:
                pre[b].append(a)
            elif a in self.transitions and b in self.places:
                post[a].append(b)
        object.__setattr__(self, "_pre", {t: tuple(v) for t, v in pre.items()})
        object.__setattr__(self, "_post", {t: tuple(v) for t, v in post.items()})

    def __hash__(self):
        return hash((self.places, self.arcs, self.initial, self.final))

    def preset(self, tid: str) -> tuple[str, ...]:
        return self._pre[tid]

    def postset(self, tid: str) -> tuple[str, ...]:
        return self._post[tid]

    @property
    def nodes(self) -> set[str]:
        return set(self.places) | set(self.transitions)

    def successors(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {n: set() for n in self.nodes}
        for a, b in self.arcs:
            out.setdefault(a, set()).add(b)
        return out

    def structural_problems(self) -> list[tuple[str, str, tuple[str, ...]]]:
        """WF-net well-formedness problems as ``(code, message, elements)``.

        Codes: ``unknown-node``, ``consecutive-places``, ``consecutive-activities``,
        ``source``, ``sink``, ``not-on-path``.
        """
        problems = []
        nodes = self.nodes
        overlap = set(self.places) & set(self.transitions)
        for n in sorted(overlap):
            problems.append(("unknown-node", f"{n} is both a place and a transition", (n,)))
        for a, b in sorted(self.arcs):
            for n in (a, b):
                if n not in nodes:
                    problems.append(("unknown-node", f"arc {a}->{b} names unknown node {n}", (a, b)))
            if a in self.places and b in self.places:
                problems.append(("consecutive-places", f"consecutive places {a} -> {b}", (a, b)))
            if a in self.transitions and b in self.transitions:
                problems.append(("consecutive-activities", f"consecutive activities {a} -> {b}", (a, b)))
        has_in = {b for _, b in self.arcs}
        has_out = {a for a, _ in self.arcs}
        sources = sorted(p for p in self.places if p not in has_in)
        sinks = sorted(p for p in self.places if p not in has_out)
        if self.initial not in self.places:
            problems.append(("source", f"initial place {self.initial} is not a place", (self.initial,)))
        if self.final not in self.places:
            problems.append(("sink", f"final place {self.final} is not a place", (self.final,)))
        if sources != [self.initial]:
            problems.append(("source", "source places " + (",".join(sources) or "none") + f" (expected only {self.initial})",
                             tuple(sources)))
        if sinks != [self.final]:
            problems.append(("sink", "sink places " + (",".join(sinks) or "none") + f" (expected only {self.final})",
                             tuple(sinks)))
        succ = self.successors()
        pred: dict[str, set[str]] = {n: set() for n in nodes}
        for a, b in self.arcs:
            pred.setdefault(b, set()).add(a)
        fwd = _closure(self.initial, succ)
        bwd = _closure(self.final, pred)
        off = sorted(n for n in nodes if n not in fwd or n not in bwd)
        if off:
            problems.append(("not-on-path", "not on a source-to-sink path: " + ",".join(off), tuple(off)))
        return problems


def _closure(start: str, edges: Mapping[str, Iterable[str]]) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        for n in edges.get(stack.pop(), ()):
            if n not in seen:
                seen.add(n)
                stack.append(n)
    return seen


@dataclass(frozen=True)
class Configuration:
    """Marking plus held information.

    Equality and hashing use the marking and the (info, holder) pairs only;
    the tick at which each pair was first acquired rides along.
    """

    marking: tuple[tuple[str, int], ...]
    info: frozenset[tuple[str, str]] = frozenset()
    ticks: tuple[tuple[str, str, int], ...] = field(default=(), compare=False)
    step: int = field(default=0, compare=False)

    @classmethod
    def of(cls, tokens: Mapping[str, int] | Iterable[str], info: Iterable[tuple[str, str]] = ()) -> "Configuration":
        counts = Counter(tokens) if not isinstance(tokens, Mapping) else Counter(dict(tokens))
        info = frozenset(info)
        return cls(tuple(sorted((p, n) for p, n in counts.items() if n > 0)), info,
                   tuple(sorted((i, a, 0) for i, a in info)))

    def tokens(self) -> dict[str, int]:
        return dict(self.marking)

    @property
    def info_state(self) -> frozenset[tuple[str, str, int]]:
        return frozenset(self.ticks)

    def total_tokens(self) -> int:
        return sum(n for _, n in self.marking)

    def __str__(self) -> str:
        m = ",".join(p if n == 1 else f"{p}*{n}" for p, n in self.marking)
        i = ",".join(f"{x}@{a}" for x, a in sorted(self.info))
        return f"[{m}]" + (f"{{{i}}}" if i else "")


def initial_configuration(net: WfaNet) -> Configuration:
    return Configuration.of({net.initial: 1})


@dataclass(frozen=True)
class Enablement:
    enabled: bool
    reason: str | None = None  # "marking", "information-flow" or "iq"
    detail: str = ""

    def __bool__(self) -> bool:
        return self.enabled


class NotEnabled(Exception):
    pass


class BoundExceeded(Exception):
    def __init__(self, bound: int, place: str, witness: Sequence[str]):
        self.bound = bound
        self.place = place
        self.witness = tuple(witness)
        super().__init__(f"place {place} exceeds {bound} token(s) after firing {' '.join(witness)}")


def enabled(
    net: WfaNet,
    config: Configuration,
    tid: str,
    *,
    info_flow: bool = True,
    iq_blocked: Mapping[str, Sequence] | None = None,
) -> Enablement:
    t = net.transitions[tid]
    tokens = config.tokens()
    need = Counter(net.preset(tid))
    for p, n in sorted(need.items()):
        if tokens.get(p, 0) < n:
            return Enablement(False, "marking", f"no token in {p}")
    if info_flow:
        missing = sorted(i for i in t.uses() if (i, t.res) not in config.info)
        if missing:
            return Enablement(False, "information-flow", f"{t.res} does not hold {','.join(missing)}")
    if iq_blocked and iq_blocked.get(tid):
        return Enablement(False, "iq", "unsatisfied IQ: " + ", ".join(map(str, iq_blocked[tid])))
    return Enablement(True)


def _successor(net: WfaNet, config: Configuration, tid: str) -> Configuration:
    t = net.transitions[tid]
    tokens = Counter(config.tokens())
    tokens.subtract(Counter(net.preset(tid)))
    tokens.update(Counter(net.postset(tid)))
    step = config.step + 1
    info = set(config.info)
    ticks = list(config.ticks)
    for pair in sorted({(i, t.res) for i in t.pd} | set(t.sd)):
        if pair not in info:
            info.add(pair)
            ticks.append((pair[0], pair[1], step))
    return Configuration(tuple(sorted((p, n) for p, n in tokens.items() if n > 0)),
                         frozenset(info), tuple(sorted(ticks)), step)


def fire(
    net: WfaNet,
    config: Configuration,
    tid: str,
    *,
    info_flow: bool = True,
    iq_blocked: Mapping[str, Sequence] | None = None,
) -> Configuration:
    e = enabled(net, config, tid, info_flow=info_flow, iq_blocked=iq_blocked)
    if not e:
        raise NotEnabled(f"{tid} is not enabled ({e.reason}: {e.detail})")
    return _successor(net, config, tid)


def fire_sequence(net: WfaNet, config: Configuration, tids: Iterable[str], **kw) -> Configuration:
    for tid in tids:
        config = fire(net, config, tid, **kw)
    return config


@dataclass
class ReachabilityGraph:
    nodes: list[Configuration]
    edges: list[tuple[int, str, int]]
    root: int = 0
    parent: dict[int, tuple[int, str]] = field(default_factory=dict)

    def path_to(self, node: int) -> tuple[str, ...]:
        seq = []
        while node in self.parent:
            node, tid = self.parent[node]
            seq.append(tid)
        return tuple(reversed(seq))

    def edge_set(self) -> set[tuple[Configuration, str, Configuration]]:
        return {(self.nodes[a], t, self.nodes[b]) for a, t, b in self.edges}


def reachability_graph(
    net: WfaNet,
    initial: Configuration | None = None,
    bound: int = 1,
    *,
    info_flow: bool = True,
    iq_blocked: Mapping[str, Sequence] | None = None,
) -> ReachabilityGraph:
    """Breadth-first exploration of every configuration reachable from ``initial``."""
    if bound < 1:
        raise ValueError("bound must be positive")
    root = initial or initial_configuration(net)
    index = {root: 0}
    graph = ReachabilityGraph([root], [])
    for p, n in root.marking:
        if n > bound:
            raise BoundExceeded(bound, p, ())
    queue = deque([0])
    order = sorted(net.transitions)
    while queue:
        i = queue.popleft()
        cur = graph.nodes[i]
        for tid in order:
            if not enabled(net, cur, tid, info_flow=info_flow, iq_blocked=iq_blocked):
                continue
            nxt = _successor(net, cur, tid)
            for p, n in nxt.marking:
                if n > bound:
                    raise BoundExceeded(bound, p, graph.path_to(i) + (tid,))
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(graph.nodes)
                graph.nodes.append(nxt)
                graph.parent[j] = (i, tid)
                queue.append(j)
            graph.edges.append((i, tid, j))
    return graph


@dataclass(frozen=True)
class SoundnessReport:
    option_to_complete: bool
    proper_completion: bool
    no_dead_transitions: bool
    stuck_witness: tuple[str, ...] | None = None
    improper_witness: tuple[str, ...] | None = None
    dead_transitions: tuple[str, ...] = ()
    node_count: int = 0
    edge_count: int = 0
    info_flow: bool = True
    iq_gated: bool = False

    @property
    def sound(self) -> bool:
        return self.option_to_complete and self.proper_completion and self.no_dead_transitions

    def to_dict(self) -> dict:
        return {
            "sound": self.sound,
            "option_to_complete": self.option_to_complete,
            "proper_completion": self.proper_completion,
            "no_dead_transitions": self.no_dead_transitions,
            "stuck_witness": list(self.stuck_witness) if self.stuck_witness is not None else None,
            "improper_witness": list(self.improper_witness) if self.improper_witness is not None else None,
            "dead_transitions": list(self.dead_transitions),
            "nodes": self.node_count,
            "edges": self.edge_count,
            "info_flow": self.info_flow,
            "iq_gated": self.iq_gated,
        }


def check_soundness(
    net: WfaNet,
    initial: Configuration | None = None,
    bound: int = 1,
    *,
    info_flow: bool = True,
    iq_blocked: Mapping[str, Sequence] | None = None,
) -> SoundnessReport:
    g = reachability_graph(net, initial, bound, info_flow=info_flow, iq_blocked=iq_blocked)
    final_marking = ((net.final, 1),)
    back: dict[int, list[int]] = {i: [] for i in range(len(g.nodes))}
    for a, _, b in g.edges:
        back[b].append(a)
    can_finish = {i for i, c in enumerate(g.nodes) if c.marking == final_marking}
    stack = list(can_finish)
    while stack:
        for a in back[stack.pop()]:
            if a not in can_finish:
                can_finish.add(a)
                stack.append(a)
    stuck = [i for i in range(len(g.nodes)) if i not in can_finish]
    improper = [
        i for i, c in enumerate(g.nodes)
        if c.tokens().get(net.final, 0) >= 1 and c.total_tokens() > 1
    ]
    fired = {t for _, t, _ in g.edges}
    dead = tuple(sorted(set(net.transitions) - fired))
    return SoundnessReport(
        option_to_complete=not stuck,
        proper_completion=not improper,
        no_dead_transitions=not dead,
        stuck_witness=g.path_to(stuck[0]) if stuck else None,
        improper_witness=g.path_to(improper[0]) if improper else None,
        dead_transitions=dead,
        node_count=len(g.nodes),
        edge_count=len(g.edges),
        info_flow=info_flow,
        iq_gated=bool(iq_blocked),
    )


BACKSLASH_N = "\\n"  # DOT line break inside a label


def _dot_id(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def net_to_dot(net: WfaNet) -> str:
    lines = [f"digraph wfa {{", "  rankdir=LR;",
             f"  // places={len(net.places)} transitions={len(net.transitions)} arcs={len(net.arcs)}"]
    for p in sorted(net.places):
        extra = ",peripheries=2" if p == net.final else (",style=bold" if p == net.initial else "")
        lines.append(f"  {_dot_id(p)} [shape=circle{extra}];")
    for tid in sorted(net.transitions):
        t = net.transitions[tid]
        label = [tid, f"res={t.res}"]
        for name in ("pd", "rd", "md"):
            vals = getattr(t, name)
            if vals:
                label.append(f"{name}={{{','.join(sorted(vals))}}}")
        if t.sd:
            label.append("sd={" + ",".join(f"{i}:{d}" for i, d in sorted(t.sd)) + "}")
        lines.append(f"  {_dot_id(tid)} [shape=box,label={_dot_id(BACKSLASH_N.join(label))}];")
    for a, b in sorted(net.arcs):
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def reachability_to_dot(graph: ReachabilityGraph) -> str:
    lines = ["digraph reachability {",
             f"  // nodes={len(graph.nodes)} edges={len(graph.edges)}"]
    for i, c in enumerate(graph.nodes):
        lines.append(f"  c{i} [label={_dot_id(str(c))}];")
    for a, t, b in graph.edges:
        lines.append(f"  c{a} -> c{b} [label={_dot_id(t)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
