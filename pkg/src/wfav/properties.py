"""The 21 design properties, checked over (model, net, trace, verdicts).

Every check looks at the artifacts as given; nothing is taken on trust from
the mapper. Violations come back in catalogue order, then by element.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .engine import BoundExceeded, SoundnessReport, WfaNet, check_soundness, reachability_graph
from .iq.direct import ModelContext
from .iq.verdicts import Dimension, IqVerdict
from .mapper import BlockKind, BuildingBlock, MappingTrace
from .model import DecompositionKind, GoalModel, Operation, ReadType, leaf_goals, resolve_responsibility


class Category(enum.Enum):
    MAPPING = "Mapping"
    CONTROL_FLOW = "ControlFlow"
    INFORMATION_FLOW = "InformationFlow"
    IQ = "IQ"


CATALOGUE: dict[str, tuple[Category, str]] = {
    "M1": (Category.MAPPING, "every leaf goal maps to exactly one transition"),
    "M2": (Category.MAPPING, "only leaf goals map to transitions"),
    "M3": (Category.MAPPING, "every mapped block is a complete building block"),
    "M4": (Category.MAPPING, "information appears only where its producer is mapped"),
    "M5": (Category.MAPPING, "res is the delegation-resolved actor of the goal"),
    "C1": (Category.CONTROL_FLOW, "the net is a WF-net"),
    "C2": (Category.CONTROL_FLOW, "places and transitions alternate"),
    "C3": (Category.CONTROL_FLOW, "option to complete"),
    "C4": (Category.CONTROL_FLOW, "proper completion"),
    "C5": (Category.CONTROL_FLOW, "no dead transitions"),
    "I1": (Category.INFORMATION_FLOW, "information is held before it is read, modified or sent"),
    "I2": (Category.INFORMATION_FLOW, "every send follows a provision in the goal model"),
    "I3": (Category.INFORMATION_FLOW, "modifications are permitted"),
    "I4": (Category.INFORMATION_FLOW, "sequences respect data dependencies"),
    "Q1": (Category.IQ, "accessibility"),
    "Q2": (Category.IQ, "believability of required reads"),
    "Q3": (Category.IQ, "source trustworthiness"),
    "Q4": (Category.IQ, "provision trustworthiness"),
    "Q5": (Category.IQ, "completeness"),
    "Q6": (Category.IQ, "timeliness"),
    "Q7": (Category.IQ, "consistency"),
}
PROPERTY_IDS = tuple(CATALOGUE)
_RANK = {p: k for k, p in enumerate(PROPERTY_IDS)}


@dataclass(frozen=True)
class Violation:
    property_id: str
    elements: tuple[str, ...]
    message: str
    witness: tuple[str, ...] | None = None
    severity: str = "error"

    @property
    def category(self) -> Category:
        return CATALOGUE[self.property_id][0]

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def sort_key(self):
        return (_RANK[self.property_id], self.elements, self.message)

    def __str__(self) -> str:
        text = f"{self.property_id} {self.category.value} {' '.join(self.elements)}: {self.message}"
        if self.witness is not None:
            text += f" (witness: {' '.join(self.witness) or '<initial>'})"
        if not self.is_error:
            text = "warning: " + text
        return text

    def to_dict(self) -> dict:
        return {
            "property": self.property_id,
            "category": self.category.value,
            "elements": list(self.elements),
            "message": self.message,
            "witness": None if self.witness is None else list(self.witness),
            "severity": self.severity,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Violation":
        w = d.get("witness")
        return cls(d["property"], tuple(d["elements"]), d["message"],
                   None if w is None else tuple(w), d.get("severity", "error"))


def _v(pid: str, elements: Sequence[str], message: str, witness=None, severity="error") -> Violation:
    return Violation(pid, tuple(elements), message, None if witness is None else tuple(witness), severity)


def _goal_map(net: WfaNet, trace: MappingTrace) -> dict[str, str | None]:
    """transition -> goal, from the trace, falling back to the t_<goal> convention."""
    paired = dict((t, g) for g, t in trace.pairs)
    out = {}
    for tid in net.transitions:
        if tid in paired:
            out[tid] = paired[tid]
        elif tid.startswith("t_"):
            out[tid] = tid[2:]
        else:
            out[tid] = None
    return out


def _expected_block(model: GoalModel, goal: str) -> tuple[BlockKind, tuple[str, ...]]:
    d = model.decompositions.get(goal)
    if d is None:
        return BlockKind.ATOMIC, (goal,)
    return (BlockKind.AND if d.kind is DecompositionKind.AND else BlockKind.OR), tuple(d.children)


def check_mapping_rules(model: GoalModel, net: WfaNet, trace: MappingTrace) -> list[Violation]:
    """M1-M5, C1, C2 and I4: everything that needs no state-space exploration."""
    out: list[Violation] = []
    leaves = leaf_goals(model)
    goal_of = _goal_map(net, trace)

    # M1 / M2
    by_goal: dict[str, list[str]] = defaultdict(list)
    for tid, g in goal_of.items():
        if g is None or g not in model.goals:
            out.append(_v("M1", [tid], "transition does not correspond to any goal"))
        elif g not in leaves:
            out.append(_v("M2", [g, tid], f"non-leaf goal {g} is mapped directly"))
        else:
            by_goal[g].append(tid)
    for g in sorted(leaves):
        n = len(by_goal.get(g, ()))
        if n != 1:
            out.append(_v("M1", [g], f"leaf goal maps to {n} transitions"))

    # M3: the recorded block tree must mirror the model's decompositions
    seen: list[str] = []

    def audit(block: BuildingBlock):
        seen.append(block.root)
        if block.root not in model.goals:
            out.append(_v("M3", [block.root], "block root is not a goal"))
            return
        kind, members = _expected_block(model, block.root)
        if block.kind is not kind or tuple(block.members) != members:
            out.append(_v("M3", [block.root],
                          f"incomplete building block: recorded {block.kind.value} {list(block.members)}, "
                          f"model has {kind.value} {list(members)}"))
        if block.kind is not BlockKind.ATOMIC and [c.root for c in block.children] != list(block.members):
            out.append(_v("M3", [block.root], "block members and nested blocks disagree"))
        for c in block.children:
            audit(c)

    for b in trace.blocks:
        audit(b)
    for g in sorted(set(model.goals) - set(seen)):
        out.append(_v("M3", [g], "goal belongs to no building block"))
    for g in sorted({g for g in seen if seen.count(g) > 1}):
        out.append(_v("M3", [g], "goal belongs to several building blocks"))

    # M4
    produced = {i for t in net.transitions.values() for i in t.pd}
    for tid in sorted(net.transitions):
        for i in sorted(net.transitions[tid].uses() - produced):
            out.append(_v("M4", [tid, i], f"{i} is used but no transition produces it"))

    # M5
    for tid in sorted(net.transitions):
        g = goal_of[tid]
        if g in model.goals:
            expected = resolve_responsibility(model, g)
            if net.transitions[tid].res != expected:
                out.append(_v("M5", [tid], f"res is {net.transitions[tid].res}, expected {expected}"))

    # C1 / C2
    for code, message, elements in net.structural_problems():
        pid = "C2" if code in ("consecutive-places", "consecutive-activities") else "C1"
        out.append(_v(pid, elements, message))

    out.extend(_check_dependency_order(model, net, trace, goal_of))
    return sorted(out, key=Violation.sort_key)


def _check_dependency_order(model, net, trace, goal_of) -> list[Violation]:
    """I4: in every and-block, no member runs before a member producing what it uses."""
    succ = net.successors()
    tids_of_goal = defaultdict(set)
    for tid, g in goal_of.items():
        if g is not None:
            tids_of_goal[g].add(tid)

    reach_cache: dict[str, set[str]] = {}

    def reach(tid):
        if tid not in reach_cache:
            seen, stack = set(), [tid]
            while stack:
                for n in succ.get(stack.pop(), ()):
                    if n not in seen:
                        seen.add(n)
                        stack.append(n)
            reach_cache[tid] = seen
        return reach_cache[tid]

    def io(block: BuildingBlock):
        tids = {t for leaf in block.leaves() for t in tids_of_goal.get(leaf, ())}
        produced = {i for t in tids for i in net.transitions[t].pd}
        used = {i for t in tids for i in net.transitions[t].uses()}
        return tids, produced, used

    def before(a: set[str], b: set[str]) -> bool:
        return any(y in reach(x) for x in a for y in b)

    out = []

    def visit(block: BuildingBlock, sequential: bool):
        members = list(block.children)
        if sequential:
            info = [io(m) for m in members]
            for x, (tx, px, ux) in enumerate(info):
                for y, (ty, py, _) in enumerate(info):
                    needed = (ux - px) & py
                    if x != y and needed and before(tx, ty) and not before(ty, tx):
                        out.append(_v("I4", [members[x].root, members[y].root],
                                      f"{members[x].root} runs before {members[y].root}, "
                                      f"which produces {','.join(sorted(needed))}"))
        for m in members:
            visit(m, m.kind is BlockKind.AND)

    top = BuildingBlock("<root>", BlockKind.AND, tuple(b.root for b in trace.blocks), tuple(trace.blocks))
    visit(top, True)
    return out


def _check_soundness(net: WfaNet, soundness: SoundnessReport | BoundExceeded) -> list[Violation]:
    if isinstance(soundness, BoundExceeded):
        return [_v("C3", [soundness.place],
                   f"state space exceeds {soundness.bound} token(s) in {soundness.place}", soundness.witness)]
    out = []
    if not soundness.option_to_complete:
        out.append(_v("C3", [net.final], "a reachable configuration cannot complete", soundness.stuck_witness))
    if not soundness.proper_completion:
        out.append(_v("C4", [net.final], "the final place is marked while other tokens remain",
                      soundness.improper_witness))
    for t in soundness.dead_transitions:
        out.append(_v("C5", [t], "transition can never fire"))
    return out


def _check_held_before_use(net: WfaNet, bound: int) -> list[Violation]:
    """I1 over every control-flow-reachable firing, for information produced in the net."""
    out = []
    produced = {i for t in net.transitions.values() for i in t.pd}
    try:
        graph = reachability_graph(net, bound=bound, info_flow=False)
    except BoundExceeded:
        graph = None  # already reported as C3
    if graph is not None:
        reported = set()
        for a, tid, _ in graph.edges:
            t = net.transitions[tid]
            held = graph.nodes[a].info
            for i in sorted(t.uses() & produced):
                if (i, t.res) not in held and (tid, i) not in reported:
                    reported.add((tid, i))
                    out.append(_v("I1", [tid, i], f"{t.res} may use {i} before holding it",
                                  graph.path_to(a) + (tid,)))
    return out


def _check_sends_and_modifies(model: GoalModel, net: WfaNet) -> list[Violation]:
    """I2 and I3, statically over the transition annotations."""
    out = []
    cx = ModelContext(model)
    for tid in sorted(net.transitions):
        t = net.transitions[tid]
        for info, dest in sorted(t.sd):
            if not any(p.info == info and p.target in model.identities(dest)
                       and p.source in model.identities(t.res)
                       for p in model.provisions):
                out.append(_v("I2", [tid, info, dest], f"no provision of {info} from {t.res} to {dest}"))
        for info in sorted(t.md):
            if info not in model.information or Operation.MODIFY not in cx.holds(t.res, info):
                out.append(_v("I3", [tid, info], f"{t.res} modifies {info} without Modify permission"))
    return out


_Q_OF = {
    Dimension.ACCESSIBILITY: "Q1",
    Dimension.COMPLETENESS: "Q5",
    Dimension.TIMELINESS: "Q6",
    Dimension.CONSISTENCY: "Q7",
}


def _check_iq(model: GoalModel, verdicts: Iterable[IqVerdict], strict_optional_reads: bool) -> list[Violation]:
    out = []
    read_type = {(r.goal, r.info): r.read_type for r in model.reads}
    for v in verdicts:
        if v.satisfied:
            continue
        elems = [v.goal, v.info]
        why = f" ({', '.join(v.witness)})" if v.witness else ""
        if v.dimension in _Q_OF:
            failed = [k for k, ok in v.facets if not ok]
            detail = f" [{', '.join(failed)}]" if failed else ""
            out.append(_v(_Q_OF[v.dimension], elems, f"{v.dimension.value} unsatisfied{detail}{why}"))
        elif v.dimension is Dimension.BELIEVABILITY and (v.goal, v.info) in read_type:
            required = read_type[(v.goal, v.info)] is ReadType.REQUIRED
            severity = "error" if required or strict_optional_reads else "warning"
            out.append(_v("Q2", elems, "read without believability check", severity=severity))
        elif v.dimension is Dimension.TRUSTWORTHINESS:
            if v.facet("source") is False:
                out.append(_v("Q3", elems, f"untrusted source, so also inaccurate{why}"))
            if v.facet("provision") is False:
                out.append(_v("Q4", elems, f"unauthorized operations in the provision chain{why}"))
    return out


def check_all(
    model: GoalModel,
    net: WfaNet,
    trace: MappingTrace,
    verdicts: Iterable[IqVerdict],
    soundness: SoundnessReport | BoundExceeded | None = None,
    *,
    bound: int = 1,
    strict_optional_reads: bool = False,
) -> list[Violation]:
    """Evaluate all 21 properties.

    Soundness (C3-C5) is control-flow soundness of the net; pass a report to
    reuse one, or let it be computed. Soundness and I1 are only meaningful on
    WF-nets, so they are skipped when C1 or C2 fails. Q2 findings on optional
    reads come back as warnings unless ``strict_optional_reads``.
    """
    trace.check_model(model)
    out = check_mapping_rules(model, net, trace)
    well_formed = not any(v.property_id in ("C1", "C2") for v in out)
    if well_formed:
        if soundness is None:
            soundness = control_soundness(net, bound)
        out.extend(_check_soundness(net, soundness))
        out.extend(_check_held_before_use(net, bound))
    out.extend(_check_sends_and_modifies(model, net))
    out.extend(_check_iq(model, verdicts, strict_optional_reads))
    return sorted(out, key=Violation.sort_key)


def control_soundness(net: WfaNet, bound: int = 1) -> SoundnessReport | BoundExceeded:
    try:
        return check_soundness(net, bound=bound, info_flow=False)
    except BoundExceeded as exc:
        return exc
