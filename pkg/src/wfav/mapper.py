"""Map a goal model onto a WFA-net.

Leaf goals become transitions ``t_<goal>``. An and-decomposition becomes a
sequence, an or-decomposition a free choice between branches that share the
same entry and exit place, so completing any one branch is enough. Several
root goals are sequenced in id order. Within every sequence, members are
stably re-sorted so that each runs after the members producing what it uses.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable

from .engine import Transition, WfaNet
from .iq.verdicts import IqVerdict
from .model import DecompositionKind, GoalModel, delegation_chain, resolve_responsibility
from .parser import print_goal_model


class BlockKind(enum.Enum):
    ATOMIC = "atomic"
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class BuildingBlock:
    root: str
    kind: BlockKind
    members: tuple[str, ...]
    children: tuple["BuildingBlock", ...] = ()

    def leaves(self) -> list[str]:
        if self.kind is BlockKind.ATOMIC:
            return [self.root]
        return [leaf for c in self.children for leaf in c.leaves()]

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_dict(self) -> dict:
        d = {"root": self.root, "kind": self.kind.value, "members": list(self.members)}
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BuildingBlock":
        return cls(d["root"], BlockKind(d["kind"]), tuple(d["members"]),
                   tuple(cls.from_dict(c) for c in d.get("children", ())))


class MappingError(Exception):
    def __init__(self, kind: str, message: str, elements: Iterable[str] = ()):
        self.kind = kind
        self.elements = tuple(elements)
        super().__init__(f"{kind}: {message}")


class BlockError(MappingError):
    def __init__(self, message: str, elements: Iterable[str] = ()):
        super().__init__("PartialBlock", message, elements)


class InputMismatch(Exception):
    pass


def model_digest(model: GoalModel) -> str:
    return hashlib.sha256(print_goal_model(model).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class MappingTrace:
    model_digest: str
    pairs: tuple[tuple[str, str], ...]
    blocks: tuple[BuildingBlock, ...]
    chains: dict[str, tuple[str, ...]] = field(default_factory=dict)
    iq_blocked: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def transition_of(self, goal: str) -> str | None:
        return next((t for g, t in self.pairs if g == goal), None)

    def goal_of(self, tid: str) -> str | None:
        return next((g for g, t in self.pairs if t == tid), None)

    def check_model(self, model: GoalModel) -> None:
        if self.model_digest != model_digest(model):
            raise InputMismatch("mapping trace was produced from a different goal model")

    def to_json(self) -> str:
        return json.dumps({
            "model_digest": self.model_digest,
            "pairs": [list(p) for p in self.pairs],
            "blocks": [b.to_dict() for b in self.blocks],
            "chains": {g: list(c) for g, c in sorted(self.chains.items())},
            "iq_blocked": {t: list(v) for t, v in sorted(self.iq_blocked.items())},
        }, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MappingTrace":
        d = json.loads(text)
        return cls(
            d["model_digest"],
            tuple(tuple(p) for p in d["pairs"]),
            tuple(BuildingBlock.from_dict(b) for b in d["blocks"]),
            {g: tuple(c) for g, c in d.get("chains", {}).items()},
            {t: tuple(v) for t, v in d.get("iq_blocked", {}).items()},
        )


def identify_blocks(model: GoalModel) -> list[BuildingBlock]:
    """One block tree per root goal, mirroring the decomposition forest."""

    def build(goal: str) -> BuildingBlock:
        if model.goals[goal].nomap:
            raise BlockError(f"goal {goal} is excluded from mapping, so its block is incomplete", (goal,))
        d = model.decompositions.get(goal)
        if d is None:
            return BuildingBlock(goal, BlockKind.ATOMIC, (goal,))
        kind = BlockKind.AND if d.kind is DecompositionKind.AND else BlockKind.OR
        return BuildingBlock(goal, kind, tuple(d.children), tuple(build(c) for c in d.children))

    return [build(r) for r in model.roots()]


def transition_id(goal: str) -> str:
    return f"t_{goal}"


def leaf_transition(model: GoalModel, goal: str) -> Transition:
    g = model.goals[goal]
    res = resolve_responsibility(model, goal)
    if g.atomic_no_info:
        return Transition(transition_id(goal), res)
    rels = lambda coll: frozenset(r.info for r in coll if r.goal == goal)  # noqa: E731
    return Transition(
        transition_id(goal),
        res,
        pd=rels(model.produces),
        rd=rels(model.reads),
        md=rels(model.modifies),
        sd=frozenset((r.info, r.destination) for r in model.sends if r.goal == goal),
    )


def block_io(model: GoalModel, block: BuildingBlock) -> tuple[set[str], set[str]]:
    """(produced, used) information of the leaves under ``block``."""
    produced, used = set(), set()
    for leaf in block.leaves():
        t = leaf_transition(model, leaf)
        produced |= t.pd
        used |= t.uses()
    return produced, used


def dependency_order(model: GoalModel, blocks: list[BuildingBlock]) -> list[BuildingBlock]:
    """Stable topological re-sort: each block after the blocks producing what it uses."""
    io = [block_io(model, b) for b in blocks]
    deps = {
        k: {j for j in range(len(blocks)) if j != k and (io[k][1] - io[k][0]) & io[j][0]}
        for k in range(len(blocks))
    }
    placed: list[int] = []
    remaining = list(range(len(blocks)))
    while remaining:
        ready = next((k for k in remaining if deps[k] <= set(placed)), None)
        if ready is None:
            raise MappingError("CyclicDataDependency",
                               "members depend on each other's information: "
                               + ", ".join(blocks[k].root for k in remaining),
                               [blocks[k].root for k in remaining])
        placed.append(ready)
        remaining.remove(ready)
    return [blocks[k] for k in placed]


def failing_verdicts(verdicts: Iterable[IqVerdict] | None) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for v in verdicts or ():
        if not v.satisfied:
            out.setdefault(v.goal, []).append(f"{v.dimension.value}({v.info})")
    return out


def map_to_net(
    model: GoalModel,
    blocks: list[BuildingBlock] | None = None,
    verdicts: Iterable[IqVerdict] | None = None,
) -> tuple[WfaNet, MappingTrace]:
    if blocks is None:
        blocks = identify_blocks(model)
    leaves = [leaf for b in blocks for leaf in b.leaves()]
    transitions = {transition_id(g): leaf_transition(model, g) for g in leaves}

    produced = {i for t in transitions.values() for i in t.pd}
    for g in leaves:
        missing = sorted(transitions[transition_id(g)].uses() - produced)
        if missing:
            raise MappingError("UnproducedInfo",
                               f"goal {g} uses {', '.join(missing)} but no mapped goal produces it",
                               [g, *missing])

    places = {"p_source", "p_sink"}
    arcs: set[tuple[str, str]] = set()

    def sequence(name: str, items: list[BuildingBlock], entry: str, exit_: str):
        ordered = dependency_order(model, items)
        points = [entry] + [f"p_{name}_{k}" for k in range(1, len(ordered))] + [exit_]
        places.update(points)
        for k, child in enumerate(ordered):
            emit(child, points[k], points[k + 1])

    def emit(block: BuildingBlock, entry: str, exit_: str):
        if block.kind is BlockKind.ATOMIC:
            tid = transition_id(block.root)
            arcs.update({(entry, tid), (tid, exit_)})
        elif block.kind is BlockKind.AND:
            sequence(block.root, list(block.children), entry, exit_)
        else:
            for child in block.children:
                emit(child, entry, exit_)

    if blocks:
        sequence("root", sorted(blocks, key=lambda b: b.root), "p_source", "p_sink")
        net = WfaNet(frozenset(places), transitions, frozenset(arcs), "p_source", "p_sink")
    else:
        net = WfaNet(frozenset({"p_source"}), {}, frozenset(), "p_source", "p_source")

    return net, _trace(model, blocks, verdicts)


def derive_trace(model: GoalModel, verdicts: Iterable[IqVerdict] | None = None) -> MappingTrace:
    """The trace the mapper would record, without building the net.

    Used to audit a hand-written net that comes without its trace file: goals
    are paired with transitions by the ``t_<goal>`` naming convention.
    """
    return _trace(model, identify_blocks(model), verdicts)


def _trace(model: GoalModel, blocks: list[BuildingBlock], verdicts) -> MappingTrace:
    leaves = sorted(leaf for b in blocks for leaf in b.leaves())
    fails = failing_verdicts(verdicts)
    return MappingTrace(
        model_digest(model),
        tuple((g, transition_id(g)) for g in leaves),
        tuple(blocks),
        {g: tuple(delegation_chain(model, g)) for g in leaves},
        {transition_id(g): tuple(fails[g]) for g in leaves if g in fails},
    )


def verify_mapping(model: GoalModel, net: WfaNet, trace: MappingTrace):
    """Re-check the mapping rules on a net, independently of how it was built.

    Covers the mapping properties M1-M5, WF-net structure (C1), alternation
    (C2) and dependency-respecting order (I4).
    """
    from .properties import check_mapping_rules

    return check_mapping_rules(model, net, trace)
