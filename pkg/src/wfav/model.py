"""Goal-model domain types and structural validation.

A :class:`GoalModel` captures actors, goals, their and/or refinements, the
information items goals use, and the social relations (provision,
delegation, permission, trust) that the IQ analysis reasons about.

Models are plain frozen dataclasses. Id-keyed collections are dicts,
relation collections are frozensets, so two models compare equal when they
contain the same elements regardless of declaration order. The only
ordering that matters is the child order of a decomposition.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable


class ActorKind(enum.Enum):
    AGENT = "agent"
    ROLE = "role"


class DecompositionKind(enum.Enum):
    AND = "and"
    OR = "or"


class ReadType(enum.Enum):
    OPTIONAL = "O"
    REQUIRED = "R"


class ProvisionKind(enum.Enum):
    P = "P"
    IP = "IP"


class Operation(enum.Enum):
    PRODUCE = "P"
    READ = "R"
    MODIFY = "M"
    SEND = "S"


class Polarity(enum.Enum):
    TRUST = "trust"
    DISTRUST = "distrust"


class SubjectKind(enum.Enum):
    """What a delegation or trust relation is about."""

    GOAL = "goal"
    PERMISSION = "perm"
    INFO = "info"


@dataclass(frozen=True)
class Actor:
    id: str
    kind: ActorKind
    plays: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Goal:
    id: str
    label: str
    actor: str
    atomic_no_info: bool = False
    # excluded from mapping; makes the enclosing building block partial
    nomap: bool = False


@dataclass(frozen=True)
class Decomposition:
    parent: str
    kind: DecompositionKind
    children: tuple[str, ...]


@dataclass(frozen=True)
class Information:
    id: str
    owner: str
    volatility: int
    parts: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ProduceRel:
    goal: str
    info: str
    check: bool
    at: int


@dataclass(frozen=True)
class ReadRel:
    goal: str
    info: str
    read_type: ReadType
    check: bool
    purpose: str
    at: int
    parts: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ModifyRel:
    goal: str
    info: str
    at: int | None = None


@dataclass(frozen=True)
class SendRel:
    goal: str
    info: str
    destination: str
    timeliness: int
    at: int


@dataclass(frozen=True)
class Provision:
    source: str
    target: str
    info: str
    kind: ProvisionKind
    time: int


@dataclass(frozen=True)
class Delegation:
    delegator: str
    delegatee: str
    subject_kind: SubjectKind  # GOAL or PERMISSION
    subject: str


@dataclass(frozen=True)
class PermissionGrant:
    id: str
    grantor: str
    grantee: str
    info: str
    ops: frozenset[Operation]


@dataclass(frozen=True)
class TrustRel:
    trustor: str
    trustee: str
    polarity: Polarity
    scope_kind: SubjectKind
    scope: str


@dataclass(frozen=True)
class GoalModel:
    actors: dict[str, Actor] = field(default_factory=dict)
    goals: dict[str, Goal] = field(default_factory=dict)
    decompositions: dict[str, Decomposition] = field(default_factory=dict)
    information: dict[str, Information] = field(default_factory=dict)
    produces: frozenset[ProduceRel] = frozenset()
    reads: frozenset[ReadRel] = frozenset()
    modifies: frozenset[ModifyRel] = frozenset()
    sends: frozenset[SendRel] = frozenset()
    provisions: frozenset[Provision] = frozenset()
    delegations: frozenset[Delegation] = frozenset()
    permissions: dict[str, PermissionGrant] = field(default_factory=dict)
    trusts: frozenset[TrustRel] = frozenset()

    def __hash__(self) -> int:
        return hash((frozenset(self.goals), self.produces, self.reads))

    def relations_of(self, goal: str) -> list:
        return [
            r
            for coll in (self.produces, self.reads, self.modifies, self.sends)
            for r in coll
            if r.goal == goal
        ]

    def identities(self, actor: str) -> frozenset[str]:
        """The actor itself plus every role it plays."""
        a = self.actors.get(actor)
        if a is None:
            return frozenset((actor,))
        return frozenset((actor,)) | a.plays

    def roots(self) -> list[str]:
        children = {c for d in self.decompositions.values() for c in d.children}
        return sorted(g for g in self.goals if g not in children)


class DelegationCycle(Exception):
    def __init__(self, goal: str, chain: list[str]):
        self.goal = goal
        self.chain = chain
        super().__init__(f"delegation cycle for goal {goal}: {' -> '.join(chain)}")


@dataclass(frozen=True)
class StructuralError:
    code: str
    message: str
    elements: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def leaf_goals(model: GoalModel) -> set[str]:
    return {g for g in model.goals if g not in model.decompositions}


def _goal_delegations(model: GoalModel) -> dict[tuple[str, str], list[str]]:
    out: dict[tuple[str, str], list[str]] = defaultdict(list)
    for d in model.delegations:
        if d.subject_kind is SubjectKind.GOAL:
            out[(d.subject, d.delegator)].append(d.delegatee)
    return out


def delegation_chain(model: GoalModel, goal: str) -> list[str]:
    """Actors along the goal-delegation chain, starting at the goal's owner."""
    if goal not in model.goals:
        raise KeyError(goal)
    outgoing = _goal_delegations(model)
    actor = model.goals[goal].actor
    chain = [actor]
    while (goal, actor) in outgoing:
        actor = sorted(outgoing[(goal, actor)])[0]
        if actor in chain:
            raise DelegationCycle(goal, chain + [actor])
        chain.append(actor)
    return chain


def resolve_responsibility(model: GoalModel, goal: str) -> str:
    return delegation_chain(model, goal)[-1]


def part_closure(model: GoalModel, info: str) -> set[str]:
    """Descendants-or-self of ``info`` under part-of."""
    seen = {info}
    stack = [info]
    while stack:
        cur = model.information.get(stack.pop())
        if cur is None:
            continue
        for p in cur.parts:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def _find_cycle(edges: dict[str, Iterable[str]]) -> list[str] | None:
    """Return the nodes of some cycle in a directed graph, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[str, int] = defaultdict(int)
    for start in sorted(edges):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(sorted(edges.get(start, ()))))]
        path = [start]
        color[start] = GREY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = BLACK
                stack.pop()
                path.pop()
            elif color[nxt] == GREY:
                return path[path.index(nxt):]
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append((nxt, iter(sorted(edges.get(nxt, ())))))
    return None


def permission_holders(model: GoalModel, grant_id: str) -> set[str]:
    """Grantee plus everyone the grant was (transitively) delegated to."""
    g = model.permissions[grant_id]
    holders = {g.grantee}
    changed = True
    while changed:
        changed = False
        for d in model.delegations:
            if (
                d.subject_kind is SubjectKind.PERMISSION
                and d.subject == grant_id
                and d.delegator in holders
                and d.delegatee not in holders
            ):
                holders.add(d.delegatee)
                changed = True
    return holders


def validate_model(model: GoalModel) -> list[StructuralError]:
    errors: list[StructuralError] = []

    def err(code: str, message: str, *elements: str) -> None:
        errors.append(StructuralError(code, message, tuple(elements)))

    actors, goals, info = model.actors, model.goals, model.information

    namespaces = [("actor", actors), ("goal", goals), ("info", info), ("permission", model.permissions)]
    seen_ids: dict[str, str] = {}
    for kind, coll in namespaces:
        for ident in sorted(coll):
            if ident in seen_ids:
                err("duplicate-id", f"id {ident} used for both {seen_ids[ident]} and {kind}", ident)
            else:
                seen_ids[ident] = kind

    for a in sorted(actors.values(), key=lambda a: a.id):
        if a.plays and a.kind is not ActorKind.AGENT:
            err("role-plays", f"only agents may play roles ({a.id})", a.id)
        for r in sorted(a.plays):
            if r not in actors or actors[r].kind is not ActorKind.ROLE:
                err("plays-not-role", f"{a.id} plays {r}, which is not a role", a.id, r)

    for g in sorted(goals.values(), key=lambda g: g.id):
        if g.actor not in actors:
            err("dangling-reference", f"goal {g.id} belongs to unknown actor {g.actor}", g.id, g.actor)

    child_of: dict[str, str] = {}
    for d in sorted(model.decompositions.values(), key=lambda d: d.parent):
        if d.parent not in goals:
            err("dangling-reference", f"decomposition of unknown goal {d.parent}", d.parent)
        if len(d.children) < 2:
            err("decomposition-arity", f"decomposition arity < 2 for {d.parent}", d.parent, *d.children)
        if len(set(d.children)) != len(d.children):
            err("decomposition-duplicate", f"repeated child in decomposition of {d.parent}", d.parent)
        for c in d.children:
            if c not in goals:
                err("dangling-reference", f"decomposition of {d.parent} names unknown goal {c}", d.parent, c)
            if c in child_of and child_of[c] != d.parent:
                err("multiple-parents", f"goal {c} refines both {child_of[c]} and {d.parent}", c)
            child_of.setdefault(c, d.parent)
    cyc = _find_cycle({p: d.children for p, d in model.decompositions.items()})
    if cyc:
        err("decomposition-cycle", "decomposition cycle {" + ",".join(sorted(cyc)) + "}", *sorted(cyc))

    for i in sorted(info.values(), key=lambda i: i.id):
        if i.owner not in actors:
            err("dangling-reference", f"info {i.id} owned by unknown actor {i.owner}", i.id, i.owner)
        if i.volatility < 0:
            err("negative-volatility", f"info {i.id} has negative volatility", i.id)
        for p in sorted(i.parts):
            if p not in info:
                err("dangling-reference", f"info {i.id} has unknown part {p}", i.id, p)
    cyc = _find_cycle({i.id: i.parts for i in info.values()})
    if cyc:
        err("part-of-cycle", "part-of cycle {" + ",".join(sorted(cyc)) + "}", *sorted(cyc))

    def check_goal_info(kind: str, goal: str, inf: str) -> None:
        if goal not in goals:
            err("dangling-reference", f"{kind} names unknown goal {goal}", goal)
        if inf not in info:
            err("dangling-reference", f"{kind} names unknown info {inf}", inf)

    leaves = leaf_goals(model)
    pairs: dict[str, set[tuple[str, str]]] = defaultdict(set)
    for kind, coll in (("produce", model.produces), ("read", model.reads),
                       ("modify", model.modifies), ("send", model.sends)):
        for r in sorted(coll, key=repr):
            check_goal_info(kind, r.goal, r.info)
            if r.goal in goals and r.goal not in leaves:
                err("relation-on-decomposed-goal",
                    f"{kind} relation on decomposed goal {r.goal}", r.goal, r.info)
            if kind in ("produce", "read"):
                if (r.goal, r.info) in pairs[kind]:
                    err(f"duplicate-{kind}", f"more than one {kind} of {r.info} by {r.goal}", r.goal, r.info)
                pairs[kind].add((r.goal, r.info))
    for g, i in sorted(pairs["produce"] & pairs["read"]):
        err("produce-and-read", f"goal {g} both produces and reads {i}", g, i)

    for r in sorted(model.produces, key=repr):
        if r.at < 0:
            err("negative-tick", f"produce of {r.info} by {r.goal} at negative tick", r.goal)
    for r in sorted(model.reads, key=repr):
        if r.at < 0:
            err("negative-tick", f"read of {r.info} by {r.goal} at negative tick", r.goal)
        if r.info in info:
            allowed = part_closure(model, r.info)
            extra = sorted(r.parts - allowed)
            if extra:
                err("read-parts", f"required parts {extra} are not parts of {r.info}", r.goal, *extra)
    for s in sorted(model.sends, key=repr):
        if s.destination not in actors:
            err("dangling-reference", f"send to unknown actor {s.destination}", s.goal, s.destination)
        if s.timeliness <= 0:
            err("send-timeliness", f"send timeliness must be positive ({s.goal})", s.goal)
        if s.at < 0:
            err("negative-tick", f"send of {s.info} by {s.goal} at negative tick", s.goal)

    for p in sorted(model.provisions, key=repr):
        for a in (p.source, p.target):
            if a not in actors:
                err("dangling-reference", f"provision names unknown actor {a}", a)
        if p.info not in info:
            err("dangling-reference", f"provision of unknown info {p.info}", p.info)
        if p.source == p.target:
            err("provision-self", f"provision from {p.source} to itself", p.source)
        if p.time <= 0:
            err("provision-time", f"provision {p.source}->{p.target} needs positive time", p.source, p.target)

    for g in sorted(goals.values(), key=lambda g: g.id):
        if g.id not in leaves:
            continue
        rels = model.relations_of(g.id)
        if not rels and not g.atomic_no_info:
            err("leaf-without-info", f"leaf goal {g.id} has no information relation", g.id)
        if rels and g.atomic_no_info:
            err("atomic-no-info-with-info", f"goal {g.id} is atomic-no-info but uses information", g.id)

    # delegations
    by_subject: dict[tuple[SubjectKind, str], dict[str, list[str]]] = defaultdict(lambda: defaultdict(list))
    for d in sorted(model.delegations, key=repr):
        for a in (d.delegator, d.delegatee):
            if a not in actors:
                err("dangling-reference", f"delegation names unknown actor {a}", a)
        if d.subject_kind is SubjectKind.GOAL and d.subject not in goals:
            err("dangling-reference", f"delegation of unknown goal {d.subject}", d.subject)
        if d.subject_kind is SubjectKind.PERMISSION and d.subject not in model.permissions:
            err("dangling-reference", f"delegation of unknown permission {d.subject}", d.subject)
        if d.subject_kind is SubjectKind.INFO:
            err("delegation-subject", "delegations apply to goals or permissions only", d.subject)
        if d.delegator == d.delegatee:
            err("delegation-cycle", f"{d.delegator} delegates {d.subject} to itself", d.delegator, d.subject)
        by_subject[(d.subject_kind, d.subject)][d.delegator].append(d.delegatee)
    for (kind, subject), edges in sorted(by_subject.items(), key=lambda kv: (kv[0][0].value, kv[0][1])):
        cyc = _find_cycle(edges)
        if cyc:
            err("delegation-cycle", f"delegation cycle on {subject}: {{" + ",".join(sorted(cyc)) + "}",
                subject, *sorted(cyc))
        if kind is SubjectKind.GOAL and subject in goals and not cyc:
            for delegator, targets in sorted(edges.items()):
                if len(targets) > 1:
                    err("delegation-branch", f"{delegator} delegates {subject} to several actors", subject, delegator)
            chain = set(delegation_chain(model, subject))
            for delegator in sorted(edges):
                if delegator not in chain:
                    err("delegation-unrooted",
                        f"{delegator} delegates {subject} without holding it", subject, delegator)
        if kind is SubjectKind.PERMISSION and subject in model.permissions and not cyc:
            holders = permission_holders(model, subject)
            for delegator in sorted(edges):
                if delegator not in holders:
                    err("delegation-unrooted",
                        f"{delegator} delegates {subject} without holding it", subject, delegator)

    # permission grants: each chain must be rooted at the information owner
    for g in sorted(model.permissions.values(), key=lambda g: g.id):
        for a in (g.grantor, g.grantee):
            if a not in actors:
                err("dangling-reference", f"permission {g.id} names unknown actor {a}", g.id, a)
        if g.info not in info:
            err("dangling-reference", f"permission {g.id} on unknown info {g.info}", g.id, g.info)
        if not g.ops:
            err("permission-ops", f"permission {g.id} grants no operation", g.id)
    rooted: set[str] = set()
    changed = True
    while changed:
        changed = False
        for g in model.permissions.values():
            if g.id in rooted or g.info not in info:
                continue
            if g.grantor == info[g.info].owner or any(
                o.info == g.info and g.grantor in permission_holders(model, o.id)
                for o in model.permissions.values()
                if o.id in rooted
            ):
                rooted.add(g.id)
                changed = True
    for gid in sorted(set(model.permissions) - rooted):
        g = model.permissions[gid]
        if g.info in info:
            err("permission-unrooted", f"permission {gid} is not rooted at the owner of {g.info}", gid, g.grantor)

    # trust
    polarity_seen: dict[tuple, set[Polarity]] = defaultdict(set)
    for t in sorted(model.trusts, key=repr):
        for a in (t.trustor, t.trustee):
            if a not in actors:
                err("dangling-reference", f"trust names unknown actor {a}", a)
        scope_coll = {SubjectKind.GOAL: goals, SubjectKind.PERMISSION: model.permissions,
                      SubjectKind.INFO: info}[t.scope_kind]
        if t.scope not in scope_coll:
            err("dangling-reference", f"trust scope {t.scope_kind.value}={t.scope} is unknown", t.scope)
        polarity_seen[(t.trustor, t.trustee, t.scope_kind, t.scope)].add(t.polarity)
    for key, pols in sorted(polarity_seen.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].value, kv[0][3])):
        if len(pols) > 1:
            err("trust-conflict", f"{key[0]} both trusts and distrusts {key[1]} on {key[3]}", key[0], key[1], key[3])

    return errors
