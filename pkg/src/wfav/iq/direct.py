"""Direct procedural IQ analysis.

Computes the same findings as the axiom program with plain graph walks.
It exists as an independent second implementation; the two must agree.
"""

from __future__ import annotations

from collections import defaultdict, deque

from ..model import GoalModel, Operation, Polarity, ProvisionKind, SubjectKind, resolve_responsibility
from .verdicts import Findings, IqVerdict, assemble


class ModelContext:
    """Per-model caches: responsibility, information flows and held permissions."""

    def __init__(self, model: GoalModel):
        self.m = model
        self.resp = {g: resolve_responsibility(model, g) for g in model.goals}
        self.producers: dict[str, set[str]] = defaultdict(set)
        for r in model.produces:
            self.producers[r.info].add(self.resp[r.goal])
        self._reach: dict[str, dict[str, set[tuple[str, bool]]]] = {}
        self._holds: dict[tuple[str, str], set[Operation]] = {}

    def ids(self, actor: str) -> frozenset[str]:
        return self.m.identities(actor)

    def flows(self, info: str) -> dict[str, set[tuple[str, bool]]]:
        """actor -> {(source producer, tainted)} for every actor the info reaches."""
        if info in self._reach:
            return self._reach[info]
        out: dict[str, set[tuple[str, bool]]] = defaultdict(set)
        queue = deque()
        for s in self.producers.get(info, ()):
            out[s].add((s, False))
            queue.append((s, s, False))
        edges = [p for p in self.m.provisions if p.info == info]
        while queue:
            src, at, tainted = queue.popleft()
            for p in edges:
                if p.source in self.ids(at):
                    state = (src, tainted or p.kind is ProvisionKind.P)
                    if state not in out[p.target]:
                        out[p.target].add(state)
                        queue.append((src, p.target, state[1]))
        self._reach[info] = out
        return out

    def is_local(self, actor: str, info: str) -> bool:
        return bool(self.ids(actor) & self.producers.get(info, set()))

    def arriving(self, actor: str, info: str) -> set[tuple[str, bool]]:
        flows = self.flows(info)
        return {st for y in self.ids(actor) for st in flows.get(y, ())}

    def sources(self, actor: str, info: str) -> set[str]:
        if self.is_local(actor, info):
            return self.ids(actor) & self.producers[info]
        return {s for s, _ in self.arriving(actor, info)}

    def holds(self, actor: str, info: str) -> set[Operation]:
        key = (actor, info)
        if key not in self._holds:
            self._holds_fixpoint(info)
        return self._holds.get(key, set())

    def _holds_fixpoint(self, info: str):
        owner = self.m.information[info].owner
        held: dict[str, set[Operation]] = defaultdict(set)
        for a in self.m.actors:
            if owner in self.ids(a):
                held[a] = set(Operation)
        grants = [g for g in self.m.permissions.values() if g.info == info]
        holders = {g.id: self._grant_holders(g.id) for g in grants}
        changed = True
        while changed:
            changed = False
            for g in grants:
                passed = g.ops & held[g.grantor]
                if not passed:
                    continue
                for a in self.m.actors:
                    if self.ids(a) & holders[g.id] and not passed <= held[a]:
                        held[a] |= passed
                        changed = True
        for a in self.m.actors:
            self._holds[(a, info)] = held[a]

    def _grant_holders(self, grant_id: str) -> set[str]:
        holders = {self.m.permissions[grant_id].grantee}
        frontier = list(holders)
        while frontier:
            cur = frontier.pop()
            for d in self.m.delegations:
                if d.subject_kind is SubjectKind.PERMISSION and d.subject == grant_id and d.delegator == cur:
                    if d.delegatee not in holders:
                        holders.add(d.delegatee)
                        frontier.append(d.delegatee)
        return holders

    def trust_edge(self, trustor: str, trustee: str, info: str, polarity: Polarity) -> bool:
        xs, ys = self.ids(trustor), self.ids(trustee)
        return any(
            t.polarity is polarity and t.scope_kind is SubjectKind.INFO and t.scope == info
            and t.trustor in xs and t.trustee in ys
            for t in self.m.trusts
        )

    def trusts(self, trustor: str, trustee: str, info: str) -> bool:
        return (self.trust_edge(trustor, trustee, info, Polarity.TRUST)
                and not self.trust_edge(trustor, trustee, info, Polarity.DISTRUST))


def findings(model: GoalModel) -> Findings:
    cx = ModelContext(model)
    f = Findings()
    resp = cx.resp

    def need(goal, info, op, requires_availability=True):
        actor = resp[goal]
        if op not in cx.holds(actor, info):
            f.missing_permission.add((goal, info, op.value.lower()))
        if requires_availability and not cx.arriving(actor, info):
            f.unavailable.add((goal, info))

    for r in model.produces:
        need(r.goal, r.info, Operation.PRODUCE, requires_availability=False)
        if not r.check:
            f.unbelievable.add((r.goal, r.info))
        producer, owner = resp[r.goal], model.information[r.info].owner
        if owner not in cx.ids(producer) and not cx.trusts(owner, producer, r.info):
            f.untrusted_sources[(r.goal, r.info)].add(producer)
        if Operation.PRODUCE not in cx.holds(producer, r.info):
            f.unauthorized[r.info].add(producer)
    for r in model.modifies:
        need(r.goal, r.info, Operation.MODIFY)
        if Operation.MODIFY not in cx.holds(resp[r.goal], r.info):
            f.unauthorized[r.info].add(resp[r.goal])
    for r in model.sends:
        need(r.goal, r.info, Operation.SEND)
        if Operation.SEND not in cx.holds(resp[r.goal], r.info):
            f.unauthorized[r.info].add(resp[r.goal])
    for p in model.provisions:
        if Operation.SEND not in cx.holds(p.source, p.info):
            f.unauthorized[p.info].add(p.source)

    produce_goals = defaultdict(list)
    for r in model.produces:
        produce_goals[r.info].append(r)

    for r in model.reads:
        key = (r.goal, r.info)
        actor = resp[r.goal]
        need(r.goal, r.info, Operation.READ)
        if not r.check:
            f.unbelievable.add(key)
        local = cx.is_local(actor, r.info)
        srcs = cx.sources(actor, r.info)
        if not local:
            bad = {s for s in srcs if not cx.trusts(actor, s, r.info)}
            if bad:
                f.untrusted_sources[key] |= bad
            if any(tainted for _, tainted in cx.arriving(actor, r.info)):
                f.value_incomplete.add(key)
        for part in r.parts:
            if not cx.arriving(actor, part):
                f.missing_parts[key].add(part)
        # timeliness against every production by a source actor
        vol = model.information[r.info].volatility
        candidates = [p for p in produce_goals[r.info] if resp[p.goal] in srcs]
        if candidates:
            if not any(p.at <= r.at < p.at + vol for p in candidates):
                f.stale.add(key)
            if not any(p.at <= r.at for p in candidates):
                f.timestamp_problems.append(f"{r.goal} reads {r.info} before any observable production")

    for s in model.sends:
        for r in model.reads:
            if r.info == s.info and s.destination in cx.ids(resp[r.goal]):
                if r.at >= s.at + s.timeliness:
                    f.late_readers[(s.goal, s.info)].add(r.goal)
                if r.at < s.at:
                    f.timestamp_problems.append(f"{r.goal} reads {r.info} before {s.goal} sends it")

    groups = defaultdict(list)
    for r in model.reads:
        groups[(r.info, r.purpose.strip())].append(r)
    for members in groups.values():
        if len({resp[r.goal] for r in members}) >= 2 and len({r.at for r in members}) > 1:
            f.inconsistent |= {(r.goal, r.info) for r in members}
    return f


def analyze_all(model: GoalModel) -> list[IqVerdict]:
    return assemble(model, findings(model))
