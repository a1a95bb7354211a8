"""Translate a goal model into ground Datalog facts.

Vocabulary (constants are lower-case letters for enum values)::

    actor(A, agent|role)         plays(A, R)
    goal(G, Owner)               decomp(G, and|or)       subgoal(G, Child, Index)
    info(I, Owner)               volatility(I, V)        partof(Part, Whole)
    produces(G, I, b|nb, At)
    reads(G, I, r|o, b|nb, Purpose, At)                  requires_part(G, I, Part)
    modifies(G, I)               sends(G, I, Dest, Timeliness, At)
    provides(Src, Dst, I, p|ip, Time)
    delegates_goal(A, B, G)      delegates_perm(A, B, P)
    permitted(P, Grantor, Grantee, I)                    grant_op(P, p|r|m|s)
    trusts(A, B, goal|perm|info, Scope)                  distrusts(A, B, Kind, Scope)
    valid_until(G, I, ProducedAt + Volatility)
    send_deadline(G, I, Dest, SentAt + Timeliness)

The last two carry the only arithmetic the axioms need, since the rule
language has comparisons but no addition.
"""

from __future__ import annotations

from ..datalog import Atom, atom
from ..model import GoalModel, Polarity, SubjectKind


def _flag(b: bool) -> str:
    return "b" if b else "nb"


def extract_facts(model: GoalModel) -> set[Atom]:
    facts: set[Atom] = set()
    add = facts.add
    for a in model.actors.values():
        add(atom("actor", a.id, a.kind.value))
        for r in a.plays:
            add(atom("plays", a.id, r))
    for g in model.goals.values():
        add(atom("goal", g.id, g.actor))
    for d in model.decompositions.values():
        add(atom("decomp", d.parent, d.kind.value))
        for k, c in enumerate(d.children):
            add(atom("subgoal", d.parent, c, k))
    for i in model.information.values():
        add(atom("info", i.id, i.owner))
        add(atom("volatility", i.id, i.volatility))
        for p in i.parts:
            add(atom("partof", p, i.id))
    for r in model.produces:
        add(atom("produces", r.goal, r.info, _flag(r.check), r.at))
        add(atom("valid_until", r.goal, r.info, r.at + model.information[r.info].volatility))
    for r in model.reads:
        add(atom("reads", r.goal, r.info, r.read_type.value.lower(), _flag(r.check), r.purpose.strip(), r.at))
        for p in r.parts:
            add(atom("requires_part", r.goal, r.info, p))
    for r in model.modifies:
        add(atom("modifies", r.goal, r.info))
    for r in model.sends:
        add(atom("sends", r.goal, r.info, r.destination, r.timeliness, r.at))
        add(atom("send_deadline", r.goal, r.info, r.destination, r.at + r.timeliness))
    for p in model.provisions:
        add(atom("provides", p.source, p.target, p.info, p.kind.value.lower(), p.time))
    for d in model.delegations:
        pred = "delegates_goal" if d.subject_kind is SubjectKind.GOAL else "delegates_perm"
        add(atom(pred, d.delegator, d.delegatee, d.subject))
    for g in model.permissions.values():
        add(atom("permitted", g.id, g.grantor, g.grantee, g.info))
        for op in g.ops:
            add(atom("grant_op", g.id, op.value.lower()))
    for t in model.trusts:
        pred = "trusts" if t.polarity is Polarity.TRUST else "distrusts"
        add(atom(pred, t.trustor, t.trustee, t.scope_kind.value, t.scope))
    return facts
