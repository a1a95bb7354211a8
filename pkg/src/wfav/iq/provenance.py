"""Static provenance chains: the operations applied to an item, ordered by tick."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from ..model import GoalModel, resolve_responsibility

_RANK = {"produce": 0, "modify": 1, "send": 2, "provide": 3}


@dataclass(frozen=True)
class ProvenanceEvent:
    actor: str
    operation: str  # produce, modify, send, provide:P, provide:IP
    tick: int

    def __str__(self) -> str:
        return f"{self.tick}:{self.actor}:{self.operation}"


@dataclass(frozen=True)
class ProvenanceChain:
    info: str
    events: tuple[ProvenanceEvent, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)


def acquisition_ticks(model: GoalModel, info: str) -> dict[str, int]:
    """Earliest tick at which each actor holds ``info`` (production, then provisions)."""
    best: dict[str, int] = {}
    heap = []
    for r in model.produces:
        if r.info == info:
            heapq.heappush(heap, (r.at, resolve_responsibility(model, r.goal)))
    edges = [p for p in model.provisions if p.info == info]
    while heap:
        tick, actor = heapq.heappop(heap)
        if actor in best:
            continue
        best[actor] = tick
        for p in edges:
            if p.source in model.identities(actor) and p.target not in best:
                heapq.heappush(heap, (tick + p.time, p.target))
    return best


def provenance_chain(model: GoalModel, info: str) -> ProvenanceChain:
    """Order the produce/modify/send/provide relations on ``info`` by tick.

    Provisions start when the provider first holds the item; a modify without
    a declared tick is placed when the modifier first holds it. Operations that
    can never happen (the actor never holds the item) are left out with a
    warning, as are ties, which are broken by (actor, operation).
    """
    holds = acquisition_ticks(model, info)
    warnings = []

    def held_at(actor: str) -> int | None:
        ticks = [holds[y] for y in model.identities(actor) if y in holds]
        return min(ticks) if ticks else None

    events = []
    for r in model.produces:
        if r.info == info:
            events.append(ProvenanceEvent(resolve_responsibility(model, r.goal), "produce", r.at))
    for r in model.modifies:
        if r.info == info:
            actor = resolve_responsibility(model, r.goal)
            tick = r.at if r.at is not None else held_at(actor)
            if tick is None:
                warnings.append(f"{actor} modifies {info} but never holds it")
            else:
                events.append(ProvenanceEvent(actor, "modify", tick))
    for r in model.sends:
        if r.info == info:
            events.append(ProvenanceEvent(resolve_responsibility(model, r.goal), "send", r.at))
    for p in model.provisions:
        if p.info == info:
            tick = held_at(p.source)
            if tick is None:
                warnings.append(f"{p.source} provides {info} but never holds it")
            else:
                events.append(ProvenanceEvent(p.source, f"provide:{p.kind.value}", tick))

    events.sort(key=lambda e: (e.tick, _RANK[e.operation.split(":")[0]], e.actor, e.operation))
    first_produce = next((k for k, e in enumerate(events) if e.operation == "produce"), None)
    if first_produce:
        warnings.extend(f"{e} precedes the first production" for e in events[:first_produce])
        events = events[first_produce:]
    elif first_produce is None and events:
        warnings.append(f"{info} is never produced")
        events = []
    for a, b in zip(events, events[1:]):
        if a.tick == b.tick:
            warnings.append(f"tie at tick {a.tick} between {a} and {b}")
    return ProvenanceChain(info, tuple(events), tuple(warnings))
