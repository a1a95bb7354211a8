"""Verdict types shared by the rule-based and the direct IQ analyzers.

Both analyzers reduce a model to a :class:`Findings` record (what fails, and
who is to blame); :func:`assemble` turns findings into one verdict per
applicable (goal, info, dimension) triple.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field

from ..model import GoalModel, ReadType, resolve_responsibility


class Dimension(enum.Enum):
    ACCESSIBILITY = "Accessibility"
    ACCURACY = "Accuracy"
    BELIEVABILITY = "Believability"
    TRUSTWORTHINESS = "Trustworthiness"
    COMPLETENESS = "Completeness"
    TIMELINESS = "Timeliness"
    CONSISTENCY = "Consistency"


DIMENSION_ORDER = {d: k for k, d in enumerate(Dimension)}

APPLICABLE = {
    "produce": (Dimension.ACCESSIBILITY, Dimension.ACCURACY, Dimension.BELIEVABILITY, Dimension.TRUSTWORTHINESS),
    "read": tuple(Dimension),
    "modify": (Dimension.ACCESSIBILITY,),
    "send": (Dimension.ACCESSIBILITY, Dimension.TIMELINESS),
}


class InconsistentTimestamps(Exception):
    """A read happens before every production it could observe, or a
    destination reads a sent item before it was sent."""

    def __init__(self, problems: list[str]):
        self.problems = sorted(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class IqVerdict:
    goal: str
    info: str
    dimension: Dimension
    satisfied: bool
    witness: tuple[str, ...] = ()
    # sub-verdicts, e.g. ("source", True), ("provision", False)
    facets: tuple[tuple[str, bool], ...] = ()

    def facet(self, name: str) -> bool | None:
        return dict(self.facets).get(name)

    def sort_key(self):
        return (self.goal, self.info, DIMENSION_ORDER[self.dimension])

    def to_dict(self) -> dict:
        return {
            "goal": self.goal,
            "info": self.info,
            "dimension": self.dimension.value,
            "satisfied": self.satisfied,
            "witness": list(self.witness),
            "facets": {k: v for k, v in self.facets},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IqVerdict":
        return cls(d["goal"], d["info"], Dimension(d["dimension"]), d["satisfied"],
                   tuple(d["witness"]), tuple(d["facets"].items()))

    def __str__(self) -> str:
        mark = "ok  " if self.satisfied else "FAIL"
        extra = f" [{', '.join(self.witness)}]" if self.witness else ""
        return f"{mark} {self.goal} {self.info} {self.dimension.value}{extra}"


@dataclass
class Findings:
    """Raw failure facts; every collection is keyed by (goal, info)."""

    unavailable: set = field(default_factory=set)
    missing_permission: set = field(default_factory=set)  # (goal, info, op letter)
    unbelievable: set = field(default_factory=set)
    untrusted_sources: dict = field(default_factory=lambda: defaultdict(set))  # reads and produces
    unauthorized: dict = field(default_factory=lambda: defaultdict(set))  # info -> actors
    value_incomplete: set = field(default_factory=set)
    missing_parts: dict = field(default_factory=lambda: defaultdict(set))
    stale: set = field(default_factory=set)
    late_readers: dict = field(default_factory=lambda: defaultdict(set))
    inconsistent: set = field(default_factory=set)
    timestamp_problems: list = field(default_factory=list)


def usages(model: GoalModel) -> dict[tuple[str, str], set[str]]:
    out: dict[tuple[str, str], set[str]] = defaultdict(set)
    for kind, coll in (("produce", model.produces), ("read", model.reads),
                       ("modify", model.modifies), ("send", model.sends)):
        for r in coll:
            out[(r.goal, r.info)].add(kind)
    return out


def reader_groups(model: GoalModel) -> dict[tuple[str, str], list[str]]:
    groups: dict[tuple[str, str], list[str]] = defaultdict(list)
    for r in model.reads:
        groups[(r.info, r.purpose.strip())].append(r.goal)
    return {k: sorted(v) for k, v in groups.items()}


def assemble(model: GoalModel, f: Findings) -> list[IqVerdict]:
    if f.timestamp_problems:
        raise InconsistentTimestamps(f.timestamp_problems)
    reads = {(r.goal, r.info): r for r in model.reads}
    groups = reader_groups(model)
    out = []
    for (g, i), kinds in usages(model).items():
        key = (g, i)
        resp = resolve_responsibility(model, g)
        dims = {d for k in kinds for d in APPLICABLE[k]}
        is_read = "read" in kinds
        bel = key not in f.unbelievable
        src = key not in f.untrusted_sources
        prov = not (is_read and f.unauthorized.get(i))
        blamed = set(f.untrusted_sources.get(key, ())) | (set(f.unauthorized.get(i, ())) if is_read else set())
        for d in sorted(dims, key=DIMENSION_ORDER.get):
            facets: tuple = ()
            if d is Dimension.ACCESSIBILITY:
                avail = key not in f.unavailable
                perm = not any((g, i, op) in f.missing_permission for op in "prms")
                ok, witness, facets = avail and perm, (resp,), (("available", avail), ("permission", perm))
            elif d is Dimension.BELIEVABILITY:
                ok, witness = bel, (g,)
            elif d is Dimension.TRUSTWORTHINESS:
                ok = src and prov
                witness = tuple(sorted(blamed))
                facets = (("source", src), ("provision", prov)) if is_read else (("source", src),)
            elif d is Dimension.ACCURACY:
                ok = bel and src and prov
                witness = tuple(sorted(blamed | ({g} if not bel else set())))
                facets = (("believable", bel), ("source", src)) + ((("provision", prov),) if is_read else ())
            elif d is Dimension.COMPLETENESS:
                value = key not in f.value_incomplete
                parts = f.missing_parts.get(key, set())
                ok = value and not parts
                witness = tuple(sorted(parts | ({resp} if not value else set())))
                facets = (("value", value), ("purpose", not parts))
            elif d is Dimension.TIMELINESS:
                read_ok = key not in f.stale
                late = f.late_readers.get(key, set())
                ok = read_ok and not late
                witness = tuple(sorted(late | ({g} if not read_ok else set())))
                facets = ((("read", read_ok),) if is_read else ()) + ((("send", not late),) if "send" in kinds else ())
            else:
                ok = key not in f.inconsistent
                r = reads[key]
                witness = tuple(groups[(i, r.purpose.strip())]) if not ok else ()
            out.append(IqVerdict(g, i, d, ok, witness, facets))
    out.sort(key=IqVerdict.sort_key)
    return out


def is_required_read(model: GoalModel, goal: str, info: str) -> bool:
    return any(r.goal == goal and r.info == info and r.read_type is ReadType.REQUIRED for r in model.reads)
