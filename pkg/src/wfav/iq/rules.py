"""Rule-based IQ analysis: extract facts, run the axiom program, read back failures."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..datalog import Interpretation, Program, evaluate, parse_program
from ..model import GoalModel
from .facts import extract_facts
from .verdicts import Dimension, Findings, IqVerdict, assemble


@lru_cache(maxsize=1)
def axiom_program() -> Program:
    text = resources.files(__package__).joinpath("axioms.dl").read_text(encoding="utf-8")
    return parse_program(text)


def axiom_text() -> str:
    return resources.files(__package__).joinpath("axioms.dl").read_text(encoding="utf-8")


def evaluate_model(model: GoalModel, method: str = "seminaive") -> Interpretation:
    return evaluate(axiom_program().with_facts(extract_facts(model)), method=method)


def findings_from(interp: Interpretation) -> Findings:
    f = Findings()
    f.unavailable = interp.tuples("acc_unavailable")
    f.missing_permission = interp.tuples("acc_noperm")
    f.unbelievable = interp.tuples("unbelievable")
    for g, i, s in interp.tuples("source_untrusted"):
        f.untrusted_sources[(g, i)].add(s)
    for i, a in interp.tuples("unauthorized"):
        f.unauthorized[i].add(a)
    f.value_incomplete = interp.tuples("value_incomplete")
    for g, i, p in interp.tuples("purpose_missing"):
        f.missing_parts[(g, i)].add(p)
    f.stale = interp.tuples("read_stale")
    for g, i, rg in interp.tuples("send_late"):
        f.late_readers[(g, i)].add(rg)
    f.inconsistent = interp.tuples("inconsistent")
    f.timestamp_problems = (
        [f"{g} reads {i} before any observable production" for g, i in interp.tuples("ts_read_early")]
        + [f"{rg} reads {i} before {g} sends it" for g, i, rg in interp.tuples("ts_send_early")]
    )
    return f


def analyze_all(model: GoalModel, method: str = "seminaive") -> list[IqVerdict]:
    """All verdicts, ordered by (goal, info, dimension)."""
    return assemble(model, findings_from(evaluate_model(model, method)))


def _only(dim: Dimension):
    def check(model: GoalModel) -> list[IqVerdict]:
        return [v for v in analyze_all(model) if v.dimension is dim]

    check.__name__ = f"check_{dim.value.lower()}"
    check.__doc__ = f"{dim.value} verdicts of :func:`analyze_all`."
    return check


check_accessibility = _only(Dimension.ACCESSIBILITY)
check_accuracy = _only(Dimension.ACCURACY)
check_believability = _only(Dimension.BELIEVABILITY)
check_trustworthiness = _only(Dimension.TRUSTWORTHINESS)
check_completeness = _only(Dimension.COMPLETENESS)
check_timeliness = _only(Dimension.TIMELINESS)
check_consistency = _only(Dimension.CONSISTENCY)
