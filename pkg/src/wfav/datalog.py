"""Stratified Datalog with negation.

Programs are sets of rules plus ground facts (the EDB). Evaluation is
bottom-up, one stratum at a time, using semi-naive deltas and hash indexes
on bound argument positions. Constants are strings or ints; there are no
function symbols. Three comparison built-ins are available in rule bodies:
``lt``, ``le`` and ``eq``, each usable negated.

Textual syntax (used for the bundled axioms)::

    tc(X, Y) :- e(X, Y).
    tc(X, Z) :- tc(X, Y), e(Y, Z).
    lonely(X) :- node(X), not e(X, _), lt(X, 10).

Variables start with an uppercase letter or ``_``; other identifiers,
integers and double-quoted strings are constants.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class DatalogError(Exception):
    pass


class StratificationError(DatalogError):
    def __init__(self, cycle: Iterable[str]):
        self.cycle = tuple(sorted(cycle))
        super().__init__("negation through recursion in cycle {" + ",".join(self.cycle) + "}")


class UnknownPredicate(DatalogError):
    pass


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Const = Union[str, int]
Term = Union[Var, str, int]

BUILTINS = frozenset({"lt", "le", "eq"})


@dataclass(frozen=True)
class Atom:
    predicate: str
    terms: tuple[Term, ...]

    @property
    def arity(self) -> int:
        return len(self.terms)

    def variables(self) -> set[Var]:
        return {t for t in self.terms if isinstance(t, Var)}

    def is_ground(self) -> bool:
        return not any(isinstance(t, Var) for t in self.terms)

    def __str__(self) -> str:
        return f"{self.predicate}({','.join(format_term(t) for t in self.terms)})"


def atom(predicate: str, *terms: Term) -> Atom:
    return Atom(predicate, tuple(terms))


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return ("not " if self.negated else "") + str(self.atom)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Literal, ...] = ()

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."

    def check_safety(self) -> None:
        """Range restriction: head, negated and built-in variables must be bound positively."""
        bound: set[Var] = set()
        for lit in self.body:
            if not lit.negated and lit.atom.predicate not in BUILTINS:
                bound |= lit.atom.variables()
        missing = self.head.variables() - bound
        if missing:
            raise DatalogError(f"unsafe rule {self}: head variables {sorted(map(str, missing))} not bound")
        for lit in self.body:
            if lit.atom.predicate in BUILTINS:
                free = lit.atom.variables() - bound
            elif lit.negated:
                # anonymous variables in a negated atom read as "no such tuple exists"
                free = {v for v in lit.atom.variables() if not v.name.startswith("_")} - bound
            else:
                continue
            if free:
                raise DatalogError(f"unsafe rule {self}: {lit} uses unbound {sorted(map(str, free))}")


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    edb: frozenset[Atom] = frozenset()

    def __post_init__(self):
        arities: dict[str, int] = {}
        for a in self._all_atoms():
            if a.predicate in BUILTINS:
                if a.arity != 2:
                    raise DatalogError(f"built-in {a.predicate} takes 2 arguments")
                continue
            prev = arities.setdefault(a.predicate, a.arity)
            if prev != a.arity:
                raise DatalogError(f"predicate {a.predicate} used with arities {prev} and {a.arity}")
        for a in self.edb:
            if not a.is_ground():
                raise DatalogError(f"non-ground fact {a}")
            if a.predicate in BUILTINS:
                raise DatalogError(f"fact for built-in {a.predicate}")
        for r in self.rules:
            if r.head.predicate in BUILTINS:
                raise DatalogError(f"rule defines built-in {r.head.predicate}")
            r.check_safety()
        object.__setattr__(self, "arities", arities)

    def _all_atoms(self) -> Iterator[Atom]:
        yield from self.edb
        for r in self.rules:
            yield r.head
            for lit in r.body:
                yield lit.atom

    def with_facts(self, facts: Iterable[Atom]) -> "Program":
        return Program(self.rules, self.edb | frozenset(facts))

    @property
    def idb_predicates(self) -> set[str]:
        return {r.head.predicate for r in self.rules}


@dataclass(frozen=True)
class Stratum:
    predicates: frozenset[str]
    rules: tuple[Rule, ...]


def _dependency_graph(program: Program) -> dict[str, set[tuple[str, bool]]]:
    deps: dict[str, set[tuple[str, bool]]] = defaultdict(set)
    for r in program.rules:
        deps[r.head.predicate]
        for lit in r.body:
            if lit.atom.predicate not in BUILTINS:
                deps[r.head.predicate].add((lit.atom.predicate, lit.negated))
    return deps


def _sccs(nodes: list[str], succ: dict[str, list[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = itertools.count()
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def stratify(program: Program) -> list[Stratum]:
    """Group rules into strata so negation only refers to earlier strata."""
    deps = _dependency_graph(program)
    nodes = sorted(set(deps) | {p for ds in deps.values() for p, _ in ds})
    succ = {p: sorted({q for q, _ in deps.get(p, ())}) for p in nodes}
    comps = _sccs(nodes, succ)
    comp_of = {p: i for i, comp in enumerate(comps) for p in comp}
    for comp in comps:
        members = set(comp)
        for p in comp:
            for q, neg in deps.get(p, ()):
                if neg and q in members:
                    raise StratificationError(comp)
    # Tarjan emits dependencies before dependents.
    level: dict[int, int] = {}
    for i, comp in enumerate(comps):
        lv = 0
        for p in comp:
            for q, neg in deps.get(p, ()):
                j = comp_of[q]
                if j != i:
                    lv = max(lv, level[j] + (1 if neg else 0))
        level[i] = lv
    idb = program.idb_predicates
    by_level: dict[int, set[str]] = defaultdict(set)
    for p in idb:
        by_level[level[comp_of[p]]].add(p)
    strata = []
    for lv in sorted(by_level):
        preds = frozenset(by_level[lv])
        rules = tuple(r for r in program.rules if r.head.predicate in preds)
        strata.append(Stratum(preds, rules))
    return strata


class Relation:
    """A set of tuples with lazily built hash indexes on argument positions."""

    def __init__(self, tuples: Iterable[tuple] = ()):
        self.tuples: set[tuple] = set(tuples)
        self._indexes: dict[tuple[int, ...], dict[tuple, list[tuple]]] = {}

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t: tuple) -> bool:
        return t in self.tuples

    def add(self, t: tuple) -> bool:
        if t in self.tuples:
            return False
        self.tuples.add(t)
        for positions, idx in self._indexes.items():
            idx.setdefault(tuple(t[i] for i in positions), []).append(t)
        return True

    def lookup(self, positions: tuple[int, ...], key: tuple) -> Iterable[tuple]:
        if not positions:
            return self.tuples
        idx = self._indexes.get(positions)
        if idx is None:
            idx = {}
            for t in self.tuples:
                idx.setdefault(tuple(t[i] for i in positions), []).append(t)
            self._indexes[positions] = idx
        return idx.get(key, ())


def _compare(pred: str, a: Const, b: Const) -> bool:
    if pred == "eq":
        return a == b
    if type(a) is not type(b):
        return False
    return a < b if pred == "lt" else a <= b


def _resolve(term: Term, sub: dict[Var, Const]) -> Term:
    return sub.get(term, term) if isinstance(term, Var) else term


def _match(terms: tuple[Term, ...], tup: tuple, sub: dict[Var, Const]) -> dict[Var, Const] | None:
    out = None
    for term, val in zip(terms, tup):
        if isinstance(term, Var):
            if term.name == "_":
                continue
            cur = (out or sub).get(term)
            if cur is None:
                if out is None:
                    out = dict(sub)
                out[term] = val
            elif cur != val:
                return None
        elif term != val:
            return None
    return out if out is not None else dict(sub)


def _filter_ready(lit: Literal, bound: set[Var]) -> bool:
    return all(v in bound or v.name.startswith("_") for v in lit.atom.variables())


def _plan(rule: Rule) -> list[Literal]:
    """Positive literals in written order; filters as soon as their variables are bound."""
    positives = [l for l in rule.body if not l.negated and l.atom.predicate not in BUILTINS]
    filters = [l for l in rule.body if l.negated or l.atom.predicate in BUILTINS]
    plan: list[Literal] = []
    bound: set[Var] = set()
    pending = list(filters)

    def flush():
        for f in list(pending):
            if _filter_ready(f, bound):
                plan.append(f)
                pending.remove(f)

    flush()
    for lit in positives:
        plan.append(lit)
        bound |= lit.atom.variables()
        flush()
    plan.extend(pending)
    return plan


def _fire(
    rule: Rule,
    plan: list[Literal],
    full: dict[str, Relation],
    delta_at: int | None = None,
    delta: Relation | None = None,
) -> Iterator[tuple]:
    """Yield head tuples; literal ``delta_at`` (index into plan) reads from ``delta``."""
    subs: list[dict[Var, Const]] = [{}]
    for i, lit in enumerate(plan):
        a = lit.atom
        if a.predicate in BUILTINS:
            keep = []
            for s in subs:
                x, y = _resolve(a.terms[0], s), _resolve(a.terms[1], s)
                if _compare(a.predicate, x, y) != lit.negated:
                    keep.append(s)
            subs = keep
        elif lit.negated:
            rel = full.get(a.predicate)
            keep = []
            for s in subs:
                terms = tuple(_resolve(t, s) for t in a.terms)
                if rel is None:
                    keep.append(s)
                    continue
                positions = tuple(j for j, t in enumerate(terms) if not isinstance(t, Var))
                key = tuple(terms[j] for j in positions)
                if positions == tuple(range(len(terms))):
                    hit = key in rel
                else:
                    hit = any(True for _ in rel.lookup(positions, key))
                if not hit:
                    keep.append(s)
            subs = keep
        else:
            rel = delta if i == delta_at else full.get(a.predicate)
            if rel is None:
                return
            nxt = []
            for s in subs:
                terms = tuple(_resolve(t, s) for t in a.terms)
                positions = tuple(j for j, t in enumerate(terms) if not isinstance(t, Var))
                key = tuple(terms[j] for j in positions)
                for tup in rel.lookup(positions, key):
                    m = _match(terms, tup, s)
                    if m is not None:
                        nxt.append(m)
            subs = nxt
        if not subs:
            return
    for s in subs:
        yield tuple(_resolve(t, s) for t in rule.head.terms)


@dataclass
class Interpretation:
    """The perfect model of a program, queryable by predicate."""

    relations: dict[str, Relation]
    arities: dict[str, int]
    iterations: int = 0
    _atoms: frozenset[Atom] | None = field(default=None, repr=False)

    @property
    def atoms(self) -> frozenset[Atom]:
        if self._atoms is None:
            self._atoms = frozenset(
                Atom(p, t) for p, rel in self.relations.items() for t in rel.tuples
            )
        return self._atoms

    def __contains__(self, a: Atom) -> bool:
        rel = self.relations.get(a.predicate)
        return rel is not None and a.terms in rel

    def tuples(self, predicate: str) -> set[tuple]:
        if predicate not in self.arities:
            raise UnknownPredicate(predicate)
        rel = self.relations.get(predicate)
        return set(rel.tuples) if rel else set()

    def query(self, pattern: Atom) -> list[dict[str, Const]]:
        return query(self, pattern)


def evaluate(program: Program, method: str = "seminaive") -> Interpretation:
    """Compute the perfect model. ``method`` is ``"seminaive"`` or ``"naive"``."""
    if method not in ("seminaive", "naive"):
        raise ValueError(method)
    strata = stratify(program)
    full: dict[str, Relation] = defaultdict(Relation)
    for a in program.edb:
        full[a.predicate].add(a.terms)
    iterations = 0
    for stratum in strata:
        plans = [(r, _plan(r)) for r in stratum.rules]
        if method == "naive":
            changed = True
            while changed:
                iterations += 1
                changed = False
                new = []
                for r, plan in plans:
                    new.extend((r.head.predicate, t) for t in _fire(r, plan, full))
                for p, t in new:
                    if full[p].add(t):
                        changed = True
            continue
        # first round: every rule over the full relations
        iterations += 1
        delta: dict[str, Relation] = defaultdict(Relation)
        for r, plan in plans:
            for t in _fire(r, plan, full):
                if t not in full[r.head.predicate]:
                    delta[r.head.predicate].add(t)
        for p, rel in delta.items():
            for t in rel.tuples:
                full[p].add(t)
        while any(delta.values()):
            iterations += 1
            new: dict[str, Relation] = defaultdict(Relation)
            for r, plan in plans:
                for i, lit in enumerate(plan):
                    if lit.negated or lit.atom.predicate in BUILTINS:
                        continue
                    d = delta.get(lit.atom.predicate)
                    if not d:
                        continue
                    for t in _fire(r, plan, full, i, d):
                        if t not in full[r.head.predicate]:
                            new[r.head.predicate].add(t)
            for p, rel in new.items():
                for t in rel.tuples:
                    full[p].add(t)
            delta = new
    arities = dict(program.arities)
    return Interpretation({p: rel for p, rel in full.items() if rel.tuples}, arities, iterations)


def query(model: Interpretation, pattern: Atom) -> list[dict[str, Const]]:
    """All substitutions for the variables of ``pattern`` that match the model."""
    if pattern.predicate not in model.arities:
        raise UnknownPredicate(pattern.predicate)
    if pattern.arity != model.arities[pattern.predicate]:
        raise DatalogError(f"{pattern.predicate} has arity {model.arities[pattern.predicate]}")
    rel = model.relations.get(pattern.predicate)
    if rel is None:
        return []
    positions = tuple(i for i, t in enumerate(pattern.terms) if not isinstance(t, Var))
    key = tuple(pattern.terms[i] for i in positions)
    found = set()
    for tup in rel.lookup(positions, key):
        m = _match(pattern.terms, tup, {})
        if m is not None:
            found.add(tuple(sorted((v.name, c) for v, c in m.items())))
    return [dict(f) for f in sorted(found, key=_sort_key)]


# -- text syntax ------------------------------------------------------------

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<comment>%[^\n]*)
      | (?P<neck>:-)
      | (?P<punct>[(),.])
      | (?P<string>"(?:[^"\\]|\\.)*")
      | (?P<int>-?\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _tokens(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise DatalogError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "comment":
            continue
        out.append((kind, m.group(kind)))
    return out


def parse_program(text: str) -> Program:
    toks = _tokens(text)
    i = 0
    anon = itertools.count()

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else (None, None)

    def expect(val):
        nonlocal i
        if peek()[1] != val:
            raise DatalogError(f"expected {val!r}, got {peek()[1]!r}")
        i += 1

    def term():
        nonlocal i
        kind, val = peek()
        i += 1
        if kind == "int":
            return int(val)
        if kind == "string":
            return bytes(val[1:-1], "utf-8").decode("unicode_escape")
        if kind == "ident":
            if val == "_":
                return Var(f"_{next(anon)}")
            if val[0].isupper() or val[0] == "_":
                return Var(val)
            return val
        raise DatalogError(f"bad term {val!r}")

    def parse_atom():
        nonlocal i
        kind, name = peek()
        if kind != "ident":
            raise DatalogError(f"expected predicate, got {name!r}")
        i += 1
        terms = []
        if peek()[1] == "(":
            i += 1
            while True:
                terms.append(term())
                if peek()[1] == ",":
                    i += 1
                    continue
                expect(")")
                break
        return Atom(name, tuple(terms))

    rules, facts = [], []
    while i < len(toks):
        head = parse_atom()
        body = []
        if peek()[1] == ":-":
            i += 1
            while True:
                neg = False
                if peek() == ("ident", "not"):
                    neg = True
                    i += 1
                body.append(Literal(parse_atom(), neg))
                if peek()[1] == ",":
                    i += 1
                    continue
                break
        expect(".")
        if not body and head.is_ground():
            facts.append(head)
        else:
            rules.append(Rule(head, tuple(body)))
    return Program(tuple(rules), frozenset(facts))


_PLAIN = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, int):
        return str(t)
    if _PLAIN.match(t):
        return t
    return '"' + t.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _sort_key(x):
    if isinstance(x, tuple):
        return tuple(_sort_key(y) for y in x)
    if isinstance(x, int):
        return (0, x, "")
    return (1, 0, str(x))


def sorted_atoms(atoms: Iterable[Atom]) -> list[Atom]:
    return sorted(atoms, key=lambda a: (a.predicate, _sort_key(a.terms)))


def format_facts(atoms: Iterable[Atom]) -> str:
    """One ``pred(c1,c2).`` line per atom, sorted; suitable for other Datalog tools."""
    return "".join(f"{a}.\n" for a in sorted_atoms(atoms))
