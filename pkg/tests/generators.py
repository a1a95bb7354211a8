"""Seeded random inputs: decomposition trees, small nets, stratified programs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from wfav.engine import Transition, WfaNet


@dataclass
class Tree:
    name: str
    kind: str | None = None  # None for a leaf, else "and" / "or"
    children: list["Tree"] | None = None

    def walk(self):
        yield self
        for c in self.children or ():
            yield from c.walk()


def random_tree(rng: random.Random, max_depth: int = 4, max_fanout: int = 3) -> Tree:
    counter = iter(range(10_000))

    def build(depth: int) -> Tree:
        name = f"g{next(counter)}"
        if depth >= max_depth or rng.random() < 0.35:
            return Tree(name)
        kind = rng.choice(("and", "or"))
        return Tree(name, kind, [build(depth + 1) for _ in range(rng.randint(2, max_fanout))])

    return build(1)


def tree_to_gqm(tree: Tree) -> str:
    lines = ["actor A kind=agent"]
    for node in tree.walk():
        flag = "" if node.children else " atomic-no-info"
        lines.append(f'goal {node.name} "{node.name}" actor=A{flag}')
    for node in tree.walk():
        if node.children:
            lines.append(f"decompose {node.name} {node.kind} " + " ".join(c.name for c in node.children))
    return "\n".join(lines) + "\n"


def or_product(tree: Tree) -> int:
    """Product over or-nodes of their branch counts (the stated run-count law)."""
    n = 1
    for node in tree.walk():
        if node.kind == "or":
            n *= len(node.children)
    return n


def runs_by_structure(tree: Tree) -> int:
    """Runs of the free-choice mapping: and multiplies, or adds."""
    if not tree.children:
        return 1
    counts = [runs_by_structure(c) for c in tree.children]
    if tree.kind == "or":
        return sum(counts)
    out = 1
    for c in counts:
        out *= c
    return out


def random_net(rng: random.Random, max_places: int = 8, max_transitions: int = 6,
               infos: tuple[str, ...] = ("a", "b")) -> WfaNet:
    """A small net with a source and a sink; not necessarily a WF-net."""
    n_places = rng.randint(2, max_places)
    places = ["src"] + [f"p{k}" for k in range(1, n_places - 1)] + ["snk"]
    inner = places[:-1]
    targets = places[1:]
    transitions = {}
    arcs = set()
    for k in range(rng.randint(1, max_transitions)):
        tid = f"t{k}"
        for p in rng.sample(inner, rng.randint(1, min(2, len(inner)))):
            arcs.add((p, tid))
        for p in rng.sample(targets, rng.randint(1, min(2, len(targets)))):
            arcs.add((tid, p))
        pick = lambda: frozenset(i for i in infos if rng.random() < 0.25)  # noqa: E731
        res = rng.choice(("x", "y"))
        sd = frozenset((i, rng.choice(("x", "y"))) for i in infos if rng.random() < 0.15)
        transitions[tid] = Transition(tid, res, pd=pick(), rd=pick(), md=pick(), sd=sd)
    return WfaNet(frozenset(places), transitions, frozenset(arcs), "src", "snk")


def random_program(rng: random.Random, n_preds: int = 6, max_facts: int = 30):
    """A stratified program over small integer constants, in oracle format.

    Predicates get a rank; rules only negate strictly lower ranks, so every
    generated program is stratifiable by construction.
    """
    arity = {f"q{k}": rng.choice((1, 2)) for k in range(n_preds)}
    preds = list(arity)
    n_edb = rng.randint(1, 3)
    edb, idb = preds[:n_edb], preds[n_edb:]
    rank = {p: 0 for p in edb}
    for k, p in enumerate(idb):
        rank[p] = k + 1
    consts = list(range(5))
    facts = set()
    for _ in range(rng.randint(0, max_facts)):
        p = rng.choice(edb)
        facts.add((p, tuple(rng.choice(consts) for _ in range(arity[p]))))
    rules = []
    for head in idb:
        for _ in range(rng.randint(1, 3)):
            body = []
            vars_: list[str] = []
            for _ in range(rng.randint(1, 2)):
                p = rng.choice([q for q in preds if rank[q] <= rank[head]])
                args = []
                for _ in range(arity[p]):
                    if vars_ and rng.random() < 0.5:
                        args.append(rng.choice(vars_))
                    elif rng.random() < 0.15:
                        args.append(rng.choice(consts))
                    else:
                        v = f"V{len(vars_)}"
                        vars_.append(v)
                        args.append(v)
                body.append((False, p, tuple(args)))
            if not vars_:
                vars_.append("V0")
                body.append((False, edb[0], tuple("V0" for _ in range(arity[edb[0]]))))
            lower = [q for q in preds if rank[q] < rank[head]]
            if lower and rng.random() < 0.5:
                p = rng.choice(lower)
                body.append((True, p, tuple(rng.choice(vars_) for _ in range(arity[p]))))
            if len(vars_) >= 2 and rng.random() < 0.3:
                a, b = rng.sample(vars_, 2)
                body.append((rng.random() < 0.2, rng.choice(("lt", "le", "eq")), (a, b)))
            hargs = tuple(rng.choice(vars_) for _ in range(arity[head]))
            rules.append(((head, hargs), body))
    return rules, facts


def program_text(rules, facts) -> str:
    """Render an oracle-format program in the library's Datalog syntax."""

    def lit(neg, p, args):
        return ("not " if neg else "") + f"{p}({','.join(map(str, args))})"

    lines = [lit(False, p, a) + "." for p, a in sorted(facts)]
    for (hp, hargs), body in rules:
        lines.append(lit(False, hp, hargs) + " :- " + ", ".join(lit(*l) for l in body) + ".")
    return "\n".join(lines) + "\n"
