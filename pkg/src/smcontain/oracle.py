"""Conjunctive query answering over chase results and a brute-force containment oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .chase import ChaseConfig, chase
from .containment import DummyWitness, Outcome, Verdict, _check_pair
from .dummies import restricted_growth_strings
from .hom import find_homomorphism, search
from .model import Atom, ConjunctiveQuery, Constant, Fact, Instance, Null, Schema, SchemaError, SchemaMapping, Variable


@dataclass(frozen=True)
class AnswerSet:
    tuples: frozenset
    null_free: bool = False
    # set when the chase was cut by its budget: the tuples are sound but maybe incomplete
    lower_bound: bool = False

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list[tuple]:
        return sorted(self.tuples, key=lambda t: tuple((isinstance(v, Null), str(v)) for v in t))

    def __le__(self, other: AnswerSet) -> bool:
        return self.tuples <= other.tuples


def _check_query(q: ConjunctiveQuery, schema: Schema) -> None:
    for a in q.body:
        arity = schema.arity(a.predicate)
        if arity is None:
            raise SchemaError(f"query predicate {a.predicate} is not in the schema")
        if arity != a.arity:
            raise SchemaError(f"query atom {a} does not match {a.predicate}/{arity}")


def evaluate_query(q: ConjunctiveQuery, i: Instance) -> AnswerSet:
    """Images of the head variables under every match of the body in ``i``."""
    _check_query(q, i.schema)
    free = {v for a in q.body for v in a.variables()}
    out = {tuple(sol[v] for v in q.head_vars) for sol in search(q.body, i, free)}
    return AnswerSet(frozenset(out), null_free=False)


def certain_answers(q: ConjunctiveQuery, i: Instance, m: SchemaMapping,
                    budget: ChaseConfig = ChaseConfig()) -> AnswerSet:
    """Null-free answers of ``q`` on the chase of ``i`` under ``m``."""
    _check_query(q, m.target)
    if not set(f.predicate for f in i) <= set(m.source):
        raise SchemaError("instance is not over the mapping's source schema")
    res = chase(i, m.tgds, budget, m.schema)
    ans = evaluate_query(q, res.instance.restrict(m.target))
    kept = frozenset(t for t in ans.tuples if not any(isinstance(v, Null) for v in t))
    return AnswerSet(kept, null_free=True, lower_bound=not res.terminated)


def _canonical(facts: Sequence[Fact], domain: Sequence[Constant]) -> tuple:
    best = None
    for perm in itertools.permutations(domain):
        ren = dict(zip(domain, perm))
        key = tuple(sorted((f.predicate, tuple(ren[a].name for a in f.args)) for f in facts))
        if best is None or key < best:
            best = key
    return best


def enumerate_source_instances(schema: Schema, max_facts: int, domain: Sequence[str]) -> Iterator[Instance]:
    """Every instance of at most ``max_facts`` facts over ``domain``, one per renaming class.

    Argument positions of a fact multiset are filled by set partitions with at
    most ``|domain|`` blocks; renamed duplicates are dropped.
    """
    consts = [Constant(c) for c in domain]
    preds = sorted(schema)
    seen: set = set()
    for k in range(max_facts + 1):
        for combo in itertools.combinations_with_replacement(preds, k):
            arities = [schema.arity(p) for p in combo]
            for rgs in restricted_growth_strings(sum(arities), max_blocks=len(consts)):
                facts, pos = [], 0
                for p, n in zip(combo, arities):
                    facts.append(Fact(p, tuple(consts[b] for b in rgs[pos:pos + n])))
                    pos += n
                if len(set(facts)) < k:
                    continue
                key = _canonical(facts, consts)
                if key in seen:
                    continue
                seen.add(key)
                yield Instance(schema, facts)


def oracle_containment(m: SchemaMapping, m2: SchemaMapping, max_facts: int = 2,
                       domain: Sequence[str] = ("a", "b"),
                       budget: ChaseConfig = ChaseConfig()) -> Verdict:
    """Check chase_m(I) -> chase_m2(I) for every small source instance I.

    A Contained result only covers the enumerated instances and is marked
    ``bounded``. A homomorphism into a budget-truncated right chase still
    counts, since the prefix is part of the full chase.
    """
    _check_pair(m, m2)
    schema = m.schema
    witnesses = []
    for inst in enumerate_source_instances(m.source, max_facts, domain):
        left = chase(inst, m.tgds, budget, schema)
        if not left.terminated:
            return Verdict(Outcome.INCONCLUSIVE, witnesses, reason="left chase budget exhausted",
                           bounded=True, counterexample=inst)
        right = chase(inst, m2.tgds, budget, schema)
        h = find_homomorphism(left.instance, right.instance)
        w = DummyWitness(inst, len(left.instance), right.instance.max_level(), h, right.terminated,
                         left.instance, right.instance)
        witnesses.append(w)
        if h is None:
            if not right.terminated:
                return Verdict(Outcome.INCONCLUSIVE, witnesses, reason="right chase budget exhausted",
                               bounded=True, counterexample=inst)
            return Verdict(Outcome.NOT_CONTAINED, witnesses, bounded=True, counterexample=inst)
    return Verdict(Outcome.CONTAINED, witnesses, bounded=True)


def query_from_instance(i: Instance, name: str = "q") -> ConjunctiveQuery:
    """Freeze an instance into a CQ: nulls become existential variables, constants head variables."""
    ren = {}
    for v in sorted(i.values(), key=lambda v: (isinstance(v, Null), str(v))):
        ren[v] = Variable(f"C_{v.name}") if isinstance(v, Constant) else Variable(f"N{v.id}")
    body = tuple(Atom(f.predicate, tuple(ren[a] for a in f.args)) for f in i.sorted_facts())
    head = tuple(ren[c] for c in sorted(i.constants(), key=lambda c: c.name))
    return ConjunctiveQuery(head, body, name)


def separating_query(m: SchemaMapping, m2: SchemaMapping, i: Instance,
                     budget: ChaseConfig = ChaseConfig()) -> tuple[ConjunctiveQuery, tuple] | None:
    """A query and tuple certain under ``m`` but not under ``m2`` on ``i``, if one exists.

    The query is the target part of the chase of ``i`` under ``m``.
    """
    left = chase(i, m.tgds, budget, m.schema).instance.restrict(m.target)
    if len(left) == 0:
        return None
    q = query_from_instance(left)
    t = tuple(sorted(left.constants(), key=lambda c: c.name))
    if t in certain_answers(q, i, m, budget) and t not in certain_answers(q, i, m2, budget):
        return q, t
    return None
