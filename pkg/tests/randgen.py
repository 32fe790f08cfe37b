"""Seeded random generators for mappings, instances, TGD sets and queries."""
from __future__ import annotations

import random

from smcontain.chase import is_weakly_acyclic
from smcontain.model import TGD, Atom, ConjunctiveQuery, Constant, Fact, Instance, Null, Schema, SchemaMapping, Variable

BODY_VARS = [Variable(v) for v in "XYU"]
EXIST_VARS = [Variable(v) for v in "ZW"]


def random_atom(rng: random.Random, pred: str, arity: int, pool: list) -> Atom:
    return Atom(pred, tuple(rng.choice(pool) for _ in range(arity)))


def random_tgd(rng: random.Random, body_schema: Schema, head_schema: Schema, max_head: int = 2) -> TGD:
    bp = rng.choice(sorted(body_schema))
    body = random_atom(rng, bp, body_schema.arity(bp), BODY_VARS[:2])
    pool = body.variables() + EXIST_VARS[: rng.randint(0, 2)]
    head = []
    for _ in range(rng.randint(1, max_head)):
        hp = rng.choice(sorted(head_schema))
        head.append(random_atom(rng, hp, head_schema.arity(hp), pool))
    return TGD((body,), tuple(head))


def random_tgd_set(rng: random.Random, schema: Schema, n: int) -> list[TGD]:
    return [random_tgd(rng, schema, schema) for _ in range(n)]


def random_wa_tgd_set(rng: random.Random, schema: Schema, max_n: int = 4) -> list[TGD]:
    while True:
        tgds = random_tgd_set(rng, schema, rng.randint(1, max_n))
        if is_weakly_acyclic(tgds):
            return tgds


SMALL_SOURCE = Schema({"s1": 2, "s2": 2})
SMALL_TARGET = Schema({"t1": 2, "t2": 2})


def random_small_schemas(rng: random.Random) -> tuple[Schema, Schema]:
    src = Schema({p: 2 for p in ["s1", "s2"][: rng.randint(1, 2)]})
    tgt = Schema({p: 2 for p in ["t1", "t2"][: rng.randint(1, 2)]})
    return src, tgt


def random_mapping(rng: random.Random, source: Schema, target: Schema, max_tgds: int = 2) -> SchemaMapping:
    """A mapping with <= max_tgds s-t and target TGDs, weakly acyclic overall."""
    while True:
        st = [random_tgd(rng, source, target) for _ in range(rng.randint(1, max_tgds))]
        t = [random_tgd(rng, target, target) for _ in range(rng.randint(0, max_tgds))]
        m = SchemaMapping(source, target, tuple(st), tuple(t))
        if is_weakly_acyclic(m.tgds):
            return m


def random_mapping_pair(rng: random.Random) -> tuple[SchemaMapping, SchemaMapping]:
    """Two mappings over shared small schemas.

    Most pairs are a mapping and an edit of it (one TGD added, dropped or
    replaced), returned in random order, so both verdicts are common.
    """
    src, tgt = random_small_schemas(rng)
    m1 = random_mapping(rng, src, tgt)
    if rng.random() < 0.7:
        for _ in range(20):
            st, t = list(m1.st_tgds), list(m1.t_tgds)
            choice = rng.randrange(5)
            if choice == 0 and len(st) > 1:
                st.pop(rng.randrange(len(st)))
            elif choice == 1 and t:
                t.pop(rng.randrange(len(t)))
            elif choice == 2 and len(t) < 2:
                t.append(random_tgd(rng, tgt, tgt))
            elif choice == 3 and len(st) < 2:
                st.append(random_tgd(rng, src, tgt))
            else:
                st[rng.randrange(len(st))] = random_tgd(rng, src, tgt)
            m2 = SchemaMapping(src, tgt, tuple(st), tuple(t))
            if is_weakly_acyclic(m2.tgds):
                return (m1, m2) if rng.random() < 0.5 else (m2, m1)
    return m1, random_mapping(rng, src, tgt)


def random_instance(rng: random.Random, schema: Schema, n_facts: int, constants: list[str],
                    null_ids: list[int]) -> Instance:
    pool = [Constant(c) for c in constants] + [Null(k) for k in null_ids]
    inst = Instance(schema)
    for _ in range(n_facts):
        p = rng.choice(sorted(schema))
        inst.add(Fact(p, tuple(rng.choice(pool) for _ in range(schema.arity(p)))))
    return inst


def random_query(rng: random.Random, schema: Schema, max_atoms: int = 3, constants=("a", "b")) -> ConjunctiveQuery:
    vars_ = [Variable(v) for v in "XYZU"]
    pool = vars_ + [Constant(c) for c in constants]
    body = []
    for _ in range(rng.randint(1, max_atoms)):
        p = rng.choice(sorted(schema))
        body.append(Atom(p, tuple(rng.choice(pool if rng.random() < 0.2 else vars_) for _ in range(schema.arity(p)))))
    bvars = list(dict.fromkeys(v for a in body for v in a.variables()))
    head = [v for v in bvars if rng.random() < 0.5]
    return ConjunctiveQuery(tuple(head), tuple(body))


def shift_nulls(i: Instance, offset: int) -> Instance:
    return Instance(i.schema, (Fact(f.predicate, tuple(Null(a.id + offset) if isinstance(a, Null) else a
                                                       for a in f.args), f.level) for f in i))
