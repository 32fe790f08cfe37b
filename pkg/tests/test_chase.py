import random

import pytest

from smcontain.chase import (
    ChaseConfig,
    ChaseMode,
    ChaseRun,
    ChaseStatus,
    Trigger,
    chase,
    chase_step,
    chase_to_level,
    default_level_bound,
    is_weakly_acyclic,
    match,
    triggers_for,
)
from smcontain.dsl import parse_instance, parse_mapping
from smcontain.hom import hom_equivalent, is_isomorphic
from smcontain.model import TGD, Atom, Constant, Fact, Instance, Null, NullGenerator, Schema, Variable

from randgen import random_instance, random_wa_tgd_set, shift_nulls

X, Y, Z = (Variable(v) for v in "XYZ")
a, b = Constant("a"), Constant("b")
U = Schema({"r1": 2, "r2": 2, "r3": 2})


def tgd(text: str) -> TGD:
    body, head = text.split("->")
    m = parse_mapping(f"source {{ }} target {{ r1/2; r2/2; r3/2; r/2; }} st {{ }} t {{ {text}; }}")
    return m.t_tgds[0]


def test_chase_step_existential_gets_level_one():
    i = Instance(U, [Fact("r1", (a, b), 0)])
    t = tgd("r1(X,Y) -> r2(Y,Z)")
    f = next(iter(i))
    delta = chase_step(i, Trigger(t, match(t, f), f), NullGenerator(5))
    assert delta == {Fact("r2", (b, Null(5)))}
    assert next(iter(delta)).level == 1


def test_chase_step_from_level_one_fact():
    f = Fact("r2", (b, Null(1)), 1)
    i = Instance(U, [f])
    t = tgd("r2(X,Y) -> r3(Z,X)")
    [g] = chase_step(i, Trigger(t, match(t, f), f), NullGenerator(2))
    assert g == Fact("r3", (Null(2), b)) and g.level == 2


def test_chase_step_full_tgd_already_satisfied_is_empty():
    f = Fact("r1", (a, b))
    i = Instance(U, [f, Fact("r2", (b, a))])
    t = tgd("r1(X,Y) -> r2(Y,X)")
    assert chase_step(i, Trigger(t, match(t, f), f), NullGenerator()) == set()


def test_match_respects_repeated_variables():
    t = tgd("r1(X,X) -> r2(X,X)")
    assert match(t, Fact("r1", (a, b))) is None
    assert match(t, Fact("r1", (a, a))) == {X: a}


def test_example_chase_under_M(M):
    i = parse_instance("r1(a,b).", M.source)
    res = chase(i, M.tgds, schema=M.schema)
    assert res.status is ChaseStatus.TERMINATED
    target = res.instance.restrict(M.target)
    expected = parse_instance("r2(b,_1). r3(_2,b). r3(_3,b).", M.target)
    assert is_isomorphic(target, expected)
    assert len(target.nulls()) == 3


def test_example_chase_under_Mp(Mp):
    i = parse_instance("r1(a,b).", Mp.source)
    target = chase(i, Mp.tgds, schema=Mp.schema).instance.restrict(Mp.target)
    assert is_isomorphic(target, parse_instance("r2(b,_1). r3(_2,b).", Mp.target))


def test_empty_instance_chase(M):
    res = chase(Instance(M.schema), M.tgds)
    assert len(res.instance) == 0 and res.terminated and res.steps == 0


def test_chase_to_level(M):
    i = parse_instance("r1(a,b).", M.source).with_schema(M.schema)
    assert chase_to_level(i, M.tgds, 0) == i
    one = chase_to_level(i, M.tgds, 1)
    assert is_isomorphic(one, parse_instance("r1(a,b). r2(b,_1). r3(_2,b).", M.schema))
    assert chase_to_level(i, M.tgds, 10_000) == chase(i, M.tgds).instance


def test_levels_match_example(M):
    i = parse_instance("r1(a,b).", M.source).with_schema(M.schema)
    levels = sorted((f.predicate, f.level) for f in chase(i, M.tgds).instance)
    assert levels == [("r1", 0), ("r2", 1), ("r3", 1), ("r3", 2)]


def test_budget_exhaustion_on_infinite_chase():
    s = Schema({"r": 2})
    t = tgd("r(X,Y) -> r(Y,Z)")
    res = chase(Instance(s, [Fact("r", (a, b))]), [t], ChaseConfig(max_facts=50))
    assert res.status is ChaseStatus.BUDGET_EXHAUSTED
    assert len(res.instance) == 50
    capped = chase(Instance(s, [Fact("r", (a, b))]), [t], ChaseConfig(max_level=4))
    assert capped.status is ChaseStatus.BUDGET_EXHAUSTED
    assert capped.instance.max_level() == 4 and len(capped.instance) == 5


def test_restricted_mode_skips_satisfied_triggers(M):
    i = parse_instance("r1(a,b).", M.source).with_schema(M.schema)
    res = chase(i, M.tgds, ChaseConfig(mode=ChaseMode.RESTRICTED))
    # r3(_,b) from the s-t TGD already satisfies the target TGD
    assert len(res.instance.restrict(M.target)) == 2
    assert hom_equivalent(res.instance, chase(i, M.tgds).instance)


def test_restricted_chase_terminates_where_oblivious_does_not():
    s = Schema({"r": 2})
    t = tgd("r(X,Y) -> r(X,Z)")
    i = Instance(s, [Fact("r", (a, b))])
    assert chase(i, [t], ChaseConfig(mode=ChaseMode.RESTRICTED)).terminated
    assert not chase(i, [t], ChaseConfig(max_facts=100)).terminated
    assert not is_weakly_acyclic([t])


def test_weak_acyclicity_examples(M):
    assert is_weakly_acyclic(M.tgds)
    assert not is_weakly_acyclic([tgd("r(X,Y) -> r(Y,Z)")])
    assert is_weakly_acyclic([])
    # regular cycles are fine
    assert is_weakly_acyclic([tgd("r(X,Y) -> r(Y,X)")])


def test_default_level_bound(Mp):
    assert default_level_bound(Mp.tgds) == 18
    unary = parse_mapping("source { } target { p/1; q/1; } st { } t { p(X) -> q(X); }")
    assert default_level_bound(unary.t_tgds) == 2
    assert default_level_bound([]) == 0


def test_non_lav_rejected():
    bad = TGD((Atom("r1", (X, Y)), Atom("r1", (Y, Z))), (Atom("r2", (X, Z)),))
    with pytest.raises(ValueError):
        chase(Instance(U), [bad])


# ---- properties over random weakly-acyclic sets

PROP_SCHEMA = Schema({"p": 1, "r": 2, "s": 2, "t": 3})


def _random_case(rng):
    tgds = random_wa_tgd_set(rng, PROP_SCHEMA)
    i = random_instance(rng, PROP_SCHEMA, rng.randint(0, 4), ["a", "b", "c"], [1, 2])
    return tgds, i


def test_weakly_acyclic_chase_terminates_and_levels_are_sound():
    rng = random.Random(1)
    for _ in range(150):
        tgds, i = _random_case(rng)
        run = ChaseRun(i, tgds, max_facts=20_000)
        assert run.advance() and run.saturated
        out = run.instance
        assert {f for f in out if f.level == 0} == set(i)
        # each derived fact comes from a trigger on a fact exactly one level below
        for f in out:
            if f.level == 0:
                continue
            producers = {g.level for g in out if g.level < f.level
                         for tr in triggers_for(g, tgds) if _produces_up_to_nulls(tr, f)}
            assert max(producers) == f.level - 1


def _produces_up_to_nulls(tr, f):
    for atom in tr.tgd.head:
        if atom.predicate != f.predicate:
            continue
        ok = True
        for t, v in zip(atom.args, f.args):
            if t in tr.binding:
                ok &= tr.binding[t] == v
            else:
                ok &= isinstance(v, Null)
        if ok:
            return True
    return False


def test_monotone_prefix_and_determinism():
    rng = random.Random(2)
    for _ in range(100):
        tgds, i = _random_case(rng)
        prev = None
        for lv in range(0, 5):
            cur = chase_to_level(i, tgds, lv)
            if prev is not None:
                assert set(prev) <= set(cur)
            prev = cur
        assert chase(i, tgds).instance == chase(i, tgds).instance
        assert is_isomorphic(chase(i, tgds).instance, chase(i, tgds).instance)


def test_union_decomposition_disjoint_values():
    rng = random.Random(4)
    for _ in range(100):
        tgds = random_wa_tgd_set(rng, PROP_SCHEMA)
        d1 = random_instance(rng, PROP_SCHEMA, rng.randint(0, 3), ["a", "b"], [1, 2])
        d2 = random_instance(rng, PROP_SCHEMA, rng.randint(0, 3), ["c", "d"], [3, 4])
        whole = chase(d1.union(d2), tgds).instance
        c1 = chase(d1, tgds).instance
        c2 = shift_nulls(chase(d2, tgds).instance, 10_000)
        assert is_isomorphic(whole, c1.union(c2))


def test_union_with_shared_constants_is_only_hom_equivalent():
    # both source facts derive t(b); the union of separate chases invents two nulls for it
    s = Schema({"r": 2, "t": 1, "s": 2})
    tgds = [tgd_s("r(X,Y) -> t(Y)"), tgd_s("t(X) -> s(X,Z)")]
    d1 = Instance(s, [Fact("r", (a, b))])
    d2 = Instance(s, [Fact("r", (Constant("c"), b))])
    whole = chase(d1.union(d2), tgds).instance
    parts = chase(d1, tgds).instance.union(shift_nulls(chase(d2, tgds).instance, 100))
    assert not is_isomorphic(whole, parts)
    assert hom_equivalent(whole, parts)


def tgd_s(text: str) -> TGD:
    m = parse_mapping(f"source {{ }} target {{ r/2; t/1; s/2; }} st {{ }} t {{ {text}; }}")
    return m.t_tgds[0]
