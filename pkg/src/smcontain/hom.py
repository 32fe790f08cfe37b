"""Homomorphism and isomorphism search between instances."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .model import Atom, Constant, Fact, Instance, Null, SchemaError, Term


@dataclass(frozen=True)
class Homomorphism:
    """A value assignment; constants map to themselves."""

    assignment: Mapping[Term, Term]

    def __call__(self, v: Term) -> Term:
        return self.assignment.get(v, v)

    def apply(self, i: Instance) -> Instance:
        return Instance(i.schema, (Fact(f.predicate, tuple(self(a) for a in f.args), f.level) for f in i))

    def compose(self, after: Homomorphism) -> Homomorphism:
        """``after`` applied to the image of ``self``."""
        return Homomorphism({k: after(v) for k, v in self.assignment.items()})

    def nulls_only(self) -> dict[Term, Term]:
        return {k: v for k, v in self.assignment.items() if not isinstance(k, Constant)}

    def __str__(self) -> str:
        items = sorted(self.nulls_only().items(), key=lambda kv: str(kv[0]))
        return ", ".join(f"{k}->{v}" for k, v in items) or "(identity)"


class _Index:
    """Per-predicate and per-(predicate, position, value) lookup over an instance."""

    def __init__(self, dst: Instance):
        self.by_pred: dict[str, list[tuple]] = defaultdict(list)
        self.by_pos: dict[tuple, list[tuple]] = defaultdict(list)
        for f in dst.sorted_facts():
            self.by_pred[f.predicate].append(f.args)
            for k, v in enumerate(f.args):
                self.by_pos[(f.predicate, k, v)].append(f.args)
        self.facts = {(f.predicate, f.args) for f in dst}

    def candidates(self, pred: str, args: Sequence[Term], assign: Mapping[Term, Term], free) -> list[tuple]:
        best = None
        for k, a in enumerate(args):
            v = assign.get(a, a) if a in free else a
            if a in free and a not in assign:
                continue
            lst = self.by_pos.get((pred, k, v), [])
            if best is None or len(lst) < len(best):
                best = lst
                if not best:
                    break
        return self.by_pred.get(pred, []) if best is None else best


def search(atoms: Iterable[Atom | Fact], dst: Instance, free: set,
           injective: bool = False, allowed=None) -> Iterator[dict[Term, Term]]:
    """Yield every assignment of the ``free`` terms sending ``atoms`` into ``dst``.

    Terms outside ``free`` are rigid. Atoms are matched one at a time, always
    picking next the atom with the most already-bound free terms (ties: the
    smaller candidate list, then input order); this is backtracking over free
    terms with fact-level propagation. With ``injective`` distinct free terms
    get distinct images; ``allowed(term, value)`` can veto single bindings.
    """
    atoms = [(a.predicate, tuple(a.args)) for a in atoms]
    atoms = list(dict.fromkeys(atoms))
    idx = _Index(dst)
    ground = [a for a in atoms if not any(t in free for t in a[1])]
    for a in ground:
        if a not in idx.facts:
            return
    todo = [a for a in atoms if any(t in free for t in a[1])]
    occ = Counter(t for _, args in todo for t in set(args) if t in free)
    # stable start: most frequently occurring free terms first
    todo.sort(key=lambda a: -sum(occ[t] for t in set(a[1]) if t in free))
    assign: dict[Term, Term] = {}
    used: set = set()

    def pick(remaining: list) -> int:
        best, best_key = 0, None
        for n, (pred, args) in enumerate(remaining):
            bound = sum(1 for t in args if t in free and t in assign)
            unbound = sum(1 for t in set(args) if t in free and t not in assign)
            key = (unbound > 0, -bound, unbound)
            if best_key is None or key < best_key:
                best, best_key = n, key
        return best

    def rec(remaining: list) -> Iterator[dict]:
        if not remaining:
            yield dict(assign)
            return
        n = pick(remaining)
        pred, args = remaining[n]
        rest = remaining[:n] + remaining[n + 1:]
        for cand in idx.candidates(pred, args, assign, free):
            added = []
            ok = True
            for t, v in zip(args, cand):
                if t in free:
                    cur = assign.get(t)
                    if cur is None:
                        if (injective and v in used) or (allowed is not None and not allowed(t, v)):
                            ok = False
                            break
                        assign[t] = v
                        used.add(v)
                        added.append(t)
                    elif cur != v:
                        ok = False
                        break
                elif t != v:
                    ok = False
                    break
            if ok:
                yield from rec(rest)
            for t in added:
                used.discard(assign.pop(t))

    yield from rec(todo)


def _same_schema(a: Instance, b: Instance) -> None:
    if a.schema != b.schema:
        raise SchemaError("instances are over different schemas")


def _complete(assign: Mapping[Term, Term], src: Instance) -> Homomorphism:
    full = {v: v for v in src.values() if isinstance(v, Constant)}
    full.update(assign)
    return Homomorphism(full)


def find_homomorphism(src: Instance, dst: Instance) -> Homomorphism | None:
    """Some homomorphism from ``src`` to ``dst``, or None if none exists."""
    _same_schema(src, dst)
    sol = next(search(src, dst, free=src.nulls()), None)
    return None if sol is None else _complete(sol, src)


def iter_homomorphisms(src: Instance, dst: Instance) -> Iterator[Homomorphism]:
    _same_schema(src, dst)
    for sol in search(src, dst, free=src.nulls()):
        yield _complete(sol, src)


def verify_homomorphism(h: Homomorphism | Mapping, src: Instance, dst: Instance) -> bool:
    assignment = h.assignment if isinstance(h, Homomorphism) else h
    for v in src.values():
        if v not in assignment:
            if isinstance(v, Null):
                return False
            continue
        if isinstance(v, Constant) and assignment[v] != v:
            return False
    for k, v in assignment.items():
        if isinstance(k, Constant) and v != k:
            return False
    return all(Fact(f.predicate, tuple(assignment.get(a, a) for a in f.args)) in dst for f in src)


def _signature(i: Instance) -> tuple:
    return (len(i), sorted(Counter(f.predicate for f in i).items()), len(i.nulls()), sorted(c.name for c in i.constants()))


def find_isomorphism(a: Instance, b: Instance) -> Homomorphism | None:
    """A bijection between values, identity on constants and null-to-null, with h(a) = b."""
    _same_schema(a, b)
    if _signature(a) != _signature(b):
        return None
    # injective + equal fact counts forces h(a) == b
    sol = next(search(a, b, free=a.nulls(), injective=True,
                      allowed=lambda t, v: isinstance(v, Null)), None)
    return None if sol is None else _complete(sol, a)


def is_isomorphic(a: Instance, b: Instance) -> bool:
    return find_isomorphism(a, b) is not None


def hom_equivalent(a: Instance, b: Instance) -> bool:
    return find_homomorphism(a, b) is not None and find_homomorphism(b, a) is not None
