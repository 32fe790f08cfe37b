"""Oblivious and restricted chase over LAV TGDs with per-fact levels."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

import networkx as nx

from .model import TGD, Fact, Instance, NullGenerator, Schema, Term, Variable, check_lav

DEFAULT_MAX_FACTS = 100_000


class ChaseMode(str, enum.Enum):
    OBLIVIOUS = "oblivious"
    RESTRICTED = "restricted"


class ChaseStatus(str, enum.Enum):
    TERMINATED = "terminated"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class ChaseConfig:
    mode: ChaseMode = ChaseMode.OBLIVIOUS
    max_facts: int | None = DEFAULT_MAX_FACTS
    max_level: int | None = None


@dataclass(frozen=True)
class Trigger:
    tgd: TGD
    binding: Mapping[Term, Term]
    fact: Fact


@dataclass
class ChaseResult:
    instance: Instance
    status: ChaseStatus
    steps: int

    @property
    def terminated(self) -> bool:
        return self.status is ChaseStatus.TERMINATED


def match(tgd: TGD, fact: Fact) -> dict[Variable, Term] | None:
    """Bind the TGD's body atom to ``fact``; None if they do not unify."""
    body = tgd.body_atom
    if body.predicate != fact.predicate or body.arity != fact.arity:
        return None
    binding: dict[Variable, Term] = {}
    for var, val in zip(body.args, fact.args):
        prev = binding.setdefault(var, val)
        if prev != val:
            return None
    return binding


def triggers_for(fact: Fact, tgds: Iterable[TGD]) -> list[Trigger]:
    out = []
    for tgd in tgds:
        b = match(tgd, fact)
        if b is not None:
            out.append(Trigger(tgd, b, fact))
    return out


def chase_step(i: Instance, t: Trigger, gen: NullGenerator) -> set[Fact]:
    """Fire ``t`` against ``i`` and return the facts it adds (``i`` is not modified)."""
    binding = dict(t.binding)
    for y in t.tgd.existentials:
        binding[y] = gen.fresh()
    level = t.fact.level + 1
    delta = set()
    for atom in t.tgd.head:
        f = Fact(atom.predicate, atom.substitute(binding).args, level)
        if f not in i:
            delta.add(f)
    return delta


def _head_satisfied(i: Instance, t: Trigger) -> bool:
    """Whether the trigger's head already has an image in ``i`` extending its binding."""
    from .hom import search

    head = [a.substitute(t.binding) for a in t.tgd.head]
    return next(search(head, i, free=set(t.tgd.existentials)), None) is not None


class ChaseRun:
    """A resumable breadth-first chase.

    Facts are processed in FIFO order, so the queue is level-ordered and the
    first derivation of any fact is the one with the smallest level.
    ``advance(level)`` fires every trigger whose body fact has level below
    ``level``; the instance then holds exactly the chase facts up to that
    level.
    """

    def __init__(self, i: Instance, tgds: Iterable[TGD], schema: Schema | None = None,
                 mode: ChaseMode = ChaseMode.OBLIVIOUS, max_facts: int | None = DEFAULT_MAX_FACTS,
                 gen: NullGenerator | None = None):
        self.tgds = check_lav(tgds)
        schema = schema if schema is not None else i.schema
        self.instance = Instance(schema)
        self.mode = ChaseMode(mode)
        self.max_facts = max_facts
        start = max((n.id for n in i.nulls()), default=0) + 1
        self.gen = gen or NullGenerator(start)
        self.steps = 0
        self.exhausted = False
        self._queue: deque[Fact] = deque()
        for f in i.sorted_facts():
            f0 = Fact(f.predicate, f.args, 0)
            if self.instance.add(f0):
                self._queue.append(f0)
        self._pending: deque[Trigger] = deque()

    @property
    def saturated(self) -> bool:
        """True once no trigger is left to fire: the instance is the full chase."""
        return not self._queue and not self._pending

    def _next_level(self) -> int | None:
        if self._pending:
            return self._pending[0].fact.level
        if self._queue:
            return self._queue[0].level
        return None

    def advance(self, level: int | None = None) -> bool:
        """Fire triggers on facts of level < ``level`` (all, if None).

        Returns False if the fact budget ran out first.
        """
        while True:
            nxt = self._next_level()
            if nxt is None or (level is not None and nxt >= level):
                return True
            if not self._pending:
                f = self._queue.popleft()
                self._pending.extend(triggers_for(f, self.tgds))
                continue
            if self.max_facts is not None and len(self.instance) >= self.max_facts:
                self.exhausted = True
                return False
            t = self._pending.popleft()
            if self.mode is ChaseMode.RESTRICTED and _head_satisfied(self.instance, t):
                continue
            self.steps += 1
            for f in sorted(chase_step(self.instance, t, self.gen), key=Fact.sort_key):
                if self.instance.add(f):
                    self._queue.append(f)

    def result(self) -> ChaseResult:
        status = ChaseStatus.TERMINATED if self.saturated else ChaseStatus.BUDGET_EXHAUSTED
        return ChaseResult(self.instance, status, self.steps)

    def prefix(self, level: int) -> Instance:
        return Instance(self.instance.schema, (f for f in self.instance if f.level <= level))


def chase(i: Instance, tgds: Iterable[TGD], cfg: ChaseConfig = ChaseConfig(),
          schema: Schema | None = None) -> ChaseResult:
    """Chase ``i`` with ``tgds`` until no trigger is left or a budget is hit.

    A ``max_level`` budget stops after the facts of that level are derived;
    the result is then ``budget_exhausted`` unless the chase had already
    saturated.
    """
    run = ChaseRun(i, tgds, schema, cfg.mode, cfg.max_facts)
    run.advance(cfg.max_level)
    return run.result()


def chase_to_level(i: Instance, tgds: Iterable[TGD], level: int, schema: Schema | None = None) -> Instance:
    """Facts of the oblivious chase whose level is at most ``level``."""
    if level < 0:
        raise ValueError("level must be >= 0")
    run = ChaseRun(i, tgds, schema, ChaseMode.OBLIVIOUS, max_facts=None)
    run.advance(level)
    return run.instance


def position_graph(tgds: Iterable[TGD]) -> nx.DiGraph:
    """Position dependency graph; edges carry ``special=True`` for existential targets.

    Special edges leave every body position, not only those of variables
    copied to the head: that is what makes acyclicity imply termination of
    the oblivious chase (``r(X,Y) -> r(X,Z)`` must be rejected).
    """
    g = nx.DiGraph()
    for tgd in tgds:
        body = tgd.body_atom
        exist = set(tgd.existentials)
        for i, x in enumerate(body.args):
            src = (body.predicate, i)
            g.add_node(src)
            for atom in tgd.head:
                for j, y in enumerate(atom.args):
                    dst = (atom.predicate, j)
                    if y in exist:
                        g.add_edge(src, dst, special=True)
                    elif y == x and not g.has_edge(src, dst):
                        g.add_edge(src, dst, special=False)
    return g


def is_weakly_acyclic(tgds: Iterable[TGD]) -> bool:
    g = position_graph(tgds)
    for comp in nx.strongly_connected_components(g):
        for u, v, special in g.subgraph(comp).edges(data="special"):
            if special:
                return False
    return True


def default_level_bound(tgds: Iterable[TGD]) -> int:
    """``|tgds| * (W+1)**W`` with W the widest predicate arity in ``tgds``."""
    tgds = list(tgds)
    if not tgds:
        return 0
    w = max(a.arity for t in tgds for a in t.body + t.head)
    return len(tgds) * (w + 1) ** w
