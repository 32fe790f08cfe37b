"""Canonical single-fact source instances used by the containment test."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .model import Constant, Fact, Instance, SchemaMapping

DUMMY_PREFIX = "z"


def restricted_growth_strings(n: int, max_blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """All RGS a_0..a_{n-1} (a_0 = 0, a_i <= 1 + max(a_<i)) in lexicographic order.

    Each string encodes one set partition of ``range(n)``: positions with the
    same symbol share a block. ``max_blocks`` caps the number of blocks.
    """
    if n == 0:
        yield ()
        return
    cap = n if max_blocks is None else max_blocks
    if cap < 1:
        return
    a = [0] * n

    def rec(k: int, top: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(a)
            return
        for v in range(min(top + 2, cap)):
            a[k] = v
            yield from rec(k + 1, max(top, v))

    yield from rec(1, 0)


def rgs_blocks(rgs: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    blocks: dict[int, list[int]] = {}
    for pos, b in enumerate(rgs):
        blocks.setdefault(b, []).append(pos)
    return tuple(tuple(v) for _, v in sorted(blocks.items()))


@dataclass(frozen=True)
class Dummy:
    instance: Instance
    predicate: str
    partition: tuple[tuple[int, ...], ...]

    @property
    def fact(self) -> Fact:
        return next(iter(self.instance))


@dataclass(frozen=True)
class DummySet:
    dummies: tuple[Dummy, ...]

    @property
    def instances(self) -> list[Instance]:
        return [d.instance for d in self.dummies]

    def __len__(self) -> int:
        return len(self.dummies)

    def __iter__(self):
        return iter(self.dummies)


def st_body_predicates(m: SchemaMapping) -> list[str]:
    """Source predicates used in s-t bodies, in order of first use."""
    return list(dict.fromkeys(a.predicate for t in m.st_tgds for a in t.body))


def dummy_instances(m: SchemaMapping, dedup: bool = True) -> DummySet:
    """One single-fact instance per equality pattern of each s-t body predicate.

    Values are fresh constants ``z1, z2, ...`` numbered by first occurrence.
    With ``dedup=False`` every tuple over ``z1..zn`` is emitted instead,
    renamed copies included.
    """
    out = []
    for pred in st_body_predicates(m):
        n = m.source.arity(pred)
        if dedup:
            patterns = restricted_growth_strings(n)
        else:
            patterns = _all_tuples(n)
        for rgs in patterns:
            args = tuple(Constant(f"{DUMMY_PREFIX}{b + 1}") for b in rgs)
            inst = Instance(m.source, [Fact(pred, args)])
            out.append(Dummy(inst, pred, rgs_blocks(rgs)))
    return DummySet(tuple(out))


def _all_tuples(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(n), repeat=n)


def bell(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
