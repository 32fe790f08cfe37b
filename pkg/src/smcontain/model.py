"""Domain types: terms, atoms, facts, instances, schemas, TGDs, mappings, queries."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Null:
    id: int

    def __str__(self) -> str:
        return f"_{self.id}"


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Constant, Null, Variable]
Value = Union[Constant, Null]


def term_key(t: Term) -> tuple:
    """Sort key: constants (by name) before nulls (by id) before variables."""
    if isinstance(t, Constant):
        return (0, t.name, 0)
    if isinstance(t, Null):
        return (1, "", t.id)
    return (2, t.name, 0)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...]

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> list[Variable]:
        """Distinct variables in order of first occurrence."""
        return list(dict.fromkeys(a for a in self.args if isinstance(a, Variable)))

    def substitute(self, binding: Mapping[Term, Term]) -> Atom:
        return Atom(self.predicate, tuple(binding.get(a, a) for a in self.args))

    def sort_key(self) -> tuple:
        return (self.predicate, tuple(term_key(a) for a in self.args))

    def __str__(self) -> str:
        return f"{self.predicate}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Fact:
    """A ground atom tagged with the chase level at which it first appeared.

    The level is metadata: two facts with the same predicate and arguments
    are equal whatever their levels.
    """

    predicate: str
    args: tuple[Value, ...]
    level: int = field(default=0, compare=False)

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        for a in self.args:
            if not isinstance(a, (Constant, Null)):
                raise TypeError(f"fact argument {a!r} is not a constant or null")
        if self.level < 0:
            raise ValueError("fact level must be non-negative")

    @classmethod
    def from_atom(cls, atom: Atom, level: int = 0) -> Fact:
        return cls(atom.predicate, atom.args, level)

    @property
    def atom(self) -> Atom:
        return Atom(self.predicate, self.args)

    @property
    def arity(self) -> int:
        return len(self.args)

    def sort_key(self) -> tuple:
        return (self.predicate, tuple(term_key(a) for a in self.args))

    def __str__(self) -> str:
        return f"{self.predicate}({','.join(map(str, self.args))})"


class SchemaError(ValueError):
    pass


class Schema:
    """A set of relation names with arities. Immutable, hashable."""

    __slots__ = ("_rels",)

    def __init__(self, relations: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        rels = dict(relations.items() if isinstance(relations, Mapping) else relations)
        for name, arity in rels.items():
            if arity < 1:
                raise SchemaError(f"relation {name} must have arity >= 1, got {arity}")
        self._rels = rels

    @property
    def relations(self) -> dict[str, int]:
        return dict(self._rels)

    def arity(self, name: str) -> int | None:
        return self._rels.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self._rels

    def __iter__(self) -> Iterator[str]:
        return iter(self._rels)

    def __len__(self) -> int:
        return len(self._rels)

    def __or__(self, other: Schema) -> Schema:
        merged = dict(self._rels)
        for name, arity in other._rels.items():
            if merged.get(name, arity) != arity:
                raise SchemaError(f"relation {name} declared with arities {merged[name]} and {arity}")
            merged[name] = arity
        return Schema(merged)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Schema) and self._rels == other._rels

    def __hash__(self) -> int:
        return hash(frozenset(self._rels.items()))

    def __repr__(self) -> str:
        return f"Schema({self._rels!r})"


class Instance:
    """A finite set of facts over a schema.

    Facts are kept unique by predicate and arguments; re-adding a known fact
    keeps its original level. Iteration follows insertion order.
    """

    __slots__ = ("schema", "_facts")

    def __init__(self, schema: Schema, facts: Iterable[Fact] = ()):
        self.schema = schema
        self._facts: dict[Fact, Fact] = {}
        for f in facts:
            self._check(f)
            self._facts.setdefault(f, f)

    def _check(self, f: Fact) -> None:
        arity = self.schema.arity(f.predicate)
        if arity is None:
            raise SchemaError(f"unknown predicate {f.predicate} in fact {f}")
        if arity != f.arity:
            raise SchemaError(f"fact {f} has arity {f.arity}, {f.predicate} expects {arity}")

    def add(self, f: Fact) -> bool:
        """Insert ``f``; return False if an equal fact was already present."""
        if f in self._facts:
            return False
        self._check(f)
        self._facts[f] = f
        return True

    def __contains__(self, f: object) -> bool:
        if isinstance(f, Atom):
            f = Fact(f.predicate, f.args)
        return f in self._facts

    def get(self, f: Fact) -> Fact | None:
        return self._facts.get(f)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self._facts)

    def __len__(self) -> int:
        return len(self._facts)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Instance)
            and self.schema == other.schema
            and self._facts.keys() == other._facts.keys()
        )

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"Instance({', '.join(str(f) for f in self.sorted_facts())})"

    def sorted_facts(self) -> list[Fact]:
        return sorted(self._facts, key=Fact.sort_key)

    def values(self) -> set[Value]:
        return {a for f in self._facts for a in f.args}

    def nulls(self) -> set[Null]:
        return {a for f in self._facts for a in f.args if isinstance(a, Null)}

    def constants(self) -> set[Constant]:
        return {a for f in self._facts for a in f.args if isinstance(a, Constant)}

    def restrict(self, schema: Schema) -> Instance:
        """Facts whose predicate belongs to ``schema``, re-typed over it."""
        return Instance(schema, (f for f in self._facts if f.predicate in schema))

    def with_schema(self, schema: Schema) -> Instance:
        return Instance(schema, self._facts)

    def union(self, other: Instance) -> Instance:
        out = Instance(self.schema | other.schema, self._facts)
        for f in other:
            out.add(f)
        return out

    def max_level(self) -> int:
        return max((f.level for f in self._facts), default=0)


class NullGenerator:
    """Issues fresh labelled nulls with strictly increasing ids."""

    def __init__(self, start: int = 1):
        self._counter = itertools.count(start)

    def fresh(self) -> Null:
        return Null(next(self._counter))


def fresh_null(gen: NullGenerator) -> Null:
    return gen.fresh()


@dataclass(frozen=True)
class TGD:
    """A tuple-generating dependency ``body -> head``.

    Head variables that do not occur in the body are existential. The body is
    kept as a tuple so that non-LAV input survives parsing and can be reported
    by :func:`validate_mapping`; everything downstream requires one body atom.
    """

    body: tuple[Atom, ...]
    head: tuple[Atom, ...]
    pos: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if isinstance(self.body, Atom):
            object.__setattr__(self, "body", (self.body,))
        else:
            object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "head", tuple(self.head))

    @property
    def is_lav(self) -> bool:
        return len(self.body) == 1

    @property
    def body_atom(self) -> Atom:
        if not self.is_lav:
            raise ValueError(f"TGD {self} is not LAV")
        return self.body[0]

    @property
    def frontier(self) -> list[Variable]:
        return list(dict.fromkeys(v for a in self.body for v in a.variables()))

    @property
    def existentials(self) -> list[Variable]:
        bvars = set(self.frontier)
        return list(dict.fromkeys(v for a in self.head for v in a.variables() if v not in bvars))

    def predicates(self) -> set[str]:
        return {a.predicate for a in self.body + self.head}

    def __str__(self) -> str:
        return f"{', '.join(map(str, self.body))} -> {', '.join(map(str, self.head))}"


@dataclass(frozen=True)
class SchemaMapping:
    source: Schema
    target: Schema
    st_tgds: tuple[TGD, ...] = ()
    t_tgds: tuple[TGD, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "st_tgds", tuple(self.st_tgds))
        object.__setattr__(self, "t_tgds", tuple(self.t_tgds))

    @property
    def schema(self) -> Schema:
        """Union of source and target schemas, the schema the chase runs over."""
        return self.source | self.target

    @property
    def tgds(self) -> tuple[TGD, ...]:
        return self.st_tgds + self.t_tgds


@dataclass(frozen=True)
class ConjunctiveQuery:
    head_vars: tuple[Variable, ...]
    body: tuple[Atom, ...]
    name: str = "q"

    def __post_init__(self):
        object.__setattr__(self, "head_vars", tuple(self.head_vars))
        object.__setattr__(self, "body", tuple(self.body))
        if not self.body:
            raise ValueError("query body must be nonempty")
        body_vars = {v for a in self.body for v in a.variables()}
        unsafe = [v for v in self.head_vars if v not in body_vars]
        if unsafe:
            raise ValueError(f"unsafe head variable(s): {', '.join(map(str, unsafe))}")

    @property
    def arity(self) -> int:
        return len(self.head_vars)

    def __str__(self) -> str:
        return f"{self.name}({','.join(map(str, self.head_vars))}) :- {', '.join(map(str, self.body))}."


@dataclass(frozen=True)
class Violation:
    kind: str  # lav | arity | vocabulary | term | schema
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: [{self.kind}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


def _tgd_location(block: str, idx: int, tgd: TGD) -> str:
    loc = f"{block}[{idx + 1}]"
    if tgd.pos is not None:
        loc += f" (line {tgd.pos[0]}, col {tgd.pos[1]})"
    return loc


def _check_tgd(tgd: TGD, loc: str, body_schema: Schema, body_side: str,
               head_schema: Schema, head_side: str, out: list[Violation]) -> None:
    if not tgd.is_lav:
        out.append(Violation("lav", loc, f"body has {len(tgd.body)} atoms, LAV TGDs need exactly one"))
    if not tgd.head:
        out.append(Violation("lav", loc, "head is empty"))
    for atoms, schema, side in ((tgd.body, body_schema, body_side), (tgd.head, head_schema, head_side)):
        for atom in atoms:
            arity = schema.arity(atom.predicate)
            if arity is None:
                out.append(Violation("vocabulary", loc, f"{atom.predicate} is not a {side} predicate"))
            elif arity != atom.arity:
                out.append(Violation("arity", loc, f"{atom} has {atom.arity} arguments, {atom.predicate}/{arity} declared"))
            for t in atom.args:
                if not isinstance(t, Variable):
                    out.append(Violation("term", loc, f"{atom} uses {t}; dependencies may only contain variables"))


def validate_mapping(m: SchemaMapping) -> ValidationReport:
    """Collect every well-formedness violation of ``m``; empty report means valid."""
    out: list[Violation] = []
    shared = sorted(set(m.source) & set(m.target))
    for name in shared:
        out.append(Violation("schema", "schemas", f"{name} is declared in both source and target"))
    for i, tgd in enumerate(m.st_tgds):
        _check_tgd(tgd, _tgd_location("st", i, tgd), m.source, "source", m.target, "target", out)
    for i, tgd in enumerate(m.t_tgds):
        _check_tgd(tgd, _tgd_location("t", i, tgd), m.target, "target", m.target, "target", out)
    return ValidationReport(out)


def check_lav(tgds: Iterable[TGD]) -> list[TGD]:
    tgds = list(tgds)
    for t in tgds:
        if not t.is_lav:
            raise ValueError(f"not a LAV TGD: {t}")
        if any(not isinstance(a, Variable) for a in t.body_atom.args + tuple(x for h in t.head for x in h.args)):
            raise ValueError(f"TGD {t} contains non-variable terms")
    return tgds
