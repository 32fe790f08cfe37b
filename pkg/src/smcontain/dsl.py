"""Text formats for mappings, instances and queries.

Mapping files::

    source { r1/2; }
    target { r2/2; r3/2; }
    st { r1(X,Y) -> r2(Y,Z); }
    t  { r2(X,Y) -> r3(Z,X); }

Instance files hold facts ``r1(a,b).``; ``_k`` denotes labelled null ``k``.
Query files hold one rule ``q(X) :- r2(X,Y), r3(Y,X).``.  Identifiers that
start with an uppercase letter are variables, anything else is a constant
(numerals included).  ``--`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .model import (
    TGD,
    Atom,
    ConjunctiveQuery,
    Constant,
    Fact,
    Instance,
    Null,
    Schema,
    SchemaMapping,
    ValidationReport,
    Variable,
    validate_mapping,
)


@dataclass(frozen=True)
class SourceText:
    content: str
    origin: str = "<inline>"

    @classmethod
    def from_path(cls, path: str | Path) -> SourceText:
        p = Path(path)
        return cls(p.read_text(), str(p))


class DslError(ValueError):
    def __init__(self, message: str, origin: str = "<inline>", line: int | None = None, col: int | None = None):
        self.message = message
        self.origin = origin
        self.line = line
        self.col = col
        where = origin if line is None else f"{origin}:{line}:{col}"
        super().__init__(f"{where}: {message}")


class MappingValidationError(DslError):
    def __init__(self, report: ValidationReport, origin: str):
        self.report = report
        lines = "; ".join(str(v) for v in report)
        super().__init__(f"invalid mapping: {lines}", origin)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<null>_\d+)
  | (?P<ident>[A-Za-z0-9][A-Za-z0-9_']*)
  | (?P<arrow>->)
  | (?P<neck>:-)
  | (?P<punct>[{}();,./])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: SourceText) -> list[Token]:
    toks: list[Token] = []
    line, line_start, pos = 1, 0, 0
    s = text.content
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if m is None:
            raise DslError(f"unexpected character {s[pos]!r}", text.origin, line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            val = m.group()
            toks.append(Token(val if kind in ("punct", "arrow", "neck") else kind, val, line, pos - line_start + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: SourceText):
        self.origin = text.origin
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> DslError:
        tok = tok or self.tok
        return DslError(msg, self.origin, tok.line, tok.col)

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            got = self.tok.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            tok = self.tok
            self.i += 1
            return tok
        return None

    def term(self):
        tok = self.tok
        if tok.kind == "null":
            self.i += 1
            return Null(int(tok.text[1:]))
        if tok.kind == "ident":
            self.i += 1
            return Variable(tok.text) if tok.text[0].isupper() else Constant(tok.text)
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def atom(self) -> tuple[Atom, Token]:
        name = self.expect("ident")
        if name.text[0].isupper():
            raise self.error(f"predicate names must start lowercase: {name.text}", name)
        self.expect("(")
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return Atom(name.text, tuple(args)), name

    def atoms(self) -> list[tuple[Atom, Token]]:
        out = [self.atom()]
        while self.accept(","):
            out.append(self.atom())
        return out

    def decls(self, keyword: str) -> dict[str, int]:
        self.expect("ident", keyword)
        self.expect("{")
        rels: dict[str, int] = {}
        while not self.at("}"):
            name = self.expect("ident")
            self.expect("/")
            n = self.expect("ident")
            if not n.text.isdigit():
                raise self.error(f"expected an arity, found {n.text!r}", n)
            if name.text in rels:
                raise self.error(f"relation {name.text} declared twice", name)
            if int(n.text) < 1:
                raise self.error(f"relation {name.text} must have arity >= 1", n)
            rels[name.text] = int(n.text)
            self.expect(";")
        self.expect("}")
        return rels

    def tgds(self, keyword: str) -> list[TGD]:
        self.expect("ident", keyword)
        self.expect("{")
        out = []
        while not self.at("}"):
            body = self.atoms()
            self.expect("->")
            head = self.atoms()
            self.expect(";")
            first = body[0][1]
            out.append(TGD(tuple(a for a, _ in body), tuple(a for a, _ in head), pos=(first.line, first.col)))
        self.expect("}")
        return out


def parse_mapping(text: SourceText | str, validate: bool = True) -> SchemaMapping:
    """Parse a mapping file; raises DslError on syntax or validation failure.

    Bodies with several atoms are accepted syntactically so validation can
    report them as LAV violations with their position.
    """
    if isinstance(text, str):
        text = SourceText(text)
    p = _Parser(text)
    source = p.decls("source")
    target = p.decls("target")
    st = p.tgds("st")
    t = p.tgds("t")
    p.expect("eof")
    m = SchemaMapping(Schema(source), Schema(target), tuple(st), tuple(t))
    if validate:
        report = validate_mapping(m)
        if not report.ok:
            raise MappingValidationError(report, text.origin)
    return m


def _check_atom(p: _Parser, atom: Atom, tok: Token, schema: Schema) -> None:
    arity = schema.arity(atom.predicate)
    if arity is None:
        raise p.error(f"unknown predicate {atom.predicate}", tok)
    if arity != atom.arity:
        raise p.error(f"{atom.predicate} expects {arity} arguments, got {atom.arity}", tok)


def parse_instance(text: SourceText | str, schema: Schema) -> Instance:
    if isinstance(text, str):
        text = SourceText(text)
    p = _Parser(text)
    inst = Instance(schema)
    while not p.at("eof"):
        atom, tok = p.atom()
        p.expect(".")
        _check_atom(p, atom, tok, schema)
        for a in atom.args:
            if isinstance(a, Variable):
                raise p.error(f"variable {a} is not allowed in an instance", tok)
        inst.add(Fact(atom.predicate, atom.args, 0))
    return inst


def parse_query(text: SourceText | str, schema: Schema) -> ConjunctiveQuery:
    if isinstance(text, str):
        text = SourceText(text)
    p = _Parser(text)
    name = p.expect("ident")
    if name.text[0].isupper():
        raise p.error("query name must start lowercase", name)
    p.expect("(")
    head: list[Variable] = []
    if not p.at(")"):
        while True:
            tok = p.tok
            t = p.term()
            if not isinstance(t, Variable):
                raise p.error(f"query head must list variables, found {tok.text!r}", tok)
            head.append(t)
            if not p.accept(","):
                break
    p.expect(")")
    p.expect(":-")
    body = p.atoms()
    p.expect(".")
    p.expect("eof")
    for atom, tok in body:
        _check_atom(p, atom, tok, schema)
        for a in atom.args:
            if isinstance(a, Null):
                raise p.error(f"null {a} is not allowed in a query", tok)
    body_vars = {v for a, _ in body for v in a.variables()}
    for v in head:
        if v not in body_vars:
            raise p.error(f"unsafe head variable {v}", name)
    return ConjunctiveQuery(tuple(head), tuple(a for a, _ in body), name.text)


def serialize_instance(i: Instance, levels: bool = False) -> str:
    """Canonical text form: one fact per line, sorted by predicate then arguments.

    With ``levels`` each line carries a ``-- level k`` comment, which
    :func:`parse_instance` ignores.
    """
    lines = []
    for f in i.sorted_facts():
        s = f"{f}."
        if levels:
            s += f"  -- level {f.level}"
        lines.append(s + "\n")
    return "".join(lines)


def serialize_mapping(m: SchemaMapping) -> str:
    def decls(s: Schema) -> str:
        return " ".join(f"{n}/{a};" for n, a in s.relations.items())

    def tgds(ts) -> str:
        return " ".join(f"{t};" for t in ts)

    return (
        f"source {{ {decls(m.source)} }}\n"
        f"target {{ {decls(m.target)} }}\n"
        f"st {{ {tgds(m.st_tgds)} }}\n"
        f"t {{ {tgds(m.t_tgds)} }}\n"
    )
