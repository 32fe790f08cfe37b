"""Command-line front end: ``smcontain <command> ...``.

Exit codes: 0 success / contained / equivalent / found, 1 not contained /
absent / invalid, 2 inconclusive, 3 input error, 4 chase budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .chase import DEFAULT_MAX_FACTS, ChaseConfig, ChaseMode, chase, is_weakly_acyclic
from .containment import ContainmentConfig, DummyWitness, Outcome, Verdict, check_containment, check_equivalence
from .dsl import DslError, SourceText, parse_instance, parse_mapping, parse_query, serialize_instance
from .dummies import dummy_instances
from .hom import find_homomorphism
from .model import SchemaError, validate_mapping
from .oracle import certain_answers, oracle_containment, separating_query

JSON_FORMAT = 1

EXIT_OK, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4

_OUTCOME_EXIT = {Outcome.CONTAINED: EXIT_OK, Outcome.NOT_CONTAINED: EXIT_NO, Outcome.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class InputError(Exception):
    pass


def _read(path: str) -> SourceText:
    try:
        return SourceText.from_path(path)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e


def _mapping(path: str):
    return parse_mapping(_read(path))


def _emit_json(out, command: str, key: str, value, witnesses=(), bound_used=None, timings=None, **extra) -> None:
    obj = {"format": JSON_FORMAT, "command": command, key: value, "witnesses": list(witnesses),
           "bound_used": bound_used, "timings_ms": timings or {}}
    obj.update(extra)
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _witness_json(w: DummyWitness) -> dict:
    return {
        "dummy": serialize_instance(w.dummy).strip(),
        "left_chase_size": w.left_size,
        "right_level": w.right_level,
        "right_saturated": w.right_saturated,
        "homomorphism": None if w.homomorphism is None else
        {str(k): str(v) for k, v in sorted(w.homomorphism.nulls_only().items(), key=lambda kv: str(kv[0]))},
        "note": w.note,
    }


def _timings(ws) -> dict:
    return {f"dummy_{n + 1}": round(w.elapsed_ms, 3) for n, w in enumerate(ws)}


def _verdict_text(v: Verdict, out) -> None:
    label = {Outcome.CONTAINED: "CONTAINED", Outcome.NOT_CONTAINED: "NOT CONTAINED",
             Outcome.INCONCLUSIVE: "INCONCLUSIVE"}[v.outcome]
    if v.bounded:
        label += " (bounded)"
    if v.reason:
        label += f": {v.reason}"
    out.write(label + "\n")
    if v.bound_used is not None:
        out.write(f"bound used: {v.bound_used}\n")
    if v.outcome is Outcome.NOT_CONTAINED and v.counterexample is not None:
        kind = "separating instance" if v.bounded else "failing dummy"
        out.write(f"{kind}:\n{serialize_instance(v.counterexample)}")


def cmd_validate(args, out, err) -> int:
    m = parse_mapping(_read(args.mapping), validate=False)
    report = validate_mapping(m)
    if args.json:
        _emit_json(out, "validate", "result", {"valid": report.ok, "violations": [str(v) for v in report]},
                   weakly_acyclic=is_weakly_acyclic(m.tgds) if report.ok else None)
    elif report.ok:
        out.write("VALID\n")
    else:
        for v in report:
            out.write(f"{v}\n")
    return EXIT_OK if report.ok else EXIT_NO


def cmd_chase(args, out, err) -> int:
    m = _mapping(args.mapping)
    inst = parse_instance(_read(args.instance), m.source)
    cfg = ChaseConfig(ChaseMode(args.mode), args.max_facts, args.levels)
    t0 = time.perf_counter()
    res = chase(inst, m.tgds, cfg, m.schema)
    ms = (time.perf_counter() - t0) * 1000
    if args.json:
        _emit_json(out, "chase", "result", {"status": res.status.value, "steps": res.steps,
                                             "instance": serialize_instance(res.instance, levels=True)},
                   timings={"chase": round(ms, 3)})
    else:
        out.write(serialize_instance(res.instance, levels=True))
        if not res.terminated:
            err.write(f"chase stopped by budget after {res.steps} steps\n")
    return EXIT_OK if res.terminated else EXIT_BUDGET


def cmd_dummies(args, out, err) -> int:
    m = _mapping(args.mapping)
    ds = dummy_instances(m, dedup=not args.no_dedup)
    if args.json:
        _emit_json(out, "dummies", "result", [serialize_instance(d.instance).strip() for d in ds])
        return EXIT_OK
    for k, d in enumerate(ds, 1):
        out.write(f"--- {k} ---\n")
        out.write(serialize_instance(d.instance))
    return EXIT_OK


def cmd_hom(args, out, err) -> int:
    m = _mapping(args.schema)
    a = parse_instance(_read(args.inst_a), m.schema)
    b = parse_instance(_read(args.inst_b), m.schema)
    h = find_homomorphism(a, b)
    if args.json:
        _emit_json(out, "hom", "result", None if h is None else {str(k): str(v) for k, v in h.nulls_only().items()})
    else:
        out.write("ABSENT\n" if h is None else f"{h}\n")
    return EXIT_OK if h is not None else EXIT_NO


def _containment_cfg(args) -> ContainmentConfig:
    bound = args.bound if args.bound == "auto" else int(args.bound)
    return ContainmentConfig(level_bound=bound, chase_budget=ChaseConfig(max_facts=args.max_facts),
                             right_max_facts=args.max_facts, threads=args.threads)


def cmd_contains(args, out, err) -> int:
    m, m2 = _mapping(args.mapping_a), _mapping(args.mapping_b)
    v = check_containment(m, m2, _containment_cfg(args))
    if args.json:
        _emit_json(out, "contains", "verdict", v.outcome.value, map(_witness_json, v.witnesses),
                   v.bound_used, _timings(v.witnesses), reason=v.reason, weakly_acyclic=v.weakly_acyclic)
    else:
        _verdict_text(v, out)
    return _OUTCOME_EXIT[v.outcome]


def cmd_equiv(args, out, err) -> int:
    m, m2 = _mapping(args.mapping_a), _mapping(args.mapping_b)
    ev = check_equivalence(m, m2, _containment_cfg(args))
    label = {Outcome.CONTAINED: "EQUIVALENT", Outcome.NOT_CONTAINED: "NOT EQUIVALENT",
             Outcome.INCONCLUSIVE: "INCONCLUSIVE"}[ev.outcome]
    if args.json:
        dirs = {"forward": ev.forward, "backward": ev.backward}
        _emit_json(out, "equiv", "verdict", "equivalent" if ev.equivalent else ev.outcome.value,
                   [{"direction": k, "outcome": d.outcome.value, "dummies": [_witness_json(w) for w in d.witnesses]}
                    for k, d in dirs.items() if d is not None],
                   ev.forward.bound_used,
                   {k: _timings(d.witnesses) for k, d in dirs.items() if d is not None},
                   failing_direction=ev.failing_direction)
    else:
        out.write(label + "\n")
        fd = ev.failing_direction
        if fd is not None:
            names = (args.mapping_a, args.mapping_b) if fd == "forward" else (args.mapping_b, args.mapping_a)
            out.write(f"failing direction: {names[0]} in {names[1]}\n")
            _verdict_text(ev.forward if fd == "forward" else ev.backward, out)
    return _OUTCOME_EXIT[ev.outcome]


def _fmt_tuple(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def cmd_certain(args, out, err) -> int:
    m = _mapping(args.mapping)
    inst = parse_instance(_read(args.instance), m.source)
    q = parse_query(_read(args.query), m.target)
    ans = certain_answers(q, inst, m, ChaseConfig(max_facts=args.max_facts))
    if args.json:
        _emit_json(out, "certain", "result", [[str(v) for v in t] for t in ans.sorted()],
                   lower_bound=ans.lower_bound)
    else:
        for t in ans.sorted():
            out.write(_fmt_tuple(t) + "\n")
        if ans.lower_bound:
            err.write("chase budget exhausted: answers are a lower bound\n")
    return EXIT_OK


def cmd_oracle(args, out, err) -> int:
    m, m2 = _mapping(args.mapping_a), _mapping(args.mapping_b)
    domain = [c.strip() for c in args.domain.split(",") if c.strip()]
    budget = ChaseConfig(max_facts=args.max_facts_chase)
    v = oracle_containment(m, m2, args.max_facts, domain, budget)
    sep = None
    if v.outcome is Outcome.NOT_CONTAINED:
        sep = separating_query(m, m2, v.counterexample, budget)
    if args.json:
        _emit_json(out, "oracle", "verdict", v.outcome.value,
                   [] if v.counterexample is None else [serialize_instance(v.counterexample).strip()],
                   bounded=True, separating_query=None if sep is None else f"{sep[0]}  -- {_fmt_tuple(sep[1])}")
    else:
        _verdict_text(v, out)
        if sep is not None:
            out.write(f"separating query: {sep[0]}\nanswer certain only on the left: {_fmt_tuple(sep[1])}\n")
    return _OUTCOME_EXIT[v.outcome]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smcontain", description="Containment of LAV schema mappings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single JSON object")
    common.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common])
    s.add_argument("mapping")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("chase", parents=[common])
    s.add_argument("mapping")
    s.add_argument("instance")
    s.add_argument("--levels", type=int, default=None)
    s.add_argument("--mode", choices=[m.value for m in ChaseMode], default="oblivious")
    s.add_argument("--max-facts", type=int, default=DEFAULT_MAX_FACTS)
    s.set_defaults(func=cmd_chase)

    s = sub.add_parser("dummies", parents=[common])
    s.add_argument("mapping")
    s.add_argument("--no-dedup", action="store_true", help="also emit renamed copies")
    s.set_defaults(func=cmd_dummies)

    s = sub.add_parser("hom", parents=[common])
    s.add_argument("inst_a")
    s.add_argument("inst_b")
    s.add_argument("--schema", required=True, help="mapping file whose source+target schema types both instances")
    s.set_defaults(func=cmd_hom)

    for name, fn in (("contains", cmd_contains), ("equiv", cmd_equiv)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("mapping_a")
        s.add_argument("mapping_b")
        s.add_argument("--bound", default="auto", help="'auto' or a level count")
        s.add_argument("--max-facts", type=int, default=DEFAULT_MAX_FACTS)
        s.set_defaults(func=fn)

    s = sub.add_parser("certain", parents=[common])
    s.add_argument("mapping")
    s.add_argument("instance")
    s.add_argument("query")
    s.add_argument("--max-facts", type=int, default=DEFAULT_MAX_FACTS)
    s.set_defaults(func=cmd_certain)

    s = sub.add_parser("oracle", parents=[common])
    s.add_argument("mapping_a")
    s.add_argument("mapping_b")
    s.add_argument("--max-facts", type=int, default=2, help="largest source instance to enumerate")
    s.add_argument("--domain", default="a,b")
    s.add_argument("--max-facts-chase", type=int, default=DEFAULT_MAX_FACTS)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.command in ("contains", "equiv") and args.bound != "auto" and not args.bound.isdigit():
        err.write(f"--bound must be 'auto' or a natural number, got {args.bound!r}\n")
        return EXIT_INPUT
    try:
        return args.func(args, out, err)
    except (DslError, InputError, SchemaError, ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
