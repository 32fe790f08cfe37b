"""Containment and equivalence of schema mappings via dummy instances."""
from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .chase import DEFAULT_MAX_FACTS, ChaseConfig, ChaseMode, ChaseRun, chase, default_level_bound, is_weakly_acyclic
from .dummies import Dummy, dummy_instances
from .hom import Homomorphism, find_homomorphism
from .model import Instance, SchemaError, SchemaMapping, validate_mapping


class Outcome(str, enum.Enum):
    CONTAINED = "contained"
    NOT_CONTAINED = "not_contained"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ContainmentConfig:
    level_bound: int | str = "auto"
    chase_budget: ChaseConfig = ChaseConfig()
    # fact budget for the right-hand (truncated) chase
    right_max_facts: int | None = DEFAULT_MAX_FACTS
    deepening_step: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.deepening_step < 1:
            raise ValueError("deepening_step must be >= 1")
        if self.level_bound != "auto" and (not isinstance(self.level_bound, int) or self.level_bound < 0):
            raise ValueError(f"level_bound must be 'auto' or a natural number, got {self.level_bound!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class DummyWitness:
    dummy: Instance
    left_size: int
    right_level: int | None
    homomorphism: Homomorphism | None
    right_saturated: bool = False
    left_chase: Instance | None = None
    right_chase: Instance | None = None
    elapsed_ms: float = 0.0
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.homomorphism is not None


@dataclass
class Verdict:
    outcome: Outcome
    witnesses: list[DummyWitness] = field(default_factory=list)
    bound_used: int | None = None
    reason: str | None = None
    bounded: bool = False
    counterexample: Instance | None = None
    weakly_acyclic: bool | None = None

    @property
    def contained(self) -> bool:
        return self.outcome is Outcome.CONTAINED

    @property
    def failing(self) -> DummyWitness | None:
        return next((w for w in self.witnesses if not w.passed), None)


@dataclass
class EquivalenceVerdict:
    forward: Verdict
    backward: Verdict | None

    @property
    def outcome(self) -> Outcome:
        vs = [self.forward] + ([self.backward] if self.backward else [])
        if any(v.outcome is Outcome.NOT_CONTAINED for v in vs):
            return Outcome.NOT_CONTAINED
        if any(v.outcome is Outcome.INCONCLUSIVE for v in vs):
            return Outcome.INCONCLUSIVE
        return Outcome.CONTAINED

    @property
    def equivalent(self) -> bool:
        return self.outcome is Outcome.CONTAINED

    @property
    def failing_direction(self) -> str | None:
        """``"forward"`` (m in m2 fails) or ``"backward"`` (m2 in m fails)."""
        if self.forward.outcome is Outcome.NOT_CONTAINED:
            return "forward"
        if self.backward is not None and self.backward.outcome is Outcome.NOT_CONTAINED:
            return "backward"
        return None


def _check_pair(m: SchemaMapping, m2: SchemaMapping) -> None:
    for name, mm in (("left", m), ("right", m2)):
        report = validate_mapping(mm)
        if not report.ok:
            raise ValueError(f"{name} mapping is invalid: " + "; ".join(map(str, report)))
    if m.source != m2.source or m.target != m2.target:
        raise SchemaError("mappings must share source and target schemas")


def resolve_bound(m2: SchemaMapping, cfg: ContainmentConfig) -> int:
    return default_level_bound(m2.tgds) if cfg.level_bound == "auto" else int(cfg.level_bound)


def _deepening_levels(bound: int, step: int) -> list[int]:
    levels = list(range(step, bound, step))
    levels.append(bound)
    return levels


def check_dummy(d: Instance, m: SchemaMapping, m2: SchemaMapping, bound: int,
                cfg: ContainmentConfig) -> DummyWitness:
    """Test chase_m(d) -> chase_m2(d) with the right chase cut at ``bound`` levels.

    Returns a witness with ``homomorphism=None`` when no homomorphism exists
    into the prefix; ``note`` is set when a chase budget ran out.
    """
    t0 = time.perf_counter()
    schema = m.schema
    budget = cfg.chase_budget
    left = chase(d, m.tgds, ChaseConfig(ChaseMode.OBLIVIOUS, budget.max_facts, budget.max_level), schema)
    if not left.terminated:
        return DummyWitness(d, len(left.instance), None, None, left_chase=left.instance,
                            elapsed_ms=(time.perf_counter() - t0) * 1000,
                            note="left chase not shown finite")
    right = ChaseRun(d, m2.tgds, schema, ChaseMode.OBLIVIOUS, cfg.right_max_facts)
    level = 0
    for level in _deepening_levels(bound, cfg.deepening_step):
        ok = right.advance(level)
        h = find_homomorphism(left.instance, right.instance)
        if h is not None:
            return DummyWitness(d, len(left.instance), level, h, right.saturated, left.instance,
                                right.instance, (time.perf_counter() - t0) * 1000)
        if not ok:
            return DummyWitness(d, len(left.instance), level, None, False, left.instance, right.instance,
                                (time.perf_counter() - t0) * 1000, note="right chase budget exhausted")
        if right.saturated:
            # the prefix already is the whole chase, hence also its bound-level prefix
            level = bound
            break
    return DummyWitness(d, len(left.instance), level, None, right.saturated, left.instance,
                        right.instance, (time.perf_counter() - t0) * 1000)


def check_containment(m: SchemaMapping, m2: SchemaMapping, cfg: ContainmentConfig = ContainmentConfig()) -> Verdict:
    """Decide whether ``m`` is contained in ``m2``.

    Every dummy instance of ``m`` is chased with ``m``'s dependencies, and
    the result must map homomorphically into a level prefix of its chase
    under ``m2``, deepened up to the bound. Contained is always sound;
    NotContained is exact whenever the right chase saturated below the bound
    and otherwise relies on the bound being a true horizon.
    """
    _check_pair(m, m2)
    bound = resolve_bound(m2, cfg)
    dummies: list[Dummy] = list(dummy_instances(m))
    wa = is_weakly_acyclic(m.tgds)

    if cfg.threads > 1 and len(dummies) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            results = list(pool.map(lambda d: check_dummy(d.instance, m, m2, bound, cfg), dummies))
    else:
        results = []
        for d in dummies:
            w = check_dummy(d.instance, m, m2, bound, cfg)
            results.append(w)
            if not w.passed:
                break

    witnesses: list[DummyWitness] = []
    for w in results:
        witnesses.append(w)
        if w.passed:
            continue
        if w.note is not None:
            return Verdict(Outcome.INCONCLUSIVE, witnesses, bound, w.note, weakly_acyclic=wa)
        return Verdict(Outcome.NOT_CONTAINED, witnesses, bound, counterexample=w.dummy, weakly_acyclic=wa)
    return Verdict(Outcome.CONTAINED, witnesses, bound, weakly_acyclic=wa)


def check_equivalence(m: SchemaMapping, m2: SchemaMapping, cfg: ContainmentConfig = ContainmentConfig()) -> EquivalenceVerdict:
    fwd = check_containment(m, m2, cfg)
    if fwd.outcome is Outcome.NOT_CONTAINED:
        return EquivalenceVerdict(fwd, None)
    return EquivalenceVerdict(fwd, check_containment(m2, m, cfg))
