"""Controllability checking and supremal controllable sublanguage synthesis."""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import (AutomatonError, Generator, StateMap, coreachable,
                        enabled_ids, is_trim, restrict, sync)


class SynthesisError(AutomatonError):
    """Precondition of a synthesis operation is violated."""


@dataclass(frozen=True)
class SupconResult:
    supervisor: Generator
    plant_map: tuple[int, ...]
    spec_map: tuple[int, ...]
    # per supervisor state: controllable events the plant enables there but
    # the supervisor does not
    disabled: tuple[frozenset[int], ...]

    @property
    def is_empty(self) -> bool:
        return self.supervisor.is_empty


def _require_subalphabet(plant: Generator, other: Generator, what: str) -> None:
    extra = other.event_ids - plant.event_ids
    if extra:
        raise SynthesisError(f"{what} {other.name!r} uses events outside the plant alphabet: {sorted(extra)}")
    for eid in other.event_ids:
        if other.event(eid).flags() != plant.event(eid).flags():
            raise SynthesisError(f"event {eid}: flags differ between plant and {what}")


def is_controllable(plant: Generator, sup: Generator) -> tuple[bool, tuple[tuple[int, int], int] | None]:
    """Check that ``sup`` never disables an uncontrollable event the plant allows.

    Returns ``(True, None)`` or ``(False, ((sup_state, plant_state), event))``
    for the first offending pair found in breadth-first order.
    """
    _require_subalphabet(plant, sup, "supervisor")
    if sup.is_empty or plant.is_empty:
        return True, None
    unc = [e.id for e in plant.events if not e.controllable]
    own = sup.event_ids
    start = (sup.initial, plant.initial)
    seen = {start}
    queue = [start]
    for x, q in queue:
        for e in unc:
            if plant.step(q, e) is not None and e in own and sup.step(x, e) is None:
                return False, ((x, q), e)
        for e, q2 in plant.out_edges(q):
            x2 = sup.step(x, e) if e in own else x
            if x2 is None:
                continue
            nxt = (x2, q2)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True, None


def _product(plant: Generator, spec: Generator) -> tuple[Generator, StateMap]:
    return sync([plant, spec], name=f"{plant.name}x{spec.name}")


def _fixpoint(plant: Generator, prod: Generator, pmap: StateMap) -> frozenset[int]:
    """Largest controllable, coreachable set of product states."""
    unc = [e.id for e in plant.events if not e.controllable]
    good = set(range(prod.state_count))
    changed = True
    while changed and good:
        changed = False
        # uncontrollable events allowed by the plant must stay available
        for s in sorted(good):
            q = pmap[s][0]
            for e in unc:
                if plant.step(q, e) is None:
                    continue
                t = prod.step(s, e)
                if t is None or t not in good:
                    good.discard(s)
                    changed = True
                    break
        # coreachability inside the surviving states
        live = {s for s in good if s in prod.marked}
        stack = list(live)
        while stack:
            t = stack.pop()
            for s, _ in prod.in_edges(t):
                if s in good and s not in live:
                    live.add(s)
                    stack.append(s)
        if live != good:
            good = live
            changed = True
    return frozenset(good)


def supcon(plant: Generator, spec: Generator, name: str | None = None) -> SupconResult:
    """Supremal controllable sublanguage of ``Lm(plant) & Lm(spec)``, as a trim generator."""
    _require_subalphabet(plant, spec, "specification")
    name = name or f"SUPCON({plant.name},{spec.name})"
    prod, pmap = _product(plant, spec)
    good = _fixpoint(plant, prod, pmap) if not prod.is_empty else frozenset()
    sup, smap = restrict(prod, good, name=name)
    sup = Generator(name, plant.events, sup.state_count, sup.initial, sup.marked, sup.transitions)
    rows = tuple(pmap[r[0]] for r in smap.rows)
    disabled = []
    for x, (q, _) in enumerate(rows):
        offered = enabled_ids(plant, q)
        kept = enabled_ids(sup, x)
        disabled.append(frozenset(e for e in offered - kept if plant.is_controllable(e)))
    return SupconResult(sup, tuple(r[0] for r in rows), tuple(r[1] for r in rows), tuple(disabled))


def _sub_ok(plant: Generator, prod: Generator, pmap: StateMap, keep: frozenset[int]) -> bool:
    """Restriction of the product to ``keep`` is controllable and nonblocking."""
    if prod.initial not in keep:
        return False
    unc = [e.id for e in plant.events if not e.controllable]
    seen = {prod.initial}
    stack = [prod.initial]
    while stack:
        s = stack.pop()
        for e, t in prod.out_edges(s):
            if t in keep and t not in seen:
                seen.add(t)
                stack.append(t)
    for s in seen:
        q = pmap[s][0]
        for e in unc:
            if plant.step(q, e) is not None:
                t = prod.step(s, e)
                if t is None or t not in keep:
                    return False
    live = {s for s in seen if s in prod.marked}
    stack = list(live)
    while stack:
        t = stack.pop()
        for s, _ in prod.in_edges(t):
            if s in seen and s not in live:
                live.add(s)
                stack.append(s)
    return live == seen


ORACLE_PRODUCT_LIMIT = 64


def verify_supremality(plant: Generator, spec: Generator, result: SupconResult,
                       limit: int = ORACLE_PRODUCT_LIMIT) -> bool:
    """Brute-force supremality check, for tests.

    Every product state the result leaves out is tried alone: if putting it
    back yields a strictly larger behaviour that is still controllable and
    nonblocking, the result was not supremal. The retained set itself must
    also be controllable and nonblocking.
    """
    if plant.state_count * max(spec.state_count, 1) > limit:
        raise SynthesisError(f"oracle refuses products above {limit} states")
    _require_subalphabet(plant, spec, "specification")
    prod, pmap = _product(plant, spec)
    if prod.is_empty:
        return result.is_empty
    index = {row: s for s, row in enumerate(pmap.rows)}
    kept = set()
    for q, e in zip(result.plant_map, result.spec_map):
        s = index.get((q, e))
        if s is None:
            return False
        kept.add(s)
    kept = frozenset(kept)
    if kept and not _sub_ok(plant, prod, pmap, kept):
        return False
    for s in range(prod.state_count):
        if s in kept:
            continue
        cand = kept | {s}
        if not _sub_ok(plant, prod, pmap, cand):
            continue
        # an addition that stays unreachable changes nothing
        if _reach_within(prod, cand) != _reach_within(prod, kept):
            return False
    return True


def _reach_within(prod: Generator, keep: frozenset[int]) -> frozenset[int]:
    if prod.initial not in keep:
        return frozenset()
    seen = {prod.initial}
    stack = [prod.initial]
    while stack:
        s = stack.pop()
        for _, t in prod.out_edges(s):
            if t in keep and t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def check_supervisor(plant: Generator, result: SupconResult) -> list[str]:
    """Human-readable list of problems with a synthesis result (empty if none)."""
    problems = []
    ok, witness = is_controllable(plant, result.supervisor)
    if not ok:
        problems.append(f"not controllable at {witness}")
    if not is_trim(result.supervisor):
        problems.append("not trim")
    for x, dis in enumerate(result.disabled):
        bad = [e for e in dis if not plant.is_controllable(e)]
        if bad:
            problems.append(f"state {x} disables uncontrollable {bad}")
    return problems
