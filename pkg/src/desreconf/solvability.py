"""Reconfiguration feasibility by backward collection of forcible paths.

A backward step from a state ``q_r`` to a predecessor ``q_i`` along event
``sigma`` is authorized by one of four backtracking forcibility conditions
(BFC-1 .. BFC-4), evaluated in that order. Events listed as *commanded*
(switch events by default in the pipeline) never occur spontaneously, so
they are left out of the competing sets and never used as path steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .automaton import AutomatonError, Generator, enabled_ids

ALL_SIMPLE = "all-simple"
PAPER_LITERAL = "paper-literal"
MODES = (ALL_SIMPLE, PAPER_LITERAL)

ORACLE_STATE_LIMIT = 200


class SolveError(AutomatonError):
    pass


@dataclass(frozen=True)
class PreemptionRelation:
    """``(a, b)`` in ``pairs`` means forcible event ``a`` can preempt ``b``."""

    pairs: frozenset[tuple[int, int]]

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in pairs))

    def preempts(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs

    def validate(self, g: Generator) -> None:
        for a, _ in self.pairs:
            if g.has_event(a) and not g.event(a).forcible:
                raise SolveError(f"preemptor {a} is not forcible")

    @classmethod
    def default(cls, g: Generator) -> "PreemptionRelation":
        """Every forcible event preempts every uncontrollable one."""
        forc = [e.id for e in g.events if e.forcible]
        unc = [e.id for e in g.events if not e.controllable]
        return cls((a, b) for a in forc for b in unc if a != b)

    def with_overrides(self, add: Iterable[tuple[int, int]] = (),
                       remove: Iterable[tuple[int, int]] = ()) -> "PreemptionRelation":
        return PreemptionRelation((self.pairs | set(add)) - set(remove))


@dataclass(frozen=True)
class BacktrackContext:
    q_i: int
    q_r: int
    sigma_in: frozenset[int]
    sigma_comp_c: frozenset[int]
    sigma_comp_u: frozenset[int]

    @property
    def sigma_comp(self) -> frozenset[int]:
        return self.sigma_comp_c | self.sigma_comp_u


def context(sup: Generator, q_i: int, q_r: int,
            commanded: frozenset[int] = frozenset()) -> BacktrackContext:
    into = frozenset(e for e, t in sup.out_edges(q_i) if t == q_r and e not in commanded)
    if not into:
        raise SolveError(f"no usable event from {q_i} to {q_r}")
    comp = enabled_ids(sup, q_i) - into - commanded
    c = frozenset(e for e in comp if sup.is_controllable(e))
    return BacktrackContext(q_i, q_r, into, c, comp - c)


def bfc1(ctx: BacktrackContext) -> bool:
    return not ctx.sigma_comp


def bfc2(ctx: BacktrackContext) -> bool:
    return bool(ctx.sigma_comp) and not ctx.sigma_comp_u


def bfc3(ctx: BacktrackContext, pr: PreemptionRelation, sigma: int) -> bool:
    comp = ctx.sigma_comp
    if any(pr.preempts(a, sigma) for a in comp):
        return False
    return all(any(pr.preempts(b, u) for b in comp) for u in ctx.sigma_comp_u)


def bfc4(sup: Generator, ctx: BacktrackContext,
         commanded: frozenset[int] = frozenset()) -> tuple[bool, tuple[tuple[int, int], ...]]:
    """Uncontrollable detour that lands where only controllable events remain.

    Returns the verdict and every two-event alternate ``(u, c)`` with ``u``
    such a detour and ``c`` an event from its landing state into ``q_r``.
    """
    alternates = []
    for u in sorted(ctx.sigma_comp_u):
        q_j = sup.step(ctx.q_i, u)
        here = enabled_ids(sup, q_j) - commanded
        into = sorted(e for e in here if sup.step(q_j, e) == ctx.q_r)
        if into and all(sup.is_controllable(e) for e in here):
            alternates.extend((u, c) for c in into)
    return bool(alternates), tuple(alternates)


@dataclass(frozen=True)
class Justification:
    condition: int  # 1..4
    disabled: frozenset[int] = frozenset()
    forced: frozenset[int] = frozenset()
    alternates: tuple[tuple[int, int], ...] = ()

    @property
    def label(self) -> str:
        return f"BFC-{self.condition}"

    def as_dict(self) -> dict:
        return {"condition": self.label, "disabled": sorted(self.disabled),
                "forced": sorted(self.forced), "alternates": [list(a) for a in self.alternates]}


def step_forcible(sup: Generator, ctx: BacktrackContext, sigma: int, pr: PreemptionRelation,
                  commanded: frozenset[int] = frozenset()) -> Justification | None:
    """First BFC (in order 1, 2, 3, 4) that authorizes ``sigma``, with the
    control actions it needs; None if no condition holds."""
    if sigma not in ctx.sigma_in:
        raise SolveError(f"event {sigma} does not lead from {ctx.q_i} to {ctx.q_r}")
    if bfc1(ctx):
        return Justification(1)
    if bfc2(ctx):
        return Justification(2, disabled=ctx.sigma_comp_c)
    if bfc3(ctx, pr, sigma):
        forced = set()
        for u in ctx.sigma_comp_u:
            forced.add(min(b for b in ctx.sigma_comp if pr.preempts(b, u)))
        return Justification(3, disabled=ctx.sigma_comp_c - forced, forced=frozenset(forced))
    ok, alts = bfc4(sup, ctx, commanded)
    if ok:
        return Justification(4, disabled=ctx.sigma_comp_c, alternates=alts)
    return None


@dataclass(frozen=True)
class Step:
    source: int
    event: int
    target: int
    justification: Justification


@dataclass(frozen=True)
class ForciblePath:
    steps: tuple[Step, ...]
    start: int

    @property
    def events(self) -> tuple[int, ...]:
        return tuple(s.event for s in self.steps)

    @property
    def states(self) -> tuple[int, ...]:
        return (self.start,) + tuple(s.target for s in self.steps)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.justification.label for s in self.steps)

    def key(self):
        return (len(self.steps), self.events, self.states)

    def signature(self):
        """Event sequence with per-step justifications, for set comparison."""
        return (self.events, tuple(s.justification for s in self.steps))

    def as_dict(self) -> dict:
        return {"events": list(self.events), "states": list(self.states),
                "steps": [dict(source=s.source, event=s.event, target=s.target,
                               **s.justification.as_dict()) for s in self.steps]}


def _sorted(paths: Iterable[ForciblePath]) -> tuple[ForciblePath, ...]:
    return tuple(sorted(set(paths), key=ForciblePath.key))


def _check_pair(sup: Generator, q_r: int, q_s: int) -> None:
    for q in (q_r, q_s):
        if not isinstance(q, int) or not 0 <= q < sup.state_count:
            raise SolveError(f"state {q!r} out of range")
    if q_r == q_s:
        raise SolveError("source and target state coincide")


def _predecessors(sup: Generator, q: int) -> list[int]:
    return sorted({p for p, _ in sup.in_edges(q)})


def collect_paths(sup: Generator, q_r: int, q_s: int, pr: PreemptionRelation,
                  mode: str = ALL_SIMPLE, commanded: Iterable[int] = ()) -> tuple[ForciblePath, ...]:
    """Backward search from ``q_r`` for forcible paths that start at ``q_s``.

    ``all-simple`` returns every cycle-free forcible path. ``paper-literal``
    keeps one global set of unvisited states, so each intermediate state is
    expanded at most once over the whole search.
    """
    _check_pair(sup, q_r, q_s)
    if mode not in MODES:
        raise SolveError(f"unknown mode {mode!r}")
    commanded = frozenset(commanded)
    found: list[ForciblePath] = []

    def authorized(q_i, cur):
        ctx = context(sup, q_i, cur, commanded)
        for sigma in sorted(ctx.sigma_in):
            j = step_forcible(sup, ctx, sigma, pr, commanded)
            if j is not None:
                yield Step(q_i, sigma, cur, j)

    def usable(q_i, cur):
        return any(t == cur and e not in commanded for e, t in sup.out_edges(q_i))

    if mode == ALL_SIMPLE:
        stack = [(q_r, (), frozenset([q_r]))]
        while stack:
            cur, suffix, on_path = stack.pop()
            for q_i in reversed(_predecessors(sup, cur)):
                if q_i in on_path or not usable(q_i, cur):
                    continue
                for step in authorized(q_i, cur):
                    steps = (step,) + suffix
                    if q_i == q_s:
                        found.append(ForciblePath(steps, q_s))
                    else:
                        stack.append((q_i, steps, on_path | {q_i}))
        return _sorted(found)

    unvisited = set(range(sup.state_count)) - {q_r}

    def pca(cur, suffix):
        if not unvisited:
            return
        for q_i in _predecessors(sup, cur):
            if not usable(q_i, cur):
                continue
            if q_i == q_s:
                found.extend(ForciblePath((st,) + suffix, q_s) for st in authorized(q_i, cur))
                unvisited.discard(q_i)
                continue
            if q_i not in unvisited:
                continue
            for step in authorized(q_i, cur):
                unvisited.discard(q_i)
                pca(q_i, (step,) + suffix)

    import sys
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, sup.state_count + 100))
    try:
        pca(q_r, ())
    finally:
        sys.setrecursionlimit(limit)
    return _sorted(found)


def oracle_enumerate(sup: Generator, q_r: int, q_s: int, pr: PreemptionRelation,
                     commanded: Iterable[int] = (),
                     limit: int = ORACLE_STATE_LIMIT) -> tuple[ForciblePath, ...]:
    """Forward enumeration of simple paths ``q_s -> q_r``, keeping those
    whose every step passes the BFC test. Test oracle for ``collect_paths``."""
    if sup.state_count > limit:
        raise SolveError(f"oracle refuses supervisors above {limit} states")
    _check_pair(sup, q_r, q_s)
    commanded = frozenset(commanded)
    found = []

    def walk(q, visited, steps):
        for e, t in sup.out_edges(q):
            if e in commanded or t in visited:
                continue
            ctx = context(sup, q, t, commanded)
            j = step_forcible(sup, ctx, e, pr, commanded)
            if j is None:
                continue
            st = steps + [Step(q, e, t, j)]
            if t == q_r:
                found.append(ForciblePath(tuple(st), q_s))
            else:
                walk(t, visited | {t}, st)

    walk(q_s, frozenset([q_s]), [])
    return _sorted(found)


@dataclass(frozen=True)
class TargetAction:
    """What the supervisor must do at the target to fire the switch event."""

    state: int
    event: int
    disabled: frozenset[int]
    preempted: frozenset[int]
    unpreemptable: frozenset[int]

    @property
    def forced(self) -> frozenset[int]:
        return frozenset([self.event]) if self.preempted else frozenset()

    def as_dict(self) -> dict:
        return {"state": self.state, "event": self.event, "disable": sorted(self.disabled),
                "force": sorted(self.forced), "preempts": sorted(self.preempted),
                "unpreemptable": sorted(self.unpreemptable)}


def target_action(sup: Generator, q_r: int, sigma_r: int, pr: PreemptionRelation,
                  commanded: Iterable[int] = ()) -> TargetAction:
    if sup.step(q_r, sigma_r) is None:
        raise SolveError(f"event {sigma_r} is not enabled at state {q_r}")
    comp = enabled_ids(sup, q_r) - {sigma_r} - frozenset(commanded)
    ctrl = frozenset(e for e in comp if sup.is_controllable(e))
    unc = comp - ctrl
    pre = frozenset(u for u in unc if pr.preempts(sigma_r, u))
    return TargetAction(q_r, sigma_r, ctrl, pre, unc - pre)


@dataclass(frozen=True)
class Verdict:
    solvable: bool
    paths: tuple[ForciblePath, ...]
    source: int
    target: int | None = None
    reason: str = ""

    @property
    def shortest(self) -> ForciblePath | None:
        return self.paths[0] if self.paths else None


def solve(sup: Generator, q_r: int, q_s: int, pr: PreemptionRelation,
          mode: str = ALL_SIMPLE, commanded: Iterable[int] = ()) -> Verdict:
    paths = collect_paths(sup, q_r, q_s, pr, mode, commanded)
    if paths:
        return Verdict(True, paths, q_s, q_r)
    return Verdict(False, (), q_s, q_r, "no forcible path")


@dataclass(frozen=True)
class EventVerdict:
    solvable: bool
    event: int
    source: int
    verdicts: tuple[Verdict, ...]
    actions: tuple[TargetAction, ...] = ()
    reason: str = ""

    @property
    def paths(self) -> tuple[ForciblePath, ...]:
        return _sorted(p for v in self.verdicts for p in v.paths)

    @property
    def immediate(self) -> bool:
        """The switch event is already enabled at the source state."""
        return any(v.solvable and v.target == self.source for v in self.verdicts)


def solve_event(sup: Generator, q_s: int, sigma_r: int, pr: PreemptionRelation,
                mode: str = ALL_SIMPLE, commanded: Iterable[int] | None = None,
                targets: Iterable[int] | None = None) -> EventVerdict:
    """Solve for every state where ``sigma_r`` is enabled (or the given
    ``targets``); solvable when any of them is."""
    if not isinstance(q_s, int) or not 0 <= q_s < sup.state_count:
        raise SolveError(f"state {q_s!r} out of range")
    commanded = frozenset([sigma_r]) if commanded is None else frozenset(commanded) | {sigma_r}
    sources = frozenset(q for q in range(sup.state_count) if sup.step(q, sigma_r) is not None) \
        if sup.has_event(sigma_r) else frozenset()
    if targets is not None:
        targets = frozenset(targets)
        stray = targets - sources
        if stray:
            raise SolveError(f"event {sigma_r} is not enabled at {sorted(stray)}")
        sources = targets
    if not sources:
        return EventVerdict(False, sigma_r, q_s, (), reason="event nowhere enabled")
    verdicts = []
    for q_r in sorted(sources):
        if q_r == q_s:
            verdicts.append(Verdict(True, (ForciblePath((), q_s),), q_s, q_r, "already enabled"))
        else:
            verdicts.append(solve(sup, q_r, q_s, pr, mode, commanded))
    # shortest first; unsolvable targets last
    verdicts.sort(key=lambda v: (not v.solvable, v.shortest.key() if v.solvable else (), v.target))
    actions = tuple(target_action(sup, v.target, sigma_r, pr, commanded)
                    for v in verdicts if v.solvable)
    ok = any(v.solvable for v in verdicts)
    return EventVerdict(ok, sigma_r, q_s, tuple(verdicts), actions,
                        "" if ok else "no forcible path to any source state")
