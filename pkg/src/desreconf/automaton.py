"""Finite-state generators and the language-level operations on them.

A generator is a deterministic automaton with a partial transition function.
States are the integers ``0 .. state_count - 1``; events are identified by
integer id. All objects here are immutable once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class AutomatonError(ValueError):
    """Malformed generator or inconsistent alphabets."""


class AlphabetConflict(AutomatonError):
    """The same event id carries different flags in two alphabets."""


@dataclass(frozen=True, order=True)
class Event:
    id: int
    label: str | None = field(default=None, compare=False)
    controllable: bool = field(default=True, compare=False)
    forcible: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.id, int) or self.id < 0:
            raise AutomatonError(f"event id must be a non-negative int, got {self.id!r}")

    def flags(self) -> tuple[bool, bool]:
        return (self.controllable, self.forcible)

    def __str__(self):
        return self.label or str(self.id)


def odd_controllable(eid: int, label: str | None = None, forcible: bool = False) -> Event:
    """Event under the common numbering habit: odd ids controllable, even ids not."""
    return Event(eid, label, controllable=bool(eid % 2), forcible=forcible)


@dataclass(frozen=True)
class StateMap:
    """Provenance of derived states: ``rows[q]`` is the tuple of constituent
    states that state ``q`` of the derived generator stands for."""

    names: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, q: int) -> tuple[int, ...]:
        return self.rows[q]

    def column(self, name: str) -> tuple[int, ...]:
        i = self.names.index(name)
        return tuple(r[i] for r in self.rows)

    def compose(self, inner: "StateMap") -> "StateMap":
        """Map through ``self`` first, then through ``inner`` (both single-column)."""
        return StateMap(inner.names, tuple(inner.rows[r[0]] for r in self.rows))


class Generator:
    """Deterministic finite generator ``(Q, Sigma, delta, q0, Qm)``.

    ``state_count == 0`` (with ``initial is None``) is the empty generator:
    its closed and marked languages are both empty.
    """

    __slots__ = ("name", "events", "state_count", "initial", "marked",
                 "transitions", "_delta", "_by_id", "_out", "_in")

    def __init__(self, name: str, events: Iterable[Event], state_count: int,
                 initial: int | None, marked: Iterable[int],
                 transitions: Iterable[tuple[int, int, int]]):
        evs = sorted(set(events))
        by_id: dict[int, Event] = {}
        for e in evs:
            if e.id in by_id:
                raise AutomatonError(f"{name}: event id {e.id} declared twice")
            by_id[e.id] = e
        if state_count < 0:
            raise AutomatonError(f"{name}: negative state count")
        if state_count == 0:
            if initial is not None:
                raise AutomatonError(f"{name}: empty generator cannot have an initial state")
        elif initial is None or not 0 <= initial < state_count:
            raise AutomatonError(f"{name}: initial state {initial!r} out of range")
        marked = frozenset(marked)
        for q in marked:
            if not 0 <= q < state_count:
                raise AutomatonError(f"{name}: marked state {q} out of range")
        delta: dict[tuple[int, int], int] = {}
        trans = []
        for (p, e, q) in transitions:
            if e not in by_id:
                raise AutomatonError(f"{name}: transition ({p}, {e}, {q}) uses an event outside the alphabet")
            if not (0 <= p < state_count and 0 <= q < state_count):
                raise AutomatonError(f"{name}: transition ({p}, {e}, {q}) has a state out of range")
            if (p, e) in delta:
                if delta[(p, e)] == q:
                    continue
                raise AutomatonError(f"{name}: nondeterministic at state {p} on event {e}")
            delta[(p, e)] = q
            trans.append((p, e, q))
        out: list[list[tuple[int, int]]] = [[] for _ in range(state_count)]
        inc: list[list[tuple[int, int]]] = [[] for _ in range(state_count)]
        for (p, e, q) in sorted(trans):
            out[p].append((e, q))
            inc[q].append((p, e))
        self.name = name
        self.events = tuple(evs)
        self.state_count = state_count
        self.initial = initial
        self.marked = marked
        self.transitions = tuple(sorted(trans))
        self._delta = delta
        self._by_id = by_id
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(x) for x in inc)

    # -- basic queries -----------------------------------------------------

    @property
    def event_ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    @property
    def is_empty(self) -> bool:
        return self.state_count == 0

    def event(self, eid: int) -> Event:
        try:
            return self._by_id[eid]
        except KeyError:
            raise AutomatonError(f"{self.name}: event {eid} not in alphabet") from None

    def has_event(self, eid: int) -> bool:
        return eid in self._by_id

    def is_controllable(self, eid: int) -> bool:
        return self.event(eid).controllable

    def step(self, q: int, eid: int) -> int | None:
        return self._delta.get((q, eid))

    def run(self, events: Iterable[int], start: int | None = None) -> int | None:
        """State reached by replaying ``events``; None if some step is undefined."""
        q = self.initial if start is None else start
        for e in events:
            if q is None:
                return None
            q = self._delta.get((q, e))
        return q

    def out_edges(self, q: int) -> tuple[tuple[int, int], ...]:
        """``(event, target)`` pairs leaving ``q``, ascending by event id."""
        return self._out[q]

    def in_edges(self, q: int) -> tuple[tuple[int, int], ...]:
        """``(source, event)`` pairs entering ``q``."""
        return self._in[q]

    def __eq__(self, other):
        if not isinstance(other, Generator):
            return NotImplemented
        return (self.name == other.name and self.events == other.events
                and tuple(e.flags() for e in self.events) == tuple(e.flags() for e in other.events)
                and self.state_count == other.state_count and self.initial == other.initial
                and self.marked == other.marked and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.name, self.state_count, self.initial, self.transitions))

    def same_structure(self, other: "Generator") -> bool:
        """Equality ignoring the name."""
        return self.renamed(other.name) == other

    def renamed(self, name: str) -> "Generator":
        return Generator(name, self.events, self.state_count, self.initial,
                         self.marked, self.transitions)

    def __repr__(self):
        return (f"Generator({self.name!r}, states={self.state_count}, "
                f"transitions={len(self.transitions)}, events={sorted(self.event_ids)})")


def empty_generator(name: str, events: Iterable[Event] = ()) -> Generator:
    return Generator(name, events, 0, None, (), ())


def _check_state(g: Generator, q: int) -> None:
    if not isinstance(q, int) or not 0 <= q < g.state_count:
        raise AutomatonError(f"{g.name}: state {q!r} out of range 0..{g.state_count - 1}")


def enabled_events(g: Generator, q: int) -> frozenset[Event]:
    _check_state(g, q)
    return frozenset(g.event(e) for e, _ in g.out_edges(q))


def enabled_ids(g: Generator, q: int) -> frozenset[int]:
    _check_state(g, q)
    return frozenset(e for e, _ in g.out_edges(q))


def reachable(g: Generator) -> frozenset[int]:
    if g.is_empty:
        return frozenset()
    seen = {g.initial}
    stack = [g.initial]
    while stack:
        p = stack.pop()
        for _, q in g.out_edges(p):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def coreachable(g: Generator) -> frozenset[int]:
    seen = set(g.marked)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p, _ in g.in_edges(q):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def restrict(g: Generator, keep: Iterable[int], name: str | None = None) -> tuple[Generator, StateMap]:
    """Sub-generator on ``keep``, renumbered canonically from the initial state.

    States of ``keep`` that are not reachable inside the restriction are
    dropped. If the initial state is not kept the result is empty.
    """
    keep = frozenset(keep)
    name = g.name if name is None else name
    if g.is_empty or g.initial not in keep:
        return empty_generator(name, g.events), StateMap((g.name,), ())
    order = [g.initial]
    index = {g.initial: 0}
    i = 0
    while i < len(order):
        p = order[i]
        i += 1
        for _, q in g.out_edges(p):  # already sorted by event id
            if q in keep and q not in index:
                index[q] = len(order)
                order.append(q)
    trans = [(index[p], e, index[q]) for (p, e, q) in g.transitions
             if p in index and q in index]
    marked = [index[q] for q in g.marked if q in index]
    out = Generator(name, g.events, len(order), 0, marked, trans)
    return out, StateMap((g.name,), tuple((q,) for q in order))


def canonical_renumber(g: Generator) -> tuple[Generator, StateMap]:
    """Breadth-first renumbering from the initial state, successors visited
    in ascending event-id order. Unreachable states are dropped."""
    return restrict(g, range(g.state_count))


def trim(g: Generator) -> tuple[Generator, StateMap]:
    return restrict(g, reachable(g) & coreachable(g))


def is_trim(g: Generator) -> bool:
    if g.is_empty:
        return True
    every = frozenset(range(g.state_count))
    return reachable(g) == every and coreachable(g) == every


def merge_alphabets(alphabets: Iterable[Iterable[Event]]) -> tuple[Event, ...]:
    """Union of alphabets; raises AlphabetConflict on inconsistent flags."""
    merged: dict[int, Event] = {}
    for alpha in alphabets:
        for e in alpha:
            old = merged.get(e.id)
            if old is None:
                merged[e.id] = e
            elif old.flags() != e.flags():
                raise AlphabetConflict(
                    f"event {e.id}: controllable/forcible flags {old.flags()} vs {e.flags()}")
            elif old.label is None and e.label is not None:
                merged[e.id] = e
    return tuple(sorted(merged.values()))


def sync(gs: Sequence[Generator], name: str | None = None) -> tuple[Generator, StateMap]:
    """Synchronous product, restricted to its reachable part.

    Shared events move every owner at once; private events move only their
    owner. A tuple state is marked when every component is marked.
    """
    if not gs:
        raise AutomatonError("sync needs at least one generator")
    events = merge_alphabets(g.events for g in gs)
    name = name or "||".join(g.name for g in gs)
    names = tuple(g.name for g in gs)
    if any(g.is_empty for g in gs):
        return empty_generator(name, events), StateMap(names, ())
    owners = {e.id: tuple(i for i, g in enumerate(gs) if g.has_event(e.id)) for e in events}
    ids = [e.id for e in events]
    start = tuple(g.initial for g in gs)
    index = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        cur = order[i]
        for e in ids:
            nxt = list(cur)
            for k in owners[e]:
                t = gs[k].step(cur[k], e)
                if t is None:
                    break
                nxt[k] = t
            else:
                nxt = tuple(nxt)
                j = index.get(nxt)
                if j is None:
                    j = index[nxt] = len(order)
                    order.append(nxt)
                trans.append((i, e, j))
        i += 1
    marked = [k for k, tup in enumerate(order)
              if all(q in g.marked for q, g in zip(tup, gs))]
    return Generator(name, events, len(order), 0, marked, trans), StateMap(names, tuple(order))


def allevents(g: Generator, name: str | None = None) -> Generator:
    """Marked one-state generator selflooped with every event of ``g``."""
    return Generator(name or f"ALL({g.name})", g.events, 1, 0, [0],
                     [(0, e.id, 0) for e in g.events])


def selfloop(g: Generator, events: Iterable[Event], name: str | None = None) -> Generator:
    """Add selfloops at every state for events not already in the alphabet."""
    new = [e for e in events if not g.has_event(e.id)]
    evs = merge_alphabets([g.events, new])
    trans = list(g.transitions) + [(q, e.id, q) for q in range(g.state_count) for e in new]
    return Generator(name or g.name, evs, g.state_count, g.initial, g.marked, trans)


def remove_events(g: Generator, eids: Iterable[int], name: str | None = None) -> tuple[Generator, StateMap]:
    """Delete every transition labelled with ``eids`` and trim the result."""
    drop = frozenset(eids)
    h = Generator(name or g.name, g.events, g.state_count, g.initial, g.marked,
                  [t for t in g.transitions if t[1] not in drop])
    return trim(h)


def language_sample(g: Generator, max_len: int) -> dict[tuple[int, ...], bool]:
    """Every string of ``L(g)`` up to ``max_len`` events, mapped to whether it
    lies in the marked language."""
    if max_len < 0:
        raise AutomatonError("max_len must be >= 0")
    if g.is_empty:
        return {}
    out = {(): g.initial in g.marked}
    frontier = [((), g.initial)]
    for _ in range(max_len):
        nxt = []
        for s, q in frontier:
            for e, r in g.out_edges(q):
                t = s + (e,)
                out[t] = r in g.marked
                nxt.append((t, r))
        frontier = nxt
    return out


def isomorphic(a: Generator, b: Generator) -> bool:
    """Structural equality after canonical renumbering (names ignored)."""
    ca, _ = canonical_renumber(a)
    cb, _ = canonical_renumber(b)
    return ca.renamed("_") == cb.renamed("_")
