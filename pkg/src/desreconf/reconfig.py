"""Reconfiguration specifications, the multimodal plant and RSUP synthesis."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .automaton import (AutomatonError, Event, Generator, StateMap,
                        allevents, merge_alphabets, sync)
from .synthesis import SupconResult, supcon


class ReconfigError(AutomatonError):
    pass


@dataclass(frozen=True)
class Configuration:
    name: str
    components: frozenset[str]

    def __init__(self, name: str, components: Iterable[str]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "components", frozenset(components))
        if not self.components:
            raise ReconfigError(f"configuration {name!r} has no components")

    def sigma(self, pool: Mapping[str, Generator]) -> frozenset[int]:
        """Event ids of the member components."""
        missing = self.components - set(pool)
        if missing:
            raise ReconfigError(f"configuration {self.name!r} names unknown components {sorted(missing)}")
        return frozenset().union(*(pool[c].event_ids for c in self.components))


@dataclass(frozen=True)
class SwitchEvent:
    event: Event
    from_config: str
    to_config: str


def switch(eid: int, src: str, dst: str, label: str | None = None,
           controllable: bool = True, forcible: bool = True) -> SwitchEvent:
    return SwitchEvent(Event(eid, label, controllable, forcible), src, dst)


@dataclass(frozen=True)
class ReconfigSpec:
    automaton: Generator
    config_of_state: tuple[str, ...]
    switch_events: tuple[SwitchEvent, ...]
    initial_config: str
    sigmas: Mapping[str, frozenset[int]] = field(compare=False)

    def state_of(self, config: str) -> int:
        return self.config_of_state.index(config)

    @property
    def switch_ids(self) -> frozenset[int]:
        return frozenset(s.event.id for s in self.switch_events)

    def switch_for(self, eid: int) -> SwitchEvent:
        for s in self.switch_events:
            if s.event.id == eid:
                return s
        raise ReconfigError(f"{eid} is not a switch event")


def build_rs(configs: Sequence[Configuration], switches: Sequence[SwitchEvent], initial: str,
             pool: Mapping[str, Generator], *, one_way: bool = False,
             marked: Iterable[str] | None = None, name: str = "RS") -> ReconfigSpec:
    """Reconfiguration specification: one state per configuration, selflooped
    with that configuration's events, plus one edge per switch event.

    ``one_way`` keeps only switches leaving the initial configuration's
    direction of travel, i.e. drops every switch that returns to a
    configuration already left. ``marked`` restricts marking; by default
    every configuration state is marked.
    """
    names = [c.name for c in configs]
    if len(set(names)) != len(names):
        raise ReconfigError("configuration names must be unique")
    if initial not in names:
        raise ReconfigError(f"unknown initial configuration {initial!r}")
    sigmas = {c.name: c.sigma(pool) for c in configs}
    comp_events = merge_alphabets(g.events for g in pool.values())
    comp_ids = {e.id for e in comp_events}
    seen_ids = set()
    for s in switches:
        for end in (s.from_config, s.to_config):
            if end not in names:
                raise ReconfigError(f"switch {s.event.id} references unknown configuration {end!r}")
        if s.event.id in comp_ids:
            raise ReconfigError(f"switch event {s.event.id} is also a component event")
        if s.event.id in seen_ids:
            raise ReconfigError(f"switch event {s.event.id} used twice")
        if s.from_config == s.to_config:
            raise ReconfigError(f"switch event {s.event.id} does not change configuration")
        seen_ids.add(s.event.id)
    if one_way:
        switches = _forward_only(switches, initial)
    marked_names = set(names if marked is None else marked)
    if not marked_names <= set(names):
        raise ReconfigError(f"unknown marked configurations {sorted(marked_names - set(names))}")
    idx = {n: i for i, n in enumerate(names)}
    used = set().union(*sigmas.values())
    events = [e for e in comp_events if e.id in used] + [s.event for s in switches]
    trans = [(idx[n], e, idx[n]) for n in names for e in sorted(sigmas[n])]
    trans += [(idx[s.from_config], s.event.id, idx[s.to_config]) for s in switches]
    g = Generator(name, events, len(names), idx[initial],
                  [idx[n] for n in marked_names], trans)
    return ReconfigSpec(g, tuple(names), tuple(switches), initial, sigmas)


def _forward_only(switches: Sequence[SwitchEvent], initial: str) -> list[SwitchEvent]:
    # breadth-first from the initial configuration; a switch is kept only if
    # it leads to a configuration not reached earlier
    depth = {initial: 0}
    frontier = [initial]
    kept = []
    while frontier:
        nxt = []
        for c in frontier:
            for s in sorted(switches, key=lambda s: s.event.id):
                if s.from_config != c:
                    continue
                if s.to_config not in depth:
                    depth[s.to_config] = depth[c] + 1
                    nxt.append(s.to_config)
                if depth[s.to_config] > depth[c]:
                    kept.append(s)
        frontier = nxt
    return sorted(set(kept), key=lambda s: s.event.id)


def reroot(rs: ReconfigSpec, initial: str) -> ReconfigSpec:
    """Same RS, started in another configuration."""
    g = rs.automaton
    q0 = rs.state_of(initial)
    moved = Generator(g.name, g.events, g.state_count, q0, g.marked, g.transitions)
    return ReconfigSpec(moved, rs.config_of_state, rs.switch_events, initial, rs.sigmas)


def build_gmode(components: Sequence[Generator], rs: ReconfigSpec,
                name: str = "GMODE") -> tuple[Generator, StateMap]:
    """Product of all components with the RS automaton (RS is the last column)."""
    return sync(list(components) + [rs.automaton], name=name)


def build_rsup(components: Sequence[Generator], rs: ReconfigSpec, behavioral_spec: Generator,
               name: str = "RSUP") -> tuple[SupconResult, Generator, StateMap]:
    """``supcon(GMode, allevents(GMode) || E)``.

    Returns the synthesis result together with GMode and its state map, so
    callers can relate supervisor states to component and RS states.
    """
    gmode, gmap = build_gmode(components, rs)
    extra = behavioral_spec.event_ids - gmode.event_ids
    if extra:
        raise ReconfigError(f"behavioral spec uses events outside GMode: {sorted(extra)}")
    spec, _ = sync([allevents(gmode), behavioral_spec], name="SPEC")
    return supcon(gmode, spec, name=name), gmode, gmap


def re_source_states(sup: Generator, switch_event: Event | int,
                     rs: ReconfigSpec | None = None) -> frozenset[int]:
    """Supervisor states at which the given switch event is enabled."""
    eid = switch_event.id if isinstance(switch_event, Event) else switch_event
    if rs is not None:
        rs.switch_for(eid)
    if not sup.has_event(eid):
        raise ReconfigError(f"event {eid} is not in the supervisor alphabet")
    return frozenset(q for q in range(sup.state_count) if sup.step(q, eid) is not None)


def rs_state_column(result: SupconResult, gmap: StateMap) -> tuple[int, ...]:
    """RS state of every supervisor state."""
    return tuple(gmap[q][-1] for q in result.plant_map)
