"""Project manifests: everything the reconfiguration pipeline needs, in one file.

Example (YAML)::

    name: small-factory
    components: [M1.json, M2.json]
    specs: [BUF1.json, BUF2.json]
    configurations:
      C1: [M1, M2, BUF1]
      C2: [M1, M2, BUF2]
    switches:
      - {id: 91, from: C1, to: C2}
      - {id: 93, from: C2, to: C1}
    initial: C1
    preemption: pr.json          # optional, default relation otherwise
    forbid: []                    # events the behavioural spec never allows
    states:                       # named witness strings from the initial state
      home: []
    options: {one_way: false, rs_marked: null, mode: all-simple}

File paths are resolved against the manifest's directory. Configuration
members may name plant components or specification generators; a
configuration's event set is the union of its members' alphabets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .automaton import AutomatonError, Event, Generator, StateMap, sync
from .io import FormatError, PreemptionFile, load_structured, read_generator, read_preemption
from .reconfig import (Configuration, ReconfigSpec, SwitchEvent, build_rs, build_rsup, reroot)
from .solvability import MODES, PreemptionRelation
from .synthesis import SupconResult

TOP_FIELDS = {"name", "components", "specs", "configurations", "switches", "initial",
              "preemption", "forbid", "states", "options"}
OPTION_FIELDS = {"one_way", "rs_marked", "mode"}
SWITCH_FIELDS = {"id", "from", "to", "label", "controllable", "forcible"}


class ManifestError(FormatError):
    pass


@dataclass
class Manifest:
    name: str
    components: list[Generator]
    specs: list[Generator]
    configurations: list[Configuration]
    switches: list[SwitchEvent]
    initial: str
    preemption: PreemptionFile | None = None
    forbid: list[int] = field(default_factory=list)
    states: dict[str, list[int]] = field(default_factory=dict)
    one_way: bool = False
    rs_marked: list[str] | None = None
    mode: str = "all-simple"

    @property
    def pool(self) -> dict[str, Generator]:
        return {g.name: g for g in self.components + self.specs}

    @property
    def switch_ids(self) -> frozenset[int]:
        return frozenset(s.event.id for s in self.switches)

    def build_rs(self, one_way: bool | None = None, initial: str | None = None) -> ReconfigSpec:
        one_way = self.one_way if one_way is None else one_way
        rs = build_rs(self.configurations, self.switches, self.initial, self.pool,
                      one_way=one_way, marked=self.rs_marked)
        if initial is not None and initial != self.initial:
            if one_way:
                rs = build_rs(self.configurations, self.switches, initial, self.pool,
                              one_way=True, marked=self.rs_marked)
            else:
                rs = reroot(rs, initial)
        return rs

    def behavioral_spec(self, forbid: list[int] | None = None) -> Generator:
        parts = list(self.specs)
        forbid = self.forbid if forbid is None else forbid
        if forbid:
            events = {e.id: e for g in self.components for e in g.events}
            events.update({s.event.id: s.event for s in self.switches})
            missing = [e for e in forbid if e not in events]
            if missing:
                raise ManifestError(f"forbidden events {missing} are not declared anywhere")
            parts.append(Generator("FORBID", [events[e] for e in forbid], 1, 0, [0], []))
        if not parts:
            return Generator("E", [], 1, 0, [0], [])
        return sync(parts, name="E")[0]

    def run(self, one_way: bool | None = None, initial: str | None = None,
            forbid: list[int] | None = None) -> "Pipeline":
        rs = self.build_rs(one_way, initial)
        spec = self.behavioral_spec(forbid)
        result, gmode, gmap = build_rsup(self.components, rs, spec)
        return Pipeline(rs, spec, gmode, gmap, result)

    def preemption_for(self, g: Generator) -> PreemptionRelation:
        pr = self.preemption.resolve(g) if self.preemption else PreemptionRelation.default(g)
        pr.validate(g)
        return pr


@dataclass
class Pipeline:
    rs: ReconfigSpec
    spec: Generator
    gmode: Generator
    gmap: StateMap
    result: SupconResult

    @property
    def rsup(self) -> Generator:
        return self.result.supervisor

    def config_of(self, q: int) -> str:
        """Configuration the supervisor is in at state ``q``."""
        return self.rs.config_of_state[self.gmap[self.result.plant_map[q]][-1]]

    def rsup_map(self) -> StateMap:
        names = self.gmap.names + ("SPEC",)
        return StateMap(names, tuple(self.gmap[p] + (s,) for p, s in
                                     zip(self.result.plant_map, self.result.spec_map)))


def _need(d: dict, key: str, kind, where: str):
    if key not in d:
        raise ManifestError(f"{where}: missing {key!r}")
    v = d[key]
    if not isinstance(v, kind):
        raise ManifestError(f"{where}: {key!r} has the wrong type")
    return v


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    d = load_structured(path)
    where = str(path)
    if not isinstance(d, dict):
        raise ManifestError(f"{where}: manifest must be a mapping")
    unknown = set(d) - TOP_FIELDS
    if unknown:
        raise ManifestError(f"{where}: unknown fields {sorted(unknown)}")
    base = path.parent

    def gens(key):
        out = []
        for f in d.get(key, []) if key == "specs" else _need(d, key, list, where):
            out.append(read_generator(base / f))
        return out

    components = gens("components")
    if not components:
        raise ManifestError(f"{where}: no components")
    specs = gens("specs")
    names = [g.name for g in components + specs]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ManifestError(f"{where}: duplicate generator names {sorted(dup)}")
    configs = []
    for cname, members in _need(d, "configurations", dict, where).items():
        if not isinstance(members, list) or not members:
            raise ManifestError(f"{where}: configuration {cname!r} needs a member list")
        stray = set(members) - set(names)
        if stray:
            raise ManifestError(f"{where}: configuration {cname!r} names unknown generators {sorted(stray)}")
        configs.append(Configuration(str(cname), members))
    switches = []
    for s in _need(d, "switches", list, where):
        if not isinstance(s, dict) or set(s) - SWITCH_FIELDS or not {"id", "from", "to"} <= set(s):
            raise ManifestError(f"{where}: bad switch entry {s!r}")
        ev = Event(int(s["id"]), s.get("label"), bool(s.get("controllable", True)),
                   bool(s.get("forcible", True)))
        switches.append(SwitchEvent(ev, str(s["from"]), str(s["to"])))
    initial = str(_need(d, "initial", str, where))
    known = {c.name for c in configs}
    for s in switches:
        for end in (s.from_config, s.to_config):
            if end not in known:
                raise ManifestError(f"{where}: switch {s.event.id} references unknown configuration {end!r}")
    if initial not in known:
        raise ManifestError(f"{where}: unknown initial configuration {initial!r}")
    opts = d.get("options") or {}
    if set(opts) - OPTION_FIELDS:
        raise ManifestError(f"{where}: unknown options {sorted(set(opts) - OPTION_FIELDS)}")
    mode = opts.get("mode", "all-simple")
    if mode not in MODES:
        raise ManifestError(f"{where}: unknown mode {mode!r}")
    states = d.get("states") or {}
    if not isinstance(states, dict) or not all(isinstance(v, list) for v in states.values()):
        raise ManifestError(f"{where}: states must map names to event lists")
    pre = read_preemption(base / d["preemption"]) if d.get("preemption") else None
    m = Manifest(d.get("name", path.stem), components, specs, configs, switches, initial,
                 pre, [int(e) for e in d.get("forbid", [])],
                 {str(k): [int(e) for e in v] for k, v in states.items()},
                 bool(opts.get("one_way", False)), opts.get("rs_marked"), mode)
    try:
        m.build_rs()
    except AutomatonError as exc:
        raise ManifestError(f"{where}: {exc}") from None
    return m
