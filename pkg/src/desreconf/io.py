"""Reading and writing generators, state maps, preemption relations; DOT export."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import yaml

from .automaton import AutomatonError, Event, Generator, StateMap, odd_controllable
from .solvability import PreemptionRelation

GENERATOR_FIELDS = {"name", "events", "states", "initial", "marked", "transitions"}
EVENT_FIELDS = {"id", "label", "controllable", "forcible"}


class FormatError(AutomatonError):
    """A file does not follow the expected structure."""


def load_structured(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    try:
        if path.suffix in (".yaml", ".yml"):
            return yaml.safe_load(text)
        return json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise FormatError(f"{path}: {exc}") from None


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=1, sort_keys=False) + "\n"


def event_from_dict(d: dict) -> Event:
    if not isinstance(d, dict):
        raise FormatError(f"event entry must be a mapping, got {d!r}")
    unknown = set(d) - EVENT_FIELDS
    if unknown:
        raise FormatError(f"unknown event fields {sorted(unknown)}")
    if "id" not in d or not isinstance(d["id"], int) or isinstance(d["id"], bool):
        raise FormatError(f"event needs an integer id: {d!r}")
    forcible = bool(d.get("forcible", False))
    if "controllable" not in d:
        return odd_controllable(d["id"], d.get("label"), forcible)
    return Event(d["id"], d.get("label"), bool(d["controllable"]), forcible)


def event_to_dict(e: Event) -> dict:
    d: dict[str, Any] = {"id": e.id}
    if e.label is not None:
        d["label"] = e.label
    d["controllable"] = e.controllable
    if e.forcible:
        d["forcible"] = True
    return d


def generator_from_dict(d: dict) -> Generator:
    if not isinstance(d, dict):
        raise FormatError("generator document must be a mapping")
    unknown = set(d) - GENERATOR_FIELDS
    if unknown:
        raise FormatError(f"unknown generator fields {sorted(unknown)}")
    missing = {"name", "events", "states", "transitions"} - set(d)
    if missing:
        raise FormatError(f"missing generator fields {sorted(missing)}")
    try:
        trans = [tuple(int(x) for x in t) for t in d["transitions"]]
    except (TypeError, ValueError):
        raise FormatError("transitions must be [from, event, to] triples") from None
    if any(len(t) != 3 for t in trans):
        raise FormatError("transitions must be [from, event, to] triples")
    states = d["states"]
    if not isinstance(states, int) or isinstance(states, bool):
        raise FormatError("states must be an integer count")
    initial = d.get("initial", 0 if states else None)
    return Generator(str(d["name"]), [event_from_dict(e) for e in d["events"]], states,
                     initial, d.get("marked", []), trans)


def generator_to_dict(g: Generator) -> dict:
    return {
        "name": g.name,
        "events": [event_to_dict(e) for e in g.events],
        "states": g.state_count,
        "initial": g.initial,
        "marked": sorted(g.marked),
        "transitions": [list(t) for t in g.transitions],
    }


def read_generator(path: str | Path) -> Generator:
    try:
        return generator_from_dict(load_structured(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_generator(g: Generator, path: str | Path) -> None:
    Path(path).write_text(dumps_generator(g))


def dumps_generator(g: Generator) -> str:
    # one transition per line keeps large files diffable
    d = generator_to_dict(g)
    lines = ["{",
             f' "name": {json.dumps(d["name"])},',
             ' "events": [' + ", ".join(json.dumps(e) for e in d["events"]) + "],",
             f' "states": {d["states"]},',
             f' "initial": {json.dumps(d["initial"])},',
             f' "marked": {json.dumps(d["marked"])},',
             ' "transitions": [']
    body = [f"  {json.dumps(t)}" for t in d["transitions"]]
    lines.append(",\n".join(body))
    lines.append(" ]")
    lines.append("}")
    return "\n".join(l for l in lines if l != "") + "\n"


def statemap_to_dict(m: StateMap) -> dict:
    return {"names": list(m.names), "rows": [list(r) for r in m.rows]}


def write_statemap(m: StateMap, path: str | Path) -> None:
    Path(path).write_text(json.dumps(statemap_to_dict(m)) + "\n")


def read_preemption(path: str | Path) -> "PreemptionFile":
    """Preemption file: a list of ``[preemptor, preempted]`` pairs, or a
    mapping with ``pairs`` and optionally ``default: true`` / ``remove``."""
    data = load_structured(path)
    if isinstance(data, list):
        data = {"pairs": data}
    if not isinstance(data, dict) or set(data) - {"pairs", "default", "remove"}:
        raise FormatError(f"{path}: expected a list of pairs or {{pairs, default, remove}}")
    try:
        pairs = [(int(a), int(b)) for a, b in data.get("pairs", [])]
        remove = [(int(a), int(b)) for a, b in data.get("remove", [])]
    except (TypeError, ValueError):
        raise FormatError(f"{path}: pairs must be [preemptor, preempted]") from None
    return PreemptionFile(pairs, bool(data.get("default", False)), remove)


class PreemptionFile:
    """Parsed preemption file; ``resolve`` fills in the default relation."""

    def __init__(self, pairs, use_default, remove):
        self.pairs = pairs
        self.use_default = use_default
        self.remove = remove

    def resolve(self, g: Generator) -> PreemptionRelation:
        base = PreemptionRelation.default(g) if self.use_default else PreemptionRelation()
        return base.with_overrides(self.pairs, self.remove)


def _dot_id(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Generator, labels: bool = True) -> str:
    """Deterministic DOT text: one node per state, one edge per transition."""
    out = [f"digraph {_dot_id(g.name)} {{\n"]
    if not g.is_empty:
        out.append("  rankdir=LR;\n")
        out.append('  __start [shape=point, label=""];\n')
        for q in range(g.state_count):
            shape = "doublecircle" if q in g.marked else "circle"
            out.append(f"  {q} [shape={shape}];\n")
        out.append(f"  __start -> {g.initial};\n")
        for p, e, q in g.transitions:
            ev = g.event(e)
            text = ev.label if labels and ev.label else str(e)
            style = "" if ev.controllable else ", style=dashed"
            out.append(f"  {p} -> {q} [label={_dot_id(text)}{style}];\n")
    out.append("}\n")
    return "".join(out)
