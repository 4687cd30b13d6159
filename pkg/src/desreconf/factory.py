"""SMALL FACTORY: two machines feeding through one of two buffers.

M1 takes a workpiece (11) and deposits it in BUF1 (30) or BUF2 (32); M2
takes from BUF1 (31) or BUF2 (33) and finishes (20). Either machine can
break down while working (12 / 22) and be repaired (13 / 23). BUF1 holds
three workpieces, BUF2 one; both are specifications guarding against
overflow and underflow. Configuration C1 runs with BUF1, C2 with BUF2;
switch events 91 (C1 -> C2) and 93 (C2 -> C1) change mode.
"""

from __future__ import annotations

from pathlib import Path

from .automaton import Event, Generator, odd_controllable
from .io import dump_json, write_generator

LABELS = {
    11: "M1_take", 12: "M1_break", 13: "M1_repair",
    20: "M2_done", 22: "M2_break", 23: "M2_repair",
    30: "M1_to_BUF1", 31: "M2_from_BUF1", 32: "M1_to_BUF2", 33: "M2_from_BUF2",
    91: "to_C2", 93: "to_C1",
}

# named witness strings, replayed from the initial state of RSUP
STATES = {
    "buf1_full_m2_down": [11, 30, 11, 30, 31, 22, 11, 30, 11, 30],
    "buf1_empty_m2_busy": [11, 30, 11, 30, 31, 22, 11, 30, 11, 30, 23, 31, 20, 31, 20, 31],
}

IDLE, WORKING, DOWN = 0, 1, 2


def event(eid: int) -> Event:
    return odd_controllable(eid, LABELS.get(eid))


def machine(name: str, start: list[int], finish: list[int], breakdown: int, repair: int) -> Generator:
    """Idle / working / down machine; idle is initial and marked."""
    evs = [event(e) for e in start + finish + [breakdown, repair]]
    trans = [(IDLE, e, WORKING) for e in start]
    trans += [(WORKING, e, IDLE) for e in finish]
    trans += [(WORKING, breakdown, DOWN), (DOWN, repair, IDLE)]
    return Generator(name, evs, 3, IDLE, [IDLE], trans)


def buffer(name: str, slots: int, put: int, take: int) -> Generator:
    """Counter 0..slots; ``put`` past capacity and ``take`` from empty are undefined."""
    trans = [(k, put, k + 1) for k in range(slots)] + [(k + 1, take, k) for k in range(slots)]
    return Generator(name, [event(put), event(take)], slots + 1, 0, [0], trans)


def components() -> list[Generator]:
    return [machine("M1", [11], [30, 32], 12, 13),
            machine("M2", [31, 33], [20], 22, 23)]


def specs() -> list[Generator]:
    return [buffer("BUF1", 3, 30, 31), buffer("BUF2", 1, 32, 33)]


def manifest_dict() -> dict:
    return {
        "name": "small-factory",
        "components": ["M1.json", "M2.json"],
        "specs": ["BUF1.json", "BUF2.json"],
        "configurations": {"C1": ["M1", "M2", "BUF1"], "C2": ["M1", "M2", "BUF2"]},
        "switches": [
            {"id": 91, "label": LABELS[91], "from": "C1", "to": "C2"},
            {"id": 93, "label": LABELS[93], "from": "C2", "to": "C1"},
        ],
        "initial": "C1",
        "states": STATES,
        "options": {"one_way": False, "mode": "all-simple"},
    }


def write_small_factory(directory: str | Path) -> Path:
    """Write component, spec and manifest files; returns the manifest path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for g in components() + specs():
        write_generator(g, d / f"{g.name}.json")
    out = d / "manifest.json"
    out.write_text(dump_json(manifest_dict()))
    return out


def data_dir() -> Path:
    return Path(__file__).parent / "data" / "small_factory"
