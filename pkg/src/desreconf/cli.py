"""Command-line front end.

Exit codes: 0 success (or SOLVABLE), 1 UNSOLVABLE, 2 input error,
3 precondition violation (alphabet conflicts, spec outside plant alphabet).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import automaton as am
from .io import FormatError, dump_json, dumps_generator as _dumps, read_generator, statemap_to_dict, to_dot
from .manifest import Manifest, Pipeline, load_manifest
from .reconfig import ReconfigError
from .solvability import MODES, EventVerdict, solve_event
from .synthesis import SynthesisError, is_controllable, supcon

OK, UNSOLVABLE, INPUT_ERROR, PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _sidecar(out: Path, kind: str) -> Path:
    return out.with_suffix(f".{kind}.json")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _emit(args, data: dict, text: str) -> None:
    print(json.dumps(data, sort_keys=True) if args.json else text)


def cmd_sync(args) -> int:
    gs = [read_generator(f) for f in args.files]
    g, m = am.sync(gs, name=args.name)
    out = Path(args.out)
    _write(out, _dumps(g))
    _write(_sidecar(out, "map"), json.dumps(statemap_to_dict(m)) + "\n")
    _emit(args, {"states": g.state_count, "transitions": len(g.transitions), "out": str(out)},
          f"{g.name}: {g.state_count} states, {len(g.transitions)} transitions -> {out}")
    return OK


def cmd_supcon(args) -> int:
    plant = read_generator(args.plant)
    spec = read_generator(args.spec)
    res = supcon(plant, spec, name=args.name)
    out = Path(args.out)
    _write(out, _dumps(res.supervisor))
    _write(_sidecar(out, "disabled"), json.dumps(
        {str(q): sorted(d) for q, d in enumerate(res.disabled) if d}, sort_keys=False) + "\n")
    _write(_sidecar(out, "map"), json.dumps(
        {"names": [plant.name, spec.name],
         "rows": [[p, s] for p, s in zip(res.plant_map, res.spec_map)]}) + "\n")
    if res.is_empty:
        print(f"warning: supervisor {res.supervisor.name} is empty", file=sys.stderr)
    g = res.supervisor
    _emit(args, {"states": g.state_count, "transitions": len(g.transitions), "out": str(out)},
          f"{g.name}: {g.state_count} states, {len(g.transitions)} transitions -> {out}")
    return OK


def cmd_allevents(args) -> int:
    g = am.allevents(read_generator(args.file), name=args.name)
    _write(Path(args.out), _dumps(g))
    return OK


def cmd_rs_build(args) -> int:
    m = load_manifest(args.manifest)
    rs = m.build_rs(args.one_way or None, args.initial)
    _write(Path(args.out), _dumps(rs.automaton))
    _emit(args, {"configurations": list(rs.config_of_state),
                 "switches": sorted(rs.switch_ids), "out": args.out},
          f"RS: {rs.automaton.state_count} configurations, switches {sorted(rs.switch_ids)} -> {args.out}")
    return OK


def _pipeline(m: Manifest, args) -> Pipeline:
    return m.run(args.one_way or None, args.initial, args.forbid)


def summary(pl: Pipeline) -> dict:
    ok, witness = is_controllable(pl.gmode, pl.rsup)
    return {
        "gmode": {"states": pl.gmode.state_count, "transitions": len(pl.gmode.transitions)},
        "rsup": {"states": pl.rsup.state_count, "transitions": len(pl.rsup.transitions),
                 "controllable": ok, "trim": am.is_trim(pl.rsup), "empty": pl.rsup.is_empty},
    }


def cmd_rsup(args) -> int:
    m = load_manifest(args.manifest)
    pl = _pipeline(m, args)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "rs.json", _dumps(pl.rs.automaton))
    _write(out / "gmode.json", _dumps(pl.gmode))
    _write(out / "gmode.map.json", json.dumps(statemap_to_dict(pl.gmap)) + "\n")
    _write(out / "rsup.json", _dumps(pl.rsup))
    _write(out / "rsup.map.json", json.dumps(statemap_to_dict(pl.rsup_map())) + "\n")
    _write(out / "rsup.disabled.json", json.dumps(
        {str(q): sorted(d) for q, d in enumerate(pl.result.disabled) if d}) + "\n")
    s = summary(pl)
    _write(out / "summary.json", dump_json(s))
    r = s["rsup"]
    text = (f"GMODE: {s['gmode']['states']} states, {s['gmode']['transitions']} transitions\n"
            f"RSUP: {r['states']} states, {r['transitions']} transitions\n"
            f"controllable: {'yes' if r['controllable'] else 'NO'}, trim: {'yes' if r['trim'] else 'NO'}")
    if r["empty"]:
        print("warning: RSUP is empty", file=sys.stderr)
    _emit(args, s, text)
    return OK


def resolve_state(g: am.Generator, m: Manifest, ref: str) -> int:
    """Integer -> state index; manifest state name or comma-separated
    events -> state reached by replaying that string from the initial state."""
    ref = ref.strip()
    if g.is_empty:
        raise InputError("supervisor is empty")
    if ref.isdigit():
        q = int(ref)
        if q >= g.state_count:
            raise InputError(f"state {q} out of range")
        return q
    if ref in m.states:
        events = m.states[ref]
    else:
        try:
            events = [int(x) for x in ref.replace(" ", ",").split(",") if x]
        except ValueError:
            raise InputError(f"{ref!r} is neither a state, a named state nor an event string") from None
    q = g.run(events)
    if q is None:
        raise InputError(f"witness string {events} is not in the closed behaviour")
    return q


def report_dict(ev: EventVerdict, pl: Pipeline) -> dict:
    targets = []
    actions = {a.state: a for a in ev.actions}
    for v in ev.verdicts:
        t = {"target": v.target, "solvable": v.solvable,
             "paths": [p.as_dict() for p in v.paths]}
        if v.target in actions:
            t["action"] = actions[v.target].as_dict()
        if v.reason:
            t["reason"] = v.reason
        targets.append(t)
    return {"verdict": "SOLVABLE" if ev.solvable else "UNSOLVABLE", "event": ev.event,
            "source": ev.source, "configuration": pl.config_of(ev.source),
            "shortest": list(ev.paths[0].events) if ev.paths else None,
            "reason": ev.reason, "targets": targets}


def _fmt(events) -> str:
    return "{" + ", ".join(str(e) for e in sorted(events)) + "}"


def report_text(ev: EventVerdict, pl: Pipeline) -> str:
    lines = [f"verdict: {'SOLVABLE' if ev.solvable else 'UNSOLVABLE'}",
             f"event {ev.event} requested at state {ev.source} (configuration {pl.config_of(ev.source)})"]
    if ev.reason:
        lines.append(f"reason: {ev.reason}")
    paths = ev.paths
    if paths:
        lines.append(f"shortest: <{','.join(map(str, paths[0].events))}>")
    actions = {a.state: a for a in ev.actions}
    for v in ev.verdicts:
        if not v.solvable:
            continue
        lines.append(f"target {v.target}: {len(v.paths)} path(s)")
        for i, p in enumerate(v.paths, 1):
            lines.append(f"  path {i}: <{','.join(map(str, p.events))}>  states {' '.join(map(str, p.states))}")
            for st in p.steps:
                j = st.justification
                extra = []
                if j.disabled:
                    extra.append(f"disable {_fmt(j.disabled)}")
                if j.forced:
                    extra.append(f"force {_fmt(j.forced)}")
                if j.alternates:
                    extra.append("alternates " + " ".join(f"<{a},{b}>" for a, b in j.alternates))
                lines.append(f"    {st.source} --{st.event}--> {st.target}  {j.label}"
                             + ("  " + "; ".join(extra) if extra else ""))
        a = actions[v.target]
        act = f"  at target {v.target}: disable {_fmt(a.disabled)}"
        if a.preempted:
            act += f"; force {a.event} preempting {_fmt(a.preempted)}"
        if a.unpreemptable:
            act += f"; cannot preempt {_fmt(a.unpreemptable)}"
        lines.append(act)
    return "\n".join(lines)


def cmd_solve(args) -> int:
    m = load_manifest(args.manifest)
    pl = _pipeline(m, args)
    sup = pl.rsup
    q_s = resolve_state(sup, m, args.source)
    targets = None
    if args.to is not None:
        targets = [resolve_state(sup, m, args.to)]
    pr = m.preemption_for(sup)
    mode = args.mode or m.mode
    if not sup.has_event(args.event):
        ev = EventVerdict(False, args.event, q_s, (), reason="event nowhere enabled")
    else:
        try:
            ev = solve_event(sup, q_s, args.event, pr, mode, commanded=m.switch_ids, targets=targets)
        except am.AutomatonError as exc:
            raise InputError(str(exc)) from None
    _emit(args, report_dict(ev, pl), report_text(ev, pl))
    return OK if ev.solvable else UNSOLVABLE


def cmd_dot(args) -> int:
    text = to_dot(read_generator(args.file), labels=not args.ids)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="desreconf", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sync", help="synchronous product of generator files")
    s.add_argument("files", nargs="+")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--name")
    s.set_defaults(func=cmd_sync)

    s = sub.add_parser("supcon", help="supremal controllable sublanguage")
    s.add_argument("plant")
    s.add_argument("spec")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--name")
    s.set_defaults(func=cmd_supcon)

    s = sub.add_parser("allevents", help="one-state selfloop generator over a file's alphabet")
    s.add_argument("file")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--name")
    s.set_defaults(func=cmd_allevents)

    def pipeline_opts(s):
        s.add_argument("--one-way", action="store_true", help="drop switches returning to an earlier configuration")
        s.add_argument("--initial", help="start the RS in this configuration")
        s.add_argument("--forbid", type=int, nargs="*", default=None,
                       help="events the behavioural spec never allows (replaces the manifest list)")

    s = sub.add_parser("rs-build", help="write the reconfiguration specification")
    s.add_argument("manifest")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--one-way", action="store_true")
    s.add_argument("--initial")
    s.set_defaults(func=cmd_rs_build)

    s = sub.add_parser("rsup", help="build GMODE and synthesize RSUP")
    s.add_argument("manifest")
    s.add_argument("-o", "--outdir", required=True)
    pipeline_opts(s)
    s.set_defaults(func=cmd_rsup)

    s = sub.add_parser("solve", help="decide a reconfiguration request")
    s.add_argument("manifest")
    s.add_argument("--from", dest="source", required=True,
                   help="state index, named state, or comma-separated witness events")
    s.add_argument("--event", type=int, required=True)
    s.add_argument("--to", help="restrict to this source state of the switch event")
    s.add_argument("--mode", choices=MODES)
    pipeline_opts(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("dot", help="export a generator as Graphviz DOT")
    s.add_argument("file")
    s.add_argument("-o", "--out")
    s.add_argument("--ids", action="store_true", help="label edges with event ids, not labels")
    s.set_defaults(func=cmd_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (am.AlphabetConflict, SynthesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PRECONDITION
    except (FormatError, InputError, ReconfigError, am.AutomatonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
