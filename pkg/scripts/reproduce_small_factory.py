"""Rebuild RSUP for the two-machine factory and solve the buffer-drain request.

Prints the model sizes, the forcible paths from the full-buffer state to the
drained state where switch event 91 can fire, and the control action there.
"""

import argparse
import json
import time
from pathlib import Path

from desreconf.automaton import is_trim
from desreconf.cli import report_dict, report_text
from desreconf.factory import data_dir
from desreconf.manifest import load_manifest
from desreconf.solvability import MODES, solve_event
from desreconf.synthesis import is_controllable


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--manifest", type=Path, default=data_dir() / "manifest.json")
    ap.add_argument("--source", default="buf1_full_m2_down")
    ap.add_argument("--target", default="buf1_empty_m2_busy",
                    help="named state to drive to; 'any' tries every source of the event")
    ap.add_argument("--event", type=int, default=91)
    ap.add_argument("--mode", choices=MODES, default="all-simple")
    ap.add_argument("--one-way", action="store_true")
    ap.add_argument("--json", type=Path, help="also write the report here")
    args = ap.parse_args()

    m = load_manifest(args.manifest)
    t0 = time.perf_counter()
    pl = m.run(one_way=args.one_way or None)
    t_syn = time.perf_counter() - t0
    sup = pl.rsup
    print(f"GMODE {pl.gmode.state_count} states / {len(pl.gmode.transitions)} transitions")
    print(f"RSUP  {sup.state_count} states / {len(sup.transitions)} transitions "
          f"(controllable={is_controllable(pl.gmode, sup)[0]}, trim={is_trim(sup)}) "
          f"in {t_syn * 1e3:.1f} ms")

    q_s = sup.run(m.states[args.source])
    targets = None if args.target == "any" else [sup.run(m.states[args.target])]
    t0 = time.perf_counter()
    ev = solve_event(sup, q_s, args.event, m.preemption_for(sup), args.mode,
                     commanded=m.switch_ids, targets=targets)
    print(f"solved in {(time.perf_counter() - t0) * 1e3:.1f} ms\n")
    print(report_text(ev, pl))
    if args.json:
        args.json.write_text(json.dumps(report_dict(ev, pl), indent=1) + "\n")


if __name__ == "__main__":
    main()
