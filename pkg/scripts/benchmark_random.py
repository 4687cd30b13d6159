"""Timing sweep for supcon and the forcible-path collector on random models.

Writes one CSV row per (size, trial) so results can be plotted elsewhere.
All-simple enumeration is exponential in the worst case, so it is only run
on supervisors up to ``all_simple_max_states``; larger rows leave it blank.
"""

import argparse
import csv
import random
import sys
import time
from dataclasses import dataclass, field

from desreconf.automaton import Event, Generator
from desreconf.solvability import ALL_SIMPLE, PAPER_LITERAL, PreemptionRelation, collect_paths
from desreconf.synthesis import supcon


@dataclass
class BenchConfig:
    sizes: list[int] = field(default_factory=lambda: [10, 50, 100, 200, 400])
    trials: int = 5
    n_events: int = 6
    p_edge: float = 0.3
    p_uncontrollable: float = 0.4
    seed: int = 0
    all_simple_max_states: int = 40


def random_alphabet(rng: random.Random, cfg: BenchConfig) -> list[Event]:
    # event 1 stays controllable: it carries the ring that keeps models nonblocking
    return [Event(i, controllable=i == 1 or rng.random() >= cfg.p_uncontrollable,
                  forcible=i % 3 == 0) for i in range(1, cfg.n_events + 1)]


def ring(n: int) -> list[tuple[int, int, int]]:
    return [(q, 1, (q + 1) % n) for q in range(n)]


def random_model(rng: random.Random, n: int, evs: list[Event], cfg: BenchConfig,
                 name: str) -> Generator:
    trans = ring(n) + [(q, e.id, rng.randrange(n)) for q in range(n) for e in evs[1:]
                       if rng.random() < cfg.p_edge]
    marked = [q for q in range(n) if rng.random() < 0.3] or [0]
    return Generator(name, evs, n, 0, marked, trans)


def random_spec(rng: random.Random, n: int, evs: list[Event], cfg: BenchConfig) -> Generator:
    # uncontrollable events are always accepted, so only controllable ones get cut
    trans = ring(n) + [(q, e.id, rng.randrange(n)) for q in range(n) for e in evs[1:]
                       if not e.controllable or rng.random() < 2 * cfg.p_edge]
    marked = [q for q in range(n) if rng.random() < 0.5] or [0]
    return Generator("E", evs, n, 0, marked, trans)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def run(cfg: BenchConfig, out=sys.stdout):
    rng = random.Random(cfg.seed)
    w = csv.writer(out)
    w.writerow(["states", "trial", "supcon_s", "sup_states", "all_simple_s", "all_simple_paths",
                "paper_literal_s", "paper_literal_paths"])
    for n in cfg.sizes:
        for trial in range(cfg.trials):
            evs = random_alphabet(rng, cfg)
            plant = random_model(rng, n, evs, cfg, "P")
            spec = random_spec(rng, max(2, n // 10), evs, cfg)
            res, t_sup = timed(lambda: supcon(plant, spec))
            sup = res.supervisor
            row = [n, trial, f"{t_sup:.4f}", sup.state_count]
            if sup.state_count > 1:
                pr = PreemptionRelation.default(sup)
                q_r, q_s = rng.sample(range(sup.state_count), 2)
                for mode in (ALL_SIMPLE, PAPER_LITERAL):
                    if mode == ALL_SIMPLE and sup.state_count > cfg.all_simple_max_states:
                        row += ["", ""]
                        continue
                    paths, t = timed(lambda: collect_paths(sup, q_r, q_s, pr, mode))
                    row += [f"{t:.4f}", len(paths)]
            else:
                row += ["", "", "", ""]
            w.writerow(row)
            out.flush()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--all-simple-max-states", type=int)
    args = ap.parse_args()
    cfg = BenchConfig(**{k: v for k, v in vars(args).items() if v is not None})
    run(cfg)


if __name__ == "__main__":
    main()
