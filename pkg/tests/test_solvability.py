import random

import pytest

from desreconf.automaton import Event, Generator
from desreconf.solvability import (ALL_SIMPLE, PAPER_LITERAL, BacktrackContext, PreemptionRelation,
                                   SolveError, bfc1, bfc2, bfc3, bfc4, collect_paths, context,
                                   oracle_enumerate, solve, solve_event, step_forcible,
                                   target_action)

from conftest import random_generator

SIG = 1          # event under test
C = 3            # controllable competitor
U = 2            # uncontrollable competitor
F = 5            # forcible, controllable
EVS = [Event(1), Event(2, controllable=False), Event(3), Event(4, controllable=False),
       Event(5, forcible=True), Event(7)]


def ctx(comp_c=(), comp_u=(), into=(SIG,)):
    return BacktrackContext(0, 1, frozenset(into), frozenset(comp_c), frozenset(comp_u))


def gen(n, trans, marked=()):
    return Generator("S", EVS, n, 0, marked, trans)


# -- individual conditions -------------------------------------------------

def test_bfc1():
    assert bfc1(ctx())
    assert not bfc1(ctx(comp_c=[C]))


def test_bfc2():
    assert bfc2(ctx(comp_c=[C]))
    assert not bfc2(ctx(comp_c=[C], comp_u=[U]))
    assert not bfc2(ctx())  # covered by BFC-1 instead


def test_bfc3():
    none = PreemptionRelation()
    assert bfc3(ctx(comp_c=[C]), none, SIG)  # no uncontrollable competitor
    assert bfc3(ctx(comp_c=[F], comp_u=[U]), PreemptionRelation([(F, U)]), SIG)
    assert not bfc3(ctx(comp_c=[F], comp_u=[U]), PreemptionRelation([(F, U), (F, SIG)]), SIG)
    assert not bfc3(ctx(comp_c=[C], comp_u=[U]), none, SIG)


def test_bfc4():
    # 0 -1-> 1 (target); 0 -2(u)-> 2; 2 -3-> 1, 2 -7-> 0: all controllable at 2
    g = gen(3, [(0, 1, 1), (0, 2, 2), (2, 3, 1), (2, 7, 0)])
    ok, alts = bfc4(g, context(g, 0, 1))
    assert ok and alts == ((2, 3),)
    # no uncontrollable competitor
    h = gen(2, [(0, 1, 1), (0, 3, 0)])
    assert bfc4(h, context(h, 0, 1)) == (False, ())
    # landing state offers an uncontrollable event
    k = gen(3, [(0, 1, 1), (0, 2, 2), (2, 3, 1), (2, 4, 0)])
    assert not bfc4(k, context(k, 0, 1))[0]
    # landing state has no way into the target
    d = gen(3, [(0, 1, 1), (0, 2, 2)])
    assert not bfc4(d, context(d, 0, 1))[0]


def test_step_forcible_order_and_actions():
    pr = PreemptionRelation()
    g1 = gen(2, [(0, 1, 1)])
    assert step_forcible(g1, context(g1, 0, 1), 1, pr).condition == 1
    g2 = gen(2, [(0, 1, 1), (0, 3, 0)])
    j = step_forcible(g2, context(g2, 0, 1), 1, pr)
    assert j.condition == 2 and j.disabled == {3}
    g3 = gen(2, [(0, 1, 1), (0, 2, 0), (0, 5, 0)])
    j = step_forcible(g3, context(g3, 0, 1), 1, PreemptionRelation([(5, 2)]))
    assert j.condition == 3 and j.forced == {5} and j.disabled == frozenset()
    with pytest.raises(SolveError):
        step_forcible(g3, context(g3, 0, 1), 3, pr)


def test_step_forcible_none():
    # uncontrollable competitor, no preemptor, detour state not fully controllable
    g = gen(3, [(0, 1, 1), (0, 2, 2), (2, 4, 0)])
    assert step_forcible(g, context(g, 0, 1), 1, PreemptionRelation()) is None


def test_commanded_events_do_not_compete():
    g = gen(2, [(0, 1, 1), (0, 5, 0)])
    assert context(g, 0, 1).sigma_comp == {5}
    assert context(g, 0, 1, frozenset([5])).sigma_comp == frozenset()


# -- path collection -------------------------------------------------------

def test_direct_predecessor():
    g = gen(2, [(0, 1, 1)])
    paths = collect_paths(g, 1, 0, PreemptionRelation())
    assert [p.events for p in paths] == [(1,)]


def test_unreachable_source():
    g = gen(3, [(0, 1, 1)])
    assert collect_paths(g, 1, 2, PreemptionRelation()) == ()


def test_same_state_rejected():
    g = gen(2, [(0, 1, 1)])
    with pytest.raises(SolveError):
        solve(g, 1, 1, PreemptionRelation())


def test_solve_verdicts():
    g = gen(3, [(0, 1, 1), (1, 3, 2)])
    v = solve(g, 2, 0, PreemptionRelation())
    assert v.solvable and v.shortest.events == (1, 3) and v.shortest.states == (0, 1, 2)
    assert not solve(g, 0, 2, PreemptionRelation()).solvable


def test_paths_replay_and_justify():
    rng = random.Random(3)
    for _ in range(100):
        sup = random_generator(rng, 8, EVS, "S", p_edge=0.4)
        q_s, q_r = rng.sample(range(sup.state_count), 2) if sup.state_count > 1 else (0, 0)
        if q_s == q_r:
            continue
        for p in collect_paths(sup, q_r, q_s, PreemptionRelation([(5, 2), (5, 4)])):
            assert sup.run(p.events, start=q_s) == q_r
            for st, (a, b) in zip(p.steps, zip(p.states, p.states[1:])):
                assert sup.step(a, st.event) == b
                j = st.justification
                assert j.condition in (1, 2, 3, 4)
                assert all(sup.is_controllable(e) for e in j.disabled)
                assert all(sup.event(e).forcible for e in j.forced)


def test_paper_literal_subset_of_all_simple():
    rng = random.Random(11)
    for _ in range(200):
        sup = random_generator(rng, 10, EVS, "S", p_edge=0.35, min_states=2)
        q_s, q_r = rng.sample(range(sup.state_count), 2)
        pr = PreemptionRelation([(5, 2)] if rng.random() < 0.5 else [])
        full = set(collect_paths(sup, q_r, q_s, pr, ALL_SIMPLE))
        lit = set(collect_paths(sup, q_r, q_s, pr, PAPER_LITERAL))
        assert lit <= full


def test_collect_paths_terminates_on_large_cyclic():
    # rings of 500 states with random chords; some chords uncontrollable
    n = 500
    evs = [Event(1), Event(2, controllable=False), Event(3)]
    found = 0
    for seed in range(5):
        rng = random.Random(seed)
        trans = [(q, 1, (q + 1) % n) for q in range(n)]
        trans += [(q, 2, rng.randrange(n)) for q in range(n) if rng.random() < 0.2]
        trans += [(q, 3, rng.randrange(n)) for q in range(n) if rng.random() < 0.1]
        sup = Generator("ring", evs, n, 0, [0], trans)
        full = collect_paths(sup, 0, 250, PreemptionRelation(), ALL_SIMPLE)
        lit = collect_paths(sup, 0, 250, PreemptionRelation(), PAPER_LITERAL)
        assert set(lit) <= set(full)
        for p in full:
            assert sup.run(p.events, start=250) == 0
        found += len(full)
    assert found > 0


def test_oracle_guard_and_disconnected():
    g = gen(3, [(0, 1, 1)])
    assert oracle_enumerate(g, 2, 0, PreemptionRelation()) == ()
    big = Generator("b", [Event(1)], 201, 0, [], [])
    with pytest.raises(SolveError):
        oracle_enumerate(big, 1, 0, PreemptionRelation())


def test_preemption_default_and_validation():
    g = gen(1, [])
    pr = PreemptionRelation.default(g)
    assert pr.pairs == {(5, 2), (5, 4)}
    with pytest.raises(SolveError):
        PreemptionRelation([(3, 2)]).validate(g)


# -- solve_event -----------------------------------------------------------

def test_solve_event_immediate():
    g = gen(2, [(0, 5, 1)])
    ev = solve_event(g, 0, 5, PreemptionRelation())
    assert ev.solvable and ev.immediate and ev.paths[0].events == ()


def test_solve_event_nowhere_enabled():
    g = gen(2, [(0, 1, 1)])
    ev = solve_event(g, 0, 5, PreemptionRelation())
    assert not ev.solvable and ev.reason == "event nowhere enabled"


def test_solve_event_targets_and_action():
    # 0 -1-> 1; at 1: 5 (switch), 3 (ctrl), 2 (unc)
    g = gen(3, [(0, 1, 1), (1, 5, 2), (1, 3, 1), (1, 2, 0)])
    ev = solve_event(g, 0, 5, PreemptionRelation([(5, 2)]))
    assert ev.solvable and ev.paths[0].events == (1,)
    (act,) = ev.actions
    assert act.disabled == {3} and act.forced == {5} and act.preempted == {2}
    with pytest.raises(SolveError):
        solve_event(g, 0, 5, PreemptionRelation(), targets=[0])
    assert target_action(g, 1, 5, PreemptionRelation()).unpreemptable == {2}


def test_solve_event_lists_shortest_target_first():
    # 5 enabled at 2 (one step away) and at 1 (two steps away)
    g = gen(3, [(0, 3, 2), (2, 1, 1), (1, 5, 0), (2, 5, 0)])
    ev = solve_event(g, 0, 5, PreemptionRelation())
    assert [v.target for v in ev.verdicts] == [2, 1]
    assert ev.paths[0].events == (3,)
