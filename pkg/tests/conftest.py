import random

import pytest
from hypothesis import strategies as st

from desreconf.automaton import Event, Generator
from desreconf.factory import STATES, data_dir
from desreconf.manifest import load_manifest

POOL = [Event(i, None, controllable=bool(i % 2), forcible=(i % 3 == 0)) for i in range(1, 7)]


@pytest.fixture(scope="session")
def sf_manifest():
    return load_manifest(data_dir() / "manifest.json")


@pytest.fixture(scope="session")
def sf(sf_manifest):
    return sf_manifest.run()


@pytest.fixture(scope="session")
def sf_states(sf):
    return {name: sf.rsup.run(w) for name, w in STATES.items()}


@st.composite
def generators(draw, max_states=4, events=POOL[:3], name="G", p_edge=0.5):
    n = draw(st.integers(1, max_states))
    alpha = draw(st.lists(st.sampled_from(events), min_size=0, max_size=len(events), unique=True))
    trans = []
    for q in range(n):
        for e in alpha:
            if draw(st.floats(0, 1)) < p_edge:
                trans.append((q, e.id, draw(st.integers(0, n - 1))))
    marked = draw(st.sets(st.integers(0, n - 1)))
    return Generator(name, alpha, n, 0, marked, trans)


def random_generator(rng: random.Random, max_states, events, name="G", p_edge=0.5,
                     min_states=1, p_mark=0.4):
    n = rng.randint(min_states, max_states)
    trans = [(q, e.id, rng.randrange(n)) for q in range(n) for e in events if rng.random() < p_edge]
    marked = [q for q in range(n) if rng.random() < p_mark]
    return Generator(name, events, n, 0, marked, trans)
