"""Reconfiguration supervisors for untimed discrete-event systems."""

from .automaton import (AlphabetConflict, AutomatonError, Event, Generator, StateMap,
                        allevents, canonical_renumber, coreachable, enabled_events,
                        language_sample, reachable, sync, trim)
from .reconfig import (Configuration, ReconfigSpec, SwitchEvent, build_gmode, build_rs,
                       build_rsup, re_source_states)
from .solvability import (PreemptionRelation, collect_paths, oracle_enumerate, solve,
                          solve_event)
from .synthesis import SupconResult, is_controllable, supcon, verify_supremality

__version__ = "0.1.0"
