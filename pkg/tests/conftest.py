"""Shared fixtures: corpus documents, hand-built machines, and seeded
random generators used across the suite."""

import random
from itertools import product
from pathlib import Path

import pytest

from mealy import Automaton, MealyMachine, parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_text(name):
    return (CORPUS / name).read_text()


def corpus_machine(name):
    return parse(corpus_text(name))


@pytest.fixture
def adding_machine():
    return corpus_machine("adding-machine.mealy")


@pytest.fixture
def adding_underlying():
    return corpus_machine("adding-machine-underlying.aut")


@pytest.fixture
def taxonomy():
    return corpus_machine("exit-taxonomy.aut")


@pytest.fixture
def identity_machine():
    return corpus_machine("identity.mealy")


@pytest.fixture
def no_exit_automaton():
    return corpus_machine("no-exit.aut")


@pytest.fixture
def flip():
    # one state over {0,1}, output inverted, the generator of order 2
    return MealyMachine(Automaton(("q",), ("0", "1"), ((0,), (0,))),
                        ((1, 0),))


@pytest.fixture
def swap_id():
    # two parallel one-state machines: a transposition and an identity
    return MealyMachine(
        Automaton(("p", "q"), ("0", "1"), ((0, 1), (0, 1))),
        ((1, 0), (0, 1)))


def random_automaton(rng, n_states, n_letters):
    states = tuple(f"s{i}" for i in range(n_states))
    alphabet = tuple(str(i) for i in range(n_letters))
    delta = tuple(tuple(rng.randrange(n_states) for _ in range(n_states))
                  for _ in range(n_letters))
    return Automaton(states, alphabet, delta)


def random_reversible_automaton(rng, n_states, n_letters):
    states = tuple(f"s{i}" for i in range(n_states))
    alphabet = tuple(str(i) for i in range(n_letters))
    delta = tuple(tuple(rng.sample(range(n_states), n_states))
                  for _ in range(n_letters))
    return Automaton(states, alphabet, delta)


def random_mealy(rng, n_states, n_letters):
    a = random_automaton(rng, n_states, n_letters)
    rho = tuple(tuple(rng.randrange(n_letters) for _ in range(n_letters))
                for _ in range(n_states))
    return MealyMachine(a, rho)


def random_invertible_mealy(rng, n_states, n_letters):
    a = random_automaton(rng, n_states, n_letters)
    rho = tuple(tuple(rng.sample(range(n_letters), n_letters))
                for _ in range(n_states))
    return MealyMachine(a, rho)


def behavior_table(m, u, depth):
    """Outputs of the production of state word ``u`` on every input word
    of length <= depth, computed by plainly running the machine copy by
    copy.  Independent of the library's own streaming helpers."""
    rows = []
    for length in range(1, depth + 1):
        for w in product(range(m.n_letters), repeat=length):
            cur = list(w)
            for x in u:
                state = x
                out = []
                for i in cur:
                    out.append(m.rho[state][i])
                    state = m.delta[i][state]
                cur = out
            rows.append(tuple(cur))
    return tuple(rows)


def brute_equal(m, u, v, depth):
    return behavior_table(m, u, depth) == behavior_table(m, v, depth)


def fresh_rng(seed):
    return random.Random(seed)
