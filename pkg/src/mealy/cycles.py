"""Cycles of the transition digraph and their exit taxonomy.

A cycle is a sequence of pairwise distinct states threaded by letters,
each transition leading to the next state and the last wrapping to the
first.  An exit is a transition from an on-cycle state that does not lead
to that state's successor on the cycle: external when the target is off
the cycle, internal when it lands elsewhere on it.  Automata without any
cycle with exit generate finite semigroups under every choice of outputs,
which is what makes the taxonomy worth computing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .errors import EmptyResult, NotACycle, PreconditionViolated, UnknownSymbol
from .machines import (
    Automaton,
    ComponentPartition,
    MealyMachine,
    Word,
    _underlying,
    ensure_usable,
)

EXTERNAL = "external"
INTERNAL = "internal"

WITH_EXTERNAL_EXIT = "with-external-exit"
WITH_INTERNAL_EXIT_ONLY = "with-internal-exit-only"
WITHOUT_EXIT = "without-exit"


@dataclass(frozen=True)
class Cycle:
    """States and the letters that thread them; same length, wrap-around."""

    states: Word
    letters: Word

    def __len__(self):
        return len(self.states)

    def successor_of(self, k):
        """Cycle successor of the state at position ``k``."""
        return self.states[(k + 1) % len(self.states)]


@dataclass(frozen=True)
class Exit:
    """A transition leaving the cycle path at ``source`` via ``letter``."""

    source: int
    letter: int
    target: int
    kind: str


@dataclass(frozen=True)
class ExitReport:
    cycle: Cycle
    exits: tuple[Exit, ...]
    classification: str


class CycleWitness(NamedTuple):
    cycle: Cycle
    exit: Exit


class PruneResult(NamedTuple):
    automaton: Automaton
    removed: tuple[str, ...]


def check_cycle(a: Automaton, c: Cycle):
    """Raise NotACycle unless ``c`` is a genuine cycle of ``a``."""
    a = _underlying(a)
    n = len(c.states)
    if n == 0:
        raise NotACycle("empty cycle")
    if len(c.letters) != n:
        raise NotACycle(f"{n} states but {len(c.letters)} letters")
    if len(set(c.states)) != n:
        raise NotACycle("states are not pairwise distinct")
    for x in c.states:
        if not 0 <= x < a.n_states:
            raise UnknownSymbol(f"state id {x} out of range")
    for i in c.letters:
        if not 0 <= i < a.n_letters:
            raise UnknownSymbol(f"letter id {i} out of range")
    for k in range(n):
        x, i = c.states[k], c.letters[k]
        y = c.states[(k + 1) % n]
        if a.step(x, i) != y:
            raise NotACycle(
                f"transition {a.states[x]} --{a.alphabet[i]}--> "
                f"{a.states[a.step(x, i)]} does not reach {a.states[y]}")


def cycle_label_from(c: Cycle, k: int) -> Word:
    """The letter word read when travelling the whole cycle from position
    ``k`` back to itself."""
    n = len(c.letters)
    if not 0 <= k < n:
        raise IndexError(f"position {k} out of range for cycle of length {n}")
    return c.letters[k:] + c.letters[:k]


def classify_exits(a: Automaton, c: Cycle) -> ExitReport:
    """Every exit of the cycle, and the cycle's classification.

    Each (on-cycle state, letter) pair is accounted for exactly once: it
    is either an exit or leads to the state's cycle successor.
    """
    a = _underlying(a)
    ensure_usable(a)
    check_cycle(a, c)
    on_cycle = set(c.states)
    exits = []
    for k, x in enumerate(c.states):
        succ = c.successor_of(k)
        for i in range(a.n_letters):
            y = a.step(x, i)
            if y == succ:
                continue
            kind = INTERNAL if y in on_cycle else EXTERNAL
            exits.append(Exit(x, i, y, kind))
    if any(e.kind == EXTERNAL for e in exits):
        classification = WITH_EXTERNAL_EXIT
    elif exits:
        classification = WITH_INTERNAL_EXIT_ONLY
    else:
        classification = WITHOUT_EXIT
    return ExitReport(c, tuple(exits), classification)


def strongly_connected_components(a: Automaton) -> ComponentPartition:
    """Tarjan's algorithm, iterative to keep deep automata off the Python
    recursion limit."""
    a = _underlying(a)
    ensure_usable(a)
    n = a.n_states
    order = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    blocks = []
    counter = 0
    for root in range(n):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            x, edge = work.pop()
            if edge == 0:
                order[x] = low[x] = counter
                counter += 1
                stack.append(x)
                on_stack[x] = True
            advanced = False
            for i in range(edge, a.n_letters):
                y = a.step(x, i)
                if order[y] == -1:
                    work.append((x, i + 1))
                    work.append((y, 0))
                    advanced = True
                    break
                if on_stack[y]:
                    low[x] = min(low[x], order[y])
            if advanced:
                continue
            if low[x] == order[x]:
                block = []
                while True:
                    y = stack.pop()
                    on_stack[y] = False
                    block.append(y)
                    if y == x:
                        break
                blocks.append(tuple(sorted(block)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[x])
    blocks.sort(key=lambda b: b[0])
    return ComponentPartition(tuple(blocks))


def on_cycle_states(a: Automaton) -> frozenset[int]:
    """States lying on at least one cycle: members of a component of size
    two or more, or carrying a self-loop."""
    a = _underlying(a)
    sccs = strongly_connected_components(a)
    out = set()
    for block in sccs.blocks:
        if len(block) > 1:
            out.update(block)
        else:
            x = block[0]
            if any(a.step(x, i) == x for i in range(a.n_letters)):
                out.add(x)
    return frozenset(out)


def extract_cycle_through(a: Automaton, x) -> Cycle:
    """A shortest cycle through state ``x``, found by breadth-first search
    with letters tried in declaration order."""
    a = _underlying(a)
    ensure_usable(a)
    if isinstance(x, str):
        x = a.state_index(x)
    parent = {}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for i in range(a.n_letters):
            v = a.step(u, i)
            if v == x:
                states = [u]
                letters = [i]
                while u != x:
                    u, j = parent[u]
                    states.append(u)
                    letters.append(j)
                states.reverse()
                letters.reverse()
                return Cycle(tuple(states), tuple(letters))
            if v not in parent and v != x:
                parent[v] = (u, i)
                queue.append(v)
    raise NotACycle(f"state {a.states[x]!r} lies on no cycle")


def has_cycle_with_exit(a: Automaton) -> CycleWitness | None:
    """A witness cycle and exit if one exists, else None.

    No cycle has an exit exactly when every on-cycle state has a single
    distinct successor, so the witness search looks for the smallest
    on-cycle state with two successors and threads a shortest cycle
    through it.
    """
    a = _underlying(a)
    ensure_usable(a)
    cyclic = on_cycle_states(a)
    for x in sorted(cyclic):
        if len(a.successors(x)) < 2:
            continue
        cycle = extract_cycle_through(a, x)
        k = cycle.states.index(x)
        succ = cycle.successor_of(k)
        on_cycle = set(cycle.states)
        for i in range(a.n_letters):
            y = a.step(x, i)
            if y == succ:
                continue
            kind = INTERNAL if y in on_cycle else EXTERNAL
            return CycleWitness(cycle, Exit(x, i, y, kind))
    return None


def externalize(a: Automaton, c: Cycle, e: Exit) -> tuple[Cycle, Exit]:
    """Turn an internal exit into a shorter cycle with an external exit.

    The internal exit jumps from position k back to an earlier position m;
    the segment from m to k plus the jump is again a cycle, and the old
    cycle transition out of position k now leaves it.
    """
    a = _underlying(a)
    check_cycle(a, c)
    if e.kind != INTERNAL:
        raise PreconditionViolated("exit to externalize must be internal")
    if e.source not in c.states:
        raise PreconditionViolated("exit source is not on the cycle")
    k = c.states.index(e.source)
    if a.step(e.source, e.letter) != e.target or e.target not in c.states:
        raise PreconditionViolated("exit does not match the cycle")
    if e.target == c.successor_of(k):
        raise PreconditionViolated(
            "transition to the cycle successor is not an exit")
    m = c.states.index(e.target)
    n = len(c.states)
    positions = []
    p = m
    while p != k:
        positions.append(p)
        p = (p + 1) % n
    positions.append(k)
    states = tuple(c.states[p] for p in positions)
    letters = tuple(c.letters[p] for p in positions[:-1]) + (e.letter,)
    shorter = Cycle(states, letters)
    check_cycle(a, shorter)
    new_exit = Exit(e.source, c.letters[k], c.successor_of(k), EXTERNAL)
    return shorter, new_exit


def prune(a: Automaton) -> PruneResult:
    """Restrict to the states reachable from some on-cycle state.

    Keeping or removing the rest does not change whether any enrichment
    of the automaton generates a finite semigroup, which is why every
    analysis here starts by pruning.
    """
    a = _underlying(a)
    ensure_usable(a)
    cyclic = on_cycle_states(a)
    if not cyclic:
        raise EmptyResult("no state lies on a cycle")
    keep = set(cyclic)
    queue = deque(sorted(cyclic))
    while queue:
        x = queue.popleft()
        for i in range(a.n_letters):
            y = a.step(x, i)
            if y not in keep:
                keep.add(y)
                queue.append(y)
    kept = [x for x in range(a.n_states) if x in keep]
    if len(kept) == a.n_states:
        return PruneResult(a, ())
    new_id = {x: p for p, x in enumerate(kept)}
    states = tuple(a.states[x] for x in kept)
    delta = tuple(
        tuple(new_id[a.step(x, i)] for x in kept)
        for i in range(a.n_letters)
    )
    removed = tuple(a.states[x] for x in range(a.n_states) if x not in keep)
    return PruneResult(Automaton(states, a.alphabet, delta), removed)


def prune_machine(m: MealyMachine) -> tuple[MealyMachine, tuple[str, ...]]:
    """Prune the underlying automaton and keep the surviving outputs."""
    ensure_usable(m)
    pruned, removed = prune(m.automaton)
    if not removed:
        return m, ()
    rho = tuple(m.rho[m.state_index(name)] for name in pruned.states)
    return MealyMachine(pruned, rho), removed


def transition_on_cycle(a: Automaton, source, letter) -> bool:
    """Whether the transition lies on some cycle, i.e. whether its source
    and target share a strongly connected component."""
    a = _underlying(a)
    ensure_usable(a)
    if isinstance(source, str):
        source = a.state_index(source)
    if isinstance(letter, str):
        letter = a.letter_index(letter)
    target = a.step(source, letter)
    sccs = strongly_connected_components(a)
    return sccs.block_of(source) == sccs.block_of(target)
