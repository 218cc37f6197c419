"""Complete deterministic automata and Mealy machines as immutable values.

States and letters are interned: the id of a symbol is its position in the
declaration tuple, and every canonical ordering (iteration, witnesses,
tie-breaks) follows declaration order.  Transition tables are nested tuples
indexed by those ids, with ``None`` marking a missing entry so that
incomplete machines can be represented and diagnosed by :func:`validate`
instead of being unconstructible.

Words over states or letters are tuples of ids.  Functions that take words
also accept strings: ``"x y"`` splits on whitespace, and ``"xy"`` falls back
to one symbol per character when every character is a declared name.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, NamedTuple
from weakref import WeakKeyDictionary

from .errors import (
    BudgetExceeded,
    InvalidAutomaton,
    NotInvertible,
    UnknownSymbol,
)

Word = tuple[int, ...]

DEFAULT_POWER_CAP = 10**6


class Diagnostic(NamedTuple):
    """One validation finding; ``code`` is stable, ``message`` readable."""

    code: str
    message: str

    def __str__(self):
        return self.message


def _intern_word(spec, names, index):
    """Map a word given as ids, names, or a string onto a tuple of ids."""
    if isinstance(spec, str):
        tokens = spec.split()
        if tokens and all(t in index for t in tokens):
            return tuple(index[t] for t in tokens)
        if len(tokens) <= 1 and all(ch in index for ch in spec):
            return tuple(index[ch] for ch in spec)
        raise UnknownSymbol(f"cannot read {spec!r} as a word over {list(names)}")
    out = []
    for sym in spec:
        if isinstance(sym, str):
            if sym not in index:
                raise UnknownSymbol(f"unknown symbol {sym!r}")
            out.append(index[sym])
        else:
            if not 0 <= sym < len(names):
                raise UnknownSymbol(f"id {sym} out of range for {list(names)}")
            out.append(sym)
    return tuple(out)


@dataclass(frozen=True)
class Automaton:
    """A complete deterministic automaton without initial or final states.

    ``delta[i][x]`` is the state reached from state ``x`` on letter ``i``,
    or ``None`` where the table is incomplete.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: tuple[tuple[int | None, ...], ...]

    @classmethod
    def from_maps(cls, states, alphabet, delta):
        """Build from name-keyed maps ``{letter: {state: target_state}}``."""
        states = tuple(states)
        alphabet = tuple(alphabet)
        state_index = {n: i for i, n in enumerate(states)}
        for letter in delta:
            if letter not in alphabet:
                raise UnknownSymbol(f"unknown letter {letter!r}")
        rows = []
        for letter in alphabet:
            entries = delta.get(letter, {})
            for src in entries:
                if src not in state_index:
                    raise UnknownSymbol(f"unknown state {src!r}")
            row = []
            for src in states:
                target = entries.get(src)
                if target is None:
                    row.append(None)
                else:
                    if target not in state_index:
                        raise UnknownSymbol(f"unknown state {target!r}")
                    row.append(state_index[target])
            rows.append(tuple(row))
        return cls(states, alphabet, tuple(rows))

    @property
    def n_states(self):
        return len(self.states)

    @property
    def n_letters(self):
        return len(self.alphabet)

    @cached_property
    def _state_index(self):
        return {n: i for i, n in enumerate(self.states)}

    @cached_property
    def _letter_index(self):
        return {n: i for i, n in enumerate(self.alphabet)}

    def state_index(self, name):
        try:
            return self._state_index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown state {name!r}") from None

    def letter_index(self, name):
        try:
            return self._letter_index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown letter {name!r}") from None

    def state_word(self, spec) -> Word:
        return _intern_word(spec, self.states, self._state_index)

    def letter_word(self, spec) -> Word:
        return _intern_word(spec, self.alphabet, self._letter_index)

    def state_names(self, word):
        return tuple(self.states[x] for x in word)

    def letter_names(self, word):
        return tuple(self.alphabet[i] for i in word)

    def step(self, x, i):
        """Target of the transition from state ``x`` on letter ``i``."""
        y = self.delta[i][x]
        if y is None:
            raise InvalidAutomaton(
                [Diagnostic("incomplete",
                            f"incomplete: state {self.states[x]!r} has no "
                            f"transition on letter {self.alphabet[i]!r}")])
        return y

    def transitions(self) -> Iterator[tuple[int, int, int]]:
        """Yield (state, letter, target) in declaration order, state-major."""
        for x in range(self.n_states):
            for i in range(self.n_letters):
                y = self.delta[i][x]
                if y is not None:
                    yield x, i, y

    def successors(self, x):
        """Distinct targets reachable from ``x`` in one step, by first use."""
        seen = []
        for i in range(self.n_letters):
            y = self.delta[i][x]
            if y is not None and y not in seen:
                seen.append(y)
        return tuple(seen)


@dataclass(frozen=True)
class MealyMachine:
    """An automaton together with output functions.

    ``rho[x][i]`` is the letter produced when state ``x`` reads letter
    ``i``; the state moves to ``automaton.delta[i][x]``.
    """

    automaton: Automaton
    rho: tuple[tuple[int | None, ...], ...]

    @classmethod
    def from_maps(cls, states, alphabet, delta, rho):
        """Build from name-keyed maps; ``rho`` is ``{state: {letter: letter}}``."""
        automaton = Automaton.from_maps(states, alphabet, delta)
        letter_index = {n: i for i, n in enumerate(automaton.alphabet)}
        for src in rho:
            if src not in automaton.states:
                raise UnknownSymbol(f"unknown state {src!r}")
        rows = []
        for name in automaton.states:
            entries = rho.get(name, {})
            for letter in entries:
                if letter not in letter_index:
                    raise UnknownSymbol(f"unknown letter {letter!r}")
            row = []
            for letter in automaton.alphabet:
                out = entries.get(letter)
                if out is None:
                    row.append(None)
                else:
                    if out not in letter_index:
                        raise UnknownSymbol(f"unknown letter {out!r}")
                    row.append(letter_index[out])
            rows.append(tuple(row))
        return cls(automaton, tuple(rows))

    @property
    def states(self):
        return self.automaton.states

    @property
    def alphabet(self):
        return self.automaton.alphabet

    @property
    def delta(self):
        return self.automaton.delta

    @property
    def n_states(self):
        return self.automaton.n_states

    @property
    def n_letters(self):
        return self.automaton.n_letters

    def state_index(self, name):
        return self.automaton.state_index(name)

    def letter_index(self, name):
        return self.automaton.letter_index(name)

    def state_word(self, spec) -> Word:
        return self.automaton.state_word(spec)

    def letter_word(self, spec) -> Word:
        return self.automaton.letter_word(spec)

    def state_names(self, word):
        return self.automaton.state_names(word)

    def letter_names(self, word):
        return self.automaton.letter_names(word)

    def output(self, x, i):
        j = self.rho[x][i]
        if j is None:
            raise InvalidAutomaton(
                [Diagnostic("incomplete",
                            f"incomplete: state {self.states[x]!r} has no "
                            f"output on letter {self.alphabet[i]!r}")])
        return j

    def transitions(self) -> Iterator[tuple[int, int, int, int]]:
        """Yield (state, letter, target, output) in declaration order."""
        for x, i, y in self.automaton.transitions():
            j = self.rho[x][i]
            if j is not None:
                yield x, i, y, j


def _underlying(obj) -> Automaton:
    return obj.automaton if isinstance(obj, MealyMachine) else obj


def _automaton_diagnostics(a: Automaton):
    diags = []
    if not a.states:
        diags.append(Diagnostic("empty", "stateset is empty"))
    if not a.alphabet:
        diags.append(Diagnostic("empty", "alphabet is empty"))
    if len(a.delta) != a.n_letters:
        diags.append(Diagnostic(
            "shape", f"delta has {len(a.delta)} rows for "
                     f"{a.n_letters} letters"))
    for i, row in enumerate(a.delta):
        letter = a.alphabet[i] if i < a.n_letters else f"#{i}"
        if len(row) != a.n_states:
            diags.append(Diagnostic(
                "shape", f"delta row for letter {letter!r} has {len(row)} "
                         f"entries for {a.n_states} states"))
            continue
        for x, y in enumerate(row):
            if y is None:
                diags.append(Diagnostic(
                    "incomplete",
                    f"incomplete: state {a.states[x]!r} has no transition "
                    f"on letter {letter!r}"))
            elif not 0 <= y < a.n_states:
                diags.append(Diagnostic(
                    "range",
                    f"transition from state {a.states[x]!r} on letter "
                    f"{letter!r} targets unknown id {y}"))
    return diags


def validate(obj):
    """Check the structural invariants, returning a list of diagnostics.

    An empty list means valid.  For a Mealy machine both the transition
    table and the output table are checked.  The two-letter alphabet
    convention is reported for the machine's own alphabet only; it is an
    analysis assumption, not a construction restriction.
    """
    a = _underlying(obj)
    diags = _automaton_diagnostics(a)
    if a.n_letters == 1:
        diags.append(Diagnostic(
            "alphabet-size",
            f"alphabet has 1 letter ({a.alphabet[0]!r}), analysis assumes "
            f"at least 2"))
    if isinstance(obj, MealyMachine):
        if len(obj.rho) != a.n_states:
            diags.append(Diagnostic(
                "shape", f"rho has {len(obj.rho)} rows for "
                         f"{a.n_states} states"))
        for x, row in enumerate(obj.rho):
            if x >= a.n_states:
                break
            if len(row) != a.n_letters:
                diags.append(Diagnostic(
                    "shape", f"rho row for state {a.states[x]!r} has "
                             f"{len(row)} entries for {a.n_letters} letters"))
                continue
            for i, j in enumerate(row):
                if j is None:
                    diags.append(Diagnostic(
                        "incomplete",
                        f"incomplete: state {a.states[x]!r} has no output "
                        f"on letter {a.alphabet[i]!r}"))
                elif not 0 <= j < a.n_letters:
                    diags.append(Diagnostic(
                        "range",
                        f"output of state {a.states[x]!r} on letter "
                        f"{a.alphabet[i]!r} is unknown id {j}"))
    return diags


def ensure_usable(obj):
    """Raise InvalidAutomaton unless the tables are complete and in range.

    The alphabet-size convention is not enforced here, so degenerate but
    well-formed machines (one state, one letter) stay usable.
    """
    diags = [d for d in validate(obj) if d.code != "alphabet-size"]
    if diags:
        raise InvalidAutomaton(diags)


def is_reversible(obj) -> bool:
    """True iff every letter acts on the states as a permutation."""
    a = _underlying(obj)
    ensure_usable(a)
    full = list(range(a.n_states))
    return all(sorted(row) == full for row in a.delta)


def is_invertible(m: MealyMachine) -> bool:
    """True iff every state's output function permutes the alphabet."""
    ensure_usable(m)
    full = list(range(m.n_letters))
    return all(sorted(row) == full for row in m.rho)


def inverse(m: MealyMachine) -> MealyMachine:
    """The inverse machine, on states named ``x^-1``.

    A transition x reading i, writing j, moving to y becomes x^-1 reading
    j, writing i, moving to y^-1.  Requires an invertible machine.
    """
    ensure_usable(m)
    if not is_invertible(m):
        raise NotInvertible("output functions are not all permutations")
    n, k = m.n_states, m.n_letters
    inv_rho = []
    for x in range(n):
        row = [0] * k
        for i in range(k):
            row[m.rho[x][i]] = i
        inv_rho.append(tuple(row))
    delta = tuple(
        tuple(m.delta[inv_rho[x][j]][x] for x in range(n))
        for j in range(k)
    )
    states = tuple(f"{name}^-1" for name in m.states)
    return MealyMachine(Automaton(states, m.alphabet, delta), tuple(inv_rho))


def is_bireversible(m: MealyMachine) -> bool:
    """True iff the machine and its inverse are both invertible and
    reversible.  All four checks are made literally."""
    if not is_invertible(m):
        return False
    inv = inverse(m)
    return is_reversible(m) and is_invertible(inv) and is_reversible(inv)


def dual(m: MealyMachine) -> MealyMachine:
    """Swap the roles of states and letters.

    The dual's transition table is the output table of ``m`` and vice
    versa, so taking the dual twice gives back ``m`` exactly.  The dual of
    a one-state machine has a one-letter alphabet; it is constructed all
    the same and :func:`validate` flags it.
    """
    ensure_usable(m)
    return MealyMachine(Automaton(m.alphabet, m.states, m.rho), m.delta)


def _rho_step(m, x, s):
    # image of letter word s through the production of single state x
    delta, rho = m.delta, m.rho
    out = []
    cur = x
    for c in s:
        out.append(rho[cur][c])
        cur = delta[c][cur]
    return out


def _delta_step(m, i, u):
    # image of state word u under letter i, with the final carried letter
    delta, rho = m.delta, m.rho
    out = []
    cur = i
    for x in u:
        out.append(delta[cur][x])
        cur = rho[x][cur]
    return out, cur


def apply_rho(m: MealyMachine, u, s) -> Word:
    """Image of the letter word ``s`` under the production function of the
    state word ``u`` (first state of ``u`` applied first).

    The result has the length of ``s``; the empty state word acts as the
    identity.
    """
    ensure_usable(m)
    u = m.state_word(u)
    s = list(m.letter_word(s))
    for x in u:
        s = _rho_step(m, x, s)
    return tuple(s)


def apply_delta(m: MealyMachine, s, u) -> Word:
    """Image of the state word ``u`` under the transition function of the
    letter word ``s`` (first letter of ``s`` applied first).

    This is the production function of ``s`` in the dual machine.
    """
    ensure_usable(m)
    s = m.letter_word(s)
    u = list(m.state_word(u))
    for i in s:
        u, _ = _delta_step(m, i, u)
    return tuple(u)


def _join_sep(names):
    sep = "" if all(len(n) == 1 for n in names) else "."
    while any(sep and sep in n for n in names):
        sep += "."
    return sep


def power(m: MealyMachine, n: int, cap: int = DEFAULT_POWER_CAP) -> MealyMachine:
    """The machine on state words of length ``n`` over the same alphabet.

    Eager construction; raises BudgetExceeded when the stateset would
    exceed ``cap``.  ``power(m, 1)`` is structurally equal to ``m``.
    """
    ensure_usable(m)
    if n < 1:
        raise ValueError("power wants n >= 1")
    count = m.n_states**n
    if count > cap:
        raise BudgetExceeded(f"{count} states exceeds cap {cap}")
    sep = _join_sep(m.states)
    words = list(product(range(m.n_states), repeat=n))
    index = {w: p for p, w in enumerate(words)}
    names = tuple(sep.join(m.states[x] for x in w) for w in words)
    k = m.n_letters
    delta_rows = [[0] * count for _ in range(k)]
    rho_rows = [[0] * k for _ in range(count)]
    for p, w in enumerate(words):
        for i in range(k):
            img, out = _delta_step(m, i, w)
            delta_rows[i][p] = index[tuple(img)]
            rho_rows[p][i] = out
    automaton = Automaton(names, m.alphabet,
                          tuple(tuple(r) for r in delta_rows))
    return MealyMachine(automaton, tuple(tuple(r) for r in rho_rows))


@dataclass(frozen=True)
class ComponentPartition:
    """A partition of the stateset; blocks ordered by smallest member."""

    blocks: tuple[tuple[int, ...], ...]

    @property
    def sizes(self):
        return tuple(len(b) for b in self.blocks)

    @cached_property
    def _block_index(self):
        idx = {}
        for b, block in enumerate(self.blocks):
            for x in block:
                idx[x] = b
        return idx

    def block_of(self, x):
        return self._block_index[x]

    def __len__(self):
        return len(self.blocks)


def connected_components(obj) -> ComponentPartition:
    """Weakly connected components of the transition digraph."""
    a = _underlying(obj)
    ensure_usable(a)
    n = a.n_states
    neighbours = [set() for _ in range(n)]
    for x, _, y in a.transitions():
        neighbours[x].add(y)
        neighbours[y].add(x)
    seen = [False] * n
    blocks = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        block = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(neighbours[x]):
                if not seen[y]:
                    seen[y] = True
                    block.append(y)
                    queue.append(y)
        blocks.append(tuple(sorted(block)))
    return ComponentPartition(tuple(blocks))


_EQ_MEMO: WeakKeyDictionary = WeakKeyDictionary()


def _equal_interned(m, u, v, fuel=None) -> bool | None:
    # core of equal_production over already-interned words of a machine
    # known to be usable; hot path for the closure enumeration.  ``fuel``
    # is a mutable one-element work budget decremented per explored
    # pair; running out aborts with None instead of an answer
    if u == v:
        return True
    memo = _EQ_MEMO.get(m)
    if memo is None:
        memo = {}
        _EQ_MEMO[m] = memo
    root = (u, v) if u <= v else (v, u)
    cached = memo.get(root)
    if cached is not None:
        return cached
    letters = range(m.n_letters)
    parent = {root: None}
    queue = deque([root])
    bad = None
    while queue:
        if fuel is not None:
            if fuel[0] <= 0:
                return None
            fuel[0] -= 1
        pair = queue.popleft()
        known = memo.get(pair)
        if known is True:
            continue
        if known is False:
            bad = pair
            break
        a, b = pair
        mismatch = False
        for i in letters:
            img_a, out_a = _delta_step(m, i, a)
            img_b, out_b = _delta_step(m, i, b)
            if out_a != out_b:
                mismatch = True
                break
            succ = tuple(img_a), tuple(img_b)
            if succ[0] == succ[1]:
                continue
            if succ[0] > succ[1]:
                succ = (succ[1], succ[0])
            if succ not in parent:
                parent[succ] = pair
                queue.append(succ)
        if mismatch:
            bad = pair
            break
    if bad is None:
        for pair in parent:
            memo[pair] = True
        return True
    # a pair that reaches an unequal pair under letters is itself
    # unequal, so the whole search path from the root is settled
    while bad is not None:
        memo[bad] = False
        bad = parent[bad]
    return False


def equal_production(m: MealyMachine, u, v) -> bool:
    """Whether two state words induce the same function on letter words.

    Decided by closing the pair (u, v) under the transition action and
    checking that single-letter outputs agree everywhere; this is a
    bisimulation proof, exact at any word length.  Verified pairs are
    memoized per machine.
    """
    ensure_usable(m)
    return _equal_interned(m, m.state_word(u), m.state_word(v))
