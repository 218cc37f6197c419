"""Choosing output functions that force an infinite (semi)group.

Each construction takes a bare automaton whose transition structure has a
cycle with an exit and equips it with permutation outputs so that the
resulting machine provably generates an infinite group.  The top-level
:func:`enrich` prunes, then picks the cheapest construction that applies
and reports which one it used as a certificate tag.
"""

from __future__ import annotations

from collections import deque
from enum import Enum
from dataclasses import dataclass
from typing import NamedTuple

from .errors import NoExitCycle, NoSuchTriple, PreconditionViolated
from .machines import Automaton, MealyMachine, ensure_usable, is_reversible
from .cycles import (
    EXTERNAL,
    INTERNAL,
    Cycle,
    Exit,
    check_cycle,
    cycle_label_from,
    externalize,
    extract_cycle_through,
    has_cycle_with_exit,
    on_cycle_states,
    prune,
    strongly_connected_components,
)

BRANCHES = ("auto", "binary", "no-return", "reversible")


class Certificate(str, Enum):
    """Which construction produced an enriched machine."""

    BINARY = "Lemma2Binary"
    NO_RETURN = "Lemma3NoReturn"
    REVERSIBLE = "Lemma4Reversible"
    RESTRICTED = "Theorem1Restricted"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Enrichment:
    """A choice of output permutation per state, plus its certificate."""

    perms: tuple[tuple[int, ...], ...]
    certificate: Certificate

    def apply(self, a: Automaton) -> MealyMachine:
        if len(self.perms) != a.n_states:
            raise PreconditionViolated(
                f"{len(self.perms)} permutations for {a.n_states} states")
        return MealyMachine(a, self.perms)


class EnrichResult(NamedTuple):
    machine: MealyMachine
    certificate: Certificate
    removed: tuple[str, ...]
    full_machine: MealyMachine
    details: dict


class IPathResult(NamedTuple):
    """The path obtained by iterating one letter from a start state until
    it loops: the entry state, the pure-letter cycle, the last state
    before entering it, and how many steps the entry took."""

    start: int
    letter: int
    entry: int
    cycle: Cycle
    before_entry: int
    steps: int


def _identity_perms(n_states, n_letters):
    row = tuple(range(n_letters))
    return tuple(row for _ in range(n_states))


def _transposition(n_letters, i, j):
    row = list(range(n_letters))
    row[i], row[j] = row[j], row[i]
    return tuple(row)


def _check_external_exit(a, c, e):
    check_cycle(a, c)
    if e.source not in c.states:
        raise PreconditionViolated("exit source is not on the cycle")
    if a.step(e.source, e.letter) != e.target:
        raise PreconditionViolated("exit does not match a transition")
    if e.target in c.states:
        raise PreconditionViolated("exit target lies on the cycle")


def enrich_binary_external(a: Automaton, c: Cycle, e: Exit) -> MealyMachine:
    """Two-letter alphabet, external exit: swap letters at the exit target.

    Every other state outputs the identity, so reading the cycle label n
    times from the exit source, then the exit letter, then one more letter
    flips exactly that last letter.  Words that agree on long prefixes but
    differ at the end are therefore connected in every power, which keeps
    the generated group infinite.
    """
    ensure_usable(a)
    if a.n_letters != 2:
        raise PreconditionViolated(
            f"alphabet has {a.n_letters} letters, need exactly 2")
    _check_external_exit(a, c, e)
    perms = list(_identity_perms(a.n_states, 2))
    perms[e.target] = _transposition(2, 0, 1)
    return MealyMachine(a, tuple(perms))


def enrich_no_return(a: Automaton, c: Cycle, e: Exit) -> MealyMachine:
    """External exit into territory that cannot reach the cycle again:
    swap the exit letter with the cycle letter at the exit source.

    The resulting machine acts on powers of the cycle label like a binary
    odometer (carry while reading the cycle letter, stop after taking the
    exit), so the exit source has orbits of size 2^n and infinite order.
    """
    ensure_usable(a)
    _check_external_exit(a, c, e)
    reach = {e.target}
    queue = deque([e.target])
    while queue:
        w = queue.popleft()
        for i in range(a.n_letters):
            y = a.step(w, i)
            if y not in reach:
                reach.add(y)
                queue.append(y)
    if reach & set(c.states):
        raise PreconditionViolated(
            "the cycle is reachable from the exit target")
    label = cycle_label_from(c, c.states.index(e.source))
    j = label[0]
    if j == e.letter:
        raise PreconditionViolated("exit letter equals the cycle letter")
    perms = list(_identity_perms(a.n_states, a.n_letters))
    perms[e.source] = _transposition(a.n_letters, e.letter, j)
    return MealyMachine(a, tuple(perms))


def _shared_target_triple(a: Automaton):
    """Two distinct states with transitions into a common target, searched
    in declaration order over (first state, second state, letters)."""
    for x in range(a.n_states):
        for y in range(x + 1, a.n_states):
            for ix in range(a.n_letters):
                z = a.step(x, ix)
                for iy in range(a.n_letters):
                    if a.step(y, iy) == z:
                        return x, ix, y, iy, z
    return None


def enrich_reversible(a: Automaton) -> MealyMachine:
    """Reversible automaton with a cycle with exit: make two transitions
    into a shared target produce the same output letter.

    The machine stays invertible and reversible, while its inverse gains
    two equal-input transitions into the shared target's inverse and so
    is not reversible.  Invertible and reversible but not bireversible
    machines generate infinite groups.
    """
    ensure_usable(a)
    if not is_reversible(a):
        raise PreconditionViolated("automaton is not reversible")
    triple = _shared_target_triple(a)
    if triple is None:
        raise NoSuchTriple("no two distinct states share a successor")
    x, ix, y, iy, _ = triple
    perms = list(_identity_perms(a.n_states, a.n_letters))
    perms[y] = _transposition(a.n_letters, iy, ix)
    return MealyMachine(a, tuple(perms))


def find_i_path_cycle(a: Automaton, x, i) -> IPathResult:
    """Iterate letter ``i`` from state ``x`` until the path loops.

    Requires that no transition on ``i`` enters ``x``; then ``x`` is not
    on the loop, so the entry state is reached after at least one step and
    the state just before it lies off the loop.
    """
    ensure_usable(a)
    if isinstance(x, str):
        x = a.state_index(x)
    if isinstance(i, str):
        i = a.letter_index(i)
    if any(a.step(w, i) == x for w in range(a.n_states)):
        raise PreconditionViolated(
            f"state {a.states[x]!r} has an incoming transition on "
            f"{a.alphabet[i]!r}")
    seq = [x]
    pos = {x: 0}
    while True:
        nxt = a.step(seq[-1], i)
        if nxt in pos:
            m = pos[nxt]
            cycle_states = tuple(seq[m:])
            cycle = Cycle(cycle_states, (i,) * len(cycle_states))
            return IPathResult(x, i, nxt, cycle, seq[m - 1], m)
        pos[nxt] = len(seq)
        seq.append(nxt)


def restrict_alphabet(a: Automaton, letters) -> Automaton:
    """The automaton on the same states reading only the given letters,
    kept in declaration order."""
    ensure_usable(a)
    ids = sorted({a.letter_index(i) if isinstance(i, str) else i
                  for i in letters})
    for i in ids:
        if not 0 <= i < a.n_letters:
            raise PreconditionViolated(f"letter id {i} out of range")
    if not ids:
        raise PreconditionViolated("empty alphabet restriction")
    alphabet = tuple(a.alphabet[i] for i in ids)
    delta = tuple(a.delta[i] for i in ids)
    return Automaton(a.states, alphabet, delta)


def complete_permutations(partial: Enrichment, letters,
                          n_letters: int) -> Enrichment:
    """Extend permutations over a sub-alphabet to the full alphabet by the
    identity; ``letters[p]`` is the full id of sub-letter ``p``."""
    letters = tuple(letters)
    perms = []
    for row in partial.perms:
        if len(row) != len(letters):
            raise PreconditionViolated(
                f"permutation over {len(row)} letters does not match "
                f"{len(letters)} restricted letters")
        full = list(range(n_letters))
        for p, out in enumerate(row):
            full[letters[p]] = letters[out]
        perms.append(tuple(full))
    return Enrichment(tuple(perms), partial.certificate)


def _cycle_names(a, c):
    return {"states": list(a.state_names(c.states)),
            "letters": list(a.letter_names(c.letters))}


def _exit_names(a, e):
    return {"source": a.states[e.source],
            "letter": a.alphabet[e.letter],
            "target": a.states[e.target],
            "kind": e.kind}


def _cross_scc_exit(pruned):
    # first transition, state-major, leaving the component of an
    # on-cycle state; its target can never come back
    sccs = strongly_connected_components(pruned)
    cyclic = on_cycle_states(pruned)
    for x in range(pruned.n_states):
        if x not in cyclic:
            continue
        for i in range(pruned.n_letters):
            y = pruned.step(x, i)
            if sccs.block_of(x) != sccs.block_of(y):
                return x, i, y
    return None


def _no_return_instance(pruned):
    cross = _cross_scc_exit(pruned)
    if cross is None:
        return None
    x, i, y = cross
    cycle = extract_cycle_through(pruned, x)
    exit_ = Exit(x, i, y, EXTERNAL)
    machine = enrich_no_return(pruned, cycle, exit_)
    details = {"branch": "no-return",
               "cycle": _cycle_names(pruned, cycle),
               "exit": _exit_names(pruned, exit_)}
    return machine, details


def _reversible_instance(pruned):
    machine = enrich_reversible(pruned)
    x, ix, y, iy, z = _shared_target_triple(pruned)
    details = {"branch": "reversible",
               "triple": {"source_a": pruned.states[x],
                          "letter_a": pruned.alphabet[ix],
                          "source_b": pruned.states[y],
                          "letter_b": pruned.alphabet[iy],
                          "target": pruned.states[z]}}
    return machine, details


def _binary_instance(pruned):
    witness = has_cycle_with_exit(pruned)
    if witness is None:
        raise NoExitCycle("no cycle with exit survives pruning")
    cycle, exit_ = witness
    if exit_.kind == INTERNAL:
        cycle, exit_ = externalize(pruned, cycle, exit_)
    machine = enrich_binary_external(pruned, cycle, exit_)
    details = {"branch": "binary",
               "cycle": _cycle_names(pruned, cycle),
               "exit": _exit_names(pruned, exit_)}
    return machine, details


def enrich(a: Automaton, branch: str = "auto") -> EnrichResult:
    """Prune, then build an enriching machine.

    With ``branch="auto"`` the constructions are tried from cheapest to
    most involved: a cycle with an exit into territory that cannot come
    back (present whenever some transition is off every cycle); the
    shared-target construction when the pruned automaton is reversible;
    otherwise a two-letter restriction around a pure-letter cycle, whose
    swap is completed by the identity on the remaining letters.  One of
    the three always applies.  The other ``branch`` values force a single
    construction and fail with :class:`PreconditionViolated` (or
    :class:`NoSuchTriple`) when it does not apply.

    The returned machine lives on the pruned stateset; ``full_machine``
    extends it to the original states with identity outputs, which does
    not change whether the generated semigroup is finite.
    """
    ensure_usable(a)
    if branch not in BRANCHES:
        raise PreconditionViolated(
            f"unknown branch {branch!r}, expected one of {BRANCHES}")
    if has_cycle_with_exit(a) is None:
        raise NoExitCycle("no cycle with exit, nothing to enrich")
    pruned, removed = prune(a)

    if branch == "binary":
        machine, details = _binary_instance(pruned)
        certificate = Certificate.BINARY
    elif branch == "no-return":
        instance = _no_return_instance(pruned)
        if instance is None:
            raise PreconditionViolated(
                "every transition lies on a cycle, no exit is free of "
                "return paths")
        machine, details = instance
        certificate = Certificate.NO_RETURN
    elif branch == "reversible":
        machine, details = _reversible_instance(pruned)
        certificate = Certificate.REVERSIBLE
    else:
        instance = _no_return_instance(pruned)
        if instance is not None:
            machine, details = instance
            certificate = Certificate.NO_RETURN
        elif is_reversible(pruned):
            machine, details = _reversible_instance(pruned)
            certificate = Certificate.REVERSIBLE
        else:
            machine, details = _enrich_restricted(pruned)
            certificate = Certificate.RESTRICTED

    if removed:
        by_name = {name: machine.rho[p]
                   for p, name in enumerate(pruned.states)}
        identity = tuple(range(a.n_letters))
        full_rho = tuple(by_name.get(name, identity) for name in a.states)
        full_machine = MealyMachine(a, full_rho)
    else:
        full_machine = machine
    details["removed"] = list(removed)
    return EnrichResult(machine, certificate, removed, full_machine, details)


def _enrich_restricted(pruned: Automaton):
    """The two-letter restriction branch of :func:`enrich`.

    Reached when every transition lies on a cycle and the automaton is
    not reversible.  Some (state, letter) pair then has no incoming
    transition; iterating that letter runs into a pure-letter cycle,
    which, lying in a world of cycles, must have an external exit on a
    different letter.  Restricting to those two letters gives the
    two-letter construction, completed by the identity elsewhere.
    """
    start = None
    for x in range(pruned.n_states):
        for i in range(pruned.n_letters):
            if all(pruned.step(w, i) != x for w in range(pruned.n_states)):
                start = (x, i)
                break
        if start:
            break
    if start is None:
        raise PreconditionViolated(
            "every transition on a cycle and every state fully entered; "
            "the automaton is reversible and another branch applies")
    x, i = start
    path = find_i_path_cycle(pruned, x, i)
    cycle = path.cycle
    on_c = set(cycle.states)
    exit_ = None
    for st in sorted(cycle.states):
        for j in range(pruned.n_letters):
            if j == i:
                continue
            t = pruned.step(st, j)
            if t not in on_c:
                exit_ = Exit(st, j, t, EXTERNAL)
                break
        if exit_:
            break
    if exit_ is None:
        raise PreconditionViolated(
            "the pure-letter cycle has no external exit; some transition "
            "lies off every cycle and another branch applies")
    j = exit_.letter
    restricted = restrict_alphabet(pruned, (i, j))
    sub_of = {full: p for p, full in enumerate(sorted((i, j)))}
    cycle_b = Cycle(cycle.states, tuple(sub_of[c] for c in cycle.letters))
    exit_b = Exit(exit_.source, sub_of[j], exit_.target, EXTERNAL)
    machine_b = enrich_binary_external(restricted, cycle_b, exit_b)
    partial = Enrichment(machine_b.rho, Certificate.RESTRICTED)
    full = complete_permutations(partial, sorted((i, j)), pruned.n_letters)
    details = {"branch": "restricted",
               "letters": [pruned.alphabet[p] for p in sorted((i, j))],
               "start": pruned.states[x],
               "path_letter": pruned.alphabet[i],
               "cycle": _cycle_names(pruned, cycle),
               "exit": _exit_names(pruned, exit_)}
    return full.apply(pruned), details
