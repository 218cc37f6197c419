"""Deciding, where possible, whether a machine generates a finite
(semi)group.

Every ``Finite`` or ``Infinite`` verdict carries a certificate naming the
argument that proves it; ``Unknown`` carries the evidence gathered while
trying.  For invertible machines the generated group is finite exactly
when the generated semigroup is, so a single verdict covers both, and the
semigroup of a machine is finite exactly when its dual's is, which lets
every check run on whichever side it prefers.
"""

from __future__ import annotations

import random
import string
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import PreconditionViolated
from .machines import (
    Automaton,
    MealyMachine,
    dual,
    ensure_usable,
    equal_production,
    _equal_interned,
    is_bireversible,
    is_invertible,
    is_reversible,
)
from .cycles import has_cycle_with_exit

FINITE = "Finite"
INFINITE = "Infinite"
UNKNOWN = "Unknown"

DEFAULT_CLOSURE_BUDGET = 10**5
DEFAULT_CLOSURE_DEPTH = 64
DEFAULT_MAX_LEVEL = 19
DEFAULT_ORBIT_CAP = 2**20

STRUCTURAL_NO_EXIT = "structural-no-exit"
SPLITS_UP_TOTALLY = "splits-up-totally"
CLOSURE = "closure"
F4 = "F4"
ENRICHMENT_CONSTRUCTION = "enrichment-construction"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a finiteness analysis.

    ``kind`` is ``"Finite"``, ``"Infinite"`` or ``"Unknown"``; a definite
    verdict names its ``certificate``, a ``Finite`` one may carry the
    exact ``order`` of the semigroup, and ``evidence`` holds whatever the
    checks recorded along the way.
    """

    kind: str
    certificate: str | None = None
    order: int | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def is_finite(self):
        return self.kind == FINITE

    @property
    def is_infinite(self):
        return self.kind == INFINITE

    @property
    def is_unknown(self):
        return self.kind == UNKNOWN

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.order is not None:
            out["order"] = self.order
        if self.evidence:
            out["evidence"] = self.evidence
        return out


class LevelReport(NamedTuple):
    """What one power of the machine looks like: the sizes of its
    connected components, whether every shorter word's extensions fall
    into pairwise distinct components, and if not a witness pair of
    extensions sharing one."""

    level: int
    component_sizes: tuple[tuple[int, int], ...]
    splits: bool
    witness: tuple[tuple[str, ...], tuple[str, ...]] | None

    def to_dict(self) -> dict:
        out = {"level": self.level,
               "component_sizes": [list(p) for p in self.component_sizes],
               "splits_totally": self.splits}
        if self.witness is not None:
            out["witness"] = [list(w) for w in self.witness]
        return out


class PowerTrace(NamedTuple):
    levels: tuple[LevelReport, ...]

    def to_dict(self) -> dict:
        return {"levels": [lr.to_dict() for lr in self.levels]}


def check_no_exit_finite(obj) -> Verdict | None:
    """Finite by structure alone: when no cycle of the transition graph
    has an exit, the generated semigroup is finite whatever the output
    functions are."""
    if has_cycle_with_exit(obj) is None:
        return Verdict(FINITE, certificate=STRUCTURAL_NO_EXIT)
    return None


def f4_check(m: MealyMachine) -> Verdict | None:
    """Infinite by the one-sided reversibility gap: an invertible and
    reversible machine that is not bireversible generates an infinite
    group, hence an infinite semigroup."""
    ensure_usable(m)
    if is_invertible(m) and is_reversible(m) and not is_bireversible(m):
        return Verdict(INFINITE, certificate=F4,
                       evidence={"invertible": True, "reversible": True,
                                 "bireversible": False})
    return None


def _uf_find(parent, w):
    while parent[w] != w:
        parent[w] = parent[parent[w]]
        w = parent[w]
    return w


def _power_image(m, w, n, i):
    # image of the length-n state word encoded in w (first state in the
    # lowest digit) under input letter i, same encoding
    s = m.n_states
    delta, rho = m.delta, m.rho
    out = 0
    cur = i
    mult = 1
    for _ in range(n):
        w, x = divmod(w, s)
        out += delta[cur][x] * mult
        cur = rho[x][cur]
        mult *= s
    return out


def _level_find(m, n):
    # components of the n-th power as a union-find array over encoded words
    total = m.n_states ** n
    parent = list(range(total))
    for w in range(total):
        for i in range(m.n_letters):
            a = _uf_find(parent, w)
            b = _uf_find(parent, _power_image(m, w, n, i))
            if a != b:
                parent[a] = b
    return parent


def _decode_word(m, w, n):
    names = []
    s = m.n_states
    for _ in range(n):
        w, x = divmod(w, s)
        names.append(m.states[x])
    return tuple(names)


def _component_sizes(parent):
    counts = Counter(_uf_find(parent, w) for w in range(len(parent)))
    return tuple(sorted(Counter(counts.values()).items()))


def power_components(m: MealyMachine, n: int, cap: int = 10**6):
    """Connected components of the n-th power without materialising it.

    Words of length ``n`` over the stateset are encoded as integers with
    the first state in the lowest base-``|A|`` digit; blocks contain the
    encoded words.
    """
    ensure_usable(m)
    if n < 1:
        raise ValueError("power exponent must be at least 1")
    if m.n_states ** n > cap:
        raise PreconditionViolated(
            f"{m.n_states}^{n} words exceed the cap of {cap}")
    from .machines import ComponentPartition

    parent = _level_find(m, n)
    blocks: dict[int, list[int]] = {}
    for w in range(len(parent)):
        blocks.setdefault(_uf_find(parent, w), []).append(w)
    ordered = sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])
    return ComponentPartition(tuple(ordered))


def pumping_scan(m: MealyMachine, max_level: int | None = None) -> Verdict:
    """Scan powers of a two-state reversible machine for the level where
    every word's two extensions land in distinct components.

    Once some power splits up totally like this, all later powers do and
    the generated group is finite.  If no level up to ``max_level`` does,
    the scan reports Unknown together with, per level, a witness word
    whose extensions stay connected.
    """
    ensure_usable(m)
    if m.n_states != 2:
        raise PreconditionViolated(
            f"pumping scan needs exactly 2 states, got {m.n_states}")
    if not is_reversible(m):
        raise PreconditionViolated("pumping scan needs a reversible machine")
    if max_level is None:
        max_level = DEFAULT_MAX_LEVEL
    reports = []
    for n in range(1, max_level + 1):
        parent = _level_find(m, n)
        sizes = _component_sizes(parent)
        half = 1 << (n - 1)
        splits = True
        witness = None
        for u in range(half):
            if _uf_find(parent, u) == _uf_find(parent, u + half):
                splits = False
                witness = (_decode_word(m, u, n),
                           _decode_word(m, u + half, n))
                break
        reports.append(LevelReport(n, sizes, splits, witness))
        if splits:
            trace = PowerTrace(tuple(reports))
            return Verdict(FINITE, certificate=SPLITS_UP_TOTALLY,
                           evidence={"level": n, "trace": trace.to_dict()})
    trace = PowerTrace(tuple(reports))
    return Verdict(UNKNOWN,
                   evidence={"max_level": max_level,
                             "trace": trace.to_dict()})


class _Closure:
    """Incremental enumeration of the semigroup of production functions.

    An element is keyed by its signature: the outputs it produces on
    every input word of length up to a small depth.  Equal productions
    always share a signature, so grouping candidates by signature can
    never merge too little; a signature hit is screened against a
    second, much deeper signature and finally confirmed exactly with
    ``equal_production`` on the canonical words, so hash collisions and
    productions that only differ beyond every signature depth can never
    merge too much.

    Words of each length are numbered with the first letter in the
    lowest base-``k`` digit and all lengths share one global index, so
    the signature of a one-state extension is a single table lookup per
    entry: if ``s`` codes the output of the base element on some input,
    the extension outputs ``table[x][s]`` on that input.  The deep
    signatures exist because exact confirmation is expensive precisely
    when two long products agree far beyond the short signature, as
    chains of near-identical elements do; they are built lazily, only
    for elements that land in contested buckets.
    """

    EMPTY = -1

    # smallest depths whose signatures have at least this many entries:
    # the short floor keeps buckets near singleton on typical machines
    # without bloating the per-candidate work, the deep floor separates
    # long near-equal products before the exact check has to run
    SHORT_FLOOR = 64
    DEEP_FLOOR = 2048

    def __init__(self, m, depth=None):
        self.m = m
        k = m.n_letters
        if depth is None:
            depth = self._floor_depth(k, self.SHORT_FLOOR)
        self.depth = depth
        self.deep_depth = max(self._floor_depth(k, self.DEEP_FLOOR),
                              depth + 1)
        self.tables = [self._state_table(x, depth)
                       for x in range(m.n_states)]
        total = sum(k ** n for n in range(1, depth + 1))
        self.identity_sig = tuple(range(total))
        self.words = {self.EMPTY: ()}
        self.parents = {}
        self.buckets = {}
        self.deep_tables = None
        self.deep_sigs = {}
        self.examined = 0
        self.n_elements = 0
        self.exhausted = None

    @staticmethod
    def _floor_depth(k, floor):
        depth = 1
        size = k
        while size < floor:
            depth += 1
            size += k ** depth
        return depth

    def _state_table(self, x, depth):
        m = self.m
        k = m.n_letters
        table = []
        offset = 0
        for length in range(1, depth + 1):
            for code in range(k ** length):
                cur = x
                out = 0
                mult = 1
                rest = code
                for _ in range(length):
                    rest, i = divmod(rest, k)
                    out += m.rho[cur][i] * mult
                    cur = m.delta[i][cur]
                    mult *= k
                table.append(offset + out)
            offset += k ** length
        return table

    def _deep_sig(self, e):
        """Deep signature of an element, filled in along its ancestry.

        A child's deep signature maps its parent's through the last
        state's table, so the computation walks up to the nearest cached
        ancestor and back down, caching every step.
        """
        if self.deep_tables is None:
            k = self.m.n_letters
            self.deep_tables = [self._state_table(x, self.deep_depth)
                                for x in range(self.m.n_states)]
            total = sum(k ** n for n in range(1, self.deep_depth + 1))
            self.deep_sigs[self.EMPTY] = tuple(range(total))
        chain = []
        cur = e
        while cur not in self.deep_sigs:
            chain.append(cur)
            cur = self.parents[cur]
        sig = self.deep_sigs[cur]
        for eid in reversed(chain):
            table = self.deep_tables[self.words[eid][-1]]
            sig = tuple(table[s] for s in sig)
            self.deep_sigs[eid] = sig
        return sig

    def extend(self, base, sig, budget, max_word):
        """Resolve every product of ``base`` with one more state.

        Returns (id, signature) pairs for the newly created elements, or
        None once another element would exceed the element budget or the
        canonical word length cap; ``self.exhausted`` then names the
        limit that was hit.
        """
        m = self.m
        created = []
        base_word = self.words[base]
        if len(base_word) >= max_word:
            self.exhausted = "word-length"
            return None
        for x in range(m.n_states):
            self.examined += 1
            table = self.tables[x]
            child = tuple(table[s] for s in sig)
            word = base_word + (x,)
            bucket = self.buckets.setdefault(hash(child), [])
            deep = None
            matched = False
            for f in bucket:
                if deep is None:
                    base_deep = self._deep_sig(base)
                    deep = tuple(self.deep_tables[x][s] for s in base_deep)
                if deep != self._deep_sig(f):
                    continue
                if _equal_interned(m, word, self.words[f]):
                    matched = True
                    break
            if matched:
                continue
            if self.n_elements >= budget:
                self.exhausted = "budget"
                return None
            e = self.n_elements
            self.n_elements += 1
            self.words[e] = word
            self.parents[e] = base
            if deep is not None:
                self.deep_sigs[e] = deep
            bucket.append(e)
            created.append((e, child))
        return created

    @property
    def order(self):
        return self.n_elements


def semigroup_closure(m: MealyMachine, budget: int | None = None,
                      max_word: int | None = None) -> Verdict:
    """Enumerate the generated semigroup, shortest products first.

    A product equal in behavior to an element already kept is dropped
    together with its whole subtree, which is sound because equal
    productions stay equal under extension by further states.  Finite
    with the exact order if the enumeration closes while keeping at most
    ``budget`` distinct elements, none of whose canonical words get
    longer than ``max_word``; otherwise Unknown, with the exhausted
    limit named in the evidence.
    """
    ensure_usable(m)
    if budget is None:
        budget = DEFAULT_CLOSURE_BUDGET
    if max_word is None:
        max_word = DEFAULT_CLOSURE_DEPTH
    closure = _Closure(m)
    queue = deque([(_Closure.EMPTY, closure.identity_sig)])
    while queue:
        base, sig = queue.popleft()
        created = closure.extend(base, sig, budget, max_word)
        if created is None:
            return Verdict(UNKNOWN,
                           evidence={"budget": budget,
                                     "exhausted": closure.exhausted,
                                     "elements_found": closure.order,
                                     "unexplored": len(queue) + 1})
        queue.extend(created)
    return Verdict(FINITE, certificate=CLOSURE, order=closure.order,
                   evidence={"examined": closure.examined})


def orbit_size(m: MealyMachine, g, s,
               cap: int = DEFAULT_ORBIT_CAP) -> int | None:
    """Number of distinct words the production of the state word ``g``
    reaches from the letter word ``s``, or None past ``cap``.

    For invertible machines the production is a permutation, so the count
    runs until ``s`` itself comes back and needs no bookkeeping.
    """
    ensure_usable(m)
    g = m.state_word(g)
    s = m.letter_word(s)
    delta, rho = m.delta, m.rho

    def step(word):
        out = list(word)
        for x in g:
            cur = x
            for t, c in enumerate(out):
                out[t] = rho[cur][c]
                cur = delta[c][cur]
        return tuple(out)

    if is_invertible(m):
        count = 1
        cur = step(s)
        while cur != s:
            count += 1
            if count > cap:
                return None
            cur = step(cur)
        return count
    seen = {s}
    cur = step(s)
    while cur not in seen:
        if len(seen) >= cap:
            return None
        seen.add(cur)
        cur = step(cur)
    return len(seen)


def enrichment_verdict(certificate) -> Verdict:
    """The verdict carried by a successfully enriched machine."""
    return Verdict(INFINITE, certificate=ENRICHMENT_CONSTRUCTION,
                   evidence={"construction": str(certificate)})


def _orbit_growth(m, cap=2**16, max_len=16):
    # orbit sizes of powers of the first letter under each generator
    growth = {}
    for x in range(m.n_states):
        sizes = []
        for n in range(1, max_len + 1):
            size = orbit_size(m, (x,), (0,) * n, cap=cap)
            sizes.append(size)
            if size is None:
                break
        growth[m.states[x]] = sizes
    return growth


def decide(m: MealyMachine, budget: int | None = None,
           max_level: int | None = None) -> Verdict:
    """Run the known finiteness and infiniteness checks in increasing
    order of cost, on the machine and on its dual.

    Structure first: a machine whose transition graph, or whose dual's
    transition graph, has no cycle with an exit is finite.  Then the
    reversibility-gap check for infinity on both sides, the power
    splitting scan on whichever side has two states and is reversible,
    and finally closure enumeration on the side with fewer states.  A
    structural verdict still tries the closure to report an exact order.
    Soundness of transfer between the sides: a machine's semigroup is
    finite exactly when its dual's is.
    """
    ensure_usable(m)
    if budget is None:
        budget = DEFAULT_CLOSURE_BUDGET
    if max_level is None:
        max_level = DEFAULT_MAX_LEVEL
    d = dual(m)
    evidence: dict = {}

    for side, machine in (("primal", m), ("dual", d)):
        verdict = check_no_exit_finite(machine)
        if verdict is not None:
            order = None
            closure = semigroup_closure(m, budget)
            if closure.is_finite:
                order = closure.order
            return Verdict(FINITE, certificate=STRUCTURAL_NO_EXIT,
                           order=order, evidence={"side": side})

    for side, machine in (("primal", m), ("dual", d)):
        verdict = f4_check(machine)
        if verdict is not None:
            evidence = dict(verdict.evidence)
            evidence["side"] = side
            return Verdict(INFINITE, certificate=F4, evidence=evidence)

    pumping_evidence = {}
    for side, machine in (("primal", m), ("dual", d)):
        if machine.n_states == 2 and is_reversible(machine):
            verdict = pumping_scan(machine, max_level)
            if verdict.is_finite:
                evidence = dict(verdict.evidence)
                evidence["side"] = side
                return Verdict(FINITE, certificate=SPLITS_UP_TOTALLY,
                               evidence=evidence)
            pumping_evidence[side] = verdict.evidence
    if pumping_evidence:
        evidence["pumping"] = pumping_evidence

    side, machine = ("primal", m)
    if d.n_states < m.n_states:
        side, machine = ("dual", d)
    closure = semigroup_closure(machine, budget)
    if closure.is_finite:
        ev = dict(closure.evidence)
        ev["side"] = side
        return Verdict(FINITE, certificate=CLOSURE, order=closure.order,
                       evidence=ev)
    evidence["closure"] = dict(closure.evidence, side=side)

    evidence["orbit_growth"] = _orbit_growth(m)
    return Verdict(UNKNOWN, evidence=evidence)


def sample_no_exit(n_states: int, n_letters: int, seed: int) -> Automaton:
    """A random automaton none of whose cycles has an exit.

    States are ordered so that every transient state only moves to later
    states, and the tail of the ordering is partitioned into cycles that
    advance on every letter; cycles then sit exactly on the tail and each
    state has a single successor shared by all letters.  Keeping the
    successor letter-independent off the cycles too bounds the generated
    semigroup by a product of symmetric groups over the entry phases, so
    sampled instances stay within desk-scale closure budgets.
    """
    if n_states < 1 or n_letters < 1:
        raise PreconditionViolated("need at least one state and one letter")
    if n_letters > 26:
        raise PreconditionViolated("at most 26 letters are supported")
    rng = random.Random(seed)
    n_cyclic = rng.randint(1, n_states)
    first_cyclic = n_states - n_cyclic
    succ = {}
    for x in range(first_cyclic):
        succ[x] = rng.randrange(x + 1, n_states)
    base = first_cyclic
    while base < n_states:
        length = rng.randint(1, n_states - base)
        for p in range(length):
            succ[base + p] = base + (p + 1) % length
        base += length
    states = tuple(f"q{p}" for p in range(n_states))
    alphabet = tuple(string.ascii_lowercase[:n_letters])
    row = tuple(succ[x] for x in range(n_states))
    delta = tuple(row for _ in range(n_letters))
    return Automaton(states, alphabet, delta)


def random_invertible_enrichment(a: Automaton, seed: int) -> MealyMachine:
    """Equip an automaton with an independent random output permutation
    at every state."""
    ensure_usable(a)
    rng = random.Random(seed)
    rho = tuple(tuple(rng.sample(range(a.n_letters), a.n_letters))
                for _ in range(a.n_states))
    return MealyMachine(a, rho)
