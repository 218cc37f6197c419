"""Output choices that force infinite groups, and the enrich dispatcher."""

import pytest

from mealy import (
    Automaton,
    Certificate,
    Cycle,
    EXTERNAL,
    Enrichment,
    Exit,
    NoExitCycle,
    NoSuchTriple,
    PreconditionViolated,
    apply_rho,
    complete_permutations,
    enrich,
    enrich_binary_external,
    enrich_no_return,
    enrich_reversible,
    extract_cycle_through,
    find_i_path_cycle,
    has_cycle_with_exit,
    is_bireversible,
    is_invertible,
    is_reversible,
    orbit_size,
    prune,
    restrict_alphabet,
)

from conftest import fresh_rng, random_automaton, random_reversible_automaton

IDENTITY2 = (0, 1)
SWAP2 = (1, 0)


def increment_cycle():
    # self-loop of state x on letter "1", leaving on "0" into y
    return Cycle((0,), (1,)), Exit(0, 0, 1, EXTERNAL)


def taxonomy_cycle(pruned):
    # shortest cycle through state "3" and its only way out
    cycle = extract_cycle_through(pruned, pruned.state_index("3"))
    exit_ = Exit(pruned.state_index("3"), pruned.letter_index("a"),
                 pruned.state_index("4"), EXTERNAL)
    return cycle, exit_


def assert_flips_last_letter(m, source, label, exit_letter, pair, n_max):
    """Reading the cycle label n times, the exit letter, then one more
    letter from the exit source must flip exactly that last letter."""
    a, b = pair
    for n in range(n_max + 1):
        for last, want in ((a, b), (b, a)):
            u = label * n + (exit_letter, last)
            out = apply_rho(m, (source,), u)
            assert out == u[:-1] + (want,)


class TestBinaryConstruction:
    def test_swap_sits_at_exit_target(self, adding_underlying):
        cycle, exit_ = increment_cycle()
        m = enrich_binary_external(adding_underlying, cycle, exit_)
        assert m.rho == (IDENTITY2, SWAP2)
        assert m.delta == adding_underlying.delta

    def test_flips_on_increment_skeleton(self, adding_underlying):
        cycle, exit_ = increment_cycle()
        m = enrich_binary_external(adding_underlying, cycle, exit_)
        assert_flips_last_letter(m, 0, (1,), 0, (0, 1), 20)

    def test_flips_on_pruned_taxonomy(self, taxonomy):
        pruned = prune(taxonomy).automaton
        cycle, exit_ = taxonomy_cycle(pruned)
        assert cycle.states == (2, 0, 1)
        assert cycle.letters == (1, 0, 0)
        m = enrich_binary_external(pruned, cycle, exit_)
        # the swap lands on state "4", everything else is the identity
        assert m.rho[pruned.state_index("4")] == SWAP2
        assert all(row == IDENTITY2 for p, row in enumerate(m.rho)
                   if p != pruned.state_index("4"))
        assert_flips_last_letter(m, pruned.state_index("3"),
                                 (1, 0, 0), 0, (0, 1), 20)

    def test_rejects_wide_alphabet(self):
        a = Automaton(("p", "q"), ("a", "b", "c"),
                      ((0, 1), (1, 1), (1, 1)))
        with pytest.raises(PreconditionViolated):
            enrich_binary_external(a, Cycle((0,), (0,)),
                                   Exit(0, 1, 1, EXTERNAL))

    def test_rejects_exit_onto_cycle(self, taxonomy):
        pruned = prune(taxonomy).automaton
        cycle, _ = taxonomy_cycle(pruned)
        onto = Exit(pruned.state_index("3"), pruned.letter_index("b"),
                    pruned.state_index("1"), EXTERNAL)
        with pytest.raises(PreconditionViolated):
            enrich_binary_external(pruned, cycle, onto)

    def test_rejects_fake_transition(self, taxonomy):
        pruned = prune(taxonomy).automaton
        cycle, _ = taxonomy_cycle(pruned)
        fake = Exit(pruned.state_index("3"), pruned.letter_index("a"),
                    pruned.state_index("6"), EXTERNAL)
        with pytest.raises(PreconditionViolated):
            enrich_binary_external(pruned, cycle, fake)


class TestNoReturnConstruction:
    def test_reconstructs_increment_machine(self, adding_underlying,
                                            adding_machine):
        cycle, exit_ = increment_cycle()
        m = enrich_no_return(adding_underlying, cycle, exit_)
        assert m.states == adding_machine.states
        assert m.alphabet == adding_machine.alphabet
        assert m.delta == adding_machine.delta
        assert m.rho == adding_machine.rho

    def test_orbit_doubles(self, adding_underlying):
        cycle, exit_ = increment_cycle()
        m = enrich_no_return(adding_underlying, cycle, exit_)
        for n in range(1, 11):
            assert orbit_size(m, "x", (1,) * n) == 2 ** n

    def test_rejects_exit_with_return_path(self, taxonomy):
        # from "4" the letter a runs straight back onto the cycle
        pruned = prune(taxonomy).automaton
        cycle, exit_ = taxonomy_cycle(pruned)
        with pytest.raises(PreconditionViolated):
            enrich_no_return(pruned, cycle, exit_)


class TestSharedTargetConstruction:
    def test_taxonomy_enrichment(self, taxonomy):
        pruned = prune(taxonomy).automaton
        m = enrich_reversible(pruned)
        assert m.rho[pruned.state_index("4")] == SWAP2
        assert all(row == IDENTITY2 for p, row in enumerate(m.rho)
                   if p != pruned.state_index("4"))

    def test_result_meets_f4_shape(self, taxonomy):
        pruned = prune(taxonomy).automaton
        m = enrich_reversible(pruned)
        assert is_invertible(m)
        assert is_reversible(m)
        assert not is_bireversible(m)

    def test_rejects_irreversible(self, taxonomy):
        with pytest.raises(PreconditionViolated):
            enrich_reversible(taxonomy)

    def test_no_shared_target(self, no_exit_automaton):
        with pytest.raises(NoSuchTriple):
            enrich_reversible(no_exit_automaton)


class TestIPath:
    def test_single_state_loop(self):
        a = Automaton(("p", "q"), ("0", "1"), ((0, 0), (1, 0)))
        r = find_i_path_cycle(a, "q", "0")
        assert r.start == 1
        assert r.letter == 0
        assert r.entry == 0
        assert r.cycle.states == (0,)
        assert r.cycle.letters == (0,)
        assert r.before_entry == 1
        assert r.steps == 1

    def test_entry_into_long_cycle(self, taxonomy):
        r = find_i_path_cycle(taxonomy, "5", "a")
        assert r.start == taxonomy.state_index("5")
        assert taxonomy.state_names(r.cycle.states) == ("2", "3", "4", "1")
        assert r.cycle.letters == (0, 0, 0, 0)
        assert r.before_entry == taxonomy.state_index("5")
        assert r.steps == 1

    def test_rejects_entered_start(self):
        a = Automaton(("p", "q"), ("0", "1"), ((0, 0), (1, 0)))
        with pytest.raises(PreconditionViolated):
            find_i_path_cycle(a, "p", "0")


class TestRestrictAlphabet:
    def test_single_letter(self, taxonomy):
        b = restrict_alphabet(taxonomy, ("b",))
        assert b.states == taxonomy.states
        assert b.alphabet == ("b",)
        assert b.delta == (taxonomy.delta[1],)

    def test_keeps_declaration_order(self, taxonomy):
        b = restrict_alphabet(taxonomy, ("b", "a"))
        assert b.alphabet == taxonomy.alphabet
        assert b.delta == taxonomy.delta

    def test_rejects_empty(self, taxonomy):
        with pytest.raises(PreconditionViolated):
            restrict_alphabet(taxonomy, ())

    def test_rejects_out_of_range(self, taxonomy):
        with pytest.raises(PreconditionViolated):
            restrict_alphabet(taxonomy, (0, 5))


class TestCompletePermutations:
    def test_identity_off_the_restriction(self):
        partial = Enrichment((SWAP2,), Certificate.RESTRICTED)
        full = complete_permutations(partial, (0, 2), 3)
        assert full.perms == ((2, 1, 0),)
        assert full.certificate is Certificate.RESTRICTED

    def test_rejects_row_length_mismatch(self):
        partial = Enrichment(((0, 1, 2),), Certificate.RESTRICTED)
        with pytest.raises(PreconditionViolated):
            complete_permutations(partial, (0, 2), 3)


class TestEnrich:
    def test_taxonomy_uses_shared_target(self, taxonomy):
        r = enrich(taxonomy)
        assert r.certificate is Certificate.REVERSIBLE
        assert str(r.certificate) == "Lemma4Reversible"
        assert r.removed == ("5",)
        assert r.details["branch"] == "reversible"
        assert r.details["triple"] == {"source_a": "3", "letter_a": "a",
                                       "source_b": "4", "letter_b": "b",
                                       "target": "4"}
        assert is_invertible(r.machine)
        assert is_reversible(r.machine)
        assert not is_bireversible(r.machine)

    def test_taxonomy_is_deterministic(self, taxonomy):
        a = enrich(taxonomy)
        b = enrich(taxonomy)
        assert a.machine.rho == b.machine.rho
        assert a.certificate is b.certificate
        assert a.details == b.details

    def test_increment_skeleton_uses_no_return(self, adding_underlying,
                                               adding_machine):
        r = enrich(adding_underlying)
        assert r.certificate is Certificate.NO_RETURN
        assert str(r.certificate) == "Lemma3NoReturn"
        assert r.removed == ()
        assert r.machine.rho == adding_machine.rho
        assert r.full_machine is r.machine
        assert r.details["branch"] == "no-return"
        assert r.details["exit"] == {"source": "x", "letter": "0",
                                     "target": "y", "kind": EXTERNAL}

    def test_restricted_branch(self):
        # strongly connected, not reversible: only the two-letter
        # restriction around a pure-letter cycle applies
        a = Automaton(("p", "q"), ("0", "1"), ((0, 0), (1, 0)))
        r = enrich(a)
        assert r.certificate is Certificate.RESTRICTED
        assert str(r.certificate) == "Theorem1Restricted"
        assert r.machine.rho == (IDENTITY2, SWAP2)
        assert r.details["branch"] == "restricted"
        assert r.details["start"] == "q"
        assert r.details["path_letter"] == "0"
        assert r.details["cycle"] == {"states": ["p"], "letters": ["0"]}
        assert r.details["exit"]["source"] == "p"
        assert r.details["exit"]["letter"] == "1"
        assert_flips_last_letter(r.machine, 0, (0,), 1, (0, 1), 10)

    def test_forced_binary_branch(self, taxonomy):
        r = enrich(taxonomy, "binary")
        assert r.certificate is Certificate.BINARY
        assert str(r.certificate) == "Lemma2Binary"
        assert r.details["cycle"] == {"states": ["3", "1", "2"],
                                      "letters": ["b", "a", "a"]}
        assert r.details["exit"]["target"] == "4"
        assert r.machine.rho[r.machine.state_index("4")] == SWAP2

    def test_forced_no_return_unavailable(self, taxonomy):
        # after pruning every transition stays inside its component
        with pytest.raises(PreconditionViolated):
            enrich(taxonomy, "no-return")

    def test_full_machine_extends_by_identity(self, taxonomy):
        r = enrich(taxonomy)
        assert r.full_machine.states == taxonomy.states
        assert r.full_machine.rho[taxonomy.state_index("5")] == IDENTITY2
        for p, name in enumerate(r.machine.states):
            assert (r.full_machine.rho[taxonomy.state_index(name)]
                    == r.machine.rho[p])

    def test_rejects_exitless_automaton(self, no_exit_automaton):
        with pytest.raises(NoExitCycle):
            enrich(no_exit_automaton)

    def test_rejects_unknown_branch(self, taxonomy):
        with pytest.raises(PreconditionViolated):
            enrich(taxonomy, "bogus")

    def test_random_enrichments_meet_postconditions(self):
        rng = fresh_rng(91)
        found = 0
        rounds = 0
        while found < 80:
            rounds += 1
            assert rounds < 2000
            # every third machine is reversible so the shared-target
            # branch gets exercised too
            gen = (random_reversible_automaton if found % 3 == 2
                   else random_automaton)
            a = gen(rng, rng.randint(2, 6), rng.randint(2, 4))
            if has_cycle_with_exit(a) is None:
                continue
            found += 1
            r = enrich(a)
            m = r.machine
            assert is_invertible(m)
            branch = r.details["branch"]
            if branch == "reversible":
                assert is_reversible(m)
                assert not is_bireversible(m)
            elif branch == "no-return":
                source, label = self._source_label(m, r.details)
                for n in range(1, 7):
                    assert orbit_size(m, (source,), label * n) == 2 ** n
            else:
                assert branch == "restricted"
                source, label = self._source_label(m, r.details)
                exit_letter = m.letter_index(r.details["exit"]["letter"])
                pair = tuple(m.letter_index(i)
                             for i in r.details["letters"])
                assert_flips_last_letter(m, source, label, exit_letter,
                                         pair, 6)

    @staticmethod
    def _source_label(m, details):
        """Exit source id and the cycle label rotated to start there."""
        states = details["cycle"]["states"]
        letters = [m.letter_index(i) for i in details["cycle"]["letters"]]
        at = states.index(details["exit"]["source"])
        return (m.state_index(details["exit"]["source"]),
                tuple(letters[at:] + letters[:at]))
