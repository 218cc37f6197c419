"""Exception types shared across the package."""


class MealyError(Exception):
    """Base class for all errors raised by this package."""


class UnknownSymbol(MealyError):
    """A state or letter is not declared in the machine it is used with."""


class InvalidAutomaton(MealyError):
    """An operation needs a structurally complete machine and got one that
    is not (missing transitions, ids out of range, empty symbol sets)."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class NotInvertible(MealyError):
    """inverse() was asked for a machine whose output functions are not
    all permutations."""


class BudgetExceeded(MealyError):
    """A construction would exceed its configured size cap."""


class NotACycle(MealyError):
    """A claimed cycle does not match the automaton's transitions."""


class EmptyResult(MealyError):
    """Pruning removed every state."""


class PreconditionViolated(MealyError):
    """An enrichment construction was applied outside its hypotheses."""


class NoSuchTriple(MealyError):
    """No two distinct states share a successor, so the shared-target
    enrichment cannot be built."""


class NoExitCycle(MealyError):
    """The automaton has no cycle with an exit, so no enrichment is needed
    (every enrichment of it generates a finite semigroup)."""


class DocumentError(MealyError):
    """A machine document failed to parse."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
