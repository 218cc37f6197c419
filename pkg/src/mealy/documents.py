"""Reading and writing the plain-text document format, plus DOT export.

A document is line based.  The first significant line is ``automaton``
or ``mealy``; a ``states:`` line and an ``alphabet:`` line declare the
names in order; then one line per (state, letter) pair::

    mealy
    states: x y
    alphabet: 0 1
    x 0 -> y | 1

Automaton documents drop the ``| output`` part.  ``#`` starts a comment
anywhere on a line.  :func:`print_document` writes the same format back
canonically, state by state in declaration order, so parse and print
round-trip byte for byte on canonical input.
"""

from __future__ import annotations

from .errors import DocumentError
from .machines import Automaton, MealyMachine, _underlying, ensure_usable

AUTOMATON = "automaton"
MEALY = "mealy"


def _split_declaration(line, line_no, what):
    names = line.split(":", 1)[1].split()
    if not names:
        raise DocumentError(f"no {what} declared", line_no)
    seen = set()
    for name in names:
        if name in seen:
            raise DocumentError(f"duplicate {what[:-1]} name {name!r}",
                                line_no)
        seen.add(name)
    return names


def parse(text: str) -> Automaton | MealyMachine:
    """Parse a document into an automaton or a machine.

    Malformed lines, unknown names, duplicated and missing transitions
    all raise :class:`DocumentError`; other facts about the shape of the
    result are left to :func:`mealy.machines.validate`.
    """
    header = None
    states = None
    alphabet = None
    delta: dict[str, dict[str, str]] = {}
    rho: dict[str, dict[str, str]] = {}
    seen_pairs = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            if line not in (AUTOMATON, MEALY):
                raise DocumentError(
                    f"expected {AUTOMATON!r} or {MEALY!r}, got {line!r}",
                    line_no)
            header = line
            continue
        if line.startswith("states:"):
            if states is not None:
                raise DocumentError("states declared twice", line_no)
            states = _split_declaration(line, line_no, "states")
            continue
        if line.startswith("alphabet:"):
            if alphabet is not None:
                raise DocumentError("alphabet declared twice", line_no)
            alphabet = _split_declaration(line, line_no, "letters")
            continue
        if states is None or alphabet is None:
            raise DocumentError(
                "transition before the states and alphabet lines", line_no)
        tokens = line.split()
        if len(tokens) not in (4, 6) or tokens[2] != "->":
            raise DocumentError(f"malformed transition {line!r}", line_no)
        if len(tokens) == 6 and tokens[4] != "|":
            raise DocumentError(f"malformed transition {line!r}", line_no)
        if len(tokens) == 6 and header == AUTOMATON:
            raise DocumentError(
                "automaton documents do not carry outputs", line_no)
        if len(tokens) == 4 and header == MEALY:
            raise DocumentError("missing output letter", line_no)
        src, letter, _, target = tokens[:4]
        if src not in states:
            raise DocumentError(f"unknown state {src!r}", line_no)
        if letter not in alphabet:
            raise DocumentError(f"unknown letter {letter!r}", line_no)
        if target not in states:
            raise DocumentError(f"unknown state {target!r}", line_no)
        if (src, letter) in seen_pairs:
            raise DocumentError(
                f"duplicate transition for {src} {letter}", line_no)
        seen_pairs.add((src, letter))
        delta.setdefault(letter, {})[src] = target
        if header == MEALY:
            out = tokens[5]
            if out not in alphabet:
                raise DocumentError(f"unknown letter {out!r}", line_no)
            rho.setdefault(src, {})[letter] = out
    if header is None:
        raise DocumentError("empty document")
    if states is None:
        raise DocumentError("missing states line")
    if alphabet is None:
        raise DocumentError("missing alphabet line")
    missing = [f"{src} {letter}"
               for src in states for letter in alphabet
               if (src, letter) not in seen_pairs]
    if missing:
        raise DocumentError("missing transitions: " + ", ".join(missing))
    if header == AUTOMATON:
        return Automaton.from_maps(states, alphabet, delta)
    return MealyMachine.from_maps(states, alphabet, delta, rho)


def print_document(obj) -> str:
    """The canonical document for an automaton or machine: header,
    declarations, then transitions state by state in declaration order,
    with a trailing newline."""
    ensure_usable(obj)
    a = _underlying(obj)
    is_machine = isinstance(obj, MealyMachine)
    lines = [MEALY if is_machine else AUTOMATON,
             "states: " + " ".join(a.states),
             "alphabet: " + " ".join(a.alphabet)]
    for x in range(a.n_states):
        for i in range(a.n_letters):
            y = a.step(x, i)
            line = f"{a.states[x]} {a.alphabet[i]} -> {a.states[y]}"
            if is_machine:
                line += f" | {a.alphabet[obj.output(x, i)]}"
            lines.append(line)
    return "\n".join(lines) + "\n"


def _dot_quote(name):
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def export_dot(obj) -> str:
    """The transition graph in DOT format, one edge per transition,
    labeled with the letter read and, for machines, the letter written."""
    ensure_usable(obj)
    a = _underlying(obj)
    is_machine = isinstance(obj, MealyMachine)
    lines = ["digraph {", "  rankdir=LR;"]
    for name in a.states:
        lines.append(f"  {_dot_quote(name)};")
    for x in range(a.n_states):
        for i in range(a.n_letters):
            y = a.step(x, i)
            label = a.alphabet[i]
            if is_machine:
                label += "|" + a.alphabet[obj.output(x, i)]
            lines.append(f"  {_dot_quote(a.states[x])} -> "
                         f"{_dot_quote(a.states[y])} "
                         f"[label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
