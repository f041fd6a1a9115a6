"""Deterministic generators shared across the test suite.

Bulk corpora (the differential sweep, the parser fuzz, the confined
family) are driven by seeded ``random.Random`` instances rather than
hypothesis so their sizes are exact and their contents reproducible;
hypothesis strategies live here too for the property tests that want
shrinking.
"""

from __future__ import annotations

import random

from hypothesis import strategies as st

from haltlab.machine import LEFT, RIGHT, Machine
from haltlab.recfun import Compose, Mu, PrimRec, Proj, RecExpr, Succ, Zero


def gen_leaf(rng: random.Random, n_args: int) -> RecExpr:
    choices: list[RecExpr] = [Proj(i, n_args) for i in range(1, n_args + 1)]
    if n_args == 1:
        choices += [Zero(), Succ()]
    return rng.choice(choices)


def gen_expr(rng: random.Random, n_args: int, depth: int) -> RecExpr:
    """A random well-arity expression of the given arity.

    Leaf-heavy by design: towers of primitive recursion blow up
    evaluation cost fast, and minimization is kept rare because most
    random bodies never reach zero and only burn fuel.
    """
    if n_args < 1:
        raise ValueError("generator only builds positive arities")
    if depth <= 0:
        return gen_leaf(rng, n_args)
    roll = rng.random()
    if roll < 0.30:
        return gen_leaf(rng, n_args)
    if roll < 0.72:
        width = rng.randint(1, 3)
        outer = gen_expr(rng, width, depth - 1)
        inners = tuple(gen_expr(rng, n_args, depth - 1) for _ in range(width))
        return Compose(outer, inners)
    if roll < 0.94 and n_args >= 2:
        base = gen_expr(rng, n_args - 1, depth - 1)
        step = gen_expr(rng, n_args + 1, depth - 1)
        return PrimRec(base, step)
    return Mu(gen_expr(rng, n_args + 1, depth - 1))


def gen_machine(rng: random.Random, states: int, symbols: int, density: float = 0.85) -> Machine:
    """A random partial transition table over the full slot grid."""
    table = {}
    for state in range(states):
        for symbol in range(symbols):
            if rng.random() < density:
                table[(state, symbol)] = (
                    rng.randrange(symbols),
                    LEFT if rng.random() < 0.5 else RIGHT,
                    rng.randrange(states),
                )
    return Machine(states, symbols, table)


def confined_machine(
    rng: random.Random,
    cells: int = 3,
    alphabet: int = 2,
    absent_rate: float = 0.15,
) -> Machine:
    """A machine structurally unable to leave cells 0..cells-1.

    State i is only ever entered with the head on cell i: every
    transition out of state i moves to an adjacent cell and switches to
    that cell's state, and the edge states only move inward.  The head
    therefore stays inside the window whatever the table writes, so on
    blank input at most states * alphabet**cells distinct configurations
    exist.  Missing slots (absent_rate) make some members halt.
    """
    if cells < 2:
        raise ValueError("the window needs at least two cells")
    table = {}
    for cell in range(cells):
        for symbol in range(alphabet):
            if rng.random() < absent_rate:
                continue
            if cell == 0:
                move = RIGHT
            elif cell == cells - 1:
                move = LEFT
            else:
                move = LEFT if rng.random() < 0.5 else RIGHT
            target = cell + 1 if move == RIGHT else cell - 1
            table[(cell, symbol)] = (rng.randrange(alphabet), move, target)
    return Machine(cells, alphabet, table)


@st.composite
def machines(draw, max_states: int = 3, max_symbols: int = 3):
    """Hypothesis strategy for small valid machines."""
    n = draw(st.integers(1, max_states))
    m = draw(st.integers(1, max_symbols))
    table = {}
    for state in range(n):
        for symbol in range(m):
            if draw(st.booleans()):
                write = draw(st.integers(0, m - 1))
                move = draw(st.sampled_from((LEFT, RIGHT)))
                nxt = draw(st.integers(0, n - 1))
                table[(state, symbol)] = (write, move, nxt)
    return Machine(n, m, table)
