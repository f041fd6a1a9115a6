"""Loop detection by exhaustive configuration recording.

``run_with_oracle`` simulates a machine while recording every
configuration it passes through.  The moment the current configuration
equals an earlier one, the run is reported as looping, with the index of
the first occurrence and the period.  Determinism makes this sound: once
a configuration repeats, the machine replays the same segment forever.

The recorder is hash-indexed.  Each configuration contributes a 64-bit
fingerprint maintained incrementally (one step changes at most one cell,
the head, and the state, so the fingerprint is updated in constant
time).  A fingerprint hit is never trusted on its own: the candidate
earlier configuration is rebuilt by deterministic re-simulation and
compared field by field.  False fingerprint collisions therefore cost
time, never correctness, and the recorder needs only a constant amount
of memory per recorded step no matter how large the tape grows.

Detection checks the configuration reached *after* each executed step
against all earlier ones, so a loop that first returns to index i with
period p is reported at step i + p exactly.  Budgets count executed
steps; discovering that no transition applies consumes none, so a halt
at step s is reported as Halted(s) even when s equals the budget.

The one outcome this module cannot produce is "runs forever without
repeating".  Machines that grow their tape monotonically (the
right-runner is the canonical witness) never revisit a configuration,
and every budget ends in BudgetExceeded.  That gap is structural, not a
bug; the experiments module demonstrates it explicitly.  No attempt is
made to recognize translated or otherwise transformed recurrences:
equality here is exact equality of configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .machine import (
    BLANK,
    InstantaneousDescription,
    Machine,
    RIGHT,
    initial_id,
)

_M64 = (1 << 64) - 1


def _mix(x: int) -> int:
    """splitmix64 finalizer; the fingerprint tables are filled from it."""
    z = (x + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


# Lazily filled fingerprint tables, deterministic across runs and
# processes (no dependence on PYTHONHASHSEED).  Cell keys fold the cell
# index and symbol together; the multiplier keeps them injective for any
# alphabet a desk-scale experiment will ever use.
_Z_CELL: dict[int, int] = {}
_Z_STATE: dict[int, int] = {}
_Z_HEAD: dict[int, int] = {}
_CELL_FOLD = 1048573


def _zcell(cell: int, symbol: int) -> int:
    key = cell * _CELL_FOLD + symbol
    v = _Z_CELL.get(key)
    if v is None:
        v = _Z_CELL[key] = _mix(key * 3 + 1)
    return v


def _zstate(state: int) -> int:
    v = _Z_STATE.get(state)
    if v is None:
        v = _Z_STATE[state] = _mix(state * 3 + 2)
    return v


def _zhead(head: int) -> int:
    v = _Z_HEAD.get(head)
    if v is None:
        v = _Z_HEAD[head] = _mix(head * 3)
    return v


@dataclass(frozen=True)
class Halted:
    """The machine ran out of applicable transitions after ``steps`` steps."""

    steps: int
    final_id: InstantaneousDescription


@dataclass(frozen=True)
class LoopDetected:
    """The configuration at ``first_index`` recurred ``period`` steps later."""

    first_index: int
    period: int


@dataclass(frozen=True)
class BudgetExceeded:
    """Neither halt nor repetition within the allotted resources.

    ``history_capped`` distinguishes "step budget spent" from "recorder
    entry cap reached"; both are honest non-answers.
    """

    steps: int
    last_id: InstantaneousDescription
    history_capped: bool = False


RunOutcome = Halted | LoopDetected | BudgetExceeded


def _flat_table(machine: Machine) -> dict[int, tuple[int, int, int]]:
    m = machine.alphabet_size
    return {
        s * m + r: (w, 1 if mv == RIGHT else -1, ns)
        for (s, r), (w, mv, ns) in machine.transitions.items()
    }


class OracleRun:
    """An incremental oracle-observed run, advanced in bounded slices.

    ``advance(n)`` executes at most n steps and returns the outcome as
    soon as one is decided, else None.  Once decided, the outcome is
    sticky.  ``history_len`` counts recorded configurations; after s
    executed steps with no repetition it is exactly s + 1 (the initial
    configuration is recorded before step 0).
    """

    def __init__(
        self,
        machine: Machine,
        input_symbols: Iterable[int] = (),
        max_history: int | None = None,
    ) -> None:
        self.machine = machine
        self.input = tuple(input_symbols)
        start = initial_id(machine, self.input)
        self._table = _flat_table(machine)
        self._m = machine.alphabet_size
        self.state = start.state
        self.head = start.head
        self.tape = start.tape_dict()
        self.steps = 0
        self.max_history = max_history
        self.outcome: RunOutcome | None = None
        h = _zstate(self.state) ^ _zhead(self.head)
        for cell, sym in self.tape.items():
            h ^= _zcell(cell, sym)
        self._hash = h
        # fingerprint -> first step index, or list of step indices when
        # distinct configurations happen to share a fingerprint
        self._hist: dict[int, int | list[int]] = {h: 0}
        self.history_len = 1
        if max_history is not None and self.history_len > max_history:
            self.outcome = BudgetExceeded(0, self.snapshot(), history_capped=True)

    def snapshot(self) -> InstantaneousDescription:
        return InstantaneousDescription.from_tape(self.state, self.head, self.tape)

    def at_halt(self) -> bool:
        scanned = self.tape.get(self.head, BLANK)
        return (self.state * self._m + scanned) not in self._table

    def _confirmed_first_index(self, bucket: int | list[int]) -> int | None:
        """Re-simulate to weed fingerprint collisions out of a hit.

        Returns the smallest recorded index whose configuration equals
        the current one, or None if every index in the bucket was a
        false collision.
        """
        indices = (bucket,) if isinstance(bucket, int) else bucket
        for index in indices:
            state, head, tape = _simulate(self.machine, self.input, index)[1:]
            if state == self.state and head == self.head and tape == self.tape:
                return index
        return None

    def advance(self, n: int) -> RunOutcome | None:
        if self.outcome is not None:
            return self.outcome
        table = self._table
        tape = self.tape
        hist = self._hist
        m = self._m
        cap = self.max_history
        state = self.state
        head = self.head
        h = self._hash
        t = self.steps
        outcome: RunOutcome | None = None
        for _ in range(n):
            scanned = tape.get(head, 0)
            rule = table.get(state * m + scanned)
            if rule is None:
                self.state, self.head, self._hash, self.steps = state, head, h, t
                outcome = Halted(t, self.snapshot())
                break
            write, move, nxt = rule
            if write != scanned:
                if scanned:
                    h ^= _zcell(head, scanned)
                if write:
                    h ^= _zcell(head, write)
                    tape[head] = write
                else:
                    del tape[head]
            h ^= _zhead(head)
            head += move
            h ^= _zhead(head)
            if nxt != state:
                h ^= _zstate(state) ^ _zstate(nxt)
                state = nxt
            t += 1
            prev = hist.get(h)
            if prev is not None:
                self.state, self.head, self._hash, self.steps = state, head, h, t
                first = self._confirmed_first_index(prev)
                if first is not None:
                    outcome = LoopDetected(first, t - first)
                    break
                if isinstance(prev, int):
                    hist[h] = [prev, t]
                else:
                    prev.append(t)
            else:
                hist[h] = t
            self.history_len += 1
            if cap is not None and self.history_len > cap:
                self.state, self.head, self._hash, self.steps = state, head, h, t
                outcome = BudgetExceeded(t, self.snapshot(), history_capped=True)
                break
        self.state, self.head, self._hash, self.steps = state, head, h, t
        if outcome is not None:
            self.outcome = outcome
        return outcome


def run(machine: Machine, input_symbols: Iterable[int] = (), budget: int = 10_000) -> Halted | BudgetExceeded:
    """Plain bounded simulation, no recording.

    The baseline the oracle is audited against: it shares the step
    semantics but none of the detection machinery.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    start = initial_id(machine, tuple(input_symbols))
    table = _flat_table(machine)
    m = machine.alphabet_size
    state, head, tape = start.state, start.head, start.tape_dict()
    t = 0
    while True:
        scanned = tape.get(head, 0)
        rule = table.get(state * m + scanned)
        if rule is None:
            return Halted(t, InstantaneousDescription.from_tape(state, head, tape))
        if t == budget:
            return BudgetExceeded(t, InstantaneousDescription.from_tape(state, head, tape))
        write, move, nxt = rule
        if write:
            tape[head] = write
        else:
            tape.pop(head, None)
        head += move
        state = nxt
        t += 1


def run_with_oracle(
    machine: Machine,
    input_symbols: Iterable[int] = (),
    budget: int = 10_000,
    max_history: int | None = None,
) -> RunOutcome:
    """Simulate under the repetition recorder.

    Exactly one of the three outcomes is returned.  A halt discovered
    after the final budgeted step still reports Halted, because checking
    for an applicable transition executes nothing.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    oracle = OracleRun(machine, input_symbols, max_history=max_history)
    outcome = oracle.advance(budget)
    if outcome is not None:
        return outcome
    if oracle.at_halt():
        return Halted(oracle.steps, oracle.snapshot())
    return BudgetExceeded(oracle.steps, oracle.snapshot())


def _simulate(
    machine: Machine, input_symbols: tuple[int, ...], steps: int
) -> tuple[int | None, int, int, dict[int, int]]:
    """Run exactly ``steps`` steps without any recording.

    Returns (halted_at, state, head, tape).  ``halted_at`` is the step
    count at which the machine ran out of transitions, or None if it
    completed all requested steps.
    """
    start = initial_id(machine, input_symbols)
    table = _flat_table(machine)
    m = machine.alphabet_size
    state, head, tape = start.state, start.head, start.tape_dict()
    for t in range(steps):
        scanned = tape.get(head, 0)
        rule = table.get(state * m + scanned)
        if rule is None:
            return t, state, head, tape
        write, move, nxt = rule
        if write:
            tape[head] = write
        else:
            tape.pop(head, None)
        head += move
        state = nxt
    return None, state, head, tape


def replay_verify(machine: Machine, input_symbols: Iterable[int], outcome: RunOutcome) -> bool:
    """Audit an outcome by re-simulating without the oracle.

    Halted must halt at the exact step with the exact configuration;
    LoopDetected must satisfy configuration(first_index) ==
    configuration(first_index + period); BudgetExceeded must reach the
    claimed step count alive with the claimed last configuration.
    """
    inp = tuple(input_symbols)
    if isinstance(outcome, Halted):
        if outcome.steps < 0:
            return False
        halted_at, state, head, tape = _simulate(machine, inp, outcome.steps)
        if halted_at is not None:
            return False
        here = InstantaneousDescription.from_tape(state, head, tape)
        if here != outcome.final_id:
            return False
        return machine.transitions.get((state, tape.get(head, BLANK))) is None
    if isinstance(outcome, LoopDetected):
        if outcome.first_index < 0 or outcome.period < 1:
            return False
        halted_at, state, head, tape = _simulate(machine, inp, outcome.first_index)
        if halted_at is not None:
            return False
        seen = (state, head, dict(tape))
        table = _flat_table(machine)
        m = machine.alphabet_size
        for _ in range(outcome.period):
            rule = table.get(state * m + tape.get(head, 0))
            if rule is None:
                return False
            write, move, nxt = rule
            if write:
                tape[head] = write
            else:
                tape.pop(head, None)
            head += move
            state = nxt
        return seen == (state, head, tape)
    if isinstance(outcome, BudgetExceeded):
        if outcome.steps < 0:
            return False
        halted_at, state, head, tape = _simulate(machine, inp, outcome.steps)
        if halted_at is not None:
            return False
        return InstantaneousDescription.from_tape(state, head, tape) == outcome.last_id
    return False
