"""Recursive-function evaluator tests: arities, values, fuel, minimization.

The frozen arithmetic table is checked against both evaluators so a
regression in either one trips it; the differential property then
drives randomly generated expressions through the pair.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haltlab.recfun import (
    ADD,
    EQ_CHAR,
    MONUS,
    MUL,
    PRED,
    SIGN,
    SUCC,
    ZERO,
    ArityError,
    Compose,
    FuelExhausted,
    Mu,
    NotBooleanError,
    PrimRec,
    Proj,
    Succ,
    Zero,
    arity,
    char_value,
    const_expr,
    evaluate,
    evaluate_costed,
    oracle_evaluate,
)
from tests.helpers import gen_expr

GENEROUS = 1_000_000


def test_arities_of_the_standard_combinators():
    assert arity(Zero()) == 1
    assert arity(Succ()) == 1
    assert arity(Proj(2, 5)) == 5
    assert arity(ADD) == 2
    assert arity(MONUS) == 2
    assert arity(MUL) == 2
    assert arity(PRED) == 1
    assert arity(SIGN) == 1
    assert arity(EQ_CHAR) == 2
    assert arity(Mu(MONUS)) == 1
    assert arity(Mu(Proj(1, 1))) == 0  # minimization over a unary body is nullary
    assert arity(const_expr(7, 3)) == 3


def test_arity_rejects_malformed_terms():
    with pytest.raises(ArityError, match="out of range"):
        arity(Proj(4, 3))
    with pytest.raises(ArityError, match="does not match"):
        arity(Compose(SUCC, (Proj(1, 2), Proj(1, 3))))
    with pytest.raises(ArityError, match="base arity"):
        arity(PrimRec(Proj(1, 1), Proj(1, 2)))
    with pytest.raises(ArityError) as err:
        arity(Compose(SUCC, (Compose(SUCC, (Proj(4, 3),)),)))
    assert "inners" in err.value.path


def test_wrong_argument_count_is_an_arity_error():
    with pytest.raises(ArityError):
        evaluate(ADD, (1, 2, 3), 100)
    with pytest.raises(ArityError):
        oracle_evaluate(ADD, (1,), 100)


ARITHMETIC_TABLE = [
    (Zero(), (9,), 0),
    (Succ(), (9,), 10),
    (Proj(2, 3), (7, 8, 9), 8),
    (ADD, (0, 0), 0),
    (ADD, (2, 3), 5),
    (ADD, (7, 0), 7),
    (PRED, (0,), 0),
    (PRED, (1,), 0),
    (PRED, (6,), 5),
    (MONUS, (5, 2), 3),
    (MONUS, (2, 5), 0),
    (MONUS, (4, 4), 0),
    (MUL, (0, 5), 0),
    (MUL, (3, 4), 12),
    (SIGN, (0,), 0),
    (SIGN, (7,), 1),
    (EQ_CHAR, (3, 3), 0),
    (EQ_CHAR, (3, 4), 1),
    (EQ_CHAR, (0, 1), 1),
    (const_expr(0, 1), (5,), 0),
    (const_expr(3, 2), (8, 9), 3),
]


def test_frozen_arithmetic_values_on_both_evaluators():
    for expr, args, expected in ARITHMETIC_TABLE:
        assert evaluate(expr, args, GENEROUS) == expected, (args, expected)
        assert oracle_evaluate(expr, args, GENEROUS) == expected, (args, expected)


def test_minimization_finds_the_least_zero():
    # least y with 5 - y = 0 (truncated) is 5
    assert evaluate(Mu(MONUS), (5,), GENEROUS) == 5
    assert oracle_evaluate(Mu(MONUS), (5,), GENEROUS) == 5
    assert evaluate(Mu(MONUS), (0,), GENEROUS) == 0


def test_minimization_hook_reports_every_return():
    events = []
    got = evaluate(Mu(MONUS), (5,), GENEROUS, on_mu=lambda body, xs, k: events.append((body, xs, k)))
    assert got == 5
    assert events == [(MONUS, (5,), 5)]


def test_nullary_minimization_is_allowed():
    assert evaluate(Mu(Proj(1, 1)), (), GENEROUS) == 0


def test_minimization_without_a_zero_burns_all_fuel():
    never_zero = Mu(Compose(SUCC, (Proj(2, 2),)))
    assert evaluate(never_zero, (7,), 1000) == FuelExhausted(consumed=1000)
    assert oracle_evaluate(never_zero, (7,), 1000) == FuelExhausted(consumed=1000)


def test_minimization_cannot_skip_a_diverging_candidate():
    # body(y, z) = 1 - y (truncated) ignores z, so the scan at y = 0
    # never ends even though y = 1 would satisfy the search immediately.
    body = Compose(MONUS, (const_expr(1, 2), Proj(1, 2)))
    stuck_then_fine = Mu(body)
    assert evaluate(stuck_then_fine, (1,), GENEROUS) == 0
    assert evaluate(stuck_then_fine, (0,), 5000) == FuelExhausted(consumed=5000)
    # sequential search over k hits the diverging k = 0 first
    assert evaluate(Mu(stuck_then_fine), (), 5000) == FuelExhausted(consumed=5000)


def test_fuel_boundary_is_exact():
    value, cost = evaluate_costed(ADD, (2, 3), GENEROUS)
    assert value == 5
    assert evaluate(ADD, (2, 3), cost) == 5
    assert evaluate(ADD, (2, 3), cost - 1) == FuelExhausted(consumed=cost - 1)


def test_costed_evaluation_is_consistent():
    value, cost = evaluate_costed(MUL, (3, 4), GENEROUS)
    assert value == 12
    assert evaluate_costed(MUL, (3, 4), cost) == (12, cost)
    assert evaluate_costed(MUL, (3, 4), cost - 1) == (None, cost - 1)


def test_char_value_enforces_the_boolean_convention():
    assert char_value(EQ_CHAR, (4, 4), GENEROUS) == 0
    assert char_value(EQ_CHAR, (4, 5), GENEROUS) == 1
    with pytest.raises(NotBooleanError) as err:
        char_value(ADD, (2, 3), GENEROUS)
    assert err.value.value == 5
    exhausted = char_value(Mu(Compose(SUCC, (Proj(2, 2),))), (0,), 50)
    assert exhausted == FuelExhausted(consumed=50)


def test_differential_corpus_small():
    """Seeded miniature of the acceptance sweep; exact agreement, always."""
    rng = random.Random(20260819)
    for _ in range(400):
        n = rng.randint(1, 3)
        expr = gen_expr(rng, n, rng.randint(0, 4))
        args = tuple(rng.randint(0, 8) for _ in range(n))
        assert evaluate(expr, args, 3000) == oracle_evaluate(expr, args, 3000)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_more_fuel_never_changes_a_value(seed, arg):
    rng = random.Random(seed)
    expr = gen_expr(rng, 1, rng.randint(0, 3))
    small = evaluate(expr, (arg,), 500)
    if isinstance(small, FuelExhausted):
        return
    assert evaluate(expr, (arg,), 5000) == small
    assert oracle_evaluate(expr, (arg,), 5000) == small


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 5))
def test_minimization_free_terms_are_total(seed, arg):
    """Without Mu every term converges once fuel is doubled far enough."""
    rng = random.Random(seed)
    expr = gen_expr(rng, 1, rng.randint(0, 3))
    if _mentions_mu(expr):
        return
    fuel = 64
    while True:
        got = evaluate(expr, (arg,), fuel)
        if not isinstance(got, FuelExhausted):
            break
        fuel *= 2
        assert fuel < 2**20, "primitive recursive term failed to converge"
    assert got >= 0


def _mentions_mu(expr) -> bool:
    if isinstance(expr, Mu):
        return True
    if isinstance(expr, Compose):
        return _mentions_mu(expr.outer) or any(_mentions_mu(i) for i in expr.inners)
    if isinstance(expr, PrimRec):
        return _mentions_mu(expr.base) or _mentions_mu(expr.step)
    return False
