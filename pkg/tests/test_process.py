import math
from fractions import Fraction

import pytest
from hypothesis import given

from orlicz_mart import (
    BUILTIN_OPERATORS,
    Martingale,
    StoppingTime,
    conditional_expectation,
    conditional_quadratic,
    dyadic_filtration,
    maximal,
    quadratic,
    stop,
)
from orlicz_mart.errors import NonCenteredTerminal
from orlicz_mart.process import conditional_quadratic_sq, difference_gap, quadratic_sq
from strategies import martingale_pairs, martingales


def test_running_levels(f_run):
    assert f_run.level(0) == (0, 0, 0, 0)
    assert f_run.level(1) == (1, 1, -1, -1)


def test_noncentred_terminal(F2):
    with pytest.raises(NonCenteredTerminal):
        Martingale.from_terminal(F2, [Fraction(1)] * 4)
    assert Martingale.from_terminal(F2, [Fraction(0)] * 4).is_zero()


def test_operators_on_running_example(f_run):
    r2 = math.sqrt(2)
    assert maximal(f_run)[1] == (2, 1, 1, 1)
    assert quadratic(f_run)[1] == pytest.approx((r2, r2, 1, 1), rel=1e-15)
    assert conditional_quadratic(f_run)[1] == pytest.approx((r2, r2, 1, 1), rel=1e-15)


def test_stopping_examples(f_run):
    F = f_run.filtration
    never = StoppingTime.never(F)
    assert stop(f_run, never) == f_run
    assert stop(f_run, StoppingTime.constant(F, 0)).is_zero()
    nu = StoppingTime(F, [(1, 0)])
    assert stop(f_run, nu).terminal == (1, 1, -1, -1)
    assert difference_gap(f_run, nu, 2) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert difference_gap(f_run, StoppingTime.constant(F, 2), 2) == 0
    assert difference_gap(f_run, StoppingTime.constant(F, 0), 2) == pytest.approx(math.sqrt(1.5))


@given(martingales())
def test_martingale_property_and_orthogonality(f):
    F = f.filtration
    tab = f.table()
    for n in range(F.depth):
        assert conditional_expectation(F, tab[n + 1], n) == tab[n]
    ES2 = F.expectation(quadratic_sq(f)[1])
    Es2 = F.expectation(conditional_quadratic_sq(f)[1])
    Ef2 = F.expectation([v * v for v in f.terminal])
    assert ES2 == Es2 == Ef2


@given(martingales())
def test_s_of_gap_splits(f):
    F = f.filtration
    for nu in [StoppingTime(F, [(1, 0)]), StoppingTime.constant(F, 1), StoppingTime.never(F)]:
        g = stop(f, nu)
        lhs = conditional_quadratic_sq(f - g)[1]
        rhs = tuple(a - b for a, b in zip(conditional_quadratic_sq(f)[1],
                                          conditional_quadratic_sq(g)[1]))
        assert lhs == rhs


@given(martingale_pairs())
def test_operators_sublinear(pair):
    f, g = pair
    for T in BUILTIN_OPERATORS.values():
        a, b, c = T.apply(f + g), T.apply(f), T.apply(g)
        assert all(abs(float(x)) <= abs(float(y)) + abs(float(z)) + 1e-12 for x, y, z in zip(a, b, c))
        d = T.apply(f * -3)
        assert all(abs(abs(float(x)) - 3 * abs(float(y))) <= 1e-12 * max(1.0, abs(float(y)))
                   for x, y in zip(d, b))


def test_symmetric_dyadic_splits_give_equal_S_and_s():
    F = dyadic_filtration(3)
    X = [Fraction(v) for v in (3, 1, -1, -3, 2, 2, -2, -2)]
    f = Martingale.from_terminal(F, X)
    assert quadratic_sq(f)[1] == conditional_quadratic_sq(f)[1]
