import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orlicz_mart import (
    Martingale,
    Power,
    PowerLog,
    StoppingTime,
    classic_campanato,
    dual_test_martingale,
    duality_ratio,
    dyadic_filtration,
    john_nirenberg_report,
    pairing,
    stopped_campanato,
    w_atom_campanato,
    w_campanato_norm,
)
from orlicz_mart.campanato import (
    campanato_profile,
    holder_ordering_on_profiles,
    stopped_campanato_detail,
    witness_family,
)
from orlicz_mart.errors import (
    BudgetViolation,
    DegenerateDenominator,
    FiltrationMismatch,
    ZeroGap,
)
from oracles import campanato_oracle
from strategies import martingale_pairs, martingales

RUNNING_NORM = math.sqrt(0.5) * (2 / 3) * (2 ** 1.5 - 1) + math.sqrt(1.5) * (2 / 3)


def identity(r):
    return r


def test_running_norm_closed_form(f_run):
    assert RUNNING_NORM == pytest.approx(1.678425, abs=1e-6)
    assert w_campanato_norm(f_run, 2, Power(0.5)) == pytest.approx(RUNNING_NORM, rel=1e-12)


def test_running_profile(f_run):
    prof = campanato_profile(f_run, 2, Power(0.5))
    assert prof.S(Fraction(1, 4)) == 0
    assert prof.S(Fraction(1, 2)) == pytest.approx(math.sqrt(0.5))
    assert prof.S(5) == pytest.approx(math.sqrt(1.5))
    # phi(r) = r for Power(1/2), so t(x) = x^{-3/2} S(x)
    assert prof.t(0.5) == pytest.approx(2)


@pytest.mark.parametrize("Phi", [Power(0.5), PowerLog(0.5, 1.0), Power(1.0)])
@pytest.mark.parametrize("q", [1, 2, 4])
def test_norm_matches_quadrature_oracle(f_run, Phi, q):
    assert w_campanato_norm(f_run, q, Phi) == pytest.approx(campanato_oracle(f_run, q, Phi),
                                                            rel=1e-6)


def test_norm_matches_oracle_on_skewed_tree():
    from orlicz_mart.corpus import generate_corpus
    f = generate_corpus(1, seed=7, depth=2, kind="random", max_branching=3, skew=1.0)[0][1]
    for Phi in (Power(0.5), PowerLog(0.8, 0.3)):
        assert w_campanato_norm(f, 2, Phi) == pytest.approx(campanato_oracle(f, 2, Phi), rel=1e-6)


def test_zero_martingale_norms():
    zero = Martingale.zero(dyadic_filtration(2))
    Phi = Power(0.5)
    assert w_campanato_norm(zero, 2, Phi) == 0
    assert w_atom_campanato(zero, 2, Phi) == 0
    assert classic_campanato(zero, 2, identity) == 0
    assert stopped_campanato(zero, 2, identity) == 0


@given(martingales(max_depth=3), st.fractions(-5, 5).filter(lambda c: c != 0),
       st.sampled_from([1, 2, 3]))
def test_norm_homogeneous(f, c, q):
    Phi = Power(0.5)
    assert w_campanato_norm(f * c, q, Phi) == pytest.approx(abs(float(c)) * w_campanato_norm(f, q, Phi),
                                                             rel=1e-9)


def test_classic_and_stopped_running_example(f_run):
    assert classic_campanato(f_run, 2, identity) == pytest.approx(2)
    assert stopped_campanato(f_run, 2, identity) == pytest.approx(2)
    # the dual weight of Power(1/2) is phi(r) = r as well
    assert classic_campanato(f_run, 2, Power(0.5)) == pytest.approx(2)
    detail = stopped_campanato_detail(f_run, 2, identity, exact=True)
    assert detail["exact"] and detail["witness"] == [[1, 0]]


@given(martingales(max_depth=3, branching=2), st.sampled_from([1, 2]))
def test_classic_below_stopped(f, q):
    for phi in (identity, Power(0.5), PowerLog(0.5, 1.0)):
        assert classic_campanato(f, q, phi) <= stopped_campanato(f, q, phi) * (1 + 1e-12)


@settings(max_examples=10)
@given(martingales(max_depth=3, branching=2))
def test_stopped_frontier_equals_enumeration_for_dual_weights(f):
    Phi = PowerLog(0.5, 1.0)
    fast = stopped_campanato(f, 2, Phi)
    # a plain callable forces exhaustive enumeration
    slow = stopped_campanato(f, 2, lambda r: 1.0 / (r * Phi.inverse(1.0 / r)))
    assert fast == pytest.approx(slow, rel=1e-12)


def test_pairing_examples(f_run):
    assert pairing(f_run, f_run) == Fraction(3, 2)
    assert pairing(f_run, Martingale.zero(f_run.filtration)) == 0
    with pytest.raises(FiltrationMismatch):
        pairing(f_run, Martingale.zero(dyadic_filtration(1)))


@given(martingale_pairs(max_depth=3), st.fractions(-3, 3))
def test_pairing_bilinear(fg, c):
    f, g = fg
    assert pairing(f * c + g, g) == c * pairing(f, g) + pairing(g, g)


def test_duality_ratio_running_example(f_run):
    r = duality_ratio(f_run, f_run, Power(0.5))
    assert r == pytest.approx(1.5 / RUNNING_NORM, rel=1e-12)
    assert r == pytest.approx(0.894, abs=1e-3)
    with pytest.raises(DegenerateDenominator):
        duality_ratio(f_run, Martingale.zero(f_run.filtration), Power(0.5))


@given(martingale_pairs(max_depth=3), st.fractions(1, 8))
def test_duality_ratio_scale_invariant(fg, c):
    f, g = fg
    Phi = Power(0.5)
    if pairing(f, g) == 0:
        return
    assert duality_ratio(f * c, g, Phi) == pytest.approx(duality_ratio(f, g, Phi), rel=1e-9)


def test_dual_test_zero_gap(f_run):
    never = {0: StoppingTime.never(f_run.filtration)}
    with pytest.raises(ZeroGap):
        dual_test_martingale(f_run, Power(0.5), stopping_times=never)


def test_dual_test_budget_violation(f_run):
    everywhere = {3: StoppingTime.constant(f_run.filtration, 0)}
    with pytest.raises(BudgetViolation):
        dual_test_martingale(f_run, Power(0.5), stopping_times=everywhere)


@pytest.mark.parametrize("mode,q", [("s-normalized", None), ("L1-sign", None), ("Lq-power", 2)])
def test_dual_test_modes_running_example(f_run, mode, q):
    res = dual_test_martingale(f_run, Power(0.5), mode, q=q)
    assert res.passed
    assert res.pairing == pytest.approx(res.functional, rel=1e-9)


@given(martingales(max_depth=3), st.sampled_from([("s-normalized", None), ("L1-sign", None),
                                                   ("Lq-power", 2), ("Lq-power", 3)]),
       st.sampled_from([Power(0.5), Power(1.0), PowerLog(0.5, 1.0)]))
def test_dual_test_modes_hold(g, mode_q, Phi):
    mode, q = mode_q
    fam = witness_family(g, Phi, mode, q=q)
    try:
        res = dual_test_martingale(g, Phi, mode, stopping_times=fam, q=q)
    except ZeroGap:
        return
    assert res.passed, res.as_dict()


def test_john_nirenberg_running_example(f_run):
    rep = john_nirenberg_report([("a", f_run), ("b", f_run * 2)], Power(0.5), qs=(1, 2, 4))
    assert rep["passed"]
    for key, rng in rep["ratios"].items():
        assert rng["min"] == pytest.approx(rng["max"], rel=1e-12), key
    same = john_nirenberg_report([("a", f_run)], Power(0.5), qs=(2, 2))
    assert same["passed"]


@given(martingales(max_depth=3), st.sampled_from([(1, 2), (1, 4), (2, 3), (2, 4)]))
def test_holder_ordering(f, qq):
    assert holder_ordering_on_profiles(f, *qq)
    Phi = Power(0.5)
    assert w_campanato_norm(f, qq[0], Phi) <= w_campanato_norm(f, qq[1], Phi) * (1 + 1e-12)
