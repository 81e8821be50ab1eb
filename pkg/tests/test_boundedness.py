import math
from dataclasses import dataclass
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orlicz_mart import (
    BUILTIN_OPERATORS,
    Martingale,
    Power,
    PowerLog,
    StoppingTime,
    boundedness_suite,
    check_atom_support,
    decompose,
    decompose_s,
    dyadic_filtration,
    inequality_chain,
    square_vs_conditional,
)
from orlicz_mart.boundedness import chain_corpus_report, proof_constant
from orlicz_mart.corpus import generate_corpus
from orlicz_mart.errors import HypothesisViolated
from orlicz_mart.process import OperatorSpec
from strategies import martingale_pairs, martingales

OPS = list(BUILTIN_OPERATORS.values())


@dataclass
class Loose:
    a: Martingale
    nu: StoppingTime


def test_atom_support_running_example(f_run):
    rep = check_atom_support(BUILTIN_OPERATORS["M"], decompose_s(f_run).atoms)
    assert rep["worst_constant"] == 1 and rep["violations"] == []


def test_zero_atom_support():
    F = dyadic_filtration(2)
    rep = check_atom_support(BUILTIN_OPERATORS["S"], [Loose(Martingale.zero(F), StoppingTime.never(F))])
    assert rep["worst_constant"] == 0 and rep["violations"] == []


def test_shifted_non_atom_is_reported(f_run):
    atom = decompose_s(f_run).atom(0)
    # the right half of the tree moves but nu is only finite on the left
    shifted = Loose(decompose_s(f_run).atom(-1).a, atom.nu)
    rep = check_atom_support(BUILTIN_OPERATORS["M"], [shifted])
    assert rep["violations"] == [0]
    assert not rep["atoms"][0]["genuine"]
    assert rep["worst_constant"] == 2


@given(martingales(max_depth=4), st.sampled_from("sSMQD"))
def test_builtin_support_containment(f, method):
    for T in OPS:
        rep = check_atom_support(T, decompose(f, method).atoms)
        assert rep["violations"] == []
        assert rep["worst_constant"] <= 1


@given(martingale_pairs(max_depth=3), st.fractions(-4, 4))
def test_builtin_operators_sublinear(fg, c):
    f, g = fg
    for T in OPS:
        lhs = T.apply(f + g)
        a, b = T.apply(f), T.apply(g)
        assert all(abs(x) <= abs(y) + abs(z) + 1e-12 for x, y, z in zip(lhs, a, b))
        scaled = T.apply(f * c)
        assert all(abs(abs(x) - abs(float(c)) * abs(y)) <= 1e-12 * (1 + abs(y))
                   for x, y in zip(scaled, a))


def test_suite_ratios_finite_and_scale_invariant():
    corpus = generate_corpus(20, seed=3, depth=3)
    Phi = Power(0.5)
    T = BUILTIN_OPERATORS["terminal"]
    rep = boundedness_suite(T, Phi, corpus, proof_constants=True)
    assert rep["passed"] and math.isfinite(rep["empirical_constant"])
    scaled = boundedness_suite(T, Phi, [(c, f * 7) for c, f in corpus])
    for a, b in zip(rep["cases"], scaled["cases"]):
        assert a["ratio"] == pytest.approx(b["ratio"], rel=1e-10)


def test_suite_skips_zero_martingale():
    F = dyadic_filtration(2)
    rep = boundedness_suite(BUILTIN_OPERATORS["M"], Power(0.5), [("z", Martingale.zero(F))])
    assert rep["cases"][0]["ratio"] is None and rep["passed"]


@pytest.mark.parametrize("name", ["M", "S", "s", "terminal"])
@pytest.mark.parametrize("Phi", [Power(0.5), Power(1.0), PowerLog(0.5, 1.0)])
def test_proof_constants_hold(name, Phi):
    corpus = generate_corpus(30, seed=11, depth=3, kind="mixed", max_branching=3)
    rep = boundedness_suite(BUILTIN_OPERATORS[name], Phi, corpus, proof_constants=True)
    assert rep["passed"], rep["failures"]
    assert rep["empirical_constant"] <= rep["proof_constants"]["C"]


def test_hypothesis_violations():
    wide = OperatorSpec("wide", BUILTIN_OPERATORS["M"].apply, r=3.0)
    with pytest.raises(HypothesisViolated):
        boundedness_suite(wide, Power(0.5), [])
    # 1/p' = 1 for Power(1) is not below r = 1
    narrow = OperatorSpec("narrow", BUILTIN_OPERATORS["M"].apply, r=1.0)
    with pytest.raises(HypothesisViolated):
        boundedness_suite(narrow, Power(1.0), [])
    with pytest.raises(ValueError):
        proof_constant(narrow, Power(0.5))


def test_maximal_matches_chain_entry(f_run):
    rep = boundedness_suite(BUILTIN_OPERATORS["M"], Power(0.5), [("r", f_run)])
    chain = inequality_chain(f_run, Power(0.5))
    assert rep["cases"][0]["ratio"] == pytest.approx(chain["ratios"]["wH/wH_s"])


def test_chain_running_example(f_run):
    rep = inequality_chain(f_run, Power(0.5))
    assert rep["norms"]["wQ"] == pytest.approx(1) and rep["norms"]["wH_s"] == pytest.approx(1)
    assert rep["q_below_scaled_s"]
    assert rep["square_vs_conditional"]["factor_sq"] == 1


def test_chain_zero():
    rep = inequality_chain(Martingale.zero(dyadic_filtration(2)), Power(0.5))
    assert set(rep["norms"].values()) == {0.0}
    assert all(v is None for v in rep["ratios"].values())


@given(martingales(max_depth=4))
def test_square_vs_conditional_sharp_bound(f):
    rep = square_vs_conditional(f)
    assert rep["factor_sq"] <= Fraction(rep["R"]) - 1 or f.depth == 0


def test_square_vs_conditional_bound_attained():
    # a 1:3 split has R = 4; the light child carries (1-pi)/pi = 3 times the variance
    from orlicz_mart import make_filtration
    F = make_filtration([(0, Fraction(1, 4)), (1, Fraction(3, 4))], [[[0, 1]], [[0], [1]]])
    f = Martingale.from_terminal(F, [Fraction(3), Fraction(-1)])
    rep = square_vs_conditional(f)
    assert rep["R"] == 4 and rep["factor_sq"] == 3


def test_chain_corpus_report_two_sided():
    corpus = generate_corpus(20, seed=5, depth=3)
    rep = chain_corpus_report(corpus, Power(0.5))
    assert rep["finite"]
    C = rep["two_sided_constant"]
    for case in rep["cases"]:
        q, d = case["norms"]["wQ"], case["norms"]["wD"]
        assert d / C <= q * (1 + 1e-12) and q / C <= d * (1 + 1e-12)
