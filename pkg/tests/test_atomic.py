import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orlicz_mart import (
    Martingale,
    Power,
    PowerLog,
    decompose,
    decompose_control,
    decompose_s,
    decompose_S,
    dyadic_filtration,
    equivalence_report,
    minimal_control,
    rebuild_control,
    regularity_constant,
    tail_convergence,
)
from orlicz_mart.atomic import WeakAtom, equivalence_constants, operator_sq
from orlicz_mart.norms import check_admissible
from orlicz_mart.process import conditional_quadratic_sq, maximal, quadratic_sq
from strategies import coin, martingales

INF = math.inf
F = Fraction


def test_s_decomposition_running_example(f_run):
    dec = decompose_s(f_run)
    assert dec.ks() == [-1, 0]
    a_m1, a_0 = dec.atom(-1), dec.atom(0)
    assert a_m1.a.terminal == (1, 1, -1, -1)
    assert a_m1.nu.times == (0, 0, 0, 0)
    assert conditional_quadratic_sq(a_m1.a)[1] == (1, 1, 1, 1)
    assert a_0.a.terminal == (1, -1, 0, 0)
    assert a_0.nu.times == (1, 1, INF, INF)
    assert conditional_quadratic_sq(a_0.a)[1] == (1, 1, 0, 0)
    assert dec.reconstruct() == f_run
    assert not dec.check()


def test_coin_is_one_atom():
    f = coin()
    dec = decompose_s(f)
    assert dec.ks() == [-1]
    atom = dec.atom(-1)
    assert atom.a == f and atom.nu.prob_finite() == 1


def test_zero_martingale_decompositions():
    zero = Martingale.zero(dyadic_filtration(2))
    for method in "sSMQD":
        dec = decompose(zero, method)
        assert dec.atoms == [] and dec.reconstruct() == zero


def test_S_cover_running_example(f_run):
    dec = decompose_S(f_run)
    nu0 = dec.stopping_times[0]
    assert nu0.times == (1, 1, INF, INF)
    S = quadratic_sq(f_run)[1]
    tail = sum((p for p, v in zip(f_run.filtration.probs, S) if v > 1), F(0))
    assert nu0.prob_finite() == F(1, 2) <= regularity_constant(f_run.filtration) * tail == 1


def test_control_decomposition_running_example(f_run):
    dec = decompose_control(f_run, minimal_control(f_run, "Q"))
    assert dec.stopping_times[-1].times == (0, 0, 0, 0)
    assert dec.reconstruct() == f_run


def test_invalid_atom_detected(f_run):
    a = WeakAtom(f_run, decompose_s(f_run).atom(0).nu, "s", 0, 2)
    assert any("nonzero on" in v for v in a.violations())
    small = WeakAtom(decompose_s(f_run).atom(0).a, decompose_s(f_run).atom(0).nu, "s", -2, 2)
    assert any("exceeds" in v for v in small.violations())


@given(martingales(max_depth=4), st.sampled_from("sSMQD"))
def test_decompositions_reconstruct(f, method):
    dec = decompose(f, method)
    assert dec.reconstruct() == f
    assert not dec.check()
    for atom in dec.atoms:
        T = operator_sq(atom.a, atom.kind)
        assert max(T) <= atom.bound ** 2
        assert all(v == 0 for v, t in zip(T, atom.nu.times) if t == INF)


@given(martingales(max_depth=4))
def test_s_level_sets(f):
    dec = decompose_s(f)
    s_sq = conditional_quadratic_sq(f)[1]
    for k, nu in dec.stopping_times.items():
        assert nu.finite_mask() == tuple(v > F(4) ** k for v in s_sq)


@given(martingales(max_depth=4), st.sampled_from("SM"))
def test_cover_bound_per_level(f, method):
    dec = decompose(f, method)
    Fl = f.filtration
    R = regularity_constant(Fl)
    if method == "S":
        term = quadratic_sq(f)[1]
    else:
        term = tuple(v * v for v in maximal(f)[1])
    for k, nu in dec.stopping_times.items():
        tail = sum((p for p, v in zip(Fl.probs, term) if v > F(4) ** k), F(0))
        assert nu.prob_finite() <= R * tail


@given(martingales(max_depth=4), st.sampled_from("sSM"))
def test_rebuilt_control_is_admissible(f, method):
    ctrl = rebuild_control(decompose(f, method))
    assert check_admissible(f, ctrl)


def test_equivalence_running_example(f_run):
    rep = equivalence_report(f_run, Power(0.5))
    c = rep["constants"]
    assert c["p_inv"] == pytest.approx(2) and c["q_inv"] == pytest.approx(2)
    assert c["C1"] == pytest.approx(2 / (1 - 2 ** -0.5), rel=1e-9)
    assert c["C2"] == pytest.approx(1 / (1 - 2 ** -0.5), rel=1e-9)
    assert rep["atomic_quasinorm"] == pytest.approx(0.5)
    assert rep["weak_hardy_s"] == pytest.approx(1)
    assert rep["upper_bound"] == pytest.approx(209.82, abs=0.01)
    assert rep["passed"]


def test_equivalence_zero():
    rep = equivalence_report(Martingale.zero(dyadic_filtration(2)), Power(0.5))
    assert rep["atomic_quasinorm"] == rep["weak_hardy_s"] == 0 and rep["passed"]


@given(martingales(max_depth=4), st.sampled_from([Power(0.5), Power(1.0), PowerLog(0.5, 1.0)]))
def test_equivalence_holds(f, Phi):
    assert equivalence_report(f, Phi)["passed"]


def test_equivalence_constant_grows_with_A():
    a = equivalence_constants(Power(0.5), 1)["factor"]
    b = equivalence_constants(Power(0.5), 2)["factor"]
    assert b > a


def test_tail_convergence_running_example(f_run):
    Phi = Power(0.5)
    assert tail_convergence(f_run, Phi, -1, 0) == 0
    missing = tail_convergence(f_run, Phi, 0, 0)
    assert missing > 0
    a = decompose_s(f_run).atom(-1).a
    assert missing == pytest.approx(equivalence_report(a, Phi)["weak_hardy_s"])
    assert tail_convergence(f_run, Phi, 5, 4) == pytest.approx(1)


@given(martingales(max_depth=4))
def test_tail_nonincreasing(f):
    Phi = Power(0.5)
    dec = decompose_s(f)
    ks = sorted(dec.stopping_times)
    lo, hi = ks[0], ks[-1]
    vals = [tail_convergence(f, Phi, m, hi, dec) for m in range(hi, lo - 1, -1)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 0
