"""Campanato-type norms, the increment pairing and dual test martingales.

With the weight ``phi(r) = 1/(r Phi^{-1}(1/r))`` the weak Campanato norm
is

    int_0^inf Phi^{-1}(1/x) x^{-1/q} S(x) dx,   S(x) = max_gap(f, q, x),

and ``S`` is a step function read off the Pareto frontier of stopping
times. Each step contributes ``S_j`` times a weight integral that is done
in closed form for power functions and by quadrature otherwise.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import (
    BudgetViolation,
    DegenerateDenominator,
    FiltrationMismatch,
    NonconvergentTail,
    TooManyStoppingTimes,
    ZeroGap,
)
from .norms import lq_norm, weak_orlicz_norm, weak_orlicz_norm_sq
from .orlicz import DualWeight, OrliczFunction, Power, index
from .process import Martingale, conditional_quadratic_sq, maximal, stopped_difference
from .stopping import (
    DEFAULT_ENUM_GUARD,
    StoppingTime,
    atom_gap_profile,
    count_stopping_times,
    enumerate_stopping_times,
    gap_frontier,
    max_gap_witness,
    node_gains,
)
from .atomic import equivalence_constants

QUAD_RTOL = 1e-9
TAIL_ATOL = 1e-12


# -- weight integrals ---------------------------------------------------------------

def _root(g, q) -> float:
    return float(g) ** (1.0 / q)


@functools.lru_cache(maxsize=65536)
def weight_integral(Phi: OrliczFunction, q: float, a: float, b: float) -> float:
    """``int_a^b Phi^{-1}(1/x) x^{-1/q} dx`` for ``0 < a < b <= inf``."""
    if isinstance(Phi, Power):
        alpha = 1.0 / Phi.p + 1.0 / q
        tail_b = 0.0 if math.isinf(b) else b ** (1.0 - alpha)
        return (a ** (1.0 - alpha) - tail_b) / (alpha - 1.0)
    if not math.isinf(b):
        val, _ = quad(lambda y: Phi.inverse(math.exp(-y)) * math.exp(y * (1.0 - 1.0 / q)),
                      math.log(a), math.log(b), epsabs=0.0, epsrel=QUAD_RTOL, limit=200)
        return val
    # u = 1/x on (0, 1/a]; below eps use Phi^{-1}(u) <= Phi^{-1}(1) u^{p'}
    p_low = index(Phi, "inverse").lower
    beta = p_low + 1.0 / q - 1.0
    c1 = Phi.inverse(1.0)
    eps = min(1.0 / a, (TAIL_ATOL * beta / c1) ** (1.0 / beta))
    if eps < 1e-300:
        raise NonconvergentTail("tail remainder bound cannot reach the tolerance")
    val, _ = quad(lambda z: Phi.inverse(math.exp(z)) * math.exp(z * (1.0 / q - 1.0)),
                  math.log(eps), math.log(1.0 / a), epsabs=0.0, epsrel=QUAD_RTOL, limit=500)
    return val


def _step_integral(points, q, Phi) -> float:
    """``sum_j S_j * int_{c_j}^{c_{j+1}} w`` for steps ``[(c_j, gain_j)]`` (gains before the root)."""
    total = 0.0
    for j, (c, g) in enumerate(points):
        if g <= 0:
            continue
        nxt = points[j + 1][0] if j + 1 < len(points) else math.inf
        total += _root(g, q) * weight_integral(Phi, float(q), float(c), float(nxt))
    return total


# -- profiles ------------------------------------------------------------------------

@dataclass(frozen=True)
class CampanatoProfile:
    """Step function ``S(x)`` with breakpoints at achievable budgets.

    ``points[j] = (x_j, G_j)`` where ``G_j = S(x_j)**q`` is kept exact;
    ``S(x) = G_j**(1/q)`` on ``[x_j, x_{j+1})``. ``kind`` is ``"t"`` for
    stopping-time gaps and ``"u"`` for single-atom gaps.
    """
    q: float
    Phi: OrliczFunction
    points: tuple
    kind: str = "t"

    def S(self, x) -> float:
        val = 0.0
        for c, g in self.points:
            if c <= x:
                val = _root(g, self.q)
        return val

    def t(self, x: float) -> float:
        """``(1/phi(x)) x^{-1/q} S(x)``."""
        return x * self.Phi.inverse(1.0 / x) * x ** (-1.0 / self.q) * self.S(x)

    def norm(self) -> float:
        return _step_integral(self.points, self.q, self.Phi)

    def as_dict(self) -> dict:
        return {"q": self.q, "kind": self.kind,
                "breakpoints": [[str(c), _root(g, self.q)] for c, g in self.points]}


def _exact_q(q):
    return int(q) if float(q).is_integer() else float(q)


def campanato_profile(f: Martingale, q, Phi: OrliczFunction) -> CampanatoProfile:
    q = _exact_q(q)
    pts = tuple((c, g) for c, g, _ in gap_frontier(f, q))
    return CampanatoProfile(q, Phi, pts, "t")


def atom_profile(f: Martingale, q, Phi: OrliczFunction) -> CampanatoProfile:
    q = _exact_q(q)
    return CampanatoProfile(q, Phi, tuple(atom_gap_profile(f, q)), "u")


def w_campanato_norm(f: Martingale, q, Phi: OrliczFunction) -> float:
    """``int_0^inf t_phi^q(x) dx / x`` for ``phi`` the dual weight of ``Phi``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    index(Phi, "inverse")  # raises IndexUnbounded
    return campanato_profile(f, q, Phi).norm()


def w_atom_campanato(f: Martingale, q, Phi: OrliczFunction) -> float:
    """The same integral built from single-atom gaps at levels ``n >= 1``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return atom_profile(f, q, Phi).norm()


def _weight(phi):
    """An Orlicz function stands for its dual weight; other callables are used as given."""
    return DualWeight(phi) if isinstance(phi, OrliczFunction) else phi


def classic_campanato(f: Martingale, q, phi) -> float:
    """``sup_{n>=1, A in F_n} (1/phi(P(A))) (P(A)^{-1} int_A |f - E_n f|^q)^{1/q}``."""
    phi = _weight(phi)
    F = f.filtration
    best = 0.0
    for (n, i), g in node_gains(f, _exact_q(q)).items():
        if n >= 1 and g > 0:
            P = F.atom_prob[n][i]
            best = max(best, _root(g / P, q) / float(phi(float(P))))
    return best


def _stopped_value(cost, gain, q, phi) -> float:
    return _root(gain / cost, q) / float(phi(float(cost)))


def stopped_campanato_detail(f: Martingale, q, phi, guard: int = DEFAULT_ENUM_GUARD,
                             exact: bool = False) -> dict:
    """Supremum over stopping times with ``P(nu < inf) > 0``.

    For dual weights ``c -> c^{1-1/q} Phi^{-1}(1/c)`` is nonincreasing, so a
    Pareto-optimal stopping time attains the supremum and the frontier is
    exact. Other weights are enumerated under ``guard``; beyond it the
    frontier value is returned flagged as a lower bound (or
    :class:`TooManyStoppingTimes` when ``exact``).
    """
    q = _exact_q(q)
    w = _weight(phi)
    F = f.filtration
    candidates = None
    is_exact = True
    if not isinstance(w, DualWeight):
        if count_stopping_times(F) <= guard:
            gains = node_gains(f, q)
            candidates = []
            for nu in enumerate_stopping_times(F, guard):
                c = nu.prob_finite()
                candidates.append((c, sum((gains[v] for v in nu.nodes), F.zero()),
                                   tuple(sorted(nu.nodes))))
        elif exact:
            raise TooManyStoppingTimes("stopping times exceed the guard")
        else:
            is_exact = False
    if candidates is None:
        candidates = gap_frontier(f, q)
    best, witness = 0.0, ()
    for c, g, nodes in candidates:
        if c > 0 and g > 0:
            v = _stopped_value(c, g, q, w)
            if v > best:
                best, witness = v, tuple(sorted(nodes))
    return {"value": best, "exact": is_exact, "witness": [list(v) for v in witness]}


def stopped_campanato(f: Martingale, q, phi, guard: int = DEFAULT_ENUM_GUARD,
                      exact: bool = False) -> float:
    return stopped_campanato_detail(f, q, phi, guard, exact)["value"]


# -- pairing and duality ------------------------------------------------------------

def pairing(f: Martingale, g: Martingale):
    """``E sum_n df_n dg_n``; checked against ``E f_N g_N``."""
    if f.filtration != g.filtration:
        raise FiltrationMismatch("pairing needs a common filtration")
    F = f.filtration
    z = F.zero()
    total = z
    for a, b in zip(f.increments(), g.increments()):
        total += sum((p * x * y for p, x, y in zip(F.probs, a, b)), z)
    direct = sum((p * x * y for p, x, y in zip(F.probs, f.terminal, g.terminal)), z)
    if F.exact:
        assert total == direct, "increment orthogonality failed"
    else:
        assert abs(total - direct) <= 1e-12 * max(1.0, abs(direct)), "increment orthogonality failed"
    return total


def duality_ratio(f: Martingale, g: Martingale, Phi: OrliczFunction) -> float:
    """``|<f, g>| / (||f||_{wH^s} ||g||_{wL_{2,phi}})``."""
    nf = weak_orlicz_norm_sq(f.filtration, conditional_quadratic_sq(f)[1], Phi)
    ng = w_campanato_norm(g, 2, Phi)
    if nf <= 0 or ng <= 0:
        raise DegenerateDenominator("both norms must be positive")
    return abs(float(pairing(f, g))) / (nf * ng)


# -- dual test martingales ------------------------------------------------------------

MODES = ("s-normalized", "L1-sign", "Lq-power")


def _mode_q(mode, q):
    if mode == "s-normalized":
        return 2
    if mode == "L1-sign":
        return 1
    if q is None or q <= 1:
        raise ValueError("Lq-power mode needs q > 1")
    return _exact_q(q)


def mode_budget(mode: str, Phi: OrliczFunction, k: int) -> float:
    """Admissible ``P(nu_k < inf)``: ``1/Phi(2**k)`` for ``L1-sign``, ``2**-k`` otherwise."""
    if mode == "L1-sign":
        return 1.0 / float(Phi(2.0 ** k))
    return 2.0 ** (-k)


def default_k_range(g: Martingale, Phi: OrliczFunction, mode: str) -> list:
    """Levels whose budgets run from above 1 down past the smallest atom mass."""
    F = g.filtration
    pmin = min(float(p) for p in F.probs)
    lo, hi = -2, 0
    while mode_budget(mode, Phi, hi) >= pmin / 2:
        hi += 1
    return list(range(lo, hi + 1))


def witness_family(g: Martingale, Phi: OrliczFunction, mode: str = "s-normalized",
                   ks=None, q=None, **guards) -> dict:
    """Gap-maximising ``nu_k`` at each level's budget, from the knapsack witness."""
    qq = _mode_q(mode, q)
    ks = default_k_range(g, Phi, mode) if ks is None else ks
    out = {}
    for k in ks:
        budget = mode_budget(mode, Phi, k)
        out[k] = max_gap_witness(g, qq, min(budget, 1.0), **guards)
    return out


@dataclass
class DualTestResult:
    mode: str
    f: Martingale
    ks: list
    skipped: list
    functional: float
    pairing: float
    norm: float
    norm_name: str
    bound: float
    constants: dict

    @property
    def passed(self) -> bool:
        return (self.norm <= self.bound * (1 + 1e-12)
                and abs(self.pairing - self.functional) <= 1e-9 * max(1.0, abs(self.functional)))

    def as_dict(self) -> dict:
        return {"mode": self.mode, "ks": self.ks, "skipped": self.skipped,
                "functional": self.functional, "pairing": self.pairing,
                "norm": self.norm, "norm_name": self.norm_name, "bound": self.bound,
                "constants": self.constants, "passed": self.passed}


def _proof_constants(Phi: OrliczFunction, mode: str, q) -> dict:
    """``2^{q_inv} max(C_I, C_II)`` from the splitting argument, with the Chebyshev constant per mode."""
    idx = index(Phi, "inverse")
    p, qi = idx.lower, idx.upper
    if mode == "s-normalized":
        C1 = 1.0 / (2.0 ** (p - 0.5) - 1.0) ** 2
    else:
        qd = q / (q - 1.0)
        # Doob: ||M g||_{q'} <= q ||g||_{q'}; ||h - h^nu||_{q'} <= 2
        C1 = (2.0 * q) ** qd / (2.0 ** (p - 1.0 / qd) - 1.0) ** qd
    CI = (2.0 * Phi.c_phi * max(C1, 1.0)) ** (1.0 / Phi.ell)
    CII = (8.0 * Phi.c_phi) ** (1.0 / Phi.ell)
    return {"p_inv": p, "q_inv": qi, "C1": C1, "C_I": CI, "C_II": CII,
            "C": 2.0 ** qi * max(CI, CII)}


def dual_test_martingale(g: Martingale, Phi: OrliczFunction, mode: str = "s-normalized",
                         stopping_times: dict | None = None, ks=None, q=None,
                         **guards) -> DualTestResult:
    """Assemble ``f^N = sum_k a^k`` from gaps ``g - g^{nu_k}`` and check its norm bound.

    Modes: ``s-normalized`` scales ``g - g^{nu_k}`` to ``||s(a^k)||_2 =
    Phi^{-1}(2^k) 2^{-k/2}``; ``L1-sign`` uses ``2^k (h_k - h_k^{nu_k})`` with
    ``h_k = sign(g - g^{nu_k})``; ``Lq-power`` uses the ``L_{q'}``-normalised
    dual element of ``g - g^{nu_k}``. The returned functional is the sum of
    the weighted gap terms, which must equal ``<f^N, g>``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    qq = _mode_q(mode, q)
    if stopping_times is None:
        stopping_times = witness_family(g, Phi, mode, ks, q, **guards)
    F = g.filtration
    exact = F.exact and mode == "L1-sign"
    G = g if exact else g.to_float()
    Ff = G.filtration
    X = G.terminal
    total = [Ff.zero()] * Ff.n_outcomes
    functional = 0.0 if not exact else Ff.zero()
    used, skipped = [], []
    for k in sorted(stopping_times):
        nu = stopping_times[k]
        cost = float(nu.prob_finite())
        if cost > mode_budget(mode, Phi, k) * (1 + 1e-12):
            raise BudgetViolation(f"P(nu_{k} < inf) = {cost} exceeds the budget at level {k}")
        nu = StoppingTime(Ff, nu.nodes)
        d = stopped_difference(Ff, X, nu)
        if all(v == 0 for v in d):
            skipped.append(k)
            continue
        used.append(k)
        if mode == "s-normalized":
            n2 = lq_norm(Ff, d, 2)
            scale = Phi.inverse(2.0 ** k) * 2.0 ** (-k / 2) / n2
            a = tuple(scale * v for v in d)
            functional += Phi.inverse(2.0 ** k) * 2.0 ** (-k / 2) * n2
        elif mode == "L1-sign":
            h = tuple((v > 0) - (v < 0) for v in d)
            assert all(abs(v) <= 1 for v in h)
            two_k = Ff.zero() + 2 ** k if exact else 2.0 ** k
            a = tuple(two_k * v for v in stopped_difference(Ff, h, nu))
            functional += two_k * sum((p * abs(v) for p, v in zip(Ff.probs, d)), Ff.zero())
        else:
            nq = lq_norm(Ff, d, qq)
            h = tuple(abs(v) ** (qq - 1) * np.sign(v) / nq ** (qq - 1) for v in d)
            qd = qq / (qq - 1.0)
            hn = lq_norm(Ff, h, qd)
            assert abs(hn - 1.0) <= 1e-12, f"||h_k||_q' = {hn}"
            coef = Phi.inverse(2.0 ** k) * 2.0 ** (-k / qd)
            a = tuple(coef * float(v) for v in stopped_difference(Ff, h, nu))
            functional += coef * nq
        total = [x + y for x, y in zip(total, a)]
    if not used:
        raise ZeroGap("g equals g^{nu_k} for every supplied k")
    if not exact:
        mean = sum(p * v for p, v in zip(Ff.probs, total))
        total = [v - mean for v in total]  # rounding only; the exact mean is zero
    fN = Martingale.from_terminal(Ff, total)
    pair = float(pairing(fN, G))
    if mode == "s-normalized":
        norm = weak_orlicz_norm_sq(Ff, conditional_quadratic_sq(fN)[1], Phi)
        consts = _proof_constants(Phi, mode, 2)
        name = "wH_s"
    else:
        norm = weak_orlicz_norm(Ff, maximal(fN)[1], Phi)
        name = "wH"
        if mode == "L1-sign":
            # M-atoms with bound 2 * 2^k and P(nu_k < inf) <= 1/Phi(2^k)
            Mq = max(2.0 ** k / Phi.inverse(1.0 / float(stopping_times[k].prob_finite()))
                     for k in used)
            consts = dict(equivalence_constants(Phi, 1))
            consts["atomic_quasinorm"] = Mq
            consts["C"] = consts["factor"] * Mq
        else:
            consts = _proof_constants(Phi, mode, float(qq))
    return DualTestResult(mode, fN, used, skipped, float(functional), pair, norm, name,
                          consts["C"], consts)


# -- John-Nirenberg comparator ---------------------------------------------------------

def holder_ordering_on_profiles(f: Martingale, q1: int, q2: int) -> bool:
    """``S_{q1}(x) <= S_{q2}(x) x^{1/q1 - 1/q2}`` at every breakpoint, exactly for integer ``q``.

    Both sides are step functions in ``S`` and the right side grows with
    ``x``, so left endpoints of the merged breakpoints suffice.
    """
    if q1 > q2:
        q1, q2 = q2, q1
    F = f.filtration
    p1 = [(c, g) for c, g, _ in gap_frontier(f, q1)]
    p2 = [(c, g) for c, g, _ in gap_frontier(f, q2)]

    def at(points, x):
        val = F.zero()
        for c, g in points:
            if c <= x:
                val = g
        return val

    xs = sorted({c for c, _ in p1} | {c for c, _ in p2})
    for x in xs:
        if x == 0:
            continue
        g1, g2 = at(p1, x), at(p2, x)
        if isinstance(q1, int) and isinstance(q2, int) and F.exact:
            # g1^{1/q1} <= g2^{1/q2} x^{1/q1-1/q2}  <=>  g1^{q2} <= g2^{q1} x^{q2-q1}
            if g1 ** q2 > g2 ** q1 * x ** (q2 - q1):
                return False
        elif float(g1) ** (1 / q1) > float(g2) ** (1 / q2) * float(x) ** (1 / q1 - 1 / q2) * (1 + 1e-12):
            return False
    return True


def john_nirenberg_report(corpus, Phi: OrliczFunction, qs=(1, 2, 4)) -> dict:
    """Per-martingale norms for each ``q``, ratio ranges, and the ordering check."""
    qs = sorted(_exact_q(q) for q in qs)
    rows = []
    ordering_failures = []
    for cid, f in corpus:
        norms = {str(q): w_campanato_norm(f, q, Phi) for q in qs}
        ok = True
        for i, q1 in enumerate(qs):
            for q2 in qs[i + 1:]:
                if not holder_ordering_on_profiles(f, q1, q2):
                    ok = False
                if norms[str(q1)] > norms[str(q2)] * (1 + 1e-9):
                    ok = False
        if not ok:
            ordering_failures.append(cid)
        rows.append({"case": cid, "norms": norms, "ordering": ok})
    ratios = {}
    for i, q1 in enumerate(qs):
        for q2 in qs[i + 1:]:
            vals = [r["norms"][str(q2)] / r["norms"][str(q1)] for r in rows
                    if r["norms"][str(q1)] > 0]
            key = f"{q2}/{q1}"
            ratios[key] = {"min": min(vals) if vals else None, "max": max(vals) if vals else None}
    return {"qs": qs, "cases": rows, "ratios": ratios,
            "ordering_failures": ordering_failures, "passed": not ordering_failures}
