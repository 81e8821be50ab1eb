"""Scalar norms and quasi-norms on a finite probability space.

Random variables are per-outcome tuples on a :class:`FiniteFiltration`.
The weak Orlicz quasi-norm has an exact closed form on finite spaces; the
Luxemburg norm is a one-dimensional root find.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import InadmissibleControl
from .orlicz import OrliczFunction
from .process import Martingale, conditional_quadratic_sq, maximal, quadratic_sq
from .space import FiniteFiltration

LUXEMBURG_RTOL = 1e-10


def _sqrt(v) -> float:
    return math.sqrt(v)


def lq_norm(F: FiniteFiltration, X, q) -> float:
    """``(E|X|**q)**(1/q)``; ``q = inf`` gives the maximum of ``|X|`` over outcomes."""
    X = F.rv(X)
    if q == math.inf:
        return float(max((abs(x) for x in X), default=0))
    if q < 1:
        raise ValueError("q must be >= 1")
    if isinstance(q, float) and q.is_integer():
        q = int(q)
    s = sum((p * abs(x) ** q for p, x in zip(F.probs, X)), F.zero())
    return float(s) ** (1.0 / q)


def luxemburg_norm(F: FiniteFiltration, X, Phi: OrliczFunction) -> float:
    """``inf{c > 0 : E Phi(|X|/c) <= 1}`` by bracketing and Brent's method."""
    X = F.rv(X)
    vals = [(float(p), abs(float(x))) for p, x in zip(F.probs, X) if x != 0]
    if not vals:
        return 0.0

    def excess(c):
        return sum(p * float(Phi(v / c)) for p, v in vals) - 1.0

    hi = max(v for _, v in vals)
    while excess(hi) > 0:
        hi *= 2.0
    lo = hi / 2.0
    while excess(lo) <= 0:
        hi, lo = lo, lo / 2.0
    return brentq(excess, lo, hi, xtol=1e-300, rtol=LUXEMBURG_RTOL * 1e-2, maxiter=500)


def _distribution(F: FiniteFiltration, keys):
    """Distinct positive keys ascending with ``P(key >= v)``."""
    mass = {}
    for p, k in zip(F.probs, keys):
        if k > 0:
            mass[k] = mass.get(k, 0) + p
    out = []
    tail = F.zero()
    for v in sorted(mass, reverse=True):
        tail += mass[v]
        out.append((v, tail))
    out.reverse()
    return out


def _weak_from_distribution(dist, Phi, value=lambda v: float(v)) -> float:
    best = 0.0
    for v, tail in dist:
        best = max(best, value(v) / Phi.inverse(1.0 / float(tail)))
    return best


def weak_orlicz_norm(F: FiniteFiltration, X, Phi: OrliczFunction) -> float:
    """Weak Orlicz quasi-norm ``inf{c : sup_t Phi(t/c) P(|X| > t) <= 1}``.

    Closed form: ``max_i v_i / Phi^{-1}(1 / P(|X| >= v_i))`` over the
    distinct positive values ``v_i`` of ``|X|``.
    """
    X = F.rv(X)
    return _weak_from_distribution(_distribution(F, [abs(x) for x in X]), Phi)


def weak_orlicz_norm_sq(F: FiniteFiltration, X_sq, Phi: OrliczFunction) -> float:
    """Weak Orlicz quasi-norm of ``sqrt(X_sq)``, grouping the exact squares."""
    return _weak_from_distribution(_distribution(F, F.rv(X_sq)), Phi, _sqrt)


def quasi_triangle_constant(Phi: OrliczFunction) -> float:
    """``K`` with ``||X + Y||_{wL_Phi} <= K (||X|| + ||Y||)``: ``(2 c_Phi)^(1/ell) * 2``."""
    return (2.0 * Phi.c_phi) ** (1.0 / Phi.ell) * 2.0


def embedding_constant(Phi: OrliczFunction) -> float:
    """``(C0 c_Phi)^(1/ell)`` with ``C0 = max(Phi(1) + c_Phi Phi(1), 1)``; bounds ``L_Phi`` by ``L_1``."""
    phi1 = float(Phi(1.0))
    C0 = max(phi1 + Phi.c_phi * phi1, 1.0)
    return (C0 * Phi.c_phi) ** (1.0 / Phi.ell)


def embedding_chain(F: FiniteFiltration, X, Phi: OrliczFunction, rtol: float = 1e-9) -> dict:
    """``||X||_{wL_Phi} <= ||X||_{L_Phi} <= (C0 c_Phi)^(1/ell) ||X||_1``."""
    weak = weak_orlicz_norm(F, X, Phi)
    lux = luxemburg_norm(F, X, Phi)
    l1 = lq_norm(F, X, 1)
    bound = embedding_constant(Phi) * l1
    weak_ok = weak <= lux * (1 + rtol)
    lux_ok = lux <= bound * (1 + rtol)
    return {"weak": weak, "luxemburg": lux, "l1": l1, "l1_bound": bound,
            "weak_below_luxemburg": weak_ok, "luxemburg_below_l1": lux_ok,
            "passed": weak_ok and lux_ok}


def hardy_norms(f: Martingale, Phi: OrliczFunction) -> dict:
    """Weak Orlicz quasi-norms of ``M(f)``, ``S(f)`` and ``s(f)``."""
    F = f.filtration
    return {
        "wH": weak_orlicz_norm(F, maximal(f)[1], Phi),
        "wH_S": weak_orlicz_norm_sq(F, quadratic_sq(f)[1], Phi),
        "wH_s": weak_orlicz_norm_sq(F, conditional_quadratic_sq(f)[1], Phi),
    }


# -- predictable controls -------------------------------------------------------

TARGETS = ("Q", "D", "s")


def target_sq(f: Martingale, target: str) -> list:
    """Squared per-outcome rows ``gamma_n**2`` that a control must dominate.

    ``Q``: ``S_n(f)``; ``D``: ``|f_n|``; ``s``: ``s_n(f)``. Rows ``n = 0..N``.
    """
    if target == "Q":
        return quadratic_sq(f)[0]
    if target == "s":
        return conditional_quadratic_sq(f)[0]
    if target == "D":
        return [tuple(v * v for v in row) for row in f.table()]
    raise ValueError(f"unknown control target {target!r}")


@dataclass(frozen=True)
class PredictableControl:
    """Adapted nondecreasing ``lambda_n`` (squared, per level-``n`` atom) with ``gamma_n <= lambda_{n-1}``."""
    filtration: FiniteFiltration
    target: str
    sq: tuple  # sq[n][i] = lambda_n**2 on atom (n, i)

    def level_sq(self, n: int) -> tuple:
        row = self.sq[n]
        return tuple(row[a] for a in self.filtration.atom_of[n])

    def level(self, n: int) -> tuple:
        return tuple(_sqrt(v) for v in self.level_sq(n))

    def terminal_sq(self) -> tuple:
        return self.level_sq(self.filtration.depth)

    def terminal(self) -> tuple:
        """``lambda_inf = lambda_N`` per outcome (floats)."""
        return self.level(self.filtration.depth)

    def dominates(self, other: "PredictableControl") -> bool:
        return all(a >= b for n in range(self.filtration.depth + 1)
                   for a, b in zip(self.level_sq(n), other.level_sq(n)))


def check_admissible(f: Martingale, control: PredictableControl, tol: float = 1e-12):
    """Raise :class:`InadmissibleControl` unless the control is adapted, monotone and dominating."""
    F = f.filtration
    if control.filtration != F:
        raise InadmissibleControl("control lives on another filtration")
    if control.target not in TARGETS:
        raise InadmissibleControl(f"unknown control target {control.target!r}")
    gam = target_sq(f, control.target)

    def le(a, b):
        if F.exact:
            return a <= b
        return a <= b + tol * max(1.0, abs(b))

    for n in range(F.depth + 1):
        if len(control.sq[n]) != len(F.levels[n]):
            raise InadmissibleControl(f"level {n} has the wrong number of atoms")
        if any(v < 0 for v in control.sq[n]):
            raise InadmissibleControl("control must be nonnegative")
    for n in range(1, F.depth + 1):
        lam_prev = control.level_sq(n - 1)
        if not all(le(a, b) for a, b in zip(lam_prev, control.level_sq(n))):
            raise InadmissibleControl(f"control decreases at level {n}")
        if not all(le(g, l) for g, l in zip(gam[n], lam_prev)):
            raise InadmissibleControl(f"target at level {n} exceeds lambda_{n - 1}")
    return True


def minimal_control(f: Martingale, target: str = "Q") -> PredictableControl:
    """Pointwise least admissible control.

    ``lambda_n = max(lambda_{n-1}, max over the level-n atom of gamma_{n+1})``
    with ``gamma_{N+1} := gamma_N``.
    """
    F = f.filtration
    N = F.depth
    gam = target_sq(f, target)
    gam = list(gam) + [gam[N]]
    rows = []
    prev = None
    for n in range(N + 1):
        row = []
        for i, atom in enumerate(F.levels[n]):
            v = max(gam[n + 1][w] for w in atom)
            if prev is not None:
                v = max(v, prev[F.parent[n][i]])
            row.append(v)
        rows.append(tuple(row))
        prev = rows[-1]
    ctrl = PredictableControl(F, target, tuple(rows))
    check_admissible(f, ctrl)
    return ctrl


def control_norm(f: Martingale, Phi: OrliczFunction, target: str = "Q") -> float:
    """``||lambda*_inf||_{wL_Phi}`` for the minimal control: the ``Q`` or ``D`` quasi-norm."""
    ctrl = minimal_control(f, target)
    return weak_orlicz_norm_sq(f.filtration, ctrl.terminal_sq(), Phi)


def all_hardy_norms(f: Martingale, Phi: OrliczFunction) -> dict:
    """The five weak Hardy-type quasi-norms keyed ``wH, wH_S, wH_s, wQ, wD``."""
    out = hardy_norms(f, Phi)
    out["wQ"] = control_norm(f, Phi, "Q")
    out["wD"] = control_norm(f, Phi, "D")
    return out


def atomic_quasinorm(decomposition, Phi: OrliczFunction) -> float:
    """``max_k 2**k / Phi^{-1}(1 / P(nu_k < inf))`` over atoms with ``P(nu_k < inf) > 0``."""
    best = 0.0
    for atom in decomposition.atoms:
        pk = atom.nu.prob_finite()
        if pk > 0:
            best = max(best, 2.0 ** atom.k / Phi.inverse(1.0 / float(pk)))
    return best
