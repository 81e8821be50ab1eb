"""Weak-atom decompositions driven by dyadic stopping-time families.

Every decomposition has the same shape: a nondecreasing family ``nu_k``
and atoms ``a^k = f^{nu_{k+1}} - f^{nu_k}``. The families differ in how
``nu_k`` is chosen: first passage of the predictable ``s_{n+1}(f)``, a
regular cover of ``S_n(f)`` or ``M_n(f)``, or first passage of a
predictable control. All threshold comparisons are done on squares so the
rational backend stays exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InadmissibleControl
from .norms import (
    PredictableControl,
    atomic_quasinorm,
    check_admissible,
    weak_orlicz_norm_sq,
)
from .orlicz import OrliczFunction, index
from .process import Martingale, conditional_quadratic_sq, maximal, quadratic_sq, stop
from .space import regularity_constant
from .stopping import StoppingTime, first_passage_predictable, pointwise_max, regular_cover

KINDS = ("s", "S", "M")


def _pow4(k: int, exact: bool):
    return Fraction(4) ** k if exact else 4.0 ** k


def _pow2(k: int, exact: bool):
    return Fraction(2) ** k if exact else 2.0 ** k


def floor_log2_sqrt(v, exact: bool = True) -> int:
    """Largest ``k`` with ``4**k <= v`` (``v > 0``)."""
    k = math.floor(math.log2(float(v)) / 2)
    while _pow4(k + 1, exact) <= v:
        k += 1
    while _pow4(k, exact) > v:
        k -= 1
    return k


def ceil_log2_sqrt(v, exact: bool = True) -> int:
    """Smallest ``k`` with ``4**k >= v`` (``v > 0``)."""
    k = math.ceil(math.log2(float(v)) / 2)
    while _pow4(k - 1, exact) >= v:
        k -= 1
    while _pow4(k, exact) < v:
        k += 1
    return k


def dyadic_range(rows_sq, exact: bool = True):
    """``(k_lo, k_hi)`` covering every nonzero dyadic level of ``sqrt(rows_sq)``, or ``None``."""
    pos = [v for row in rows_sq for v in row if v > 0]
    if not pos:
        return None
    return floor_log2_sqrt(min(pos), exact) - 1, ceil_log2_sqrt(max(pos), exact)


def operator_sq(a: Martingale, kind: str) -> tuple:
    """Squared terminal of the operator attached to an atom kind."""
    if kind == "s":
        return conditional_quadratic_sq(a)[1]
    if kind == "S":
        return quadratic_sq(a)[1]
    if kind == "M":
        return tuple(v * v for v in maximal(a)[1])
    raise ValueError(f"unknown atom kind {kind!r}")


@dataclass(frozen=True)
class WeakAtom:
    """Martingale ``a`` vanishing up to ``nu`` with ``T(a) <= A * 2**k``."""
    a: Martingale
    nu: StoppingTime
    kind: str
    k: int
    A: int

    @property
    def N_A(self) -> int:
        return max(0, math.ceil(math.log2(self.A)))

    @property
    def bound(self):
        return self.A * _pow2(self.k, self.a.filtration.exact)

    def violations(self, tol: float = 1e-12) -> list:
        """Reasons this is not a weak atom; empty when valid."""
        F = self.a.filtration
        out = []
        times = self.nu.times
        for n in range(F.depth + 1):
            row = self.a.level(n)
            if any(t >= n and abs(row[w]) > (0 if F.exact else tol) for w, t in enumerate(times)):
                out.append(f"a_{n} is nonzero on {{nu >= {n}}}")
                break
        T = operator_sq(self.a, self.kind)
        b2 = self.bound * self.bound
        slack = 0 if F.exact else tol * max(1.0, float(b2))
        if any(v > b2 + slack for v in T):
            out.append(f"{self.kind}(a) exceeds {self.A}*2^{self.k}")
        if any(t == math.inf and v > slack for v, t in zip(T, times)):
            out.append(f"{self.kind}(a) is nonzero on {{nu = inf}}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()


@dataclass
class AtomicDecomposition:
    """Atoms ``a^k`` (nonzero only) plus the full stopping family ``nu_k``."""
    f: Martingale
    source: str
    kind: str
    A: int
    atoms: list
    stopping_times: dict = field(default_factory=dict)

    def quasinorm(self, Phi: OrliczFunction) -> float:
        return atomic_quasinorm(self, Phi)

    def ks(self) -> list:
        return [a.k for a in self.atoms]

    def atom(self, k: int):
        for a in self.atoms:
            if a.k == k:
                return a
        return None

    def partial_sum(self, m: int, n: int) -> Martingale:
        total = Martingale.zero(self.f.filtration)
        for a in self.atoms:
            if m <= a.k <= n:
                total = total + a.a
        return total

    def reconstruct(self) -> Martingale:
        return self.partial_sum(-10**9, 10**9)

    def check(self, tol: float = 1e-12) -> list:
        """Reconstruction, monotonicity and per-atom violations."""
        out = []
        if not self.reconstruct().allclose(self.f, 0 if self.f.filtration.exact else tol):
            out.append("atoms do not sum to f")
        ks = sorted(self.stopping_times)
        for lo, hi in zip(ks, ks[1:]):
            if not self.stopping_times[lo] <= self.stopping_times[hi]:
                out.append(f"nu_{lo} > nu_{hi} somewhere")
        for a in self.atoms:
            out.extend(f"k={a.k}: {v}" for v in a.violations(tol))
        return out


def _assemble(f: Martingale, nus: dict, kind: str, A: int, source: str) -> AtomicDecomposition:
    ks = sorted(nus)
    stopped = {k: stop(f, nus[k]) for k in ks}
    atoms = []
    for k in ks[:-1]:
        a = stopped[k + 1] - stopped[k]
        if not a.is_zero():
            atoms.append(WeakAtom(a, nus[k], kind, k, A))
    dec = AtomicDecomposition(f, source, kind, A, atoms, dict(nus))
    problems = dec.check()
    assert not problems, "; ".join(problems)
    if ks:
        assert stopped[ks[0]].is_zero() and stopped[ks[-1]] == f
    return dec


def _empty(f, kind, A, source):
    return AtomicDecomposition(f, source, kind, A, [], {})


def decompose_s(f: Martingale) -> AtomicDecomposition:
    """``nu_k = min{n : s_{n+1}(f) > 2**k}``; atoms with ``s(a^k) <= 2 * 2**k``."""
    F = f.filtration
    run, term = conditional_quadratic_sq(f)
    rng = dyadic_range(run, F.exact)
    if rng is None:
        return _empty(f, "s", 2, "s")
    nus = {}
    for k in range(rng[0], rng[1] + 2):
        nu = first_passage_predictable(F, run, _pow4(k, F.exact))
        expect = tuple(v > _pow4(k, F.exact) for v in term)
        assert nu.finite_mask() == expect, f"{{nu_{k} < inf}} differs from {{s(f) > 2^{k}}}"
        nus[k] = nu
    return _assemble(f, nus, "s", 2, "s")


def _decompose_cover(f: Martingale, run, kind: str, A: int) -> AtomicDecomposition:
    F = f.filtration
    rng = dyadic_range(run, F.exact)
    if rng is None:
        return _empty(f, kind, A, kind)
    R = regularity_constant(F)
    term = run[-1]
    nus = {}
    prev = None
    for k in range(rng[0], rng[1] + 2):
        lam = _pow4(k, F.exact)
        nu = regular_cover(F, run, lam)
        if prev is not None:
            nu = pointwise_max(nu, prev)
        tail = sum((p for p, v in zip(F.probs, term) if v > lam), F.zero())
        assert nu.prob_finite() <= R * tail + (0 if F.exact else 1e-12), \
            f"covering bound fails at k={k}"
        nus[k] = prev = nu
    return _assemble(f, nus, kind, A, kind)


def decompose_S(f: Martingale) -> AtomicDecomposition:
    """Regular cover of ``S_n(f)`` at ``2**k``; atoms with ``S(a^k) <= 2 * 2**k``."""
    return _decompose_cover(f, quadratic_sq(f)[0], "S", 2)


def decompose_M(f: Martingale) -> AtomicDecomposition:
    """Regular cover of ``M_n(f)`` at ``2**k``; atoms with ``M(a^k) <= 4 * 2**k``.

    ``M(a^k) <= M_{nu_{k+1}} + M_{nu_k} <= 3 * 2**k``, rounded up to a power of two.
    """
    run = [tuple(v * v for v in row) for row in maximal(f)[0]]
    return _decompose_cover(f, run, "M", 4)


_CONTROL_KIND = {"Q": ("S", 2), "s": ("s", 2), "D": ("M", 4)}


def decompose_control(f: Martingale, control: PredictableControl) -> AtomicDecomposition:
    """``nu_k = min{n : lambda_n > 2**k}`` for an admissible control."""
    check_admissible(f, control)
    F = f.filtration
    kind, A = _CONTROL_KIND[control.target]
    rows = [control.level_sq(n) for n in range(F.depth + 1)]
    rng = dyadic_range(rows, F.exact)
    if rng is None:
        return _empty(f, kind, A, control.target)
    nus = {}
    for k in range(rng[0], rng[1] + 2):
        lam = _pow4(k, F.exact)
        times = []
        for w in range(F.n_outcomes):
            t = math.inf
            for n in range(F.depth + 1):
                if rows[n][w] > lam:
                    t = n
                    break
            times.append(t)
        nus[k] = StoppingTime.from_times(F, times)
    return _assemble(f, nus, kind, A, control.target)


_REBUILD_TARGET = {"s": "s", "S": "Q", "M": "D"}


def rebuild_control(dec: AtomicDecomposition) -> PredictableControl:
    """``lambda_n = sum_k 1{nu_k <= n} * A * 2**k``, checked admissible for the matching target."""
    f = dec.f
    F = f.filtration
    target = _REBUILD_TARGET[dec.kind]
    rows = []
    for n in range(F.depth + 1):
        row = []
        for atom in F.levels[n]:
            w = atom[0]
            lam = sum((a.bound for a in dec.atoms if a.nu.times[w] <= n), F.zero())
            row.append(lam * lam)
        rows.append(tuple(row))
    ctrl = PredictableControl(F, target, tuple(rows))
    try:
        check_admissible(f, ctrl)
    except InadmissibleControl as exc:
        raise AssertionError(f"rebuilt control is not admissible: {exc}") from exc
    return ctrl


def equivalence_constants(Phi: OrliczFunction, N_A: int = 1) -> dict:
    """Series constants ``C1 + C2`` behind the upper bound ``(C0 c_Phi)^(1/ell) * 4 * M``.

    ``C1 = 2^((N_A+1)/p') / (1 - 2^(-1/p'))`` and ``C2 = 1 / (1 - 2^(-1/q'))``
    where ``(p', q')`` are the indices of ``Phi^{-1}``; the bracket ends are
    taken on the side that enlarges each constant.
    """
    idx = index(Phi, "inverse")
    p, q = idx.lower, idx.upper
    C1 = 2.0 ** ((N_A + 1) / p) / (1.0 - 2.0 ** (-1.0 / p))
    C2 = 1.0 / (1.0 - 2.0 ** (-1.0 / q))
    C0 = C1 + C2
    return {"p_inv": p, "q_inv": q, "N_A": N_A, "C1": C1, "C2": C2, "C0": C0,
            "factor": (C0 * Phi.c_phi) ** (1.0 / Phi.ell) * 4.0}


def equivalence_report(f: Martingale, Phi: OrliczFunction, rtol: float = 1e-12) -> dict:
    """Check ``M <= ||f||_{wH^s} <= (C0 c_Phi)^(1/ell) * 4 * M`` for the s-decomposition."""
    dec = decompose_s(f)
    M = dec.quasinorm(Phi)
    norm = weak_orlicz_norm_sq(f.filtration, conditional_quadratic_sq(f)[1], Phi)
    consts = equivalence_constants(Phi, 1)
    upper = consts["factor"] * M
    lower_ok = M <= norm * (1 + rtol) + 1e-300
    upper_ok = norm <= upper * (1 + rtol) + 1e-300
    return {"atomic_quasinorm": M, "weak_hardy_s": norm, "upper_bound": upper,
            "constants": consts, "lower_holds": lower_ok, "upper_holds": upper_ok,
            "passed": lower_ok and upper_ok, "atoms": len(dec.atoms)}


def tail_convergence(f: Martingale, Phi: OrliczFunction, m: int, n: int,
                     dec: AtomicDecomposition | None = None) -> float:
    """``||f - sum_{k=m}^{n} a^k||_{wH^s}`` for the s-decomposition."""
    dec = decompose_s(f) if dec is None else dec
    rest = f - dec.partial_sum(m, n)
    return weak_orlicz_norm_sq(f.filtration, conditional_quadratic_sq(rest)[1], Phi)


def decompose(f: Martingale, method: str) -> AtomicDecomposition:
    """Dispatch by name: ``s``, ``S``, ``M``, ``Q`` or ``D`` (the last two via minimal controls)."""
    from .norms import minimal_control
    if method == "s":
        return decompose_s(f)
    if method == "S":
        return decompose_S(f)
    if method == "M":
        return decompose_M(f)
    if method in ("Q", "D"):
        return decompose_control(f, minimal_control(f, method))
    raise ValueError(f"unknown decomposition {method!r}")


__all__ = [
    "WeakAtom", "AtomicDecomposition", "decompose_s", "decompose_S", "decompose_M",
    "decompose_control", "rebuild_control", "equivalence_constants", "equivalence_report",
    "tail_convergence", "decompose", "dyadic_range", "operator_sq", "KINDS",
]
