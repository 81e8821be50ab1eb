"""Independent reference computations used by the tests.

Nothing here calls the closed forms under test: the weak norm is found by
bisection on ``c`` against a brute-force survival function, stopping times
are enumerated by a separate recursion, and integrals use dense quadrature.
"""
from fractions import Fraction
from itertools import product

import numpy as np

LEFT = 1.0 - 2.0 ** -40


def survival(probs, absx, t):
    """``P(|X| > t)`` for every ``t`` by direct comparison."""
    return (absx[None, :] > t[:, None]).astype(float) @ probs


def weak_norm_oracle(probs, X, Phi, grid_points: int = 2000) -> float:
    """``inf{c : sup_t Phi(t/c) P(|X| > t) <= 1}`` by bisection over a dense t-grid.

    The grid carries the left limits ``v (1 - 2^-40)`` at every jump, where
    the supremum is approached.
    """
    probs = np.asarray([float(p) for p in probs])
    absx = np.abs(np.asarray([float(x) for x in X]))
    vals = np.unique(absx[absx > 0])
    if vals.size == 0:
        return 0.0
    t = np.concatenate([np.geomspace(vals[0] * 1e-3, vals[-1], grid_points), vals * LEFT, vals])
    surv = survival(probs, absx, t)
    keep = surv > 0
    t, surv = t[keep], surv[keep]

    def worst(c):
        return float(np.max(np.asarray(Phi(t / c), dtype=float) * surv))

    hi = float(vals[-1])
    while worst(hi) > 1:
        hi *= 2
    lo = hi
    while worst(lo) <= 1:
        lo /= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if worst(mid) <= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-16 * hi:
            break
    return hi


def luxemburg_oracle(probs, X, Phi) -> float:
    """``inf{c : E Phi(|X|/c) <= 1}`` by plain bisection."""
    probs = np.asarray([float(p) for p in probs])
    absx = np.abs(np.asarray([float(x) for x in X]))
    if not absx.any():
        return 0.0

    def excess(c):
        return float(probs @ np.asarray(Phi(absx / c), dtype=float)) - 1.0

    lo, hi = 1e-12, float(absx.max())
    while excess(hi) > 0:
        hi *= 2
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if excess(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi


def antichains(F, node=(0, 0)):
    """Every antichain of the subtree at ``node`` (list of node tuples)."""
    n, i = node
    kids = F.children[n][i]
    out = [(node,)]
    if not kids:
        return out + [()]
    subs = [antichains(F, (n + 1, j)) for j in kids]
    for combo in product(*subs):
        out.append(tuple(v for part in combo for v in part))
    return out


def brute_max_gap_power(f, q: int, x) -> Fraction:
    """Largest ``E|f_N - f_nu|^q`` with ``P(nu < inf) <= x`` over all antichains."""
    F = f.filtration
    X = f.terminal
    best = Fraction(0)
    for chain in antichains(F):
        cost = sum((F.atom_prob[n][i] for n, i in chain), Fraction(0))
        if cost > x:
            continue
        gain = Fraction(0)
        for n, i in chain:
            fn = f.values[n][i]
            gain += sum((F.probs[w] * abs(X[w] - fn) ** q for w in F.levels[n][i]), Fraction(0))
        best = max(best, gain)
    return best


def log_quadrature(func, a: float, b: float, points: int = 400001) -> float:
    """``int_a^b func(x) dx`` by the trapezoid rule in ``log x``."""
    u = np.linspace(np.log(a), np.log(b), points)
    x = np.exp(u)
    y = func(x) * x
    return float(np.sum((y[1:] + y[:-1]) * np.diff(u)) / 2)


def gap_pairs(f, q: int):
    """``(costs, gains)`` arrays over every antichain, gains as ``E|f_N - f_nu|^q``."""
    F = f.filtration
    X = f.terminal
    costs, gains = [], []
    for chain in antichains(F):
        cost = sum((F.atom_prob[n][i] for n, i in chain), Fraction(0))
        gain = Fraction(0)
        for n, i in chain:
            fn = f.values[n][i]
            gain += sum((F.probs[w] * abs(X[w] - fn) ** q for w in F.levels[n][i]), Fraction(0))
        costs.append(float(cost))
        gains.append(float(gain))
    return np.asarray(costs), np.asarray(gains)


def campanato_oracle(f, q: int, Phi, upper: float = 1e290, density: int = 1000) -> float:
    """``int_0^inf Phi^{-1}(1/x) x^{-1/q} S(x) dx`` on a log grid, piece by piece.

    ``S(x)`` is the brute-force maximum over all antichains; each piece
    between consecutive achievable costs is integrated separately so no
    jump falls inside a trapezoid.
    """
    costs, gains = gap_pairs(f, q)
    cuts = np.unique(costs[costs > 0])
    cuts = np.append(cuts, upper)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        S = float(np.max(gains[costs <= a])) ** (1.0 / q)
        if S == 0:
            continue
        w = log_quadrature(lambda x: inverse_oracle(Phi, 1.0 / x) * x ** (-1.0 / q), a, b,
                           max(2001, int(density * np.log(b / a))))
        total += S * w
    return total


def inverse_oracle(Phi, y):
    """``Phi^{-1}(y)`` for an array by vectorised bisection in ``log t``."""
    y = np.asarray(y, dtype=float)
    lo = np.full(y.shape, -700.0)
    hi = np.full(y.shape, 700.0)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        with np.errstate(over="ignore", invalid="ignore"):
            above = np.asarray(Phi(np.exp(mid)), dtype=float) > y
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return np.exp(0.5 * (lo + hi))
