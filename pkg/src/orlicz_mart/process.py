"""Martingales on a finite filtration and the operators M, S and s.

A martingale is determined by its centred terminal value: ``f_n = E_n X``.
The library requires ``f_0 = 0``, so the ``i = 0`` terms of the square
functions vanish. Square functions are computed exactly as squares
(``*_sq`` helpers); the unsquared versions return floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import FiltrationMismatch, NonCenteredTerminal
from .space import FiniteFiltration, as_fraction, atom_means, close


def _coerce(F: FiniteFiltration, X) -> tuple:
    X = F.rv(X)
    if F.exact:
        return tuple(as_fraction(x) for x in X)
    return tuple(float(x) for x in X)


class Martingale:
    """Adapted value table ``values[n][i] = f_n`` on atom ``(n, i)``."""

    __slots__ = ("filtration", "values")

    def __init__(self, filtration: FiniteFiltration, values):
        self.filtration = filtration
        self.values = tuple(tuple(row) for row in values)

    @classmethod
    def from_terminal(cls, F: FiniteFiltration, X, tol: float = 1e-12) -> "Martingale":
        X = _coerce(F, X)
        mean = F.expectation(X)
        if F.exact and mean != 0 or not F.exact and abs(mean) > tol * max(1.0, max(map(abs, X))):
            raise NonCenteredTerminal(f"terminal value has mean {mean}, expected 0")
        rows = [atom_means(F, X, n) for n in range(F.depth)]
        rows.append(tuple(X[a[0]] for a in F.levels[F.depth]))
        if not F.exact:
            rows[0] = (0.0,)
        return cls(F, rows)

    @classmethod
    def zero(cls, F: FiniteFiltration) -> "Martingale":
        z = F.zero()
        return cls(F, [tuple(z for _ in lvl) for lvl in F.levels])

    # -- views ---------------------------------------------------------
    @property
    def depth(self) -> int:
        return self.filtration.depth

    def level(self, n: int) -> tuple:
        """``f_n`` as a per-outcome random variable."""
        row = self.values[n]
        return tuple(row[a] for a in self.filtration.atom_of[n])

    @property
    def terminal(self) -> tuple:
        return self.level(self.depth)

    def table(self) -> list:
        return [self.level(n) for n in range(self.depth + 1)]

    def increments(self) -> list:
        """``df_n`` per outcome for ``n = 0..N`` (``df_0 = f_0``)."""
        tab = self.table()
        out = [tab[0]]
        for n in range(1, self.depth + 1):
            out.append(tuple(a - b for a, b in zip(tab[n], tab[n - 1])))
        return out

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.values for v in row)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other):
        if other.filtration is not self.filtration and other.filtration != self.filtration:
            raise FiltrationMismatch("martingales live on different filtrations")

    def __add__(self, other):
        self._check(other)
        return Martingale(self.filtration, [tuple(a + b for a, b in zip(r, s))
                                            for r, s in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return Martingale(self.filtration, [tuple(a - b for a, b in zip(r, s))
                                            for r, s in zip(self.values, other.values)])

    def __mul__(self, c):
        if self.filtration.exact and not isinstance(c, float):
            c = as_fraction(c)
        return Martingale(self.filtration, [tuple(c * a for a in r) for r in self.values])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        return (isinstance(other, Martingale) and self.filtration == other.filtration
                and self.values == other.values)

    def __hash__(self):
        return hash(self.values)

    def allclose(self, other, tol: float = 1e-12) -> bool:
        return all(close(a, b, tol) for r, s in zip(self.values, other.values)
                   for a, b in zip(r, s))

    def to_float(self) -> "Martingale":
        return Martingale(self.filtration.to_float(),
                          [tuple(float(v) for v in r) for r in self.values])

    def __repr__(self):
        return f"Martingale(depth={self.depth}, terminal={[str(v) for v in self.terminal]})"


def martingale_from_terminal(F: FiniteFiltration, X) -> Martingale:
    return Martingale.from_terminal(F, X)


def centered(F: FiniteFiltration, X) -> tuple:
    """``X - E X``; the generator-side way to obtain a valid terminal value."""
    X = _coerce(F, X)
    m = F.expectation(X)
    return tuple(x - m for x in X)


# -- the three operators ------------------------------------------------

def maximal(f: Martingale):
    """Running maximal function ``M_n = max_{i<=n} |f_i|`` and its terminal."""
    tab = f.table()
    run = [tuple(abs(v) for v in tab[0])]
    for n in range(1, f.depth + 1):
        run.append(tuple(max(a, abs(b)) for a, b in zip(run[-1], tab[n])))
    return run, run[-1]


def quadratic_sq(f: Martingale):
    """Running ``S_n(f)**2`` (exact) and its terminal."""
    inc = f.increments()
    run = [tuple(d * d for d in inc[0])]
    for n in range(1, f.depth + 1):
        run.append(tuple(a + d * d for a, d in zip(run[-1], inc[n])))
    return run, run[-1]


def conditional_quadratic_sq(f: Martingale):
    """Running ``s_n(f)**2 = sum_{i<=n} E_{i-1} |df_i|**2`` (exact) and its terminal.

    ``s_{n+1}`` is checked to be constant on level-``n`` atoms.
    """
    F = f.filtration
    inc = f.increments()
    run = [tuple(d * d for d in inc[0])]  # f_0 = 0 makes this row vanish
    for n in range(1, f.depth + 1):
        sq = tuple(d * d for d in inc[n])
        cond = atom_means(F, sq, n - 1)
        row = tuple(a + cond[F.atom_of[n - 1][w]] for w, a in enumerate(run[-1]))
        run.append(row)
    for n in range(f.depth):
        for atom in F.levels[n]:
            vals = {run[n + 1][w] for w in atom}
            assert len(vals) == 1 or not F.exact and max(vals) - min(vals) <= 1e-12 * max(1.0, max(vals)), \
                "s_{n+1} is not predictable"
    return run, run[-1]


def _sqrt_table(tab):
    return [tuple(math.sqrt(v) for v in row) for row in tab]


def quadratic(f: Martingale):
    """Running ``S_n(f)`` and ``S(f)`` as floats."""
    run, _ = quadratic_sq(f)
    run = _sqrt_table(run)
    return run, run[-1]


def conditional_quadratic(f: Martingale):
    """Running ``s_n(f)`` and ``s(f)`` as floats."""
    run, _ = conditional_quadratic_sq(f)
    run = _sqrt_table(run)
    return run, run[-1]


# -- stopping ------------------------------------------------------------

def stop(f: Martingale, nu) -> Martingale:
    """The stopped martingale ``f^nu_n = f_{min(n, nu)}``.

    ``nu`` is any object with ``filtration`` and per-outcome ``times``
    (``math.inf`` for never); see :class:`orlicz_mart.stopping.StoppingTime`.
    """
    F = f.filtration
    if nu.filtration != F:
        raise FiltrationMismatch("stopping time and martingale use different filtrations")
    tab = f.table()
    N = F.depth
    X = tuple(tab[min(N, t)][w] for w, t in enumerate(nu.times))
    g = Martingale.from_terminal(F, X)
    for n in range(N + 1):
        expect = tuple(tab[min(n, t)][w] for w, t in enumerate(nu.times))
        assert all(close(a, b) for a, b in zip(g.level(n), expect)), \
            "stopped process failed the martingale check"
    return g


def stopped_difference(F: FiniteFiltration, X, nu) -> tuple:
    """Terminal value of ``X - X^nu`` for the martingale generated by ``X``.

    On ``{nu = n}`` this is ``X - E_n X``; on ``{nu = inf}`` it is 0. ``X``
    need not be centred.
    """
    z = F.zero()
    out = []
    means = {}
    for w, t in enumerate(nu.times):
        if t == math.inf:
            out.append(z)
            continue
        if t not in means:
            means[t] = atom_means(F, X, t)
        out.append(X[w] - means[t][F.atom_of[t][w]])
    return tuple(out)


def gap_power(f: Martingale, nu, q) -> object:
    """``E |f_N - f^nu_N|**q``; exact for rational data and integer ``q``."""
    F = f.filtration
    tab = f.table()
    N = F.depth
    z = F.zero()
    return sum((F.probs[w] * abs(tab[N][w] - tab[t][w]) ** q
                for w, t in enumerate(nu.times) if t != math.inf), z)


def difference_gap(f: Martingale, nu, q: float) -> float:
    """``||f - f^nu||_q`` computed from the terminal values."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return float(gap_power(f, nu, q)) ** (1.0 / q)


# -- sublinear operators --------------------------------------------------

@dataclass(frozen=True)
class OperatorSpec:
    """A sublinear map from martingales to random variables.

    ``lr_bound`` is the operator norm on ``L_r`` when known (``None`` if
    only measured); ``atom_support`` records whether ``{|Ta| > 0}`` sits
    inside ``{nu < inf}`` for every weak atom ``a`` structurally.
    """
    name: str
    apply: Callable[[Martingale], tuple]
    r: float = 2.0
    lr_bound: float | None = None
    atom_support: bool = True


def _apply_M(f):
    return maximal(f)[1]


def _apply_S(f):
    return tuple(math.sqrt(v) for v in quadratic_sq(f)[1])


def _apply_s(f):
    return tuple(math.sqrt(v) for v in conditional_quadratic_sq(f)[1])


def _apply_terminal(f):
    return f.terminal


MAXIMAL = OperatorSpec("M", _apply_M, 2.0, 2.0, True)          # Doob's L_2 inequality
SQUARE = OperatorSpec("S", _apply_S, 2.0, 1.0, True)           # E S^2 = E f^2
COND_SQUARE = OperatorSpec("s", _apply_s, 2.0, 1.0, True)      # E s^2 = E f^2
TERMINAL = OperatorSpec("terminal", _apply_terminal, 2.0, 1.0, True)

BUILTIN_OPERATORS = {op.name: op for op in (MAXIMAL, SQUARE, COND_SQUARE, TERMINAL)}
