"""Stopping times as antichains of tree nodes, and budgeted gap suprema.

A stopping time is stored as the set of nodes ``(level, atom)`` where it
fires; no node may be an ancestor of another. Outcomes below no node never
stop (``nu = inf``).

``max_gap`` maximises ``||f - f^nu||_q`` over stopping times with
``P(nu < inf) <= x``. The objective is additive over the nodes of the
antichain, so the problem is a knapsack on the tree. Two exact solvers are
provided: a dense budget grid in units of ``1/LCD`` (the least common
denominator of atom masses) and a Pareto-frontier merge that works for any
rational or float masses. Exhaustive enumeration is kept as an oracle.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import (
    BudgetGridOverflow,
    LambdaTooSmall,
    NotAStoppingTime,
    NotPredictable,
    TooManyStoppingTimes,
)
from .process import Martingale
from .space import FiniteFiltration, close

INF = math.inf
DEFAULT_ENUM_GUARD = 10**6
DEFAULT_LCD_GUARD = 2**20
# beyond this many grid units the O(units^2) merge loses to the frontier merge
AUTO_GRID_UNITS = 2**20


class StoppingTime:
    """An antichain of nodes together with the induced map ``omega -> nu``."""

    __slots__ = ("filtration", "nodes", "times")

    def __init__(self, F: FiniteFiltration, nodes=()):
        nodes = frozenset((int(n), int(i)) for n, i in nodes)
        for n, i in nodes:
            if not (0 <= n <= F.depth and 0 <= i < len(F.levels[n])):
                raise NotAStoppingTime(f"node {(n, i)} is not in the filtration")
        times = [INF] * F.n_outcomes
        for n, i in sorted(nodes):
            for w in F.levels[n][i]:
                if times[w] != INF:
                    raise NotAStoppingTime(
                        f"nodes {(n, i)} and {(times[w], F.atom_of[times[w]][w])} are nested")
                times[w] = n
        self.filtration = F
        self.nodes = nodes
        self.times = tuple(times)

    @classmethod
    def from_times(cls, F: FiniteFiltration, times) -> "StoppingTime":
        """Build from per-outcome values in ``{0..N, inf}`` (``None`` means inf)."""
        times = [INF if t is None else t for t in times]
        nodes = set()
        for w, t in enumerate(times):
            if t == INF:
                continue
            if t != int(t) or not 0 <= t <= F.depth:
                raise NotAStoppingTime(f"value {t} outside 0..{F.depth}")
            t = int(t)
            a = F.atom_of[t][w]
            if any(times[v] != t for v in F.levels[t][a]):
                raise NotAStoppingTime(f"{{nu = {t}}} is not a union of level-{t} atoms")
            nodes.add((t, a))
        return cls(F, nodes)

    @classmethod
    def never(cls, F):
        return cls(F, ())

    @classmethod
    def constant(cls, F, n: int):
        return cls(F, [(n, i) for i in range(len(F.levels[n]))])

    def prob_finite(self):
        return sum((self.filtration.node_prob(v) for v in self.nodes), self.filtration.zero())

    def finite_mask(self) -> tuple:
        return tuple(t != INF for t in self.times)

    def sorted_nodes(self) -> list:
        return sorted(self.nodes)

    def __le__(self, other):
        return all(a <= b for a, b in zip(self.times, other.times))

    def __eq__(self, other):
        return (isinstance(other, StoppingTime) and self.nodes == other.nodes
                and self.filtration == other.filtration)

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self):
        return f"StoppingTime({self.sorted_nodes()})"


def pointwise_max(a: StoppingTime, b: StoppingTime) -> StoppingTime:
    return StoppingTime.from_times(a.filtration, [max(x, y) for x, y in zip(a.times, b.times)])


def _constant_on_atoms(F, row, n, tol=1e-12):
    for atom in F.levels[n]:
        first = row[atom[0]]
        if any(not close(row[w], first, tol) for w in atom):
            return False
    return True


def first_passage_predictable(F: FiniteFiltration, gamma, lam) -> StoppingTime:
    """``nu = min{n : gamma_{n+1} > lam}`` for a predictable ``gamma``.

    ``gamma[n]`` is a per-outcome row for ``n = 0..N``; ``gamma[n+1]`` must be
    constant on level-``n`` atoms. Monotone transforms commute with the
    comparison, so callers may pass squared processes with ``lam**2``.
    """
    N = F.depth
    for n in range(N):
        if not _constant_on_atoms(F, gamma[n + 1], n):
            raise NotPredictable(f"gamma_{n + 1} is not constant on level-{n} atoms")
    times = []
    for w in range(F.n_outcomes):
        t = INF
        for n in range(N):
            if gamma[n + 1][w] > lam:
                t = n
                break
        times.append(t)
    return StoppingTime.from_times(F, times)


def regular_cover(F: FiniteFiltration, gamma, lam) -> StoppingTime:
    """Stop at the first level whose atom has a child where ``gamma`` exceeds ``lam``.

    For an adapted nonnegative ``gamma`` and ``lam >= max gamma_0`` this gives
    ``{gamma* > lam} ⊂ {nu < inf}``, ``gamma*_nu <= lam`` and
    ``P(nu < inf) <= R P(gamma* > lam)``, and ``nu`` is monotone in ``lam``.
    """
    N = F.depth
    for n in range(N + 1):
        if not _constant_on_atoms(F, gamma[n], n):
            raise ValueError(f"gamma_{n} is not adapted")
    if any(g > lam for g in gamma[0]):
        raise LambdaTooSmall(f"lambda {lam} is below max gamma_0")
    nodes = []
    covered = set()
    for n in range(N):
        for i, atom in enumerate(F.levels[n]):
            if atom[0] in covered:
                continue
            if any(gamma[n + 1][F.levels[n + 1][c][0]] > lam for c in F.children[n][i]):
                nodes.append((n, i))
                covered.update(atom)
    return StoppingTime(F, nodes)


# -- enumeration ---------------------------------------------------------------

def count_stopping_times(F: FiniteFiltration) -> int:
    """Number of antichains (including the empty one)."""
    counts = [2] * len(F.levels[F.depth])
    for n in range(F.depth - 1, -1, -1):
        new = []
        for kids in F.children[n]:
            prod = 1
            for c in kids:
                prod *= counts[c]
            new.append(prod + 1)
        counts = new
    return counts[0]


def enumerate_stopping_times(F: FiniteFiltration,
                             guard: int = DEFAULT_ENUM_GUARD) -> Iterator[StoppingTime]:
    """Yield every stopping time exactly once, ``nu = inf`` first."""
    total = count_stopping_times(F)
    if total > guard:
        raise TooManyStoppingTimes(f"{total} stopping times exceed the guard {guard}")
    for nodes in _antichains(F, (0, 0)):
        yield StoppingTime(F, nodes)


def _antichains(F, node):
    n, i = node
    kids = F.children[n][i]
    if not kids:
        yield ()
        yield (node,)
        return
    combos = [()]
    for c in kids:
        sub = list(_antichains(F, (n + 1, c)))
        combos = [a + b for a in combos for b in sub]
    yield from combos
    yield (node,)


# -- gains ---------------------------------------------------------------------

def _exponent(q):
    if isinstance(q, float) and q.is_integer():
        return int(q)
    return q


def node_gains(f: Martingale, q) -> dict:
    """``g(v) = sum_{w in v} p(w) |f_N(w) - f_n(v)|**q`` for every node ``v = (n, i)``."""
    F = f.filtration
    q = _exponent(q)
    fN = f.terminal
    z = F.zero()
    out = {}
    for n in range(F.depth + 1):
        row = f.values[n]
        for i, atom in enumerate(F.levels[n]):
            out[(n, i)] = sum((F.probs[w] * abs(fN[w] - row[i]) ** q for w in atom), z)
    return out


def _better(a, b) -> bool:
    """Candidate ``(gain, nodes)`` preference: gain, then fewer nodes, then lex order."""
    if a[0] != b[0]:
        return a[0] > b[0]
    if len(a[1]) != len(b[1]):
        return len(a[1]) < len(b[1])
    return tuple(sorted(a[1])) < tuple(sorted(b[1]))


def _staircase(points):
    """Keep the entries that beat every cheaper entry; ``points`` are ``(units, gain, nodes)``."""
    best = {}
    for pt in points:
        cur = best.get(pt[0])
        if cur is None or _better((pt[1], pt[2]), (cur[1], cur[2])):
            best[pt[0]] = pt
    out = []
    for u in sorted(best):
        pt = best[u]
        if not out or _better((pt[1], pt[2]), (out[-1][1], out[-1][2])):
            out.append(pt)
    return out


def _grid_tables(F: FiniteFiltration, gains: dict, lcd: int):
    """Best ``(gain, nodes)`` per integer budget, stored as a staircase of breakpoints."""
    z = F.zero()
    tables = {}
    for n in range(F.depth, -1, -1):
        for i, p in enumerate(F.atom_prob[n]):
            v = (n, i)
            tab = [(0, z, ())]
            for c in F.children[n][i]:
                other = tables.pop((n + 1, c))
                tab = _staircase([(a[0] + b[0], a[1] + b[1], a[2] + b[2])
                                  for a in tab for b in other if a[0] + b[0] <= lcd])
            tab.append((int(p * lcd), gains[v], (v,)))
            tables[v] = _staircase(tab)
    return tables[(0, 0)]


def _grid_lookup(table, units):
    best = table[0]
    for pt in table:
        if pt[0] > units:
            break
        best = pt
    return best[1], best[2]


def _frontier(F: FiniteFiltration, gains: dict):
    """Pareto frontier ``[(cost, gain, nodes)]`` of antichains, cost ascending."""
    z = F.zero()

    def prune(points):
        points.sort(key=lambda t: (t[0], -t[1], len(t[2]), tuple(sorted(t[2]))))
        out = []
        for pt in points:
            if not out or pt[1] > out[-1][1]:
                out.append(pt)
        return out

    fronts = {}
    for n in range(F.depth, -1, -1):
        for i in range(len(F.levels[n])):
            v = (n, i)
            cur = [(z, z, ())]
            for c in F.children[n][i]:
                other = fronts.pop((n + 1, c))
                cur = prune([(a[0] + b[0], a[1] + b[1], a[2] + b[2]) for a in cur for b in other])
            cur.append((F.atom_prob[n][i], gains[v], (v,)))
            fronts[v] = prune(cur)
    return fronts[(0, 0)]


def gap_frontier(f: Martingale, q) -> list:
    """Pareto frontier of ``(P(nu < inf), E|f - f^nu|**q, nodes)`` triples.

    Costs ascend and gains strictly increase; the first entry is the empty
    stopping time. The step function ``x -> max gain with cost <= x`` is read
    off directly.
    """
    return _frontier(f.filtration, node_gains(f, q))


def _budget_units(x, lcd):
    if isinstance(x, float):
        if math.isinf(x):
            return lcd
        x = Fraction(repr(x))
    x = Fraction(x)
    if x < 0:
        raise ValueError("budget must be nonnegative")
    return min(lcd, math.floor(x * lcd))


def max_gap_power(f: Martingale, q, x, method: str = "auto",
                  lcd_guard: int = DEFAULT_LCD_GUARD, enum_guard: int = DEFAULT_ENUM_GUARD):
    """Maximum of ``E|f - f^nu|**q`` over ``P(nu < inf) <= x``; returns ``(value, nodes)``.

    ``method`` is ``"grid"``, ``"frontier"``, ``"enumerate"`` or ``"auto"``
    (grid when the unit count is small, frontier otherwise).
    """
    F = f.filtration
    if x < 0:
        raise ValueError("budget must be nonnegative")
    gains = node_gains(f, q)
    if method == "auto":
        method = "frontier"
        if F.exact:
            lcd = F.lcd()
            if lcd <= min(lcd_guard, AUTO_GRID_UNITS):
                method = "grid"
    if method == "grid":
        if not F.exact:
            raise BudgetGridOverflow("the budget grid needs rational probabilities")
        lcd = F.lcd()
        if lcd > lcd_guard:
            raise BudgetGridOverflow(f"LCD {lcd} exceeds the grid guard {lcd_guard}")
        gain, nodes = _grid_lookup(_grid_tables(F, gains, lcd), _budget_units(x, lcd))
        return gain, tuple(sorted(nodes))
    if method == "frontier":
        best = (F.zero(), ())
        for cost, gain, nodes in _frontier(F, gains):
            if cost <= x and _better((gain, nodes), best):
                best = (gain, nodes)
        return best[0], tuple(sorted(best[1]))
    if method == "enumerate":
        best = (F.zero(), ())
        for nu in enumerate_stopping_times(F, enum_guard):
            cost = nu.prob_finite()
            if cost <= x:
                cand = (sum((gains[v] for v in nu.nodes), F.zero()), tuple(nu.nodes))
                if _better(cand, best):
                    best = cand
        return best[0], tuple(sorted(best[1]))
    raise ValueError(f"unknown method {method!r}")


def max_gap(f: Martingale, q, x, method: str = "auto", **guards) -> float:
    """``sup { ||f - f^nu||_q : P(nu < inf) <= x }``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    value, _ = max_gap_power(f, q, x, method, **guards)
    return float(value) ** (1.0 / q)


def max_gap_witness(f: Martingale, q, x, method: str = "auto", **guards) -> StoppingTime:
    _, nodes = max_gap_power(f, q, x, method, **guards)
    return StoppingTime(f.filtration, nodes)


def max_atom_gap(f: Martingale, q, x) -> float:
    """Max over atoms ``A`` at levels ``n >= 1`` with ``P(A) <= x`` of ``(int_A |f - E_n f|^q)^(1/q)``."""
    F = f.filtration
    gains = node_gains(f, q)
    best = 0.0
    for (n, i), g in gains.items():
        if n >= 1 and F.atom_prob[n][i] <= x:
            best = max(best, float(g) ** (1.0 / q))
    return best


def atom_gap_profile(f: Martingale, q) -> list:
    """Step profile ``[(P(A), max gain up to that mass)]`` over atoms at levels ``n >= 1``."""
    F = f.filtration
    gains = node_gains(f, q)
    pts = sorted((F.atom_prob[n][i], g) for (n, i), g in gains.items() if n >= 1)
    out = [(F.zero(), F.zero())]
    for cost, g in pts:
        if g > out[-1][1]:
            if cost == out[-1][0]:
                out[-1] = (cost, g)
            else:
                out.append((cost, g))
    return out
