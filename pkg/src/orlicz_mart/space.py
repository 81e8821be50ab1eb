"""Finite filtered probability spaces.

A filtration is stored as a rooted tree of atoms: level ``n`` is a partition
of the outcomes, every level-``n+1`` atom sits inside exactly one level-``n``
atom, level 0 is the whole space and the last level consists of singletons.
Probabilities are exact :class:`fractions.Fraction` values by default; a float
backed copy is available through :meth:`FiniteFiltration.to_float`.

Random variables are plain tuples aligned with ``F.ids``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadTotalMass,
    DepthTooLarge,
    LevelOutOfRange,
    NonRefining,
    NonSingletonLeaves,
    NontrivialRoot,
    NotAPartition,
    ZeroProbability,
)

FLOAT_MASS_TOL = 1e-12
DEFAULT_MAX_OUTCOMES = 4096

Node = tuple  # (level, atom index)


def as_fraction(p) -> Fraction:
    # floats go through their shortest repr so that 0.1 becomes 1/10
    if isinstance(p, float):
        return Fraction(repr(p))
    return Fraction(p)


def close(a, b, tol: float = 1e-12) -> bool:
    """Exact equality for rationals, relative+absolute tolerance otherwise."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    a, b = float(a), float(b)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


class FiniteFiltration:
    """Finite probability space with a filtration of refining partitions.

    Attributes
    ----------
    depth : int
        Index ``N`` of the finest level.
    ids : tuple
        Outcome identifiers, in storage order.
    probs : tuple
        Outcome probabilities aligned with ``ids``.
    levels : tuple
        ``levels[n]`` is a tuple of atoms, each a sorted tuple of outcome
        positions.
    atom_of : tuple
        ``atom_of[n][w]`` is the index of the level-``n`` atom holding
        outcome position ``w``.
    parent, children : tuple
        Tree links between consecutive levels (``parent[0]`` is ``(-1,)``).
    atom_prob : tuple
        ``atom_prob[n][i]`` is the mass of atom ``(n, i)``.
    """

    __slots__ = (
        "depth", "ids", "probs", "levels", "atom_of", "parent", "children",
        "atom_prob", "exact",
    )

    def __init__(self, ids, probs, levels):
        self.ids = tuple(ids)
        self.probs = tuple(probs)
        self.levels = tuple(tuple(tuple(a) for a in lvl) for lvl in levels)
        self.depth = len(self.levels) - 1
        self.exact = all(isinstance(p, Fraction) for p in self.probs)
        n_out = len(self.ids)
        atom_of = []
        for lvl in self.levels:
            row = [-1] * n_out
            for i, atom in enumerate(lvl):
                for w in atom:
                    row[w] = i
            atom_of.append(tuple(row))
        self.atom_of = tuple(atom_of)
        parent = [(-1,)]
        children = []
        for n in range(1, self.depth + 1):
            parent.append(tuple(self.atom_of[n - 1][atom[0]] for atom in self.levels[n]))
        for n in range(self.depth + 1):
            if n == self.depth:
                children.append(tuple(() for _ in self.levels[n]))
                continue
            kids = [[] for _ in self.levels[n]]
            for j, par in enumerate(parent[n + 1]):
                kids[par].append(j)
            children.append(tuple(tuple(k) for k in kids))
        self.parent = tuple(parent)
        self.children = tuple(children)
        zero = Fraction(0) if self.exact else 0.0
        self.atom_prob = tuple(
            tuple(sum((self.probs[w] for w in atom), zero) for atom in lvl)
            for lvl in self.levels
        )

    # -- basic queries -------------------------------------------------
    @property
    def n_outcomes(self) -> int:
        return len(self.ids)

    def nodes(self, min_level: int = 0):
        """All tree nodes ``(level, index)`` in level-major order."""
        return [(n, i) for n in range(min_level, self.depth + 1)
                for i in range(len(self.levels[n]))]

    def node_prob(self, node):
        n, i = node
        return self.atom_prob[n][i]

    def descendants_or_self(self, node):
        n, i = node
        out = [node]
        frontier = [i]
        for m in range(n, self.depth):
            frontier = [c for a in frontier for c in self.children[m][a]]
            out.extend((m + 1, c) for c in frontier)
        return out

    def is_ancestor(self, a, b) -> bool:
        """True when node ``a`` is a (non-strict) ancestor of node ``b``."""
        (na, ia), (nb, ib) = a, b
        if na > nb:
            return False
        w = self.levels[nb][ib][0]
        return self.atom_of[na][w] == ia

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def rv(self, values) -> tuple:
        """Random variable from a mapping keyed by outcome id or a sequence."""
        if isinstance(values, Mapping):
            return tuple(values[k] for k in self.ids)
        vals = tuple(values)
        if len(vals) != self.n_outcomes:
            raise ValueError(f"expected {self.n_outcomes} values, got {len(vals)}")
        return vals

    def expectation(self, X):
        return sum((p * x for p, x in zip(self.probs, X)), self.zero())

    def lcd(self) -> int:
        """Least common denominator of every atom probability (exact only)."""
        if not self.exact:
            raise TypeError("lcd requires a rational-backed filtration")
        return reduce(math.lcm, (p.denominator for row in self.atom_prob for p in row), 1)

    def to_float(self) -> "FiniteFiltration":
        return FiniteFiltration(self.ids, [float(p) for p in self.probs], self.levels)

    def __eq__(self, other):
        return (isinstance(other, FiniteFiltration) and self.ids == other.ids
                and self.probs == other.probs and self.levels == other.levels)

    def __hash__(self):
        return hash((self.ids, self.probs, self.levels))

    def __repr__(self):
        return (f"FiniteFiltration(depth={self.depth}, outcomes={self.n_outcomes}, "
                f"atoms={[len(lvl) for lvl in self.levels]})")


def make_filtration(outcomes, levels: Sequence[Sequence[Iterable[Hashable]]],
                    exact: bool = True) -> FiniteFiltration:
    """Validate and build a filtration.

    ``outcomes`` is a mapping ``id -> probability`` or a sequence of
    ``(id, probability)`` pairs; ``levels[n]`` lists the level-``n`` atoms as
    collections of outcome ids.
    """
    items = list(outcomes.items()) if isinstance(outcomes, Mapping) else list(outcomes)
    if not items or not levels:
        raise ValueError("outcomes and levels must be nonempty")
    ids = [k for k, _ in items]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate outcome ids")
    if exact:
        probs = [as_fraction(p) for _, p in items]
    else:
        probs = [float(p) for _, p in items]
    for k, p in zip(ids, probs):
        if not p > 0:
            raise ZeroProbability(f"outcome {k!r} has probability {p}")
    total = sum(probs)
    if exact and total != 1:
        raise BadTotalMass(f"probabilities sum to {total}")
    if not exact and abs(total - 1.0) > FLOAT_MASS_TOL:
        raise BadTotalMass(f"probabilities sum to {total!r}")

    pos = {k: i for i, k in enumerate(ids)}
    idx_levels = []
    for n, lvl in enumerate(levels):
        seen = []
        atoms = []
        for atom in lvl:
            try:
                a = tuple(sorted(pos[k] for k in atom))
            except KeyError as exc:
                raise NotAPartition(f"level {n}: unknown outcome {exc.args[0]!r}") from None
            if not a:
                raise NotAPartition(f"level {n}: empty atom")
            atoms.append(a)
            seen.extend(a)
        if sorted(seen) != list(range(len(ids))):
            raise NotAPartition(f"level {n} is not a partition of the outcomes")
        idx_levels.append(atoms)

    if len(idx_levels[0]) != 1:
        raise NontrivialRoot("level 0 must be the single atom Omega")
    for n in range(1, len(idx_levels)):
        owner = {}
        for i, atom in enumerate(idx_levels[n - 1]):
            for w in atom:
                owner[w] = i
        for atom in idx_levels[n]:
            if len({owner[w] for w in atom}) != 1:
                raise NonRefining(f"level {n} atom {[ids[w] for w in atom]} crosses parents")
    if any(len(a) != 1 for a in idx_levels[-1]):
        raise NonSingletonLeaves("finest level must consist of singletons")
    return FiniteFiltration(ids, probs, idx_levels)


def conditional_expectation(F: FiniteFiltration, X, n: int) -> tuple:
    """E_n X as a per-outcome tuple."""
    means = atom_means(F, X, n)
    return tuple(means[a] for a in F.atom_of[n])


def atom_means(F: FiniteFiltration, X, n: int) -> tuple:
    """Probability-weighted mean of ``X`` on every level-``n`` atom."""
    if not 0 <= n <= F.depth:
        raise LevelOutOfRange(f"level {n} outside 0..{F.depth}")
    z = F.zero()
    out = []
    for atom, pa in zip(F.levels[n], F.atom_prob[n]):
        out.append(sum((F.probs[w] * X[w] for w in atom), z) / pa)
    return tuple(out)


def regularity_constant(F: FiniteFiltration):
    """Least R with P(parent(A)) <= R P(A) over all atoms A below the root."""
    best = Fraction(1) if F.exact else 1.0
    for n in range(1, F.depth + 1):
        for par, pa in zip(F.parent[n], F.atom_prob[n]):
            r = F.atom_prob[n - 1][par] / pa
            if r > best:
                best = r
    return best


def _check_budget(count: int, max_outcomes: int, depth: int):
    if count > max_outcomes:
        raise DepthTooLarge(
            f"depth {depth} needs at least {count} outcomes (budget {max_outcomes})")


def dyadic_filtration(depth: int, exact: bool = True,
                      max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> FiniteFiltration:
    """Uniform binary tree with ``2**depth`` outcomes."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > 62:
        raise DepthTooLarge(f"depth {depth} is beyond any outcome budget")
    _check_budget(2 ** depth, max_outcomes, depth)
    m = 2 ** depth
    p = Fraction(1, m) if exact else 1.0 / m
    levels = []
    for n in range(depth + 1):
        size = 2 ** (depth - n)
        levels.append([tuple(range(i * size, (i + 1) * size)) for i in range(2 ** n)])
    return FiniteFiltration(list(range(m)), [p] * m, levels)


def random_filtration(depth: int, max_branching: int = 2, skew: float = 0.0,
                      seed: int = 0, exact: bool = True,
                      max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> FiniteFiltration:
    """Random tree filtration.

    Every atom above the last level splits into between 2 and
    ``max_branching`` children. Child masses are proportional to integer
    weights ``8 + round(7 * skew * u)`` with ``u`` uniform on ``[-1, 1]``, so
    ``skew = 0`` gives equal splits and ``skew = 1`` allows 15:1 imbalances.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if max_branching < 2:
        raise ValueError("max_branching must be at least 2")
    if not 0 <= skew <= 1:
        raise ValueError("skew must lie in [0, 1]")
    if depth > 62:
        raise DepthTooLarge(f"depth {depth} is beyond any outcome budget")
    _check_budget(2 ** depth, max_outcomes, depth)
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    one = Fraction(1) if exact else 1.0
    # each tree node: (mass, list of children); grown level by level
    masses = [[one]]
    parents = [[-1]]
    for n in range(depth):
        new_m, new_p = [], []
        for i, m in enumerate(masses[n]):
            b = int(rng.integers(2, max_branching + 1))
            u = rng.uniform(-1.0, 1.0, size=b)
            w = [8 + int(round(7 * skew * x)) for x in u]
            tot = sum(w)
            for wi in w:
                new_m.append(m * Fraction(wi, tot) if exact else m * wi / tot)
                new_p.append(i)
        _check_budget(len(new_m), max_outcomes, depth)
        masses.append(new_m)
        parents.append(new_p)
    # leaves become outcomes; atoms are the leaf sets below each node
    leaves = list(range(len(masses[depth])))
    levels = [None] * (depth + 1)
    levels[depth] = [(w,) for w in leaves]
    for n in range(depth - 1, -1, -1):
        groups = [[] for _ in masses[n]]
        for j, par in enumerate(parents[n + 1]):
            groups[par].extend(levels[n + 1][j])
        levels[n] = [tuple(g) for g in groups]
    return FiniteFiltration(leaves, masses[depth], levels)
