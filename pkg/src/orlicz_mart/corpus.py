"""Deterministic corpora of martingales for the verification suites.

Case ``i`` draws from ``numpy.random.default_rng([seed, i])``, so a corpus
of size ``2n`` starts with the corpus of size ``n``. Terminal values are
centred integers on a random scale; the martingale is never zero.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .process import Martingale
from .space import DEFAULT_MAX_OUTCOMES, dyadic_filtration, random_filtration

KINDS = ("dyadic", "random", "mixed")


def case_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, i])


def case_id(i: int) -> str:
    return f"c{i:05d}"


def random_terminal(F, rng: np.random.Generator, scale: int | None = None) -> tuple:
    """Centred, nonzero terminal value built from integers in ``[-scale, scale]``."""
    if scale is None:
        scale = 2 ** int(rng.integers(0, 6))
    m = F.n_outcomes
    while True:
        raw = [int(v) for v in rng.integers(-scale, scale + 1, size=m)]
        if len(set(raw)) > 1:
            break
    if F.exact:
        X = [Fraction(v) for v in raw]
    else:
        X = [float(v) for v in raw]
    mean = F.expectation(X)
    return tuple(x - mean for x in X)


def random_martingale(F, rng: np.random.Generator, scale: int | None = None) -> Martingale:
    return Martingale.from_terminal(F, random_terminal(F, rng, scale))


def case_filtration(rng: np.random.Generator, depth: int, kind: str = "dyadic",
                    max_branching: int = 2, skew: float = 0.5, exact: bool = True,
                    vary_depth: bool = False, max_outcomes: int = DEFAULT_MAX_OUTCOMES):
    """Filtration for one case; ``vary_depth`` draws the depth from ``1..depth``."""
    if kind not in KINDS:
        raise ValueError(f"unknown corpus kind {kind!r}")
    d = int(rng.integers(1, depth + 1)) if vary_depth and depth > 1 else depth
    if kind == "mixed":
        kind = "dyadic" if rng.integers(0, 2) == 0 else "random"
    if kind == "dyadic":
        return dyadic_filtration(d, exact=exact, max_outcomes=max_outcomes)
    return random_filtration(d, max_branching=max_branching, skew=skew,
                             seed=int(rng.integers(0, 2 ** 63)), exact=exact,
                             max_outcomes=max_outcomes)


def generate_corpus(n: int, seed: int = 0, depth: int = 3, kind: str = "dyadic",
                    max_branching: int = 2, skew: float = 0.5, exact: bool = True,
                    vary_depth: bool = False,
                    max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> list:
    """``[(case_id, martingale), ...]`` sorted by case id."""
    out = []
    for i in range(n):
        rng = case_rng(seed, i)
        F = case_filtration(rng, depth, kind, max_branching, skew, exact, vary_depth,
                            max_outcomes)
        out.append((case_id(i), random_martingale(F, rng)))
    return out


def generate_pairs(n: int, seed: int = 0, depth: int = 3, kind: str = "dyadic",
                   **kw) -> list:
    """``[(case_id, f, g), ...]`` on shared filtrations; every fourth case has ``f = g``."""
    out = []
    for i in range(n):
        rng = case_rng(seed, i)
        F = case_filtration(rng, depth, kind, **kw)
        f = random_martingale(F, rng)
        g = f if i % 4 == 0 else random_martingale(F, rng)
        out.append((case_id(i), f, g))
    return out


def running_example() -> Martingale:
    """Uniform dyadic depth-2 martingale with terminal ``(2, 0, -1, -1)``."""
    F = dyadic_filtration(2)
    return Martingale.from_terminal(F, [Fraction(v) for v in (2, 0, -1, -1)])


__all__ = ["KINDS", "running_example", "case_rng", "case_id", "random_terminal",
           "random_martingale", "case_filtration", "generate_corpus", "generate_pairs"]
