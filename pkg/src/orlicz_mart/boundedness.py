"""Weak-type bounds for sublinear operators and the chain of Hardy quasi-norms.

``boundedness_suite`` measures ``||Tf||_{wL_Phi} / ||f||_{wH^s}`` over a
corpus. In proof-constant mode (``r = 2``) it also assembles the constant
``2 (C_I + C_II)`` from the splitting argument: atoms below the level of
``lambda`` are handled by Chebyshev in ``L_2``, atoms above it by their
support.
"""
from __future__ import annotations

import math

from .atomic import decompose_s, operator_sq
from .errors import HypothesisViolated
from .norms import (
    PredictableControl,
    all_hardy_norms,
    check_admissible,
    weak_orlicz_norm,
    weak_orlicz_norm_sq,
)
from .orlicz import OrliczFunction, index
from .process import Martingale, OperatorSpec, conditional_quadratic_sq, quadratic_sq
from .space import regularity_constant


def _prob_where(F, mask):
    return sum((p for p, m in zip(F.probs, mask) if m), F.zero())


def check_atom_support(T: OperatorSpec, atoms) -> dict:
    """Compare ``P(|Ta| > 0)`` with ``P(nu < inf)`` atom by atom.

    ``atoms`` are objects with ``a`` (martingale) and ``nu`` (stopping
    time). For operators flagged with structural support the containment
    ``{|Ta| > 0} ⊂ {nu < inf}`` is asserted on genuine atoms (those
    vanishing on ``{nu >= n}`` at each level); anything else is reported.
    """
    rows = []
    worst = 0.0
    violations = []
    for idx, atom in enumerate(atoms):
        F = atom.a.filtration
        Ta = T.apply(atom.a)
        active = [v != 0 for v in Ta]
        finite = atom.nu.finite_mask()
        p_active = _prob_where(F, active)
        p_finite = atom.nu.prob_finite()
        contained = all(f or not a for a, f in zip(active, finite))
        genuine = all(atom.a.level(n)[w] == 0 or not (t >= n)
                      for n in range(F.depth + 1) for w, t in enumerate(atom.nu.times))
        if p_finite > 0:
            worst = max(worst, float(p_active) / float(p_finite))
        elif p_active > 0:
            worst = math.inf
        if not contained:
            violations.append(idx)
            if T.atom_support and genuine:
                raise AssertionError(f"{T.name}(a) leaves {{nu < inf}} on a genuine atom")
        rows.append({"atom": idx, "p_active": float(p_active), "p_finite": float(p_finite),
                     "contained": contained, "genuine": genuine})
    return {"operator": T.name, "worst_constant": worst, "violations": violations,
            "atoms": rows}


def proof_constant(T: OperatorSpec, Phi: OrliczFunction, support_constant: float = 1.0,
                   A: int = 2) -> dict:
    """``2 (C_I + C_II)`` for ``r = 2`` and atoms with ``s(a^k) <= A 2^k``.

    ``C_1 = (L_T A)^2 / (1 - 2^{-beta})^2`` with ``beta = 1 - 1/(2 p')``;
    ``C_2 = C_supp / (1 - 2^{-1/q'})``; ``C_X = (2 c_Phi max(C_X, 1))^{1/ell}``.
    """
    if T.lr_bound is None or T.r != 2:
        raise ValueError("proof-constant mode needs a known L_2 bound")
    idx = index(Phi, "inverse")
    p, q = idx.lower, idx.upper
    beta = 1.0 - 1.0 / (p * 2.0)
    C1 = (T.lr_bound * A) ** 2 / (1.0 - 2.0 ** (-beta)) ** 2
    C2 = support_constant / (1.0 - 2.0 ** (-1.0 / q))
    CI = (2.0 * Phi.c_phi * max(C1, 1.0)) ** (1.0 / Phi.ell)
    CII = (2.0 * Phi.c_phi * max(C2, 1.0)) ** (1.0 / Phi.ell)
    return {"C1": C1, "C2": C2, "C_I": CI, "C_II": CII, "C": 2.0 * (CI + CII),
            "p_inv": p, "q_inv": q}


def boundedness_suite(T: OperatorSpec, Phi: OrliczFunction, corpus,
                      proof_constants: bool = False) -> dict:
    """Ratios ``||Tf||_{wL_Phi} / ||f||_{wH^s}`` over ``corpus = [(case_id, f), ...]``."""
    p = index(Phi, "inverse").lower
    if not 1.0 / p < T.r:
        raise HypothesisViolated(f"1/p' = {1.0 / p:g} is not below r = {T.r:g}")
    if not 1.0 <= T.r <= 2.0:
        raise HypothesisViolated(f"r = {T.r:g} lies outside [1, 2]")
    consts = proof_constant(T, Phi) if proof_constants else None
    rows = []
    worst = 0.0
    failures = []
    for cid, f in corpus:
        F = f.filtration
        den = weak_orlicz_norm_sq(F, conditional_quadratic_sq(f)[1], Phi)
        if den == 0:
            rows.append({"case": cid, "ratio": None, "skipped": "zero martingale"})
            continue
        ratio = weak_orlicz_norm(F, T.apply(f), Phi) / den
        worst = max(worst, ratio)
        ok = consts is None or ratio <= consts["C"] * (1 + 1e-12)
        if not ok:
            failures.append(cid)
        rows.append({"case": cid, "ratio": ratio})
    return {"operator": T.name, "r": T.r, "empirical_constant": worst,
            "proof_constants": consts, "failures": failures, "passed": not failures,
            "cases": rows}


# -- the chain of quasi-norms -----------------------------------------------------------

CHAIN_PAIRS = (
    ("wH", "wH_s"), ("wH_S", "wH_s"),
    ("wH", "wQ"), ("wH_S", "wQ"), ("wH_s", "wQ"),
    ("wH", "wD"), ("wH_S", "wD"), ("wH_s", "wD"),
    ("wD", "wQ"), ("wQ", "wD"),
)


def square_vs_conditional(f: Martingale) -> dict:
    """Largest ``S_n(f)^2 / s_n(f)^2`` (exact) against the sharp bound ``R - 1``.

    On an atom whose children carry conditional masses ``pi_i >= 1/R`` a
    centred increment satisfies ``d_i^2 <= ((1 - pi_i)/pi_i) E d^2``, so
    ``S_n^2 <= (R - 1) s_n^2``.
    """
    F = f.filtration
    R = regularity_constant(F)
    S2 = quadratic_sq(f)[0]
    s2 = conditional_quadratic_sq(f)[0]
    worst = F.zero()
    for n in range(1, F.depth + 1):
        for a, b in zip(S2[n], s2[n]):
            if b > 0:
                worst = max(worst, a / b)
            else:
                assert a == 0 or not F.exact and a <= 1e-24, "S_n > 0 where s_n = 0"
    bound = R - 1 if F.depth > 0 else F.zero()
    assert worst <= bound * (1 + (0 if F.exact else 1e-12)), \
        f"S_n^2 / s_n^2 = {worst} exceeds R - 1 = {bound}"
    return {"R": float(R), "factor_sq": worst, "factor": math.sqrt(worst),
            "sharp_factor": math.sqrt(bound), "literature_factor": math.sqrt(max(0.0, (float(R) - 1) / 2))}


def inequality_chain(f: Martingale, Phi: OrliczFunction) -> dict:
    """All five quasi-norms, their pairwise ratios, and the ``Q <= c * s`` check."""
    F = f.filtration
    norms = all_hardy_norms(f, Phi)
    ratios = {}
    for a, b in CHAIN_PAIRS:
        ratios[f"{a}/{b}"] = norms[a] / norms[b] if norms[b] > 0 else None
    sv = square_vs_conditional(f)
    # lambda_n = c * s_{n+1}(f) dominates S_{n+1}(f) with c^2 = measured factor
    s2 = conditional_quadratic_sq(f)[0]
    s2 = list(s2) + [s2[-1]]
    c2 = max(sv["factor_sq"], F.zero() + 1) if F.exact else max(float(sv["factor_sq"]), 1.0)
    rows = []
    for n in range(F.depth + 1):
        rows.append(tuple(c2 * s2[n + 1][atom[0]] for atom in F.levels[n]))
    ctrl = PredictableControl(F, "Q", tuple(rows))
    check_admissible(f, ctrl)
    via_s = weak_orlicz_norm_sq(F, ctrl.terminal_sq(), Phi)
    q_ok = norms["wQ"] <= via_s * (1 + 1e-12)
    assert q_ok, "minimal Q-control exceeds the s-based control"
    return {"norms": norms, "ratios": ratios, "square_vs_conditional": sv,
            "control_from_s_norm": via_s, "q_below_scaled_s": q_ok,
            "scale": math.sqrt(c2)}


def chain_corpus_report(corpus, Phi: OrliczFunction) -> dict:
    """Corpus maxima of every chain ratio and the two-sided ``Q``/``D`` constant."""
    maxima = {}
    cases = []
    for cid, f in corpus:
        rep = inequality_chain(f, Phi)
        cases.append({"case": cid, "norms": rep["norms"], "factor": rep["square_vs_conditional"]["factor"]})
        for key, val in rep["ratios"].items():
            if val is not None:
                maxima[key] = max(maxima.get(key, 0.0), val)
    two_sided = max(maxima.get("wD/wQ", 0.0), maxima.get("wQ/wD", 0.0))
    return {"max_ratios": maxima, "two_sided_constant": two_sided, "cases": cases,
            "finite": all(math.isfinite(v) for v in maxima.values())}


def atom_support_for_decomposition(f: Martingale, operators) -> dict:
    """Run :func:`check_atom_support` for each operator on the s-atoms of ``f``."""
    atoms = decompose_s(f).atoms
    return {T.name: check_atom_support(T, atoms) for T in operators}


__all__ = [
    "check_atom_support", "proof_constant", "boundedness_suite", "square_vs_conditional",
    "inequality_chain", "chain_corpus_report", "atom_support_for_decomposition", "CHAIN_PAIRS",
    "operator_sq",
]
