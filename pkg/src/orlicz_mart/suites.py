"""Verification suites over generated corpora.

Each suite turns a :class:`SuiteConfig` into a JSON-ready report. Cases are
regenerated inside workers from ``(seed, index)``, so the report does not
depend on scheduling; assertions are counted per case and any failure makes
the run fail. Empirical constants are reported but never asserted.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import boundedness as bd
from .atomic import (
    decompose,
    decompose_s,
    equivalence_report,
    operator_sq,
    rebuild_control,
    tail_convergence,
)
from .campanato import (
    MODES,
    classic_campanato,
    duality_ratio,
    dual_test_martingale,
    holder_ordering_on_profiles,
    pairing,
    stopped_campanato_detail,
    w_atom_campanato,
    w_campanato_norm,
)
from .corpus import case_filtration, case_id, case_rng, random_martingale, running_example
from .errors import (
    BudgetGridOverflow,
    ConfigParse,
    DepthTooLarge,
    HypothesisViolated,
    IndexUnbounded,
    OrliczMartError,
    TooManyStoppingTimes,
    ZeroGap,
)
from .norms import (
    PredictableControl,
    all_hardy_norms,
    check_admissible,
    embedding_chain,
    luxemburg_norm,
    minimal_control,
    quasi_triangle_constant,
    weak_orlicz_norm,
)
from .orlicz import Power, from_dict, grid_properties, index, parse_phi, verify_type
from .process import BUILTIN_OPERATORS, maximal
from .serialize import digest
from .space import DEFAULT_MAX_OUTCOMES, regularity_constant
from .stopping import DEFAULT_ENUM_GUARD, DEFAULT_LCD_GUARD

SUITES = ("orlicz", "norms", "atomic", "boundedness", "duality", "jn")

# guard errors turn a case into a skip with a reason, never a failure
GUARD_ERRORS = (TooManyStoppingTimes, BudgetGridOverflow, DepthTooLarge)


@dataclass
class SuiteConfig:
    seed: int = 0
    depth: int = 3
    kind: str = "dyadic"
    branching: int = 2
    skew: float = 0.5
    vary_depth: bool = False
    phi: str | dict = "power:0.5"
    qs: list = field(default_factory=lambda: [1, 2, 4])
    n: int = 20
    suites: list = field(default_factory=lambda: ["atomic"])
    out: str | None = None
    tol: float = 1e-12
    guard_enum: int = DEFAULT_ENUM_GUARD
    guard_lcd: int = DEFAULT_LCD_GUARD
    max_outcomes: int = DEFAULT_MAX_OUTCOMES

    def validate(self):
        if self.guard_enum <= 0 or self.guard_lcd <= 0:
            raise ConfigParse("guards must be positive")
        if self.n < 0 or self.depth < 0:
            raise ConfigParse("n and depth must be nonnegative")
        if self.branching < 2:
            raise ConfigParse("branching must be at least 2")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigParse(f"unknown suites {unknown}")
        if not self.qs or any(q < 1 for q in self.qs):
            raise ConfigParse("q values must be >= 1")
        self.phi_function()
        return self

    def phi_function(self):
        try:
            return parse_phi(self.phi) if isinstance(self.phi, str) else from_dict(self.phi)
        except (OrliczMartError, KeyError, TypeError) as exc:
            raise ConfigParse(f"bad Orlicz function {self.phi!r}: {exc}") from None

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["phi"] = self.phi_function().to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        names = set(cls.__dataclass_fields__)
        extra = set(d) - names
        if extra:
            raise ConfigParse(f"unknown config keys {sorted(extra)}")
        try:
            return cls(**d).validate()
        except TypeError as exc:
            raise ConfigParse(str(exc)) from None


class Checker:
    """Counts assertions and keeps the failed ones with their details."""

    def __init__(self):
        self.count = 0
        self.failures = []

    def __call__(self, name: str, ok: bool, detail=None) -> bool:
        self.count += 1
        if not ok:
            self.failures.append(name if detail is None else f"{name}: {detail}")
        return bool(ok)


def _close(a, b, rtol) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


def _rel_change(a, b):
    if a is None or b is None or a == 0:
        return None
    return abs(b - a) / abs(a)


# -- per-case workers ----------------------------------------------------------------

def _case_data(cfg: SuiteConfig, i: int, pair: bool = False):
    rng = case_rng(cfg.seed, i)
    F = case_filtration(rng, cfg.depth, cfg.kind, cfg.branching, cfg.skew, True,
                        cfg.vary_depth, cfg.max_outcomes)
    f = random_martingale(F, rng)
    if not pair:
        return f
    g = f if i % 4 == 0 else random_martingale(F, rng)
    return f, g


def _case_orlicz(cfg, i, Phi, chk):
    f, g = _case_data(cfg, i, pair=True)
    F = f.filtration
    X, Y = f.terminal, g.terminal
    nx, ny = weak_orlicz_norm(F, X, Phi), weak_orlicz_norm(F, Y, Phi)
    nxy = weak_orlicz_norm(F, tuple(a + b for a, b in zip(X, Y)), Phi)
    K = quasi_triangle_constant(Phi)
    chk("quasi_triangle", nxy <= K * (nx + ny) * (1 + cfg.tol), (nxy, K * (nx + ny)))
    n3 = weak_orlicz_norm(F, tuple(-3 * a for a in X), Phi)
    chk("homogeneity", _close(n3, 3 * nx, 1e-12), (n3, 3 * nx))
    emb = embedding_chain(F, X, Phi)
    chk("weak_below_luxemburg", emb["weak_below_luxemburg"], emb)
    chk("luxemburg_below_l1", emb["luxemburg_below_l1"], emb)
    return {"weak": nx, "weak_sum": nxy, "quasi_triangle_ratio": nxy / (nx + ny),
            "luxemburg": emb["luxemburg"], "l1": emb["l1"]}


def _random_admissible(f, base: PredictableControl, rng) -> PredictableControl:
    """``base`` plus nonnegative increments accumulated along each path."""
    F = f.filtration
    extra = []
    for n in range(F.depth + 1):
        prev = extra[n - 1] if n else None
        extra.append([(prev[F.parent[n][i]] if n else 0) + int(rng.integers(0, 4))
                      for i in range(len(F.levels[n]))])
    rows = tuple(tuple(v + e for v, e in zip(base.sq[n], extra[n]))
                 for n in range(F.depth + 1))
    return PredictableControl(F, base.target, rows)


def _case_norms(cfg, i, Phi, chk):
    f = _case_data(cfg, i)
    F = f.filtration
    norms = all_hardy_norms(f, Phi)
    rng = case_rng(cfg.seed, 10 ** 9 + i)
    for target in ("Q", "D"):
        lam = minimal_control(f, target)
        chk(f"{target}_control_admissible", check_admissible(f, lam))
        for _ in range(5):
            other = _random_admissible(f, lam, rng)
            check_admissible(f, other)
            chk(f"{target}_control_minimal",
                all(a <= b for a, b in zip(lam.terminal_sq(), other.terminal_sq())))
    Mf = maximal(f)[1]
    lux = luxemburg_norm(F, Mf, Phi)
    chk("weak_below_luxemburg_M", norms["wH"] <= lux * (1 + 1e-9), (norms["wH"], lux))
    if isinstance(Phi, Power):
        # second route: sup_t t P(|X| > t)^(1/p), attained as t -> v_i from below
        vals = sorted({abs(float(v)) for v in Mf if v != 0})
        direct = max((v * sum(float(p) for p, w in zip(F.probs, Mf) if abs(float(w)) >= v)
                      ** (1.0 / Phi.p) for v in vals), default=0.0)
        chk("power_weak_identity", _close(direct, norms["wH"], 1e-12), (direct, norms["wH"]))
    return {"norms": norms, "luxemburg_M": lux}


def _case_atomic(cfg, i, Phi, chk):
    f = _case_data(cfg, i)
    F = f.filtration
    out = {}
    dec = decompose_s(f)
    chk("s_decomposition_valid", not dec.check(), dec.check())
    s_term = operator_sq(f, "s")
    for a in dec.atoms:
        lam = a.bound
        chk("s_atom_bound", all(v <= lam * lam for v in operator_sq(a.a, "s")))
        fin = a.nu.finite_mask()
        chk("s_atom_support", all(m or v == 0 for m, v in zip(fin, operator_sq(a.a, "s"))))
        thr = Fraction(4) ** a.k
        chk("s_level_set", list(fin) == [v > thr for v in s_term])
    rep = equivalence_report(f, Phi)
    chk("atomic_lower", rep["lower_holds"], rep)
    chk("atomic_upper", rep["upper_holds"], rep)
    out["s"] = {"atomic_quasinorm": rep["atomic_quasinorm"], "weak_hardy_s": rep["weak_hardy_s"],
                "upper_bound": rep["upper_bound"], "atoms": rep["atoms"]}
    ks = dec.ks()
    if ks:
        full = tail_convergence(f, Phi, ks[0], ks[-1], dec)
        chk("tail_full_range_zero", full == 0, full)
        prev = math.inf
        for w in range(len(ks) + 1):
            m, n = ks[0] + (len(ks) - w) // 2, ks[0] + (len(ks) - w) // 2 + w - 1
            val = tail_convergence(f, Phi, m, n, dec)
            chk("tail_monotone", val <= prev * (1 + 1e-12), (m, n, val, prev))
            prev = val
    rebuild_control(dec)
    chk("rebuilt_control_admissible", True)
    for method in ("S", "M", "Q", "D"):
        try:
            d = decompose(f, method)
        except AssertionError as exc:
            chk(f"{method}_decomposition_valid", False, str(exc))
            continue
        chk(f"{method}_decomposition_valid", not d.check(), d.check())
        if method in ("S", "M"):
            rebuild_control(d)
        out[method] = {"atomic_quasinorm": d.quasinorm(Phi), "atoms": len(d.atoms), "A": d.A}
    sup = bd.atom_support_for_decomposition(f, [BUILTIN_OPERATORS[k] for k in ("M", "S", "s")])
    for name, r in sup.items():
        chk(f"support_{name}", not r["violations"] and r["worst_constant"] <= 1, r["violations"])
    out["R"] = float(regularity_constant(F))
    return out


def _case_boundedness(cfg, i, Phi, chk, proof):
    f = _case_data(cfg, i)
    out = {"ratios": {}}
    for name, T in BUILTIN_OPERATORS.items():
        try:
            rep = bd.boundedness_suite(T, Phi, [(case_id(i), f)], proof.get(name) is not None)
        except HypothesisViolated as exc:
            out["ratios"][name] = {"skipped": str(exc)}
            continue
        ratio = rep["cases"][0]["ratio"]
        rep3 = bd.boundedness_suite(T, Phi, [(case_id(i), f * 3)])
        chk(f"{name}_scale_invariant", _close(ratio, rep3["cases"][0]["ratio"], 1e-10))
        if proof.get(name) is not None:
            chk(f"{name}_proof_bound", rep["passed"], (ratio, proof[name]["C"]))
        out["ratios"][name] = ratio
    chain = bd.inequality_chain(f, Phi)
    chk("q_below_scaled_s", chain["q_below_scaled_s"])
    sv = chain["square_vs_conditional"]
    chk("square_vs_conditional_sharp", sv["factor"] <= sv["sharp_factor"] * (1 + 1e-12), sv)
    out["chain_ratios"] = chain["ratios"]
    out["norms"] = chain["norms"]
    out["square_vs_conditional"] = {k: sv[k] for k in ("R", "factor", "sharp_factor",
                                                       "literature_factor")}
    return out


def _case_duality(cfg, i, Phi, chk):
    f, g = _case_data(cfg, i, pair=True)
    out = {"same": f is g}
    pf = pairing(f, g)
    chk("pairing_symmetric", pf == pairing(g, f))
    chk("pairing_bilinear", pairing(f * 2 + g, g) == 2 * pf + pairing(g, g))
    out["ratio"] = duality_ratio(f, g, Phi)
    chk("ratio_scale_invariant", _close(out["ratio"], duality_ratio(f * 5, g, Phi), 1e-9))
    guards = {"enum_guard": cfg.guard_enum, "lcd_guard": cfg.guard_lcd}
    modes = {}
    for mode in MODES:
        try:
            res = dual_test_martingale(g, Phi, mode, q=2 if mode == "Lq-power" else None,
                                       **guards)
        except ZeroGap as exc:
            modes[mode] = {"skipped": str(exc)}
            continue
        chk(f"dual_{mode}_pairing", _close(res.pairing, res.functional, 1e-9),
            (res.pairing, res.functional))
        chk(f"dual_{mode}_norm_bound", res.norm <= res.bound * (1 + 1e-12), (res.norm, res.bound))
        modes[mode] = {"functional": res.functional, "norm": res.norm, "bound": res.bound}
    out["dual_tests"] = modes
    classic = classic_campanato(g, 2, Phi)
    stopped = stopped_campanato_detail(g, 2, Phi, guard=cfg.guard_enum)
    chk("classic_below_stopped", classic <= stopped["value"] * (1 + 1e-12),
        (classic, stopped["value"]))
    out["classic"] = classic
    out["stopped"] = stopped["value"]
    out["stopped_exact"] = stopped["exact"]
    return out


def _case_jn(cfg, i, Phi, chk):
    f = _case_data(cfg, i)
    qs = sorted(set(int(q) if float(q).is_integer() else float(q) for q in cfg.qs))
    norms = {str(q): w_campanato_norm(f, q, Phi) for q in qs}
    for a, q1 in enumerate(qs):
        for q2 in qs[a + 1:]:
            if isinstance(q1, int) and isinstance(q2, int):
                chk(f"holder_profile_{q1}_{q2}", holder_ordering_on_profiles(f, q1, q2))
            chk(f"norm_order_{q1}_{q2}", norms[str(q1)] <= norms[str(q2)] * (1 + 1e-9),
                (norms[str(q1)], norms[str(q2)]))
    n2 = w_campanato_norm(f * 2, qs[0], Phi)
    chk("homogeneity", _close(n2, 2 * norms[str(qs[0])], 1e-9))
    atom_norms = {str(q): w_atom_campanato(f, q, Phi) for q in qs}
    return {"norms": norms, "atom_norms": atom_norms,
            "R": float(regularity_constant(f.filtration))}


def run_case(args):
    """Worker entry point: ``(suite, config dict, index, extras)`` to a case row."""
    suite, cfg_dict, i, extra = args
    cfg = SuiteConfig(**cfg_dict)
    Phi = cfg.phi_function()
    chk = Checker()
    row = {"case": case_id(i)}
    try:
        if suite == "orlicz":
            data = _case_orlicz(cfg, i, Phi, chk)
        elif suite == "norms":
            data = _case_norms(cfg, i, Phi, chk)
        elif suite == "atomic":
            data = _case_atomic(cfg, i, Phi, chk)
        elif suite == "boundedness":
            data = _case_boundedness(cfg, i, Phi, chk, extra)
        elif suite == "duality":
            data = _case_duality(cfg, i, Phi, chk)
        else:
            data = _case_jn(cfg, i, Phi, chk)
        row.update(data)
    except GUARD_ERRORS as exc:
        row["skipped"] = f"{type(exc).__name__}: {exc}"
    except (AssertionError, OrliczMartError) as exc:
        chk("case_completed", False, f"{type(exc).__name__}: {exc}")
    row["input_digest"] = digest(_case_data(cfg, i, pair=suite in ("orlicz", "duality"))) \
        if "skipped" not in row else None
    row["assertions"] = chk.count
    row["failures"] = chk.failures
    return row


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ORLICZ_MART_THREADS", "1")))
    except ValueError:
        return 1


def _run_cases(suite, cfg: SuiteConfig, extra=None) -> list:
    d = asdict(cfg)
    jobs = [(suite, d, i, extra) for i in range(cfg.n)]
    threads = _threads()
    if threads == 1 or len(jobs) < 2:
        rows = [run_case(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_case, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    return sorted(rows, key=lambda r: r["case"])


# -- suite-level assembly ----------------------------------------------------------------

def _orlicz_global(Phi, chk) -> dict:
    vt = verify_type(Phi)
    chk("type_verified", vt.passed, vt.as_dict())
    gp = grid_properties(Phi)
    for name, ok in gp["checks"].items():
        chk(name, ok)
    for t in (0.1, 1.0, 10.0):
        back = Phi.inverse(float(Phi(t)))
        chk("inverse_round_trip", _close(back, t, 1e-12) or abs(back - t) <= 1e-12 * t, (t, back))
    chk("dual_weight_at_one", _close(Phi.dual_weight()(1.0), 1.0 / Phi.inverse(1.0), 1e-12))
    return {"type": vt.as_dict(), "grid_properties": gp,
            "index_phi": index(Phi, "phi").as_dict(),
            "index_inverse": index(Phi, "inverse").as_dict(),
            "quasi_triangle_constant": quasi_triangle_constant(Phi)}


def _max_over(rows, getter):
    vals = []
    for r in rows:
        if "skipped" in r:
            continue
        v = getter(r)
        if isinstance(v, (int, float)) and v is not None:
            vals.append(float(v))
    return max(vals) if vals else None


def _half_and_full(rows, getter) -> dict:
    half = rows[: max(1, len(rows) // 2)]
    a, b = _max_over(half, getter), _max_over(rows, getter)
    return {"half": a, "full": b, "relative_change": _rel_change(a, b)}


def _running_example_duality(Phi) -> dict:
    f = running_example()
    return {"ratio": duality_ratio(f, f, Phi), "pairing": float(pairing(f, f)),
            "campanato_q2": w_campanato_norm(f, 2, Phi)}


FORMULA_TAGS = {
    "orlicz": {"weak": "weak Orlicz quasi-norm of f_N", "quasi_triangle_ratio":
               "||X+Y||_w / (||X||_w + ||Y||_w)", "luxemburg": "Luxemburg norm", "l1": "L_1 norm"},
    "norms": {"norms": "wH = ||M f||_w, wH_S = ||S f||_w, wH_s = ||s f||_w, "
                       "wQ / wD = ||lambda*_inf||_w for the minimal S / |f| control"},
    "atomic": {"s": "s-decomposition: atomic quasi-norm M, ||f||_{wH^s}, bound (C0 c_Phi)^(1/ell) 4 M",
               "S": "regular cover of S at 2^k", "M": "regular cover of M at 2^k",
               "Q": "minimal Q-control thresholds", "D": "minimal D-control thresholds"},
    "boundedness": {"ratios": "||Tf||_w / ||f||_{wH^s}", "chain_ratios":
                    "pairwise ratios of the five weak Hardy quasi-norms",
                    "square_vs_conditional": "max S_n/s_n against sqrt(R-1)"},
    "duality": {"ratio": "|<f,g>| / (||f||_{wH^s} ||g||_{wL_{2,phi}})",
                "classic": "atom-wise Campanato norm", "stopped": "stopping-time Campanato norm"},
    "jn": {"norms": "weak Campanato norm wL_{q,phi} per q",
           "atom_norms": "atom-gap variant (exploratory)"},
}


def run_suite(suite: str, cfg: SuiteConfig) -> dict:
    """Run one suite; returns the report dict."""
    Phi = cfg.phi_function()
    report = {"suite": suite, "config": cfg.as_dict(), "formula_tags": FORMULA_TAGS[suite]}
    chk = Checker()
    glob = {}
    extra = None
    try:
        if 2 ** cfg.depth > cfg.max_outcomes:
            raise DepthTooLarge(f"depth {cfg.depth} needs at least {2 ** cfg.depth} outcomes "
                                f"(budget {cfg.max_outcomes})")
        if suite == "orlicz":
            glob = _orlicz_global(Phi, chk)
        elif suite == "boundedness":
            extra = {}
            for name, T in BUILTIN_OPERATORS.items():
                extra[name] = bd.proof_constant(T, Phi) if T.r == 2 and T.lr_bound else None
            glob["proof_constants"] = extra
        elif suite == "duality":
            glob["running_example"] = _running_example_duality(Phi)
        rows = _run_cases(suite, cfg, extra)
    except (DepthTooLarge, IndexUnbounded) as exc:
        report.update({"error": f"{type(exc).__name__}: {exc}", "cases": [], "assertions": 0,
                       "failures": [f"{type(exc).__name__}: {exc}"], "skips": [],
                       "passed": False})
        return report
    if suite == "boundedness":
        for name in BUILTIN_OPERATORS:
            glob[f"empirical_constant_{name}"] = _half_and_full(
                rows, lambda r, n=name: r["ratios"].get(n))
        keys = sorted({k for r in rows if "chain_ratios" in r for k in r["chain_ratios"]})
        glob["chain_max_ratios"] = {k: _half_and_full(rows, lambda r, k=k: r["chain_ratios"][k])
                                    for k in keys}
        two = [glob["chain_max_ratios"].get(k, {}).get("full") for k in ("wD/wQ", "wQ/wD")]
        glob["two_sided_constant"] = max((v for v in two if v is not None), default=None)
        glob["max_square_vs_conditional"] = _max_over(
            rows, lambda r: r["square_vs_conditional"]["factor"])
    elif suite == "duality":
        glob["empirical_constant"] = _half_and_full(rows, lambda r: r["ratio"])
        glob["stopped_over_classic"] = _max_over(
            rows, lambda r: r["stopped"] / r["classic"] if r["classic"] > 0 else None)
    elif suite == "jn":
        qs = sorted({str(k) for r in rows if "norms" in r for k in r["norms"]}, key=float)
        ratios = {}
        for a, q1 in enumerate(qs):
            for q2 in qs[a + 1:]:
                ratios[f"{q2}/{q1}"] = _half_and_full(
                    rows, lambda r, x=q1, y=q2: r["norms"][y] / r["norms"][x]
                    if r["norms"][x] > 0 else None)
        glob["max_ratios"] = ratios
        glob["atom_vs_stopped"] = _half_and_full(
            rows, lambda r: r["atom_norms"][qs[0]] / r["norms"][qs[0]]
            if r["norms"][qs[0]] > 0 else None)
    elif suite == "atomic":
        glob["max_equivalence_ratio"] = _max_over(
            rows, lambda r: r["s"]["weak_hardy_s"] / r["s"]["atomic_quasinorm"]
            if r["s"]["atomic_quasinorm"] > 0 else None)
    elif suite == "orlicz":
        glob["max_quasi_triangle_ratio"] = _max_over(rows, lambda r: r["quasi_triangle_ratio"])
    failures = [f"global: {m}" for m in chk.failures]
    for r in rows:
        failures.extend(f"{r['case']}: {m}" for m in r["failures"])
    report.update({
        "global": glob,
        "cases": rows,
        "assertions": chk.count + sum(r["assertions"] for r in rows),
        "failures": failures,
        "skips": [f"{r['case']}: {r['skipped']}" for r in rows if "skipped" in r],
        "passed": not failures,
    })
    return report


def summary_csv(reports) -> str:
    """One line per suite: counts and pass flag."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "cases", "assertions", "failures", "skips", "passed"])
    for rep in reports:
        w.writerow([rep["suite"], len(rep["cases"]), rep["assertions"], len(rep["failures"]),
                    len(rep["skips"]), int(rep["passed"])])
    return buf.getvalue()


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, bool):
        out.append((prefix, int(obj)))
    elif isinstance(obj, (int, float)):
        out.append((prefix, obj))


def tidy_csv(report) -> str:
    """Long-format ``suite,case,metric,value`` rows of every numeric case field."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "case", "metric", "value"])
    for row in report["cases"]:
        items = []
        _flatten("", {k: v for k, v in row.items() if k not in ("case", "assertions")}, items)
        for metric, value in items:
            w.writerow([report["suite"], row["case"], metric, repr(float(value))])
    return buf.getvalue()


__all__ = ["SUITES", "SuiteConfig", "Checker", "run_case", "run_suite", "summary_csv",
           "tidy_csv", "FORMULA_TAGS"]
