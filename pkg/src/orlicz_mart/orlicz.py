"""Concave Orlicz functions of lower type ``ell``.

Three families are supported: ``t**p``, ``t**p * log(e + t)**qlog`` and
piecewise linear concave functions through the origin. Every function
carries its declared lower type ``ell`` and constant ``c_phi`` for the
inequality ``Phi(t r) <= c_phi * max(t**ell, t) * Phi(r)``.

Type membership and index estimates are certified on a finite log grid only;
reports say so.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import IndexUnbounded, InvalidOrliczFunction, NegativeInput

INVERSE_RTOL = 1e-14
DEFAULT_INDEX_CAP = 1e6


def log_grid(lo_exp: int = -20, hi_exp: int = 20, per_octave: int = 4) -> np.ndarray:
    """Points ``2**k`` for ``k`` in ``[lo_exp, hi_exp]`` with ``per_octave`` steps."""
    n = (hi_exp - lo_exp) * per_octave + 1
    return np.exp2(np.linspace(lo_exp, hi_exp, n))


def _check_nonneg(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise NegativeInput(f"Orlicz functions are defined on [0, inf); got {t!r}")
    return arr


class OrliczFunction:
    """Base class. Subclasses implement ``_eval`` and usually ``_inverse``."""

    kind = "abstract"

    def __init__(self, ell: float, c_phi: float):
        if not 0 < ell <= 1:
            raise InvalidOrliczFunction(f"lower type ell must lie in (0, 1], got {ell}")
        if not c_phi >= 1:
            raise InvalidOrliczFunction(f"c_phi must be >= 1, got {c_phi}")
        self.ell = float(ell)
        self.c_phi = float(c_phi)

    def __call__(self, t):
        arr = _check_nonneg(t)
        out = self._eval(arr)
        return float(out) if np.ndim(out) == 0 else out

    def elasticity(self, t):
        """``t Phi'(t) / Phi(t)`` by central differences of ``log Phi`` in ``log t``."""
        t = np.asarray(t, dtype=float)
        h = 1e-5
        up, dn = self._eval(t * math.exp(h)), self._eval(t * math.exp(-h))
        return (np.log(up) - np.log(dn)) / (2 * h)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.elasticity(t) * self._eval(t) / t

    def inverse(self, y):
        arr = _check_nonneg(y)
        if arr.ndim == 0:
            return self._inverse(float(arr))
        return np.array([self._inverse(float(v)) for v in arr.ravel()]).reshape(arr.shape)

    def _inverse(self, y: float) -> float:
        if y == 0:
            return 0.0
        if math.isinf(y):
            return math.inf
        lo, hi = 0.0, 1.0
        while self._eval(hi) < y:
            lo, hi = hi, hi * 2.0
        if lo == 0.0:
            lo = hi / 2.0
            while self._eval(lo) > y:
                hi, lo = lo, lo / 2.0
                if lo == 0.0:
                    return 0.0
        return brentq(lambda t: float(self._eval(t)) - y, lo, hi,
                      xtol=1e-300, rtol=INVERSE_RTOL, maxiter=500)

    def dual_weight(self) -> "DualWeight":
        return DualWeight(self)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(tuple(sorted((k, str(v)) for k, v in self.to_dict().items())))

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items() if k != "kind")
        return f"{type(self).__name__}({args})"


class Power(OrliczFunction):
    """``Phi(t) = t**p`` with ``0 < p <= 1``."""

    kind = "power"

    def __init__(self, p: float, ell: float | None = None, c_phi: float = 1.0):
        if not 0 < p <= 1:
            raise InvalidOrliczFunction(f"power exponent must lie in (0, 1], got {p}")
        self.p = float(p)
        super().__init__(self.p if ell is None else ell, c_phi)

    def _eval(self, t):
        return np.power(t, self.p)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.p * np.power(t, self.p - 1.0)

    def elasticity(self, t):
        return np.full(np.shape(t), self.p)

    def _inverse(self, y):
        return y ** (1.0 / self.p)

    def inverse(self, y):
        arr = _check_nonneg(y)
        out = np.power(arr, 1.0 / self.p)
        return float(out) if np.ndim(out) == 0 else out

    def to_dict(self):
        return {"kind": "power", "p": self.p, "ell": self.ell, "c_phi": self.c_phi}


class PowerLog(OrliczFunction):
    """``Phi(t) = t**p * log(e + t)**qlog`` with ``0 < ell <= p < 1``, ``qlog >= 0``.

    When ``c_phi`` is omitted it is fitted as the worst ratio on the default
    verification grid.
    """

    kind = "powerlog"

    def __init__(self, p: float, qlog: float, ell: float | None = None,
                 c_phi: float | None = None):
        ell = p if ell is None else ell
        if not 0 < ell <= p < 1:
            raise InvalidOrliczFunction(f"need 0 < ell <= p < 1, got ell={ell}, p={p}")
        if qlog < 0:
            raise InvalidOrliczFunction(f"qlog must be >= 0, got {qlog}")
        self.p = float(p)
        self.qlog = float(qlog)
        super().__init__(ell, 1.0)
        if c_phi is None:
            c_phi = max(1.0, type_ratio(self))
        self.c_phi = float(c_phi)

    @property
    def elasticity_floor(self) -> float:
        # t Phi'/Phi = p + qlog t / ((e + t) log(e + t)) > p
        return self.p

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(t, self.p) * np.power(np.log(math.e + t), self.qlog)

    def to_dict(self):
        return {"kind": "powerlog", "p": self.p, "qlog": self.qlog,
                "ell": self.ell, "c_phi": self.c_phi}


class PiecewiseLinearConcave(OrliczFunction):
    """Piecewise linear ``Phi`` through the origin.

    ``knots`` are ``(t_i, Phi(t_i))`` pairs with strictly increasing ``t_i > 0``;
    slopes must be positive and nonincreasing, and the last slope continues to
    infinity. At a knot the derivative is the left slope.
    """

    kind = "pwl"

    def __init__(self, knots, ell: float | None = None, c_phi: float | None = None):
        pts = [(0.0, 0.0)] + [(float(a), float(b)) for a, b in knots]
        ts = np.array([a for a, _ in pts])
        ys = np.array([b for _, b in pts])
        if len(pts) < 2 or np.any(np.diff(ts) <= 0):
            raise InvalidOrliczFunction("knots must have strictly increasing t > 0")
        slopes = np.diff(ys) / np.diff(ts)
        if np.any(slopes <= 0) or np.any(np.diff(slopes) > 1e-15 * slopes[:-1]):
            raise InvalidOrliczFunction("slopes must be positive and nonincreasing")
        self.knots = tuple(pts[1:])
        self._ts, self._ys, self._slopes = ts, ys, slopes
        super().__init__(1.0 if ell is None else ell, 1.0)
        if c_phi is None:
            c_phi = max(1.0, type_ratio(self))
        self.c_phi = float(c_phi)

    def _segment(self, t):
        # segment i covers (ts[i], ts[i+1]]; beyond the last knot use the last slope
        idx = np.searchsorted(self._ts, t, side="left") - 1
        return np.clip(idx, 0, len(self._slopes) - 1)

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        i = self._segment(t)
        return self._ys[i] + self._slopes[i] * (t - self._ts[i])

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self._slopes[self._segment(t)]

    def elasticity(self, t):
        t = np.asarray(t, dtype=float)
        return t * self.derivative(t) / self._eval(t)

    def elasticity_range(self):
        """Exact inf/sup of the elasticity: it is monotone on every segment."""
        vals = [1.0]  # first segment is linear through 0; the last tends to 1
        for i, s in enumerate(self._slopes):
            a, ya = self._ts[i], self._ys[i]
            if a > 0:
                vals.append(s * a / ya)
            if i + 1 < len(self._ts):
                b = self._ts[i + 1]
                vals.append(s * b / (ya + s * (b - a)))
        return float(min(vals)), float(max(vals))

    def _inverse(self, y):
        if y == 0:
            return 0.0
        i = int(np.clip(np.searchsorted(self._ys, y, side="left") - 1, 0, len(self._slopes) - 1))
        return float(self._ts[i] + (y - self._ys[i]) / self._slopes[i])

    def to_dict(self):
        return {"kind": "pwl", "knots": [list(k) for k in self.knots],
                "ell": self.ell, "c_phi": self.c_phi}


def from_dict(d: dict) -> OrliczFunction:
    kind = d.get("kind")
    if kind == "power":
        return Power(d["p"], d.get("ell"), d.get("c_phi", 1.0))
    if kind == "powerlog":
        return PowerLog(d["p"], d.get("qlog", 0.0), d.get("ell"), d.get("c_phi"))
    if kind == "pwl":
        return PiecewiseLinearConcave(d["knots"], d.get("ell"), d.get("c_phi"))
    raise InvalidOrliczFunction(f"unknown Orlicz kind {kind!r}")


def parse_phi(text: str) -> OrliczFunction:
    """Parse the CLI shorthand ``power:P``, ``powerlog:P:Q`` or ``pwl:t1,y1;t2,y2``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "power":
            return Power(float(rest))
        if kind == "powerlog":
            p, q = (float(x) for x in rest.split(":"))
            return PowerLog(p, q)
        if kind == "pwl":
            knots = [tuple(float(v) for v in k.split(",")) for k in rest.split(";")]
            return PiecewiseLinearConcave(knots)
    except ValueError as exc:
        raise InvalidOrliczFunction(f"cannot parse Orlicz function {text!r}: {exc}") from None
    raise InvalidOrliczFunction(f"unknown Orlicz kind in {text!r}")


# -- type verification ------------------------------------------------------

@dataclass(frozen=True)
class TypeReport:
    passed: bool
    worst_ratio: float
    worst_t: float
    worst_r: float
    c_phi: float
    ell: float
    grid: str
    concave_on_grid: bool

    def as_dict(self):
        return {
            "passed": self.passed, "worst_ratio": self.worst_ratio,
            "worst_t": self.worst_t, "worst_r": self.worst_r, "c_phi": self.c_phi,
            "ell": self.ell, "grid": self.grid, "concave_on_grid": self.concave_on_grid,
            "note": "certified on the scan grid only",
        }


def _type_scan(Phi, ell, grid):
    t = grid[:, None]
    r = grid[None, :]
    lhs = Phi._eval(t * r)
    rhs = np.maximum(t ** ell, t) * Phi._eval(r)
    ratio = lhs / rhs
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    return float(ratio[i, j]), float(grid[i]), float(grid[j])


def type_ratio(Phi: OrliczFunction, grid: np.ndarray | None = None) -> float:
    """Smallest constant making the lower-type inequality hold on the grid."""
    grid = log_grid() if grid is None else grid
    return _type_scan(Phi, Phi.ell, grid)[0]


def verify_type(Phi: OrliczFunction, grid: np.ndarray | None = None,
                rtol: float = 1e-12) -> TypeReport:
    """Check ``Phi(t r) <= c_phi max(t**ell, t) Phi(r)`` over ``grid x grid``."""
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    worst, wt, wr = _type_scan(Phi, Phi.ell, grid)
    # midpoint concavity between neighbouring grid points
    mids = np.sqrt(grid[:-1] * grid[1:])
    lin = Phi._eval(grid[:-1]) + (Phi._eval(grid[1:]) - Phi._eval(grid[:-1])) * (
        (mids - grid[:-1]) / (grid[1:] - grid[:-1]))
    concave = bool(np.all(Phi._eval(mids) >= lin * (1 - 1e-12)))
    desc = f"log2 grid [{np.log2(grid[0]):.0f}, {np.log2(grid[-1]):.0f}], {len(grid)} points"
    return TypeReport(worst <= Phi.c_phi * (1 + rtol) and concave, worst, wt, wr, Phi.c_phi,
                      Phi.ell, desc, concave)


# -- indices ----------------------------------------------------------------

@dataclass(frozen=True)
class IndexEstimate:
    """Lower/upper index with a conservative bracket.

    ``lower`` and ``upper`` already include the grid uncertainty in the
    safe direction (``lower`` rounded down, ``upper`` rounded up).
    """
    lower: float
    upper: float
    resolution: float
    exact: bool

    def as_dict(self):
        return {"lower": self.lower, "upper": self.upper,
                "resolution": self.resolution, "exact": self.exact}


def _elasticity_bracket(Phi, grid):
    e = np.asarray(Phi.elasticity(grid), dtype=float)
    diffs = np.abs(np.diff(e))
    local = np.zeros_like(e)
    local[:-1] = np.maximum(local[:-1], diffs)
    local[1:] = np.maximum(local[1:], diffs)
    i_lo, i_hi = int(np.argmin(e)), int(np.argmax(e))
    slack_lo = local[i_lo] + 1e-8
    slack_hi = local[i_hi] + 1e-8
    res = float(max(slack_lo, slack_hi))
    return float(e[i_lo] - slack_lo), float(e[i_hi] + slack_hi), res


def index(Phi: OrliczFunction, of: str = "phi", grid: np.ndarray | None = None,
          cap: float = DEFAULT_INDEX_CAP) -> IndexEstimate:
    """Lower and upper index of ``Phi`` (``of="phi"``) or of its inverse.

    The inverse's indices are reciprocals of Phi's: ``p(Phi^-1) = 1/q(Phi)``
    and ``q(Phi^-1) = 1/p(Phi)``.
    """
    if of not in ("phi", "inverse"):
        raise ValueError("of must be 'phi' or 'inverse'")
    if isinstance(Phi, Power):
        lo = hi = Phi.p
        res, exact = 0.0, True
    elif hasattr(Phi, "elasticity_range"):
        lo, hi = Phi.elasticity_range()
        res, exact = 0.0, True
    else:
        grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
        lo, hi, res = _elasticity_bracket(Phi, grid)
        # known analytic floor of the elasticity (inf not attained on any grid)
        lo = min(lo, getattr(Phi, "elasticity_floor", lo))
        lo = max(lo, 1e-300)
        hi = min(hi, 1.0)
        lo = min(lo, hi)
        exact = False
    if of == "phi":
        return IndexEstimate(lo, hi, res, exact)
    inv_lo, inv_hi = max(1.0, 1.0 / hi), 1.0 / lo
    if inv_hi > cap:
        raise IndexUnbounded(f"upper index of the inverse {inv_hi:g} exceeds cap {cap:g}")
    return IndexEstimate(inv_lo, inv_hi, res / (lo * lo), exact)


class DualWeight:
    """``phi(r) = 1 / (r * Phi^{-1}(1/r))``."""

    def __init__(self, Phi: OrliczFunction):
        self.Phi = Phi

    def __call__(self, r):
        if isinstance(self.Phi, Power):
            return np.power(r, 1.0 / self.Phi.p - 1.0) if np.ndim(r) else float(r) ** (1.0 / self.Phi.p - 1.0)
        if np.ndim(r):
            return np.array([self(float(x)) for x in np.ravel(r)]).reshape(np.shape(r))
        r = float(r)
        return 1.0 / (r * self.Phi.inverse(1.0 / r))

    def __repr__(self):
        return f"DualWeight({self.Phi!r})"


def dual_weight(Phi: OrliczFunction) -> DualWeight:
    return DualWeight(Phi)


# -- grid properties ------------------------------------------------------------

def _monotone(vals: np.ndarray, increasing: bool, rtol: float) -> bool:
    d = np.diff(vals)
    scale = np.maximum(np.abs(vals[:-1]), np.abs(vals[1:]))
    if increasing:
        return bool(np.all(d >= -rtol * scale))
    return bool(np.all(d <= rtol * scale))


def grid_properties(Phi: OrliczFunction, grid: np.ndarray | None = None,
                    rtol: float = 1e-10) -> dict:
    """Structural checks on the grid.

    With ``(p, q)`` the indices of ``Phi^{-1}`` (conservative ends):
    ``Phi^{-1}(t)/t^p`` and ``Phi(t)/t^(1/q)`` nondecreasing,
    ``Phi^{-1}(t)/t^q`` and ``Phi(t)/t^(1/p)`` nonincreasing; also
    subadditivity ``Phi(r + s) <= Phi(r) + Phi(s)`` and the doubling bound
    ``Phi(2t) <= 2 c_phi Phi(t)``.
    """
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    idx = index(Phi, "inverse", grid)
    p, q = idx.lower, idx.upper
    phi = np.asarray(Phi._eval(grid), dtype=float)
    inv = np.asarray(Phi.inverse(grid), dtype=float)
    checks = {
        "inverse_over_t_p_nondecreasing": _monotone(inv / grid ** p, True, rtol),
        "inverse_over_t_q_nonincreasing": _monotone(inv / grid ** q, False, rtol),
        "phi_over_t_1q_nondecreasing": _monotone(phi / grid ** (1.0 / q), True, rtol),
        "phi_over_t_1p_nonincreasing": _monotone(phi / grid ** (1.0 / p), False, rtol),
    }
    r, s = grid[:, None], grid[None, :]
    lhs = Phi._eval(r + s)
    rhs = Phi._eval(r) + Phi._eval(s)
    checks["subadditive"] = bool(np.all(lhs <= rhs * (1 + rtol)))
    checks["doubling"] = bool(np.all(Phi._eval(2 * grid) <= 2 * Phi.c_phi * phi * (1 + rtol)))
    return {"checks": checks, "passed": all(checks.values()), "p_inv": p, "q_inv": q,
            "grid_points": int(len(grid)), "note": "certified on the scan grid only"}
