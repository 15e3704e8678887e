"""Stochastic-order predicates and the entropy comparisons they imply."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bounds import BoundReport
from .errors import MissingPdf, MissingQuantile, PreconditionUnmet, ZeroMass
from .measures import _integrate_model, fgce, model_mean, xi_alpha
from .model import (
    DEFAULT_QUADRATURE,
    AlphaParam,
    CdfModel,
    QuadratureConfig,
    as_alpha,
    probe_grid,
)
from .quadrature import integrate

__all__ = [
    "Relation",
    "OrderVerdict",
    "order_st",
    "order_dispersive",
    "order_hr",
    "dfr_check",
    "disp_implies_fgce",
    "hr_dfr_implies",
    "ScanResult",
    "st_counterexample_scan",
    "MvtDecomposition",
    "mvt_decomposition",
]

ORDER_SLACK = 1e-9


class Relation(str, enum.Enum):
    ST = "st"
    DISPERSIVE = "dispersive"
    HR = "hr"


@dataclass(frozen=True)
class OrderVerdict:
    """Grid verdict for ``X <= Y`` in the given order; ``witness`` is the first violating point."""

    relation: Relation
    holds: bool
    witness: Optional[float] = None

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failed order verdict must carry a witness")

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {"relation": self.relation.value, "holds": self.holds, "witness": self.witness}


def _common_grid(mX: CdfModel, mY: CdfModel, n: int = 256) -> np.ndarray:
    g = np.union1d(probe_grid(mX, n), probe_grid(mY, n))
    lo, up = min(mX.lower, mY.lower), max(mX.upper, mY.upper)
    return g[(g > lo) & (g < up)]


def _first(mask: np.ndarray, pts: np.ndarray) -> Optional[float]:
    idx = np.flatnonzero(mask)
    return float(pts[idx[0]]) if idx.size else None


def order_st(mX: CdfModel, mY: CdfModel, grid: Optional[Sequence[float]] = None) -> OrderVerdict:
    """``X <=_st Y``: ``F(x) >= G(x)`` at every grid point."""
    x = _common_grid(mX, mY) if grid is None else np.asarray(grid, dtype=float)
    bad = np.asarray(mX.cdf(x)) < np.asarray(mY.cdf(x)) - ORDER_SLACK
    w = _first(bad, x)
    return OrderVerdict(Relation.ST, w is None, w)


def order_dispersive(mX: CdfModel, mY: CdfModel, u_grid: Optional[Sequence[float]] = None) -> OrderVerdict:
    """``X <=_d Y`` through ``f(F^-1(u)) >= g(G^-1(u))`` on a grid of probabilities."""
    for m in (mX, mY):
        if m.quantile is None:
            raise MissingQuantile("the dispersive order needs quantile functions")
        if m.density_quantile is None:
            raise MissingPdf("the dispersive order needs densities")
    u = np.linspace(0.0, 1.0, 514)[1:-1] if u_grid is None else np.asarray(u_grid, dtype=float)
    fx = np.asarray(mX.density_quantile(u), dtype=float)
    gy = np.asarray(mY.density_quantile(u), dtype=float)
    bad = fx < gy - ORDER_SLACK * np.maximum(1.0, np.abs(gy))
    w = _first(bad, u)
    return OrderVerdict(Relation.DISPERSIVE, w is None, w)


def order_hr(mX: CdfModel, mY: CdfModel, grid: Optional[Sequence[float]] = None) -> OrderVerdict:
    """``X <=_hr Y``: ``G_bar/F_bar`` nondecreasing on the grid (compared in logs)."""
    if grid is None:
        x = _common_grid(mX, mY)
        x = x[(np.asarray(mX.sf(x)) > 0) & (np.asarray(mY.sf(x)) > 0)]
    else:
        x = np.asarray(grid, dtype=float)
    lx = np.asarray(mX.log_sf(x), dtype=float)
    ly = np.asarray(mY.log_sf(x), dtype=float)
    if np.any(~np.isfinite(lx)) or np.any(~np.isfinite(ly)):
        raise ZeroMass("a survival function vanishes on the grid")
    d = np.diff(ly - lx)
    bad = d < -ORDER_SLACK * np.maximum(1.0, np.abs(ly - lx)[1:])
    w = _first(bad, x[1:])
    return OrderVerdict(Relation.HR, w is None, w)


def dfr_check(model: CdfModel, grid: Optional[Sequence[float]] = None) -> bool:
    """True when ``ln F_bar`` is convex on the grid (chord slopes nondecreasing)."""
    if grid is None:
        x = probe_grid(model, 256)
        x = x[np.asarray(model.sf(x)) > 0]
    else:
        x = np.asarray(grid, dtype=float)
    ls = np.asarray(model.log_sf(x), dtype=float)
    if np.any(~np.isfinite(ls)):
        raise ZeroMass("survival vanishes on the grid")
    slopes = np.diff(ls) / np.diff(x)
    tol = ORDER_SLACK * np.maximum(1.0, np.abs(slopes[1:]))
    return bool(np.all(np.diff(slopes) >= -tol))


def disp_implies_fgce(
    mX: CdfModel, mY: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> BoundReport:
    """Given ``X <=_d Y``, compare ``CE_alpha(X) <= CE_alpha(Y)``."""
    a = as_alpha(alpha)
    v = order_dispersive(mX, mY)
    if not v.holds:
        raise PreconditionUnmet(f"X <=_d Y fails at u={v.witness:.6g}")
    cx, cy = fgce(mX, a, q), fgce(mY, a, q)
    return BoundReport("dispersive_implies_fgce", cx.value, cy.value, "<=",
                       slack=max(1e-9, 10.0 * (cx.err_estimate + cy.err_estimate)))


def hr_dfr_implies(
    mX: CdfModel, mY: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> BoundReport:
    """Given ``X <=_hr Y`` and ``X`` or ``Y`` DFR, compare ``CE_alpha(X) <= CE_alpha(Y)``."""
    a = as_alpha(alpha)
    v = order_hr(mX, mY)
    if not v.holds:
        raise PreconditionUnmet(f"X <=_hr Y fails at x={v.witness:.6g}")
    if not (dfr_check(mX) or dfr_check(mY)):
        raise PreconditionUnmet("neither X nor Y is DFR on the probe grid")
    cx, cy = fgce(mX, a, q), fgce(mY, a, q)
    return BoundReport("hr_dfr_implies_fgce", cx.value, cy.value, "<=",
                       slack=max(1e-9, 10.0 * (cx.err_estimate + cy.err_estimate)))


@dataclass(frozen=True)
class ScanResult:
    """``diff[i, j] = CE_alpha(Power(b_i, l)) - CE_alpha(Power(d_j, l))``."""

    b: np.ndarray
    d: np.ndarray
    l: float
    alpha: float
    diff: np.ndarray

    def st_ordered_violations(self) -> list[tuple[float, float, float]]:
        """Cells with ``b <= d`` (so ``X <=_st Y``) where ``CE_alpha(X) > CE_alpha(Y)``."""
        out = []
        for i, bi in enumerate(self.b):
            for j, dj in enumerate(self.d):
                if bi <= dj and self.diff[i, j] > 0.0:
                    out.append((float(bi), float(dj), float(self.diff[i, j])))
        return out

    def rows(self):
        for i, bi in enumerate(self.b):
            for j, dj in enumerate(self.d):
                yield float(bi), float(dj), float(self.diff[i, j])


def st_counterexample_scan(b_grid, d_grid, l: float, alpha: float | AlphaParam) -> ScanResult:
    """Closed-form difference matrix for power laws ``(x/l)^b`` against ``(x/l)^d``."""
    from .catalog import Power

    a = as_alpha(alpha)
    b = np.asarray(b_grid, dtype=float)
    d = np.asarray(d_grid, dtype=float)
    Power(1.0, l)  # parameter validation
    if np.any(b <= 0) or np.any(d <= 0):
        raise PreconditionUnmet("power exponents must be positive")

    def ce(p):
        return l * p**a / (p + 1.0) ** (a + 1.0)

    diff = ce(b)[:, None] - ce(d)[None, :]
    diff[b[:, None] == d[None, :]] = 0.0
    return ScanResult(b, d, float(l), a, diff)


@dataclass(frozen=True)
class MvtDecomposition:
    """``CE_alpha(X) = E[xi_alpha(Y)] + E[xi'_alpha(Z)] (E X - E Y)`` term by term."""

    ce_x: float
    e_xi_y: float
    e_dxi_z: float
    mean_gap: float

    @property
    def reconstructed(self) -> float:
        return self.e_xi_y + self.e_dxi_z * self.mean_gap

    @property
    def residual(self) -> float:
        return self.ce_x - self.reconstructed


def _xi_expectation(mX: CdfModel, mY: CdfModel, a: float, q: QuadratureConfig) -> float:
    # E[xi_alpha(Y)] with xi built from F_X, by nested quadrature against the pdf of Y
    if mY.pdf is None:
        raise MissingPdf("E[xi_alpha(Y)] needs the pdf of Y")

    def h(y):
        f = mY.pdf(y)
        return 0.0 if not f > 0.0 else xi_alpha(mX, a, max(y, mX.lower), q) * f

    val, _ = _integrate_model(h, mY, q)
    return val


def mvt_decomposition(
    mX: CdfModel, mY: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> MvtDecomposition:
    """Mean-value decomposition of ``CE_alpha(X)`` through a stochastically ordered ``Y``.

    ``Z`` has density ``(G - F)/(E X - E Y)`` and ``xi'_alpha = -(-ln F)^alpha / Gamma(alpha+1)``.
    """
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    mx, _ = model_mean(mX, q)
    my, _ = model_mean(mY, q)
    if not (math.isfinite(mx) and math.isfinite(my)):
        raise PreconditionUnmet("both means must be finite")
    gap = mx - my
    if abs(gap) <= 1e-12 * max(1.0, abs(mx)):
        raise PreconditionUnmet("the means coincide; Z is undefined")
    if not (order_st(mX, mY).holds or order_st(mY, mX).holds):
        raise PreconditionUnmet("X and Y are not ordered in the usual stochastic order")
    if mY.lower < mX.lower and mY.cdf(mX.lower) > 0.0:
        raise PreconditionUnmet("Y puts mass where F_X = 0, so E[xi_alpha(Y)] is infinite")

    g = math.gamma(a + 1.0)
    lo = min(mX.lower, mY.lower)
    up = max(mX.upper, mY.upper)

    def dxi_fz(x):
        lf = mX.log_cdf(x)
        if lf >= 0.0:
            return 0.0
        return -((-lf) ** a) / g * (mY.cdf(x) - mX.cdf(x)) / gap

    pts = tuple(sorted(set(mX.breakpoints + mY.breakpoints + (mX.upper, mY.upper)) - {math.inf}))
    e_dxi, _ = integrate(dxi_fz, lo, up, q, points=pts,
                         tail_start=None if math.isfinite(up) else max(lo + 1.0, max(pts, default=1.0)))
    e_xi = _xi_expectation(mX, mY, a, q)
    ce = fgce(mX, a, q).value
    return MvtDecomposition(ce, e_xi, e_dxi, gap)
