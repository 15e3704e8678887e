"""Past and residual (dynamic) fractional measures at an inspection time ``t``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import MissingPdf, OutOfDomain, ZeroDenominator, ZeroMass
from .measures import _integrate_model, _weighted_power_ratio
from .model import (
    DEFAULT_QUADRATURE,
    AlphaParam,
    CdfModel,
    MeasureReport,
    Method,
    QuadratureConfig,
    as_alpha,
    probe_grid,
)
from .quadrature import integrate_finite
from .special import d_alpha

__all__ = [
    "dyn_fgce",
    "dyn_fgcre",
    "mean_inactivity",
    "mrl",
    "dyn_nfgce",
    "cumulative_past_entropy",
    "past_differential_entropy",
    "IdfceVerdict",
    "idfce_check",
    "dyn_bounds_report",
]

# below this F(t) the past integral is taken in u = F(x)/F(t)
_SMALL_MASS = 1e-6


def _check_t(model: CdfModel, t: float) -> float:
    t = float(t)
    if not (model.lower <= t <= model.upper) or not math.isfinite(t):
        raise OutOfDomain(f"inspection time t={t} outside the support {model.support}")
    return t


def _log_past_mass(model: CdfModel, t: float) -> float:
    lt = float(model.log_cdf(t))
    if lt == -math.inf or model.cdf(t) <= 0.0:
        raise ZeroMass(f"F(t) = 0 at t={t}; the past measure is undefined")
    return lt


def _log_residual_mass(model: CdfModel, t: float) -> float:
    ls = float(model.log_sf(t))
    if ls == -math.inf or model.sf(t) <= 0.0:
        raise ZeroMass(f"survival is 0 at t={t}; the residual measure is undefined")
    return ls


def _past_integral(model: CdfModel, t: float, weight, q: QuadratureConfig):
    """``int_lower^t w(ln(F(x)/F(t))) dx`` for a weight of the log-ratio."""
    lt = _log_past_mass(model, t)
    if model.cdf(t) < _SMALL_MASS and model.quantile is not None and model.density_quantile is not None:
        Ft = math.exp(lt)

        # x = F^-1(F(t) u), dx = F(t) du / f(x)
        def h(u):
            if u <= 0.0:
                return 0.0
            dq = model.density_quantile(Ft * u)
            return 0.0 if not dq > 0.0 else weight(math.log(u)) * Ft / dq

        return integrate_finite(h, 0.0, 1.0, q)
    return _integrate_model(lambda x: weight(model.log_cdf(x) - lt), model, q, b=t)


def dyn_fgce(
    model: CdfModel, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """``(1/Gamma(alpha+1)) int_lower^t G (-ln G)^alpha dx`` with ``G = F(x)/F(t)``."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    t = _check_t(model, t)
    val, err = _past_integral(model, t, lambda lg: _weighted_power_ratio(lg, a), q)
    g = math.gamma(a + 1.0)
    return MeasureReport(val / g, Method.QUADRATURE_X, err / g)


def dyn_fgcre(
    model: CdfModel, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """``(1/Gamma(alpha+1)) int_t^upper G (-ln G)^alpha dx`` with ``G = S(x)/S(t)``."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    t = _check_t(model, t)
    ls = _log_residual_mass(model, t)
    val, err = _integrate_model(lambda x: _weighted_power_ratio(model.log_sf(x) - ls, a), model, q, a=t)
    g = math.gamma(a + 1.0)
    return MeasureReport(val / g, Method.QUADRATURE_X, err / g)


def mean_inactivity(model: CdfModel, t: float, q: Optional[QuadratureConfig] = None) -> float:
    """Mean inactivity time ``E[t - X | X <= t] = (1/F(t)) int_lower^t F``."""
    q = q or DEFAULT_QUADRATURE
    t = _check_t(model, t)
    val, _ = _past_integral(model, t, lambda lg: math.exp(lg) if lg < 0.0 else 1.0, q)
    return val


def mrl(model: CdfModel, t: float, q: Optional[QuadratureConfig] = None) -> float:
    """Mean residual life ``E[X - t | X > t]``."""
    q = q or DEFAULT_QUADRATURE
    t = _check_t(model, t)
    ls = _log_residual_mass(model, t)

    def h(x):
        d = model.log_sf(x) - ls
        return 0.0 if d == -math.inf else math.exp(min(d, 0.0))

    val, _ = _integrate_model(h, model, q, a=t)
    return val


def cumulative_past_entropy(model: CdfModel, t: float, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """``CE(X; t)``, the ``alpha = 1`` case of :func:`dyn_fgce`."""
    return dyn_fgce(model, 1.0, t, q)


def dyn_nfgce(
    model: CdfModel, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """``CE_alpha(X; t) / CE(X; t)^alpha``."""
    a = as_alpha(alpha)
    num = dyn_fgce(model, a, t, q)
    den = cumulative_past_entropy(model, t, q)
    if not den.value > 0.0:
        raise ZeroDenominator(f"cumulative past entropy is zero at t={t}")
    value = num.value / den.value**a
    err = value * (num.err_estimate / max(num.value, 1e-300) + a * den.err_estimate / den.value)
    return MeasureReport(value, Method.QUADRATURE_X, err)


def past_differential_entropy(model: CdfModel, t: float, q: Optional[QuadratureConfig] = None) -> float:
    """Differential entropy of ``X | X <= t``: ``-int (f/F(t)) ln(f/F(t))``."""
    q = q or DEFAULT_QUADRATURE
    t = _check_t(model, t)
    if model.pdf is None:
        raise MissingPdf("the past differential entropy needs the model pdf")
    lt = _log_past_mass(model, t)

    def h(x):
        f = model.pdf(x)
        if not f > 0.0:
            return 0.0
        lg = math.log(f) - lt
        return -math.exp(lg) * lg

    val, _ = _integrate_model(h, model, q, b=t)
    return val


@dataclass(frozen=True)
class IdfceVerdict:
    """Grid verdict on whether ``t -> CE_alpha(X; t)`` is nondecreasing."""

    increasing: bool
    witness: Optional[tuple[float, float]]
    t_grid: tuple[float, ...] = field(repr=False)
    values: tuple[float, ...] = field(repr=False)

    @property
    def verdict(self) -> str:
        return "increasing" if self.increasing else "not_increasing"


def idfce_check(
    model: CdfModel,
    alpha: float | AlphaParam,
    t_grid: Optional[Sequence[float]] = None,
    q: Optional[QuadratureConfig] = None,
    *,
    n: int = 200,
) -> IdfceVerdict:
    """Evaluate :func:`dyn_fgce` along ``t_grid`` and report the first decrease, if any.

    A step counts as a decrease only when it exceeds ten times the combined
    quadrature error of its two endpoints.
    """
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    if t_grid is None:
        t_grid = probe_grid(model, n)
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size < 2 or np.any(np.diff(ts) <= 0):
        raise OutOfDomain("t_grid must be a strictly increasing sequence of at least two points")
    if ts[0] <= model.lower or ts[-1] > model.upper:
        raise OutOfDomain(f"t_grid must lie inside the support {model.support}")
    reports = [dyn_fgce(model, a, t, q) for t in ts]
    vals = [r.value for r in reports]
    witness = None
    for i in range(len(ts) - 1):
        slack = 10.0 * (reports[i].err_estimate + reports[i + 1].err_estimate) + 1e-12 * abs(vals[i])
        if vals[i + 1] < vals[i] - slack:
            witness = (float(ts[i]), float(ts[i + 1]))
            break
    return IdfceVerdict(witness is None, witness, tuple(map(float, ts)), tuple(vals))


def dyn_bounds_report(
    model: CdfModel, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None
):
    """Bounds on ``CE_alpha(X; t)`` as a list of :class:`~fracentropy.bounds.BoundReport`.

    * ``power_of_ce``: ``(t - lower)^(1-alpha) / Gamma(alpha+1) * CE(X;t)^alpha``,
      an upper bound for ``alpha <= 1`` and a lower bound for ``alpha >= 1``;
    * ``entropy_exp``: ``D_alpha exp(H(X;t)) / Gamma(alpha+1)`` (lower), with
      ``H(X;t)`` the differential entropy of ``X | X <= t``; skipped without a pdf;
    * ``one_minus``: ``(1/Gamma(alpha+1)) int G (1-G)^alpha`` (lower);
    * ``alpha_over_e``: ``(t - lower)/Gamma(alpha+1) (alpha/e)^alpha`` (upper), only for ``alpha <= 1``.
    """
    from .bounds import BoundReport

    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    t = _check_t(model, t)
    g = math.gamma(a + 1.0)
    width = t - model.lower
    lhs = dyn_fgce(model, a, t, q)
    slack = max(1e-9, 10.0 * lhs.err_estimate)
    out = []

    ce = cumulative_past_entropy(model, t, q)
    rhs = width ** (1.0 - a) / g * ce.value**a
    out.append(BoundReport("power_of_ce", lhs.value, rhs, "<=" if a <= 1.0 else ">=",
                           slack=max(slack, 10.0 * a * rhs * ce.err_estimate / max(ce.value, 1e-300))))

    if model.pdf is not None:
        h = past_differential_entropy(model, t, q)
        out.append(BoundReport("entropy_exp", lhs.value, d_alpha(a) * math.exp(h) / g, ">=", slack=slack))

    def one_minus(lg):
        return 0.0 if lg == -math.inf else math.exp(lg) * (-math.expm1(min(lg, 0.0))) ** a

    v, _ = _past_integral(model, t, one_minus, q)
    out.append(BoundReport("one_minus", lhs.value, v / g, ">=", slack=slack))

    if a <= 1.0:
        out.append(BoundReport("alpha_over_e", lhs.value, width / g * (a / math.e) ** a, "<=", slack=slack))
    return out
