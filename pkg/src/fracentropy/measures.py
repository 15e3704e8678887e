"""Static cumulative-entropy functionals evaluated by quadrature.

All functionals share the integrand ``G(x) * H(x)**alpha`` where ``G`` is the
CDF (or survival function) and ``H = -ln G`` its cumulative reversed hazard
(or cumulative hazard). ``H`` is taken from the model's log-CDF so that it
stays accurate when ``G`` is within rounding of 1.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import InvalidScale, MissingPdf, MissingQuantile, OutOfDomain, ZeroDenominator
from .model import (
    DEFAULT_QUADRATURE,
    AlphaParam,
    CdfModel,
    MeasureReport,
    Method,
    QuadratureConfig,
    SupportInterval,
    as_alpha,
    check_monotone,
    mass_point,
)
from .quadrature import integrate, integrate_finite

__all__ = [
    "fgce",
    "fgcre",
    "cumulative_entropy",
    "nfgce",
    "fgce_alpha0_limit",
    "xi_alpha",
    "fgce_via_xi_expectation",
    "fgce_quantile_form",
    "differential_entropy",
    "affine_transform",
    "model_mean",
    "tail_start",
]


def _weighted_power(log_g: float, log_h: float, alpha: float) -> float:
    """``G * H**alpha`` from ``ln G`` and ``ln H``, zero when either factor vanishes."""
    if log_g == -math.inf or log_h == -math.inf or log_g != log_g or log_h != log_h:
        return 0.0
    return math.exp(log_g + alpha * log_h)


def _weighted_power_ratio(log_g: float, alpha: float) -> float:
    # G (-ln G)^alpha for a ratio G given through ln G <= 0
    if not log_g < 0.0:
        return 0.0
    return _weighted_power(log_g, math.log(-log_g), alpha)


def tail_start(model: CdfModel) -> float:
    """Point from which the right tail of an unbounded model is integrated."""
    try:
        x0 = mass_point(model, 0.5)
    except MissingQuantile:
        x0 = model.lower + 1.0
    return max(x0, model.lower + 1e-12, 1e-12)


def _integrate_model(func, model: CdfModel, q: QuadratureConfig, a=None, b=None):
    a = model.lower if a is None else a
    b = model.upper if b is None else b
    x0 = tail_start(model) if not math.isfinite(b) else None
    if x0 is not None and x0 <= a:
        x0 = a + max(1.0, abs(a))
    return integrate(func, a, b, q, points=model.breakpoints, tail_start=x0)


def fgce(model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """Fractional generalized cumulative entropy.

    ``(1/Gamma(alpha+1)) * int F(x) (-ln F(x))^alpha dx`` over the support.
    Raises DivergentIntegral when the integral is infinite (a heavy right
    tail with ``alpha`` too small).
    """
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    check_monotone(model)
    val, err = _integrate_model(lambda x: _weighted_power(model.log_cdf(x), model.log_crh(x), a), model, q)
    g = math.gamma(a + 1.0)
    return MeasureReport(val / g, Method.QUADRATURE_X, err / g)


def fgcre(model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """Fractional generalized cumulative residual entropy (survival-function analogue of :func:`fgce`)."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    check_monotone(model)
    val, err = _integrate_model(lambda x: _weighted_power(model.log_sf(x), model.log_ch(x), a), model, q)
    g = math.gamma(a + 1.0)
    return MeasureReport(val / g, Method.QUADRATURE_X, err / g)


def cumulative_entropy(model: CdfModel, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """``-int F ln F dx``, i.e. :func:`fgce` at ``alpha = 1``."""
    return fgce(model, 1.0, q)


def nfgce(model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """Normalized measure ``CE_alpha / CE^alpha``."""
    a = as_alpha(alpha)
    num = fgce(model, a, q)
    den = cumulative_entropy(model, q)
    if den.value <= 0.0:
        raise ZeroDenominator("cumulative entropy is zero; the normalized measure is undefined")
    value = num.value / den.value**a
    # first-order error propagation
    err = value * (num.err_estimate / max(num.value, 1e-300) + a * den.err_estimate / den.value)
    return MeasureReport(value, Method.QUADRATURE_X, err)


def model_mean(model: CdfModel, q: Optional[QuadratureConfig] = None) -> tuple[float, float]:
    """``(E[X], error)`` from the stored mean or ``lower + int (1 - F)``."""
    if model.mean is not None:
        return float(model.mean), 0.0
    q = q or DEFAULT_QUADRATURE
    val, err = _integrate_model(lambda x: model.sf(x), model, q)
    return model.lower + val, err


def fgce_alpha0_limit(model: CdfModel, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """Limit of :func:`fgce` as ``alpha -> 0+``: ``l - E[X]``, or ``+inf`` for unbounded support."""
    if not model.support.bounded:
        return MeasureReport(math.inf, Method.CLOSED_FORM, 0.0)
    mean, err = model_mean(model, q)
    method = Method.CLOSED_FORM if model.mean is not None else Method.QUADRATURE_X
    return MeasureReport(max(model.upper - mean, 0.0), method, err)


def xi_alpha(model: CdfModel, alpha: float | AlphaParam, x: float, q: Optional[QuadratureConfig] = None) -> float:
    """``(1/Gamma(alpha+1)) int_x^l (-ln F(t))^alpha dt``; nonincreasing in ``x``, zero beyond the support."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    x = float(x)
    if x < model.lower:
        raise OutOfDomain(f"x={x} lies below the support {model.support}")
    if x >= model.upper:
        return 0.0

    def h(t):
        lh = model.log_crh(t)
        return 0.0 if lh == -math.inf else math.exp(a * lh)

    val, _ = _integrate_model(h, model, q, a=x)
    return val / math.gamma(a + 1.0)


def fgce_via_xi_expectation(
    model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """:func:`fgce` computed as ``E[xi_alpha(X)]`` by nested quadrature."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    if model.pdf is None:
        raise MissingPdf("E[xi_alpha(X)] needs the model pdf")

    def integrand(x):
        f = model.pdf(x)
        return 0.0 if f == 0.0 else xi_alpha(model, a, x, q) * f

    val, err = _integrate_model(integrand, model, q)
    return MeasureReport(val, Method.QUADRATURE_X, err)


def fgce_quantile_form(
    model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """:func:`fgce` as ``(1/Gamma(alpha+1)) int_0^1 u (-ln u)^alpha / f(F^-1(u)) du``.

    The upper half of the unit interval is integrated in ``v = 1 - u``
    through the inverse survival function, which keeps heavy right tails
    resolvable in double precision.
    """
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    if model.pdf is None:
        raise MissingPdf("the quantile form needs the model pdf")
    if model.quantile is None:
        raise MissingQuantile("the quantile form needs the model quantile function")

    def lower_half(u):
        dq = model.density_quantile(u)
        return 0.0 if u <= 0.0 else u * (-math.log(u)) ** a / dq

    def upper_half(v):
        if v <= 0.0:
            return 0.0
        dq = model.pdf(model.isf(v))
        if dq == 0.0:
            return 0.0
        return (1.0 - v) * (-math.log1p(-v)) ** a / dq

    v1, e1 = integrate_finite(lower_half, 0.0, 0.5, q)
    v2, e2 = integrate_finite(upper_half, 0.0, 0.5, q)
    g = math.gamma(a + 1.0)
    return MeasureReport((v1 + v2) / g, Method.QUADRATURE_U, (e1 + e2) / g)


def differential_entropy(model: CdfModel, q: Optional[QuadratureConfig] = None) -> float:
    """``-int f ln f``; may be negative."""
    q = q or DEFAULT_QUADRATURE
    if model.pdf is None:
        raise MissingPdf("differential entropy needs the model pdf")

    def h(x):
        f = model.pdf(x)
        return 0.0 if f <= 0.0 else -f * math.log(f)

    val, _ = _integrate_model(h, model, q)
    return val


def affine_transform(model: CdfModel, c: float, b: float = 0.0) -> CdfModel:
    """Model of ``Y = c X + b`` with ``c > 0`` and ``b >= 0``."""
    c, b = float(c), float(b)
    if not (math.isfinite(c) and c > 0.0):
        raise InvalidScale(f"scale must be finite and > 0, got {c}")
    if not (math.isfinite(b) and b >= 0.0):
        raise InvalidScale(f"shift must be finite and >= 0, got {b}")

    def back(x):
        return (np.asarray(x, dtype=float) - b) / c if np.ndim(x) else (x - b) / c

    def opt(fn, wrap):
        return None if fn is None else wrap(fn)

    return CdfModel(
        cdf=lambda x: model.cdf(back(x)),
        support=SupportInterval(c * model.lower + b, c * model.upper + b),
        pdf=opt(model.pdf, lambda f: (lambda x: f(back(x)) / c)),
        quantile=opt(model.quantile, lambda Q: (lambda u: c * Q(u) + b)),
        isf=opt(model.isf, lambda Q: (lambda v: c * Q(v) + b)),
        sf=lambda x: model.sf(back(x)),
        log_cdf=lambda x: model.log_cdf(back(x)),
        log_sf=lambda x: model.log_sf(back(x)),
        density_quantile=opt(model.density_quantile, lambda d: (lambda u: d(u) / c)),
        log_crh=lambda x: model.log_crh(back(x)),
        log_ch=lambda x: model.log_ch(back(x)),
        log_pdf=opt(model.log_pdf, lambda lf: (lambda x: np.asarray(lf(back(x))) - math.log(c))),
        mean=None if model.mean is None else c * model.mean + b,
        breakpoints=tuple(c * p + b for p in model.breakpoints),
        name=f"{c:g}*({model.name})+{b:g}" if model.name else "",
    )
