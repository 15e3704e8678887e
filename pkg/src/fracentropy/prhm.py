"""Proportional reversed hazard model ``F_theta = F^theta`` and its entropy algebra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import IdentityViolation, InvalidModel, MissingPdf, OutOfDomain, ZeroMass
from .model import (
    DEFAULT_QUADRATURE,
    AlphaParam,
    CdfModel,
    MeasureReport,
    Method,
    QuadratureConfig,
    as_alpha,
    log1m_exp,
    scalar_or_array as vec,
)

__all__ = [
    "PrhmSpec",
    "prhm_model",
    "phm_model",
    "e_theta",
    "fgce_prhm",
    "IdentityCheck",
    "recurrence_step",
    "recurrence_n",
    "weighted_terms",
    "dyn_fgce_prhm",
    "dyn_fgcre_phm",
    "prhm_sandwich",
    "phm_sandwich",
]


@dataclass(frozen=True)
class PrhmSpec:
    base: CdfModel
    theta: float

    def __post_init__(self):
        th = float(self.theta)
        if not (math.isfinite(th) and th > 0.0):
            raise InvalidModel(f"theta must be finite and > 0, got {self.theta!r}")
        object.__setattr__(self, "theta", th)


def _log1m_exp_neg(log_c):
    # ln(1 - exp(-c)) from ln c, exact to double precision for tiny c
    log_c = np.asarray(log_c, dtype=float)
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        c = np.exp(log_c)
        return np.where(c < 1e-10, log_c - 0.5 * c, log1m_exp(-c))


def prhm_model(spec: PrhmSpec) -> CdfModel:
    """Model with CDF ``F^theta``, pdf ``theta F^(theta-1) f`` and quantile ``F^-1(u^(1/theta))``."""
    base, th = spec.base, spec.theta
    if th == 1.0:
        return base

    lth = math.log(th)

    def log_cdf(x):
        return th * np.asarray(base.log_cdf(x), dtype=float)

    def log_crh(x):
        return lth + np.asarray(base.log_crh(x), dtype=float)

    pdf = log_pdf = None
    if base.pdf is not None:
        def pdf(x):
            f = np.asarray(base.pdf(x), dtype=float)
            lf = np.asarray(base.log_cdf(x), dtype=float)
            with np.errstate(invalid="ignore", over="ignore"):
                out = th * np.exp((th - 1.0) * lf) * f
            return np.where(f > 0, out, 0.0)

        def log_pdf(x):
            lf = np.asarray(base.log_pdf(x), dtype=float)
            with np.errstate(invalid="ignore"):
                out = lth + (th - 1.0) * np.asarray(base.log_cdf(x), dtype=float) + lf
            return np.where(lf > -np.inf, out, -np.inf)

    quantile = isf = None
    if base.quantile is not None:
        def quantile(u):
            return base.quantile(np.asarray(u, dtype=float) ** (1.0 / th))
    if base.isf is not None:
        def isf(v):
            # F^theta = 1 - v  <=>  1 - F = -expm1(log1p(-v)/theta)
            return base.isf(-np.expm1(np.log1p(-np.asarray(v, dtype=float)) / th))

    return CdfModel(
        cdf=vec(lambda x: np.exp(log_cdf(x))),
        support=base.support,
        pdf=None if pdf is None else vec(pdf),
        log_pdf=None if log_pdf is None else vec(log_pdf),
        quantile=None if quantile is None else vec(quantile),
        isf=None if isf is None else vec(isf),
        sf=vec(lambda x: -np.expm1(log_cdf(x))),
        log_cdf=vec(log_cdf),
        log_sf=vec(lambda x: _log1m_exp_neg(log_crh(x))),
        log_crh=vec(log_crh),
        breakpoints=base.breakpoints,
        name=f"({base.name})^{th:g}" if base.name else "",
    )


def phm_model(base: CdfModel, theta: float) -> CdfModel:
    """Proportional hazards counterpart: survival ``(1 - F)^theta``."""
    th = PrhmSpec(base, theta).theta
    if th == 1.0:
        return base

    lth = math.log(th)

    def log_sf(x):
        return th * np.asarray(base.log_sf(x), dtype=float)

    def log_ch(x):
        return lth + np.asarray(base.log_ch(x), dtype=float)

    pdf = log_pdf = None
    if base.pdf is not None:
        def pdf(x):
            f = np.asarray(base.pdf(x), dtype=float)
            ls = np.asarray(base.log_sf(x), dtype=float)
            with np.errstate(invalid="ignore", over="ignore"):
                out = th * np.exp((th - 1.0) * ls) * f
            return np.where(f > 0, out, 0.0)

        def log_pdf(x):
            lf = np.asarray(base.log_pdf(x), dtype=float)
            with np.errstate(invalid="ignore"):
                out = lth + (th - 1.0) * np.asarray(base.log_sf(x), dtype=float) + lf
            return np.where(lf > -np.inf, out, -np.inf)

    quantile = isf = None
    if base.isf is not None:
        def isf(v):
            return base.isf(np.asarray(v, dtype=float) ** (1.0 / th))

        def quantile(u):
            return base.isf((1.0 - np.asarray(u, dtype=float)) ** (1.0 / th))

    return CdfModel(
        cdf=vec(lambda x: -np.expm1(log_sf(x))),
        support=base.support,
        pdf=None if pdf is None else vec(pdf),
        log_pdf=None if log_pdf is None else vec(log_pdf),
        quantile=None if quantile is None else vec(quantile),
        isf=None if isf is None else vec(isf),
        sf=vec(lambda x: np.exp(log_sf(x))),
        log_cdf=vec(lambda x: _log1m_exp_neg(log_ch(x))),
        log_sf=vec(log_sf),
        log_ch=vec(log_ch),
        breakpoints=base.breakpoints,
        name=f"phm({base.name}, {th:g})" if base.name else "",
    )


def _e_theta(spec: PrhmSpec, a: float, q: QuadratureConfig) -> tuple[float, float]:
    from .measures import _integrate_model

    m = prhm_model(spec)
    if m.pdf is None:
        raise MissingPdf("E_theta needs the base pdf")
    lg = math.lgamma(a)

    def integrand(x):
        if x <= 0.0:
            return 0.0
        lf = float(m.log_pdf(x))
        lt = float(m.log_crh(x))
        if lf == -math.inf or lt == -math.inf or math.isnan(lf):
            return 0.0
        # x f T^(a-1) / Gamma(a) assembled in log space: f and T both
        # underflow in the far upper tail that dominates for small alpha
        return math.exp(math.log(x) + lf + (a - 1.0) * lt - lg)

    return _integrate_model(integrand, m, q)


def e_theta(spec: PrhmSpec, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None) -> float:
    """``E[X_theta T^(alpha-1)] / Gamma(alpha)`` with ``T = -ln F_theta(X_theta)``."""
    return _e_theta(spec, as_alpha(alpha), q or DEFAULT_QUADRATURE)[0]


def fgce_prhm(spec: PrhmSpec, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None) -> MeasureReport:
    """FGCE of ``X_theta`` as the difference ``E_theta(alpha) - E_theta(alpha + 1)``."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    e0, r0 = _e_theta(spec, a, q)
    e1, r1 = _e_theta(spec, a + 1.0, q)
    return MeasureReport(e0 - e1, Method.QUADRATURE_X, r0 + r1)


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of evaluating one side of an identity against an independent reference."""

    name: str
    value: float
    reference: float
    residual: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name, "value": self.value, "reference": self.reference,
            "residual": self.residual, "tolerance": self.tolerance, "holds": self.holds,
        }


def _finish(check: IdentityCheck, strict: bool) -> IdentityCheck:
    if strict and not check.holds:
        raise IdentityViolation(
            f"{check.name}: residual {check.residual:.3g} exceeds {check.tolerance:.3g}"
        )
    return check


def _identity_tol(err: float) -> float:
    return max(1e-7, 50.0 * err)


def recurrence_step(
    spec: PrhmSpec, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None, *, strict: bool = False
) -> IdentityCheck:
    """``E(alpha) - E(alpha+2) - CE_alpha`` checked against a direct ``CE_{alpha+1}``."""
    from .measures import fgce

    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    e0, r0 = _e_theta(spec, a, q)
    e2, r2 = _e_theta(spec, a + 2.0, q)
    ce = fgce(prhm_model(spec), a, q)
    ref = fgce(prhm_model(spec), a + 1.0, q)
    value = e0 - e2 - ce.value
    err = r0 + r2 + ce.err_estimate + ref.err_estimate
    return _finish(
        IdentityCheck("recurrence_step", value, ref.value, abs(value - ref.value), _identity_tol(err)), strict
    )


def recurrence_n(
    spec: PrhmSpec,
    alpha: float | AlphaParam,
    n: int,
    q: Optional[QuadratureConfig] = None,
    *,
    strict: bool = False,
) -> IdentityCheck:
    """n-step recurrence for ``CE_{alpha+n}`` checked against direct quadrature (``n >= 2``)."""
    from .measures import fgce

    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise OutOfDomain(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    m = prhm_model(spec)
    ce = fgce(m, a, q)
    e = {k: _e_theta(spec, a + k, q) for k in (0, 1, n, n + 1)}
    sign = -1.0 if n % 2 else 1.0
    value = sign * ce.value + e[n][0] - e[n + 1][0] - sign * (e[0][0] - e[1][0])
    ref = fgce(m, a + n, q)
    err = ce.err_estimate + ref.err_estimate + sum(r for _, r in e.values())
    return _finish(
        IdentityCheck(f"recurrence_n[n={n}]", value, ref.value, abs(value - ref.value), _identity_tol(err)), strict
    )


def weighted_terms(
    spec: PrhmSpec, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> IdentityCheck:
    """Check that the two reversed-hazard-weighted integrals combine to ``CE_alpha(X_theta)``.

    The terms are ``int x F_theta tau_theta T^k dx`` for ``k = alpha`` and
    ``k = alpha - 1`` with ``tau_theta = theta f / F``.
    """
    from .measures import _integrate_model, fgce

    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    base, th = spec.base, spec.theta
    if base.pdf is None:
        raise MissingPdf("the weighted form needs the base pdf")
    m = prhm_model(spec)

    def term(k):
        def h(x):
            f = base.pdf(x)
            lf = base.log_cdf(x)
            if x <= 0.0 or f <= 0.0 or not lf < 0.0:
                return 0.0
            log_tau = math.log(th) + math.log(f) - lf
            return math.exp(math.log(x) + th * lf + log_tau + k * math.log(-th * lf))

        return _integrate_model(h, m, q)

    t1, r1 = term(a)
    t2, r2 = term(a - 1.0)
    g = math.gamma(a + 1.0)
    value = (-t1 + a * t2) / g
    ref = fgce(m, a, q)
    err = (r1 + a * r2) / g + ref.err_estimate
    return IdentityCheck("weighted_terms", value, ref.value, abs(value - ref.value), _identity_tol(err))


def dyn_fgce_prhm(
    spec: PrhmSpec, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """Dynamic FGCE of ``X_theta`` at ``t``.

    ``theta^alpha / Gamma(alpha+1) * int_0^t (F/F(t))^theta [-ln(F/F(t))]^alpha dx``.
    """
    from .dynamic import dyn_fgce

    if spec.base.cdf(t) <= 0.0:
        raise ZeroMass(f"base F(t) = 0 at t={t}")
    return dyn_fgce(prhm_model(spec), alpha, t, q)


def dyn_fgcre_phm(
    base: CdfModel, theta: float, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None
) -> MeasureReport:
    """Dynamic fractional CRE under proportional hazards ``(1 - F)^theta``."""
    from .dynamic import dyn_fgcre

    if base.sf(t) <= 0.0:
        raise ZeroMass(f"base survival is 0 at t={t}")
    return dyn_fgcre(phm_model(base, theta), alpha, t, q)


def _sandwich(name, value, base_value, theta, a, err):
    from .bounds import BoundReport

    rhs = theta**a * base_value
    # (F/F(t))^theta vs F/F(t): above for theta <= 1, below for theta >= 1
    direction = ">=" if theta <= 1.0 else "<="
    return BoundReport(name, value, rhs, direction, slack=max(1e-9, 10.0 * err))


def prhm_sandwich(spec: PrhmSpec, alpha: float | AlphaParam, t: float, q: Optional[QuadratureConfig] = None):
    """``CE_alpha(X_theta; t)`` against ``theta^alpha CE_alpha(X; t)``."""
    from .dynamic import dyn_fgce

    a = as_alpha(alpha)
    v = dyn_fgce_prhm(spec, a, t, q)
    b = dyn_fgce(spec.base, a, t, q)
    return _sandwich("prhm_theta_power", v.value, b.value, spec.theta, a, v.err_estimate + b.err_estimate)


def phm_sandwich(base: CdfModel, theta: float, alpha: float | AlphaParam, t: float,
                 q: Optional[QuadratureConfig] = None):
    """``CRE_alpha(X*_theta; t)`` against ``theta^alpha CRE_alpha(X; t)``."""
    from .dynamic import dyn_fgcre

    a = as_alpha(alpha)
    v = dyn_fgcre_phm(base, theta, a, t, q)
    b = dyn_fgcre(base, a, t, q)
    return _sandwich("phm_theta_power", v.value, b.value, float(theta), a, v.err_estimate + b.err_estimate)
