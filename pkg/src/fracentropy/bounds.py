"""Inequalities satisfied by the fractional generalized cumulative entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import fftconvolve

from .errors import MissingPdf, OutOfDomain, UnboundedSupport
from .measures import _integrate_model, cumulative_entropy, differential_entropy, fgce
from .model import (
    DEFAULT_QUADRATURE,
    AlphaParam,
    CdfModel,
    QuadratureConfig,
    as_alpha,
    mass_point,
)
from .special import d_alpha

__all__ = [
    "BoundReport",
    "SumCdf",
    "convolve_cdf",
    "fgce_on_grid",
    "bound_sum_max",
    "bound_power_of_ce",
    "bound_triplet",
]


@dataclass(frozen=True)
class BoundReport:
    """``lhs <direction> rhs`` evaluated numerically; ``slack`` absorbs quadrature error."""

    name: str
    lhs: float
    rhs: float
    direction: str
    slack: float = 1e-9

    def __post_init__(self):
        if self.direction not in ("<=", ">="):
            raise ValueError(f"direction must be '<=' or '>=', got {self.direction!r}")

    @property
    def holds(self) -> bool:
        if self.direction == "<=":
            return self.lhs <= self.rhs + self.slack
        return self.lhs >= self.rhs - self.slack

    @property
    def margin(self) -> float:
        """Signed distance by which the inequality is satisfied (negative when violated)."""
        return self.rhs - self.lhs if self.direction == "<=" else self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {
            "name": self.name, "lhs": self.lhs, "rhs": self.rhs,
            "direction": self.direction, "slack": self.slack, "holds": self.holds,
        }


# ---------------------------------------------------------------------------
# sums of independent variables


@dataclass(frozen=True)
class SumCdf:
    """CDF of ``X + Y`` tabulated on the uniform grid ``z``."""

    z: np.ndarray
    cdf: np.ndarray
    step: float


def _effective_range(model: CdfModel, tail_mass: float) -> tuple[float, float]:
    lo, up = model.lower, model.upper
    if not math.isfinite(up) or model.sf(up) > 0.0:
        up = mass_point(model, tail_mass, upper_tail=True)
    return lo, up


def convolve_cdf(mX: CdfModel, mY: CdfModel, n: int = 2**14, tail_mass: float = 1e-12) -> SumCdf:
    """CDF of the sum of independent ``X`` and ``Y`` on a grid of about ``n`` points.

    ``F_S(z) = int F_X(z - y) dF_Y(y)`` is evaluated with a midpoint rule on
    cells of width ``h`` using the exact cell masses of ``Y``, so singular
    densities are handled and piecewise-linear integrands are integrated
    exactly. Unbounded supports are cut where the survival drops below
    ``tail_mass``.
    """
    lx, ux = _effective_range(mX, tail_mass)
    ly, uy = _effective_range(mY, tail_mass)
    span = (ux - lx) + (uy - ly)
    if not span > 0:
        raise OutOfDomain("degenerate supports")
    m_y = max(1, int(round(n * (uy - ly) / span)))
    h = (uy - ly) / m_y
    m_x = int(math.ceil((ux - lx) / h))
    cells_y = np.diff(np.asarray(mY.cdf(ly + h * np.arange(m_y + 1)), dtype=float))
    # F_X at half-cell offsets (k - j - 1/2) h, k - j = 1 .. m_x + m_y
    k = np.arange(1, m_x + m_y + 1)
    fx_mid = np.asarray(mX.cdf(lx + (k - 0.5) * h), dtype=float)
    conv = fftconvolve(cells_y, fx_mid)[: m_x + m_y]
    cdf = np.concatenate([[0.0], np.clip(conv, 0.0, 1.0)])
    z = lx + ly + h * np.arange(m_x + m_y + 1)
    return SumCdf(z, cdf, h)


def fgce_on_grid(z: np.ndarray, cdf: np.ndarray, alpha: float) -> tuple[float, float]:
    """Trapezoid value of the FGCE of a tabulated CDF and a step-halving error estimate."""
    a = as_alpha(alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = np.log(cdf)
        w = np.where((cdf > 0) & (cdf < 1), cdf * (-lg) ** a, 0.0)
    fine = np.trapezoid(w, z)
    coarse = np.trapezoid(w[::2], z[::2]) if len(z) > 4 else fine
    g = math.gamma(a + 1.0)
    return fine / g, abs(fine - coarse) / g


def bound_sum_max(
    mX: CdfModel, mY: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None, *,
    n: int = 2**14, tail_mass: float = 1e-12,
) -> BoundReport:
    """``CE_alpha(X + Y) >= max(CE_alpha(X), CE_alpha(Y))`` for independent ``X, Y``."""
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    cx = fgce(mX, a, q)
    cy = fgce(mY, a, q)
    s = convolve_cdf(mX, mY, n, tail_mass)
    cs, err = fgce_on_grid(s.z, s.cdf, a)
    # a CDF error of tail_mass is raised to the power alpha by (-ln F)^alpha near F = 1
    trunc = (s.z[-1] - s.z[0]) * (2.0 * tail_mass) ** min(a, 1.0)
    slack = max(1e-9, 10.0 * err + cx.err_estimate + cy.err_estimate + trunc)
    return BoundReport("sum_max", cs, max(cx.value, cy.value), ">=", slack=slack)


# ---------------------------------------------------------------------------
# bounded-support bounds


def bound_power_of_ce(
    model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> list[BoundReport]:
    """``CE_alpha`` against ``L^(1-alpha)/Gamma(alpha+1) CE^alpha`` and its normalized form.

    ``L`` is the support length. The bound is an upper one for
    ``alpha <= 1`` and a lower one for ``alpha >= 1``.
    """
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    if not model.support.bounded:
        raise UnboundedSupport("the power-of-CE bound needs a bounded support")
    length = model.support.length
    g = math.gamma(a + 1.0)
    ce_a = fgce(model, a, q)
    ce = cumulative_entropy(model, q)
    coef = length ** (1.0 - a) / g
    direction = "<=" if a <= 1.0 else ">="
    rel = ce_a.err_estimate / max(ce_a.value, 1e-300) + a * ce.err_estimate / max(ce.value, 1e-300)
    main = BoundReport("power_of_ce", ce_a.value, coef * ce.value**a, direction,
                       slack=max(1e-9, 10.0 * rel * ce_a.value))
    nce = ce_a.value / ce.value**a
    norm = BoundReport("power_of_ce_normalized", nce, coef, direction, slack=max(1e-9, 10.0 * rel * nce))
    return [main, norm]


def bound_triplet(
    model: CdfModel, alpha: float | AlphaParam, q: Optional[QuadratureConfig] = None
) -> list[BoundReport]:
    """Entropy, ``F(1-F)^alpha`` and ``(alpha/e)^alpha`` bounds.

    * ``entropy_exp``: ``CE_alpha >= D_alpha exp(H) / Gamma(alpha+1)`` with
      ``H`` the differential entropy. Jensen's inequality applied to
      ``ln E[F (-ln F)^alpha / f(X)]`` gives exactly this form.
    * ``one_minus``: ``CE_alpha >= (1/Gamma(alpha+1)) int F (1-F)^alpha``.
    * ``psi_form``: the same right-hand side written as ``E[psi_alpha(X)]``,
      ``psi_alpha(x) = (1/Gamma(alpha+1)) int_x^l (1-F)^alpha``.
    * ``alpha_over_e``: ``CE_alpha <= L/Gamma(alpha+1) (alpha/e)^alpha`` for
      ``alpha <= 1`` and bounded support of length ``L``.
    """
    a = as_alpha(alpha)
    q = q or DEFAULT_QUADRATURE
    if model.pdf is None:
        raise MissingPdf("the entropy bound needs the model pdf")
    g = math.gamma(a + 1.0)
    ce = fgce(model, a, q)
    slack = max(1e-9, 10.0 * ce.err_estimate)
    out = []

    h = differential_entropy(model, q)
    out.append(BoundReport("entropy_exp", ce.value, d_alpha(a) * math.exp(h) / g, ">=", slack=slack))

    def one_minus(x):
        lf = model.log_cdf(x)
        return 0.0 if lf == -math.inf else math.exp(lf) * (-math.expm1(min(lf, 0.0))) ** a

    b_val, b_err = _integrate_model(one_minus, model, q)
    out.append(BoundReport("one_minus", ce.value, b_val / g, ">=", slack=slack + b_err))

    if model.support.bounded:
        psi = _expected_psi(model, a, q)
        out.append(BoundReport("psi_form", ce.value, psi, ">=", slack=slack))
        if a <= 1.0:
            out.append(BoundReport("alpha_over_e", ce.value, model.support.length / g * (a / math.e) ** a,
                                   "<=", slack=slack))
    return out


def _expected_psi(model: CdfModel, a: float, q: QuadratureConfig) -> float:
    """``E[psi_alpha(X)]`` by nested quadrature."""
    g = math.gamma(a + 1.0)

    def psi(x):
        v, _ = _integrate_model(lambda y: model.sf(y) ** a, model, q, a=x)
        return v / g

    val, _ = _integrate_model(lambda x: psi(x) * model.pdf(x) if model.pdf(x) > 0 else 0.0, model, q)
    return val
