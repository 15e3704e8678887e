"""Core value types shared by every module."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (
    EmptySample,
    InvalidAlpha,
    InvalidModel,
    MissingQuantile,
    OutOfDomain,
)

Fn = Callable[[float], float]


def as_alpha(alpha: "float | AlphaParam") -> float:
    """Return ``alpha`` as a float after checking ``0 < alpha < inf``."""
    if isinstance(alpha, AlphaParam):
        return alpha.value
    try:
        a = float(alpha)
    except (TypeError, ValueError) as exc:
        raise InvalidAlpha(f"alpha must be a real number, got {alpha!r}") from exc
    if not math.isfinite(a) or a <= 0.0:
        raise InvalidAlpha(f"alpha must be finite and > 0, got {alpha!r}")
    return a


@dataclass(frozen=True)
class AlphaParam:
    """Fractional order, strictly positive."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", as_alpha(self.value))

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class SupportInterval:
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self):
        lo, up = float(self.lower), float(self.upper)
        if not math.isfinite(lo) or lo < 0.0:
            raise InvalidModel(f"support lower end must be finite and >= 0, got {lo}")
        if not up > lo:
            raise InvalidModel(f"support must satisfy lower < upper, got ({lo}, {up})")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the adaptive integrators.

    ``endpoint_shrink`` is the relative margin kept from the support ends
    when probing a model on a grid (the integrators themselves never
    evaluate an endpoint).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 200
    endpoint_shrink: float = 1e-9

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not 0.0 < self.endpoint_shrink <= 1e-3:
            raise ValueError("endpoint_shrink must lie in (0, 1e-3]")

    def tolerance(self, value: float = 0.0) -> float:
        """Combined absolute/relative tolerance at magnitude ``value``."""
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUADRATURE = QuadratureConfig()


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE_X = "quadrature_x"
    QUADRATURE_U = "quadrature_u"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class MeasureReport:
    value: float
    method: Method
    err_estimate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if math.isnan(self.value):
            from .errors import IntegrationFailure

            raise IntegrationFailure("computation produced NaN")
        object.__setattr__(self, "err_estimate", abs(float(self.err_estimate)))
        object.__setattr__(self, "method", Method(self.method))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def __float__(self):
        return self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method.value,
            "err_estimate": self.err_estimate,
        }


def scalar_or_array(fn: Callable[[np.ndarray], np.ndarray]) -> Fn:
    """Wrap an array function so scalar input gives a Python float back."""

    def wrapped(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            out = fn(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    wrapped.__name__ = getattr(fn, "__name__", "wrapped")
    wrapped.__doc__ = fn.__doc__
    return wrapped


_LN2 = math.log(2.0)


def log1m_exp(lw):
    """``log(1 - exp(lw))`` for ``lw <= 0``, accurate at both ends."""
    lw = np.asarray(lw, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        return np.where(lw > -_LN2, np.log(-np.expm1(lw)), np.log1p(-np.exp(lw)))


def log_neg_log1m_exp(lw):
    """``log(-log(1 - exp(lw)))`` for ``lw <= 0``.

    For very negative ``lw`` this is ``lw + exp(lw)/2`` to double precision,
    which stays finite long after ``exp(lw)`` underflows.
    """
    lw = np.asarray(lw, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        w = np.exp(lw)
        near_one = np.log(-log1m_exp(lw))
        tiny = lw + 0.5 * w
        return np.where(lw < -30.0, tiny, near_one)


_CALLABLE_FIELDS = ("cdf", "pdf", "quantile", "isf", "sf", "log_cdf", "log_sf", "density_quantile",
                    "log_crh", "log_ch", "log_pdf")


def _array_tolerant(fn: Fn) -> Fn:
    """Let scalar-only callables accept arrays by falling back to an elementwise loop."""
    if getattr(fn, "_array_tolerant", False):
        return fn

    def wrapped(x):
        if np.ndim(x) == 0:
            return fn(x)
        try:
            return fn(x)
        except (TypeError, ValueError):
            arr = np.asarray(x, dtype=float)
            return np.array([fn(float(v)) for v in arr.ravel()], dtype=float).reshape(arr.shape)

    wrapped._array_tolerant = True
    wrapped.__name__ = getattr(fn, "__name__", "wrapped")
    wrapped.__doc__ = fn.__doc__
    return wrapped


def _log_neg_log(lg, lcomp):
    # ln(-ln G) from ln G where G <= 1/2, else from ln(1 - G)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(-np.minimum(lg, 0.0))
    return np.where(lg <= -_LN2, direct, log_neg_log1m_exp(np.minimum(lcomp, 0.0)))


@dataclass(frozen=True)
class CdfModel:
    """A distribution described through its CDF on a support interval.

    Only ``cdf`` and ``support`` are required. The log-CDF and log-survival
    callables default to ``log(cdf)`` and ``log1p(-cdf)``; supplying them
    analytically keeps the cumulative (reversed) hazard accurate deep in the
    tails, where ``1 - cdf`` rounds to zero.

    ``log_crh`` and ``log_ch`` are the logarithms of the cumulative reversed
    hazard ``-ln F`` and of the cumulative hazard ``-ln(1 - F)``. By default
    each is taken from whichever of ``log_cdf`` / ``log_sf`` is accurate in
    the region: ``ln(-ln F)`` is computed from ``log_sf`` where ``F > 1/2``,
    which keeps ``(-ln F)^alpha`` finite far beyond the point where
    ``-ln F`` itself underflows.

    ``log_pdf`` defaults to ``log(pdf)``; laws whose density underflows
    while the tail still matters (``alpha`` near 0) should supply it.

    ``breakpoints`` lists interior points where the CDF jumps or has a kink;
    integrators split there.
    """

    cdf: Fn
    support: SupportInterval = field(default_factory=SupportInterval)
    pdf: Optional[Fn] = None
    quantile: Optional[Fn] = None
    isf: Optional[Fn] = None
    sf: Optional[Fn] = None
    log_cdf: Optional[Fn] = None
    log_sf: Optional[Fn] = None
    density_quantile: Optional[Fn] = None
    log_crh: Optional[Fn] = None
    log_ch: Optional[Fn] = None
    log_pdf: Optional[Fn] = None
    mean: Optional[float] = None
    breakpoints: tuple = ()
    name: str = ""

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        for name in _CALLABLE_FIELDS:
            fn = getattr(self, name)
            if fn is not None:
                set_(name, _array_tolerant(fn))
        cdf = self.cdf
        if self.sf is None:
            set_("sf", scalar_or_array(lambda x: 1.0 - np.asarray(cdf(x))))
        if self.log_cdf is None:
            set_("log_cdf", scalar_or_array(lambda x: np.log(np.asarray(cdf(x)))))
        if self.log_sf is None:
            sf = self.sf
            set_("log_sf", scalar_or_array(lambda x: np.log(np.asarray(sf(x)))))
        if self.log_crh is None:
            lc, ls = self.log_cdf, self.log_sf
            set_("log_crh", scalar_or_array(lambda x: _log_neg_log(np.asarray(lc(x)), np.asarray(ls(x)))))
        if self.log_ch is None:
            lc, ls = self.log_cdf, self.log_sf
            set_("log_ch", scalar_or_array(lambda x: _log_neg_log(np.asarray(ls(x)), np.asarray(lc(x)))))
        if self.log_pdf is None and self.pdf is not None:
            f = self.pdf

            def log_pdf(x):
                with np.errstate(divide="ignore"):
                    return np.log(np.asarray(f(x), dtype=float))

            set_("log_pdf", scalar_or_array(log_pdf))
        if self.isf is None and self.quantile is not None:
            q = self.quantile
            set_("isf", lambda v: q(1.0 - np.asarray(v)) if np.ndim(v) else q(1.0 - v))
        if self.density_quantile is None and self.quantile is not None and self.pdf is not None:
            q, f = self.quantile, self.pdf
            set_("density_quantile", lambda u: f(q(u)))
        set_("breakpoints", tuple(sorted(float(b) for b in self.breakpoints)))

    @property
    def lower(self) -> float:
        return self.support.lower

    @property
    def upper(self) -> float:
        return self.support.upper

    def reversed_hazard(self, x):
        """f(x)/F(x)."""
        if self.pdf is None:
            from .errors import MissingPdf

            raise MissingPdf(f"model {self.name or '<anonymous>'} has no pdf")
        return self.pdf(x) / self.cdf(x)

    def cumulative_reversed_hazard(self, x):
        """-ln F(x)."""
        return -self.log_cdf(x)

    def cumulative_hazard(self, x):
        """-ln(1 - F(x))."""
        return -self.log_sf(x)


def mass_point(model: CdfModel, p: float, upper_tail: bool = False) -> float:
    """Point ``x`` with ``F(x) = p`` (or ``1 - F(x) = p`` when ``upper_tail``)."""
    if upper_tail and model.isf is not None:
        return float(model.isf(p))
    if not upper_tail and model.quantile is not None:
        return float(model.quantile(p))
    target = (lambda x: model.sf(x) - p) if upper_tail else (lambda x: model.cdf(x) - p)
    lo = model.lower
    hi = model.upper
    if not math.isfinite(hi):
        hi = max(1.0, lo + 1.0)
        while (model.sf(hi) > p) if upper_tail else (model.cdf(hi) < p):
            hi = lo + 2.0 * (hi - lo)
            if hi > 1e300:
                raise MissingQuantile("could not bracket the requested probability")
    return float(brentq(target, lo, hi, xtol=1e-14 * max(1.0, abs(hi)), maxiter=500))


def probe_grid(model: CdfModel, n: int = 64, shrink: float = 1e-9) -> np.ndarray:
    """Interior evaluation grid used for model validation and order checks."""
    lo, up = model.lower, model.upper
    if model.quantile is not None:
        u = np.linspace(0.0, 1.0, n + 2)[1:-1]
        grid = np.asarray(model.quantile(u), dtype=float)
    elif math.isfinite(up):
        width = up - lo
        grid = np.linspace(lo + shrink * width, up - shrink * width, n)
    else:
        grid = lo + np.geomspace(1e-3, 1e3, n)
    return np.unique(grid[np.isfinite(grid)])


def check_monotone(model: CdfModel, n: int = 64) -> None:
    """Raise InvalidModel if the CDF leaves [0, 1] or decreases on a probe grid."""
    grid = probe_grid(model, n)
    vals = np.array([model.cdf(x) for x in grid])
    if np.any(~np.isfinite(vals)) or np.any(vals < -1e-12) or np.any(vals > 1 + 1e-12):
        raise InvalidModel(f"cdf of {model.name or 'model'} leaves [0, 1] on the probe grid")
    if np.any(np.diff(vals) < -1e-12):
        i = int(np.argmax(np.diff(vals) < -1e-12))
        raise InvalidModel(
            f"cdf of {model.name or 'model'} decreases between x={grid[i]:.6g} and x={grid[i + 1]:.6g}"
        )


def validate_model(model: CdfModel, n: int = 64, rtol: float = 1e-5) -> None:
    """Full structural check of a model.

    Besides monotonicity this compares the pdf against a central difference
    of the cdf and checks ``cdf(quantile(u)) == u``.
    """
    check_monotone(model, n)
    grid = probe_grid(model, n)
    if model.pdf is not None:
        for x in grid:
            if any(abs(x - b) < 1e-6 for b in model.breakpoints):
                continue
            h = min(1e-6 * max(1.0, abs(x)), 0.5 * (x - model.lower), 0.5 * (model.upper - x))
            if h <= 0:
                continue
            fd = (model.cdf(x + h) - model.cdf(x - h)) / (2 * h)
            f = model.pdf(x)
            if abs(fd - f) > rtol * max(1.0, abs(f)) * 10:
                raise InvalidModel(f"pdf disagrees with cdf derivative at x={x:.6g}: {f} vs {fd}")
    if model.quantile is not None and not model.breakpoints:
        for u in np.linspace(0.02, 0.98, 25):
            back = model.cdf(model.quantile(u))
            if abs(back - u) > 1e-9:
                raise InvalidModel(f"cdf(quantile({u:.3f})) = {back}, expected {u}")


@dataclass(frozen=True)
class Sample:
    """Order statistics of an observed sample."""

    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size == 0:
            raise EmptySample("sample must contain at least one value")
        if not np.all(np.isfinite(v)):
            raise OutOfDomain("sample values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "Sample":
        return cls(np.asarray(values, dtype=float))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    @property
    def spacings(self) -> np.ndarray:
        """V_1 = X_(1), V_(k+1) = X_(k+1) - X_(k)."""
        return np.diff(self.values, prepend=0.0)

    def shifted(self, b: float) -> "Sample":
        return Sample(self.values + b)

    def scaled(self, c: float) -> "Sample":
        return Sample(self.values * c)
