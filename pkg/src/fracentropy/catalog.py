"""Parametric distributions with closed-form cumulative entropies.

Each variant builds a :class:`~fracentropy.model.CdfModel` with analytic
pdf, quantile, and log-CDF / log-survival functions, and knows its
closed-form fractional generalized cumulative entropy where one exists.

Distributions are addressable by short strings, e.g. ``"uniform:l=1"`` or
``"frechet:b=1,eta=2"`` (see :func:`parse_distribution`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import ClassVar

import numpy as np

from .errors import MissingQuantile, NoClosedForm, OutOfDomain
from .model import (
    AlphaParam,
    CdfModel,
    MeasureReport,
    Method,
    Sample,
    SupportInterval,
    as_alpha,
    log1m_exp,
    scalar_or_array as vec,
)
from .rng import make_rng
from .special import exp_integral, riemann_zeta

__all__ = [
    "CatalogDistribution",
    "Uniform",
    "Power",
    "Frechet",
    "BoundedFrechet",
    "HalfLogistic",
    "Exponential",
    "DiscreteUniform",
    "BirthDeathFP",
    "GeomCountingFC",
    "to_cdf_model",
    "closed_form_fgce",
    "closed_form_nfgce",
    "catalog_sample",
    "parse_distribution",
    "CATALOG",
]


def _require_positive(obj, *names):
    for name in names:
        v = getattr(obj, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise OutOfDomain(f"{type(obj).__name__}: parameter {name} must be > 0, got {v!r}")


class CatalogDistribution:
    """Base class of the catalog variants."""

    key: ClassVar[str] = ""

    def model(self) -> CdfModel:
        raise NotImplementedError

    def closed_form_fgce(self, alpha: float) -> float:
        raise NoClosedForm(f"{self.spec()} has no closed-form FGCE")

    def closed_form_nfgce(self, alpha: float) -> float:
        return self.closed_form_fgce(alpha) / self.closed_form_fgce(1.0) ** alpha

    def spec(self) -> str:
        params = ",".join(f"{f.name}={getattr(self, f.name):g}" for f in fields(self))
        return f"{self.key}:{params}" if params else self.key


@dataclass(frozen=True)
class Uniform(CatalogDistribution):
    l: float = 1.0

    key: ClassVar[str] = "uniform"

    def __post_init__(self):
        _require_positive(self, "l")

    def model(self) -> CdfModel:
        l = self.l
        cdf = vec(lambda x: np.clip(x / l, 0.0, 1.0))
        return CdfModel(
            cdf=cdf,
            support=SupportInterval(0.0, l),
            pdf=vec(lambda x: np.where((x >= 0) & (x <= l), 1.0 / l, 0.0)),
            quantile=vec(lambda u: u * l),
            isf=vec(lambda v: (1.0 - v) * l),
            sf=vec(lambda x: np.clip(1.0 - x / l, 0.0, 1.0)),
            log_cdf=vec(lambda x: np.log(np.clip(x / l, 0.0, 1.0))),
            log_sf=vec(lambda x: np.log1p(-np.clip(x / l, 0.0, 1.0))),
            density_quantile=vec(lambda u: np.full_like(u, 1.0 / l)),
            mean=l / 2.0,
            name=self.spec(),
        )

    def closed_form_fgce(self, alpha):
        return self.l / 2.0 ** (alpha + 1.0)

    def closed_form_nfgce(self, alpha):
        return (self.l / 2.0) ** (1.0 - alpha)


@dataclass(frozen=True)
class Power(CatalogDistribution):
    """``F(x) = (x/l)^b`` on ``[0, l]``."""

    b: float = 1.0
    l: float = 1.0

    key: ClassVar[str] = "power"

    def __post_init__(self):
        _require_positive(self, "b", "l")

    def model(self) -> CdfModel:
        b, l = self.b, self.l

        def log_cdf(x):
            return np.where(x <= 0, -np.inf, b * np.log(np.clip(x / l, 0.0, 1.0)))

        return CdfModel(
            cdf=vec(lambda x: np.clip(x / l, 0.0, 1.0) ** b),
            support=SupportInterval(0.0, l),
            pdf=vec(lambda x: np.where((x > 0) & (x <= l), b / l * np.clip(x / l, 0.0, 1.0) ** (b - 1.0), 0.0)),
            quantile=vec(lambda u: l * u ** (1.0 / b)),
            isf=vec(lambda v: l * np.exp(np.log1p(-v) / b)),
            sf=vec(lambda x: -np.expm1(log_cdf(x))),
            log_cdf=vec(log_cdf),
            log_sf=vec(lambda x: log1m_exp(log_cdf(x))),
            density_quantile=vec(lambda u: b / l * u ** ((b - 1.0) / b)),
            mean=l * b / (b + 1.0),
            name=self.spec(),
        )

    def closed_form_fgce(self, alpha):
        b = self.b
        return self.l * b**alpha / (b + 1.0) ** (alpha + 1.0)

    def closed_form_nfgce(self, alpha):
        return (self.l / (self.b + 1.0)) ** (1.0 - alpha)


@dataclass(frozen=True)
class Frechet(CatalogDistribution):
    """``F(x) = exp(-b x^-eta)`` on ``(0, inf)``."""

    b: float = 1.0
    eta: float = 1.0

    key: ClassVar[str] = "frechet"

    def __post_init__(self):
        _require_positive(self, "b", "eta")

    def model(self) -> CdfModel:
        b, eta = self.b, self.eta

        def log_cdf(x):
            return np.where(x <= 0, -np.inf, -b * np.where(x > 0, x, 1.0) ** -eta)

        def pdf(x):
            xp = np.where(x > 0, x, 1.0)
            return np.where(x > 0, b * eta * xp ** (-eta - 1.0) * np.exp(log_cdf(x)), 0.0)

        def log_pdf(x):
            xp = np.where(x > 0, x, 1.0)
            return np.where(x > 0, math.log(b * eta) - (eta + 1.0) * np.log(xp) + log_cdf(x), -np.inf)

        mean = b ** (1.0 / eta) * math.gamma(1.0 - 1.0 / eta) if eta > 1 else None
        return CdfModel(
            cdf=vec(lambda x: np.exp(log_cdf(x))),
            support=SupportInterval(0.0, math.inf),
            pdf=vec(pdf),
            log_pdf=vec(log_pdf),
            quantile=vec(lambda u: (b / -np.log(u)) ** (1.0 / eta)),
            isf=vec(lambda v: (b / -np.log1p(-v)) ** (1.0 / eta)),
            sf=vec(lambda x: -np.expm1(log_cdf(x))),
            log_cdf=vec(log_cdf),
            log_sf=vec(lambda x: log1m_exp(log_cdf(x))),
            mean=mean,
            name=self.spec(),
        )

    def _check(self, alpha):
        if not 1.0 / self.eta < alpha:
            raise OutOfDomain(
                f"Frechet(eta={self.eta:g}) has a finite FGCE only for alpha > 1/eta = {1 / self.eta:g}; got {alpha:g}"
            )

    def closed_form_fgce(self, alpha):
        self._check(alpha)
        b, eta = self.b, self.eta
        return b ** (1.0 / eta) / (eta * math.gamma(alpha + 1.0)) * math.gamma(alpha - 1.0 / eta)

    def closed_form_nfgce(self, alpha):
        self._check(alpha)
        if alpha > 1.0:
            raise OutOfDomain("the Frechet normalized closed form holds for 1/eta < alpha <= 1")
        b, eta = self.b, self.eta
        return (
            b ** ((1.0 - alpha) / eta)
            * math.gamma(alpha - 1.0 / eta)
            / (eta ** (1.0 - alpha) * math.gamma(alpha + 1.0) * math.gamma(1.0 - 1.0 / eta) ** alpha)
        )


@dataclass(frozen=True)
class BoundedFrechet(CatalogDistribution):
    """``F(x) = exp(b (1 - l/x))`` on ``(0, l]``."""

    b: float = 1.0
    l: float = 1.0

    key: ClassVar[str] = "bounded-frechet"

    def __post_init__(self):
        _require_positive(self, "b", "l")

    def model(self) -> CdfModel:
        b, l = self.b, self.l

        def log_cdf(x):
            xp = np.clip(x, 1e-300, l)
            return np.where(x <= 0, -np.inf, b * (1.0 - l / xp))

        def pdf(x):
            xp = np.where(x > 0, x, 1.0)
            return np.where((x > 0) & (x <= l), b * l / xp**2 * np.exp(log_cdf(x)), 0.0)

        return CdfModel(
            cdf=vec(lambda x: np.exp(log_cdf(x))),
            support=SupportInterval(0.0, l),
            pdf=vec(pdf),
            quantile=vec(lambda u: b * l / (b - np.log(u))),
            isf=vec(lambda v: b * l / (b - np.log1p(-v))),
            sf=vec(lambda x: -np.expm1(log_cdf(x))),
            log_cdf=vec(log_cdf),
            log_sf=vec(lambda x: log1m_exp(log_cdf(x))),
            mean=l * (1.0 - math.exp(b) * exp_integral(2.0, b)),
            name=self.spec(),
        )

    def _a(self, alpha):
        b = self.b
        return math.exp(b) * (alpha + b) * exp_integral(alpha, b) - 1.0

    def closed_form_fgce(self, alpha):
        return self.l * self.b / alpha * self._a(alpha)

    def closed_form_nfgce(self, alpha):
        return (self.l * self.b) ** (1.0 - alpha) / alpha * self._a(alpha) / self._a(1.0) ** alpha


@dataclass(frozen=True)
class HalfLogistic(CatalogDistribution):
    """``F(x) = (1 - e^-2x) / (1 + e^-2x) = tanh x`` on ``[0, inf)``."""

    key: ClassVar[str] = "half-logistic"

    def model(self) -> CdfModel:
        def log_cdf(x):
            xp = np.maximum(x, 0.0)
            e = np.exp(-2.0 * xp)
            return np.where(x <= 0, -np.inf, log1m_exp(-2.0 * xp) - np.log1p(e))

        def log_sf(x):
            xp = np.maximum(x, 0.0)
            return np.where(x <= 0, 0.0, math.log(2.0) - 2.0 * xp - np.log1p(np.exp(-2.0 * xp)))

        def pdf(x):
            e = np.exp(-2.0 * np.maximum(x, 0.0))
            return np.where(x >= 0, 4.0 * e / (1.0 + e) ** 2, 0.0)

        def log_pdf(x):
            xp = np.maximum(x, 0.0)
            return np.where(x >= 0, math.log(4.0) - 2.0 * xp - 2.0 * np.log1p(np.exp(-2.0 * xp)), -np.inf)

        return CdfModel(
            cdf=vec(lambda x: np.tanh(np.maximum(x, 0.0))),
            support=SupportInterval(0.0, math.inf),
            pdf=vec(pdf),
            log_pdf=vec(log_pdf),
            quantile=vec(np.arctanh),
            isf=vec(lambda v: 0.5 * (np.log(2.0 - v) - np.log(v))),
            sf=vec(lambda x: np.exp(log_sf(x))),
            log_cdf=vec(log_cdf),
            log_sf=vec(log_sf),
            density_quantile=vec(lambda u: 1.0 - u * u),
            mean=math.log(2.0),
            name=self.spec(),
        )

    def closed_form_fgce(self, alpha):
        return riemann_zeta(alpha + 1.0) / 2.0 ** (alpha + 1.0)


@dataclass(frozen=True)
class Exponential(CatalogDistribution):
    lam: float = 1.0

    key: ClassVar[str] = "exponential"

    def __post_init__(self):
        _require_positive(self, "lam")

    def model(self) -> CdfModel:
        lam = self.lam

        def log_sf(x):
            return -lam * np.maximum(x, 0.0)

        return CdfModel(
            cdf=vec(lambda x: -np.expm1(log_sf(x))),
            support=SupportInterval(0.0, math.inf),
            pdf=vec(lambda x: np.where(x >= 0, lam * np.exp(log_sf(x)), 0.0)),
            log_pdf=vec(lambda x: np.where(x >= 0, math.log(lam) + log_sf(x), -np.inf)),
            quantile=vec(lambda u: -np.log1p(-u) / lam),
            isf=vec(lambda v: -np.log(v) / lam),
            sf=vec(lambda x: np.exp(log_sf(x))),
            log_cdf=vec(lambda x: np.where(x <= 0, -np.inf, log1m_exp(log_sf(x)))),
            log_sf=vec(log_sf),
            density_quantile=vec(lambda u: lam * (1.0 - u)),
            mean=1.0 / lam,
            name=self.spec(),
        )

    def closed_form_fgce(self, alpha):
        # int_0^1 u (-ln u)^a / (1-u) du = Gamma(a+1) (zeta(a+1) - 1)
        return (riemann_zeta(alpha + 1.0) - 1.0) / self.lam


@dataclass(frozen=True)
class DiscreteUniform(CatalogDistribution):
    """Uniform law on ``{1, ..., n}``; integrations run over ``(0, n)``."""

    n: int = 2

    key: ClassVar[str] = "discrete-uniform"

    def __post_init__(self):
        n = self.n
        if isinstance(n, float) and n.is_integer():
            object.__setattr__(self, "n", int(n))
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise OutOfDomain(f"DiscreteUniform: n must be an integer >= 1, got {n!r}")

    def model(self) -> CdfModel:
        n = self.n
        cdf = vec(lambda x: np.clip(np.floor(x), 0, n) / n)
        return CdfModel(
            cdf=cdf,
            support=SupportInterval(0.0, float(n)),
            quantile=vec(lambda u: np.clip(np.ceil(u * n), 1, n)),
            mean=(n + 1) / 2.0,
            breakpoints=tuple(float(k) for k in range(1, n)),
            name=self.spec(),
        )

    def closed_form_fgce(self, alpha):
        n = self.n
        k = np.arange(1, n, dtype=float)
        p = k / n
        return float(np.sum(p * (-np.log(p)) ** alpha)) / math.gamma(alpha + 1.0)

    def spec(self):
        return f"{self.key}:n={self.n}"


def _powered(base: CdfModel, theta: float, name: str) -> CdfModel:
    from .prhm import PrhmSpec, prhm_model

    m = prhm_model(PrhmSpec(base, theta))
    return CdfModel(**{**{f.name: getattr(m, f.name) for f in fields(m)}, "name": name})


@dataclass(frozen=True)
class BirthDeathFP(CatalogDistribution):
    """First-passage law of a linear birth-death process (``lam < mu``), raised to ``theta``."""

    lam: float = 1.0
    mu: float = 2.0
    theta: float = 1.0

    key: ClassVar[str] = "birth-death"

    def __post_init__(self):
        _require_positive(self, "lam", "mu", "theta")
        if not self.lam < self.mu:
            raise OutOfDomain(f"BirthDeathFP requires lam < mu, got lam={self.lam}, mu={self.mu}")

    def base_model(self) -> CdfModel:
        lam, mu = self.lam, self.mu
        d = mu - lam

        # with w = exp(-(mu - lam) x): G = mu (1 - w) / (mu - lam w)
        def log_cdf(x):
            xp = np.maximum(x, 0.0)
            w = np.exp(-d * xp)
            return np.where(x <= 0, -np.inf, log1m_exp(-d * xp) - np.log1p(-lam / mu * w))

        def log_sf(x):
            xp = np.maximum(x, 0.0)
            w = np.exp(-d * xp)
            return np.where(x <= 0, 0.0, -d * xp + math.log(d) - np.log(mu - lam * w))

        def pdf(x):
            xp = np.maximum(x, 0.0)
            w = np.exp(-d * xp)
            return np.where(x >= 0, mu * d * d * w / (mu - lam * w) ** 2, 0.0)

        def log_pdf(x):
            xp = np.maximum(x, 0.0)
            w = np.exp(-d * xp)
            return np.where(x >= 0, math.log(mu * d * d) - d * xp - 2.0 * np.log(mu - lam * w), -np.inf)

        def quantile(u):
            return -np.log(mu * (1.0 - u) / (mu - lam * u)) / d

        def isf(v):
            # 1 - G = v  <=>  w d / (mu - lam w) = v
            return -np.log(mu * v / (d + lam * v)) / d

        return CdfModel(
            cdf=vec(lambda x: np.exp(log_cdf(x))),
            support=SupportInterval(0.0, math.inf),
            pdf=vec(pdf),
            log_pdf=vec(log_pdf),
            quantile=vec(quantile),
            isf=vec(isf),
            sf=vec(lambda x: np.exp(log_sf(x))),
            log_cdf=vec(log_cdf),
            log_sf=vec(log_sf),
            name=f"birth-death-base:lam={lam:g},mu={mu:g}",
        )

    def model(self) -> CdfModel:
        return _powered(self.base_model(), self.theta, self.spec())


@dataclass(frozen=True)
class GeomCountingFC(CatalogDistribution):
    """``F(x) = (lam x / (1 + lam x))^theta``: first crossing of a geometric counting process."""

    lam: float = 1.0
    theta: float = 1.0

    key: ClassVar[str] = "geom-counting"

    def __post_init__(self):
        _require_positive(self, "lam", "theta")

    def base_model(self) -> CdfModel:
        lam = self.lam

        def log_cdf(x):
            xp = np.maximum(x, 0.0)
            return np.where(x <= 0, -np.inf, -np.log1p(1.0 / (lam * np.where(x > 0, xp, 1.0))))

        return CdfModel(
            cdf=vec(lambda x: np.where(x <= 0, 0.0, lam * x / (1.0 + lam * np.maximum(x, 0.0)))),
            support=SupportInterval(0.0, math.inf),
            pdf=vec(lambda x: np.where(x >= 0, lam / (1.0 + lam * np.maximum(x, 0.0)) ** 2, 0.0)),
            quantile=vec(lambda u: u / (lam * (1.0 - u))),
            isf=vec(lambda v: (1.0 - v) / (lam * v)),
            sf=vec(lambda x: 1.0 / (1.0 + lam * np.maximum(x, 0.0))),
            log_cdf=vec(log_cdf),
            log_sf=vec(lambda x: -np.log1p(lam * np.maximum(x, 0.0))),
            name=f"geom-counting-base:lam={lam:g}",
        )

    def model(self) -> CdfModel:
        return _powered(self.base_model(), self.theta, self.spec())


CATALOG: dict[str, type[CatalogDistribution]] = {
    cls.key: cls
    for cls in (Uniform, Power, Frechet, BoundedFrechet, HalfLogistic, Exponential,
                DiscreteUniform, BirthDeathFP, GeomCountingFC)
}

_ALIASES = {"lambda": "lam", "l": "l", "n": "n"}


def parse_distribution(text: str) -> CatalogDistribution:
    """Parse ``"name:key=value,..."`` into a catalog distribution.

    >>> parse_distribution("frechet:b=1,eta=2")
    Frechet(b=1.0, eta=2.0)
    """
    name, _, params = text.strip().partition(":")
    name = name.strip().lower().replace("_", "-")
    if name not in CATALOG:
        raise OutOfDomain(f"unknown distribution {name!r}; choose from {sorted(CATALOG)}")
    cls = CATALOG[name]
    kwargs = {}
    for item in filter(None, (p.strip() for p in params.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise OutOfDomain(f"malformed parameter {item!r} in {text!r}")
        key = _ALIASES.get(key.strip(), key.strip())
        try:
            kwargs[key] = int(value) if cls is DiscreteUniform and key == "n" else float(value)
        except ValueError as exc:
            raise OutOfDomain(f"parameter {key} must be numeric, got {value!r}") from exc
    valid = {f.name for f in fields(cls)}
    unknown = set(kwargs) - valid
    if unknown:
        raise OutOfDomain(f"{name} does not take parameters {sorted(unknown)}; expected {sorted(valid)}")
    return cls(**kwargs)


def to_cdf_model(d: CatalogDistribution | str) -> CdfModel:
    if isinstance(d, str):
        d = parse_distribution(d)
    return d.model()


def closed_form_fgce(d: CatalogDistribution, alpha: float | AlphaParam) -> MeasureReport:
    a = as_alpha(alpha)
    return MeasureReport(d.closed_form_fgce(a), Method.CLOSED_FORM, 0.0)


def closed_form_nfgce(d: CatalogDistribution, alpha: float | AlphaParam) -> MeasureReport:
    a = as_alpha(alpha)
    return MeasureReport(d.closed_form_nfgce(a), Method.CLOSED_FORM, 0.0)


def catalog_sample(d: CatalogDistribution, n: int, seed: int, stream: int = 0) -> Sample:
    """``n`` draws by inverse transform from the Philox substream ``(seed, stream)``."""
    m = d.model()
    if m.quantile is None:
        raise MissingQuantile(f"{d.spec()} has no quantile function to sample from")
    u = make_rng(seed, stream).random(int(n))
    return Sample(np.asarray(m.quantile(u), dtype=float))
