"""Special functions needed by the closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import OutOfDomain

EULER_GAMMA = float(np.euler_gamma)


@dataclass(frozen=True)
class SpecialFnConfig:
    tol: float = 1e-13
    max_terms: int = 64

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")


DEFAULT_SPECIAL = SpecialFnConfig()


def exp_integral(alpha: float, beta: float, cfg: SpecialFnConfig = DEFAULT_SPECIAL) -> float:
    """``E_alpha(beta) = int_1^inf exp(-beta t) t^(-alpha) dt``.

    Real order ``alpha >= 0`` is allowed (this is the generalized
    exponential integral, not only the integer-order ``E_n``). The range is
    truncated at ``T`` with ``exp(-beta T) / beta = tol * E`` where ``E``
    bounds the value from below, and ``[1, T]`` is integrated on
    geometrically growing segments.
    """
    alpha = float(alpha)
    beta = float(beta)
    if alpha < 0 or not beta > 0:
        raise OutOfDomain(f"exp_integral needs alpha >= 0 and beta > 0, got ({alpha}, {beta})")
    # lower bound of the value from the first unit of the range
    lower_bound = math.exp(-beta) * (-math.expm1(-beta)) / beta * 2.0 ** (-alpha)
    # tail beyond T is at most exp(-beta T)/beta
    T = 1.0 + max(0.0, -math.log(cfg.tol * lower_bound * beta) / beta)
    f = lambda t: math.exp(-beta * t) * t ** (-alpha)  # noqa: E731
    edges = [1.0]
    while edges[-1] < T:
        edges.append(min(T, edges[-1] * 2.0 if edges[-1] * beta > 1.0 else edges[-1] + 1.0 / beta))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += quad(f, a, b, epsabs=0.0, epsrel=cfg.tol, limit=200)[0]
    return total


def _bernoulli_even(m: int) -> list[float]:
    # B_2, B_4, ... via the exact rational recurrence
    from fractions import Fraction

    B = [Fraction(1)]
    for n in range(1, 2 * m + 1):
        B.append(-sum(math.comb(n + 1, k) * B[k] for k in range(n)) / (n + 1))
    return [float(B[2 * j]) for j in range(1, m + 1)]


_B2J = _bernoulli_even(12)


def riemann_zeta(s: float, cfg: SpecialFnConfig = DEFAULT_SPECIAL) -> float:
    """Riemann zeta function for real ``s > 1``.

    Euler-Maclaurin summation: a direct partial sum up to ``N - 1`` and
    Bernoulli corrections at ``N``. Terms are added while they shrink and
    stay above ``tol`` relative to the running total.
    """
    s = float(s)
    if not s > 1.0:
        raise OutOfDomain(f"zeta(s) needs s > 1, got {s}")
    N = 12
    head = math.fsum(k ** -s for k in range(1, N))
    total = head + N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** -s
    rising = s  # s (s+1) ... (s + 2j - 2)
    fact = 2.0  # (2j)!
    prev = math.inf
    for j, b2j in enumerate(_B2J[: cfg.max_terms], start=1):
        term = b2j / fact * rising * N ** (-s - 2 * j + 1)
        if abs(term) >= prev:
            break
        total += term
        if abs(term) < cfg.tol * abs(total):
            break
        prev = abs(term)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


def d_alpha(alpha: float) -> float:
    """``exp(int_0^1 ln(x (-ln x)^alpha) dx) = exp(-1 - alpha * gamma)``."""
    return math.exp(-1.0 - float(alpha) * EULER_GAMMA)
