"""Adaptive integration on finite and half-infinite intervals.

Finite pieces go to QUADPACK (``scipy.integrate.quad``). A half-infinite
tail ``[x0, inf)`` is integrated in the logarithmic coordinate ``s = ln x``
over unit panels; panel contributions of a power-law tail form a geometric
sequence, which gives both a remainder estimate and a divergence test.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional

from scipy.integrate import quad

from .errors import DivergentIntegral, IntegrationFailure
from .model import DEFAULT_QUADRATURE, QuadratureConfig

# log-coordinate panel width and the largest ln(x) we are willing to visit
_PANEL = 1.0
_S_MAX = 700.0


def quad_segment(func, a: float, b: float, q: QuadratureConfig, *, epsabs=None, **kw):
    """One QUADPACK call returning ``(value, error)``.

    Raises IntegrationFailure only when QUADPACK gives up *and* its own
    error estimate is far above the requested tolerance.
    """
    epsabs = q.abs_tol if epsabs is None else epsabs
    res = quad(
        func, a, b, epsabs=epsabs, epsrel=q.rel_tol, limit=q.max_subdivisions,
        full_output=1, **kw,
    )
    val, err, info = res[0], res[1], res[2]
    if len(res) > 3 and not math.isfinite(val):
        raise IntegrationFailure(f"non-finite integral on [{a}, {b}]: {res[3]}")
    if len(res) > 3 and err > 1e3 * max(epsabs, q.rel_tol * abs(val)):
        raise IntegrationFailure(f"quadrature on [{a}, {b}] failed: {res[3].strip()}")
    return float(val), float(err)


def integrate_finite(
    func: Callable[[float], float],
    a: float,
    b: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    points: Iterable[float] = (),
):
    """Integrate over ``[a, b]`` splitting at the interior ``points``."""
    if b <= a:
        return 0.0, 0.0
    cuts = [a] + sorted(p for p in points if a < p < b) + [b]
    total = err = 0.0
    nseg = len(cuts) - 1
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        v, e = quad_segment(func, lo, hi, q, epsabs=q.abs_tol / nseg)
        total += v
        err += e
    return total, err


def integrate_tail(func: Callable[[float], float], x0: float, q: QuadratureConfig = DEFAULT_QUADRATURE):
    """Integrate ``func`` over ``[x0, inf)`` with divergence detection.

    Panels ``[e^{s_k}, e^{s_k + 1}]`` are added until the remaining tail is
    below tolerance. When consecutive panel ratios settle at ``r < 1`` the
    geometric remainder ``p r / (1 - r)`` is added; ratios that stay at or
    above one, or a tail that is still significant at ``x = e^700``, raise
    DivergentIntegral.
    """
    if x0 <= 0:
        raise ValueError("tail start must be positive")
    s = math.log(x0)

    def g(t):
        x = math.exp(t)
        return func(x) * x

    total = err = 0.0
    pieces: list[float] = []
    zeros = 0
    k = 0
    while True:
        if s + _PANEL > _S_MAX:
            raise DivergentIntegral(
                f"tail integral from x0={x0:.6g} failed the Cauchy criterion up to x=e^{_S_MAX:.0f}"
            )
        piece, e = quad_segment(g, s, s + _PANEL, q, epsabs=0.1 * q.abs_tol)
        s += _PANEL
        k += 1
        total += piece
        err += e
        pieces.append(piece)
        tol = 0.1 * q.tolerance(total)
        if piece == 0.0:
            zeros += 1
            if zeros >= 3:
                return total, err
            continue
        zeros = 0
        if len(pieces) < 4 or pieces[-2] == 0.0:
            continue
        ratios = [pieces[i] / pieces[i - 1] for i in range(len(pieces) - 3, len(pieces)) if pieces[i - 1] != 0]
        if len(ratios) < 3:
            continue
        r = max(ratios)
        if min(ratios) >= 1.0 and k >= 20:
            raise DivergentIntegral(
                f"tail panels stopped decreasing (ratio {min(ratios):.6g}) beyond x={math.exp(s):.3g}"
            )
        if not 0.0 < r < 1.0:
            if abs(piece) <= 1e-3 * tol:
                return total, err
            continue
        spread = r - min(ratios)
        remainder = piece * r / (1.0 - r)
        if abs(remainder) <= tol:
            return total + remainder, err + abs(remainder)
        if spread <= 0.05 * (1.0 - r):
            unc = abs(piece) * (spread + 1e-12) / (1.0 - r) ** 2
            if unc <= tol:
                return total + remainder, err + unc


def integrate(
    func: Callable[[float], float],
    a: float,
    b: float,
    q: Optional[QuadratureConfig] = None,
    *,
    points: Iterable[float] = (),
    tail_start: Optional[float] = None,
):
    """Integrate over ``[a, b]`` where ``b`` may be ``+inf``.

    For an infinite upper end the interval is split at ``tail_start`` (a
    point where the integrand has entered its tail regime); the head goes
    to QUADPACK and the tail to :func:`integrate_tail`.
    """
    q = q or DEFAULT_QUADRATURE
    if math.isfinite(b):
        return integrate_finite(func, a, b, q, points)
    x0 = tail_start if tail_start is not None else max(1.0, a + 1.0)
    x0 = max(x0, a, 1e-300)
    if x0 <= 0:
        x0 = 1.0
    head, herr = integrate_finite(func, a, x0, q, points) if x0 > a else (0.0, 0.0)
    tail, terr = integrate_tail(func, x0, q)
    return head + tail, herr + terr
