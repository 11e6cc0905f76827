"""
Special functions: Γ (Lanczos), Pochhammer symbols, Gauss's ₂F₁ at unit
argument, the integral I_s(υ) = ‖(1+t²)^{-1/2}‖_{L_s[0,υ]} and ‖cos‖_s.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DivergenceError, DomainError
from .params import INF, Index, validate_index

logger = logging.getLogger(__name__)

QUAD_RTOL = 1e-10
SERIES_RTOL = 1e-12
SERIES_MAX_TERMS = 200_000
_SERIES_CHUNK = 4096

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_pole(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _lanczos_sum(z: float) -> float:
    # z here is the shifted argument (x − 1).
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    return acc


def gamma(x: float) -> float:
    """Γ(x) for real x, poles excluded."""
    if _is_pole(x):
        raise DomainError(f"gamma has a pole at {x!r}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    if x > 140.0:
        # t^{z+1/2} overflows first; go through the logarithm.
        return math.exp(log_gamma(x))
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * _lanczos_sum(z)


def log_gamma(x: float) -> float:
    """ln|Γ(x)|."""
    if _is_pole(x):
        raise DomainError(f"gamma has a pole at {x!r}")
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def _gamma_sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    # Γ alternates sign on (−k, −k+1).
    return -1.0 if math.ceil(-x) % 2 else 1.0


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k = x(x+1)···(x+k−1); (x)_0 = 1."""
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"pochhammer needs an integer k ≥ 0, got {k!r}")
    if k == 0:
        return 1.0
    return float(special.poch(x, int(k)))


def gauss_2f1_unit(a: float, b: float, c: float) -> float:
    """F(a, b; c; 1) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)) (Gauss's summation)."""
    if _is_pole(c):
        raise DomainError(f"c must not be a nonpositive integer, got {c!r}")
    sigma = c - a - b
    if sigma <= 0.0:
        raise DivergenceError(
            f"F({a!r}, {b!r}; {c!r}; 1) diverges: c − a − b = {sigma!r} ≤ 0"
        )
    if _is_pole(c - a) or _is_pole(c - b):
        return 0.0
    args_num = (c, sigma)
    args_den = (c - a, c - b)
    if max(abs(v) for v in args_num + args_den) < 140.0:
        return gamma(c) * gamma(sigma) / (gamma(c - a) * gamma(c - b))
    sign = 1.0
    for v in args_num + args_den:
        sign *= _gamma_sign(v)
    log_value = (
        log_gamma(c) + log_gamma(sigma) - log_gamma(c - a) - log_gamma(c - b)
    )
    return sign * math.exp(log_value)


def _terminating_order(a: float, b: float) -> int | None:
    orders = [int(-v) for v in (a, b) if _is_pole(v)]
    return min(orders) if orders else None


def gauss_2f1_series(
    a: float,
    b: float,
    c: float,
    *,
    rtol: float = SERIES_RTOL,
    max_terms: int = SERIES_MAX_TERMS,
) -> float:
    """Direct summation of Gauss's series at z = 1.

    Terms are summed until one falls below ``rtol`` of the partial sum or
    the term budget runs out; the remaining tail is then added from the
    asymptotic form t_k ≈ C·k^{−1−σ}(1 + e₁/k), σ = c − a − b, with an
    Euler–Maclaurin correction.
    """
    if _is_pole(c):
        raise DomainError(f"c must not be a nonpositive integer, got {c!r}")
    order = _terminating_order(a, b)
    if order is not None:
        k = np.arange(order, dtype=float)
        terms = np.concatenate(([1.0], np.cumprod((a + k) * (b + k) / ((c + k) * (k + 1.0)))))
        return math.fsum(terms.tolist())
    sigma = c - a - b
    if sigma <= 0.0:
        raise DivergenceError(
            f"F({a!r}, {b!r}; {c!r}; 1) diverges: c − a − b = {sigma!r} ≤ 0"
        )

    partial_sums = [1.0]
    total = 1.0
    last = 1.0
    start = 0
    n_terms = max_terms
    while start < max_terms:
        k = np.arange(start, min(start + _SERIES_CHUNK, max_terms), dtype=float)
        # chunk[i] is the term t_{start+i+1}
        chunk = last * np.cumprod((a + k) * (b + k) / ((c + k) * (k + 1.0)))
        small = np.nonzero(np.abs(chunk) < rtol * abs(total + float(np.sum(chunk))))[0]
        if small.size:
            stop = int(small[0]) + 1
            partial_sums.append(math.fsum(chunk[:stop].tolist()))
            last = float(chunk[stop - 1])
            n_terms = start + stop
            break
        partial_sums.append(math.fsum(chunk.tolist()))
        total = math.fsum(partial_sums)
        last = float(chunk[-1])
        start += k.size

    # The heavy tail beyond t_K matters whenever σ is small, even after an
    # early stop; the asymptotic form needs K well past |a|, |b|, |c|.
    kk = float(n_terms)
    if last == 0.0 or kk < 10.0 * max(abs(a), abs(b), abs(c), 1.0):
        return math.fsum(partial_sums)
    e1 = 0.5 * (a * (a - 1.0) + b * (b - 1.0) - c * (c - 1.0))
    coef = last / (kk ** (-1.0 - sigma) * (1.0 + e1 / kk))
    k1 = kk + 1.0

    def g(x: float) -> float:
        return coef * (x ** (-1.0 - sigma) + e1 * x ** (-2.0 - sigma))

    def dg(x: float) -> float:
        return coef * (-(1.0 + sigma) * x ** (-2.0 - sigma) - e1 * (2.0 + sigma) * x ** (-3.0 - sigma))

    integral = coef * (k1 ** (-sigma) / sigma + e1 * k1 ** (-1.0 - sigma) / (1.0 + sigma))
    tail = integral + 0.5 * g(k1) - dg(k1) / 12.0
    logger.debug("2F1 series tail correction %.3e after %d terms", tail, n_terms)
    partial_sums.append(tail)
    return math.fsum(partial_sums)


def theorem_main_F(pprime: float) -> float:
    """F^{1/p′}(1/2, (3−p′)/2; 3/2; 1), the hypergeometric factor of the main term."""
    if pprime is INF or not isinstance(pprime, (int, float)) or not (1.0 < pprime < math.inf):
        raise DomainError(f"pprime must be a finite real > 1, got {pprime!r}")
    return gauss_2f1_unit(0.5, (3.0 - pprime) / 2.0, 1.5) ** (1.0 / pprime)


def _quad(func: Callable[[float], float], lo: float, hi: float, what: str) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _err = integrate.quad(func, lo, hi, epsabs=0.0, epsrel=QUAD_RTOL, limit=400)
        except integrate.IntegrationWarning as exc:
            raise AccuracyError(f"quadrature for {what} did not converge: {exc}") from exc
    return value


def i_s(s: Index, v: float) -> float:
    """I_s(υ) = ‖1/√(t²+1)‖_{L_s[0,υ]}."""
    s = validate_index(s)
    if v < 0.0 or math.isnan(v):
        raise DomainError(f"upper limit must be ≥ 0, got {v!r}")
    if v == 0.0:
        return 0.0
    if s is INF:
        return 1.0
    half = s / 2.0

    def integrand(t: float) -> float:
        return (1.0 + t * t) ** (-half)

    if v <= 1.0:
        total = _quad(integrand, 0.0, v, f"I_{s}({v})")
    else:
        total = _quad(integrand, 0.0, 1.0, f"I_{s}({v})") + _quad(
            integrand, 1.0, v, f"I_{s}({v})"
        )
    return total ** (1.0 / s)


def i_s_limit(s: float) -> float:
    """I_s(∞) for 1 < s < ∞; equals F^{1/s}(1/2, (3−s)/2; 3/2; 1)."""
    return theorem_main_F(s)


def cos_norm(s: Index) -> float:
    """‖cos‖_{L_s[0,2π]}."""
    s = validate_index(s)
    if s is INF:
        return 1.0
    quarter = _quad(lambda t: abs(math.cos(t)) ** s, 0.0, math.pi / 2.0, f"‖cos‖_{s}")
    return (4.0 * quarter) ** (1.0 / s)


def cos_norm_closed_form(s: Index) -> float:
    """(2√π Γ((s+1)/2) / Γ(s/2+1))^{1/s}; 1 for INF."""
    s = validate_index(s)
    if s is INF:
        return 1.0
    return (2.0 * math.sqrt(math.pi) * gamma((s + 1.0) / 2.0) / gamma(s / 2.0 + 1.0)) ** (1.0 / s)
