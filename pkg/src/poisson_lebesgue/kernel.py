"""
The generalized Poisson kernel and its truncations.

Everything is carried in scaled form: the truncated kernel P^{(n)} is
represented by its mantissa polynomial

    Q(t) = e^{αn^r} P^{(n)}(t) = Σ_{k=n}^{K} e^{−α(k^r − n^r)} cos(kt − βπ/2)

and norms come back as :class:`ScaledValue` with ``log_scale = −αn^r``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import AccuracyError, AliasingError, DomainError
from .params import INF, ClassParams, Index, conjugate, validate_index
from .scaled import ScaledValue
from .specfun import cos_norm, i_s
from .trig import MAX_REFINEMENTS, TrigPoly, lp_norm, next_pow2, sup_norm_certified

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-16
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class KernelSpec:
    params: ClassParams
    n: int
    trunc_k: int
    tail_bound: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"kernel start n must be ≥ 1, got {self.n!r}")
        if self.trunc_k < self.n:
            raise DomainError(f"trunc_k ({self.trunc_k}) must be ≥ n ({self.n})")
        if self.tail_bound < 0.0:
            raise DomainError(f"tail_bound must be ≥ 0, got {self.tail_bound!r}")

    @property
    def log_scale(self) -> float:
        """ln of the factor e^{−αn^r} that the mantissa polynomial omits."""
        return -self.params.alpha * float(self.n) ** self.params.r

    @property
    def size(self) -> int:
        return self.trunc_k - self.n + 1


def _log_tail(params: ClassParams, n: int, k: int) -> float:
    """ln of the certified bound on Σ_{j>k} e^{−α(j^r − n^r)}; +inf when unusable."""
    a, r = params.alpha, params.r
    kr = float(k) ** r
    guard = 1.0 - (1.0 - r) / (params.alpha_r * kr)
    if guard <= 0.0:
        return math.inf
    gap = float(n) ** r * math.expm1(r * math.log1p((k - n) / n))
    return -a * gap + (1.0 - r) * math.log(k) - math.log(params.alpha_r) - math.log(guard)


def tail_bound_at(params: ClassParams, n: int, k: int) -> float:
    return math.exp(min(_log_tail(params, n, k), 700.0))


def truncation_index(params: ClassParams, n: int, eps: float = DEFAULT_EPS) -> tuple[int, float]:
    """Smallest K ≥ n whose certified tail bound is ≤ ``eps``.

    The bound Σ_{k>K} e^{−α(k^r−n^r)} ≤ e^{−α(K^r−n^r)} K^{1−r} / (αr (1 − (1−r)/(αrK^r)))
    comes from integrating ∫_K^∞ e^{−αx^r} dx by parts; it is decreasing in
    K once αrK^r ≥ 2(1−r), which is where the search starts.
    """
    if not (eps > 0.0):
        raise DomainError(f"eps must be > 0, got {eps!r}")
    if n < 1:
        raise DomainError(f"n must be ≥ 1, got {n!r}")
    log_eps = math.log(eps)
    start = (2.0 * (1.0 - params.r) / params.alpha_r) ** (1.0 / params.r)
    lo = max(n, int(math.ceil(start)))
    if _log_tail(params, n, lo) <= log_eps:
        return lo, tail_bound_at(params, n, lo)
    hi = lo + 1
    while _log_tail(params, n, hi) > log_eps:
        lo, hi = hi, hi + 2 * (hi - lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _log_tail(params, n, mid) <= log_eps:
            hi = mid
        else:
            lo = mid
    return hi, tail_bound_at(params, n, hi)


def make_kernel_spec(params: ClassParams, n: int, eps: float = DEFAULT_EPS) -> KernelSpec:
    k, tail = truncation_index(params, n, eps)
    logger.debug("kernel n=%d truncated at K=%d (tail ≤ %.3e)", n, k, tail)
    return KernelSpec(params=params, n=n, trunc_k=k, tail_bound=tail)


def scaled_coefficients(spec: KernelSpec) -> np.ndarray:
    """c_j = e^{−α((n+j)^r − n^r)}, j = 0..trunc_k − n."""
    p = spec.params
    j = np.arange(spec.size, dtype=float)
    n = float(spec.n)
    gap = n ** p.r * np.expm1(p.r * np.log1p(j / n))
    return np.exp(-p.alpha * gap)


def kernel_poly(spec: KernelSpec) -> TrigPoly:
    """The mantissa polynomial Q as a degree-trunc_k :class:`TrigPoly`."""
    c = scaled_coefficients(spec)
    theta = spec.params.phase
    cos_c = np.zeros(spec.trunc_k)
    sin_c = np.zeros(spec.trunc_k)
    cos_c[spec.n - 1 :] = c * math.cos(theta)
    sin_c[spec.n - 1 :] = c * math.sin(theta)
    return TrigPoly(0.0, cos_c, sin_c)


def reflected_kernel_poly(spec: KernelSpec, x0: float) -> TrigPoly:
    """t ↦ Q(x0 − t)."""
    c = scaled_coefficients(spec)
    k = np.arange(spec.n, spec.trunc_k + 1, dtype=float)
    shift = k * x0 - spec.params.phase
    cos_c = np.zeros(spec.trunc_k)
    sin_c = np.zeros(spec.trunc_k)
    cos_c[spec.n - 1 :] = c * np.cos(shift)
    sin_c[spec.n - 1 :] = c * np.sin(shift)
    return TrigPoly(0.0, cos_c, sin_c)


def eval_scaled_kernel_grid(spec: KernelSpec, grid_size: int) -> np.ndarray:
    """Q(t_i) at t_i = 2πi/grid_size."""
    required = 2 * spec.trunc_k + 1
    if grid_size < required:
        raise AliasingError(
            f"grid of {grid_size} points aliases a degree-{spec.trunc_k} kernel",
            grid_size=grid_size,
            required=required,
        )
    freq = np.zeros(grid_size // 2 + 1, dtype=complex)
    freq[spec.n : spec.trunc_k + 1] = (grid_size / 2.0) * scaled_coefficients(spec) * np.exp(
        -1j * spec.params.phase
    )
    return np.fft.irfft(freq, n=grid_size)


def naive_kernel_values(
    params: ClassParams, n: int, trunc_k: int, t: Union[float, np.ndarray]
) -> np.ndarray:
    """Σ_{k=n}^{trunc_k} e^{−αk^r} cos(kt − βπ/2) summed directly, unscaled."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    k = np.arange(n, trunc_k + 1, dtype=float)
    weights = np.exp(-params.alpha * k ** params.r)
    return np.cos(np.outer(ts, k) - params.phase) @ weights


def kernel_sup_certified(spec: KernelSpec) -> tuple[ScaledValue, ScaledValue]:
    """(1/π)‖P^{(n)}‖_∞ as a certified (value, radius) pair."""
    bound = sup_norm_certified(kernel_poly(spec))
    return (
        ScaledValue(bound.value / math.pi, spec.log_scale),
        ScaledValue(bound.radius / math.pi, spec.log_scale),
    )


def kernel_norm(spec: KernelSpec, s: Index, tol: float = DEFAULT_TOL) -> ScaledValue:
    """(1/π)‖P^{(n)}‖_s with log_scale = −αn^r.

    Finite s goes through :func:`~poisson_lebesgue.trig.lp_norm` on the
    mantissa polynomial (Parseval for s = 2, zero-split quadrature
    otherwise).  s = INF: the upper end value + radius of
    :func:`kernel_sup_certified`, so the result never undershoots the sup.
    """
    s = validate_index(s)
    if s is INF:
        value, radius = kernel_sup_certified(spec)
        return value + radius
    try:
        value = lp_norm(kernel_poly(spec), s, tol)
    except AccuracyError as exc:
        logger.warning("kernel L_%s norm stalled (n=%d)", s, spec.n)
        raise AccuracyError(
            f"kernel L_{s} norm did not reach relative tolerance {tol:g}",
            best_estimate=ScaledValue(exc.best_estimate / math.pi, spec.log_scale),
        ) from exc
    return ScaledValue(value / math.pi, spec.log_scale)


def _recip(p: Index) -> float:
    return 0.0 if p is INF else 1.0 / p


def asymptotic_argument(params: ClassParams, n: int) -> float:
    """υ = πn^{1−r}/(αr), the upper limit of I_s in the norm asymptotics."""
    return math.pi * float(n) ** (1.0 - params.r) / params.alpha_r


def kernel_norm_asymptotic(spec: KernelSpec, s: Index) -> tuple[ScaledValue, ScaledValue]:
    """Main term and remainder bracket of the large-n formula for (1/π)‖P^{(n)}‖_s.

    The computed norm is expected to satisfy |norm − main| ≤ (14π)²·bracket
    for n ≥ n₀(α, r, s′).
    """
    s = validate_index(s)
    p = spec.params
    sp = conjugate(s)
    inv_s, inv_sp = _recip(s), _recip(sp)
    n = float(spec.n)
    ar = p.alpha_r
    v = asymptotic_argument(p, spec.n)
    isv = i_s(s, v)
    growth = n ** ((1.0 - p.r) * inv_sp)
    main = growth * cos_norm(s) / (math.pi ** (1.0 + inv_s) * ar ** inv_sp) * isv
    bracket = growth * (ar ** -(1.0 + inv_sp) * isv * n ** -p.r + n ** (-(1.0 - p.r) * inv_sp))
    return ScaledValue(main, spec.log_scale), ScaledValue(bracket, spec.log_scale)


def kernel_norm_envelope(spec: KernelSpec, s: Index, tol: float = DEFAULT_TOL) -> ScaledValue:
    """Experimental envelope estimate of (1/π)‖P^{(n)}‖_s.

    Writes Q(t) = Re(e^{i(nt − βπ/2)} A(t)) with A(t) = Σ_j c_j e^{ijt} and
    replaces the fast phase by its average, so that
    ‖Q‖_s^s ≈ (‖cos‖_s^s / 2π)·∫|A|^s.  Exact for s = 2 and, for even s, as
    long as s·(trunc_k − n) < 2n; s = INF returns the envelope peak Σ c_j,
    an upper bound.
    """
    s = validate_index(s)
    c = scaled_coefficients(spec)
    if s is INF:
        return ScaledValue(float(np.sum(c)) / math.pi, spec.log_scale)
    degree = c.size - 1
    n_points = next_pow2(max(4 * (degree + 1), 16))

    def estimate(m: int) -> float:
        env = np.abs(np.fft.ifft(c, n=m) * m)
        mean_env = float(np.mean(env ** s))
        return (cos_norm(s) ** s * mean_env) ** (1.0 / s)

    previous = estimate(n_points)
    for _ in range(MAX_REFINEMENTS):
        n_points *= 2
        current = estimate(n_points)
        if abs(current - previous) <= tol * current:
            return ScaledValue(current / math.pi, spec.log_scale)
        previous = current
    raise AccuracyError(
        f"envelope L_{s} norm did not reach relative tolerance {tol:g}",
        best_estimate=ScaledValue(previous / math.pi, spec.log_scale),
    )
