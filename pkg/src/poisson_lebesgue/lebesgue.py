"""
Lebesgue-type inequalities for Fourier sums on C^{α,r}_{β,p}.

For f = (1/π)∫P_{α,r,β}(x−t)φ(t)dt with φ ∈ B_p⁰ and n ≥ n₀,

    ‖f − S_{n−1}f‖_C ≤ e^{−αn^r} n^{(1−r)/p} (main + γ·corr) E_n(φ)_{L_p},
    |γ| ≤ (14π)²,

with n^{(1−r)/p} read as n^{1−r} for p = 1.  This module evaluates both
sides, checks the inequality for concrete φ and measures the pieces the
proof is built from.
"""

from __future__ import annotations

import concurrent.futures
import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np

from .bestapprox import DEFAULT_TOL as APPROX_TOL
from .bestapprox import best_approx
from .errors import ContractError, DomainError
from .kernel import (
    DEFAULT_TOL,
    asymptotic_argument,
    kernel_norm,
    kernel_norm_asymptotic,
    make_kernel_spec,
    reflected_kernel_poly,
)
from .params import INF, ClassParams, Index, conjugate, n0, validate_index
from .results import BoundReport, ISReport, KernelNormReport
from .scaled import ScaledValue
from .specfun import cos_norm, i_s, theorem_main_F
from .trig import (
    GridFunction,
    TrigPoly,
    analyze,
    convolve_kernel,
    deviation,
    eval_at,
    eval_grid,
    lp_norm,
    next_pow2,
    scaled_sup_norm,
)

logger = logging.getLogger(__name__)

GAMMA_BOUND = (14.0 * math.pi) ** 2
THETA_BOUND = 2.0
MEMBERSHIP_RTOL = 1e-6
_MEMBERSHIP_NORM_TOL = 1e-8


# ----- right-hand sides -----


def _require_finite_p(params: ClassParams) -> float:
    if params.p is INF:
        raise DomainError("the inequality is stated for 1 ≤ p < ∞, got p = INF")
    return float(params.p)


def main_coefficient(params: ClassParams) -> float:
    """The γ-free coefficient of the right-hand side."""
    p = _require_finite_p(params)
    ar = params.alpha_r
    if p == 1.0:
        return 1.0 / (math.pi * ar)
    pp = params.pprime
    return cos_norm(pp) / (math.pi ** (1.0 + 1.0 / pp) * ar ** (1.0 / p)) * theorem_main_F(pp)


def correction_terms(params: ClassParams, n: int) -> float:
    """The bracket multiplied by γ."""
    p = _require_finite_p(params)
    ar, r = params.alpha_r, params.r
    nf = float(n)
    if p == 1.0:
        return nf ** -r / ar ** 2 + nf ** -(1.0 - r)
    pp = params.pprime
    return (1.0 + ar ** ((pp - 1.0) / p) / (pp - 1.0)) * nf ** (-(1.0 - r) / p) + (
        p ** (1.0 / pp) / ar ** (1.0 + 1.0 / p)
    ) * nf ** -r


def _prefactor(params: ClassParams, n: int, en: float) -> ScaledValue:
    """e^{−αn^r} n^{(1−r)/p} · en."""
    if en < 0.0 or math.isnan(en):
        raise DomainError(f"E_n must be ≥ 0, got {en!r}")
    if n < 1:
        raise DomainError(f"n must be ≥ 1, got {n!r}")
    p = _require_finite_p(params)
    growth = float(n) ** ((1.0 - params.r) / p)
    return ScaledValue(growth * en, -params.alpha * float(n) ** params.r)


def rhs_theorem1_general(params: ClassParams, n: int, en: float, gamma: float) -> ScaledValue:
    """Right-hand side for 1 < p < ∞."""
    p = _require_finite_p(params)
    if p == 1.0:
        raise DomainError("rhs_theorem1_general needs 1 < p < ∞; use rhs_theorem1_p1 for p = 1")
    return _prefactor(params, n, en) * (main_coefficient(params) + gamma * correction_terms(params, n))


def rhs_theorem1_p1(params: ClassParams, n: int, en: float, gamma: float) -> ScaledValue:
    """Right-hand side for p = 1."""
    if params.p != 1.0:
        raise DomainError(f"rhs_theorem1_p1 needs p = 1, got {params.p!r}")
    return _prefactor(params, n, en) * (main_coefficient(params) + gamma * correction_terms(params, n))


def rhs(params: ClassParams, n: int, en: float, gamma: float = GAMMA_BOUND) -> ScaledValue:
    if params.p == 1.0:
        return rhs_theorem1_p1(params, n, en, gamma)
    return rhs_theorem1_general(params, n, en, gamma)


def class_bound(params: ClassParams, n: int) -> ScaledValue:
    """Uniform bound over the class: the right-hand side at E_n = 1, γ = (14π)²."""
    return rhs(params, n, 1.0, GAMMA_BOUND)


def implied_gamma(params: ClassParams, n: int, lhs: ScaledValue, en: float) -> Optional[float]:
    """γ solving lhs = prefactor·(main + γ·corr); ``None`` when en = 0."""
    if en <= 0.0:
        return None
    ratio = lhs.ratio(_prefactor(params, n, en))
    return (ratio - main_coefficient(params)) / correction_terms(params, n)


# ----- verification -----


def _check_membership(phi: TrigPoly, p: Index) -> None:
    if not phi.is_zero_mean():
        raise ContractError(f"φ must be orthogonal to constants, got a0 = {phi.a0!r}")
    norm = lp_norm(phi, p, tol=_MEMBERSHIP_NORM_TOL)
    if norm > 1.0 + MEMBERSHIP_RTOL:
        raise ContractError(f"φ must lie in the unit ball of L_{p}, got norm {norm!r}")


def deviation_of_class_function(
    phi: TrigPoly, params: ClassParams, n: int
) -> tuple[ScaledValue, ScaledValue]:
    """Certified ‖f − S_{n−1}f‖_C for f generated by φ, as (value, radius)."""
    spec_full = make_kernel_spec(params, 1)
    f_dev = deviation(convolve_kernel(phi, spec_full, scale_at=n), n)
    return scaled_sup_norm(f_dev)


def verify_inequality(
    phi: TrigPoly,
    params: ClassParams,
    n: int,
    tol: float = APPROX_TOL,
    *,
    grid_size: Optional[int] = None,
) -> BoundReport:
    """Check the inequality for f generated by ``phi`` at order ``n``."""
    _require_finite_p(params)
    if n < 1:
        raise DomainError(f"n must be ≥ 1, got {n!r}")
    _check_membership(phi, params.p)

    lhs, radius = deviation_of_class_function(phi, params, n)
    en = best_approx(phi, n, params.p, tol, grid_size=grid_size)
    rhs_full = rhs(params, n, en.lower, GAMMA_BOUND)
    rhs_main = rhs(params, n, en.lower, 0.0)
    lhs_upper = lhs + radius
    passed = lhs_upper <= rhs_full
    ratio = lhs_upper.ratio(rhs_full) if not rhs_full.is_zero else None
    report = BoundReport(
        params=params.to_dict(),
        n=n,
        lhs=lhs,
        lhs_radius=radius,
        en=en.to_dict(include_argmin=False),
        rhs_full=rhs_full,
        rhs_main=rhs_main,
        implied_gamma=implied_gamma(params, n, lhs, en.lower),
        passed=passed,
        in_regime=params.in_regime(n),
        degenerate=phi.effective_degree < n,
        ratio=ratio,
    )
    logger.info(
        "n=%d lhs=%.6e rhs=%.6e (log scale %.3f) %s",
        n,
        lhs_upper.in_units_of(rhs_full.log_scale) if not lhs_upper.is_zero else 0.0,
        rhs_full.in_units_of(rhs_full.log_scale) if not rhs_full.is_zero else 0.0,
        rhs_full.log_scale,
        "pass" if passed else "FAIL",
    )
    return report


def verify_batch(
    phis: Sequence[TrigPoly],
    params: ClassParams,
    n: int,
    tol: float = APPROX_TOL,
    *,
    max_workers: Optional[int] = None,
    grid_size: Optional[int] = None,
    return_exceptions: bool = False,
) -> List[Union[BoundReport, Exception]]:
    """:func:`verify_inequality` over many φ, results in input order.

    With ``return_exceptions`` a failing sample contributes its exception
    instead of aborting the batch.
    """
    results: List[Union[BoundReport, Exception, None]] = [None] * len(phis)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {
            executor.submit(verify_inequality, phi, params, n, tol, grid_size=grid_size): i
            for i, phi in enumerate(phis)
        }
        for future in concurrent.futures.as_completed(future_to_index):
            i = future_to_index[future]
            try:
                results[i] = future.result().with_index(i)
            except Exception as exc:
                if not return_exceptions:
                    raise
                logger.warning("sample %d raised %s: %s", i, type(exc).__name__, exc)
                results[i] = exc
    return results  # type: ignore[return-value]


def holder_chain(
    phi: TrigPoly,
    t: TrigPoly,
    params: ClassParams,
    n: int,
    tol: float = DEFAULT_TOL,
) -> tuple[ScaledValue, ScaledValue]:
    """(‖ρ_n(f)‖_C, (1/π)‖P^{(n)}‖_{p′}·‖φ − t‖_p) for a polynomial t of degree < n."""
    if t.effective_degree >= n:
        raise DomainError(f"t must have degree < n = {n}, got {t.effective_degree}")
    spec = make_kernel_spec(params, n)
    pp = conjugate(params.p)
    knorm = kernel_norm(spec, pp, tol)
    delta_norm = lp_norm(phi - t, params.p, tol=_MEMBERSHIP_NORM_TOL)
    lhs, _radius = deviation_of_class_function(phi, params, n)
    return lhs, knorm * delta_norm


# ----- sharpness and remainder checks -----


def sharpness_probe(
    params: ClassParams, n: int, x0: float = 0.0, tol: float = DEFAULT_TOL
) -> float:
    """|ρ_n(f*; x0)| / ((1/π)‖P^{(n)}‖_{p′}) for the Hölder-extremal φ*.

    φ* ∝ |Q(x0−t)|^{p′−1} sign Q(x0−t), mean-corrected and normalized in L_p
    on the sampling grid.  The ratio is at most 1 and close to it.
    """
    p = _require_finite_p(params)
    if p == 1.0:
        raise DomainError("no extremal element exists in L_1; the sharpness ratio needs 1 < p < ∞")
    spec = make_kernel_spec(params, n)
    pp = params.pprime
    n_points = next_pow2(16 * (spec.trunc_k + 1))
    q = eval_grid(reflected_kernel_poly(spec, x0), n_points).values
    q = q / np.max(np.abs(q))
    u = np.abs(q) ** (pp - 1.0) * np.sign(q)
    u = u - np.mean(u)
    u = u / lp_norm(GridFunction(u), p)
    dense = analyze(GridFunction(u))
    phi_star = TrigPoly(0.0, dense.cos_coeffs, dense.sin_coeffs)
    rho = abs(eval_at(convolve_kernel(phi_star, spec).poly, x0))
    knorm = kernel_norm(spec, pp, tol)
    ratio = rho / knorm.in_units_of(spec.log_scale)
    logger.info("sharpness ratio at n=%d, x0=%g: %.12f", n, x0, ratio)
    return ratio


def kernel_norm_report(
    params: ClassParams, n: int, s: Index, tol: float = DEFAULT_TOL
) -> KernelNormReport:
    """Computed kernel norm, its large-n formula and the implied remainder δ."""
    s = validate_index(s)
    spec = make_kernel_spec(params, n)
    norm = kernel_norm(spec, s, tol)
    main, bracket = kernel_norm_asymptotic(spec, s)
    delta = (norm - main).ratio(bracket)
    regime = n >= n0(params.with_p(conjugate(s)))
    if not regime:
        logger.info("n=%d is below the threshold for s=%s; δ is informational", n, s)
    return KernelNormReport(
        params=params.to_dict(),
        n=n,
        s="inf" if s is INF else s,
        norm=norm,
        main=main,
        bracket=bracket,
        implied_delta=delta,
        in_regime=regime,
        trunc_k=spec.trunc_k,
        tail_bound=spec.tail_bound,
    )


def check_norm_asymptotics(
    params: ClassParams, n: int, s: Index, tol: float = DEFAULT_TOL
) -> float:
    """Implied δ = (computed − main)/bracket; |δ| ≤ (14π)² in the regime."""
    return kernel_norm_report(params, n, s, tol).implied_delta


def check_is_estimate(params: ClassParams, n: int, s: float) -> ISReport:
    """Compare I_s(υ) with its limit; Θ = (I_s − limit)(s−1)υ^{s−1}."""
    if s is INF or not (1.0 < s < math.inf):
        raise DomainError(f"s must satisfy 1 < s < ∞, got {s!r}")
    v = asymptotic_argument(params, n)
    computed = i_s(s, v)
    f_term = theorem_main_F(s)
    theta = (computed - f_term) * (s - 1.0) * v ** (s - 1.0)
    return ISReport(
        s=s,
        n=n,
        v=v,
        i_s_computed=computed,
        f_term=f_term,
        implied_theta=theta,
        in_regime=n >= n0(params.with_p(conjugate(s))),
    )
