"""
Best approximation E_n(f)_{L_p} by trigonometric polynomials of degree n−1.

Upper bounds come from minimizing the L_p distance over the 2n−1
coefficients of t_{n−1}: iteratively reweighted least squares on a uniform
grid (smoothed weights for p < 2, a damped fixed point for p > 2).  For
p = 1 the grid solution is then polished by Newton steps on the exact
sign-moment conditions, with the zeros of the residual located
analytically.  Lower bounds come from duality: for any g orthogonal to
T_{n−1},

    E_n(f)_p ≥ ∫ f·g / ‖g‖_{p′}.

For p = 1 both bounds are exact integrals.  For 1 < p < ∞ they refer to the
trapezoid-discretized norm on the solver grid, where discrete Hölder keeps
lower ≤ upper.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import linalg

from .errors import AccuracyError, DomainError
from .params import INF, Index, conjugate, validate_index
from .trig import (
    GridFunction,
    TrigPoly,
    analyze,
    antiderivative,
    eval_at,
    eval_grid,
    eval_with_derivative,
    next_pow2,
    partial_sum,
    sign_changes,
    sup_norm_certified,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
MAX_ITERATIONS = 2000
GRID_FACTOR = 16
MIN_GRID = 1024
EPS_START = 1e-3
EPS_FLOOR = 1e-9
L1_EPS_FLOOR = 1e-6
NEWTON_STEPS = 100
L1_WARMUP = 25
_LINE_SEARCH = 30
_MOMENT_CHUNK = 256
_FLAT = 1e-13
_RIDGE = 1e-14


@dataclass(frozen=True, eq=False)
class ApproxResult:
    """Two-sided bounds on E_n(f)_{L_p} and the polynomial realizing ``upper``."""

    upper: float
    lower: float
    argmin: TrigPoly
    iterations: int
    p: Index = 2.0
    n: int = 1

    @property
    def gap(self) -> float:
        """Relative duality gap (upper − lower)/upper; 0 when upper = 0."""
        return _gap(self.upper, self.lower)

    def to_dict(self, include_argmin: bool = True) -> dict:
        out = {
            "p": "inf" if self.p is INF else self.p,
            "n": self.n,
            "upper": self.upper,
            "lower": self.lower,
            "gap": self.gap,
            "iterations": self.iterations,
        }
        if include_argmin:
            out["argmin"] = self.argmin.to_dict()
        return out


def _gap(upper: float, lower: float) -> float:
    if upper <= 0.0:
        return 0.0
    return (upper - lower) / upper


def _check_order(n: int) -> None:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"approximation order n must be an integer ≥ 1, got {n!r}")


def _solve_spd(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        factor = linalg.cho_factor(gram, check_finite=False)
    except linalg.LinAlgError:
        ridge = _RIDGE * max(float(np.trace(gram)), 1e-300)
        logger.debug("normal matrix not positive definite; adding ridge %.3e", ridge)
        factor = linalg.cho_factor(gram + ridge * np.eye(gram.shape[0]), check_finite=False)
    return linalg.cho_solve(factor, rhs, check_finite=False)


def _unpack(x: np.ndarray, n: int) -> TrigPoly:
    m = n - 1
    return TrigPoly(2.0 * x[0], x[1 : m + 1], x[m + 1 :])


def _assemble_gram(cw: np.ndarray, sw: np.ndarray, m: int) -> np.ndarray:
    """Σ w e eᵀ over the basis [1, cos jt, sin jt], j ≤ m, from the moments
    cw[q] = Σ w cos qt and sw[q] = Σ w sin qt, q = 0..2m."""
    j = np.arange(1, m + 1)
    dif = j[:, None] - j[None, :]
    adif = np.abs(dif)
    tot = j[:, None] + j[None, :]
    gram = np.empty((2 * m + 1, 2 * m + 1))
    gram[0, 0] = cw[0]
    gram[0, 1 : m + 1] = gram[1 : m + 1, 0] = cw[j]
    gram[0, m + 1 :] = gram[m + 1 :, 0] = sw[j]
    gram[1 : m + 1, 1 : m + 1] = 0.5 * (cw[adif] + cw[tot])
    gram[m + 1 :, m + 1 :] = 0.5 * (cw[adif] - cw[tot])
    g_cs = 0.5 * (sw[tot] - np.sign(dif) * sw[adif])
    gram[1 : m + 1, m + 1 :] = g_cs
    gram[m + 1 :, 1 : m + 1] = g_cs.T
    return gram


def _point_moments(z: np.ndarray, w: np.ndarray, qmax: int) -> tuple[np.ndarray, np.ndarray]:
    q = np.arange(qmax + 1, dtype=float)
    cw = np.zeros(qmax + 1)
    sw = np.zeros(qmax + 1)
    for start in range(0, z.size, _MOMENT_CHUNK):
        phase = np.outer(z[start : start + _MOMENT_CHUNK], q)
        wc = w[start : start + _MOMENT_CHUNK]
        cw += wc @ np.cos(phase)
        sw += wc @ np.sin(phase)
    return cw, sw


def best_approx_l2(f: TrigPoly, n: int) -> ApproxResult:
    """Exact E_n(f)_{L_2} by orthogonal projection (Parseval)."""
    _check_order(n)
    high_a = f.cos_coeffs[n - 1 :]
    high_b = f.sin_coeffs[n - 1 :]
    value = math.sqrt(math.pi * float(np.sum(high_a ** 2 + high_b ** 2)))
    return ApproxResult(value, value, partial_sum(f, n), 0, 2.0, n)


# ----- p = 1 -----


class _SignMoments(NamedTuple):
    """Step function h = sign(res) between consecutive zeros of res."""

    roots: np.ndarray
    signs: np.ndarray
    pieces: np.ndarray
    h_a0: float
    h_a: np.ndarray
    h_b: np.ndarray

    def gradient(self) -> np.ndarray:
        """∫h·e over the packed basis [1, cos k, sin k], k < n."""
        return math.pi * np.concatenate(([self.h_a0], self.h_a, self.h_b))


def _sign_moments(res: TrigPoly, n: int) -> Optional[_SignMoments]:
    roots = sign_changes(res)
    if not roots.size:
        return None
    lo = roots
    hi = np.append(roots[1:], roots[0] + 2.0 * math.pi)
    signs = np.sign(np.asarray(eval_at(res, 0.5 * (lo + hi))))
    pieces = antiderivative(res, hi) - antiderivative(res, lo)

    k = np.arange(1, n, dtype=float)
    h_a0 = float(np.sum(signs * (hi - lo))) / math.pi
    h_a = np.zeros(k.size)
    h_b = np.zeros(k.size)
    for start in range(0, roots.size if k.size else 0, _MOMENT_CHUNK):
        sl = slice(start, start + _MOMENT_CHUNK)
        klo, khi = np.outer(lo[sl], k), np.outer(hi[sl], k)
        h_a += signs[sl] @ (np.sin(khi) - np.sin(klo))
        h_b += signs[sl] @ (np.cos(klo) - np.cos(khi))
    h_a /= k * math.pi
    h_b /= k * math.pi
    return _SignMoments(roots, signs, pieces, h_a0, h_a, h_b)


def _l1_bounds(res: TrigPoly, n: int, data: Optional[_SignMoments]) -> tuple[float, float]:
    if data is None:
        # One-signed residual: h is constant and lies in T_{n−1}.
        return abs(math.pi * res.a0), 0.0
    upper = float(np.sum(np.abs(data.pieces)))
    pairing = float(np.sum(data.signs * data.pieces))

    low = TrigPoly(data.h_a0, data.h_a, data.h_b)
    res_low = partial_sum(res, n).padded(max(n - 1, 0))
    leak = math.pi * (
        res_low.a0 * data.h_a0 / 2.0
        + float(np.dot(res_low.cos_coeffs, data.h_a) + np.dot(res_low.sin_coeffs, data.h_b))
    )
    g_sup = 1.0 + sup_norm_certified(low).upper
    lower = max(0.0, (pairing - leak) / g_sup)
    return upper, min(lower, upper)


def _l1_certificate(res: TrigPoly, n: int) -> tuple[float, float]:
    """(upper, lower) for p = 1 using h = sign(res) as an exact step function."""
    return _l1_bounds(res, n, _sign_moments(res, n))


def _l1_refine(
    f: TrigPoly,
    n: int,
    argmin: TrigPoly,
    upper: float,
    lower: float,
    target: float,
    budget: int,
) -> tuple[TrigPoly, float, float, int]:
    """Newton steps on ∫|f − t| with the Hessian 2Σ e(z)e(z)ᵀ/|res′(z)| over zeros z.

    The Hessian is assembled from the moments Σ w(z) e^{iqz}, q ≤ 2n − 2.
    ``lower`` keeps the best certificate seen.  A step is taken when it lowers
    ``upper``, or leaves it flat to rounding while raising the certificate.
    """
    m = n - 1
    steps = 0
    data = _sign_moments(f - argmin, n)
    while steps < budget and _gap(upper, lower) > target and data is not None:
        steps += 1
        _, slope = eval_with_derivative(f - argmin, data.roots)
        slope = np.abs(slope)
        weight = 2.0 / np.maximum(slope, 1e-12 * max(float(np.max(slope)), 1e-300))
        cw, sw = _point_moments(data.roots, weight, 2 * m)
        delta = _unpack(_solve_spd(_assemble_gram(cw, sw, m), data.gradient()), n)

        lam = 1.0
        for _ in range(_LINE_SEARCH):
            cand = argmin + lam * delta
            c_res = f - cand
            c_data = _sign_moments(c_res, n)
            c_upper, c_lower = _l1_bounds(c_res, n, c_data)
            if c_upper < upper or (c_upper <= upper * (1.0 + _FLAT) and c_lower > lower):
                break
            lower = max(lower, c_lower)
            lam /= 2.0
        else:
            logger.debug("L1 Newton: no descent after %d halvings", _LINE_SEARCH)
            break
        argmin, upper, lower, data = cand, c_upper, max(lower, c_lower), c_data
        logger.debug("L1 Newton step=%d λ=%g upper=%.12e gap=%.2e", steps, lam, upper, _gap(upper, lower))
    return argmin, upper, min(lower, upper), steps


# ----- 1 < p < ∞ -----


def _lp_certificate(res: np.ndarray, n: int, p: float) -> tuple[float, float]:
    """(upper, lower) for the trapezoid L_p norm of grid residual values."""
    n_points = res.size
    h = 2.0 * math.pi / n_points
    upper = float(h * np.sum(np.abs(res) ** p)) ** (1.0 / p)
    if upper == 0.0:
        return 0.0, 0.0
    dual = np.abs(res / upper) ** (p - 1.0) * np.sign(res)
    low = partial_sum(analyze(GridFunction(dual)), n)
    g = dual - eval_grid(low, n_points).values
    pp = conjugate(p)
    g_norm = float(h * np.sum(np.abs(g) ** pp)) ** (1.0 / pp)
    if g_norm == 0.0:
        return upper, 0.0
    lower = max(0.0, float(h * np.dot(res, g)) / g_norm)
    return upper, min(lower, upper)


class _LpSolver:
    """Weighted least squares over T_{n−1} on a fixed uniform grid.

    Coefficients are packed as x = [c0, c_1..c_{n−1}, d_1..d_{n−1}] for
    t = c0 + Σ (c_k cos kt + d_k sin kt).  Gram matrices are assembled from
    FFT moments of the weights.
    """

    def __init__(self, f: TrigPoly, n: int, p: float, n_points: int):
        self.f = f
        self.n = n
        self.p = p
        self.n_points = n_points
        self.h = 2.0 * math.pi / n_points
        self.fvals = eval_grid(f, n_points).values

    def poly(self, x: np.ndarray) -> TrigPoly:
        return _unpack(x, self.n)

    def pack(self, t: TrigPoly) -> np.ndarray:
        t = partial_sum(t, self.n).padded(self.n - 1)
        return np.concatenate(([t.a0 / 2.0], t.cos_coeffs, t.sin_coeffs))

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.fvals - eval_grid(self.poly(x), self.n_points).values

    def objective(self, res: np.ndarray) -> float:
        return float(self.h * np.sum(np.abs(res) ** self.p))

    def _moments(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        spec = np.fft.fft(values)
        return spec.real, -spec.imag

    def solve_weighted(self, w: np.ndarray) -> np.ndarray:
        m = self.n - 1
        cw, sw = self._moments(w)
        cf, sf = self._moments(w * self.fvals)
        gram = _assemble_gram(cw[: 2 * m + 1], sw[: 2 * m + 1], m)
        j = np.arange(1, m + 1)
        rhs = np.concatenate(([cf[0]], cf[j], sf[j]))
        return _solve_spd(gram, rhs)

    def run(
        self, x: np.ndarray, eps: float, floor: float, tol: float, budget: int
    ) -> tuple[np.ndarray, float, int, float]:
        """Iterate from ``x`` until the objective settles; returns (x, obj, its, eps)."""
        p = self.p
        res = self.residual(x)
        obj = self.objective(res)
        best_x, best_obj = x, obj
        its = 0
        while its < budget:
            its += 1
            w = (res * res + eps * eps) ** ((p - 2.0) / 2.0)
            w = w / np.mean(w)
            x_ls = self.solve_weighted(w)
            x = x_ls if p <= 2.0 else x + (x_ls - x) / (p - 1.0)
            res = self.residual(x)
            new_obj = self.objective(res)
            change = abs(obj - new_obj) / max(new_obj, 1e-300)
            obj = new_obj
            if obj < best_obj:
                best_x, best_obj = x, obj
            logger.debug("IRLS it=%d obj=%.12e eps=%.1e change=%.2e", its, obj, eps, change)
            if p == 2.0:
                break
            if change < tol:
                if eps > floor:
                    eps = max(eps / 10.0, floor)
                    continue
                break
        return best_x, best_obj, its, eps


def best_approx_lp(
    f: TrigPoly,
    n: int,
    p: Index,
    tol: float = DEFAULT_TOL,
    *,
    warm_start: Optional[TrigPoly] = None,
    grid_size: Optional[int] = None,
    max_iter: int = MAX_ITERATIONS,
) -> ApproxResult:
    """E_n(f)_{L_p} for 1 ≤ p < ∞ with a duality certificate.

    Iterates until the relative objective change is below ``tol`` and the
    relative duality gap is at most 10·tol; raises :class:`AccuracyError`
    carrying both bounds when ``max_iter`` runs out first.
    """
    _check_order(n)
    p = validate_index(p)
    if p is INF:
        raise DomainError("best approximation in the uniform norm is not supported")
    if not (tol > 0.0):
        raise DomainError(f"tol must be > 0, got {tol!r}")
    if f.effective_degree < n:
        return ApproxResult(0.0, 0.0, partial_sum(f, n), 0, p, n)

    n_points = grid_size or next_pow2(max(MIN_GRID, GRID_FACTOR * f.degree))
    solver = _LpSolver(f, n, p, n_points)
    target = 10.0 * tol

    def certify(t: TrigPoly) -> tuple[float, float]:
        if p == 1.0:
            return _l1_certificate(f - t, n)
        return _lp_certificate(solver.residual(solver.pack(t)), n, p)

    start = warm_start if warm_start is not None else partial_sum(f, n)
    x = solver.pack(start)
    scale = float(np.sqrt(np.mean(solver.residual(x) ** 2)))
    eps = EPS_START * scale if p < 2.0 else EPS_FLOOR * scale
    floor = (L1_EPS_FLOOR if p == 1.0 else EPS_FLOOR) * scale

    inner_tol = tol
    iterations = 0
    best: Optional[tuple[TrigPoly, float]] = None
    best_lower = 0.0
    while True:
        budget = max_iter - iterations
        if p == 1.0:
            # IRLS only has to land in Newton's basin.
            budget = min(budget, L1_WARMUP)
        x, _obj, its, eps = solver.run(x, eps, floor, inner_tol, budget)
        iterations += its
        argmin = solver.poly(x)
        upper, lower = certify(argmin)
        if p == 1.0:
            argmin, upper, lower, steps = _l1_refine(
                f, n, argmin, upper, lower, target, min(NEWTON_STEPS, max(max_iter - iterations, 1))
            )
            iterations += steps
            x = solver.pack(argmin)
        if best is None or upper < best[1]:
            best = (argmin, upper)
        best_lower = max(best_lower, lower)
        if warm_start is not None:
            w_upper, w_lower = certify(partial_sum(warm_start, n))
            if w_upper < best[1]:
                best = (partial_sum(warm_start, n), w_upper)
            best_lower = max(best_lower, w_lower)
        argmin, upper = best
        result = ApproxResult(upper, min(best_lower, upper), argmin, iterations, p, n)
        if result.gap <= target or p == 2.0:
            logger.info(
                "E_%d in L_%g: [%.9e, %.9e] after %d iterations",
                n, p, result.lower, result.upper, iterations,
            )
            return result
        if iterations >= max_iter or inner_tol < 1e-15:
            logger.warning("best approximation stalled with relative gap %.2e", result.gap)
            raise AccuracyError(
                f"duality gap {result.gap:.3e} above {target:g} after {iterations} iterations",
                best_estimate=result.upper,
                lower=result.lower,
                upper=result.upper,
            )
        inner_tol /= 100.0


def best_approx(
    f: TrigPoly,
    n: int,
    p: Index,
    tol: float = DEFAULT_TOL,
    *,
    warm_start: Optional[TrigPoly] = None,
    grid_size: Optional[int] = None,
    max_iter: int = MAX_ITERATIONS,
) -> ApproxResult:
    """Dispatch: exact projection for p = 2, iterative solver otherwise."""
    p = validate_index(p)
    if p == 2.0:
        return best_approx_l2(f, n)
    return best_approx_lp(
        f, n, p, tol, warm_start=warm_start, grid_size=grid_size, max_iter=max_iter
    )
