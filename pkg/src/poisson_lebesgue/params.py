"""
Class parameters (α, r, β, p), conjugate exponents and the threshold n₀.

The integrability index is either a real number ``p ≥ 1`` or the
distinguished value :data:`INF`.  ``INF`` is never turned into
``float("inf")`` inside a formula; every formula branches on it explicitly.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from typing import Union

from .errors import DomainError


class _Infinity(enum.Enum):
    INF = "inf"

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"


INF = _Infinity.INF

Index = Union[float, _Infinity]

# Ties within a few ulp of the threshold count as satisfied: at
# (α=1, r=1/2, p=1) the condition holds with equality at n = 1225.
_TIE_ULPS = 4.0


def is_inf(p: Index) -> bool:
    return p is INF


def parse_index(text: Union[str, float, int, _Infinity]) -> Index:
    """Parse a CLI/user value into an index: ``"inf"``, ``"∞"`` or a number ≥ 1."""
    if text is INF:
        return INF
    if isinstance(text, str):
        s = text.strip().lower()
        if s in ("inf", "infinity", "∞", "+inf"):
            return INF
        try:
            value = float(s)
        except ValueError as exc:
            raise DomainError(f"not an integrability index: {text!r}") from exc
    else:
        value = float(text)
    if math.isinf(value) and value > 0:
        return INF
    return validate_index(value)


def validate_index(p: Index) -> Index:
    if p is INF:
        return INF
    if not isinstance(p, (int, float)) or math.isnan(p):
        raise DomainError(f"index must be a real number ≥ 1 or INF, got {p!r}")
    if math.isinf(p):
        return INF
    if p < 1:
        raise DomainError(f"index must be ≥ 1, got {p!r}")
    return float(p)


def conjugate(p: Index) -> Index:
    """Return p′ with 1/p + 1/p′ = 1 (conjugate(1) = INF, conjugate(INF) = 1)."""
    p = validate_index(p)
    if p is INF:
        return 1.0
    if p == 1.0:
        return INF
    return p / (p - 1.0)


def chi(p: Index) -> float:
    p = validate_index(p)
    return 1.0 if p is INF else float(p)


def threshold(p: Index) -> float:
    """Right-hand side of the n₀ condition for index ``p``."""
    p = validate_index(p)
    if p is INF:
        return 1.0 / (3.0 * math.pi) ** 3
    if p == 1.0:
        return 1.0 / 14.0
    return (p - 1.0) / p / (3.0 * math.pi) ** 3


@dataclass(frozen=True)
class ClassParams:
    """The parameter tuple (α, r, β, p) of the class C^{α,r}_{β,p}."""

    alpha: float
    r: float
    beta: float = 0.0
    p: Index = 1.0

    def __post_init__(self) -> None:
        if not (self.alpha > 0) or math.isinf(self.alpha):
            raise DomainError(f"alpha must be a finite positive real, got {self.alpha!r}")
        if not (0.0 < self.r < 1.0):
            raise DomainError(f"r must lie in (0, 1), got {self.r!r}")
        if not math.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta!r}")
        object.__setattr__(self, "p", validate_index(self.p))

    @property
    def pprime(self) -> Index:
        return conjugate(self.p)

    @property
    def chi(self) -> float:
        return chi(self.p)

    @property
    def threshold(self) -> float:
        return threshold(self.p)

    @property
    def alpha_r(self) -> float:
        return self.alpha * self.r

    @property
    def phase(self) -> float:
        """The kernel phase βπ/2."""
        return self.beta * math.pi / 2.0

    def with_p(self, p: Index) -> "ClassParams":
        return ClassParams(alpha=self.alpha, r=self.r, beta=self.beta, p=p)

    def in_regime(self, n: int) -> bool:
        return n >= n0(self)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "r": self.r,
            "beta": self.beta,
            "p": "inf" if self.p is INF else self.p,
        }


def condition_value(params: ClassParams, n: int) -> float:
    """Left side of the n₀ condition: n^{−r}/(αr) + αr·χ(p)·n^{−(1−r)}."""
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    ar = params.alpha_r
    return n ** (-params.r) / ar + ar * params.chi * n ** (-(1.0 - params.r))


def _holds(params: ClassParams, n: int, limit: float) -> bool:
    return condition_value(params, n) <= limit


def n0(params: ClassParams) -> int:
    """Smallest positive integer n satisfying the threshold condition.

    The left side is strictly decreasing in n, so exponential bracketing
    followed by integer bisection finds the same n as a linear scan.
    """
    limit = params.threshold * (1.0 + _TIE_ULPS * sys.float_info.epsilon)
    if _holds(params, 1, limit):
        return 1
    lo, hi = 1, 2
    while not _holds(params, hi, limit):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _holds(params, mid, limit):
            hi = mid
        else:
            lo = mid
    return hi


def n0_linear(params: ClassParams, limit: int = 10_000_000) -> int:
    """Linear-scan oracle for :func:`n0`; raises if nothing ≤ ``limit`` works."""
    bound = params.threshold * (1.0 + _TIE_ULPS * sys.float_info.epsilon)
    for n in range(1, limit + 1):
        if _holds(params, n, bound):
            return n
    raise DomainError(f"no n ≤ {limit} satisfies the threshold condition")
