"""
Log-scaled reals.

A :class:`ScaledValue` stores ``mantissa · e^{log_scale}`` so that factors
like ``e^{−αn^r}`` survive at n where they underflow a double.  After
normalization ``|mantissa| ∈ [1, e)`` or the mantissa is exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Union

Number = Union[int, float]


@total_ordering
@dataclass(frozen=True)
class ScaledValue:
    mantissa: float
    log_scale: float = 0.0

    def __post_init__(self) -> None:
        m, s = float(self.mantissa), float(self.log_scale)
        if not math.isfinite(m) or not math.isfinite(s):
            raise ValueError(f"ScaledValue needs finite parts, got {m!r}, {s!r}")
        if m == 0.0:
            s = 0.0
        else:
            log_m = math.log(abs(m))
            shift = math.floor(log_m)
            if abs(shift) > 700:
                m = math.copysign(math.exp(log_m - shift), m)
            elif shift:
                m = m / math.exp(shift)
            s += shift
            # Guard the [1, e) window against rounding in log/exp.
            if abs(m) >= math.e:
                m /= math.e
                s += 1.0
            elif abs(m) < 1.0:
                m *= math.e
                s -= 1.0
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "log_scale", s)

    @classmethod
    def zero(cls) -> "ScaledValue":
        return cls(0.0, 0.0)

    @classmethod
    def of(cls, value: Number, log_scale: float = 0.0) -> "ScaledValue":
        """``value · e^{log_scale}`` with ``value`` an ordinary float."""
        return cls(float(value), log_scale)

    @classmethod
    def from_log(cls, log_abs: float, sign: float = 1.0) -> "ScaledValue":
        if math.isinf(log_abs) and log_abs < 0:
            return cls.zero()
        return cls(math.copysign(1.0, sign), log_abs)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0.0

    @property
    def sign(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        return math.copysign(1.0, self.mantissa)

    def log_abs(self) -> float:
        """ln|x|; ``-inf`` for zero."""
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    @property
    def value(self) -> float:
        """The plain float (underflows to 0.0 / overflows to ±inf when it must)."""
        if self.mantissa == 0.0:
            return 0.0
        try:
            return self.mantissa * math.exp(self.log_scale)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    def __float__(self) -> float:
        return self.value

    def in_units_of(self, log_scale: float) -> float:
        """The plain float ``x · e^{−log_scale}``."""
        if self.mantissa == 0.0:
            return 0.0
        return self.mantissa * math.exp(self.log_scale - log_scale)

    def __neg__(self) -> "ScaledValue":
        return ScaledValue(-self.mantissa, self.log_scale)

    def __abs__(self) -> "ScaledValue":
        return ScaledValue(abs(self.mantissa), self.log_scale)

    def __mul__(self, other: Union["ScaledValue", Number]) -> "ScaledValue":
        if isinstance(other, ScaledValue):
            return ScaledValue(self.mantissa * other.mantissa, self.log_scale + other.log_scale)
        return ScaledValue(self.mantissa * float(other), self.log_scale)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["ScaledValue", Number]) -> "ScaledValue":
        if isinstance(other, ScaledValue):
            if other.mantissa == 0.0:
                raise ZeroDivisionError("division by a zero ScaledValue")
            return ScaledValue(self.mantissa / other.mantissa, self.log_scale - other.log_scale)
        return ScaledValue(self.mantissa / float(other), self.log_scale)

    def ratio(self, other: "ScaledValue") -> float:
        """``self / other`` as a plain float."""
        return (self / other).value

    def __add__(self, other: Union["ScaledValue", Number]) -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.of(other)
        if self.mantissa == 0.0:
            return other
        if other.mantissa == 0.0:
            return self
        scale = max(self.log_scale, other.log_scale)
        m = self.mantissa * math.exp(self.log_scale - scale) + other.mantissa * math.exp(
            other.log_scale - scale
        )
        return ScaledValue(m, scale)

    __radd__ = __add__

    def __sub__(self, other: Union["ScaledValue", Number]) -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.of(other)
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float)):
            other = ScaledValue.of(other)
        if not isinstance(other, ScaledValue):
            return NotImplemented
        return self.mantissa == other.mantissa and self.log_scale == other.log_scale

    def __hash__(self) -> int:
        return hash((self.mantissa, self.log_scale))

    def __lt__(self, other: Union["ScaledValue", Number]) -> bool:
        if not isinstance(other, ScaledValue):
            other = ScaledValue.of(other)
        return (self - other).mantissa < 0.0

    def to_dict(self) -> dict:
        return {"mantissa": self.mantissa, "log_scale": self.log_scale}

    def __repr__(self) -> str:
        return f"ScaledValue({self.mantissa!r}, log_scale={self.log_scale!r})"
