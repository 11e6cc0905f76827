"""
Exception hierarchy.

Domain errors subclass ``ValueError`` so library callers that already catch
``ValueError`` for bad input keep working; accuracy errors subclass
``ArithmeticError`` and carry the best estimate reached before giving up.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class LebesgueError(Exception):
    """Base class for every error raised by poisson_lebesgue."""

    def context(self) -> Dict[str, Any]:
        """Machine-readable detail for the CLI's ``{error, context}`` payload."""
        return {}


class DomainError(LebesgueError, ValueError):
    """An argument lies outside the domain of the formula being evaluated."""


class DivergenceError(DomainError):
    """Gauss's series at z = 1 diverges (c − a − b ≤ 0)."""


class AliasingError(DomainError):
    """A sampling grid is too coarse for the frequencies it must carry."""

    def __init__(self, message: str, *, grid_size: int, required: int):
        super().__init__(message)
        self.grid_size = grid_size
        self.required = required

    def context(self) -> Dict[str, Any]:
        return {"grid_size": self.grid_size, "required": self.required}


class ContractError(DomainError):
    """A function violates a class constraint (φ ⊥ 1, ‖φ‖_p ≤ 1)."""


class AccuracyError(LebesgueError, ArithmeticError):
    """An iterative computation stopped before reaching its tolerance.

    ``best_estimate`` is the last value computed; solvers that produce
    two-sided bounds also attach ``lower`` and ``upper``.
    """

    def __init__(
        self,
        message: str,
        *,
        best_estimate: Any = None,
        lower: Optional[float] = None,
        upper: Optional[float] = None,
    ):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.lower = lower
        self.upper = upper

    def context(self) -> Dict[str, Any]:
        ctx: Dict[str, Any] = {}
        best = self.best_estimate
        if best is not None:
            ctx["best_estimate"] = best.to_dict() if hasattr(best, "to_dict") else best
        if self.lower is not None:
            ctx["lower"] = self.lower
        if self.upper is not None:
            ctx["upper"] = self.upper
        return ctx


def exit_code_for(exc: BaseException) -> int:
    """CLI exit status: domain errors → 3, accuracy errors → 4, other → 1."""
    if isinstance(exc, DomainError):
        return 3
    if isinstance(exc, AccuracyError):
        return 4
    return 1
