"""
Typed result records.

Dict subclasses with attribute access, so every report is directly
``json.dumps``-able (after :meth:`_DictLike.to_dict`) and can be read as
``report["lhs"]`` or ``report.lhs``.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from .scaled import ScaledValue


def to_plain(value: Any) -> Any:
    if isinstance(value, _DictLike):
        return value.to_dict()
    if isinstance(value, ScaledValue):
        out = value.to_dict()
        out["value"] = value.value
        return out
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: to_plain(v) for k, v in value.items()}
    return value


class _DictLike(dict):
    """Base for typed results that stay fully dict-compatible.

    Subclassing ``dict`` keeps ``isinstance(report, dict)`` and
    ``json.dumps(report.to_dict())`` working; attribute access is layered on
    top.
    """

    __slots__ = ()

    def __getattr__(self, name: str) -> Any:
        try:
            return self[name]
        except KeyError as e:
            raise AttributeError(name) from e

    def to_dict(self) -> Dict[str, Any]:
        """Plain ``dict`` copy with nested records and ScaledValues unwrapped."""
        return {key: to_plain(value) for key, value in self.items()}


class BoundReport(_DictLike):
    """One inequality check ‖ρ_n(f)‖_C ≤ rhs for a single φ.

    ``passed`` is the conservative verdict: ``lhs + lhs_radius ≤ rhs_full``
    with the right-hand side evaluated at ``en["lower"]``.

    ``en["lower"]`` bounds the continuous E_n(φ)_{L_p} from below only for
    p = 1 (exact step-function certificate) and p = 2 (Parseval).  For other
    p it bounds the trapezoid-discretized best approximation on the solver
    grid, so the verdict is certified up to that discretization.
    """

    def __init__(
        self,
        *,
        params: Dict[str, Any],
        n: int,
        lhs: ScaledValue,
        lhs_radius: ScaledValue,
        en: Dict[str, Any],
        rhs_full: ScaledValue,
        rhs_main: ScaledValue,
        implied_gamma: Optional[float],
        passed: bool,
        in_regime: bool,
        degenerate: bool = False,
        ratio: Optional[float] = None,
        index: Optional[int] = None,
    ):
        super().__init__(
            params=params,
            n=n,
            lhs=lhs,
            lhs_radius=lhs_radius,
            en=en,
            rhs_full=rhs_full,
            rhs_main=rhs_main,
            implied_gamma=implied_gamma,
            passed=passed,
            in_regime=in_regime,
            degenerate=degenerate,
            ratio=ratio,
            index=index,
        )

    def with_index(self, index: int) -> "BoundReport":
        fields = dict(self)
        fields["index"] = index
        return BoundReport(**fields)


class ISReport(_DictLike):
    def __init__(
        self,
        *,
        s: float,
        n: int,
        v: float,
        i_s_computed: float,
        f_term: float,
        implied_theta: float,
        in_regime: bool,
    ):
        super().__init__(
            s=s,
            n=n,
            v=v,
            i_s_computed=i_s_computed,
            f_term=f_term,
            implied_theta=implied_theta,
            in_regime=in_regime,
        )


class KernelNormReport(_DictLike):
    """Computed (1/π)‖P^{(n)}‖_s against its large-n formula."""

    def __init__(
        self,
        *,
        params: Dict[str, Any],
        n: int,
        s: Any,
        norm: ScaledValue,
        main: ScaledValue,
        bracket: ScaledValue,
        implied_delta: float,
        in_regime: bool,
        trunc_k: int,
        tail_bound: float,
    ):
        super().__init__(
            params=params,
            n=n,
            s=s,
            log_scale=norm.log_scale,
            mantissa=norm.mantissa,
            norm=norm,
            main=main,
            bracket=bracket,
            implied_delta=implied_delta,
            in_regime=in_regime,
            trunc_k=trunc_k,
            tail_bound=tail_bound,
        )


class ExperimentSummary(_DictLike):
    def __init__(
        self,
        *,
        config: Dict[str, Any],
        samples: int,
        passed: int,
        pass_rate: float,
        failures: List[Dict[str, Any]],
        accuracy_errors: List[Dict[str, Any]],
        degenerate: int,
        in_regime: bool,
        max_implied_gamma: Optional[float],
        min_ratio: Optional[float],
        max_ratio: Optional[float],
        runtime_seconds: float,
    ):
        super().__init__(
            config=config,
            samples=samples,
            passed=passed,
            pass_rate=pass_rate,
            failures=failures,
            accuracy_errors=accuracy_errors,
            degenerate=degenerate,
            in_regime=in_regime,
            max_implied_gamma=max_implied_gamma,
            min_ratio=min_ratio,
            max_ratio=max_ratio,
            runtime_seconds=runtime_seconds,
        )

    @property
    def failed_in_regime(self) -> bool:
        """True when some in-regime sample failed the inequality."""
        return bool(self["in_regime"] and self["failures"])
