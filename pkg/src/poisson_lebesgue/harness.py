"""
Experiment orchestration: sampling from B_p⁰, batch verification and
persistence of coefficient files, CSV rows and JSON summaries.

Every sample draws from its own Philox stream keyed by (seed, index), so
results do not depend on worker count or completion order.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, TextIO, Union

import numpy as np

from .errors import AccuracyError, DomainError
from .lebesgue import verify_inequality
from .params import INF, ClassParams, Index
from .results import BoundReport, ExperimentSummary
from .trig import TrigPoly, lp_norm, next_pow2

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "alpha",
    "r",
    "beta",
    "p",
    "n",
    "lhs",
    "lhs_radius",
    "en_lower",
    "en_upper",
    "rhs_main",
    "rhs_full",
    "implied_gamma",
    "pass",
)
SAMPLE_NORM_TOL = 1e-10
DEFAULT_EXPERIMENT_TOL = 1e-3


@dataclass(frozen=True)
class ProgressEvent:
    """Emitted by :func:`run_experiment`.

    ``kind`` is ``"experiment_start"``, ``"sample_end"`` or
    ``"experiment_end"``; ``status`` is ``"pass"``, ``"fail"`` or
    ``"error"`` for ``sample_end``.
    """

    kind: str
    index: Optional[int] = None
    total: Optional[int] = None
    status: Optional[str] = None


ProgressCallback = Callable[[ProgressEvent], None]


@dataclass(frozen=True)
class ExperimentConfig:
    params: ClassParams
    n: int
    samples: int = 200
    degree_cap: int = 2048
    seed: int = 0
    tol: float = DEFAULT_EXPERIMENT_TOL
    grid_size: Optional[int] = None
    output: Optional[Path] = None
    fmt: str = "json"
    max_workers: Optional[int] = None

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise DomainError(f"samples must be ≥ 1, got {self.samples!r}")
        if self.degree_cap < 1:
            raise DomainError(f"degree_cap must be ≥ 1, got {self.degree_cap!r}")
        if self.n < 1:
            raise DomainError(f"n must be ≥ 1, got {self.n!r}")
        if not (0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.fmt not in ("json", "csv"):
            raise DomainError(f"format must be 'json' or 'csv', got {self.fmt!r}")
        grid = self.grid_size
        if grid is None:
            object.__setattr__(self, "grid_size", next_pow2(8 * self.degree_cap))
        elif grid & (grid - 1) or grid < 8 * self.degree_cap:
            raise DomainError(
                f"grid_size must be a power of two ≥ 8·degree_cap = {8 * self.degree_cap}, got {grid!r}"
            )
        if self.degree_cap < self.n:
            logger.warning(
                "degree_cap %d < n %d: every sample is degenerate (ρ_n vanishes)",
                self.degree_cap,
                self.n,
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "n": self.n,
            "samples": self.samples,
            "degree_cap": self.degree_cap,
            "seed": self.seed,
            "tol": self.tol,
            "grid_size": self.grid_size,
            "output": str(self.output) if self.output is not None else None,
            "format": self.fmt,
        }


# ----- sampling -----


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Philox generator keyed by (seed, sample index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def sample_unit_ball(
    p: Index, degree_cap: int, rng: np.random.Generator, *, tol: float = SAMPLE_NORM_TOL
) -> TrigPoly:
    """Zero-mean polynomial with N(0,1)/k coefficients, normalized to ‖φ‖_p = 1."""
    if degree_cap < 1:
        raise DomainError(f"degree_cap must be ≥ 1, got {degree_cap!r}")
    k = np.arange(1, degree_cap + 1, dtype=float)
    a = rng.standard_normal(degree_cap) / k
    b = rng.standard_normal(degree_cap) / k
    raw = TrigPoly(0.0, a, b)
    return raw / lp_norm(raw, p, tol=tol)


# ----- persistence -----


def write_coefficients(path: Union[str, Path], f: TrigPoly) -> None:
    """JSON ``{a0, cos, sin}``; ``repr`` of a float round-trips exactly."""
    Path(path).write_text(json.dumps(f.to_dict(), indent=2) + "\n", encoding="utf-8")


def read_coefficients(path: Union[str, Path]) -> TrigPoly:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: not a coefficient file: {exc}") from exc
    if not isinstance(data, dict) or "cos" not in data or "sin" not in data:
        raise DomainError(f"{path}: expected an object with 'a0', 'cos' and 'sin'")
    return TrigPoly.from_dict(data)


def _fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def report_row(report: BoundReport) -> Dict[str, str]:
    params = report["params"]
    return {
        "alpha": _fmt(params["alpha"]),
        "r": _fmt(params["r"]),
        "beta": _fmt(params["beta"]),
        "p": "inf" if params["p"] == "inf" else _fmt(params["p"]),
        "n": str(report["n"]),
        "lhs": _fmt(report["lhs"].value),
        "lhs_radius": _fmt(report["lhs_radius"].value),
        "en_lower": _fmt(report["en"]["lower"]),
        "en_upper": _fmt(report["en"]["upper"]),
        "rhs_main": _fmt(report["rhs_main"].value),
        "rhs_full": _fmt(report["rhs_full"].value),
        "implied_gamma": _fmt(report["implied_gamma"]),
        "pass": "true" if report["passed"] else "false",
    }


def write_rows(target: Union[str, Path, TextIO], reports: Iterable[BoundReport]) -> None:
    """CSV rows with the documented columns, floats to 17 significant digits."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            write_rows(fh, reports)
        return
    writer = csv.DictWriter(target, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for report in reports:
        writer.writerow(report_row(report))


def rows_as_text(reports: Iterable[BoundReport]) -> str:
    buf = io.StringIO()
    write_rows(buf, reports)
    return buf.getvalue()


# ----- experiments -----


def _emit(cb: Optional[ProgressCallback], **fields: Any) -> None:
    if cb is None:
        return
    try:
        cb(ProgressEvent(**fields))
    except Exception:
        logger.exception("progress_callback raised; continuing")


def _run_sample(config: ExperimentConfig, index: int) -> BoundReport:
    rng = sample_rng(config.seed, index)
    phi = sample_unit_ball(config.params.p, config.degree_cap, rng)
    report = verify_inequality(
        phi, config.params, config.n, config.tol, grid_size=config.grid_size
    )
    return report.with_index(index)


def summarize(
    config: ExperimentConfig,
    reports: List[BoundReport],
    errors: Dict[int, Exception],
    runtime_seconds: float,
) -> ExperimentSummary:
    reports = sorted(reports, key=lambda r: r["index"])
    failures = [
        {"index": r["index"], "ratio": r["ratio"], "implied_gamma": r["implied_gamma"]}
        for r in reports
        if not r["passed"]
    ]
    accuracy_errors = [
        {"index": i, "error": type(exc).__name__, "message": str(exc)}
        for i, exc in sorted(errors.items())
    ]
    gammas = [r["implied_gamma"] for r in reports if r["implied_gamma"] is not None]
    ratios = [r["ratio"] for r in reports if r["ratio"] is not None]
    passed = sum(1 for r in reports if r["passed"])
    return ExperimentSummary(
        config=config.to_dict(),
        samples=config.samples,
        passed=passed,
        pass_rate=passed / config.samples,
        failures=failures,
        accuracy_errors=accuracy_errors,
        degenerate=sum(1 for r in reports if r["degenerate"]),
        in_regime=config.params.in_regime(config.n),
        max_implied_gamma=max(gammas) if gammas else None,
        min_ratio=min(ratios) if ratios else None,
        max_ratio=max(ratios) if ratios else None,
        runtime_seconds=runtime_seconds,
    )


def run_experiment(
    config: ExperimentConfig,
    progress_callback: Optional[ProgressCallback] = None,
) -> tuple[ExperimentSummary, List[BoundReport]]:
    """Sample, verify and aggregate; writes ``config.output`` when set.

    Accuracy errors from the solver are collected per sample and reported
    separately from inequality failures.
    """
    if config.params.p is INF:
        raise DomainError("experiments need a finite p")
    started = time.monotonic()
    total = config.samples
    _emit(progress_callback, kind="experiment_start", total=total)
    reports: List[BoundReport] = []
    errors: Dict[int, Exception] = {}

    with concurrent.futures.ThreadPoolExecutor(max_workers=config.max_workers) as executor:
        future_to_index = {
            executor.submit(_run_sample, config, i): i for i in range(total)
        }
        for future in concurrent.futures.as_completed(future_to_index):
            i = future_to_index[future]
            try:
                report = future.result()
            except (AccuracyError, DomainError) as exc:
                logger.warning("sample %d: %s", i, exc)
                errors[i] = exc
                _emit(progress_callback, kind="sample_end", index=i, total=total, status="error")
                continue
            reports.append(report)
            _emit(
                progress_callback,
                kind="sample_end",
                index=i,
                total=total,
                status="pass" if report["passed"] else "fail",
            )

    reports.sort(key=lambda r: r["index"])
    summary = summarize(config, reports, errors, time.monotonic() - started)
    _emit(progress_callback, kind="experiment_end", total=total)
    if config.output is not None:
        write_experiment(config, summary, reports)
    return summary, reports


def write_experiment(
    config: ExperimentConfig, summary: ExperimentSummary, reports: List[BoundReport]
) -> None:
    path = Path(config.output)
    try:
        if config.fmt == "csv":
            write_rows(path, reports)
        else:
            payload = summary.to_dict()
            payload["reports"] = [r.to_dict() for r in reports]
            path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"could not write experiment output to {path}: {exc}") from exc
    logger.info("wrote %d reports to %s", len(reports), path)
