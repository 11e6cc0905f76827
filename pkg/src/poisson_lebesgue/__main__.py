"""Command-line entry point for poisson-lebesgue.

Usage:
    python -m poisson_lebesgue n0 --alpha A --r R [--p P]
    python -m poisson_lebesgue hyp2f1 --a A --b B --c C
    python -m poisson_lebesgue is-integral --s S --v V
    python -m poisson_lebesgue kernel-norm --alpha A --r R --n N --s S
    python -m poisson_lebesgue best-approx --p P --n N COEFF_FILE
    python -m poisson_lebesgue rhs --alpha A --r R --p P --n N --en E
    python -m poisson_lebesgue verify --alpha A --r R --p P --n N [--samples K | --phi FILE ...]
    python -m poisson_lebesgue sharpness --alpha A --r R --p P --n N --x0 X
    python -m poisson_lebesgue check-asymptotics --alpha A --r R --n N --s S
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional

from . import __version__
from .bestapprox import MAX_ITERATIONS, best_approx
from .errors import LebesgueError, exit_code_for
from .harness import (
    DEFAULT_EXPERIMENT_TOL,
    ExperimentConfig,
    ProgressEvent,
    read_coefficients,
    rows_as_text,
    run_experiment,
)
from .kernel import kernel_norm_envelope, make_kernel_spec
from .lebesgue import (
    GAMMA_BOUND,
    check_is_estimate,
    kernel_norm_report,
    rhs,
    sharpness_probe,
    verify_batch,
)
from .params import INF, ClassParams, n0, parse_index
from .results import BoundReport, to_plain
from .specfun import gauss_2f1_unit, gauss_2f1_series, i_s

logger = logging.getLogger(__name__)


def _add_class_flags(parser: argparse.ArgumentParser, *, with_p: bool = True) -> None:
    """(α, r, β[, p]) flags shared by every subcommand that builds ClassParams."""
    parser.add_argument("--alpha", type=float, required=True, help="α > 0.")
    parser.add_argument("--r", type=float, required=True, help="r ∈ (0, 1).")
    parser.add_argument("--beta", type=float, default=0.0, help="Phase shift β (default 0).")
    if with_p:
        parser.add_argument(
            "--p", default="1", help="Integrability index ≥ 1 or 'inf' (default 1)."
        )


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=["json", "csv"], default="json", help="Output format (default json)."
    )
    parser.add_argument(
        "--out", type=Path, default=None, metavar="PATH", help="Write output to PATH instead of stdout."
    )


def _params(args: argparse.Namespace, p: Any = 1.0) -> ClassParams:
    return ClassParams(
        alpha=args.alpha, r=args.r, beta=args.beta, p=parse_index(getattr(args, "p", p))
    )


def _flatten(payload: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, f"{name}."))
        elif not isinstance(value, list):
            out[name] = value
    return out


def _emit(args: argparse.Namespace, payload: Any) -> None:
    """Print ``payload`` as JSON (or a one-row CSV) to stdout or ``--out``."""
    payload = to_plain(payload)
    fmt = getattr(args, "format", "json")
    if fmt == "csv" and isinstance(payload, dict):
        flat = _flatten(payload)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, ensure_ascii=False, default=str) + "\n"
    out = getattr(args, "out", None)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ----- progress -----


def _progress_enabled(args: argparse.Namespace) -> bool:
    """True when a progress bar should render (TTY, not verbose, not opted out)."""
    if getattr(args, "verbose", False):
        return False
    if getattr(args, "no_progress", False):
        return False
    if os.environ.get("POISSON_LEBESGUE_NO_PROGRESS"):
        return False
    try:
        return sys.stderr.isatty()
    except Exception:
        return False


class _RichSampleProgress:
    """One bar over the samples of an experiment, rendered on stderr."""

    def __init__(self) -> None:
        from rich.console import Console
        from rich.progress import (
            BarColumn,
            Progress,
            SpinnerColumn,
            TextColumn,
            TimeElapsedColumn,
        )

        self._progress = Progress(
            SpinnerColumn(),
            TextColumn("[bold]samples"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            TimeElapsedColumn(),
            TextColumn("{task.fields[failed]} failed"),
            transient=False,
            console=Console(stderr=True),
        )
        self._task_id: Optional[int] = None
        self._started = False
        self._failed = 0

    def __call__(self, event: ProgressEvent) -> None:
        if event.kind == "experiment_start":
            if not self._started:
                self._progress.start()
                self._started = True
            self._task_id = self._progress.add_task(
                "samples", total=max(event.total or 0, 1), failed=0
            )
        elif event.kind == "sample_end" and self._task_id is not None:
            if event.status != "pass":
                self._failed += 1
            self._progress.update(self._task_id, advance=1, failed=self._failed)
        elif event.kind == "experiment_end":
            self.close()

    def close(self) -> None:
        if self._started:
            self._progress.stop()
            self._started = False


def _make_progress_hook(
    args: argparse.Namespace,
) -> tuple[Optional[Callable[[ProgressEvent], None]], Optional[Any]]:
    """``(callback, closer)``; both ``None`` when disabled or rich is missing."""
    if not _progress_enabled(args):
        return None, None
    try:
        hook = _RichSampleProgress()
    except ImportError:
        return None, None
    return hook, hook


# ----- subcommands -----


def cmd_n0(args: argparse.Namespace) -> int:
    _emit(args, n0(_params(args)))
    return 0


def cmd_hyp2f1(args: argparse.Namespace) -> int:
    if args.series:
        value = gauss_2f1_series(args.a, args.b, args.c)
    else:
        value = gauss_2f1_unit(args.a, args.b, args.c)
    _emit(args, value)
    return 0


def cmd_is_integral(args: argparse.Namespace) -> int:
    _emit(args, i_s(parse_index(args.s), args.v))
    return 0


def cmd_kernel_norm(args: argparse.Namespace) -> int:
    params = _params(args)
    s = parse_index(args.s)
    report = kernel_norm_report(params, args.n, s, args.tol)
    if args.envelope:
        spec = make_kernel_spec(params, args.n)
        report["envelope"] = kernel_norm_envelope(spec, s, args.tol)
    _emit(args, report)
    return 0


def cmd_best_approx(args: argparse.Namespace) -> int:
    f = read_coefficients(args.coeff_file)
    result = best_approx(f, args.n, parse_index(args.p), args.tol, max_iter=args.max_iter)
    _emit(args, result.to_dict(include_argmin=args.argmin))
    return 0


def cmd_rhs(args: argparse.Namespace) -> int:
    _emit(args, rhs(_params(args), args.n, args.en, args.gamma))
    return 0


def _any_in_regime_failure(reports: Iterable[Any]) -> bool:
    return any(
        isinstance(r, BoundReport) and r["in_regime"] and not r["passed"] for r in reports
    )


def cmd_verify(args: argparse.Namespace) -> int:
    params = _params(args)
    if args.phi:
        phis = [read_coefficients(path) for path in args.phi]
        results = verify_batch(
            phis,
            params,
            args.n,
            args.tol,
            max_workers=args.workers,
            grid_size=args.grid,
            return_exceptions=True,
        )
        reports = [r for r in results if isinstance(r, BoundReport)]
        errors = [r for r in results if not isinstance(r, BoundReport)]
        if args.format == "csv":
            text = rows_as_text(reports)
            if args.out is not None:
                args.out.write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
        else:
            _emit(args, {"reports": reports, "errors": [str(e) for e in errors]})
        if errors:
            return exit_code_for(errors[0])
        return 1 if _any_in_regime_failure(reports) else 0

    config = ExperimentConfig(
        params=params,
        n=args.n,
        samples=args.samples,
        degree_cap=args.degree_cap,
        seed=args.seed,
        tol=args.tol,
        grid_size=args.grid,
        output=args.out,
        fmt=args.format,
        max_workers=args.workers,
    )
    hook, closer = _make_progress_hook(args)
    try:
        summary, reports = run_experiment(config, progress_callback=hook)
    finally:
        if closer is not None:
            closer.close()
    if args.out is None:
        if args.format == "csv":
            sys.stdout.write(rows_as_text(reports))
        else:
            _emit(args, summary)
    else:
        print(json.dumps(to_plain(summary.to_dict()), indent=2, default=str), file=sys.stderr)
    return 1 if summary.failed_in_regime else 0


def cmd_sharpness(args: argparse.Namespace) -> int:
    params = _params(args)
    ratio = sharpness_probe(params, args.n, args.x0, args.tol)
    _emit(args, {"params": params.to_dict(), "n": args.n, "x0": args.x0, "ratio": ratio})
    return 0


def cmd_check_asymptotics(args: argparse.Namespace) -> int:
    params = _params(args)
    s = parse_index(args.s)
    report = kernel_norm_report(params, args.n, s, args.tol)
    payload: Dict[str, Any] = {"kernel_norm": report}
    if s is not INF and s > 1.0:
        payload["is_estimate"] = check_is_estimate(params, args.n, s)
    _emit(args, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-lebesgue",
        allow_abbrev=False,
        description="Lebesgue-type inequalities for Fourier sums on generalized Poisson integrals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable INFO-level logging.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_n0 = sub.add_parser("n0", help="Smallest n satisfying the threshold condition.")
    _add_class_flags(p_n0)
    _add_output_flags(p_n0)
    p_n0.set_defaults(func=cmd_n0)

    p_hyp = sub.add_parser("hyp2f1", help="Gauss's hypergeometric function at z = 1.")
    p_hyp.add_argument("--a", type=float, required=True)
    p_hyp.add_argument("--b", type=float, required=True)
    p_hyp.add_argument("--c", type=float, required=True)
    p_hyp.add_argument("--series", action="store_true", help="Sum the series instead of the Γ formula.")
    _add_output_flags(p_hyp)
    p_hyp.set_defaults(func=cmd_hyp2f1)

    p_is = sub.add_parser("is-integral", help="I_s(v) = ‖(1+t²)^{-1/2}‖_{L_s[0,v]}.")
    p_is.add_argument("--s", required=True, help="Index ≥ 1 or 'inf'.")
    p_is.add_argument("--v", type=float, required=True, help="Upper limit v ≥ 0.")
    _add_output_flags(p_is)
    p_is.set_defaults(func=cmd_is_integral)

    p_kn = sub.add_parser("kernel-norm", help="(1/π)‖P^{(n)}‖_s with its large-n formula.")
    _add_class_flags(p_kn, with_p=False)
    p_kn.add_argument("--n", type=int, required=True)
    p_kn.add_argument("--s", required=True, help="Index ≥ 1 or 'inf'.")
    p_kn.add_argument("--tol", type=float, default=1e-10)
    p_kn.add_argument("--envelope", action="store_true", help="Also report the experimental envelope estimate.")
    _add_output_flags(p_kn)
    p_kn.set_defaults(func=cmd_kernel_norm)

    p_ba = sub.add_parser("best-approx", help="Two-sided bounds on E_n(f)_{L_p}.")
    p_ba.add_argument("--p", required=True)
    p_ba.add_argument("--n", type=int, required=True)
    p_ba.add_argument("--tol", type=float, default=1e-6)
    p_ba.add_argument("--max-iter", type=int, default=MAX_ITERATIONS, help="Iteration budget of the solver.")
    p_ba.add_argument("--argmin", action="store_true", help="Include the best polynomial's coefficients.")
    p_ba.add_argument("coeff_file", type=Path, help="JSON coefficient file {a0, cos, sin}.")
    _add_output_flags(p_ba)
    p_ba.set_defaults(func=cmd_best_approx)

    p_rhs = sub.add_parser("rhs", help="Right-hand side of the inequality.")
    _add_class_flags(p_rhs)
    p_rhs.add_argument("--n", type=int, required=True)
    p_rhs.add_argument("--en", type=float, default=1.0, help="E_n value (default 1).")
    p_rhs.add_argument("--gamma", type=float, default=GAMMA_BOUND, help="γ (default (14π)²).")
    _add_output_flags(p_rhs)
    p_rhs.set_defaults(func=cmd_rhs)

    p_ver = sub.add_parser("verify", help="Check the inequality on sampled or given φ.")
    _add_class_flags(p_ver)
    p_ver.add_argument("--n", type=int, required=True)
    p_ver.add_argument("--phi", type=Path, nargs="+", default=None, metavar="FILE",
                       help="Coefficient files of φ (instead of sampling).")
    p_ver.add_argument("--samples", type=int, default=200)
    p_ver.add_argument("--degree-cap", type=int, default=2048)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--tol", type=float, default=DEFAULT_EXPERIMENT_TOL)
    p_ver.add_argument("--grid", type=int, default=None, help="Power-of-two grid ≥ 8·degree-cap.")
    p_ver.add_argument("--workers", type=int, default=None, help="Worker threads.")
    p_ver.add_argument("--no-progress", action="store_true", help="Disable the progress bar even on a TTY.")
    _add_output_flags(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_sh = sub.add_parser("sharpness", help="Hölder-extremal ratio for 1 < p < ∞.")
    _add_class_flags(p_sh)
    p_sh.add_argument("--n", type=int, required=True)
    p_sh.add_argument("--x0", type=float, default=0.0)
    p_sh.add_argument("--tol", type=float, default=1e-10)
    _add_output_flags(p_sh)
    p_sh.set_defaults(func=cmd_sharpness)

    p_ca = sub.add_parser("check-asymptotics", help="Implied remainders δ and Θ.")
    _add_class_flags(p_ca, with_p=False)
    p_ca.add_argument("--n", type=int, required=True)
    p_ca.add_argument("--s", required=True)
    p_ca.add_argument("--tol", type=float, default=1e-10)
    _add_output_flags(p_ca)
    p_ca.set_defaults(func=cmd_check_asymptotics)

    return parser


def _report_error(exc: BaseException) -> int:
    context = exc.context() if isinstance(exc, LebesgueError) else {}
    payload = {"error": type(exc).__name__, "message": str(exc), "context": to_plain(context)}
    print(json.dumps(payload, default=str), file=sys.stderr)
    return exit_code_for(exc)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except LebesgueError as exc:
        return _report_error(exc)
    except OSError as exc:
        logger.debug("I/O failure", exc_info=exc)
        return _report_error(exc)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
