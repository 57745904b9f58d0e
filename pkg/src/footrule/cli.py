"""Command-line front end.

Commands:
  stat      compute the coefficient on a two-column CSV and test independence
  exact     dump the exact permutation null distribution for small n
  simulate  run the moments / kstest / curves studies and emit CSV

Exit codes: 0 success, 2 usage or parse errors, 3 tied data (the
continuity assumption is violated).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .common import Statistic, TiesError
from .moments import limiting_variance
from .ranks import (
    ENUMERATION_MAX_N,
    ExactNullDistribution,
    PairedSample,
    enumerate_null_distribution,
    footrule_coefficient,
)
from .simulate import (
    SimConfig,
    PAPER_MARGINALS,
    UNIFORM_MARGINALS,
    run_curve_study,
    run_ks_study,
    run_moment_study,
)
from .stats import normal_cdf

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TIES = 3

METHOD_NORMAL = "Normal"
METHOD_EXACT = "Exact"


@dataclass(frozen=True)
class TestReport:
    """Independence-test result for one data set."""

    n: int
    distance: int
    phi: float
    z: float
    p_two_sided: float
    method: str


class CliError(Exception):
    """Fatal CLI problem; carries the exit code."""

    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _fmt(value, full_precision: bool) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return repr(float(value)) if full_precision else f"{float(value):.5f}"


def _write_csv(path: Path | None, header: list[str], rows, full_precision: bool) -> None:
    """Write rows as CSV; a partial file never survives a failure."""
    def emit(handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v, full_precision) for v in row])

    if path is None:
        emit(sys.stdout)
        return
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as handle:
            emit(handle)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def _read_paired_csv(path: str, has_header: bool) -> PairedSample:
    xs: list[float] = []
    ys: list[float] = []
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(f"cannot open {path}: {exc}") from exc
    with handle:
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row:
                continue
            if has_header and lineno == 1:
                continue
            if len(row) != 2:
                raise CliError(f"row {lineno}: expected 2 columns, got {len(row)}")
            try:
                xs.append(float(row[0]))
                ys.append(float(row[1]))
            except ValueError as exc:
                raise CliError(f"row {lineno}: cannot parse {','.join(row)!r}") from exc
    if len(xs) < 2:
        raise CliError("need at least 2 data rows")
    first_data_row = 2 if has_header else 1
    for label, column in (("x", xs), ("y", ys)):
        seen: dict[float, int] = {}
        for i, value in enumerate(column):
            if value in seen:
                raise CliError(
                    f"tied {label} value {value!r} in rows "
                    f"{seen[value] + first_data_row} and {i + first_data_row}; "
                    "continuous data expected",
                    code=EXIT_TIES,
                )
            seen[value] = i
    return PairedSample(xs, ys)


def _independence_report(sample: PairedSample, exact: bool) -> TestReport:
    result = footrule_coefficient(sample)
    z = math.sqrt(result.n) * result.phi / math.sqrt(limiting_variance())
    if exact:
        if result.n > ENUMERATION_MAX_N:
            raise CliError(f"--exact supports n <= {ENUMERATION_MAX_N}, got {result.n}")
        dist = enumerate_null_distribution(result.n)
        p = float(dist.two_sided_p(int(result.distance)))
        method = METHOD_EXACT
    else:
        p = 2.0 * (1.0 - normal_cdf(abs(z)))
        method = METHOD_NORMAL
    return TestReport(
        n=result.n,
        distance=int(result.distance),
        phi=result.phi,
        z=z,
        p_two_sided=p,
        method=method,
    )


def _cmd_stat(args: argparse.Namespace) -> int:
    sample = _read_paired_csv(args.input, args.header)
    try:
        report = _independence_report(sample, args.exact)
    except TiesError as exc:
        raise CliError(str(exc), code=EXIT_TIES) from exc
    full = args.full_precision
    print(f"n         {report.n}")
    print(f"distance  {report.distance}")
    print(f"phi       {_fmt(report.phi, full)}")
    print(f"z         {_fmt(report.z, full)}")
    print(f"p-value   {_fmt(report.p_two_sided, full)} ({report.method})")
    if args.out:
        _write_csv(
            Path(args.out),
            ["n", "distance", "phi", "z", "p_value", "method"],
            [[report.n, report.distance, report.phi, report.z,
              report.p_two_sided, report.method]],
            full,
        )
    return EXIT_OK


def _exact_rows(dist: ExactNullDistribution):
    total = dist.total
    for d, count in dist.sorted_items():
        yield [d, count, dist.phi(d), count / total]


def _cmd_exact(args: argparse.Namespace) -> int:
    if not 2 <= args.n <= ENUMERATION_MAX_N:
        raise CliError(f"n must be in [2, {ENUMERATION_MAX_N}], got {args.n}")
    dist = enumerate_null_distribution(args.n)
    path = Path(args.out) if args.out else None
    _write_csv(path, ["d", "count", "phi", "probability"],
               _exact_rows(dist), args.full_precision)
    return EXIT_OK


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise CliError(f"bad --n-list {text!r}: {exc}") from exc
    if not sizes or min(sizes) < 2:
        raise CliError("--n-list entries must all be >= 2")
    return sizes


def _threads(args: argparse.Namespace) -> int:
    if args.threads is not None:
        value = args.threads
    else:
        try:
            value = int(os.environ.get("FOOTRULE_THREADS", "1"))
        except ValueError as exc:
            raise CliError(f"bad FOOTRULE_THREADS: {exc}") from exc
    if value < 1:
        raise CliError("thread count must be >= 1")
    return value


def _marginals(args: argparse.Namespace) -> str:
    return PAPER_MARGINALS if args.paper_marginals else UNIFORM_MARGINALS


def _cmd_simulate_moments(args: argparse.Namespace) -> int:
    sizes = _parse_n_list(args.n_list)
    threads = _threads(args)
    rows = []
    for stat in Statistic:
        config = SimConfig(
            seed=args.seed,
            replications=args.reps,
            sample_sizes=sizes,
            statistic=stat,
            marginals=_marginals(args),
            threads=threads,
        )
        for entry in run_moment_study(config):
            s = entry.summary
            rows.append([entry.statistic.value, entry.n, s.em, s.ev, s.bias, s.rmse])
            if entry.redraws:
                print(
                    f"note: {entry.redraws} tie redraws at n={entry.n} "
                    f"for {entry.statistic.value}",
                    file=sys.stderr,
                )
    path = Path(args.out) if args.out else None
    _write_csv(path, ["statistic", "n", "em", "ev", "bias", "rmse"],
               rows, args.full_precision)
    return EXIT_OK


def _cmd_simulate_kstest(args: argparse.Namespace) -> int:
    sizes = _parse_n_list(args.n_list)
    rows = [
        [entry.n, entry.combination, entry.outcome.statistic, entry.outcome.p_value]
        for entry in run_ks_study(
            seed=args.seed,
            sample_sizes=sizes,
            replications=args.reps,
            marginals=_marginals(args),
            threads=_threads(args),
        )
    ]
    path = Path(args.out) if args.out else None
    _write_csv(path, ["n", "combination", "ks_stat", "p_value"],
               rows, args.full_precision)
    return EXIT_OK


def _curve_paths(out: str) -> tuple[Path, Path]:
    base = Path(out)
    if base.suffix == ".csv":
        base = base.with_suffix("")
    return (
        base.with_name(base.name + "_density.csv"),
        base.with_name(base.name + "_cdf.csv"),
    )


def _cmd_simulate_curves(args: argparse.Namespace) -> int:
    if not args.out:
        raise CliError("curves writes two files; --out is required")
    sizes = _parse_n_list(args.n_list)
    entries = run_curve_study(
        seed=args.seed,
        sample_sizes=sizes,
        replications=args.reps,
        grid_size=args.grid_size,
        marginals=_marginals(args),
        threads=_threads(args),
    )
    density_rows = []
    cdf_rows = []
    for entry in entries:
        label = entry.statistic.value
        for g, dens, ref in zip(entry.density.grid, entry.density.values,
                                entry.ref_density):
            density_rows.append([label, entry.n, g, dens, ref])
        for g, height, ref in zip(entry.cdf.grid, entry.cdf.values, entry.ref_cdf):
            cdf_rows.append([label, entry.n, g, height, ref])
    density_path, cdf_path = _curve_paths(args.out)
    _write_csv(density_path, ["statistic", "n", "grid", "density", "ref_density"],
               density_rows, args.full_precision)
    try:
        _write_csv(cdf_path, ["statistic", "n", "grid", "cdf", "ref_cdf"],
                   cdf_rows, args.full_precision)
    except BaseException:
        density_path.unlink(missing_ok=True)
        raise
    return EXIT_OK


def _add_simulate_common(parser: argparse.ArgumentParser, default_reps: int) -> None:
    parser.add_argument("--seed", type=int, default=42, help="stream seed (default 42)")
    parser.add_argument("--reps", type=int, default=default_reps,
                        help=f"replications per sample size (default {default_reps})")
    parser.add_argument("--n-list", default="10,20,30,40,50,60,70,80,90,100",
                        help="comma-separated sample sizes")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads; never changes output bytes "
                             "(default: FOOTRULE_THREADS or 1)")
    parser.add_argument("--paper-marginals", action="store_true",
                        help="draw the rank statistic from normal-x/uniform-y data "
                             "instead of uniform pairs (bit-identical by rank "
                             "invariance)")
    parser.add_argument("--full-precision", action="store_true",
                        help="emit shortest round-trip decimals instead of 5 places")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="footrule",
        description="Spearman's footrule: statistic, exact null law, and "
                    "simulation studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    stat = sub.add_parser("stat", help="coefficient and independence test on a CSV")
    stat.add_argument("input", help="two-column CSV of reals")
    stat.add_argument("--header", action="store_true",
                      help="first row is a header, skip it")
    stat.add_argument("--exact", action="store_true",
                      help="exact permutation p-value (n <= 10)")
    stat.add_argument("--out", help="also write the report as CSV")
    stat.add_argument("--full-precision", action="store_true",
                      help="emit shortest round-trip decimals instead of 5 places")
    stat.set_defaults(func=_cmd_stat)

    exact = sub.add_parser("exact", help="exact null distribution as CSV")
    exact.add_argument("n", type=int, help="sample size, 2..10")
    exact.add_argument("--out", help="output CSV path (default: stdout)")
    exact.add_argument("--full-precision", action="store_true",
                       help="emit shortest round-trip decimals instead of 5 places")
    exact.set_defaults(func=_cmd_exact)

    simulate = sub.add_parser("simulate", help="run a simulation study")
    study = simulate.add_subparsers(dest="study", required=True)

    moments = study.add_parser("moments", help="EM/EV/bias/RMSE per statistic and n")
    _add_simulate_common(moments, default_reps=10_000)
    moments.set_defaults(func=_cmd_simulate_moments)

    kstest = study.add_parser("kstest", help="KS p-values for the six combinations")
    _add_simulate_common(kstest, default_reps=1_000)
    kstest.set_defaults(func=_cmd_simulate_kstest)

    curves = study.add_parser("curves", help="KDE and ECDF curve data")
    _add_simulate_common(curves, default_reps=100_000)
    curves.add_argument("--grid-size", type=int, default=512,
                        help="points per curve (default 512)")
    curves.set_defaults(func=_cmd_simulate_curves, n_list="10,20,30,100")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"footrule: {exc}", file=sys.stderr)
        return exc.code
    except TiesError as exc:
        print(f"footrule: {exc}", file=sys.stderr)
        return EXIT_TIES


if __name__ == "__main__":
    sys.exit(main())
