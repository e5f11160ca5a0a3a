"""Command-line interface for witness evaluation, scans, searches, and checks.

Subcommands
-----------
eval
    Evaluate the witness on one state in one measurement frame.
scan
    Sweep a named family over a parameter grid and emit one row per point.
max-violation
    Maximize the violation over local measurement frames.
distill
    Look for distillability evidence via local filtering on copies.
verify
    Run the built-in consistency harness.

All randomness is derived from ``--seed``, so repeated invocations with the
same arguments produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import fileio, verify
from .criteria import ppt_check
from .distill import (
    CapExceededError,
    DistillReport,
    FilterAnnihilatesError,
    distill_search,
    example4_check,
)
from .qstate import (
    BipartiteDims,
    DensityMatrix,
    DensityValidationError,
    haar_random_unitary,
)
from .search import SearchConfig, ViolationReport, max_violation
from .witness import (
    TAU_VIOL,
    NumericResidueError,
    evaluate_witness,
    weighted_qutrit_sides,
)
from .zoo import (
    example4_state,
    horodecki_state,
    isotropic_state,
    max_entangled,
    random_mixture,
    random_product_pure,
    swap01_unitary,
    werner_state,
)

POINT_FAMILIES = (
    "horodecki",
    "isotropic",
    "werner",
    "example4",
    "max_entangled",
    "product",
    "random_mixture",
)
SCAN_FAMILIES = ("horodecki", "isotropic", "werner", "example4")

SCAN_FIELDS = (
    "family",
    "param",
    "h_val",
    "p_val",
    "q_val",
    "w_val",
    "f_value",
    "ppt_min_eig",
    "violated",
    "npt",
    "aux_lhs",
    "aux_rhs",
    "aux_violated",
)


class CliError(Exception):
    """Bad command-line input; maps to exit code 2."""


@dataclass(frozen=True)
class ScanRow:
    """One grid point of a family scan.

    ``aux_*`` columns carry the weighted qutrit-test sides when requested
    and stay empty otherwise.
    """

    family: str
    param: float
    h_val: float
    p_val: float
    q_val: float
    w_val: float
    f_value: float | None
    ppt_min_eig: float
    violated: bool
    npt: bool
    aux_lhs: float | None = None
    aux_rhs: float | None = None
    aux_violated: bool | None = None

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in SCAN_FIELDS}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--seed", type=int, default=0,
        help="seed for every random draw (default 0)")
    shared.add_argument(
        "--tol", type=float, default=1e-8,
        help="optimizer convergence tolerance (default 1e-8)")
    shared.add_argument(
        "--restarts", type=int, default=50,
        help="optimizer restarts or sample budget (default 50)")
    shared.add_argument(
        "--max-iters", type=int, default=500, dest="max_iters",
        help="optimizer iterations per restart (default 500)")
    shared.add_argument(
        "--output", metavar="PATH",
        help="write the report to PATH instead of stdout")
    shared.add_argument(
        "--format", choices=("csv", "json"), dest="fmt",
        help="output format (csv is scan-only; everything else is json)")

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument(
        "--family", choices=POINT_FAMILIES, help="named state family")
    point.add_argument("--input", metavar="FILE", help="state JSON file")
    point.add_argument(
        "--alpha", type=float, help="horodecki parameter in [2, 5]")
    point.add_argument("--f", type=float, help="isotropic/werner parameter")
    point.add_argument("--p", type=float, help="example4 parameter in (0, 1]")
    point.add_argument("--n", type=int, help="second-subsystem dimension")
    point.add_argument("--m", type=int, help="first-subsystem dimension")
    point.add_argument(
        "--k", type=int, help="mixture components for random_mixture (default 4)")

    parser = argparse.ArgumentParser(
        prog="entwit",
        description="Entanglement detection via a quadratic witness on "
                    "locally rotated observables.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "eval", parents=[shared, point],
        help="evaluate the witness on a state in one frame")
    frame = p_eval.add_mutually_exclusive_group()
    frame.add_argument(
        "--identity", action="store_true", help="identity frame (default)")
    frame.add_argument(
        "--random-frame", action="store_true",
        help="Haar-random frame drawn from --seed")
    frame.add_argument(
        "--unitaries", metavar="FILE", help="frame pair JSON file")
    p_eval.set_defaults(func=cmd_eval)

    p_scan = sub.add_parser(
        "scan", parents=[shared], help="scan a family over a parameter grid")
    p_scan.add_argument("--family", choices=SCAN_FAMILIES, required=True)
    p_scan.add_argument(
        "--alpha", metavar="GRID", help="horodecki grid start:stop:step")
    p_scan.add_argument(
        "--f", metavar="GRID",
        help="isotropic/werner grid; write --f=-1:1:0.01 for negative starts")
    p_scan.add_argument("--p", metavar="GRID", help="example4 grid")
    p_scan.add_argument(
        "--n", type=int, nargs="+",
        help="one or more dimensions (isotropic/werner)")
    p_scan.add_argument(
        "--optimize", action="store_true",
        help="run the violation search at every grid point (fills f_value)")
    p_scan.add_argument(
        "--weighted", action="store_true",
        help="add the weighted qutrit-test sides (horodecki only)")
    p_scan.add_argument(
        "--plot", nargs="?", const="", metavar="PATH",
        help="render a figure of the scan (default PATH: --output with .png)")
    p_scan.set_defaults(func=cmd_scan)

    p_max = sub.add_parser(
        "max-violation", parents=[shared, point],
        help="maximize the violation over local measurement frames")
    p_max.set_defaults(func=cmd_max_violation)

    p_dist = sub.add_parser(
        "distill", parents=[shared, point],
        help="search for distillability evidence via local filtering")
    p_dist.add_argument(
        "--copies", type=int, default=1,
        help="number of state copies to filter (default 1)")
    p_dist.add_argument(
        "--example4", action="store_true", dest="fixed_demo",
        help="run the fixed 4x4 filtering demonstration (needs --p)")
    p_dist.set_defaults(func=cmd_distill)

    p_verify = sub.add_parser(
        "verify", parents=[shared], help="run the consistency harness")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def _require(args: argparse.Namespace, names: tuple[str, ...]) -> None:
    missing = ["--" + n for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(
            f"family '{args.family}' needs {', '.join(missing)}")


def build_point_state(args: argparse.Namespace) -> DensityMatrix:
    """Construct the single state addressed by eval/max-violation/distill."""
    if args.input is not None:
        if args.family is not None:
            raise CliError("give either --family or --input, not both")
        return fileio.load_state(args.input)
    if args.family is None:
        raise CliError("provide a state via --family or --input")
    fam = args.family
    if fam == "horodecki":
        _require(args, ("alpha",))
        return horodecki_state(args.alpha)
    if fam == "isotropic":
        _require(args, ("n", "f"))
        return isotropic_state(args.n, args.f)
    if fam == "werner":
        _require(args, ("n", "f"))
        return werner_state(args.n, args.f)
    if fam == "example4":
        _require(args, ("p",))
        return example4_state(args.p)
    if fam == "max_entangled":
        _require(args, ("n",))
        return max_entangled(args.n).density()
    if fam == "product":
        _require(args, ("m", "n"))
        rng = np.random.default_rng(args.seed)
        return random_product_pure(BipartiteDims(args.m, args.n), rng).density()
    _require(args, ("m", "n"))
    rng = np.random.default_rng(args.seed)
    return random_mixture(BipartiteDims(args.m, args.n), args.k or 4, rng)


def build_frame(args: argparse.Namespace, dims: BipartiteDims):
    if args.unitaries is not None:
        u, v = fileio.load_unitary_pair(args.unitaries)
        if u.shape[0] != dims.m or v.shape[0] != dims.n:
            raise CliError(
                f"frame dims {u.shape[0]}x{v.shape[0]} do not match "
                f"state dims {dims.m}x{dims.n}")
        return u, v
    if args.random_frame:
        rng = np.random.default_rng(args.seed)
        return haar_random_unitary(dims.m, rng), haar_random_unitary(dims.n, rng)
    return None, None


def emit(text: str, args: argparse.Namespace) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def parse_grid(text: str, option: str) -> list[float]:
    """Parse a single value or start:stop:step into a closed grid."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError(text)
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise CliError(
            f"{option}: expected a number or start:stop:step, got '{text}'"
        ) from None
    if step <= 0.0 or stop < start:
        raise CliError(f"{option}: need step > 0 and stop >= start in '{text}'")
    count = int(round((stop - start) / step))
    values = [start + i * step for i in range(count + 1)]
    return [v for v in values if v <= stop + 1e-9 * step]


def cmd_eval(args: argparse.Namespace) -> int:
    if args.fmt == "csv":
        raise CliError("eval reports are json; csv is only available for scan")
    rho = build_point_state(args)
    u, v = build_frame(args, rho.dims)
    ev = evaluate_witness(rho, u, v)
    obj = {
        "dims": {"m": rho.dims.m, "n": rho.dims.n},
        "h_val": ev.h_val,
        "p_val": ev.p_val,
        "q_val": ev.q_val,
        "w_val": ev.w_val,
        "violated": ev.violated,
    }
    emit(fileio.dump_json(obj), args)
    return 0


def scan_points(args: argparse.Namespace):
    """Yield (label, param, state, frame_u, frame_v) for every grid point."""
    fam = args.family
    if fam == "horodecki":
        if args.alpha is None:
            raise CliError("scan --family horodecki needs --alpha GRID")
        for a in parse_grid(args.alpha, "--alpha"):
            yield fam, a, horodecki_state(a), None, None
    elif fam in ("isotropic", "werner"):
        if args.f is None or not args.n:
            raise CliError(f"scan --family {fam} needs --n and --f GRID")
        grid = parse_grid(args.f, "--f")
        for n in args.n:
            u = swap01_unitary(n) if fam == "werner" else None
            label = f"{fam}:n={n}"
            for f in grid:
                if fam == "isotropic":
                    yield label, f, isotropic_state(n, f), None, None
                else:
                    yield label, f, werner_state(n, f), u, None
    else:
        if args.p is None:
            raise CliError("scan --family example4 needs --p GRID")
        for p in parse_grid(args.p, "--p"):
            yield fam, p, example4_state(p), None, None


def cmd_scan(args: argparse.Namespace) -> int:
    if args.weighted and args.family != "horodecki":
        raise CliError("--weighted applies to the horodecki family only")
    plot_path = None
    if args.plot is not None:
        plot_path = args.plot
        if not plot_path:
            if not args.output:
                raise CliError(
                    "--plot needs a PATH argument or --output to derive one")
            plot_path = os.path.splitext(args.output)[0] + ".png"

    cfg = SearchConfig(
        restarts=args.restarts, max_iters=args.max_iters,
        tol=args.tol, seed=args.seed)
    rows = []
    with warnings.catch_warnings():
        if args.family == "example4":
            warnings.simplefilter("ignore", UserWarning)
            print(
                "note: the example4 family is not positive semidefinite; "
                "per-point constructor warnings are suppressed",
                file=sys.stderr)
        for label, param, rho, u, v in scan_points(args):
            ev = evaluate_witness(rho, u, v)
            ppt = ppt_check(rho)
            f_value = max_violation(rho, cfg).f_value if args.optimize else None
            aux_lhs = aux_rhs = aux_violated = None
            if args.weighted:
                aux_lhs, aux_rhs = weighted_qutrit_sides(rho)
                aux_violated = (aux_rhs - aux_lhs) > TAU_VIOL
            rows.append(ScanRow(
                label, param, ev.h_val, ev.p_val, ev.q_val, ev.w_val,
                f_value, ppt.min_eigenvalue, ev.violated, ppt.is_npt,
                aux_lhs, aux_rhs, aux_violated))

    if args.fmt == "json":
        emit(fileio.dump_json([r.as_dict() for r in rows]), args)
    else:
        lines = [",".join(SCAN_FIELDS)]
        lines += [
            ",".join(fileio.fmt(getattr(row, name)) for name in SCAN_FIELDS)
            for row in rows]
        emit("\n".join(lines) + "\n", args)

    if plot_path is not None:
        from .figures import render_scan_figure

        render_scan_figure(rows, plot_path)
    return 0


def cmd_max_violation(args: argparse.Namespace) -> int:
    if args.fmt == "csv":
        raise CliError("max-violation reports are json")
    rho = build_point_state(args)
    cfg = SearchConfig(
        restarts=args.restarts, max_iters=args.max_iters,
        tol=args.tol, seed=args.seed)
    rep = max_violation(rho, cfg)
    ev = rep.best_eval
    obj = {
        "dims": {"m": rho.dims.m, "n": rho.dims.n},
        "f_value": rep.f_value,
        "h_val": ev.h_val,
        "p_val": ev.p_val,
        "q_val": ev.q_val,
        "w_val": ev.w_val,
        "violated": ev.violated,
        "restarts_run": rep.restarts_run,
        "evaluations": rep.evaluations,
        "converged": rep.converged,
        "best_restart": rep.best_restart,
        "best_u": fileio.unitary_to_dict(rep.best_u),
        "best_v": fileio.unitary_to_dict(rep.best_v),
    }
    emit(fileio.dump_json(obj), args)
    return 0


def distill_report_dict(report: DistillReport) -> dict:
    ev = report.eval
    if isinstance(ev, ViolationReport):
        eval_obj = {
            "kind": "search",
            "f_value": ev.f_value,
            "h_val": ev.best_eval.h_val,
            "p_val": ev.best_eval.p_val,
            "q_val": ev.best_eval.q_val,
            "w_val": ev.best_eval.w_val,
            "violated": ev.best_eval.violated,
            "restarts_run": ev.restarts_run,
            "evaluations": ev.evaluations,
        }
    else:
        eval_obj = {
            "kind": "fixed-frame",
            "h_val": ev.h_val,
            "p_val": ev.p_val,
            "q_val": ev.q_val,
            "w_val": ev.w_val,
            "violated": ev.violated,
        }
    out = report.projected_state.dims
    return {
        "n_copies": report.n_copies,
        "distillable_evidence": report.distillable_evidence,
        "projected_dims": {"m": out.m, "n": out.n},
        "projected_ppt": {
            "min_eigenvalue": report.projected_ppt.min_eigenvalue,
            "is_npt": report.projected_ppt.is_npt,
            "negativity": report.projected_ppt.negativity,
        },
        "filter": {
            "a": fileio.operator_to_dict(report.filter.a),
            "b": fileio.operator_to_dict(report.filter.b),
        },
        "eval": eval_obj,
    }


def cmd_distill(args: argparse.Namespace) -> int:
    if args.fmt == "csv":
        raise CliError("distill reports are json")
    if args.fixed_demo:
        if args.p is None:
            raise CliError("--example4 needs --p")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            report = example4_check(args.p)
    else:
        rho = build_point_state(args)
        cfg = SearchConfig(
            restarts=args.restarts, max_iters=args.max_iters,
            tol=args.tol, seed=args.seed)
        report = distill_search(rho, args.copies, cfg)
    emit(fileio.dump_json(distill_report_dict(report)), args)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.fmt == "csv":
        raise CliError("verify reports are text or json")
    results, ok = verify.run_all(seed=args.seed)
    if args.fmt == "json":
        emit(fileio.dump_json(verify.report_dict(results, ok)), args)
    else:
        if args.output:
            with open(args.output, "w", newline="") as fp:
                fp.write(fileio.dump_json(verify.report_dict(results, ok)))
        sys.stdout.write(verify.render_text(results, ok))
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NumericResidueError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (CapExceededError, FilterAnnihilatesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DensityValidationError as exc:
        print(f"error: invalid state: {exc}", file=sys.stderr)
        return 2
    except (CliError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
