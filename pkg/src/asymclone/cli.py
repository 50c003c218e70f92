"""Command-line front end.

Exit status is 0 on success, 1 for invalid input and 2 for a numerical
failure (including a failed verification suite). Diagnostics go to stderr
as a single line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .analyze import economy_report, pareto_sweep, weight_grid
from .errors import CloningError, NumericalFailure
from .solve import METHODS, optimal_fidelity
from .tasks import CloningTask, Distribution, gamma_of, validate_phase_covariance
from .verify import SUITES, run_suite

TASKS = ("universal", "state-dependent", "equatorial", "many-to-n", "chsh")
SNAP = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- formatting

def fmt_float(x: float, digits: int = 12) -> float:
    """Round to ``digits`` significant digits; magnitudes below 1e-12 become 0."""
    x = float(x)
    if abs(x) < SNAP:
        return 0.0
    return float(f"{x:.{digits}g}")


def fmt_text(x, digits: int = 12) -> str:
    if x is None:
        return ""
    return f"{fmt_float(x, digits):.{digits}g}"


def _floats(xs, digits):
    return None if xs is None else [fmt_float(x, digits) for x in xs]


def _opt(x, digits):
    return None if x is None else fmt_float(x, digits)


def task_block(task: CloningTask) -> dict:
    # weights are inputs, kept at full precision so a re-solve is exact
    return task.to_dict()


def report_dict(rep, digits: int = 12) -> dict:
    return {
        "task": task_block(rep.task),
        "method": rep.method,
        "fidelity": fmt_float(rep.fidelity, digits),
        "per_clone": _floats(rep.per_clone, digits),
        "lambda_sub": _opt(rep.lambda_sub, digits),
        "degeneracy": rep.degeneracy,
        "sector": rep.sector,
        "residual": fmt_float(rep.residual, digits),
    }


def economy_dict(rep, digits: int = 12, with_state: bool = False) -> dict:
    w = rep.witness
    if hasattr(w, "probabilities"):
        witness = {"kind": "mixture", "rank": w.rank,
                   "probabilities": _floats(w.probabilities, digits)}
        states = w.states
    else:
        witness = {"kind": "pure"}
        states = (w,)
    if with_state:
        witness["states"] = [_amplitudes(s, digits) for s in states]
    return {
        "task": task_block(rep.task),
        "classification": rep.classification,
        "ancilla_dim": rep.ancilla_dim,
        "construction": rep.construction,
        "heuristic": rep.heuristic,
        "schmidt_spectrum": _floats(rep.schmidt_spectrum, digits),
        "input_marginal_residual": fmt_float(rep.input_marginal_residual, digits),
        "eigen_residual": fmt_float(rep.eigen_residual, digits),
        "search_deviation": _opt(rep.search_deviation, digits),
        "witness": witness,
    }


def _amplitudes(state, digits):
    a = state.amplitudes
    if a.dtype.kind == "c":
        return [[fmt_float(z.real, digits), fmt_float(z.imag, digits)] for z in a]
    return _floats(a, digits)


def sweep_csv(records, n: int, digits: int = 12) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ([f"alpha_{k}" for k in range(1, n + 1)] + [f"F_{k}" for k in range(1, n + 1)]
              + [f"p_{k}" for k in range(1, n + 1)] + ["slack"])
    writer.writerow(header)
    for rec, alpha in records:
        row = [fmt_text(a, digits) for a in alpha]
        if rec.failed:
            row += [""] * (2 * n + 1)
        else:
            row += [fmt_text(f, digits) for f in rec.fidelities]
            p = rec.singlet_fractions
            row += [fmt_text(x, digits) for x in p] if p is not None else [""] * n
            row.append(fmt_text(rec.slack, digits))
        writer.writerow(row)
    return buf.getvalue()


def sweep_json(records, digits: int = 12) -> list:
    out = []
    for rec, alpha in records:
        item = {"alpha": list(alpha), "failed": rec.failed}
        if rec.failed:
            item["error"] = rec.error
        else:
            item.update({
                "fidelity": _opt(rec.fidelity, digits),
                "fidelities": _floats(rec.fidelities, digits),
                "singlet_fractions": _floats(rec.singlet_fractions, digits),
                "slack": _opt(rec.slack, digits),
            })
        out.append(item)
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ------------------------------------------------------------------ parsing

def _alpha(text):
    if text is None:
        return None
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse weights {text!r}") from None


def _add_task_args(p, weights=True):
    p.add_argument("--task", choices=TASKS, help="cloning task variant")
    p.add_argument("--d", type=int, default=2, help="qudit dimension (universal)")
    p.add_argument("--n", type=int, help="number of clones N")
    p.add_argument("--m", type=int, help="number of input copies M (many-to-n)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--gamma", type=float, help="concentration parameter (state-dependent)")
    src.add_argument("--dist", help="distribution: preset:NAME[:a,b] or a JSON file")
    if weights:
        p.add_argument("--alpha", help="comma-separated weights (default symmetric)")
    p.add_argument("--task-json", help="read the task from a JSON file ('-' for stdin)")


def task_from_args(args, weights=True) -> CloningTask:
    if args.task_json is not None:
        if args.task is not None:
            raise UsageError("--task and --task-json are mutually exclusive")
        text = sys.stdin.read() if args.task_json == "-" else _read(args.task_json)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad task JSON: {exc}") from None
        if isinstance(data, dict) and "task" in data:
            data = data["task"]
        if not isinstance(data, dict):
            raise UsageError("task JSON must be an object")
        return CloningTask.from_dict(data)
    if args.task is None:
        raise UsageError("one of --task or --task-json is required")
    alpha = _alpha(args.alpha) if weights else None
    kind = args.task
    if kind != "state-dependent" and (args.gamma is not None or args.dist is not None):
        raise UsageError("--gamma/--dist apply to state-dependent tasks only")
    if kind == "chsh":
        return CloningTask.chsh(alpha)
    if args.n is None:
        raise UsageError("--n is required")
    if kind == "universal":
        return CloningTask.universal(args.d, args.n, alpha)
    if kind == "equatorial":
        return CloningTask.equatorial(args.n, alpha)
    if kind == "many-to-n":
        if args.m is None:
            raise UsageError("--m is required for many-to-n")
        return CloningTask.many_to_n(args.m, args.n, alpha)
    if args.gamma is not None:
        gamma = args.gamma
    elif args.dist is not None:
        gamma = gamma_of(Distribution.parse(args.dist))
    else:
        raise UsageError("state-dependent tasks need --gamma or --dist")
    return CloningTask.state_dependent(gamma, args.n, alpha)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="asymclone", description="Optimal asymmetric quantum cloning machines.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--precision", type=int, default=12, help="significant digits in output")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", help="optimal fidelity of one task")
    _add_task_args(s)
    s.add_argument("--method", default="auto", choices=("auto",) + METHODS)
    s.add_argument("--out", default="json", choices=("json", "csv"))
    s.add_argument("--workers", type=int, help="threads for sector blocks")

    w = sub.add_parser("sweep", help="trade-off frontier over a weight grid")
    _add_task_args(w, weights=False)
    w.add_argument("--grid", type=int, default=11, help="number of grid points")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out", default="csv", choices=("json", "csv"))
    w.add_argument("--workers", type=int, help="threads for grid points")

    e = sub.add_parser("economy", help="economical or ancilla-assisted optimal cloner")
    _add_task_args(e)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--with-state", action="store_true", help="include witness amplitudes")

    v = sub.add_parser("verify", help="run a named invariant suite")
    v.add_argument("--suite", default="all", choices=("all",) + tuple(SUITES))
    v.add_argument("--samples", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gamma", help="concentration parameter of a distribution")
    g.add_argument("--dist", required=True)
    g.add_argument("--out", default="text", choices=("text", "json"))

    d = sub.add_parser("validate-dist", help="normalization and symmetry residuals")
    d.add_argument("--dist", required=True)
    return p


# ------------------------------------------------------------------ commands

def _cmd_solve(args, out):
    task = task_from_args(args)
    rep = optimal_fidelity(task, args.method, workers=args.workers)
    if args.out == "json":
        out.write(_dump(report_dict(rep, args.precision)))
    else:
        n = task.n
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow([f"alpha_{k}" for k in range(1, n + 1)]
                    + [f"F_{k}" for k in range(1, n + 1)] + ["fidelity", "degeneracy"])
        wr.writerow([fmt_text(a, args.precision) for a in task.alpha]
                    + [fmt_text(f, args.precision) for f in rep.per_clone]
                    + [fmt_text(rep.fidelity, args.precision), rep.degeneracy])
        out.write(buf.getvalue())
    return 0


def _cmd_sweep(args, out):
    if args.grid < 1:
        raise UsageError("--grid must be positive")
    task = task_from_args(args, weights=False)
    grid = weight_grid(task.n, args.grid, args.seed)
    records = list(zip(pareto_sweep(task, grid, workers=args.workers), grid))
    if args.out == "csv":
        out.write(sweep_csv(records, task.n, args.precision))
    else:
        out.write(_dump({"task": task_block(task), "seed": args.seed,
                         "points": sweep_json(records, args.precision)}))
    return 0


def _cmd_economy(args, out):
    task = task_from_args(args)
    rep = economy_report(task, seed=args.seed)
    out.write(_dump(economy_dict(rep, args.precision, args.with_state)))
    return 0


def _cmd_verify(args, out):
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    checks = run_suite(args.suite, args.samples, args.seed)
    ok = all(c.passed for c in checks)
    out.write(_dump({
        "suite": args.suite, "samples": args.samples, "seed": args.seed, "passed": ok,
        "checks": [{"name": c.name, "passed": c.passed,
                    "worst": fmt_float(c.worst, args.precision),
                    "tolerance": c.tolerance, "count": c.count} for c in checks],
    }))
    if not ok:
        failed = ", ".join(c.name for c in checks if not c.passed)
        raise NumericalFailure(f"invariant checks failed: {failed}")
    return 0


def _cmd_gamma(args, out):
    g = gamma_of(Distribution.parse(args.dist))
    if args.out == "json":
        out.write(_dump({"gamma": fmt_float(g, args.precision)}))
    else:
        out.write(fmt_text(g, args.precision) + "\n")
    return 0


def _cmd_validate(args, out):
    dist = Distribution.parse(args.dist)
    total = dist.total()
    residuals = validate_phase_covariance(dist)
    normalized = bool(abs(total - 1.0) <= 1e-8)
    symmetric = bool(max(residuals) <= 1e-8)
    doc = {"total": fmt_float(total, args.precision),
           "normalized": normalized,
           "residuals": _floats(residuals, args.precision),
           "phase_covariant": symmetric,
           "gamma": fmt_float(gamma_of(dist), args.precision) if normalized else None,
           "valid": normalized and symmetric}
    out.write(_dump(doc))
    if not doc["valid"]:
        raise UsageError("distribution fails normalization or symmetry checks")
    return 0


COMMANDS = {"solve": _cmd_solve, "sweep": _cmd_sweep, "economy": _cmd_economy,
            "verify": _cmd_verify, "gamma": _cmd_gamma, "validate-dist": _cmd_validate}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.precision < 1 or args.precision > 17:
            raise UsageError("--precision must be between 1 and 17")
        return COMMANDS[args.command](args, out)
    except (NumericalFailure, ArithmeticError, MemoryError) as exc:
        err.write(f"numerical failure: {exc}\n")
        return 2
    except (UsageError, CloningError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
