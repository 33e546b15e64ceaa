"""Command-line entry point.

Exit codes: 0 success, 1 a verification check deviated from its expected
verdict, 2 invalid arguments or configuration, 3 numerical failure
(degenerate wave speed, non-finite state, Newton failure, domain violation).
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    """Everything needed to re-run an invocation."""

    subcommand: str
    argv: List[str]
    config: Dict[str, object]
    version: str = __version__
    started: str = ""
    finished: str = ""
    exit_status: Optional[int] = None

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True, default=str) + "\n")


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="westervelt", description="Verification lab for Westervelt's equation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run exact verification suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--out", help="directory for report.json and manifest.json")

    s = sub.add_parser("simulate", help="run the finite-difference solver")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)

    e = sub.add_parser("exact", help="sample an exact solution on a grid")
    e.add_argument("--family", required=True)
    e.add_argument("--params", default="")
    e.add_argument("--grid", required=True, help="t0:t1:nt,x0:x1:nx")
    e.add_argument("--out", required=True)

    m = sub.add_parser("mms", help="manufactured-solution convergence study")
    m.add_argument("--family", required=True)
    m.add_argument("--params", default="")
    m.add_argument("--refinements", type=int, default=3)
    m.add_argument("--nx0", type=int, default=33)
    m.add_argument("--domain", default="0:1", help="x0:x1")
    m.add_argument("--t0", type=float, default=0.0)
    m.add_argument("--t-end", type=float, default=0.5)
    m.add_argument("--bc", default="dirichlet", choices=("dirichlet", "periodic"))
    m.add_argument("--cfl", type=float, default=0.5)
    m.add_argument("--out")

    c = sub.add_parser("catalog", help="catalog utilities")
    csub = c.add_subparsers(dest="action", required=True)
    d = csub.add_parser("dump")
    d.add_argument("--format", default="json", choices=("json",))
    d.add_argument("--out")
    return p


def _parse_params(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        k, v = (s.strip() for s in item.split("=", 1))
        out[k] = v
    return out


def _parse_range(text: str, what: str):
    parts = text.split(":")
    try:
        if len(parts) == 3:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return a, b, n
        if len(parts) == 2:
            return float(parts[0]), float(parts[1]), None
    except ValueError:
        pass
    raise UsageError(f"bad {what} specification {text!r}")


def _linspace(a: float, b: float, n: int) -> List[float]:
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_verify(args, manifest: RunManifest) -> int:
    from .verify import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose all or {', '.join(SUITES)}")
    manifest.config = {"suite": args.suite}
    reports = run_suite(args.suite)
    for r in reports:
        print(r.line())
    bad = [r for r in reports if not r.ok]
    print(f"{len(reports) - len(bad)}/{len(reports)} checks met their expected verdict")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        rows = [{"check": r.check_id, "passed": r.passed, "expected": r.expected,
                 "ok": r.ok, "residual_terms": r.residual_terms} for r in reports]
        (out / "report.json").write_text(json.dumps(rows, indent=2) + "\n")
    return EXIT_VERIFY if bad else EXIT_OK


def _cmd_simulate(args, manifest: RunManifest) -> int:
    from .observables import MonitorRecorder
    from .pde import ConfigError, config_to_dict, grid, load_config, run

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    manifest.config = config_to_dict(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rec = MonitorRecorder(cfg)
    frames = [0]

    def callback(n, state):
        rec(n, state)
        path = out / f"fields_{frames[0]:04d}.csv"
        frames[0] += 1
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "p", "q", "v"])
            for row in zip(grid(cfg), state.p, state.q, state.v):
                w.writerow([repr(float(c)) for c in row])

    try:
        run(cfg, callback=callback)
    finally:
        rec.write_csv(out / "monitors.csv")
    for mid, msg in rec.failures.items():
        print(f"warning: monitor {mid}: {msg}", file=sys.stderr)
    return EXIT_OK


def _cmd_exact(args, manifest: RunManifest) -> int:
    from .exact import make_family

    params = _parse_params(args.params)
    try:
        tspec, xspec = args.grid.split(",")
    except ValueError:
        raise UsageError("grid must be t0:t1:nt,x0:x1:nx") from None
    t0, t1, nt = _parse_range(tspec, "grid")
    x0, x1, nx = _parse_range(xspec, "grid")
    if nt is None or nx is None:
        raise UsageError("grid ranges need a point count")
    manifest.config = {"family": args.family, "params": params, "grid": args.grid}
    try:
        sol = make_family(args.family, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = sol.sample(_linspace(t0, t1, nt), _linspace(x0, x1, nx))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        has_v = sol.eval_v is not None
        w.writerow(["t", "x", "p"] + (["v"] if has_v else []))
        for t, x, p, v in rows:
            w.writerow([repr(t), repr(x), repr(p)] + ([repr(v)] if has_v else []))
    return EXIT_OK


def _cmd_mms(args, manifest: RunManifest) -> int:
    from .exact import make_family
    from .pde import mms_convergence, observed_orders

    params = _parse_params(args.params)
    x0, x1, _ = _parse_range(args.domain, "domain")
    if args.refinements < 2:
        raise UsageError("need at least two refinements")
    manifest.config = {"family": args.family, "params": params, "refinements": args.refinements,
                       "nx0": args.nx0, "domain": [x0, x1], "t0": args.t0,
                       "t_end": args.t_end, "bc": args.bc, "cfl": args.cfl}
    try:
        sol = make_family(args.family, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    errs = mms_convergence(sol, args.refinements, nx0=args.nx0, x0=x0, x1=x1, t0=args.t0,
                           t_end=args.t_end, bc=args.bc, cfl=args.cfl)
    orders = [None] + observed_orders(errs)
    lines = ["h,error,order"] + [f"{h!r},{e!r},{'' if o is None else repr(o)}"
                                 for (h, e), o in zip(errs, orders)]
    print("\n".join(lines))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "mms.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_catalog(args, manifest: RunManifest) -> int:
    from .catalog import dump

    text = json.dumps(dump(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {"verify": _cmd_verify, "simulate": _cmd_simulate, "exact": _cmd_exact,
             "mms": _cmd_mms, "catalog": _cmd_catalog}


def _manifest_path(args) -> Optional[Path]:
    if args.cmd == "simulate":
        return Path(args.out) / "manifest.json"
    if args.cmd in ("verify", "mms") and getattr(args, "out", None):
        return Path(args.out) / "manifest.json"
    if args.cmd == "exact":
        out = Path(args.out)
        return out.with_name(out.name + ".manifest.json")
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line; returns the exit code."""
    from .exact import DomainError, NewtonError
    from .pde import DegenerateWaveSpeed, NonFiniteState

    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = RunManifest(args.cmd, argv, {}, started=_now())
    try:
        code = _COMMANDS[args.cmd](args, manifest)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except (DegenerateWaveSpeed, NonFiniteState, NewtonError, DomainError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = EXIT_NUMERIC
    manifest.finished = _now()
    manifest.exit_status = code
    path = _manifest_path(args)
    if path is not None and path.parent.is_dir():
        manifest.write(path)
    return code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
