"""Command-line front end: enumerate, extend, partition, analyze, rw, lemma.

Every data file written is paired with ``<file>.manifest.json`` holding the
command, its parameters, the tool version, input/output digests and wall
time. Data files depend only on the parameters, so reruns are byte-identical.

Exit codes: 0 success (including non-converged fits, reported as "n.c."),
2 invalid arguments or unreadable input, 3 resource limits.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import mpmath

from . import __version__, _accel
from .heightseries import KINDS, HeightSeries

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE = 0, 2, 3
CSV_DPS = 30


class InvalidInput(ValueError):
    pass


# --------------------------------------------------------------------------
# persistence


def _digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write(path, text):
    Path(path).write_text(text)
    return str(path)


def _manifest(args, command, inputs, outputs, t0):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    data = {"command": command, "parameters": params, "tool_version": __version__,
            "inputs": {str(p): _digest(p) for p in inputs},
            "outputs": {str(p): _digest(p) for p in outputs},
            "wall_time_s": round(time.perf_counter() - t0, 3)}
    for out in outputs:
        Path(str(out) + ".manifest.json").write_text(
            json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")
    return data


def _emit(text, out):
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _num(x, dps=CSV_DPS):
    return mpmath.nstr(mpmath.mpf(x), dps, min_fixed=1, max_fixed=0, strip_zeros=False)


def _load_table(path, kind=None):
    """A HeightSeries from ``n,h,count`` CSV or per-height JSON."""
    p = Path(path)
    if not p.exists():
        raise InvalidInput(f"no such file: {path}")
    side = Path(str(p) + ".manifest.json")
    if kind is None and side.exists():
        kind = json.loads(side.read_text()).get("kind")
    kind = kind or "bridges"
    if p.suffix == ".json":
        from .series import TwoVarSeries
        return TwoVarSeries.from_json(p).to_table(kind)
    return HeightSeries.from_csv(p, kind)


def _parse_window(text):
    if text is None:
        return None
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise InvalidInput(f"window must look like LO:HI, got {text!r}") from None
    return lo, hi


def _parse_sweep(text):
    """``1e4:1e8`` -> decades ``1e4, 1e5, ..., 1e8``; a comma list is taken as is."""
    if "," in text:
        return [float(x) for x in text.split(",")]
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise InvalidInput(f"sweep must look like LO:HI, got {text!r}") from None
    if lo <= 0 or hi < lo:
        raise InvalidInput("sweep needs 0 < LO <= HI")
    out, m = [], lo
    while m <= hi * (1 + 1e-12):
        out.append(m)
        m *= 10
    return out


def _fraction_or_float(text):
    from fractions import Fraction
    try:
        return Fraction(text) if "/" in text else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


# --------------------------------------------------------------------------
# commands


ENUM_KINDS = ("bridges", "walks", "walks-centered", "oracle-walks", "oracle-bridges",
              "oracle-polygons")


def cmd_enumerate(args):
    from . import enumeration, oracle
    t0 = time.perf_counter()
    if args.n_max < 0 or (args.h_max is not None and args.h_max < 0):
        raise InvalidInput("n-max and h-max must be >= 0")
    workers = args.threads or _accel.worker_count()
    h_max = args.n_max if args.h_max is None else args.h_max
    strict = not args.weak
    out = Path(args.out)
    if args.kind == "bridges":
        if h_max < 1:
            raise InvalidInput("bridges need h-max >= 1")
        B = enumeration.bridges_by_height(h_max, args.n_max, strict=strict, workers=workers)
        kind = "bridges" if strict else "bridges_weak"
        if out.suffix == ".json":
            _write(out, json.dumps(B.to_json(), indent=1) + "\n")
        else:
            B.to_table(kind).to_csv(out)
    elif args.kind == "walks":
        kind = "walks_max_height"
        enumeration.walks_by_max_height(h_max, args.n_max, workers=workers).to_csv(out)
    elif args.kind == "walks-centered":
        kind = "walks_strip_confined"
        entries = {}
        for h in range(h_max + 1):
            w = enumeration.tm_strip_walks_centered(h, args.n_max)
            entries.update({(n, h): c for n, c in enumerate(w) if c})
        HeightSeries(kind, entries, args.n_max, h_max).to_csv(out)
    elif args.kind == "oracle-walks":
        kind = "walks_max_height"
        oracle.dfs_max_height_table(args.n_max, cap=args.cap).to_csv(out)
    elif args.kind == "oracle-bridges":
        kind = "bridges" if strict else "bridges_weak"
        oracle.dfs_count_bridges(args.n_max, strict=strict, cap=args.cap).to_csv(out)
    else:
        kind = "polygons_max_height"
        oracle.dfs_count_polygons_halfplane(args.n_max, cap=args.cap).to_csv(out)
    man = _manifest(args, "enumerate", [], [out], t0)
    # the manifest is also the table's kind sidecar
    man["kind"] = kind
    Path(str(out) + ".manifest.json").write_text(
        json.dumps(man, indent=2, sort_keys=True, default=str) + "\n")
    return EXIT_OK


def cmd_extend(args):
    from .series import TwoVarSeries, extend_bridges, irreducible_from_bridges, validity_bound
    t0 = time.perf_counter()
    table = _load_table(args.input, "bridges")
    if table.kind != "bridges":
        raise InvalidInput(f"extension needs strict bridges, got kind {table.kind!r}")
    if args.w_max < 1:
        raise InvalidInput("w-max must be >= 1")
    B = TwoVarSeries.from_table(table, h_max=max(table.h_max, args.w_max))
    A = irreducible_from_bridges(B, args.w_max)
    n_target = min(validity_bound(args.w_max), B.degree_valid)
    E = extend_bridges(TwoVarSeries({h: A[h].truncate(n_target)
                                     for h in range(1, args.w_max + 1)}), n_target, args.w_max)
    E.to_table("bridges").to_csv(args.out)
    man = _manifest(args, "extend", [args.input], [args.out], t0)
    man["kind"] = "bridges"
    Path(args.out + ".manifest.json").write_text(
        json.dumps(man, indent=2, sort_keys=True, default=str) + "\n")
    return EXIT_OK


def cmd_partition(args):
    from .partition import weight_by_height
    t0 = time.perf_counter()
    table = _load_table(args.table, args.kind)
    mode = "normalized" if args.normalized else "raw"
    ws = weight_by_height(table, args.u, mode, dps=args.dps)
    _emit(ws.to_csv(), args.out)
    if args.out:
        _manifest(args, "partition", [args.table], [args.out], t0)
    return EXIT_OK


def _load_series(path):
    from .partition import WeightedSeries
    if not Path(path).exists():
        raise InvalidInput(f"no such file: {path}")
    return WeightedSeries.from_csv(path)


def _plot_rows(name, local):
    return [(name, n, 1.0 / n, v) for n, v in sorted(local.items())]


def _analyze(args, a, b):
    from . import analysis as an
    window = _parse_window(args.window)
    report = {"task": args.task, "u": float(a.u), "window": window}
    plots = []
    if args.task == "sigma":
        for name, fn in (("ratios", an.sigma_from_ratios), ("loglog", an.sigma_from_loglog)):
            try:
                s = fn(a, window=window)
                report[name] = {"estimate": s.estimate, "band": s.band, "slope": s.slope,
                                "residual": s.residual, "skipped": s.skipped}
                plots += _plot_rows(f"sigma_{name}", s.local)
            except an.AnalysisError as exc:
                report[name] = {"estimate": "n.c.", "reason": str(exc)}
    elif args.task == "mu1":
        methods = an.METHODS if args.method == "all" else (args.method,)
        recs = [an.fit_mu1(a, method=m, window=window) for m in methods]
        value, kept, dropped = an.combine_estimates(recs)
        report["records"] = [r.to_dict() for r in recs]
        report["combined"] = {"log_mu1": "n.c." if value is None else value,
                              "kept": kept, "dropped": dropped}
        plots += [("log_mu1", r.u, r.method, r.log_mu1) for r in recs if r.converged]
    elif args.task in ("g", "power", "alpha"):
        try:
            if args.task == "g":
                src = b if b is not None else a
                if args.log_mu1 is not None:
                    L = args.log_mu1
                else:
                    L, _, _ = an.combine_estimates(an.fit_all(src))
                report["log_mu1"] = L
                e = an.estimate_g(a, log_mu1=L, window=window)
            elif args.task == "power":
                e = an.estimate_power_exponent(a, window=window)
            else:
                if b is None:
                    raise InvalidInput("task alpha needs --series (walks) and --series2 (bridges)")
                e = an.estimate_alpha(a, b, window=window)
            report[args.task] = {"estimate": e.estimate, "band": e.band, "slope": e.slope,
                                 "residual": e.residual}
            plots += _plot_rows(args.task, e.local)
        except an.AnalysisError as exc:
            report[args.task] = {"estimate": "n.c.", "reason": str(exc)}
    return report, plots


def cmd_analyze(args):
    from .analysis import METHODS
    t0 = time.perf_counter()
    if args.method != "all" and args.method not in METHODS:
        raise InvalidInput(f"unknown method {args.method!r}; choose from {METHODS}")
    a = _load_series(args.series)
    b = _load_series(args.series2) if args.series2 else None
    report, plots = _analyze(args, a, b)
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    _emit(text, args.out)
    outs = [args.out] if args.out else []
    if args.plot_csv:
        lines = ["plot,x,y"] if args.task != "mu1" else ["plot,u,method,log_mu1"]
        for row in plots:
            if args.task == "mu1":
                lines.append(f"{row[0]},{row[1]!r},{row[2]},{row[3]!r}")
            else:
                lines.append(f"{row[0]},{row[2]!r},{row[3]!r}")
        _write(args.plot_csv, "\n".join(lines) + "\n")
        outs.append(args.plot_csv)
    if outs:
        _manifest(args, "analyze", [args.series] + ([args.series2] if args.series2 else []),
                  outs, t0)
    return EXIT_OK


def cmd_rw(args):
    from .rw_exact import rw_table
    t0 = time.perf_counter()
    if args.u <= 0 or any(n < 1 for n in args.n):
        raise InvalidInput("rw needs u > 0 and n >= 1")
    lines = ["n,exact,asymptotic,ratio"]
    for n, ex, asy, ratio in rw_table(args.n, args.u):
        lines.append(f"{n},{_num(ex)},{_num(asy)},{_num(ratio)}")
    _emit("\n".join(lines) + "\n", args.out)
    if args.out:
        _manifest(args, "rw", [], [args.out], t0)
    return EXIT_OK


def cmd_lemma(args):
    from .asymptotics import lemma_sweep
    t0 = time.perf_counter()
    ms = _parse_sweep(args.m_sweep)
    lines = ["m,quadrature,closed_form,ratio"]
    for m, q, c, ratio in lemma_sweep(args.r, args.alpha, args.b, args.k, ms):
        lines.append(f"{_num(m, 6)},{_num(q)},{_num(c)},{_num(ratio)}")
    _emit("\n".join(lines) + "\n", args.out)
    if args.out:
        _manifest(args, "lemma", [], [args.out], t0)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="compsaw", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="exact counts by transfer matrix or DFS")
    e.add_argument("kind", choices=ENUM_KINDS)
    e.add_argument("--n-max", type=int, required=True)
    e.add_argument("--h-max", type=int)
    e.add_argument("--out", required=True)
    e.add_argument("--threads", type=int,
                   help=f"worker processes (default from {_accel.WORKERS_ENV}, else 1)")
    e.add_argument("--weak", action="store_true",
                   help="bridges may revisit the bottom row")
    e.add_argument("--cap", type=int, default=16, help="largest n the DFS oracle accepts")
    e.set_defaults(func=cmd_enumerate)

    x = sub.add_parser("extend", help="extend bridges through irreducible bridges")
    x.add_argument("--in", dest="input", required=True)
    x.add_argument("--w-max", type=int, required=True)
    x.add_argument("--out", required=True)
    x.set_defaults(func=cmd_extend)

    t = sub.add_parser("partition", help="height-weighted series from a count table")
    t.add_argument("--table", required=True)
    t.add_argument("--u", type=str, required=True, help="compression parameter, decimal")
    t.add_argument("--normalized", action="store_true", help="multiply by e^{-beta n}")
    t.add_argument("--kind", choices=KINDS)
    t.add_argument("--dps", type=int, default=50)
    t.add_argument("--out")
    t.set_defaults(func=cmd_partition)

    a = sub.add_parser("analyze", help="series analysis")
    a.add_argument("--series", required=True)
    a.add_argument("--series2", help="bridge series: log mu_1 source for g, denominator for alpha")
    a.add_argument("--task", choices=("sigma", "mu1", "g", "alpha", "power"), required=True)
    a.add_argument("--method", default="all")
    a.add_argument("--window")
    a.add_argument("--log-mu1", type=float)
    a.add_argument("--out")
    a.add_argument("--plot-csv")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("rw", help="random-walk benchmark table")
    r.add_argument("--n", type=int, nargs="+", required=True)
    r.add_argument("--u", type=float, required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_rw)

    m = sub.add_parser("lemma", help="quadrature vs closed form over an m sweep")
    m.add_argument("--r", type=_fraction_or_float, required=True,
                   help="exponent r; write negative fractions as --r=-19/12")
    m.add_argument("--alpha", type=_fraction_or_float, required=True)
    m.add_argument("--b", type=float, default=1.0)
    m.add_argument("--k", type=float, default=1.0)
    m.add_argument("--m-sweep", default="1e4:1e8")
    m.add_argument("--out")
    m.set_defaults(func=cmd_lemma)
    return p


def main(argv=None):
    from .asymptotics import QuadratureError
    from .enumeration import ResourceLimitError
    from .oracle import OracleLimitError
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimitError, OracleLimitError, MemoryError, QuadratureError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidInput, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
