"""Command-line front end.

Subcommands
-----------
eigs      build (or reuse from cache) an eigenvalue table and write it with
          ratio and asymptotic columns
evolve    evolve initial data and tabulate norms over a time grid
verify    run a named verification suite; exit 1 on any failed check
scenario  sweep the series-data tail classifier over t (and k) grids

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 quadrature convergence failure.

File outputs are written atomically; identical configuration plus an intact
cache reproduces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys


from . import verify as verify_mod
from .basis import SpectralField
from .errors import CacheError, QuadratureConvergenceError
from .kernel import (KernelParams, QuadratureSpec, asymptotic_leading,
                     eigenvalue_table, load_table, radial_eigenvalues,
                     save_table, table_version)
from .solver import (DelaySeries, EvolutionReport, S2DelaySeries,
                     SobolevSeries, classify_frontier, series_tail_classify)
from .spaces import NormSpec, parse_norm_spec

USAGE_ERROR = 2
VERIFY_FAILURE = 1
CONVERGENCE_FAILURE = 3


class UsageError(Exception):
    pass


def _write_atomic(path: str, text: str):
    from .kernel import _atomic_write
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    _atomic_write(path, text)


def _params(args) -> KernelParams:
    if args.s <= 0.0:
        raise UsageError(f"--s must be positive, got {args.s}")
    return KernelParams(s=args.s)


def _quad(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                              max_panels=args.max_panels,
                              nodes_per_panel=args.nodes_per_panel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _get_table(args, nmax: int, lmax: int):
    params, quad = _params(args), _quad(args)
    cache_path = None
    if args.cache_dir:
        os.makedirs(args.cache_dir, exist_ok=True)
        cache_path = os.path.join(
            args.cache_dir, f"eigs-{table_version(params, quad)}.json")
        if os.path.exists(cache_path):
            table = load_table(cache_path, params, quad)
            if table.nmax >= nmax and table.lmax >= lmax:
                return table, True
    table = eigenvalue_table(nmax, lmax, params, quad, workers=args.workers)
    if cache_path:
        save_table(table, cache_path)
    return table, False


# ---------------------------------------------------------------------------
# eigs
# ---------------------------------------------------------------------------

def cmd_eigs(args) -> int:
    table, from_cache = _get_table(args, args.nmax, args.lmax)
    s = table.params.s
    rows = []
    for e in table.sorted_entries():
        if e.n > args.nmax or e.l > args.lmax:
            continue
        K = 2 * e.n + e.l
        ratio = (e.lam / math.log(K + math.e) ** (2.0 / s)
                 if e.n + e.l >= 2 else math.nan)
        asym = asymptotic_leading(e.n, e.l, table.params) if K >= 3 else math.nan
        rows.append((e.n, e.l, e.lam, e.err, ratio, asym))
    name = f"eigs_s{s:g}_n{args.nmax}_l{args.lmax}.{args.format}"
    path = os.path.join(args.out, name)
    if args.format == "csv":
        lines = ["n,l,lambda,err,ratio_to_log_bound,asymptotic_leading"]
        lines += [f"{n},{l},{lam!r},{err!r},{ratio!r},{asym!r}"
                  for n, l, lam, err, ratio, asym in rows]
        _write_atomic(path, "\n".join(lines) + "\n")
    else:
        doc = {"s": s, "nmax": args.nmax, "lmax": args.lmax,
               "version": table.version,
               "columns": ["n", "l", "lambda", "err", "ratio_to_log_bound",
                           "asymptotic_leading"],
               "rows": [[n, l, lam, err,
                         None if math.isnan(ratio) else ratio,
                         None if math.isnan(asym) else asym]
                        for n, l, lam, err, ratio, asym in rows]}
        _write_atomic(path, json.dumps(doc, separators=(",", ":"), sort_keys=True))
    print(f"{'cache hit' if from_cache else 'built'}: {path}")
    return 0


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def _parse_init(text: str):
    text = text.strip()
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    try:
        if kind == "modes":
            coeffs = {}
            for chunk in rest.split(";"):
                n, l, m, re, im = (x.strip() for x in chunk.split(","))
                coeffs[(int(n), int(l), int(m))] = complex(float(re), float(im))
            return SpectralField(coeffs, label=text)
        kv = dict(item.split("=") for item in rest.split(",")) if rest else {}
        if kind == "delay":
            return DelaySeries(tau0=float(kv["tau0"]), N=int(kv.get("N", 10000)))
        if kind == "s2delay":
            return S2DelaySeries(N=int(kv.get("N", 10000)))
        if kind == "sobolev":
            return SobolevSeries(tau=float(kv["tau"]), N=int(kv.get("N", 10000)))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad --init {text!r}: {exc}") from None
    raise UsageError(
        f"unknown init spec {text!r}; use modes:n,l,m,re,im;... or "
        "delay:tau0=T[,N=...] or s2delay:[N=...] or sobolev:tau=T[,N=...]")


def _parse_norms(text: str):
    try:
        return [parse_norm_spec(p) for p in text.split(";") if p.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_times(text: str):
    try:
        times = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --times {text!r}: {exc}") from None
    if not times:
        raise UsageError("--times must list at least one time")
    return times


def _series_field(spec, params, quad) -> SpectralField:
    lam = radial_eigenvalues(spec.N, params, quad)
    if isinstance(spec, DelaySeries):
        ns = range(1, spec.N + 1)
        coeffs = {(n, 0, 0): math.exp(spec.tau0 * lam[n]) / n for n in ns}
    elif isinstance(spec, S2DelaySeries):
        coeffs = {(n, 0, 0): 1.0 / (math.sqrt(n) * math.log(n))
                  for n in range(2, spec.N + 1)}
    else:
        coeffs = {(n, 0, 0): n ** (-0.5 * (spec.tau + 1.0)) / math.log(n)
                  for n in range(2, spec.N + 1)}
    return SpectralField(coeffs, label=str(spec))


def cmd_evolve(args) -> int:
    init = _parse_init(args.init)
    norms = _parse_norms(args.norms)
    times = _parse_times(args.times)
    params, quad = _params(args), _quad(args)
    if isinstance(init, SpectralField):
        field = init
        nmax = max((m.n for m in field.coeffs), default=0)
        lmax = max((m.l for m in field.coeffs), default=0)
    else:
        field = _series_field(init, params, quad)
        nmax, lmax = init.N, 0
    table, _ = _get_table(args, max(nmax, 2), max(lmax, 2))
    report = EvolutionReport.compute(field, times, norms, table)
    path = os.path.join(args.out, f"evolve_s{params.s:g}.{args.format}")
    _write_atomic(path, report.to_csv() if args.format == "csv" else report.to_json())
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        results = verify_mod.run_suite(args.suite, s=args.s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = {"suite": args.suite, "s": args.s,
           "checks": [r.to_json_dict() for r in results],
           "passed": bool(all(r.passed for r in results))}
    path = os.path.join(args.out, f"verify_{args.suite}.json")
    _write_atomic(path, json.dumps(doc, separators=(",", ":"), sort_keys=True))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: measured "
              f"{r.measured:.6g} vs {r.threshold:.6g} {r.detail}")
    print(f"report: {path}")
    return 0 if doc["passed"] else VERIFY_FAILURE


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------

def _verdict_rows(spec, ts, norms, params, quad, lam, extra=()):
    for t in ts:
        for label, norm in norms:
            v = series_tail_classify(spec, t, norm, params, quad, lam=lam)
            yield (*extra, t, label, v.classification, v.p_hat,
                   v.window_growth_log10, v.log10_tail_estimate)


def cmd_scenario(args) -> int:
    params, quad = _params(args), _quad(args)
    N = args.series_n
    ts = _parse_times(args.times) if args.times else None
    header = "t,norm,classification,p_hat,window_growth_log10,log10_tail_estimate"
    if args.scenario == "remark14":
        spec = DelaySeries(tau0=args.tau0, N=N)
        lam = radial_eigenvalues(N, params, quad)
        ts = ts or [round(args.tau0 * f, 6) for f in
                    (0.2, 0.5, 0.8, 0.95, 1.05, 1.2, 2.0, 4.0)]
        rows = _verdict_rows(spec, ts, [("l2", NormSpec.l2())], params, quad, lam)
        body = [",".join(map(str, r)) for r in rows]
        path = os.path.join(args.out, "scenario_remark14.csv")
        _write_atomic(path, "\n".join([header] + body) + "\n")
    elif args.scenario == "example41":
        spec = S2DelaySeries(N=N)
        lam = radial_eigenvalues(N, params, quad)
        ks = [float(x) for x in args.k_grid.split(",")]
        body, frontier = [], ["k,t_star"]
        for k in ks:
            tgrid = ts or [round(k * f, 6) for f in (0.25, 0.5, 0.8, 1.0, 1.2, 1.6, 2.4)]
            rows = _verdict_rows(spec, tgrid, [(f"shubin:k={k:g}", NormSpec.shubin(k))],
                                 params, quad, lam, extra=(k,))
            body += [",".join(map(str, r)) for r in rows]
            frontier.append(f"{k!r},{classify_frontier(spec, k, params, quad, lam=lam)!r}")
        path = os.path.join(args.out, "scenario_example41.csv")
        _write_atomic(path, "\n".join(["k," + header] + body) + "\n")
        fpath = os.path.join(args.out, "scenario_example41_frontier.csv")
        _write_atomic(fpath, "\n".join(frontier) + "\n")
        print(f"wrote {fpath}")
    elif args.scenario == "example42":
        spec = SobolevSeries(tau=args.tau, N=N)
        lam = radial_eigenvalues(N, params, quad)
        ts = ts or [0.5, 1.0, 2.0, 5.0, 10.0]
        norms = [(f"shubin:k={args.tau:g}", NormSpec.shubin(args.tau)),
                 (f"shubin:k={args.tau_prime:g}", NormSpec.shubin(args.tau_prime))]
        rows = _verdict_rows(spec, ts, norms, params, quad, lam)
        body = [",".join(map(str, r)) for r in rows]
        path = os.path.join(args.out, "scenario_example42.csv")
        _write_atomic(path, "\n".join([header] + body) + "\n")
    else:
        raise UsageError(f"unknown scenario {args.scenario!r}; "
                         "choose remark14, example41 or example42")
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dyboltz",
        description="Spectral toolkit for the linearized Boltzmann equation "
                    "with the canonical Debye-Yukawa kernel "
                    "beta(theta) = (sin theta)^-1 (log 1/sin theta)^(2/s-1).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--s", type=float, default=2.0,
                       help="Debye-Yukawa exponent s > 0 (default 2)")
        p.add_argument("--rel-tol", type=float, default=1e-10)
        p.add_argument("--abs-tol", type=float, default=1e-13)
        p.add_argument("--max-panels", type=int, default=72)
        p.add_argument("--nodes-per-panel", type=int, default=16)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--cache-dir", default=None,
                       help="eigenvalue cache directory (content-hash keyed)")
        p.add_argument("--workers", type=int, default=1,
                       help="parallel workers for table construction")

    p = sub.add_parser("eigs", help="build and export an eigenvalue table")
    common(p)
    p.add_argument("--nmax", type=int, default=64)
    p.add_argument("--lmax", type=int, default=64)
    p.set_defaults(fn=cmd_eigs)

    p = sub.add_parser("evolve", help="evolve initial data and tabulate norms")
    common(p)
    p.add_argument("--init", required=True,
                   help="modes:n,l,m,re,im;... | delay:tau0=T[,N=..] | "
                        "s2delay:[N=..] | sobolev:tau=T[,N=..]")
    p.add_argument("--times", required=True, help="comma-separated times")
    p.add_argument("--norms", default="l2",
                   help="semicolon-separated norm specs, e.g. "
                        "'l2;shubin:k=2;logsob:tau=1,nu=2;domain:tau=0.5'")
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("verify", help="run a verification suite")
    common(p)
    p.add_argument("--suite", required=True,
                   help="specfun | kernel | basis | spaces | solver | all")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("scenario", help="tail-classifier sweeps for the series data")
    common(p)
    p.add_argument("--scenario", required=True,
                   help="remark14 | example41 | example42")
    p.add_argument("--times", default=None, help="override the t grid")
    p.add_argument("--tau0", type=float, default=0.5, help="remark14 delay time")
    p.add_argument("--k-grid", default="1,2,4", help="example41 Shubin orders")
    p.add_argument("--tau", type=float, default=1.0, help="example42 tau")
    p.add_argument("--tau-prime", type=float, default=2.0, help="example42 tau'")
    p.add_argument("--series-n", type=int, default=10000, help="series truncation")
    p.set_defaults(fn=cmd_scenario)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except QuadratureConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return CONVERGENCE_FAILURE


if __name__ == "__main__":
    sys.exit(main())
