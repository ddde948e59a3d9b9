"""Command-line interface: every operation, machine-readable output.

Exit codes: 0 success, 1 bad parameters / I-O, 2 validity violation
(an exhaustive maximum above a bound, a failed reconstruction or
cross-check), so CI pipelines can gate on 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__, kernels, serialize
from .bounds import build_bound_report, evenly_spaced_binomial_sum, m_tilde, proposition1_gap, signed_walk_counts
from .decompose import decompose_to_pairs, mixture_law
from .dist import TwoPointVar, mass_of_set, product_walk, top_k_mass, top_k_witness
from .groups import group_from_spec
from .montecarlo import MatrixPair, estimate_matrix_walk, estimate_rho
from .search import (
    MODE_ANY,
    MODE_SYMMETRIC,
    ValidityError,
    conjecture_probe,
    exhaustive_rho,
    verify_theorem1,
    verify_theorem2,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDITY = 2


class CliParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for validity gates here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliUsageError(message)


class CliUsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, threads: bool = False, caps: bool = False):
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    if threads:
        p.add_argument("--threads", type=int, default=1, help="worker-thread cap")
    if caps:
        p.add_argument("--max-laws", type=int, default=None, help="override the law cap")
        p.add_argument("--max-group", type=int, default=None, help="override the table entry cap")


def build_parser() -> CliParser:
    parser = CliParser(prog="anticonc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"anticonc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate every bound at one (n, k, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exact", help="exact product law and top-k mass of an explicit V_n")
    p.add_argument("--group", required=True, help="Z<m>, Z<m>^<l>, D<m>, S<d>, GL2_<p>, @file.json")
    p.add_argument("--pairs", required=True, help="factors a:b separated by ';', element indices")
    p.add_argument("--repeat", type=int, default=1, help="tile the factor list this many times")
    p.add_argument("--k", type=int, default=1)
    _add_common(p, caps=True)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("search", help="exhaustive worst-case search (JSON-lines stream)")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-max", type=int, default=None, help="stream results for n..n-max")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--min-order", type=int, default=2)
    p.add_argument("--mode", choices=[MODE_SYMMETRIC, MODE_ANY], default=MODE_SYMMETRIC)
    _add_common(p, threads=True, caps=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="exhaustive maximum against a proved bound")
    p.add_argument("--theorem", type=int, choices=[1, 2], required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, required=True)
    _add_common(p, threads=True, caps=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="split a distribution into two-point uniforms")
    p.add_argument("--input", required=True, help="Distribution JSON file, or '-' for stdin")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("identity-check", help="evenly spaced binomial sums: exact vs trig")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, default=None, help="single offset; default all t in [0, s)")
    p.add_argument("--rel-tol", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_identity_check)

    p = sub.add_parser("simulate", help="seeded Monte Carlo walk estimation")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--group", help="tabulated group spec")
    grp.add_argument("--gl2", type=int, help="matrix mode: prime modulus, no table")
    p.add_argument("--pairs", required=True, help="a:b per factor ('a,b,c,d:e,f,g,h' in matrix mode), ';'-separated")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="mandatory: no wall-clock seeding")
    p.add_argument("--csv-hist", default=None, help="write (cell, count, frequency) histogram CSV here")
    _add_common(p, threads=True, caps=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("conjecture", help="probe the two-case mixed-order bound (JSON-lines)")
    p.add_argument("--group", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    _add_common(p, threads=True, caps=True)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("prop1", help="gap to the 2/m_tilde limit over a range of n")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True, help="target residue in [0, m_tilde)")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_prop1)

    return parser


# --- emit helpers ----------------------------------------------------------


def _config_echo(args: argparse.Namespace) -> dict:
    skip = {"func"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    cfg["version"] = __version__
    cfg["backend"] = kernels.BACKEND
    return cfg


def _flatten(value, prefix="", out=None):
    if out is None:
        out = {}
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(v, f"{prefix}{k}." if prefix else f"{k}.", out)
        # strip the trailing dot on leaves assembled below
    else:
        out[prefix[:-1]] = value
    return out


def _flatten_record(doc: dict) -> dict:
    flat = {}
    for key, value in doc.items():
        if isinstance(value, dict):
            for k2, v2 in _flatten(value, f"{key}.").items():
                flat[k2] = v2
        elif isinstance(value, list):
            flat[key] = json.dumps(value)
        else:
            flat[key] = value
    return flat


def emit(doc: dict, args: argparse.Namespace, stream=None) -> None:
    """One record in the requested format, config echoed for reproducibility."""
    stream = stream or sys.stdout
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        print(json.dumps({"config": _config_echo(args), **doc}), file=stream)
    elif fmt == "csv":
        flat = _flatten_record(doc)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(flat.keys())
        writer.writerow(flat.values())
        print(f"# config: {json.dumps(_config_echo(args))}", file=stream)
        print(buf.getvalue(), end="", file=stream)
    else:
        print(f"# config: {json.dumps(_config_echo(args))}", file=stream)
        for key, value in doc.items():
            print(f"{key}: {_text_value(value)}", file=stream)


def _text_value(value):
    if isinstance(value, dict) and set(value) >= {"num", "den"}:
        return f"{value['num']}/{value['den']} ({value.get('dec')})"
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return value


def _parse_pairs(spec: str, group, repeat: int) -> list[TwoPointVar]:
    vars = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split(":")
        vars.append(TwoPointVar(group, int(a), int(b)))
    if not vars:
        raise CliUsageError("--pairs parsed to an empty factor list")
    return vars * repeat


def _parse_matrix_pairs(spec: str, p: int, repeat: int) -> list[MatrixPair]:
    vars = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split(":")
        ea = tuple(int(x) for x in a.split(","))
        eb = tuple(int(x) for x in b.split(","))
        if len(ea) != 4 or len(eb) != 4:
            raise CliUsageError("matrix factors need 4 comma-separated entries per side")
        vars.append(MatrixPair(p, ea, eb))
    if not vars:
        raise CliUsageError("--pairs parsed to an empty factor list")
    return vars * repeat


# --- subcommand handlers ---------------------------------------------------


def cmd_bound(args) -> int:
    report = build_bound_report(args.n, args.k, args.m)
    emit(serialize.bound_report_json(report), args)
    return EXIT_VALIDITY if report.validity_violations() else EXIT_OK


def cmd_exact(args) -> int:
    group = group_from_spec(args.group, args.max_group)
    vars = _parse_pairs(args.pairs, group, args.repeat)
    law = product_walk(group, vars)
    top = top_k_mass(law, args.k)
    witness = top_k_witness(law, args.k)
    doc = {
        "group": group.name,
        "n": len(vars),
        "k": args.k,
        "law": serialize.dist_to_json(law),
        "top_k_mass": serialize.frac_json(top),
        "witness_set": list(witness),
        "witness_mass": serialize.frac_json(mass_of_set(law, witness)),
    }
    emit(doc, args)
    return EXIT_OK


def cmd_search(args) -> int:
    group = group_from_spec(args.group, args.max_group)
    n_hi = args.n_max if args.n_max is not None else args.n
    best = None
    for n in range(args.n, n_hi + 1):
        result = exhaustive_rho(
            group,
            n,
            args.k,
            min_order=args.min_order,
            mode=args.mode,
            laws_cap=args.max_laws,
            threads=args.threads,
        )
        emit(serialize.search_result_json(result), args)
        if best is None or result.max_value > best.max_value:
            best = result
    summary = {
        "summary": True,
        "global_max": serialize.frac_json(best.max_value),
        "at_n": best.n,
        "argmax": [serialize.pair_json(v) for v in best.argmax],
    }
    emit(summary, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    group = group_from_spec(args.group, args.max_group)
    verify = verify_theorem1 if args.theorem == 1 else verify_theorem2
    result = verify(group, args.n, args.k, args.m, laws_cap=args.max_laws, threads=args.threads)
    emit(serialize.search_result_json(result), args)
    return EXIT_OK  # a negative slack raises ValidityError before this point


def cmd_decompose(args) -> int:
    if args.input == "-":
        doc = json.load(sys.stdin)
    else:
        with open(args.input) as fh:
            doc = json.load(fh)
    dist = serialize.dist_from_json(doc)
    mixture = decompose_to_pairs(dist)
    reconstructed = mixture_law(mixture, dist.group)
    out = serialize.mixture_to_json(mixture)
    out["reconstruction_exact"] = reconstructed == dist
    emit(out, args)
    return EXIT_OK if reconstructed == dist else EXIT_VALIDITY


def cmd_identity_check(args) -> int:
    ts = range(args.s) if args.t is None else [args.t]
    rows = []
    worst = 0.0
    for t in ts:
        exact, trig = evenly_spaced_binomial_sum(args.n, args.s, t)
        rel = abs(trig - exact) / max(exact, 1)
        worst = max(worst, rel)
        rows.append({"t": t, "exact": str(exact), "trig": repr(trig), "rel_err": rel})
    emit({"n": args.n, "s": args.s, "rows": rows, "worst_rel_err": worst, "rel_tol": args.rel_tol}, args)
    return EXIT_OK if worst <= args.rel_tol else EXIT_VALIDITY


def cmd_simulate(args) -> int:
    if args.gl2 is not None:
        vars = _parse_matrix_pairs(args.pairs, args.gl2, args.repeat)
        report = estimate_matrix_walk(args.gl2, vars, args.samples, args.seed, threads=args.threads)
    else:
        group = group_from_spec(args.group, args.max_group)
        vars = _parse_pairs(args.pairs, group, args.repeat)
        report = estimate_rho(group, vars, args.samples, args.seed, threads=args.threads)
    emit(serialize.sample_report_json(report), args)
    if args.csv_hist:
        with open(args.csv_hist, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cell", "count", "frequency"])
            for cell, count in report.counts.items():
                writer.writerow([cell, count, count / report.samples])
    return EXIT_OK


def cmd_conjecture(args) -> int:
    group = group_from_spec(args.group, args.max_group)
    n_hi = args.n_max if args.n_max is not None else args.n
    worst = None
    for n in range(args.n, n_hi + 1):
        verdict = conjecture_probe(group, args.m, n, args.k, laws_cap=args.max_laws, threads=args.threads)
        emit(serialize.conjecture_verdict_json(verdict), args)
        if worst is None or verdict.exhaustive_max > worst.exhaustive_max:
            worst = verdict
    summary = {
        "summary": True,
        "global_max": serialize.frac_json(worst.exhaustive_max),
        "at_n": worst.n,
        "any_counterexample": worst.counterexample is not None,
    }
    emit(summary, args)
    return EXIT_OK


def cmd_prop1(args) -> int:
    M = m_tilde(args.m)
    if not 0 <= args.l < M:
        raise CliUsageError(f"--l must be a residue in [0, {M})")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        if n % 2 != args.l % 2:
            continue
        gap = proposition1_gap(n, args.m, args.l)
        prob = Fraction(signed_walk_counts(n, M)[args.l], 1 << n)
        rows.append({"n": n, "prob": serialize.frac_json(prob), "gap": serialize.frac_json(gap)})
    if not rows:
        raise CliUsageError("no n in range has the parity of l")
    emit({"m": args.m, "m_tilde": M, "l": args.l, "limit": serialize.frac_json(Fraction(2, M)), "rows": rows}, args)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        print(f"anticonc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ValidityError as exc:
        print(f"anticonc: validity violation: {exc}", file=sys.stderr)
        return EXIT_VALIDITY
    except CliUsageError as exc:
        print(f"anticonc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"anticonc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
