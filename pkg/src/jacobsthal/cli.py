"""Command-line surface.

Subcommands: seq (exact values with optional cross-checks), lehmer (direct
property test), scan (per-index certificates or direct verdicts as JSON
lines), verify (identity checking over a range), ingest (verified factor
table import).  Machine-readable records go to stdout one JSON object per
line; the human summary goes to stderr.

Exit codes: 0 success / all hold / definite non-Lehmer; 1 internal
disagreement or evaluation error; 2 usage, parse, or file-format problems;
3 indeterminate result (factoring budget exhausted); 4 a Lehmer number was
found; 5 identity counterexample.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import identity, lehmer, numtheory, sequences
from .cache import ENV_CACHE_PATH, CacheFormatError, FactorCache

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3
EXIT_LEHMER_FOUND = 4
EXIT_COUNTEREXAMPLE = 5


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _add_budget_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--trial-limit", type=_positive_int, default=10**6,
                     help="trial division bound (default 10^6)")
    sub.add_argument("--rho-iters", type=_positive_int, default=1 << 24,
                     help="rho step cap per cofactor (default 2^24)")
    sub.add_argument("--deadline-ms", type=_positive_int, default=None,
                     help="wall-clock cap per factorization call")
    sub.add_argument("--cache", default=None,
                     help=f"factor cache file (default: ${ENV_CACHE_PATH})")


def _budget(args: argparse.Namespace) -> numtheory.FactorBudget:
    return numtheory.FactorBudget(
        trial_limit=args.trial_limit,
        rho_iterations=args.rho_iters,
        deadline_ms=args.deadline_ms,
    )


def _open_cache(args: argparse.Namespace) -> FactorCache | None:
    path = args.cache or os.environ.get(ENV_CACHE_PATH)
    return FactorCache(path) if path else None


def _save_cache(cache: FactorCache | None) -> None:
    if cache is not None and cache.path:
        cache.save()


def _evidence_json(f: numtheory.Factorization | None):
    if f is None:
        return None
    return {
        "factors": [[p, e] for p, e in f.factors],
        "cofactor": f.cofactor,
        "complete": f.complete,
    }


def _emit(record: dict, out) -> None:
    out.write(json.dumps(record) + "\n")


def _recurrence_uv(p: int, q: int, n: int) -> tuple[int, int]:
    # independent of the index-halving evaluator on purpose
    u0, u1, v0, v1 = 0, 1, 2, p
    for _ in range(n):
        u0, u1 = u1, p * u1 - q * u0
        v0, v1 = v1, p * v1 - q * v0
    return u0, v0


def cmd_seq(args: argparse.Namespace) -> int:
    kind = args.kind
    n = args.n
    if kind in ("U", "V"):
        if not args.params:
            print("seq: --params P,Q is required for U and V", file=sys.stderr)
            return EXIT_USAGE
        try:
            p_str, q_str = args.params.split(",")
            params = sequences.LucasParams(int(p_str), int(q_str))
        except ValueError:
            print(f"seq: bad --params {args.params!r}, expected P,Q", file=sys.stderr)
            return EXIT_USAGE
        try:
            u, v = sequences.lucas_uv(params, n)
        except sequences.DegenerateDiscriminantError as exc:
            print(f"seq: {exc}", file=sys.stderr)
            return EXIT_USAGE
        value = u if kind == "U" else v
        if args.check:
            ru, rv = _recurrence_uv(params.p, params.q, n)
            if (ru, rv) != (u, v):
                print(f"seq: recurrence disagreement at n={n}", file=sys.stderr)
                return EXIT_INTERNAL
            print(f"check ok: recurrence agrees at n={n}", file=sys.stderr)
        print(value)
        return EXIT_OK
    if args.params:
        print("seq: --params only applies to kinds U and V", file=sys.stderr)
        return EXIT_USAGE
    value = sequences.jacobsthal(n) if kind == "J" else sequences.jacobsthal_lucas(n)
    if args.check:
        closed = sequences.closed_form_j(n) if kind == "J" else sequences.closed_form_jl(n)
        ru, rv = _recurrence_uv(1, -2, n)
        rec = ru if kind == "J" else rv
        if not (value == closed == rec):
            print(
                f"seq: disagreement at n={n}: doubling={value} closed={closed} recurrence={rec}",
                file=sys.stderr,
            )
            return EXIT_INTERNAL
        print(f"check ok: doubling, closed form and recurrence agree at n={n}", file=sys.stderr)
    print(value)
    return EXIT_OK


def cmd_lehmer(args: argparse.Namespace) -> int:
    m = args.m
    if m < 1:
        print("lehmer: --m must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        cache = _open_cache(args)
    except CacheFormatError as exc:
        print(f"lehmer: bad cache file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    verdict = lehmer.is_lehmer_direct(m, _budget(args), cache)
    record = {
        "kind": "lehmer-verdict",
        "m": m,
        "mode": "direct",
        "status": verdict.status.value,
        "evidence": _evidence_json(verdict.evidence),
        "primality": numtheory.primality_method(m),
        "axioms": None,
        "elapsed_ms": (time.perf_counter() - t0) * 1000,
    }
    _emit(record, sys.stdout)
    _save_cache(cache)
    if verdict.status is lehmer.LehmerStatus.LEHMER:
        return EXIT_LEHMER_FOUND
    if verdict.status is lehmer.LehmerStatus.INDETERMINATE:
        return EXIT_INDETERMINATE
    return EXIT_OK


def _scan_record(seq: str, mode: str, axioms: lehmer.AxiomConfig, entry: lehmer.ScanEntry) -> dict:
    cert = entry.certificate
    verdict = entry.verdict
    details = dict(cert.details) if cert is not None else None
    return {
        "kind": "scan-entry",
        "seq": seq,
        "n": entry.n,
        "mode": mode,
        "rule": cert.rule.value if cert is not None else None,
        "status": verdict.status.value if verdict is not None else None,
        "details": details,
        "fallback": entry.fallback,
        "evidence": _evidence_json(verdict.evidence) if verdict is not None else None,
        "primality": numtheory.primality_method(verdict.candidate) if verdict is not None else None,
        "axioms": {"omega_lower_bound": axioms.omega_lower_bound},
        "elapsed_ms": entry.elapsed_ms,
    }


def cmd_scan(args: argparse.Namespace) -> int:
    try:
        axioms = lehmer.AxiomConfig(args.omega_bound)
    except ValueError as exc:
        print(f"scan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cache = _open_cache(args)
    except CacheFormatError as exc:
        print(f"scan: bad cache file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = open(args.jsonl, "w", encoding="utf-8") if args.jsonl else sys.stdout
    t0 = time.perf_counter()
    entries = []
    try:
        for entry in lehmer.iter_scan(args.seq, args.max, args.mode, axioms, _budget(args), cache):
            entries.append(entry)
            _emit(_scan_record(args.seq, args.mode, axioms, entry), out)
        report = lehmer.summarize(args.seq, args.max, args.mode, axioms, entries, time.perf_counter() - t0)
        summary = {
            "kind": "scan-summary",
            "seq": args.seq,
            "mode": args.mode,
            "n_lo": report.n_lo,
            "n_hi": report.n_hi,
            "count": len(report.entries),
            "rule_counts": report.rule_counts,
            "status_counts": report.status_counts,
            "lehmer": report.lehmer_count,
            "indeterminate": report.indeterminate_count,
            "fallbacks": report.fallback_count,
            "axioms": {"omega_lower_bound": axioms.omega_lower_bound},
            "elapsed_ms": report.elapsed_s * 1000,
        }
        _emit(summary, out)
    finally:
        if out is not sys.stdout:
            out.close()
    _save_cache(cache)
    print(
        f"scan {args.seq} [0,{args.max}] {args.mode} mode: {len(report.entries)} indices, "
        f"{report.lehmer_count} Lehmer, {report.indeterminate_count} indeterminate, "
        f"{report.fallback_count} fallbacks, rules {report.rule_counts}, "
        f"omega bound {axioms.omega_lower_bound}, {report.elapsed_s:.3f}s",
        file=sys.stderr,
    )
    if report.lehmer_count:
        return EXIT_LEHMER_FOUND
    if report.indeterminate_count:
        return EXIT_INDETERMINATE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        ast = identity.parse(args.identity)
    except identity.IdentityParseError as exc:
        print(f"verify: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(ast, identity.Eq):
        print("verify: the identity must contain '=='", file=sys.stderr)
        return EXIT_USAGE
    lo, hi = args.lo, args.hi
    if lo > hi:
        print("verify: --lo must not exceed --hi", file=sys.stderr)
        return EXIT_USAGE
    if args.odd:
        step = 2
        lo += 1 - lo % 2
    elif args.even:
        step = 2
        lo += lo % 2
    else:
        step = args.step
    if lo > hi:
        print("verify: empty range after parity adjustment", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    outcome = identity.verify_range(ast, lo, hi, step)
    record = {
        "kind": "verify-outcome",
        "identity": args.identity,
        "lo": outcome.lo,
        "hi": outcome.hi,
        "step": outcome.step,
        "status": outcome.status,
        "n": outcome.n,
        "lhs": outcome.lhs,
        "rhs": outcome.rhs,
        "error": outcome.error,
        "elapsed_ms": (time.perf_counter() - t0) * 1000,
    }
    _emit(record, sys.stdout)
    if outcome.status == "AllHold":
        return EXIT_OK
    if outcome.status == "Counterexample":
        return EXIT_COUNTEREXAMPLE
    return EXIT_INTERNAL


def cmd_ingest(args: argparse.Namespace) -> int:
    cache_path = args.cache or os.environ.get(ENV_CACHE_PATH)
    if not cache_path:
        print(f"ingest: give --cache or set ${ENV_CACHE_PATH}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cache = FactorCache(cache_path)
    except CacheFormatError as exc:
        print(f"ingest: bad cache file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        accepted, rejected = cache.ingest(args.file)
    except (CacheFormatError, OSError) as exc:
        print(f"ingest: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for rej in rejected:
        print(f"ingest: rejected line {rej.line_no} ({rej.reason}): {rej.text}", file=sys.stderr)
    cache.save()
    _emit(
        {
            "kind": "ingest-result",
            "file": args.file,
            "cache": cache_path,
            "accepted": accepted,
            "rejected": len(rejected),
        },
        sys.stdout,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobsthal",
        description="Exact Jacobsthal / Jacobsthal-Lucas arithmetic, Lehmer-property "
        "scanning with rejection certificates, and identity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_seq = sub.add_parser("seq", help="print an exact sequence value")
    p_seq.add_argument("--kind", required=True, choices=["J", "j", "U", "V"])
    p_seq.add_argument("--n", required=True, type=_nonnegative_int)
    p_seq.add_argument("--params", help="P,Q for kinds U and V")
    p_seq.add_argument("--check", action="store_true",
                       help="cross-check closed form and recurrence")
    p_seq.set_defaults(func=cmd_seq)

    p_leh = sub.add_parser("lehmer", help="test one integer for the Lehmer property")
    p_leh.add_argument("--m", required=True, type=int)
    _add_budget_flags(p_leh)
    p_leh.set_defaults(func=cmd_lehmer)

    p_scan = sub.add_parser("scan", help="scan a sequence for the Lehmer property")
    p_scan.add_argument("--seq", required=True, choices=["J", "j"])
    p_scan.add_argument("--max", required=True, type=_nonnegative_int)
    p_scan.add_argument("--mode", required=True, choices=["certificate", "direct"])
    p_scan.add_argument("--omega-bound", type=int, default=15,
                        help="assumed lower bound on omega of a Lehmer number (default 15)")
    p_scan.add_argument("--jsonl", help="write records to this file instead of stdout")
    _add_budget_flags(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_ver = sub.add_parser("verify", help="check an identity over an index range")
    p_ver.add_argument("--identity", required=True, help='e.g. "j(n)-1 == 2^n"')
    p_ver.add_argument("--lo", required=True, type=_nonnegative_int)
    p_ver.add_argument("--hi", required=True, type=_nonnegative_int)
    group = p_ver.add_mutually_exclusive_group()
    group.add_argument("--step", type=_positive_int, default=1)
    group.add_argument("--odd", action="store_true", help="odd indices only")
    group.add_argument("--even", action="store_true", help="even indices only")
    p_ver.set_defaults(func=cmd_verify)

    p_ing = sub.add_parser("ingest", help="merge a verified factor table into the cache")
    p_ing.add_argument("--file", required=True, help="lines of VALUE=P^E,P^E,...")
    p_ing.add_argument("--cache", default=None,
                       help=f"factor cache file (default: ${ENV_CACHE_PATH})")
    p_ing.set_defaults(func=cmd_ingest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
