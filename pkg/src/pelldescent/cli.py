"""Command-line front end: ``pelldescent {descend,selmer,sha,height,scholz,verify}``."""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .conic import DegenerateConic, NotOnCurve
from .criteria import OutOfScope
from .integers import FactorizationError
from .payloads import (
    DEFAULT_SEARCH_BOUND,
    descend_payload,
    fundamental_range,
    height_payload,
    parse_point,
    scholz_payload,
    selmer_row,
)
from .report import CACHE_VERIFY_ENV, CacheMismatch, ReportDocument, ResultCache, cache_key, enc
from .selmer import SearchBudgetExceeded
from .verify import SUITES

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise UsageError(f"--range expects A..B, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text}")
    return lo, hi


def _emit(doc: ReportDocument, fmt: str, out) -> None:
    if fmt == "json":
        out.write(doc.to_json())
    elif fmt == "tsv":
        out.write(doc.to_tsv())
    else:
        out.write(render_text(doc))


def render_text(doc: ReportDocument) -> str:
    """Aligned plain-text tables for terminals."""
    p = doc.payload
    lines = []
    scalars = [(k, v) for k, v in p.items() if isinstance(v, str) and v != ""]
    for k, v in scalars:
        lines.append(f"{k}: {v}")
    rows = p.get("rows")
    if rows:
        keys = list(rows[0])
        widths = {k: max(len(k), *(len(r[k]) for r in rows)) for k in keys}
        lines.append("")
        lines.append("  ".join(k.ljust(widths[k]) for k in keys).rstrip())
        for r in rows:
            lines.append("  ".join((r[k] or "--").ljust(widths[k]) for k in keys).rstrip())
    return "\n".join(lines) + "\n"


def _cached(cache: ResultCache, sub: str, delta: int, params: dict, fn, *args):
    if not cache.enabled:
        return fn(*args)
    return cache.lookup(cache_key(sub, delta, params), lambda: fn(*args))


def cmd_descend(args, cache: ResultCache) -> tuple[dict, int]:
    bound = args.search_bound
    payload = _cached(cache, "descend", args.delta, {"search_bound": bound}, descend_payload, args.delta, bound)
    return payload, EXIT_BUDGET if payload["budget_exceeded"] == "true" else EXIT_OK


def _scan(args, cache: ResultCache, sub: str) -> dict:
    if args.delta is not None:
        deltas = [args.delta]
    else:
        deltas = fundamental_range(*_parse_range(args.range))
    rows: list[dict | None] = [None] * len(deltas)
    todo = []
    for i, d in enumerate(deltas):
        hit = cache.get(cache_key(sub, d, {})) if cache.enabled else None
        if hit is not None and not _verify_cache():
            rows[i] = hit
        else:
            todo.append(i)
    work = [deltas[i] for i in todo]
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(selmer_row, work, chunksize=max(1, len(work) // (4 * args.jobs))))
    else:
        results = [selmer_row(d) for d in work]
    for i, row in zip(todo, results):
        rows[i] = row
        if cache.enabled and not row["error"]:
            cache.lookup(cache_key(sub, deltas[i], {}), lambda row=row: row)
    if sub == "sha":
        keep = ("delta", "sha_order", "sha_representatives", "sha_certificate", "selmer_order", "w2_order", "error")
        rows = [{k: r[k] for k in keep} for r in rows]
    return {"rows": rows}


def _verify_cache() -> bool:
    return os.environ.get(CACHE_VERIFY_ENV) == "1"


def cmd_selmer(args, cache):
    payload = _scan(args, cache, "selmer")
    return payload, EXIT_OK


def cmd_sha(args, cache):
    payload = _scan(args, cache, "sha")
    return payload, EXIT_OK


def cmd_height(args, cache):
    P = parse_point(args.point)
    payload = height_payload(args.delta, P, args.method, args.iters, args.tolerance)
    code = EXIT_BUDGET if payload["limit_partial"] == "true" else EXIT_OK
    return payload, code


def cmd_scholz(args, cache):
    payload = scholz_payload(args.p, args.q, args.search_bound or 10**5)
    bad = "false" in (payload["confirmed"], payload["negative_pell_confirmed"])
    return payload, EXIT_VERIFY if bad else EXIT_OK


def cmd_verify(args, cache):
    checks = SUITES[args.suite]()
    failed = [c for c in checks if not c.passed]
    payload = {
        "suite": args.suite,
        "checks": enc(len(checks)),
        "failed": enc(len(failed)),
        "first_failure": f"{failed[0].name}: {failed[0].detail}" if failed else "",
        "rows": [{"name": c.name, "passed": enc(c.passed), "detail": c.detail} for c in checks],
    }
    return payload, EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pelldescent", description="First 2-descent on Pell conics X^2 - D Y^2 = 4.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json")
    g.add_argument("--tsv", dest="format", action="store_const", const="tsv")
    fmt.set_defaults(format="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("descend", parents=[fmt], help="descendant table for one discriminant")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND, help="cap on witness search cells")
    p.set_defaults(func=cmd_descend)

    for name, func in (("selmer", cmd_selmer), ("sha", cmd_sha)):
        p = sub.add_parser(name, parents=[fmt], help=f"{name} data for one discriminant or a range")
        where = p.add_mutually_exclusive_group(required=True)
        where.add_argument("--delta", type=int)
        where.add_argument("--range", help="A..B, fundamental discriminants only")
        p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("height", parents=[fmt], help="naive and canonical heights of a point")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--point", required=True, help="r,s,n for x = r/n, y = s/n")
    p.add_argument("--method", choices=("limit", "closed", "both"), default="both")
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("scholz", parents=[fmt], help="Scholz classification for D = pq")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--search-bound", type=int, default=10**5)
    p.set_defaults(func=cmd_scholz)

    p = sub.add_parser("verify", parents=[fmt], help="run a verification suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.set_defaults(func=cmd_verify)
    return ap


def _deltas(args) -> list[str]:
    if getattr(args, "delta", None) is not None:
        return [str(args.delta)]
    if getattr(args, "range", None):
        return [args.range]
    if getattr(args, "p", None) is not None:
        return [str(args.p * args.q)]
    return []


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cache = ResultCache.from_env()
    start = time.perf_counter()
    try:
        payload, code = args.func(args, cache)
    except (UsageError, DegenerateConic, NotOnCurve, OutOfScope, ValueError) as exc:
        payload, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_USAGE
    except (FactorizationError, SearchBudgetExceeded) as exc:
        payload, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_BUDGET
    except CacheMismatch as exc:
        payload, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_VERIFY
    timing = {"seconds": f"{time.perf_counter() - start:.6f}"}
    doc = ReportDocument(["pelldescent", *argv], _deltas(args), payload, timing)
    if "error" in payload and args.format == "text":
        print(f"error: {payload['message']}", file=sys.stderr)
    else:
        _emit(doc, args.format, out)
    return code


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
