"""Structured payloads behind each CLI subcommand, already string-encoded."""

from __future__ import annotations

from fractions import Fraction

from .conic import ConicPoint, PellConic, is_fundamental_discriminant, sqrt_period_length
from .criteria import negative_pell, scholz_classify
from .descent import (
    SquareClass,
    TwoGroup,
    alpha,
    enumerate_descendants,
    integral_classes_positive,
    integral_point_on,
    lift,
    search_integral,
)
from .heights import canonical_h_closed, canonical_h_limit, check_height_axioms, h0
from .report import enc, join
from .selmer import (
    NotPrimeDiscriminantProduct,
    SearchBudgetExceeded,
    hilbert_verdicts,
    locally_solvable,
    rational_witness,
    redei_check,
    selmer_group,
    sha2,
)

DEFAULT_SEARCH_BOUND = 10**7


def minimal_basis(G: TwoGroup) -> list[SquareClass]:
    """Greedy basis over elements sorted by size: <5, 11> rather than <5, 55>."""
    return TwoGroup(G.elements()).basis


def _reps(G: TwoGroup) -> str:
    return join(c.rep for c in minimal_basis(G))


def _elements(G: TwoGroup) -> str:
    return join(c.rep for c in G.elements())


def _local(T, D: int) -> bool:
    if D > 0:
        return locally_solvable(T)[0]
    return all(v.solvable for v in hilbert_verdicts(T))


def descend_payload(delta: int, search_bound: int | None = DEFAULT_SEARCH_BOUND) -> dict:
    """The descendant table: equation, integral point or rational witness, and the lift."""
    C = PellConic(delta)
    D = C.delta
    w2 = integral_classes_positive(C) if D > 0 else None
    rows = []
    budget_hit = False
    for T in enumerate_descendants(C):
        ok = _local(T, D)
        r = s = x = y = None
        if D > 0:
            pt = integral_point_on(C, T) if SquareClass(T.a) in w2 else None
        else:
            found = search_integral(T, 2)
            pt = found[0] if found else None
        if pt is not None:
            status = "integral"
            r, s = pt
        elif ok:
            try:
                w = rational_witness(T, search_bound)
            except SearchBudgetExceeded:
                w, status, budget_hit = None, "budget", True
            else:
                if w is None:
                    raise AssertionError(f"{T} locally solvable without a rational point")
                status, r, s = "rational", w.r, w.s
        else:
            status = "unsolvable"
        if r is not None:
            Q = lift(T, r, s)
            x, y = Q.x, Q.y
        rows.append(
            {
                "a": enc(T.a),
                "b": enc(T.b),
                "equation": T.equation(),
                "locally_solvable": enc(ok),
                "status": status,
                "r": enc(None if r is None else Fraction(r)),
                "s": enc(None if s is None else Fraction(s)),
                "x": enc(x),
                "y": enc(y),
            }
        )
    out = {"delta": enc(D), "d": enc(C.disc.d), "rows": rows, "budget_exceeded": enc(budget_hit)}
    if D > 0:
        out.update(group_fields(C))
    return out


def group_fields(C: PellConic) -> dict:
    sel = selmer_group(C)
    w2 = integral_classes_positive(C)
    order, reps = sha2(C)
    try:
        e4, consistent = redei_check(C)
    except NotPrimeDiscriminantProduct:
        e4 = consistent = None
    return {
        "selmer_basis": _reps(sel),
        "selmer_elements": _elements(sel),
        "selmer_order": enc(sel.order),
        "w2_basis": _reps(w2),
        "w2_order": enc(w2.order),
        "sha_order": enc(order),
        "sha_representatives": join(T.a for T in reps),
        "sha_certificate": join(c.rep for c in sel.elements() if c not in w2),
        "redei_e4": enc(e4),
        "redei_consistent": enc(consistent),
    }


SELMER_KEYS = (
    "selmer_basis",
    "selmer_elements",
    "selmer_order",
    "w2_basis",
    "w2_order",
    "sha_order",
    "sha_representatives",
    "sha_certificate",
    "redei_e4",
    "redei_consistent",
)


def selmer_row(delta: int) -> dict:
    """One scan row; a failure is reported in ``error`` and leaves the other cells empty."""
    row = {"delta": enc(delta)}
    try:
        C = PellConic(delta)
        if C.delta <= 0:
            raise ValueError("Selmer groups are computed for D > 0")
        row.update(group_fields(C))
        row["error"] = ""
    except Exception as exc:  # isolate per-discriminant failures in scans
        row.update({k: "" for k in SELMER_KEYS})
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def fundamental_range(lo: int, hi: int) -> list[int]:
    return [n for n in range(max(lo, 2), hi + 1) if is_fundamental_discriminant(n)]


def parse_point(text: str) -> ConicPoint:
    parts = [int(t) for t in text.split(",")]
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3:
        raise ValueError(f"point must be r,s or r,s,n: {text!r}")
    return ConicPoint(*parts)


def height_payload(
    delta: int, P: ConicPoint, method: str = "both", iterations: int = 20, tolerance: float = 1e-9
) -> dict:
    C = PellConic(delta)
    C.check(P)
    base = h0(P)
    out = {"delta": enc(C.delta), "point": join([P.r, P.s, P.n]), "method": method, "h0": enc(base.value)}
    closed = canonical_h_closed(C, P) if method in ("closed", "both") else None
    limit = canonical_h_limit(C, P, iterations) if method in ("limit", "both") else None
    main = closed or limit
    out["h_closed"] = enc(closed and closed.value)
    out["h_limit"] = enc(limit and limit.value)
    out["limit_iterations"] = enc(limit and limit.iterations)
    out["limit_error_bound"] = enc(limit and limit.error_bound)
    out["limit_partial"] = enc(limit and limit.partial)
    out["agree"] = enc(
        None if not (closed and limit) else abs(closed.value - limit.value) <= limit.error_bound + tolerance
    )
    out["h_minus_h0_within_log4"] = enc(abs(main.value - base.value) <= 1.3862943611198906 + tolerance)
    Q = C.fundamental_point() if C.delta > 0 else C.torsion_generator()
    report = check_height_axioms(C, P, Q, tolerance)
    out["axioms_checked"] = enc(len(report.checks))
    out["axioms_failed"] = join(c.name for c in report.failures())
    return out


def scholz_payload(p: int, q: int, search_bound: int = 10**5) -> dict:
    row = scholz_classify(p, q)
    C = PellConic(p * q)
    F = C.fundamental_point()
    a_fund = alpha(C, F).rep
    brute = None
    if row.solvable_a is not None:
        T = next(T for T in enumerate_descendants(C) if T.a == row.solvable_a)
        hits = search_integral(T, search_bound)
        brute = hits[0] if hits else None
    neg = negative_pell(p, q)
    odd = sqrt_period_length(p * q) % 2 == 1
    return {
        "p": enc(p),
        "q": enc(q),
        "legendre": enc(row.legendre),
        "quartic_pq": enc(row.quartic_pq),
        "quartic_qp": enc(row.quartic_qp),
        "solvable_a": enc(row.solvable_a),
        "rule": row.rule,
        "sha_witness": enc(row.sha_witness),
        "fundamental_point": join([F.r, F.s]),
        "alpha_fundamental": enc(a_fund),
        "confirmed": enc(None if row.solvable_a is None else row.solvable_a == a_fund),
        "brute_force_point": "" if brute is None else join(brute),
        "negative_pell": neg.conclusion,
        "negative_pell_rule": neg.rule,
        "cf_period_odd": enc(odd),
        "negative_pell_confirmed": enc(None if neg.conclusion == "undetermined" else (neg.conclusion == "solvable") == odd),
        "rows": [
            {"a": enc(t.a), "equation": t.equation, "condition": t.condition, "holds": enc(t.holds)}
            for t in row.table
        ],
    }
