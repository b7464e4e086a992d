"""Residue-symbol criteria for descendants of X^2 - pq Y^2 = 4 and friends.

Everything here is a necessary condition unless a rule explicitly says it is
sufficient; "undetermined" is an honest answer, not a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conic import PellConic
from .descent import Descendant, alpha, classify_integral, descendant
from .integers import factor, is_prime, kronecker, quartic_symbol

SOLVABLE = "solvable"
UNSOLVABLE = "unsolvable"
UNDETERMINED = "undetermined"


class OutOfScope(ValueError):
    """The criterion's hypotheses do not cover this input."""


@dataclass(frozen=True)
class CriterionVerdict:
    conditions: tuple[tuple[str, int | None], ...]
    conclusion: str
    rule: str

    def failed(self) -> list[str]:
        return [name for name, v in self.conditions if v == -1]


def _prime_1mod4_product(delta: int) -> list[int]:
    if delta < 2:
        raise OutOfScope(f"{delta} is not a product of primes = 1 mod 4")
    f = factor(delta)
    if not f.is_squarefree() or any(p % 4 != 1 for p in f.primes):
        raise OutOfScope(f"{delta} is outside the theorem: need distinct primes = 1 mod 4")
    return f.primes


def tnc_conditions(delta: int, a: int) -> CriterionVerdict:
    """Necessary conditions for a r^2 - b s^2 = 4 to have an integral solution (D = prod p_i, p_i = 1 mod 4)."""
    _prime_1mod4_product(delta)
    if a <= 0 or delta % a:
        raise ValueError(f"a = {a} must be a positive divisor of {delta}")
    b = delta // a
    conds: list[tuple[str, int | None]] = []
    for q in factor(b).primes:
        conds.append((f"({a}/{q})", kronecker(a, q)))
    residues = []
    for p in factor(a).primes:
        v = kronecker(b, p)
        residues.append(v)
        conds.append((f"({b}/{p})", v))
    # the quartic symbol only makes sense once b is a square mod every p | a
    q4 = quartic_symbol(b, a) if all(v == 1 for v in residues) else None
    conds.append((f"({b}/{a})_4", q4))
    bad = any(v == -1 for _, v in conds)
    return CriterionVerdict(tuple(conds), UNSOLVABLE if bad else UNDETERMINED, "TnC")


def _check_pair(p: int, q: int):
    for x in (p, q):
        if not is_prime(x) or x % 4 != 1:
            raise OutOfScope(f"{x} is not a prime = 1 mod 4")
    if p == q:
        raise OutOfScope("p and q must differ")


@dataclass(frozen=True)
class TableRow:
    a: int
    equation: str
    condition: str
    holds: bool


@dataclass
class ScholzRow:
    p: int
    q: int
    legendre: int
    quartic_pq: int | None
    quartic_qp: int | None
    solvable_a: int | None
    rule: str
    table: list[TableRow] = field(default_factory=list)
    sha_witness: int | None = None


def _symbols(p: int, q: int) -> tuple[int, int | None, int | None]:
    leg = kronecker(p, q)
    if leg != 1:
        return leg, None, None
    return leg, quartic_symbol(p, q), quartic_symbol(q, p)


def scholz_classify(p: int, q: int) -> ScholzRow:
    """Sufficient conditions for one descendant of D = pq, plus the necessary-condition table."""
    _check_pair(p, q)
    leg, p4, q4 = _symbols(p, q)
    delta = p * q
    if leg == -1:
        a, rule = delta, "legendre -1"
    elif p4 == -1 and q4 == 1:
        a, rule = p, "quartic (-1, +1)"
    elif p4 == 1 and q4 == -1:
        a, rule = q, "quartic (+1, -1)"
    elif p4 == -1 and q4 == -1:
        a, rule = delta, "quartic (-1, -1)"
    else:
        a, rule = None, "quartic (+1, +1): undetermined"
    table = []
    for t in (1, p, q, delta):
        T = Descendant(t, delta // t)
        if t == delta and leg == 1:
            cond, holds = f"({p}/{q})_4 ({q}/{p})_4 = 1", p4 * q4 == 1
        else:
            v = tnc_conditions(delta, t)
            named = [f"{n} = {'?' if x is None else x}" for n, x in v.conditions]
            cond, holds = ", ".join(named) or "none", v.conclusion != UNSOLVABLE
        table.append(TableRow(t, T.equation(), cond, holds))
    sha = None
    if leg == 1 and a is not None:
        # Sel_2 = {1, p, q, pq} since (p/q) = 1; a descendant among p, q failing its condition is in Sha
        sha = next(row.a for row in table if row.a in (p, q) and not row.holds)
    return ScholzRow(p, q, leg, p4, q4, a, rule, table, sha)


def negative_pell(p: int, q: int) -> CriterionVerdict:
    """Decide X^2 - pq Y^2 = -1 where the symbols allow it."""
    _check_pair(p, q)
    leg, p4, q4 = _symbols(p, q)
    conds = ((f"({p}/{q})", leg), (f"({p}/{q})_4", p4), (f"({q}/{p})_4", q4))
    if leg == -1:
        return CriterionVerdict(conds, SOLVABLE, "legendre -1")
    if p4 == -1 and q4 == -1:
        return CriterionVerdict(conds, SOLVABLE, "quartic (-1, -1)")
    if p4 * q4 == -1:
        # T_pq is excluded by the product condition; exactly one of T_p, T_q survives
        row = scholz_classify(p, q)
        survivors = [r.a for r in row.table if r.a in (p, q) and r.holds]
        if len(survivors) != 1:
            raise AssertionError(f"mixed quartic case for {p}, {q} left {survivors}")
        return CriterionVerdict(conds, UNSOLVABLE, "product condition fails for T_pq")
    return CriterionVerdict(conds, UNDETERMINED, "quartic (+1, +1)")


# --------------------------------------------------------------------------
# small solutions


@dataclass(frozen=True)
class RDEntry:
    a: int
    coordinate: str  # "s=1", "s=2", "r=1", "r=2"
    n: int
    r_prime: int

    @property
    def form(self) -> str:
        sign = "-" if self.r_prime < 0 else "+"
        return f"{self.n}^2 {sign} {abs(self.r_prime)}"


def _rd_forms(T: Descendant, r: int, s: int) -> list[RDEntry]:
    a, b = T.a, T.b
    out = []
    if s == 1:
        out.append(RDEntry(a, "s=1", a * r, -4 * a))
    if s == 2 and r % 2 == 0:
        out.append(RDEntry(a, "s=2", a * (r // 2), -a))
    if r == 1:
        out.append(RDEntry(a, "r=1", b * s, 4 * b))
    if r == 2 and s % 2 == 0:
        out.append(RDEntry(a, "r=2", b * (s // 2), b))
    return out


def rd_small_solutions(delta: int) -> list[RDEntry]:
    """Richaud-Degert representations D = n^2 + r', r' | 4n, read off small descendant points."""
    C = PellConic(delta)
    D = C.delta
    if D <= 0:
        raise ValueError("need D > 0")
    F = C.fundamental_point()
    points = [(descendant(C, 1), abs(F.r), abs(F.s))]
    if alpha(C, F).rep != 1:
        points.append(classify_integral(C, F))
    out = []
    for T, r, s in points:
        for e in _rd_forms(T, abs(r), abs(s)):
            if e.n * e.n + e.r_prime != D or (4 * e.n) % e.r_prime:
                raise AssertionError(f"bad Richaud-Degert form {e} for {D}")
            out.append(e)
    return out
