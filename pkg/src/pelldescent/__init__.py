"""First 2-descent on Pell conics X^2 - D Y^2 = 4."""

from __future__ import annotations

from .conic import ConicPoint, PellConic
from .criteria import negative_pell, scholz_classify, tnc_conditions
from .descent import Descendant, SquareClass, TwoGroup, alpha, enumerate_descendants, lift
from .heights import canonical_h_closed, canonical_h_limit, mordell_weil_generators, naive_H
from .selmer import locally_solvable, rational_witness, selmer_group, selmer_report, sha2

__all__ = [
    "ConicPoint",
    "Descendant",
    "PellConic",
    "SquareClass",
    "TwoGroup",
    "alpha",
    "canonical_h_closed",
    "canonical_h_limit",
    "enumerate_descendants",
    "lift",
    "locally_solvable",
    "mordell_weil_generators",
    "naive_H",
    "negative_pell",
    "rational_witness",
    "scholz_classify",
    "selmer_group",
    "selmer_report",
    "sha2",
    "tnc_conditions",
]
