"""Cyclic-cover Betti growth and the deficiency/rank bracket for the first l2-Betti number.

Nothing here computes the l2-Betti number itself. The growth sequence
``b1(K_n) / n`` runs along a chain whose intersection is ``ker(eps)``, not the
trivial group, so it is reported as raw data and never as a limit value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import betti_of_cover
from .presentations import FinitePresentation, deficiency

GROWTH_LABEL = "cyclic-cover Betti growth"


@dataclass(frozen=True)
class GrowthRow:
    n: int
    b1: int
    torsion: tuple[int, ...]
    ratio: Fraction


@dataclass(frozen=True)
class BettiGrowthReport:
    rows: tuple[GrowthRow, ...]
    label: str = GROWTH_LABEL

    @property
    def last_ratio(self) -> Fraction | None:
        return self.rows[-1].ratio if self.rows else None

    @property
    def nonincreasing(self) -> bool:
        return all(a.ratio >= b.ratio for a, b in zip(self.rows, self.rows[1:]))

    @property
    def b1_nondecreasing(self) -> bool:
        return all(a.b1 <= b.b1 for a, b in zip(self.rows, self.rows[1:]))

    def to_dict(self) -> dict:
        return {
            "schema_version": "1",
            "label": self.label,
            "rows": [{"n": str(r.n), "b1": str(r.b1),
                      "torsion": [str(d) for d in r.torsion], "ratio": str(r.ratio)}
                     for r in self.rows],
            "trend": {"last_ratio": None if self.last_ratio is None else str(self.last_ratio),
                      "ratio_nonincreasing": self.nonincreasing,
                      "b1_nondecreasing": self.b1_nondecreasing},
        }


def betti_growth(p: FinitePresentation, t, n_max: int) -> BettiGrowthReport:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rows = []
    for n in range(1, n_max + 1):
        ab = betti_of_cover(p, t, n)
        rows.append(GrowthRow(n, ab.b1, ab.torsion, Fraction(ab.b1, n)))
    return BettiGrowthReport(tuple(rows))


@dataclass(frozen=True)
class L2Bounds:
    lower_from_deficiency: int
    upper_from_rank: int
    user_lower: Fraction | None = None
    user_note: str | None = None
    # the upper bound uses the presentation's generator count in place of d(G)
    upper_note: str = "generator count - 1 (presentation rank proxy for d(G) - 1)"

    def to_dict(self) -> dict:
        d = {
            "lower_from_deficiency": str(self.lower_from_deficiency),
            "upper_from_rank": str(self.upper_from_rank),
            "upper_note": self.upper_note,
        }
        if self.user_lower is not None:
            d["user_lower"] = str(self.user_lower)
            d["user_note"] = self.user_note or ""
        return d


def l2_bounds(p: FinitePresentation, user_lower: Fraction | None = None,
              user_note: str | None = None) -> L2Bounds:
    return L2Bounds(max(deficiency(p) - 1, 0), p.num_generators - 1, user_lower, user_note)
