"""Purity requirements for witnessing via local spectra.

A mixed state of purity p pins the local spectra of a nearby pure state
down to precision delta_L(p) = (L/2)(1 - sqrt(2p - 1)).  Distinguishing
generic spectra classes needs precision 1/(2 sqrt(L)) (the square root of
the limiting mean squared distance), while separating ALL classes needs
precision below the smallest accepted spectrum norm, read from a spectra
database.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PurityPoint:
    """One row of the purity-requirements table.

    ``p_generic`` is None only at L = 1, where the threshold 1/(2 sqrt L)
    equals L/2 and no purity in (1/2, 1] achieves it (degenerate regime).
    """

    L: int
    delta_generic: float
    p_generic: Optional[float]
    min_norm_lambda: Optional[float]
    p_all: Optional[float]


def delta_precision(L: int, p: float) -> float:
    """Worst-case local-spectra deviation at purity p: (L/2)(1 - sqrt(2p-1)).

    Defined for 1/2 < p <= 1 (vacuous below); decreasing in p, zero at a
    pure state.
    """
    if not 0.5 < p <= 1.0:
        raise ValueError(f"purity must be in (1/2, 1], got {p}")
    return 0.5 * L * (1.0 - math.sqrt(2.0 * p - 1.0))


def required_purity(L: int, epsilon: float) -> float:
    """The unique purity p with delta_precision(L, p) = epsilon.

    Analytic inverse: p = ((1 - 2 eps/L)^2 + 1)/2, valid for
    0 <= epsilon < L/2.
    """
    if not 0.0 <= epsilon < 0.5 * L:
        raise ValueError(f"epsilon must be in [0, L/2), got {epsilon}")
    t = 1.0 - 2.0 * epsilon / L
    return 0.5 * (t * t + 1.0)


def generic_threshold(L: int) -> float:
    """Distance scale where spectra accumulate: 1/(2 sqrt(L)).

    Equals the square root of the mean of Gamma(1/2, 2L) (which is
    1/(4L)), the limiting law of the squared distances.
    """
    if L < 1:
        raise ValueError("L must be positive")
    return 0.5 / math.sqrt(L)


def min_norm_sq_from_db(db: dict) -> Optional[Fraction]:
    """Smallest accepted |lambda|^2 from a loaded spectra database.

    The two manual points are excluded: the origin (norm 0, which would
    trivialize the minimum) and the separable corner; only
    algorithm-accepted spectra count.  None when nothing remains.
    """
    L = db["L"]
    sep = (_HALF,) * L
    candidates = [
        norm_sq
        for lam, norm_sq, _ in db["spectra"]
        if norm_sq != 0 and lam != sep
    ]
    if not candidates:
        return None
    return min(candidates)


def purity_table(
    L_range: Iterable[int], spectra_dbs: Optional[dict[int, dict]] = None
) -> list[PurityPoint]:
    """Purity requirements per L: generic column always, the all-classes
    column where a spectra database is supplied for that L."""
    out = []
    for L in L_range:
        eps = generic_threshold(L)
        min_norm = None
        p_all = None
        db = (spectra_dbs or {}).get(L)
        if db is not None:
            m = min_norm_sq_from_db(db)
            if m is not None:
                min_norm = math.sqrt(float(m))
                p_all = required_purity(L, min_norm)
        out.append(
            PurityPoint(
                L=L,
                delta_generic=eps,
                p_generic=required_purity(L, eps) if eps < 0.5 * L else None,
                min_norm_lambda=min_norm,
                p_all=p_all,
            )
        )
    return out


def write_purity_csv(path, points: list[PurityPoint], meta: dict) -> None:
    """Figure-data CSV: L, p_generic, p_all, delta_generic, min_norm_lambda."""
    from entpoly.stats import write_metadata_header

    with open(path, "w", newline="") as fh:
        write_metadata_header(fh, meta)
        writer = csv.writer(fh)
        writer.writerow(["L", "p_generic", "p_all", "delta_generic", "min_norm_lambda"])
        for pt in points:
            writer.writerow(
                [
                    pt.L,
                    "" if pt.p_generic is None else repr(pt.p_generic),
                    "" if pt.p_all is None else repr(pt.p_all),
                    repr(pt.delta_generic),
                    "" if pt.min_norm_lambda is None else repr(pt.min_norm_lambda),
                ]
            )
