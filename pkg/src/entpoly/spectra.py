"""Critical local spectra via the two-step acceptance algorithm.

For every linearly independent L-subset of cube vertices one finds the
closest-to-origin point of the subset's convex hull; the point is kept
when all its coordinates are nonnegative and it does not sit on an edge
of the cube.  Kept points, together with the origin and the separable
corner (1/2, ..., 1/2), form the finite set of critical local spectra.

The min-norm point transforms equivariantly under the cube's signed
permutations, so a symmetry-reduced sweep classifies one representative
per orbit and reconstructs the orbit's accepted spectra as coordinate
permutations of the point's absolute value; the number of accepted
subsets in an orbit of weight w is w * 2^z / 2^L, with z the number of
vanishing coordinates (flips on the nonzero coordinates are forced).

Enumeration and acceptance run in exact rational arithmetic; the Monte
Carlo distance sampler converts to floating point only at emission.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Optional, Sequence

import numpy as np

from entpoly import hypercube
from entpoly.hypercube import (
    DependentSubsetError,
    VertexSubset,
    det_exact,
)
from entpoly.stats import DistanceSampleSet

_HALF = Fraction(1, 2)

# Margin below which floating-point screening defers to exact arithmetic.
_FLOAT_MARGIN = 1e-6
# Computed squared distances below this are treated as numerically
# singular in the float pipeline (only relevant above the exact-screen
# length cap; the true distance law puts ~1e-7 mass there).
_SINGULAR_D2 = 1e-16
# Largest L for which the sampler confirms dependence exactly.
_EXACT_SCREEN_MAX_L = 64


@dataclass(frozen=True)
class CriticalSpectrum:
    """An accepted critical local spectrum, exact in [0, 1/2]^L."""

    lam: tuple[Fraction, ...]
    norm_sq: Fraction
    source: Optional[VertexSubset] = None

    @property
    def length(self) -> int:
        return len(self.lam)

    def linear_entropy(self) -> Fraction:
        """Maximal mean linear entropy on the class: 1/2 - (2/L) |lambda|^2."""
        return _HALF - Fraction(2, self.length) * self.norm_sq


@dataclass(frozen=True)
class MinNormResult:
    """Closest point of a vertex hull to the origin, with a certificate.

    ``coefficients`` are convex weights over the input vertices (zero off
    the supporting face); ``on_boundary_face`` lists the indices carrying
    positive weight.
    """

    point: tuple[Fraction, ...]
    coefficients: tuple[Fraction, ...]
    on_boundary_face: tuple[int, ...]

    @property
    def norm_sq(self) -> Fraction:
        return sum(x * x for x in self.point)


# ---------------------------------------------------------------------------
# Exact rational linear algebra helpers
# ---------------------------------------------------------------------------

def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Solve a square rational system by Gauss-Jordan elimination.

    Returns None when the matrix is singular and the system inconsistent;
    for singular consistent systems free variables are set to zero.
    """
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if a[i][n] != 0:
            return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][n]
    return sol


def _affine_foot_ints(point_rows: Sequence[Sequence[int]]) -> Optional[tuple[list[Fraction], list[Fraction]]]:
    """Foot of the perpendicular from the origin onto aff(points).

    Points are integer vectors (rows).  Returns (foot, barycentric
    coefficients); None when the points are affinely dependent and the
    foot system is inconsistent (for dependent-consistent corrals some
    valid solution is returned).
    """
    k = len(point_rows)
    gram_rows = [
        [Fraction(sum(int(a) * int(b) for a, b in zip(pi, pj))) for pj in point_rows]
        for pi in point_rows
    ]
    rows = []
    rhs = []
    for i in range(k - 1):
        rows.append([gram_rows[j][i] - gram_rows[j][k - 1] for j in range(k)])
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * k)
    rhs.append(Fraction(1))
    coeffs = _solve_rational(rows, rhs)
    if coeffs is None:
        return None
    dim = len(point_rows[0])
    foot = [sum(c * p[j] for c, p in zip(coeffs, point_rows)) for j in range(dim)]
    return foot, coeffs


def affine_foot(s: VertexSubset) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Perpendicular foot from the origin onto the affine hull (half scaling).

    Returns the unique point sum(c_i v_i) with sum(c_i) = 1 orthogonal to
    every difference v_i - v_L, for the +/-(1/2)-scaled vertices, along
    with the coefficients.  Its squared norm equals squared_distance(s)/4.
    """
    if not hypercube.is_independent(s):
        raise DependentSubsetError("affine foot requires a linearly independent subset")
    res = _affine_foot_ints([v.signs() for v in s.vertices])
    assert res is not None  # independence implies affine independence
    foot, coeffs = res
    return tuple(x / 2 for x in foot), tuple(coeffs)


# ---------------------------------------------------------------------------
# Minimum-norm point of a convex hull (exact active-set search)
# ---------------------------------------------------------------------------

def _wolfe_min_norm_ints(point_rows: list[tuple[int, ...]]):
    """Minimum-norm point of conv(points) for integer points, exact.

    Active-set (Wolfe) search over supporting faces: a corral is refined
    by affine feet and line searches until the first-order optimality
    certificate x . p >= |x|^2 holds for every input point.  Exact
    rational arithmetic makes termination and the certificate exact.
    """
    m = len(point_rows)
    dim = len(point_rows[0])
    norms = [sum(x * x for x in p) for p in point_rows]
    start = min(range(m), key=lambda i: norms[i])
    corral = [start]
    weights = {start: Fraction(1)}
    x = [Fraction(v) for v in point_rows[start]]

    def dot_point(vec, idx):
        return sum(a * b for a, b in zip(vec, point_rows[idx]))

    while True:
        xx = sum(v * v for v in x)
        j = min(range(m), key=lambda i: dot_point(x, i))
        if dot_point(x, j) >= xx or j in corral:
            break
        corral.append(j)
        weights[j] = Fraction(0)
        while True:
            res = _affine_foot_ints([point_rows[i] for i in corral])
            assert res is not None
            y, alpha = res
            if all(a >= 0 for a in alpha):
                x = y
                weights = {i: a for i, a in zip(corral, alpha)}
                drop = [i for i, a in zip(corral, alpha) if a == 0]
                for i in drop:
                    corral.remove(i)
                    del weights[i]
                break
            theta = min(
                weights[i] / (weights[i] - a)
                for i, a in zip(corral, alpha)
                if a < 0
            )
            new_w = {}
            for i, a in zip(corral, alpha):
                w = weights[i] + theta * (a - weights[i])
                new_w[i] = w if w > 0 else Fraction(0)
            corral = [i for i in corral if new_w[i] > 0]
            weights = {i: new_w[i] for i in corral}
            x = [
                sum(weights[i] * point_rows[i][j] for i in corral)
                for j in range(dim)
            ]
    xx = sum(v * v for v in x)
    for i in range(m):
        if dot_point(x, i) < xx:
            raise RuntimeError("min-norm optimality certificate violated")
    coeffs = [weights.get(i, Fraction(0)) for i in range(m)]
    return x, coeffs


def min_norm_point(s: VertexSubset) -> MinNormResult:
    """Closest point of the convex hull of the +/-(1/2)-scaled vertices.

    Independence is not required; the hull of dependent vertices is legal.
    The result always satisfies the first-order optimality certificate
    point . v_j >= |point|^2 for every input vertex, which is verified on
    every call.
    """
    rows = [v.signs() for v in s.vertices]
    x, coeffs = _wolfe_min_norm_ints(rows)
    point = tuple(v / 2 for v in x)
    face = tuple(i for i, c in enumerate(coeffs) if c > 0)
    return MinNormResult(point, tuple(coeffs), face)


def is_on_edge_of_cube(point: Sequence) -> bool:
    """True iff the point lies on an edge of [-1/2, 1/2]^L.

    An edge pins all but one coordinate at +/-1/2, so the test is that at
    least L-1 coordinates have absolute value exactly 1/2.  Exact when
    given rationals.
    """
    pinned = sum(1 for x in point if x == _HALF or x == -_HALF)
    return pinned >= len(tuple(point)) - 1


def accept(s: VertexSubset) -> Optional[CriticalSpectrum]:
    """Run the two-step acceptance test on one vertex subset.

    Returns the critical spectrum when the subset is independent, the
    min-norm point of its hull has no negative coordinate, and the point
    is not on a cube edge; None otherwise.
    """
    if not hypercube.is_independent(s):
        return None
    res = min_norm_point(s)
    lam = res.point
    if any(x < 0 for x in lam):
        return None
    if is_on_edge_of_cube(lam):
        return None
    norm_sq = sum(x * x for x in lam)
    return CriticalSpectrum(lam, norm_sq, s)


# ---------------------------------------------------------------------------
# Classification of subsets (exact, with float prescreens)
# ---------------------------------------------------------------------------

def _float_wolfe(points: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, list[int]]:
    """Floating-point Wolfe min-norm pass used to prescreen corrals."""
    m = points.shape[0]
    start = int(np.argmin((points * points).sum(axis=1)))
    corral = [start]
    w = {start: 1.0}
    x = points[start].astype(float).copy()
    for _ in range(16 * m + 64):
        xx = float(x @ x)
        dots = points @ x
        j = int(np.argmin(dots))
        if dots[j] >= xx - tol * (1 + xx) or j in corral:
            break
        corral.append(j)
        w[j] = 0.0
        for _ in range(4 * m + 16):
            sub = points[corral].astype(float)
            k = len(corral)
            mat = np.zeros((k + 1, k + 1))
            mat[:k, :k] = 2.0 * (sub @ sub.T)
            mat[:k, k] = -1.0
            mat[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            try:
                sol = np.linalg.solve(mat, rhs)
            except np.linalg.LinAlgError:
                sol, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
            alpha = sol[:k]
            if (alpha >= -tol).all():
                x = alpha @ sub
                w = {i: max(float(a), 0.0) for i, a in zip(corral, alpha)}
                corral = [i for i in corral if w[i] > tol]
                w = {i: w[i] for i in corral}
                break
            num = np.array([w[i] for i in corral])
            mask = alpha < 0
            thetas = num[mask] / (num[mask] - alpha[mask])
            theta = float(thetas.min())
            for idx, i in enumerate(corral):
                w[i] = w[i] + theta * (alpha[idx] - w[i])
            corral = [i for i in corral if w[i] > tol]
            w = {i: w[i] for i in corral}
            x = np.sum([w[i] * points[i] for i in corral], axis=0)
    return x, corral


def _accept_exact_from_corral(
    rows: list[tuple[int, ...]], corral: list[int]
) -> Optional[tuple[Fraction, ...]]:
    """Exact min-norm confirmation given a candidate supporting face.

    Solves the affine foot of the corral exactly and checks feasibility
    plus the global optimality certificate; both together prove the foot
    is the hull's min-norm point.  Returns the point in the +/-1 scaling,
    or None when the candidate fails.
    """
    res = _affine_foot_ints([rows[i] for i in corral])
    if res is None:
        return None
    x, alpha = res
    if any(a < 0 for a in alpha):
        return None
    xx = sum(v * v for v in x)
    for p in rows:
        if sum(a * b for a, b in zip(x, p)) < xx:
            return None
    return tuple(x)


def _ids_to_rows(ids: Sequence[int], L: int) -> list[tuple[int, ...]]:
    return [tuple(-1 if (b >> i) & 1 else 1 for i in range(L)) for b in ids]


def _exact_d2(rows: list[tuple[int, ...]]) -> Optional[Fraction]:
    """Exact squared distance, or None when the rows are dependent."""
    g = [[sum(a * b for a, b in zip(ri, rj)) for rj in rows] for ri in rows]
    num = det_exact([row[:] for row in g])
    if num == 0:
        return None
    den = det_exact(hypercube._difference_gram_rows([row[:] for row in g]))
    return Fraction(num, den)


def _exact_min_norm_prescreened(rows: list[tuple[int, ...]]) -> tuple[Fraction, ...]:
    """Exact min-norm point of conv(rows) with a float corral prescreen."""
    L = len(rows[0])
    pts = np.array(rows, dtype=float)
    try:
        foot_c = np.linalg.solve(pts @ pts.T, np.ones(len(rows)))
    except np.linalg.LinAlgError:
        foot_c = None
    if foot_c is not None and (foot_c > 0).all():
        # Gram solve G c = t 1 gives the foot direction; normalized
        # weights are the barycentric coefficients, positive here, so the
        # foot is the hull min-norm point
        corral = list(range(len(rows)))
    else:
        _, corral = _float_wolfe(pts)
    confirmed = _accept_exact_from_corral(rows, corral)
    if confirmed is None:
        confirmed, _ = _wolfe_min_norm_ints(rows)
        confirmed = tuple(confirmed)
    return confirmed


@dataclass(frozen=True)
class SubsetRecord:
    """Classification of one enumerated subset (or subset orbit).

    ``weight`` is 1 in the plain sweep and the orbit size in the reduced
    sweep.  For independent subsets whose min-norm point is not on a cube
    edge, ``point_abs`` holds the absolute value of the point (+/-1
    scaling) and ``accepted_weight`` the number of weight-units whose own
    min-norm point passes the positivity filter.
    """

    ids: tuple[int, ...]
    weight: int
    independent: bool
    d2: Optional[Fraction]
    point_abs: Optional[tuple[Fraction, ...]]
    accepted_weight: int


def _classify_record(ids: tuple[int, ...], L: int, weight: int, reduced: bool) -> SubsetRecord:
    rows = _ids_to_rows(ids, L)
    d2 = _exact_d2(rows)
    if d2 is None:
        return SubsetRecord(ids, weight, False, None, None, 0)
    x = _exact_min_norm_prescreened(rows)
    pinned = sum(1 for v in x if v == 1 or v == -1)
    if pinned >= L - 1:  # cube edge: the whole orbit is rejected
        return SubsetRecord(ids, weight, True, d2, None, 0)
    if reduced:
        zeros = sum(1 for v in x if v == 0)
        accepted_weight = weight * (1 << zeros) >> L
        assert accepted_weight * (1 << L) == weight * (1 << zeros)
        point_abs = tuple(abs(v) for v in x)
        return SubsetRecord(ids, weight, True, d2, point_abs, accepted_weight)
    if any(v < 0 for v in x):
        return SubsetRecord(ids, weight, True, d2, None, 0)
    return SubsetRecord(ids, weight, True, d2, tuple(x), weight)


# ---------------------------------------------------------------------------
# Exhaustive enumeration of spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumClass:
    """All coordinate permutations of one accepted spectrum.

    ``lam`` is the class representative, sorted in decreasing order;
    ``perm_orbit_size`` counts the distinct permutations (each of which
    is itself a critical spectrum); ``subset_weight`` counts generating
    subsets over the whole sweep, orbit multiplicities included.
    """

    lam: tuple[Fraction, ...]
    norm_sq: Fraction
    perm_orbit_size: int
    subset_weight: int
    manual: bool = False
    source: Optional[VertexSubset] = None

    def spectra(self) -> Iterator[tuple[Fraction, ...]]:
        seen = set()
        for perm in itertools.permutations(self.lam):
            if perm not in seen:
                seen.add(perm)
                yield perm

    def linear_entropy(self) -> Fraction:
        return _HALF - Fraction(2, len(self.lam)) * self.norm_sq


def permutation_orbit_size(lam: Sequence[Fraction]) -> int:
    """Number of distinct coordinate permutations of a spectrum."""
    counts: dict = {}
    for x in lam:
        counts[x] = counts.get(x, 0) + 1
    size = factorial(len(tuple(lam)))
    for c in counts.values():
        size //= factorial(c)
    return size


@dataclass(frozen=True)
class SpectraEnumeration:
    """Full result of an exhaustive critical-spectra sweep."""

    L: int
    classes: tuple[SpectrumClass, ...]          # accepted classes + 2 manual
    accepted_classes: tuple[SpectrumClass, ...]  # algorithm-accepted only
    records: tuple[SubsetRecord, ...]
    subsets_total: int
    dependent_weight: int
    reduced: bool

    @property
    def total_spectra(self) -> int:
        """Number of distinct spectra, permutations expanded."""
        return sum(c.perm_orbit_size for c in self.classes)

    @property
    def permutation_orbits(self) -> int:
        """Number of spectra up to coordinate permutations."""
        return len(self.classes)

    def explicit_spectra(self, limit: int = 1_000_000) -> tuple[CriticalSpectrum, ...]:
        """Every spectrum as its own CriticalSpectrum, permutations expanded."""
        if self.total_spectra > limit:
            raise ValueError(
                f"{self.total_spectra} spectra exceed limit={limit}; "
                "work with .classes instead"
            )
        out = []
        for cls in self.classes:
            for lam in cls.spectra():
                out.append(CriticalSpectrum(lam, cls.norm_sq, cls.source))
        return tuple(out)

    def min_accepted_norm_sq(self) -> Optional[Fraction]:
        """Smallest |lambda|^2 over algorithm-accepted spectra."""
        if not self.accepted_classes:
            return None
        return min(c.norm_sq for c in self.accepted_classes)


@lru_cache(maxsize=4)
def _exhaustive_sweep(L: int, reduced: bool, cap: int) -> tuple[tuple[SubsetRecord, ...], int]:
    records: list[SubsetRecord] = []

    def visit(sub: VertexSubset, weight: int):
        records.append(_classify_record(sub.ids(), L, weight, reduced))

    summary = hypercube.enumerate_subsets(L, visit, symmetry_reduction=reduced, cap=cap)
    return tuple(records), summary.total_weight


def critical_spectra_enumerate(
    L: int,
    symmetry_reduction: Optional[bool] = None,
    cap: int = hypercube.EXHAUSTIVE_CAP,
) -> SpectraEnumeration:
    """All critical local spectra of the L-qubit cube, by exhaustion.

    Sweeps every L-subset of cube vertices (one representative per
    signed-permutation orbit when reduction is on, the default for
    L >= 5), deduplicates accepted spectra by exact rational equality
    grouped into coordinate-permutation classes, and appends the two
    manual points: the origin and the separable corner.
    """
    if symmetry_reduction is None:
        symmetry_reduction = L >= 5
    records, total = _exhaustive_sweep(L, symmetry_reduction, cap)

    agg: dict[tuple[Fraction, ...], list] = {}
    dependent_weight = 0
    for rec in records:
        if not rec.independent:
            dependent_weight += rec.weight
            continue
        if rec.point_abs is None:
            continue
        key = tuple(sorted(rec.point_abs, reverse=True))
        entry = agg.setdefault(key, [0, rec])
        entry[0] += rec.accepted_weight
    accepted = tuple(
        SpectrumClass(
            lam=tuple(v / 2 for v in key),
            norm_sq=sum((v / 2) ** 2 for v in key),
            perm_orbit_size=permutation_orbit_size(key),
            subset_weight=weight,
            source=VertexSubset.from_bits(rec.ids, L),
        )
        for key, (weight, rec) in sorted(agg.items())
    )
    zero = SpectrumClass((Fraction(0),) * L, Fraction(0), 1, 0, manual=True)
    sep = SpectrumClass((_HALF,) * L, Fraction(L, 4), 1, 0, manual=True)
    return SpectraEnumeration(
        L=L,
        classes=accepted + (zero, sep),
        accepted_classes=accepted,
        records=records,
        subsets_total=total,
        dependent_weight=dependent_weight,
        reduced=symmetry_reduction,
    )


# ---------------------------------------------------------------------------
# Distance sample sets (exhaustive and Monte Carlo)
# ---------------------------------------------------------------------------

def _sample_chunk_d2(bits: np.ndarray, L: int, method: str) -> tuple[np.ndarray, int]:
    """Squared distances (+/-1 scaling) for one chunk of subsets.

    Returns (d2 values for independent subsets, dependent count).  For
    L <= 64 dependence is decided exactly: a mod-p elimination flags
    candidate singular matrices and Bareiss confirms each flag.  Above
    that cap a vanishing float determinant is counted as dependent; the
    chance of either case at such L is negligible.
    """
    V = bits.astype(np.float64) * -2.0 + 1.0
    m = V.shape[0]
    keep = np.ones(m, dtype=bool)
    if L <= _EXACT_SCREEN_MAX_L:
        flagged = np.nonzero(hypercube._singular_screen_mod_p(V.astype(np.int64)))[0]
        for i in flagged:
            if det_exact(V[i].astype(np.int64).tolist()) == 0:
                keep[i] = False
    if method == "logdet":
        G = V @ V.transpose(0, 2, 1)
        s1, ld1 = np.linalg.slogdet(G)
        if L > 1:
            D = V[:, : L - 1, :] - V[:, L - 1 :, :]
            Gp = D @ D.transpose(0, 2, 1)
            s2, ld2 = np.linalg.slogdet(Gp)
        else:
            s2, ld2 = np.ones(m), np.zeros(m)
        with np.errstate(over="ignore", invalid="ignore"):
            d2 = np.where((s1 > 0) & (s2 > 0) & keep, np.exp(ld1 - ld2), 0.0)
    elif method == "solve":
        ones = np.ones((m, L, 1))
        d2 = np.zeros(m)
        try:
            a = np.linalg.solve(V, ones)[..., 0]
            d2 = 1.0 / np.einsum("ij,ij->i", a, a)
        except np.linalg.LinAlgError:
            for i in range(m):
                try:
                    ai = np.linalg.solve(V[i], ones[i])[:, 0]
                    d2[i] = 1.0 / float(ai @ ai)
                except np.linalg.LinAlgError:
                    d2[i] = 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    if L > _EXACT_SCREEN_MAX_L:
        keep &= d2 > _SINGULAR_D2
    else:
        keep &= d2 > 0
    dependent = int(m - keep.sum())
    return d2[keep], dependent


def distance_histogram(
    L: int,
    mode: str,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    filter: str = "all-independent",
    weighting: str = "by-subset",
    workers: int = 1,
    method: str = "solve",
    cap: int = hypercube.EXHAUSTIVE_CAP,
) -> DistanceSampleSet:
    """Multiset of |lambda|^2 values over subsets of the L-cube.

    mode="exhaustive" sweeps all subsets (symmetry-reduced for L >= 5)
    and supports filter "all-independent" or "accepted-only"; accepted
    values can be weighted "by-subset" (each generating subset counts,
    orbit multiplicities included) or "by-spectrum" (each distinct
    spectrum once).  mode="sampled" draws n subsets uniformly; dependent
    draws are skipped and counted, never silently resampled.  Exhaustive
    values are exact rationals converted to float on emission; the
    sampled path is floating point throughout.  Output is a pure
    function of (L, n, seed, filter, method).
    """
    if mode == "exhaustive":
        enum = critical_spectra_enumerate(L, cap=cap)
        if filter == "all-independent":
            pairs = [
                (float(rec.d2 / 4), rec.weight)
                for rec in enum.records
                if rec.independent
            ]
        elif filter == "accepted-only":
            if weighting == "by-subset":
                pairs = [
                    (float(sum((v / 2) ** 2 for v in rec.point_abs)), rec.accepted_weight)
                    for rec in enum.records
                    if rec.point_abs is not None and rec.accepted_weight > 0
                ]
            elif weighting == "by-spectrum":
                pairs = [(float(c.norm_sq), c.perm_orbit_size) for c in enum.accepted_classes]
            else:
                raise ValueError(f"unknown weighting {weighting!r}")
        else:
            raise ValueError(f"unknown filter {filter!r}")
        values = np.array([p[0] for p in pairs])
        weights = np.array([p[1] for p in pairs], dtype=np.int64)
        order = np.argsort(values, kind="stable")
        return DistanceSampleSet(
            values=values[order],
            weights=weights[order],
            meta={
                "L": L,
                "mode": "exhaustive",
                "filter": filter,
                "weighting": weighting if filter == "accepted-only" else None,
                "dependent": enum.dependent_weight,
                "source": "hypercube-exhaustive",
            },
        )
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if n is None or seed is None:
        raise ValueError("sampled mode requires n and seed")
    if filter == "accepted-only":
        return _sampled_accepted(L, n, seed)
    if filter != "all-independent":
        raise ValueError(f"unknown filter {filter!r}")

    chunks = hypercube.sample_bit_chunks(L, n, seed)

    def work(item):
        ci, bits = item
        vals, dep = _sample_chunk_d2(bits, L, method)
        return ci, vals, dep

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, chunks))
    else:
        results = [work(c) for c in chunks]
    results.sort(key=lambda t: t[0])
    values = np.concatenate([r[1] for r in results]) / 4.0
    dependent = sum(r[2] for r in results)
    return DistanceSampleSet(
        values=values,
        weights=None,
        meta={
            "L": L,
            "n": n,
            "seed": seed,
            "mode": "sampled",
            "filter": filter,
            "method": method,
            "dependent": dependent,
            "source": "hypercube-sampled",
        },
    )


def _sampled_accepted(L: int, n: int, seed: int) -> DistanceSampleSet:
    """Sampled distances restricted to subsets passing the acceptance test.

    Runs the exact two-step test per sampled subset, so it is meant for
    moderate n and L; the unfiltered sampler is the scaling path.
    """
    values = []
    dependent = 0
    rejected = 0
    for sub in hypercube.sample_subsets(L, n, seed):
        rec = _classify_record(sub.ids(), L, 1, reduced=False)
        if not rec.independent:
            dependent += 1
        elif rec.accepted_weight == 0:
            rejected += 1
        else:
            values.append(float(sum((v / 2) ** 2 for v in rec.point_abs)))
    return DistanceSampleSet(
        values=np.array(values),
        weights=None,
        meta={
            "L": L,
            "n": n,
            "seed": seed,
            "mode": "sampled",
            "filter": "accepted-only",
            "dependent": dependent,
            "rejected": rejected,
            "source": "hypercube-sampled",
        },
    )


# ---------------------------------------------------------------------------
# Spectra database (JSON wire format)
# ---------------------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def spectra_db_payload(enum: SpectraEnumeration, meta: Optional[dict] = None) -> dict:
    """JSON-ready spectra database, one row per permutation class."""
    payload = {
        "L": enum.L,
        "spectra": [
            {
                "lambda": [_frac_str(x) for x in cls.lam],
                "norm_sq": _frac_str(cls.norm_sq),
                "orbit_size": cls.perm_orbit_size,
            }
            for cls in enum.classes
        ],
    }
    if meta is not None:
        payload["meta"] = meta
    return payload


def save_spectra_db(path, enum: SpectraEnumeration, meta: Optional[dict] = None) -> None:
    with open(path, "w") as fh:
        json.dump(spectra_db_payload(enum, meta), fh, indent=1)
        fh.write("\n")


def load_spectra_db(path) -> dict:
    """Parse a spectra database file back into exact rationals.

    Returns {"L": int, "spectra": [(lambda tuple, norm_sq, orbit_size)]}.
    """
    with open(path) as fh:
        raw = json.load(fh)
    spectra = []
    for entry in raw["spectra"]:
        lam = tuple(Fraction(s) for s in entry["lambda"])
        norm_sq = Fraction(entry["norm_sq"])
        spectra.append((lam, norm_sq, int(entry["orbit_size"])))
    return {"L": int(raw["L"]), "spectra": spectra}
