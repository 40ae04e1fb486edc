"""Critical-spectra acceptance algorithm against independent brute-force
oracles: face-enumeration min-norm points and a from-scratch L=3 sweep."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from entpoly import hypercube, spectra
from entpoly.hypercube import DependentSubsetError, SignVector, VertexSubset
from entpoly.spectra import (
    accept,
    affine_foot,
    critical_spectra_enumerate,
    distance_histogram,
    is_on_edge_of_cube,
    min_norm_point,
)

HALF = Fraction(1, 2)


def sv(pattern):
    return SignVector.from_signs([1 if ch == "+" else -1 for ch in pattern])


def subset(*patterns):
    return VertexSubset(tuple(sv(p) for p in patterns))


from oracles import oracle_min_norm, oracle_spectra


# ---------------------------------------------------------------------------
# affine_foot
# ---------------------------------------------------------------------------

class TestAffineFoot:
    def test_L2_symmetric(self):
        foot, coeffs = affine_foot(subset("++", "+-"))
        assert foot == (HALF, Fraction(0))
        assert coeffs == (HALF, HALF)

    def test_L3_w_configuration(self):
        foot, coeffs = affine_foot(subset("-++", "+-+", "++-"))
        assert foot == (Fraction(1, 6),) * 3
        assert coeffs == (Fraction(1, 3),) * 3

    def test_dependent_raises(self):
        with pytest.raises(DependentSubsetError):
            affine_foot(subset("++", "--"))

    def test_norm_matches_squared_distance(self):
        rng = random.Random(41)
        checked = 0
        while checked < 1000:
            ids = rng.sample(range(1 << 6), 6)
            s = VertexSubset.from_bits(ids, 6)
            if not hypercube.is_independent(s):
                continue
            foot, coeffs = affine_foot(s)
            assert sum(x * x for x in foot) == hypercube.squared_distance(s) / 4
            assert sum(coeffs) == 1
            checked += 1

    def test_orthogonality_and_affine_combination(self):
        rng = random.Random(43)
        checked = 0
        while checked < 50:
            L = rng.randint(2, 5)
            ids = rng.sample(range(1 << L), L)
            s = VertexSubset.from_bits(ids, L)
            if not hypercube.is_independent(s):
                continue
            foot, coeffs = affine_foot(s)
            verts = [v.half() for v in s]
            for j in range(L):
                assert foot[j] == sum(c * verts[i][j] for i, c in enumerate(coeffs))
            for i in range(L - 1):
                diff = [verts[i][j] - verts[-1][j] for j in range(L)]
                assert sum(f * d for f, d in zip(foot, diff)) == 0
            checked += 1


# ---------------------------------------------------------------------------
# min_norm_point
# ---------------------------------------------------------------------------

class TestMinNormPoint:
    def test_origin_inside_hull(self):
        res = min_norm_point(subset("++", "--"))
        assert res.point == (Fraction(0), Fraction(0))

    def test_L3_w_interior(self):
        res = min_norm_point(subset("-++", "+-+", "++-"))
        assert res.point == (Fraction(1, 6),) * 3
        assert res.on_boundary_face == (0, 1, 2)

    def test_L2_segment_foot(self):
        res = min_norm_point(subset("++", "-+"))
        assert res.point == (Fraction(0), HALF)

    def test_coefficients_reconstruct_point(self):
        rng = random.Random(47)
        for _ in range(200):
            L = rng.randint(1, 5)
            ids = rng.sample(range(1 << L), L)
            s = VertexSubset.from_bits(ids, L)
            res = min_norm_point(s)
            verts = [v.half() for v in s]
            assert sum(res.coefficients) == 1
            assert all(c >= 0 for c in res.coefficients)
            for j in range(L):
                assert res.point[j] == sum(
                    c * verts[i][j] for i, c in enumerate(res.coefficients)
                )

    def test_certificate_holds(self):
        # the first-order condition x . v >= |x|^2 for every input vertex
        rng = random.Random(53)
        for _ in range(200):
            L = rng.randint(1, 6)
            ids = rng.sample(range(1 << L), L)
            res = min_norm_point(VertexSubset.from_bits(ids, L))
            xx = res.norm_sq
            for v in VertexSubset.from_bits(ids, L):
                assert sum(p * h for p, h in zip(res.point, v.half())) >= xx

    def test_matches_face_enumeration_oracle(self):
        rng = random.Random(59)
        for _ in range(150):
            L = rng.randint(1, 5)
            ids = rng.sample(range(1 << L), L)
            s = VertexSubset.from_bits(ids, L)
            rows = [v.signs() for v in s]
            expected = oracle_min_norm(rows)
            res = min_norm_point(s)
            assert tuple(2 * x for x in res.point) == expected

    def test_foot_feasible_implies_equal(self):
        rng = random.Random(61)
        checked = 0
        while checked < 200:
            L = rng.randint(2, 6)
            ids = rng.sample(range(1 << L), L)
            s = VertexSubset.from_bits(ids, L)
            if not hypercube.is_independent(s):
                continue
            foot, coeffs = affine_foot(s)
            if all(c >= 0 for c in coeffs):
                assert min_norm_point(s).point == foot
            checked += 1


# ---------------------------------------------------------------------------
# edge test and accept
# ---------------------------------------------------------------------------

class TestEdgeTest:
    def test_examples(self):
        assert is_on_edge_of_cube((Fraction(0), HALF))
        assert not is_on_edge_of_cube((HALF, Fraction(0), Fraction(0)))
        assert is_on_edge_of_cube((HALF, HALF, HALF))
        assert is_on_edge_of_cube((-HALF, Fraction(1, 3)))
        assert is_on_edge_of_cube((Fraction(1, 5),))  # L=1: everything is an edge


class TestAccept:
    def test_w_triple_accepted(self):
        spec = accept(subset("-++", "+-+", "++-"))
        assert spec is not None
        assert spec.lam == (Fraction(1, 6),) * 3
        assert spec.norm_sq == Fraction(1, 12)

    def test_dependent_rejected(self):
        assert accept(subset("+++", "---", "++-")) is None

    def test_edge_rejected(self):
        assert accept(subset("++", "-+")) is None

    def test_half_zero_zero_accepted(self):
        spec = accept(subset("+++", "+-+", "++-"))
        assert spec is not None
        assert spec.lam == (HALF, Fraction(0), Fraction(0))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

EXPECTED_L3 = {
    (Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1, 6), Fraction(1, 6), Fraction(1, 6)),
    (HALF, Fraction(0), Fraction(0)),
    (Fraction(0), HALF, Fraction(0)),
    (Fraction(0), Fraction(0), HALF),
    (HALF, HALF, HALF),
}


def explicit_lams(enum):
    return {sp.lam for sp in enum.explicit_spectra()}


class TestEnumerate:
    def test_L3_exact_set(self):
        enum = critical_spectra_enumerate(3)
        assert explicit_lams(enum) == EXPECTED_L3
        assert enum.total_spectra == 6

    def test_L3_matches_independent_oracle(self):
        assert explicit_lams(critical_spectra_enumerate(3)) == oracle_spectra(3)

    def test_L3_and_L4_reduced_matches_plain(self):
        for L in (3, 4):
            plain = critical_spectra_enumerate(L, symmetry_reduction=False)
            reduced = critical_spectra_enumerate(L, symmetry_reduction=True)
            assert explicit_lams(plain) == explicit_lams(reduced)
            assert {(c.lam, c.subset_weight) for c in plain.accepted_classes} == {
                (c.lam, c.subset_weight) for c in reduced.accepted_classes
            }

    def test_L2_only_manual_points(self):
        enum = critical_spectra_enumerate(2)
        assert explicit_lams(enum) == {(Fraction(0), Fraction(0)), (HALF, HALF)}
        assert enum.accepted_classes == ()

    def test_closed_under_permutations(self):
        for L in (3, 4):
            lams = explicit_lams(critical_spectra_enumerate(L))
            for lam in lams:
                for perm in itertools.permutations(lam):
                    assert perm in lams

    def test_spectra_in_delta_H(self):
        from entpoly.marginals import in_delta_H

        for L in (2, 3, 4):
            for cls in critical_spectra_enumerate(L).classes:
                assert in_delta_H(cls.lam, tol=0)
                assert all(0 <= x <= HALF for x in cls.lam)

    def test_norm_sq_vs_squared_distance_of_source(self):
        # equals the affine-hull distance when the foot is feasible (the
        # generic case); a face-supported min-norm point is strictly
        # farther than the foot
        seen_face_case = False
        for cls in critical_spectra_enumerate(4).accepted_classes:
            assert cls.source is not None
            d2_over_4 = hypercube.squared_distance(cls.source) / 4
            _, coeffs = affine_foot(cls.source)
            if all(c >= 0 for c in coeffs):
                assert cls.norm_sq == d2_over_4
            else:
                assert cls.norm_sq > d2_over_4
                seen_face_case = True
        assert seen_face_case  # L=4 exhibits the face-supported case

    def test_L4_matches_independent_oracle(self):
        # from-scratch sweep of all 1820 quadruples with the face oracle
        assert explicit_lams(critical_spectra_enumerate(4)) == oracle_spectra(4)

    def test_permutation_orbits_L3(self):
        enum = critical_spectra_enumerate(3)
        # {0, W, (1/2,0,0)-class, Sep} -> 4 orbits
        assert enum.permutation_orbits == 4
        sizes = {cls.lam: cls.perm_orbit_size for cls in enum.classes}
        assert sizes[(HALF, Fraction(0), Fraction(0))] == 3
        assert sizes[(Fraction(1, 6),) * 3] == 1

    def test_accept_matches_classes_on_all_L3_subsets(self):
        # per-subset accept() agrees with the sweep, subset by subset
        enum = critical_spectra_enumerate(3, symmetry_reduction=False)
        for rec in enum.records:
            sub = VertexSubset.from_bits(rec.ids, 3)
            spec = accept(sub)
            if spec is None:
                assert rec.accepted_weight == 0
            else:
                assert rec.accepted_weight == 1
                assert spec.lam == tuple(v / 2 for v in rec.point_abs)

    def test_entropy_range(self):
        for cls in critical_spectra_enumerate(4).classes:
            e = cls.linear_entropy()
            assert 0 <= e <= HALF

    def test_cap_enforced(self):
        with pytest.raises(hypercube.EnumerationCapError):
            critical_spectra_enumerate(9, cap=7)


# ---------------------------------------------------------------------------
# distance histograms
# ---------------------------------------------------------------------------

class TestDistanceHistogram:
    def test_L2_exhaustive_all_independent(self):
        ds = distance_histogram(2, "exhaustive", filter="all-independent")
        assert ds.count == 4
        values = np.repeat(ds.values, ds.weights)
        assert np.allclose(values, 0.25)
        assert ds.meta["dependent"] == 2

    def test_sampled_deterministic(self):
        a = distance_histogram(8, "sampled", n=500, seed=7)
        b = distance_histogram(8, "sampled", n=500, seed=7)
        assert np.array_equal(a.values, b.values)
        assert a.meta == b.meta

    def test_sampled_matches_exact_arithmetic(self):
        # float pipeline vs exact Bareiss ratio on the same drawn subsets
        n, L = 300, 9
        ds = distance_histogram(L, "sampled", n=n, seed=99)
        exact = []
        for sub in hypercube.sample_subsets(L, n, seed=99):
            try:
                exact.append(float(hypercube.squared_distance(sub) / 4))
            except DependentSubsetError:
                pass
        assert ds.meta["dependent"] == n - len(exact)
        assert np.allclose(ds.values, exact, rtol=1e-9)

    def test_solve_and_logdet_methods_agree(self):
        a = distance_histogram(12, "sampled", n=400, seed=3, method="solve")
        b = distance_histogram(12, "sampled", n=400, seed=3, method="logdet")
        assert a.meta["dependent"] == b.meta["dependent"]
        assert np.allclose(a.values, b.values, rtol=1e-8)

    def test_workers_do_not_change_result(self):
        a = distance_histogram(10, "sampled", n=9000, seed=11, workers=1)
        b = distance_histogram(10, "sampled", n=9000, seed=11, workers=3)
        assert np.array_equal(a.values, b.values)

    def test_dependent_subsets_skipped_and_counted(self):
        # L=2: a third of random pairs are antipodal, i.e. dependent
        ds = distance_histogram(2, "sampled", n=3000, seed=1)
        frac = ds.meta["dependent"] / 3000
        assert 0.25 < frac < 0.42
        assert ds.values.size == 3000 - ds.meta["dependent"]
        assert np.allclose(ds.values, 0.25)

    def test_accepted_only_exhaustive_by_spectrum(self):
        ds = distance_histogram(3, "exhaustive", filter="accepted-only", weighting="by-spectrum")
        got = sorted(np.repeat(ds.values, ds.weights).tolist())
        enum = critical_spectra_enumerate(3)
        expected = sorted(
            float(c.norm_sq) for c in enum.accepted_classes for _ in range(c.perm_orbit_size)
        )
        assert got == expected

    def test_accepted_only_sampled(self):
        ds = distance_histogram(3, "sampled", n=200, seed=2, filter="accepted-only")
        allowed = {float(c.norm_sq) for c in critical_spectra_enumerate(3).accepted_classes}
        assert ds.values.size > 0
        for v in ds.values:
            assert any(abs(v - a) < 1e-12 for a in allowed)

    def test_exhaustive_weighting_by_subset_L3(self):
        enum_plain = critical_spectra_enumerate(3, symmetry_reduction=False)
        ds = distance_histogram(3, "exhaustive", filter="accepted-only", weighting="by-subset")
        allowed = {float(c.norm_sq) for c in enum_plain.accepted_classes}
        for v in ds.values:
            assert any(abs(v - a) < 1e-12 for a in allowed)
        # total accepted weight equals the number of individually accepted subsets
        accepted_subsets = sum(rec.accepted_weight for rec in enum_plain.records)
        assert ds.count == accepted_subsets > len(allowed)


# ---------------------------------------------------------------------------
# database round trip
# ---------------------------------------------------------------------------

class TestSpectraDB:
    def test_round_trip(self, tmp_path):
        enum = critical_spectra_enumerate(3)
        path = tmp_path / "spectra3.json"
        spectra.save_spectra_db(path, enum, meta={"seed": 0})
        loaded = spectra.load_spectra_db(path)
        assert loaded["L"] == 3
        assert {lam for lam, _, _ in loaded["spectra"]} == {
            (Fraction(0),) * 3,
            (Fraction(1, 6),) * 3,
            (HALF, Fraction(0), Fraction(0)),
            (HALF, HALF, HALF),
        }
        for lam, norm_sq, orbit in loaded["spectra"]:
            assert norm_sq == sum(x * x for x in lam)
            assert orbit == spectra.permutation_orbit_size(lam)

    def test_rationals_serialized_exactly(self, tmp_path):
        enum = critical_spectra_enumerate(3)
        payload = spectra.spectra_db_payload(enum)
        for entry in payload["spectra"]:
            for s in entry["lambda"]:
                num, den = s.split("/")
                int(num), int(den)
