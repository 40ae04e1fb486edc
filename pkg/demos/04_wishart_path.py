"""The Gaussian/Wishart route to the same distance distribution.

Three exact distribution facts, checked by sampling:
 1. the Gram ratio |G|/|G^[L,L]| of standard Gaussian vectors is
    chi-squared(1) = Gamma(1/2, 1/2) for every L (Bartlett diagonal);
 2. transforming with the lower-triangular matrix A (identity, last row
    all -1) turns the leading-minor ratio into the difference-Gram
    ratio, scaling by the Cholesky constant R_LL^2 = 1/L exactly;
 3. a Gamma(1/2, 1/2) variable rescaled by 1/(4L) is Gamma(1/2, 2L),
    the limit law of the hypercube |lambda|^2 samples.
"""

import numpy as np

from entpoly.ensembles import (
    bartlett_diag_squared,
    gamma_sampler,
    gram_ratio_gaussian,
    sigma_cholesky_check,
    transform_matrix_A,
    transformed_gram_ratio,
)
from entpoly.stats import GammaLaw, ks_distance, ks_two_sample

N = 50_000
chi1 = GammaLaw(0.5, 0.5)

print("=== Fact 1: Gram ratio is chi-squared(1), any L ===")
for L in (1, 5, 10):
    ds = gram_ratio_gaussian(L, N, seed=L)
    print(f"  L={L:>2}: KS vs Gamma(1/2,1/2) = {ks_distance(ds, chi1).statistic:.5f}, "
          f"mean = {ds.values.mean():.4f} (expect 1)")
bart = bartlett_diag_squared(10, N, seed=99)
ds = gram_ratio_gaussian(10, N, seed=10)
print(f"  two-sample vs Bartlett T_LL^2: KS = {ks_two_sample(ds, bart).statistic:.5f}")

print("\n=== The transform matrix and its Cholesky constant ===")
print(transform_matrix_A(4))
for L in (2, 7, 50, 200):
    print(f"  L={L:>3}: R_LL^2 = {sigma_cholesky_check(L):.12f} (1/L = {1 / L:.12f})")

print("\n=== Fact 2: direct Wishart(L, Sigma) path vs difference path ===")
L = 5
direct = transformed_gram_ratio(L, N, seed=1, path="direct")
diff = transformed_gram_ratio(L, N, seed=2, path="difference")
print(f"  two-sample KS = {ks_two_sample(direct, diff).statistic:.5f}")
print(f"  both means ~ 1/L: {direct.values.mean():.5f}, {diff.values.mean():.5f}")
print(f"  L-scaled vs chi-squared(1): KS = "
      f"{ks_distance(diff.values * L, chi1).statistic:.5f}")

print("\n=== Gamma scaling: X/(4L) moves rate 1/2 to rate 2L ===")
L = 20
x = gamma_sampler(chi1, N, seed=3)
print(f"  KS vs Gamma(1/2, {2 * L}) = "
      f"{ks_distance(x / (4 * L), GammaLaw(0.5, 2 * L)).statistic:.5f}")
print(f"  mean = {np.mean(x / (4 * L)):.6f} (expect {1 / (4 * L):.6f})")
