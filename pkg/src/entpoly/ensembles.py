"""Gaussian and Wishart ensembles for the random-matrix cross-check.

The squared simplex heights of random cube-vertex subsets converge, for
many qubits, to the law of the corresponding Gaussian-vector ratio; this
module provides that Gaussian side: Gram determinant ratios, the
Bartlett construction of Wishart samples, the lower-triangular transform
whose Cholesky factor carries the 1/L constant, and gamma sampling.

All gamma parameters are RATES (see `entpoly.stats.GammaLaw`).  Normal
variates come from numpy's PCG64 generator via `standard_normal`, which
uses the ziggurat algorithm; gamma variates use numpy's
Marsaglia-Tsang-based `Generator.gamma`.  Every sampler is a pure
function of its (parameters, seed) arguments.

Determinant ratios are evaluated through log-determinants from LU with
partial pivoting (`numpy.linalg.slogdet`): at L = 200 the determinant of
an L x L Gram matrix overflows double precision, while the log-space
difference of the two factors does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from entpoly.stats import DistanceSampleSet, GammaLaw

_CHUNK = 65536


@dataclass(frozen=True)
class LowerTriangular:
    """Lower-triangular matrix, positive diagonal when from a Cholesky."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(m, np.tril(m)):
            raise ValueError("matrix must be lower triangular")

    @property
    def L(self) -> int:
        return self.matrix.shape[0]

    def wishart(self) -> np.ndarray:
        """T T^t, a Wishart(L, I) sample when T is a Bartlett factor."""
        return self.matrix @ self.matrix.T


def _chunked_rngs(seed: int, n: int, chunk: int = _CHUNK):
    n_chunks = (n + chunk - 1) // chunk
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    for ci in range(n_chunks):
        m = min(chunk, n - ci * chunk)
        yield np.random.default_rng(seeds[ci]), m


def _log_det_ratio(G: np.ndarray, minor_dim: int) -> tuple[np.ndarray, int]:
    """|G| / |leading principal minor| via slogdet differences.

    Returns (ratios, resampled) where non-positive-definite draws (a
    probability-zero event hit only through rounding) are dropped and
    counted.
    """
    s1, ld1 = np.linalg.slogdet(G)
    if minor_dim >= 1:
        s2, ld2 = np.linalg.slogdet(G[:, :minor_dim, :minor_dim])
    else:
        s2, ld2 = np.ones(G.shape[0]), np.zeros(G.shape[0])
    good = (s1 > 0) & (s2 > 0)
    ratios = np.exp(ld1[good] - ld2[good])
    return ratios, int((~good).sum())


def gram_ratio_gaussian(L: int, n: int, seed: int) -> DistanceSampleSet:
    """Samples of |G(v_1..v_L)| / |G(v_1..v_{L-1})| for standard Gaussians.

    The ratio is the squared last Cholesky diagonal of a Wishart(L, I)
    sample and is chi-squared with one degree of freedom, i.e.
    Gamma(1/2, 1/2) in the rate convention, exactly, for every L.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    skipped = 0
    for rng, m in _chunked_rngs(seed, n):
        V = rng.standard_normal((m, L, L))  # columns are the L vectors
        G = V.transpose(0, 2, 1) @ V
        vals, bad = _log_det_ratio(G, L - 1)
        out.append(vals)
        skipped += bad
    return DistanceSampleSet(
        values=np.concatenate(out),
        meta={"L": L, "n": n, "seed": seed, "path": "gram-ratio", "skipped": skipped,
              "source": "gaussian-ensemble"},
    )


def bartlett_sample(L: int, seed: int) -> LowerTriangular:
    """One Bartlett factor T of a Wishart(L, I) sample.

    Diagonal entries satisfy T_ii^2 ~ Gamma((L-i+1)/2, 1/2) (i equal to
    1..L, rate convention), i.e. chi-squared with L-i+1 degrees of
    freedom; entries below the diagonal are independent standard normals.
    """
    rng = np.random.default_rng(seed)
    T = np.zeros((L, L))
    idx = np.tril_indices(L, -1)
    T[idx] = rng.standard_normal(len(idx[0]))
    dfs = np.arange(L, 0, -1)  # L - i + 1 for i = 1..L
    T[np.diag_indices(L)] = np.sqrt(rng.chisquare(dfs))
    return LowerTriangular(T)


def bartlett_diag_squared(L: int, n: int, seed: int, i: Optional[int] = None) -> np.ndarray:
    """n draws of T_ii^2 from the Bartlett construction (default i = L).

    Batch form of `bartlett_sample` for distribution tests; the same
    chi-squared construction, vectorized over draws.
    """
    if i is None:
        i = L
    if not 1 <= i <= L:
        raise ValueError("diagonal index out of range")
    rng = np.random.default_rng(seed)
    return rng.chisquare(L - i + 1, size=n)


def transform_matrix_A(L: int) -> np.ndarray:
    """The lower-triangular transform: identity with last row all -1.

    Its determinant is -1 for every L (the diagonal is 1, ..., 1, -1), so
    the transform is always invertible.
    """
    A = np.eye(L)
    A[-1, :] = -1.0
    return A


def sigma_cholesky_check(L: int) -> float:
    """Squared last diagonal of the Cholesky factor of Sigma = A^t A.

    Equals 1/L exactly: |Sigma| = det(A)^2 = 1 while the leading
    (L-1)-minor of Sigma is L (ones matrix plus identity), and R_LL^2 is
    their ratio.
    """
    A = transform_matrix_A(L)
    sigma = A.T @ A
    R = np.linalg.cholesky(sigma)
    return float(R[-1, -1] ** 2)


def transformed_gram_ratio(
    L: int, n: int, seed: int, path: str = "difference"
) -> DistanceSampleSet:
    """Samples of the transformed determinant ratio, law Gamma(1/2, L/2).

    path="direct": draw w_i ~ N(0, Sigma) with Sigma = A^t A and return
    |G(w)| / |G^[L,L](w)|.  path="difference": draw v_i ~ N(0, I) and
    return |G(v_1..v_L)| / |G(v_1-v_L, .., v_{L-1}-v_L)|.  Both equal
    (1/L) * chi-squared(1) in law, i.e. Gamma(1/2, L/2) in the rate
    convention.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if path not in ("direct", "difference"):
        raise ValueError(f"unknown path {path!r}")
    A = transform_matrix_A(L)
    out = []
    skipped = 0
    for rng, m in _chunked_rngs(seed, n):
        V = rng.standard_normal((m, L, L))  # columns are the L vectors
        if path == "direct":
            W = A.T @ V  # columns w_i = A^t v_i, i.i.d. N(0, A^t A)
            # Wishart(L, Sigma) is the sum of outer products of the draws
            G = W @ W.transpose(0, 2, 1)
            vals, bad = _log_det_ratio(G, L - 1)
        else:
            cols = V.transpose(0, 2, 1)  # (m, L, L): row i is vector v_i
            G = cols @ cols.transpose(0, 2, 1)
            s1, ld1 = np.linalg.slogdet(G)
            if L > 1:
                D = cols[:, : L - 1, :] - cols[:, L - 1 :, :]
                Gp = D @ D.transpose(0, 2, 1)
                s2, ld2 = np.linalg.slogdet(Gp)
            else:
                s2, ld2 = np.ones(m), np.zeros(m)
            good = (s1 > 0) & (s2 > 0)
            vals = np.exp(ld1[good] - ld2[good])
            bad = int((~good).sum())
        out.append(vals)
        skipped += bad
    return DistanceSampleSet(
        values=np.concatenate(out),
        meta={"L": L, "n": n, "seed": seed, "path": path, "skipped": skipped,
              "source": "transformed-gaussian"},
    )


def gamma_sampler(law: GammaLaw, n: int, seed: int) -> np.ndarray:
    """n i.i.d. draws from a gamma law given in the RATE convention.

    numpy's `Generator.gamma` takes a scale, so the rate is inverted
    here; passing a rate straight through would be silently wrong.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.empty(n)
    pos = 0
    for rng, m in _chunked_rngs(seed, n):
        out[pos : pos + m] = rng.gamma(shape=law.alpha, scale=1.0 / law.beta, size=m)
        pos += m
    return out


def column_norm_squares(L: int, n: int, seed: int) -> np.ndarray:
    """Squared norms of standard Gaussian L-vectors: chi-squared(L) draws,
    mean L and standard deviation sqrt(2L)."""
    out = np.empty(n)
    pos = 0
    for rng, m in _chunked_rngs(seed, n):
        V = rng.standard_normal((m, L))
        out[pos : pos + m] = (V * V).sum(axis=1)
        pos += m
    return out
