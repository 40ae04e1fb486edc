"""Critical local spectra of multiqubit entanglement polytopes.

Subpackages by capability:

* :mod:`entpoly.hypercube` -- exact sign-vector combinatorics: Gram
  determinants, simplex heights, exhaustive/symmetry-reduced enumeration
  and reproducible subset sampling.
* :mod:`entpoly.spectra` -- the two-step acceptance algorithm for
  critical local spectra, exact min-norm points over vertex hulls, and
  distance sample generation.
* :mod:`entpoly.marginals` -- pure-state ground truth: one-qubit reduced
  density matrices, local spectra, mean linear entropy, polytope
  membership.
* :mod:`entpoly.ensembles` -- Gaussian Gram ratios, Wishart/Bartlett
  construction, the lower-triangular transform, gamma sampling.
* :mod:`entpoly.stats` -- gamma CDF, Kolmogorov-Smirnov distances,
  histograms with log transforms, moment reports, CSV emission.
* :mod:`entpoly.purity` -- precision bounds for entanglement witnessing
  as a function of state purity.
* :mod:`entpoly.cli` -- the `entpoly` command-line front end.
"""

from entpoly.hypercube import (
    DependentSubsetError,
    GramMatrixInt,
    SignVector,
    VertexSubset,
    det_exact,
    dot,
    enumerate_subsets,
    gram,
    is_independent,
    sample_subsets,
    squared_distance,
)
from entpoly.spectra import (
    CriticalSpectrum,
    MinNormResult,
    accept,
    affine_foot,
    critical_spectra_enumerate,
    distance_histogram,
    is_on_edge_of_cube,
    min_norm_point,
)
from entpoly.stats import DistanceSampleSet, GammaLaw, gamma_cdf, ks_distance

__version__ = "0.1.0"

__all__ = [
    "DependentSubsetError",
    "GramMatrixInt",
    "SignVector",
    "VertexSubset",
    "det_exact",
    "dot",
    "enumerate_subsets",
    "gram",
    "is_independent",
    "sample_subsets",
    "squared_distance",
    "CriticalSpectrum",
    "MinNormResult",
    "accept",
    "affine_foot",
    "critical_spectra_enumerate",
    "distance_histogram",
    "is_on_edge_of_cube",
    "min_norm_point",
    "DistanceSampleSet",
    "GammaLaw",
    "gamma_cdf",
    "ks_distance",
    "__version__",
]
