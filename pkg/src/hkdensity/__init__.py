"""Exact Hilbert-Kunz density functions and multiplicities.

The package computes, in exact rational arithmetic, the graded colengths
of Frobenius powers of monomial ideals in desk-scale standard graded
rings, the finite-level density functions they define, closed-form limit
densities where these are known (projective spaces, strata-data curves,
Segre products, squarefree component sums, dimension one), and the
convergence diagnostics tying the two together.
"""

from .piecewise import (
    PP_ZERO,
    PiecewisePoly,
    Poly,
    as_fraction,
    fraction_to_decimal_str,
    fraction_to_str,
    sup_difference_sampled,
)
from .rings import (
    BinomialRewriteRing,
    MonomialIdeal,
    MonomialQuotientRing,
    NotMPrimaryError,
    PolynomialRing,
    SegreIdeal,
    SegreProductRing,
    colength_series,
    frobenius_power,
    graded_colength_piece,
    hilbert_len,
    ideal_from_json,
    ideal_to_json,
    krull_dimension,
    maximal_ideal,
    minimal_primes,
    nilpotency_index,
    ring_from_json,
    ring_to_json,
    total_colength,
)
from .density import (
    ConvergenceReport,
    Dim1Density,
    FrobeniusSample,
    dim1_density,
    estimate_density,
    frobenius_sample,
    interp_eval,
    interp_piecewise,
    report_to_json,
    riemann_multiplicity,
    sample_to_csv_text,
    step_eval,
    step_piecewise,
)
from .closedform import (
    CurveHN,
    HKDensity,
    curve_density,
    curve_hn,
    curve_multiplicity,
    density_from_components,
    hilbert_samuel_density,
    multiplicative_identity_holds,
    projective_space_density,
    segre_combine,
)

__version__ = "0.1.0"

__all__ = [
    "PP_ZERO",
    "PiecewisePoly",
    "Poly",
    "as_fraction",
    "fraction_to_decimal_str",
    "fraction_to_str",
    "sup_difference_sampled",
    "BinomialRewriteRing",
    "MonomialIdeal",
    "MonomialQuotientRing",
    "NotMPrimaryError",
    "PolynomialRing",
    "SegreIdeal",
    "SegreProductRing",
    "colength_series",
    "frobenius_power",
    "graded_colength_piece",
    "hilbert_len",
    "ideal_from_json",
    "ideal_to_json",
    "krull_dimension",
    "maximal_ideal",
    "minimal_primes",
    "nilpotency_index",
    "ring_from_json",
    "ring_to_json",
    "total_colength",
    "ConvergenceReport",
    "Dim1Density",
    "FrobeniusSample",
    "dim1_density",
    "estimate_density",
    "frobenius_sample",
    "interp_eval",
    "interp_piecewise",
    "report_to_json",
    "riemann_multiplicity",
    "sample_to_csv_text",
    "step_eval",
    "step_piecewise",
    "CurveHN",
    "HKDensity",
    "curve_density",
    "curve_hn",
    "curve_multiplicity",
    "density_from_components",
    "hilbert_samuel_density",
    "multiplicative_identity_holds",
    "projective_space_density",
    "segre_combine",
]
