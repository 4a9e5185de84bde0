"""Closed-form Hilbert-Kunz densities: projective spaces, plane-like curves
under their strata data, Segre products, and component-sum additivity.

Every function here returns exact rationals.  The three sources are:

* projective space P^d (the polynomial ring in d+1 variables at its
  maximal ideal): the density on [i, i+1) is the truncated alternating sum
  (1/d!) * sum_{j<=i} (-1)^j C(d+1, j) (x-j)^d -- the volume slice of the
  unit cube, supported on [0, d+1) and integrating to 1.

* curves: a projective curve of degree d whose syzygy-bundle strata have
  ranks r_i and strictly decreasing non-positive slopes a_i has density
  d*x on [0, 1) and, between the slope-derived breakpoints 1 - a_i/d,
  minus the tail sums  sum_{j>i} r_j (a_j + d (x-1)); the multiplicity is
  d/2 + sum_i r_i a_i^2 / (2d).

* Segre products: with per-factor Hilbert-Samuel parts F_i and densities
  f_i, the product density is  prod F_i - prod (F_i - f_i), supported on
  the longest factor support; the two-factor deficit identity
  (F - f)(G - g) = F G - combined is exposed as a checkable predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .piecewise import (
    PiecewisePoly,
    Poly,
    RationalLike,
    as_fraction,
    fraction_to_str,
    shifted_power,
)
from .rings import MonomialQuotientRing, krull_dimension, minimal_primes

PROVENANCES = ("closed_form", "segre_combined", "estimated")


@dataclass(frozen=True)
class HKDensity:
    """A density function with its multiplicity and how it was obtained.

    For exact provenances the multiplicity must equal the integral of the
    density; estimates may carry a Riemann value that differs from the
    integral of the finite-level interpolant.
    """

    density: PiecewisePoly
    multiplicity: Fraction
    provenance: str

    def __post_init__(self):
        object.__setattr__(self, "multiplicity", as_fraction(self.multiplicity))
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance: {self.provenance!r}")
        if self.provenance != "estimated" and self.density.integral() != self.multiplicity:
            raise ValueError("multiplicity must equal the density integral")

    def to_json(self) -> dict:
        return {
            "density": self.density.to_json(),
            "ehk": fraction_to_str(self.multiplicity),
            "provenance": self.provenance,
        }

    @staticmethod
    def from_json(data: dict) -> HKDensity:
        return HKDensity(
            PiecewisePoly.from_json(data["density"]),
            as_fraction(data["ehk"]),
            data["provenance"],
        )


def projective_space_density(d: int) -> HKDensity:
    """The density of P^d: supported on [0, d+1), symmetric, integral 1."""
    if d < 1:
        raise ValueError("projective space density needs d >= 1")
    inv_fact = Fraction(1, math.factorial(d))
    breakpoints = [Fraction(i) for i in range(d + 2)]
    pieces: list[Poly] = []
    current = Poly(())
    for i in range(d + 1):
        current = current + shifted_power(i, d).scale(
            inv_fact * (-1) ** i * math.comb(d + 1, i)
        )
        pieces.append(current)
    density = PiecewisePoly.make(breakpoints, pieces)
    return HKDensity(density, density.integral(), "closed_form")


def hilbert_samuel_density(
    e0: RationalLike, dim: int, cutoff: RationalLike
) -> PiecewisePoly:
    """The Hilbert-Samuel limit density e0 * x^(dim-1)/(dim-1)! on [0, cutoff)."""
    e0 = as_fraction(e0)
    cutoff = as_fraction(cutoff)
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if e0 <= 0:
        raise ValueError("multiplicity e0 must be positive")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    coeffs = [Fraction(0)] * (dim - 1) + [e0 / math.factorial(dim - 1)]
    return PiecewisePoly.make([Fraction(0), cutoff], [coeffs])


@dataclass(frozen=True)
class CurveHN:
    """Strata data of a degree-d curve: ranks with strictly decreasing slopes <= 0."""

    degree: int
    strata: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "strata",
            tuple((int(r), as_fraction(a)) for r, a in self.strata),
        )
        if self.degree < 1:
            raise ValueError("curve degree must be >= 1")
        if not self.strata:
            raise ValueError("need at least one stratum")
        if any(r < 1 for r, _ in self.strata):
            raise ValueError("stratum ranks must be positive integers")
        slopes = [a for _, a in self.strata]
        if any(a > 0 for a in slopes):
            raise ValueError("stratum slopes must be <= 0")
        if any(b >= a for a, b in zip(slopes, slopes[1:])):
            raise ValueError("stratum slopes must be strictly decreasing")


def curve_hn(
    degree: int,
    strata: Iterable[Sequence[RationalLike]],
    *,
    check_degree_sum: bool = False,
) -> CurveHN:
    """Validated strata data; optionally require sum_i r_i a_i = -degree.

    That normalization holds when the strata come from the syzygy bundle of
    degree-one generators; the density formula below does not need it, but
    continuity of the density at x = 1 is equivalent to it.
    """
    hn = CurveHN(
        int(degree), tuple((int(r), as_fraction(a)) for r, a in strata)
    )
    if check_degree_sum:
        total = sum(r * a for r, a in hn.strata)
        if total != -hn.degree:
            raise ValueError(
                f"strata sum {total} != -degree; expected {-hn.degree}"
            )
    return hn


def curve_multiplicity(hn: CurveHN) -> Fraction:
    """d/2 + sum_i r_i a_i^2 / (2d), the integral of the curve density."""
    d = hn.degree
    return Fraction(d, 2) + sum(r * a * a for r, a in hn.strata) / (2 * d)


def curve_density(hn: CurveHN) -> HKDensity:
    """The curve density: d*x on [0,1), then tail-sum linear pieces.

    On [1 - a_i/d, 1 - a_{i+1}/d) (slopes taken in decreasing order, with
    a_0 = 0 and the last right endpoint closing the support) the value is
    -sum_{j > i} r_j (a_j + d(x-1)); each stratum drops out of the sum as
    x passes its breakpoint, so the support ends at 1 - a_last/d.
    """
    d = hn.degree
    slopes = [Fraction(0)] + [a for _, a in hn.strata]
    ranks = [0] + [r for r, _ in hn.strata]
    breakpoints = [Fraction(0), Fraction(1)] + [1 - a / d for a in slopes[1:]]
    pieces: list[Poly] = [Poly.make([0, d])]
    for i in range(len(slopes) - 1):
        const = -sum(ranks[j] * slopes[j] for j in range(i + 1, len(slopes)))
        slope = -sum(ranks[j] * d for j in range(i + 1, len(slopes)))
        # -sum_j r_j (a_j + d(x-1)) = (const + |slope|) + slope * x
        pieces.append(Poly.make([const - slope, slope]))
    density = PiecewisePoly.make(breakpoints, pieces)
    multiplicity = density.integral()
    expected = curve_multiplicity(hn)
    if multiplicity != expected:
        raise RuntimeError(
            f"curve density integral {multiplicity} != closed form {expected}"
        )
    return HKDensity(density, multiplicity, "closed_form")


def segre_combine(
    factors: Sequence[tuple[PiecewisePoly, PiecewisePoly]]
) -> HKDensity:
    """Combine per-factor (Hilbert-Samuel part, density) pairs into the product density.

    The product density is prod F_i - prod (F_i - f_i).  Each F_i must be
    supported at least as far as the longest density support: past its own
    support a factor would contribute F_i - f_i = 0 instead of the correct
    positive Hilbert-Samuel mass, silently zeroing the product.
    """
    if not factors:
        raise ValueError("need at least one factor")
    needed = Fraction(0)
    for _, f in factors:
        sup = f.support()
        if sup is not None:
            needed = max(needed, sup[1])
    for F, _ in factors:
        sup = F.support()
        if sup is None or sup[1] < needed:
            raise ValueError(
                "factor cutoff too small: every Hilbert-Samuel part must cover "
                f"[0, {needed}]"
            )
    prod_full = None
    prod_deficit = None
    for F, f in factors:
        prod_full = F if prod_full is None else prod_full * F
        deficit = F - f
        prod_deficit = deficit if prod_deficit is None else prod_deficit * deficit
    density = prod_full - prod_deficit
    return HKDensity(density, density.integral(), "segre_combined")


def multiplicative_identity_holds(
    hs_left: PiecewisePoly,
    density_left: PiecewisePoly,
    hs_right: PiecewisePoly,
    density_right: PiecewisePoly,
    combined: PiecewisePoly,
) -> bool:
    """Whether (F - f)(G - g) == F*G - combined, exactly, as canonical functions."""
    lhs = (hs_left - density_left) * (hs_right - density_right)
    rhs = hs_left * hs_right - combined
    return lhs == rhs


def density_from_components(ring: MonomialQuotientRing) -> HKDensity:
    """Additivity over top-dimensional components of a squarefree monomial quotient.

    Each minimal prime of full dimension D contributes the density of a
    polynomial ring in D variables (its coordinate subring) with
    multiplicity one, so the density is (number of components) times the
    P^(D-1) density.
    """
    primes = minimal_primes(ring)
    dim = krull_dimension(ring)
    if dim < 2:
        raise ValueError("component additivity needs Krull dimension >= 2")
    base = projective_space_density(dim - 1)
    count = len(primes)
    return HKDensity(
        base.density.scale(count), base.multiplicity * count, "closed_form"
    )
