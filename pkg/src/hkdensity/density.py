"""Frobenius-level density samples and their convergence data.

For a graded ring R of Krull dimension d with an m-primary monomial ideal
I and q = p^n, the level-n density sample is the step function

    x  |->  len((R / I^[q])_{floor(x q)}) / q^(d-1)      (0 for x < 0),

and the level-n interpolant is the piecewise-linear function through the
node values at x = m/q.  For d >= 2 the interpolants converge uniformly
to the Hilbert-Kunz density function; the normalized total colength
total / q^d is exactly the integral of the step function (checked on
every call), and converges to the Hilbert-Kunz multiplicity.

Dimension one is different in kind: no q-normalization happens, the limit
is a step function, and outside small unstable windows past each
generator degree the level-n values are already exact.  `dim1_density`
picks a level provably past those windows, samples interval midpoints,
and returns the exact limit.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .piecewise import (
    PiecewisePoly,
    Poly,
    RationalLike,
    as_fraction,
    fraction_to_decimal_str,
    fraction_to_str,
    sup_difference_sampled,
)
from .rings import (
    IdealSpec,
    MonomialQuotientRing,
    PolynomialRing,
    RingSpec,
    _support_bound,
    colength_series,
    generator_count,
    hilbert_len,
    krull_dimension,
    nilpotency_index,
)


def _require_prime(p: int) -> None:
    if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise ValueError(f"p must be prime, got {p}")


def _require_level(n: int) -> None:
    if n < 0:
        raise ValueError("Frobenius level n must be >= 0")


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _dim_for_density(ring: RingSpec) -> int:
    dim = krull_dimension(ring)
    if dim < 1:
        raise ValueError("density samples need Krull dimension >= 1")
    return dim


@dataclass(frozen=True)
class FrobeniusSample:
    """All normalized graded colength values at one Frobenius level.

    values[m] = len((R/I^[q])_m) / q^(dim-1) for m = 0..max_degree, where
    max_degree is the support bound n0 * mu * q + stabilization margin;
    values at and near the bound are zero by the support lemma.
    """

    p: int
    n: int
    q: int
    dim: int
    values: tuple[Fraction, ...]
    max_degree: int


def frobenius_sample(ring: RingSpec, ideal: IdealSpec, p: int, n: int) -> FrobeniusSample:
    _require_prime(p)
    _require_level(n)
    q = p**n
    dim = _dim_for_density(ring)
    series = colength_series(ring, ideal, q)
    bound = _support_bound(ring, ideal, q)
    scale = Fraction(1, q ** (dim - 1))
    values = tuple(
        series[m] * scale if m < len(series) else Fraction(0) for m in range(bound + 1)
    )
    return FrobeniusSample(p, n, q, dim, values, bound)


def _node(series: tuple[int, ...], q: int, dim: int, m: int) -> Fraction:
    if m < 0 or m >= len(series):
        return Fraction(0)
    return Fraction(series[m], q ** (dim - 1))


def step_eval(ring: RingSpec, ideal: IdealSpec, p: int, n: int, x: RationalLike) -> Fraction:
    """The level-n step density at x: colength piece floor(x q), normalized."""
    _require_prime(p)
    _require_level(n)
    x = as_fraction(x)
    if x < 0:
        return Fraction(0)
    q = p**n
    dim = _dim_for_density(ring)
    series = colength_series(ring, ideal, q)
    return _node(series, q, dim, _floor(x * q))


def interp_eval(ring: RingSpec, ideal: IdealSpec, p: int, n: int, x: RationalLike) -> Fraction:
    """The level-n piecewise-linear interpolant through the nodes (m/q, values[m])."""
    _require_prime(p)
    _require_level(n)
    x = as_fraction(x)
    if x < 0:
        return Fraction(0)
    q = p**n
    dim = _dim_for_density(ring)
    series = colength_series(ring, ideal, q)
    m = _floor(x * q)
    t = x * q - m
    return (1 - t) * _node(series, q, dim, m) + t * _node(series, q, dim, m + 1)


def step_piecewise(ring: RingSpec, ideal: IdealSpec, p: int, n: int) -> PiecewisePoly:
    """The level-n step density as an exact piecewise-polynomial function."""
    _require_prime(p)
    _require_level(n)
    q = p**n
    dim = _dim_for_density(ring)
    series = colength_series(ring, ideal, q)
    breakpoints = [Fraction(m, q) for m in range(len(series) + 1)]
    pieces = [[_node(series, q, dim, m)] for m in range(len(series))]
    return PiecewisePoly.make(breakpoints, pieces)


def interp_piecewise(ring: RingSpec, ideal: IdealSpec, p: int, n: int) -> PiecewisePoly:
    """The level-n interpolant as an exact piecewise-linear function."""
    _require_prime(p)
    _require_level(n)
    q = p**n
    dim = _dim_for_density(ring)
    series = colength_series(ring, ideal, q)
    breakpoints = [Fraction(m, q) for m in range(len(series) + 1)]
    pieces = []
    for m in range(len(series)):
        v0 = _node(series, q, dim, m)
        v1 = _node(series, q, dim, m + 1)
        slope = (v1 - v0) * q
        pieces.append(Poly.make([v0 - slope * Fraction(m, q), slope]))
    return PiecewisePoly.make(breakpoints, pieces)


def riemann_multiplicity(ring: RingSpec, ideal: IdealSpec, p: int, n: int) -> Fraction:
    """total_colength / q^dim, cross-checked against the step-density integral.

    The two are equal as exact rationals by construction (each degree
    contributes piece/q^(d-1) over an interval of width 1/q); computing
    both and comparing guards the whole normalization pipeline.
    """
    _require_prime(p)
    _require_level(n)
    q = p**n
    dim = _dim_for_density(ring)
    series = colength_series(ring, ideal, q)
    value = Fraction(sum(series), q**dim)
    integral = step_piecewise(ring, ideal, p, n).integral()
    if integral != value:
        raise RuntimeError(
            f"Riemann identity violated: step integral {integral} != {value}"
        )
    return value


@dataclass(frozen=True)
class ConvergenceReport:
    """Successive-level sup differences and normalized colengths.

    sup_diffs[i] = (n, sampled sup |g_n - g_{n-1}|) for the levels actually
    computed; riemann_values aligns with the same levels; density is the
    interpolant at final_n.  The sampled sup is evaluated on the grid
    j/grid plus all interpolant breakpoints, which makes it exact for
    piecewise-linear functions.
    """

    p: int
    grid: int
    sup_diffs: tuple[tuple[int, Fraction], ...]
    riemann_values: tuple[Fraction, ...]
    final_n: int
    density: PiecewisePoly


def estimate_density(
    ring: RingSpec,
    ideal: IdealSpec,
    p: int,
    n_max: int,
    tol: RationalLike = 0,
    grid: int = 64,
) -> ConvergenceReport:
    """Interpolants at increasing levels until the sup step falls to tol.

    Levels run n = 1..n_max, each compared against the previous level
    (level 0 = q = 1 seeds the ladder); stops early when the sampled sup
    difference is <= tol.
    """
    _require_prime(p)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if grid < 1:
        raise ValueError("grid must be >= 1")
    tol = as_fraction(tol)
    if tol < 0:
        raise ValueError("tol must be >= 0")
    g_prev = interp_piecewise(ring, ideal, p, 0)
    sup_diffs: list[tuple[int, Fraction]] = []
    riemann_values: list[Fraction] = []
    density = g_prev
    final_n = 0
    for n in range(1, n_max + 1):
        density = interp_piecewise(ring, ideal, p, n)
        sup_diffs.append((n, sup_difference_sampled(density, g_prev, grid)))
        riemann_values.append(riemann_multiplicity(ring, ideal, p, n))
        final_n = n
        if sup_diffs[-1][1] <= tol:
            break
        g_prev = density
    return ConvergenceReport(
        p, grid, tuple(sup_diffs), tuple(riemann_values), final_n, density
    )


def report_to_json(report: ConvergenceReport) -> dict:
    return {
        "p": report.p,
        "grid": report.grid,
        "final_n": report.final_n,
        "sup_diffs": [[str(n), fraction_to_str(d)] for n, d in report.sup_diffs],
        "ehk_riemann": [fraction_to_str(v) for v in report.riemann_values],
        "density": report.density.to_json(),
    }


def sample_to_csv_text(sample: FrobeniusSample) -> str:
    """CSV of one Frobenius sample: m, x = m/q, exact value, 20-digit decimal."""
    out = io.StringIO()
    out.write("m,x,value,value_decimal\n")
    for m, v in enumerate(sample.values):
        x = Fraction(m, sample.q)
        out.write(
            f"{m},{fraction_to_str(x)},{fraction_to_str(v)},{fraction_to_decimal_str(v)}\n"
        )
    return out.getvalue()


# --- exact limits in dimension one -------------------------------------------


@dataclass(frozen=True)
class Dim1Density:
    """Exact limit density of a one-dimensional ring, and the level that produced it."""

    density: PiecewisePoly
    multiplicity: Fraction
    level: int


def _hilbert_constant_from(ring: RingSpec) -> int:
    """Least m0 with len(R_m) constant for all m >= m0 (dimension-one rings)."""
    from .rings import _hilbert_window

    window = _hilbert_window(ring) + ring.num_vars + 2
    vals = [hilbert_len(ring, m) for m in range(window)]
    m0 = window - 1
    while m0 > 0 and vals[m0 - 1] == vals[-1]:
        m0 -= 1
    return m0


def dim1_density(
    ring: RingSpec, ideal: IdealSpec, p: int, level: int | None = None
) -> Dim1Density:
    """The exact limit density for a reduced ring of Krull dimension one.

    The level-n values stabilize outside windows of width m0/q past 0 and
    past each generator degree, where m0 is where the Hilbert function
    turns constant.  The level is chosen so m0/q is smaller than half the
    least gap between candidate breakpoints, which puts every interval
    midpoint in the stable region; midpoint samples are then exact limit
    values.  Pass `level` to recompute at a higher level (the result must
    not change -- that is a test invariant, and a cheap way to audit a run).
    """
    _require_prime(p)
    if krull_dimension(ring) != 1:
        raise ValueError("dim1_density needs a ring of Krull dimension 1")
    reduced = isinstance(ring, PolynomialRing) or (
        isinstance(ring, MonomialQuotientRing)
        and all(e <= 1 for rel in ring.relations for e in rel)
    )
    if not reduced:
        raise ValueError("dim1_density needs a reduced monomial ring")
    n0 = nilpotency_index(ring, ideal)
    mu = generator_count(ideal)
    degrees = sorted({sum(g) for g in ideal.generators})
    points = sorted({0, n0 * mu, *degrees})
    min_gap = min(b - a for a, b in zip(points, points[1:]))
    m0 = _hilbert_constant_from(ring)
    if level is None:
        level = 0
        while Fraction(m0, p**level) >= Fraction(min_gap, 2):
            level += 1
    q = p**level
    series = colength_series(ring, ideal, q)
    pieces = []
    for a, b in zip(points, points[1:]):
        mid = Fraction(a + b, 2)
        m = _floor(mid * q)
        pieces.append([Fraction(series[m]) if m < len(series) else Fraction(0)])
    density = PiecewisePoly.make([Fraction(pt) for pt in points], pieces)
    return Dim1Density(density, density.integral(), level)
