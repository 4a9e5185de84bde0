"""Exact piecewise-polynomial functions over the rationals.

A function here is a finite list of rational breakpoints x_0 < ... < x_k
together with one polynomial per half-open interval [x_j, x_{j+1}); the
function is 0 outside [x_0, x_k).  Coefficients are `fractions.Fraction`,
so evaluation, pointwise algebra and integration are all exact.  This is
the representation used for Hilbert-Kunz density functions, which are
piecewise polynomial in every case this package can evaluate in closed
form, and piecewise linear for the finite-level interpolants.

Canonical form: adjacent intervals carrying the same polynomial are
merged, zero polynomials are trimmed off both ends, and empty intervals
are dropped.  Two canonical functions are equal (as dataclasses) iff they
are equal pointwise.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not a rational value: {value!r}")


def fraction_to_str(x: Fraction) -> str:
    """'p/q' for non-integers, plain 'n' for integers (str() does both)."""
    return str(x)


def fraction_to_decimal_str(x: Fraction, digits: int = 20) -> str:
    """Decimal rendering with `digits` significant digits, informational only."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return str(d)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial, lowest-degree coefficient first.

    Canonical: no trailing zero coefficients; the zero polynomial is ().
    """

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(values: Iterable[RationalLike]) -> Poly:
        cs = [as_fraction(v) for v in values]
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly.make(out)

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero() or other.is_zero():
            return POLY_ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly.make(out)

    def scale(self, c: RationalLike) -> Poly:
        c = as_fraction(c)
        if c == 0:
            return POLY_ZERO
        return Poly(tuple(c * a for a in self.coeffs))

    def antiderivative(self) -> Poly:
        """The antiderivative with zero constant term."""
        return Poly.make(
            [Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        )


POLY_ZERO = Poly(())


def shifted_power(shift: RationalLike, exponent: int) -> Poly:
    """(x - shift)**exponent expanded exactly via the binomial theorem."""
    s = as_fraction(shift)
    return Poly.make(
        [
            math.comb(exponent, i) * (-s) ** (exponent - i)
            for i in range(exponent + 1)
        ]
    )


def _canonicalize(
    breakpoints: Sequence[Fraction], pieces: Sequence[Poly]
) -> tuple[tuple[Fraction, ...], tuple[Poly, ...]]:
    if len(breakpoints) != len(pieces) + 1 and not (not breakpoints and not pieces):
        raise ValueError("need exactly one more breakpoint than pieces")
    if any(b > c for b, c in zip(breakpoints, breakpoints[1:])):
        raise ValueError("breakpoints must be non-decreasing")
    # Drop empty intervals [b, b), then merge runs of equal polynomials.
    bps: list[Fraction] = []
    ps: list[Poly] = []
    for j, poly in enumerate(pieces):
        if breakpoints[j] == breakpoints[j + 1]:
            continue
        if ps and ps[-1] == poly:
            continue
        bps.append(breakpoints[j])
        ps.append(poly)
    if ps:
        bps.append(breakpoints[-1])
    # Trim zero pieces off both ends (interior zeros stay).
    while ps and ps[0].is_zero():
        ps.pop(0)
        bps.pop(0)
    while ps and ps[-1].is_zero():
        ps.pop()
        bps.pop()
    if not ps:
        return (), ()
    return tuple(bps), tuple(ps)


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial on half-open intervals, zero outside its support."""

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Poly, ...]

    @staticmethod
    def make(
        breakpoints: Iterable[RationalLike], pieces: Iterable[Sequence[RationalLike]]
    ) -> PiecewisePoly:
        """Build and canonicalize from raw breakpoints and coefficient lists."""
        bps = [as_fraction(b) for b in breakpoints]
        ps = [p if isinstance(p, Poly) else Poly.make(p) for p in pieces]
        return PiecewisePoly(*_canonicalize(bps, ps))

    def is_zero(self) -> bool:
        return not self.pieces

    def support(self) -> tuple[Fraction, Fraction] | None:
        """The closed hull [x_0, x_k] of the support, or None for the zero function."""
        if self.is_zero():
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        i = bisect_right(self.breakpoints, x) - 1
        if i < 0 or i >= len(self.pieces):
            return Fraction(0)
        return self.pieces[i](x)

    def piece_at(self, x: Fraction) -> Poly:
        """The polynomial in force at x (zero polynomial outside the support)."""
        i = bisect_right(self.breakpoints, x) - 1
        if i < 0 or i >= len(self.pieces):
            return POLY_ZERO
        return self.pieces[i]

    def _zip_with(self, other: PiecewisePoly, op) -> PiecewisePoly:
        points = sorted(set(self.breakpoints) | set(other.breakpoints))
        if len(points) < 2:
            return PP_ZERO
        pieces = []
        for a, b in zip(points, points[1:]):
            mid = (a + b) / 2
            pieces.append(op(self.piece_at(mid), other.piece_at(mid)))
        return PiecewisePoly(*_canonicalize(points, pieces))

    def __add__(self, other: PiecewisePoly) -> PiecewisePoly:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return self._zip_with(other, lambda p, q: p + q)

    def __sub__(self, other: PiecewisePoly) -> PiecewisePoly:
        return self + other.scale(-1)

    def __mul__(self, other: PiecewisePoly) -> PiecewisePoly:
        if self.is_zero() or other.is_zero():
            return PP_ZERO
        return self._zip_with(other, lambda p, q: p * q)

    def scale(self, c: RationalLike) -> PiecewisePoly:
        c = as_fraction(c)
        if c == 0 or self.is_zero():
            return PP_ZERO
        return PiecewisePoly(self.breakpoints, tuple(p.scale(c) for p in self.pieces))

    def integral(self) -> Fraction:
        """Exact integral over the whole real line (= over the support)."""
        total = Fraction(0)
        for j, poly in enumerate(self.pieces):
            anti = poly.antiderivative()
            total += anti(self.breakpoints[j + 1]) - anti(self.breakpoints[j])
        return total

    def to_json(self) -> dict:
        return {
            "breakpoints": [fraction_to_str(b) for b in self.breakpoints],
            "pieces": [[fraction_to_str(c) for c in p.coeffs] for p in self.pieces],
        }

    @staticmethod
    def from_json(data: dict) -> PiecewisePoly:
        return PiecewisePoly.make(data["breakpoints"], data["pieces"])


PP_ZERO = PiecewisePoly((), ())


def sup_difference_sampled(
    f: PiecewisePoly, g: PiecewisePoly, grid_denominator: int
) -> Fraction:
    """max |f - g| over the grid j/grid_denominator plus all breakpoints.

    Samples cover the hull of the two supports.  This is a certified lower
    bound for the true sup norm of f - g; for the piecewise-linear
    interpolants used in convergence reports the breakpoints include every
    vertex, so the bound is tight there.
    """
    if grid_denominator < 1:
        raise ValueError("grid_denominator must be >= 1")
    sup_f, sup_g = f.support(), g.support()
    if sup_f is None and sup_g is None:
        return Fraction(0)
    los = [s[0] for s in (sup_f, sup_g) if s is not None]
    his = [s[1] for s in (sup_f, sup_g) if s is not None]
    lo, hi = min(los), max(his)
    samples = set(f.breakpoints) | set(g.breakpoints)
    j0 = math.ceil(lo * grid_denominator)
    j1 = math.floor(hi * grid_denominator)
    samples.update(Fraction(j, grid_denominator) for j in range(j0, j1 + 1))
    return max(abs(f(x) - g(x)) for x in samples)
