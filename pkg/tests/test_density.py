"""Frobenius-level density samples, convergence reports, exact dim-1 limits."""

import random
from fractions import Fraction

import pytest

from hkdensity.density import (
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
from hkdensity.piecewise import PiecewisePoly
from hkdensity.rings import (
    MonomialIdeal,
    MonomialQuotientRing,
    PolynomialRing,
    colength_series,
    krull_dimension,
    maximal_ideal,
    total_colength,
)

P3 = PolynomialRing(3)
XYZ_XY = MonomialQuotientRing(3, ((1, 1, 0),))
XY_AXES = MonomialQuotientRing(2, ((1, 1),))


# --- level samples ----------------------------------------------------------------


def test_step_value_projective_plane():
    # degree-12 piece at q = 8, normalized by q^2
    assert step_eval(P3, maximal_ideal(P3), 2, 3, Fraction(3, 2)) == Fraction(23, 32)


def test_interp_value_projective_plane_level_one():
    assert interp_eval(P3, maximal_ideal(P3), 2, 1, Fraction(3, 4)) == Fraction(3, 4)


def test_eval_zero_left_of_origin_and_past_support():
    ideal = maximal_ideal(P3)
    assert step_eval(P3, ideal, 2, 2, -1) == 0
    assert interp_eval(P3, ideal, 2, 2, Fraction(-1, 3)) == 0
    assert step_eval(P3, ideal, 2, 2, 50) == 0


def test_interp_passes_through_nodes():
    ideal = maximal_ideal(XYZ_XY)
    q = 8
    series = colength_series(XYZ_XY, ideal, q)
    for m in range(len(series) + 2):
        node = Fraction(series[m], q) if m < len(series) else Fraction(0)
        assert interp_eval(XYZ_XY, ideal, 2, 3, Fraction(m, q)) == node


def test_piecewise_forms_agree_with_point_evaluators():
    rng = random.Random(5150)
    cases = [
        (P3, maximal_ideal(P3)),
        (XYZ_XY, maximal_ideal(XYZ_XY)),
        (P3, MonomialIdeal(P3, ((2, 0, 0), (0, 1, 0), (0, 0, 3)))),
    ]
    for ring, ideal in cases:
        step = step_piecewise(ring, ideal, 2, 2)
        interp = interp_piecewise(ring, ideal, 2, 2)
        for _ in range(25):
            x = Fraction(rng.randint(-8, 40), rng.randint(1, 16))
            assert step(x) == step_eval(ring, ideal, 2, 2, x)
            assert interp(x) == interp_eval(ring, ideal, 2, 2, x)


def test_step_function_breakpoints_sit_on_the_q_grid():
    step = step_piecewise(P3, maximal_ideal(P3), 2, 2)
    assert all(b.denominator in (1, 2, 4) for b in step.breakpoints)
    # the trapezoid rule only trims the half-cell at the origin (the right
    # end of the support contributes zero), an exact and useful relation
    interp = interp_piecewise(P3, maximal_ideal(P3), 2, 2)
    series = colength_series(P3, maximal_ideal(P3), 4)
    assert interp.integral() == step.integral() - Fraction(series[0], 2 * 4**3)


def test_frobenius_sample_padded_to_support_bound():
    sample = frobenius_sample(XYZ_XY, maximal_ideal(XYZ_XY), 2, 2)
    assert sample.q == 4
    assert sample.dim == 2
    assert len(sample.values) == sample.max_degree + 1
    assert sample.values[-1] == 0
    series = colength_series(XYZ_XY, maximal_ideal(XYZ_XY), 4)
    for m, piece in enumerate(series):
        assert sample.values[m] == Fraction(piece, 4)
    assert all(v == 0 for v in sample.values[len(series):])


def test_sample_csv_layout():
    sample = frobenius_sample(PolynomialRing(2), maximal_ideal(PolynomialRing(2)), 2, 1)
    lines = sample_to_csv_text(sample).splitlines()
    assert lines[0] == "m,x,value,value_decimal"
    assert lines[1] == "0,0,1/2,0.5"
    assert lines[2] == "1,1/2,1,1"
    assert len(lines) == sample.max_degree + 2


def test_level_argument_validation():
    ideal = maximal_ideal(P3)
    with pytest.raises(ValueError, match="prime"):
        step_eval(P3, ideal, 4, 1, 0)
    with pytest.raises(ValueError, match="prime"):
        frobenius_sample(P3, ideal, 1, 1)
    with pytest.raises(ValueError):
        interp_eval(P3, ideal, 2, -1, 0)
    artinian = MonomialQuotientRing(1, ((2,),))
    with pytest.raises(ValueError, match="dimension"):
        step_eval(artinian, maximal_ideal(artinian), 2, 1, 0)


# --- Riemann identity ----------------------------------------------------------------


def test_riemann_polynomial_ring_is_exactly_one():
    ideal = maximal_ideal(P3)
    for n in range(0, 5):
        assert riemann_multiplicity(P3, ideal, 2, n) == 1
    assert riemann_multiplicity(P3, ideal, 3, 2) == 1


def test_riemann_two_planes_closed_form():
    ideal = maximal_ideal(XYZ_XY)
    for n in range(0, 5):
        q = 2**n
        assert riemann_multiplicity(XYZ_XY, ideal, 2, n) == 2 - Fraction(1, q)
    assert riemann_multiplicity(XYZ_XY, ideal, 2, 3) == Fraction(15, 8)


def test_riemann_equals_step_integral_and_total():
    cases = [
        (P3, MonomialIdeal(P3, ((2, 0, 0), (0, 1, 0), (0, 0, 3)))),
        (XYZ_XY, maximal_ideal(XYZ_XY)),
    ]
    for ring, ideal in cases:
        dim = krull_dimension(ring)
        for n in (1, 2, 3):
            value = riemann_multiplicity(ring, ideal, 2, n)
            q = 2**n
            assert value == Fraction(total_colength(ring, ideal, q), q**dim)
            assert value == step_piecewise(ring, ideal, 2, n).integral()


# --- convergence reports ----------------------------------------------------------------


def test_estimate_runs_all_levels_at_zero_tol():
    report = estimate_density(P3, maximal_ideal(P3), 2, 3)
    assert report.final_n == 3
    assert [n for n, _ in report.sup_diffs] == [1, 2, 3]
    assert len(report.riemann_values) == 3
    assert report.density == interp_piecewise(P3, maximal_ideal(P3), 2, 3)


def test_estimate_stops_early_on_loose_tol():
    report = estimate_density(P3, maximal_ideal(P3), 2, 6, tol=2)
    assert report.final_n == 1
    assert len(report.sup_diffs) == 1


def test_estimate_sup_steps_shrink():
    report = estimate_density(P3, maximal_ideal(P3), 2, 5)
    diffs = [d for _, d in report.sup_diffs]
    assert all(a > b for a, b in zip(diffs, diffs[1:]))
    # successive interpolants are Cauchy: late steps are below early steps
    assert diffs[-1] <= diffs[0] / 4


def test_estimate_riemann_values_approach_two_planes_limit():
    report = estimate_density(XYZ_XY, maximal_ideal(XYZ_XY), 2, 5)
    errors = [abs(v - 2) for v in report.riemann_values]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    assert errors[-1] == Fraction(1, 32)


def test_estimate_argument_validation():
    ideal = maximal_ideal(P3)
    with pytest.raises(ValueError):
        estimate_density(P3, ideal, 2, 0)
    with pytest.raises(ValueError):
        estimate_density(P3, ideal, 2, 2, tol=-1)
    with pytest.raises(ValueError):
        estimate_density(P3, ideal, 2, 2, grid=0)


def test_report_json_shape():
    report = estimate_density(XYZ_XY, maximal_ideal(XYZ_XY), 2, 2, grid=16)
    data = report_to_json(report)
    assert set(data) == {"p", "grid", "final_n", "sup_diffs", "ehk_riemann", "density"}
    assert data["p"] == 2
    assert data["grid"] == 16
    assert data["final_n"] == 2
    assert data["sup_diffs"][0][0] == "1"
    assert data["ehk_riemann"] == ["3/2", "7/4"]
    assert PiecewisePoly.from_json(data["density"]) == report.density


# --- exact dimension-one limits --------------------------------------------------------


def test_dim1_fat_point_on_a_line():
    ring = PolynomialRing(1)
    ideal = MonomialIdeal(ring, ((2,),))
    result = dim1_density(ring, ideal, 2)
    assert result.density == PiecewisePoly.make([0, 2], [[1]])
    assert result.multiplicity == 2
    assert result.level == 0


def test_dim1_two_lines_maximal_ideal():
    result = dim1_density(XY_AXES, maximal_ideal(XY_AXES), 2)
    assert result.density == PiecewisePoly.make([0, 1], [[2]])
    assert result.multiplicity == 2
    assert result.level == 2


def test_dim1_two_lines_mixed_degrees():
    ideal = MonomialIdeal(XY_AXES, ((1, 0), (0, 3)))
    result = dim1_density(XY_AXES, ideal, 2)
    assert result.density == PiecewisePoly.make([0, 1, 3], [[2], [1]])
    assert result.multiplicity == 4


def test_dim1_stable_under_level_increase():
    cases = [
        (XY_AXES, maximal_ideal(XY_AXES)),
        (XY_AXES, MonomialIdeal(XY_AXES, ((1, 0), (0, 3)))),
        (PolynomialRing(1), MonomialIdeal(PolynomialRing(1), ((5,),))),
    ]
    for ring, ideal in cases:
        base = dim1_density(ring, ideal, 2)
        audit = dim1_density(ring, ideal, 2, level=base.level + 2)
        assert audit.density == base.density
        assert audit.multiplicity == base.multiplicity
        assert audit.level == base.level + 2


def test_dim1_rejects_wrong_dimension_and_nonreduced():
    with pytest.raises(ValueError, match="dimension 1"):
        dim1_density(P3, maximal_ideal(P3), 2)
    thick_line = MonomialQuotientRing(2, ((2, 0),))
    with pytest.raises(ValueError, match="reduced"):
        dim1_density(thick_line, maximal_ideal(thick_line), 2)
