"""Tests for the isospectral Lax-flow module: the factorized solution, the
RK4 reference integrator, conservation diagnostics, the Toda-type builtin,
and CSV output."""

import math
import warnings

import numpy as np
import pytest

from conftest import seeded

from postlie import scalars
from postlie.errors import (
    BadDimensions,
    DimensionMismatch,
    InvalidInput,
    ModeMismatch,
    NonConvergentSeries,
    RealizationRequired,
    StepTooLarge,
)
from postlie.flows import (
    FlowProblem,
    conservation_report,
    factorized_solution,
    flow_csv,
    lax_vector_field,
    rk4_reference,
    toda_problem,
    write_flow_csv,
)
from postlie.liealg import new_lie_algebra
from postlie.rmatrix import builtin_rmatrix, rmatrix_context


def _quiet(fn, *args, **kwargs):
    """Run a flow evaluation with truncation-tail warnings silenced (the
    tests that care about the warning assert it explicitly)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonConvergentSeries)
        return fn(*args, **kwargs)


def _unit_toda2_closed_form(t):
    """Closed-form solution of the Lax field on the unit Toda 2x2 problem.

    oracle: with x = a(E11-E22) + u*E12 + l*E21 the field [x, -l*E21] gives
    u' = 0, a' = -u*l, l' = 2*a*l, and a^2 + u*l is a first integral; for
    a0 = 0, u0 = l0 = 1 this integrates by hand to a = -tanh(t), u = 1,
    l = sech(t)^2.  Cross-checked against RK4 at step 1e-3 (gap 1.4e-14).
    """
    a = -math.tanh(t)
    return np.array([a, 1.0, -a, 1.0 / math.cosh(t) ** 2])


def _coord_gap(states_a, states_b):
    return max(
        max(abs(p - q) for p, q in zip(sa.x, sb.x))
        for sa, sb in zip(states_a, states_b)
    )


# ---------------------------------------------------------------------------
# problem construction


def test_toda_problem_places_tridiagonal_entries():
    p = toda_problem(3, (0.5, -0.25, 0.75), (0.1, 0.2), (0.5,), 4)
    L = p.algebra
    coords = dict(zip(L.labels, p.x0))
    assert coords["E11"] == 0.5 and coords["E22"] == -0.25 and coords["E33"] == 0.75
    assert coords["E12"] == coords["E21"] == 0.1
    assert coords["E23"] == coords["E32"] == 0.2
    assert coords["E13"] == coords["E31"] == 0.0
    assert p.t_grid == (0.5,) and p.order == 4


def test_toda_problem_dimension_checks():
    with pytest.raises(BadDimensions):
        toda_problem(3, (1.0, 2.0), (0.1, 0.2), (0.5,), 4)
    with pytest.raises(BadDimensions):
        toda_problem(2, (1.0, 2.0), (0.1, 0.2), (0.5,), 4)


def test_flow_problem_requires_float_mode():
    with pytest.raises(ModeMismatch):
        FlowProblem(builtin_rmatrix("split2"), [0, 1, 0, 1], (0.5,), 4)


def test_flow_problem_requires_realization():
    ab = new_lie_algebra(2, ("p", "q"), [], mode=scalars.FLOAT)
    ctx = rmatrix_context(ab, [[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(RealizationRequired):
        FlowProblem(ctx, [1.0, 2.0], (0.5,), 4)


def test_flow_problem_rejects_bad_grid_and_order():
    ctx = builtin_rmatrix("split2", mode=scalars.FLOAT)
    with pytest.raises(InvalidInput):
        FlowProblem(ctx, [0, 1, 0, 1], (), 4)
    with pytest.raises(InvalidInput):
        FlowProblem(ctx, [0, 1, 0, 1], (0.5,), 0)


# ---------------------------------------------------------------------------
# the vector field


def test_lax_field_vanishes_on_diagonal_points():
    # diagonal x: the strictly-lower projection is zero, so the field is zero
    ctx = builtin_rmatrix("split2", mode=scalars.FLOAT)
    field = lax_vector_field(ctx, [0.7, 0.0, -0.2, 0.0])
    assert all(abs(c) < 1e-15 for c in field)


def test_lax_field_vanishes_for_identity_r():
    ctx = builtin_rmatrix("sl2-id", mode=scalars.FLOAT)
    field = lax_vector_field(ctx, [0.4, 0.2, -0.3])
    assert all(abs(c) < 1e-15 for c in field)


def test_lax_field_gl2_oracle():
    # oracle: x = E12 + E21 under the upper/strictly-lower splitting has
    # R_minus(x) = -E21, and [E12 + E21, -E21] = -(E11 - E22) by the
    # elementary-matrix commutators [E12, E21] = E11 - E22, [E21, E21] = 0
    ctx = builtin_rmatrix("split2", mode=scalars.FLOAT)
    field = lax_vector_field(ctx, [0.0, 1.0, 0.0, 1.0])
    assert np.allclose(field, [-1.0, 0.0, 1.0, 0.0], atol=1e-15)


def test_lax_field_dimension_check():
    ctx = builtin_rmatrix("split2", mode=scalars.FLOAT)
    with pytest.raises(DimensionMismatch):
        lax_vector_field(ctx, [1.0, 2.0])


# ---------------------------------------------------------------------------
# factorized solution


def test_time_zero_returns_initial_point():
    p = toda_problem(2, (0.1, -0.1), (0.3,), (0.0, 0.4), 6)
    states = _quiet(factorized_solution, p)
    assert np.allclose(states[0].x, p.x0, atol=1e-14)
    assert states[0].t == 0.0


def test_identity_r_freezes_the_flow():
    ctx = builtin_rmatrix("sl2-id", mode=scalars.FLOAT)
    p = FlowProblem(ctx, [0.4, 0.2, -0.3], (0.3, 0.9), 6)
    for s in factorized_solution(p):
        assert np.allclose(s.x, p.x0, atol=1e-12)


def test_factorized_solution_matches_closed_form():
    p = toda_problem(2, (0.0, 0.0), (1.0,), (0.3,), 12, flow_tolerance=1e-3)
    for path in ("matrix", "adjoint"):
        got = np.array(factorized_solution(p, path=path)[0].x)
        assert np.max(np.abs(got - _unit_toda2_closed_form(0.3))) < 1e-8


def test_matrix_and_adjoint_paths_agree():
    p = toda_problem(2, (0.1, -0.1), (0.3,), tuple(np.linspace(0.1, 1.0, 5)), 10)
    sm = _quiet(factorized_solution, p, path="matrix")
    sa = _quiet(factorized_solution, p, path="adjoint")
    assert _coord_gap(sm, sa) < 1e-12


def test_factorized_agrees_with_rk4_reference():
    p = toda_problem(2, (0.1, -0.1), (0.3,), tuple(np.linspace(0.1, 1.0, 5)), 10)
    fact = _quiet(factorized_solution, p)
    ref = rk4_reference(p, 1e-3)
    assert _coord_gap(fact, ref) < 1e-6


def test_truncation_order_convergence_is_monotone():
    # consecutive-order gaps at t = 0.5 shrink through the window N = 2..10
    # (measured: 2.6e-4 down to 2.6e-11, allowing the parity plateau a
    # factor-of-two slack)
    xs = {}
    for order in range(2, 11):
        p = toda_problem(2, (0.1, -0.1), (0.3,), (0.5,), order)
        xs[order] = np.array(_quiet(factorized_solution, p, path="adjoint")[0].x)
    gaps = [
        float(np.max(np.abs(xs[order + 1] - xs[order]))) for order in range(2, 10)
    ]
    assert gaps[-1] < 1e-9 < 1e-3 < gaps[0] * 10
    for wide, narrow in zip(gaps, gaps[2:]):
        assert narrow < wide


def test_tail_warning_on_aggressive_problem():
    p = toda_problem(2, (0.0, 0.0), (2.0,), (2.0,), 6)
    with pytest.warns(NonConvergentSeries):
        factorized_solution(p)


def test_no_tail_warning_within_tolerance():
    p = toda_problem(2, (0.05, -0.05), (0.1,), (0.2,), 10)
    with warnings.catch_warnings():
        warnings.simplefilter("error", NonConvergentSeries)
        factorized_solution(p)


def test_invalid_path_rejected():
    p = toda_problem(2, (0.1, -0.1), (0.3,), (0.5,), 4)
    with pytest.raises(InvalidInput):
        factorized_solution(p, path="euler")


# ---------------------------------------------------------------------------
# conservation


def test_unit_toda2_eigenvalues_stay_plus_minus_one():
    # oracle: x0 = E12 + E21 has characteristic polynomial z^2 - 1, so the
    # conserved spectrum is {-1, +1}.  The matrix path conjugates by an
    # exact exponential, so the spectrum is conserved to rounding even out
    # at t = 1 where the coordinate expansion still has a visible tail.
    p = toda_problem(2, (0.0, 0.0), (1.0,), tuple(np.linspace(0.0, 1.0, 9)), 8)
    for s in _quiet(factorized_solution, p):
        assert abs(s.eigenvalues[0] + 1.0) < 1e-10
        assert abs(s.eigenvalues[1] - 1.0) < 1e-10


def test_conservation_report_on_toda4():
    rng = seeded(404)
    diag = [rng.uniform(-0.4, 0.4) for _ in range(4)]
    off = [rng.uniform(-0.4, 0.4) for _ in range(3)]
    p = toda_problem(4, diag, off, tuple(np.linspace(0.0, 1.0, 6)), 10)
    rep = conservation_report(_quiet(factorized_solution, p))
    assert set(rep) == {"max_eig_drift", "max_trace_power_drift"}
    assert rep["max_eig_drift"] < 1e-8
    assert rep["max_trace_power_drift"] < 1e-8


def test_fixed_point_flow_has_zero_drift():
    p = toda_problem(3, (0.4, -0.1, 0.2), (0.0, 0.0), (0.0, 0.5, 1.0), 6)
    states = factorized_solution(p)
    rep = conservation_report(states)
    assert rep["max_eig_drift"] == 0.0
    assert rep["max_trace_power_drift"] == 0.0
    for s in states:
        assert np.allclose(s.x, p.x0, atol=1e-14)


def test_conservation_report_needs_two_states():
    p = toda_problem(2, (0.1, -0.1), (0.3,), (0.5,), 4)
    with pytest.raises(InvalidInput):
        conservation_report(_quiet(factorized_solution, p))


def test_eigenvalues_sorted_ascending():
    p = toda_problem(3, (0.6, -0.2, 0.1), (0.25, 0.15), (0.0, 0.7), 8)
    for s in _quiet(factorized_solution, p):
        assert list(s.eigenvalues) == sorted(s.eigenvalues)


# ---------------------------------------------------------------------------
# RK4 reference


def test_rk4_matches_closed_form():
    p = toda_problem(2, (0.0, 0.0), (1.0,), (0.3, 0.5), 4)
    for s, t in zip(rk4_reference(p, 1e-3), (0.3, 0.5)):
        assert np.max(np.abs(np.array(s.x) - _unit_toda2_closed_form(t))) < 1e-12


def test_rk4_fourth_order_step_ratio():
    # halving the step should shrink the error roughly 16x; measured ratios
    # against the closed form at t = 0.5 are 17.1, 16.5, 16.2
    errs = []
    for step in (0.25, 0.125, 0.0625):
        p = toda_problem(2, (0.0, 0.0), (1.0,), (0.5,), 4)
        got = np.array(rk4_reference(p, step)[0].x)
        errs.append(float(np.max(np.abs(got - _unit_toda2_closed_form(0.5)))))
    for wide, narrow in zip(errs, errs[1:]):
        assert 10.0 < wide / narrow < 24.0


def test_rk4_fixed_point():
    p = toda_problem(2, (0.3, -0.3), (0.0,), (0.5, 1.0), 4)
    for s in rk4_reference(p, 0.1):
        assert np.allclose(s.x, p.x0, atol=1e-14)


def test_rk4_step_too_large():
    p = toda_problem(2, (0.0, 0.0), (1.0,), (5.0,), 4)
    with pytest.raises(StepTooLarge):
        rk4_reference(p, 5.0)


def test_rk4_rejects_nonpositive_step():
    p = toda_problem(2, (0.1, -0.1), (0.3,), (0.5,), 4)
    with pytest.raises(InvalidInput):
        rk4_reference(p, 0.0)


# ---------------------------------------------------------------------------
# CSV output


def test_flow_csv_layout(tmp_path):
    p = toda_problem(2, (0.1, -0.1), (0.3,), (0.0, 0.5, 1.0), 8)
    states = _quiet(factorized_solution, p)
    text = flow_csv(states)
    lines = text.strip().split("\n")
    assert lines[0] == "t,x0,x1,x2,x3,eig1,eig2,F1,F2,eig_drift,trace_power_drift"
    assert len(lines) == 1 + len(states)
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[-1]) == 0.0 and float(first[-2]) == 0.0
    out = tmp_path / "flow.csv"
    write_flow_csv(states, str(out))
    assert out.read_text() == text


def test_flow_csv_rejects_empty():
    with pytest.raises(InvalidInput):
        flow_csv([])
