"""Quadrature, absorption probabilities, and the deficit table.

The high-precision reference values here were frozen from two mutually
independent implementations (midpoint-rule circle averages of the
closed forms, cross-checked against 40-digit arithmetic on the exact
rational iteration) and, at 4 digits, against the simulator.
"""

import numpy as np
import pytest

from groverline.absorb import (
    AbsorptionQuery,
    QuadratureSpec,
    ToleranceError,
    absorption_answer,
    integrate_periodic,
    prob_one_boundary,
    prob_one_boundary_right,
    prob_two_boundary,
    table1,
    theorem4_crosscheck,
    theorem4_sequence,
)
from groverline.genfun import r_closed
from groverline.walk import BoundarySpec, CoinSpinor, run_walk

P_ONE_L = 0.4248159326
P_ONE_S = 0.5254692924
P_ONE_R = 0.6692653092
P_TWO_R = 0.0940812419

TABLE_L = [0.1529411765, 0.1616161616, 0.1619106568,
           0.1619197226, 0.1619199936, 0.1619200016]
TABLE_R = [0.4470588235, 0.4343434343, 0.4340077105,
           0.4339982240, 0.4339979488, 0.4339979407]
TABLE_S = [0.6, 0.5959595960, 0.5959183673,
           0.5959179466, 0.5959179423, 0.5959179423]
DEFICIT_1E12 = [4040404040.404, 41228612.657, 420743.496, 4293.748, 43.818]
LOG2_DEFICIT = [31.9119, 25.2971, 18.6826, 12.0680, 5.4535]


class TestIntegratePeriodic:
    def test_constant_trapezoid(self):
        value, err = integrate_periodic(
            lambda t: np.full_like(t, 2.5), QuadratureSpec("trapezoid", 1e-12)
        )
        assert value == pytest.approx(2.5, abs=1e-14)
        assert err == 0.0

    def test_constant_adaptive(self):
        value, err = integrate_periodic(
            lambda t: np.full_like(t, -0.75),
            QuadratureSpec("adaptive-split", 1e-10),
        )
        assert value == pytest.approx(-0.75, abs=1e-12)

    def test_box_series_mass(self):
        # |r(1, e^(i theta))|^2 averages to the total absorbed mass 2/3
        def f(theta):
            z = np.exp(1j * theta)
            return np.abs(2 * z * (1 + z) / (3 + z)) ** 2

        value, _ = integrate_periodic(f, QuadratureSpec("trapezoid", 1e-13))
        assert value == pytest.approx(2 / 3, abs=1e-12)

    def test_one_boundary_mass(self):
        def f(theta):
            return np.abs(r_closed(np.exp(1j * theta))) ** 2

        value, _ = integrate_periodic(f, QuadratureSpec("adaptive-split", 1e-9))
        assert value == pytest.approx(0.6693, abs=5e-4)

    def test_trapezoid_tolerance_failure_carries_partial(self):
        # a corner keeps the midpoint rule at O(n^-2): with a small node
        # budget the requested tolerance is unreachable
        def corner(theta):
            return np.abs(np.sin(theta / 2))

        with pytest.raises(ToleranceError) as exc_info:
            integrate_periodic(corner, QuadratureSpec("trapezoid", 1e-13, 4096))
        err = exc_info.value
        assert err.value == pytest.approx(2 / np.pi, abs=1e-4)

    def test_adaptive_tolerance_failure(self):
        def f(theta):
            return np.abs(r_closed(np.exp(1j * theta))) ** 2

        with pytest.raises(ToleranceError):
            integrate_periodic(f, QuadratureSpec("adaptive-split", 1e-30))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec("simpson", 1e-10)
        with pytest.raises(ValueError):
            QuadratureSpec("trapezoid", -1e-10)
        with pytest.raises(ValueError):
            QuadratureSpec("trapezoid", 1e-10, 4)


class TestOneBoundary:
    def test_basis_values(self):
        assert prob_one_boundary(1, (1, 0, 0)) == pytest.approx(P_ONE_L, abs=1e-9)
        assert prob_one_boundary(1, (0, 1, 0)) == pytest.approx(P_ONE_S, abs=1e-9)
        assert prob_one_boundary(1, (0, 0, 1)) == pytest.approx(P_ONE_R, abs=1e-9)

    def test_receded_boundary_drop(self):
        # moving the boundary from -1 to -2 collapses absorption by ~7x:
        # the trapped component stops draining
        p2 = prob_one_boundary(2, (0, 0, 1))
        assert p2 == pytest.approx(P_TWO_R, abs=1e-9)
        assert p2 < 0.15 * prob_one_boundary(1, (0, 0, 1))

    def test_monotone_in_distance(self):
        values = [prob_one_boundary(m, (0, 0, 1)) for m in range(1, 6)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_simulator_lower_bound(self):
        report = run_walk(CoinSpinor(0, 0, 1), BoundarySpec(left=2), 2000)
        quad = prob_one_boundary(2, (0, 0, 1))
        assert report.cumulative_left <= quad + 1e-12
        assert quad - report.cumulative_left < 2e-3

    def test_right_side_mirror(self):
        assert prob_one_boundary_right(1, (1, 0, 0)) == pytest.approx(
            P_ONE_R, abs=1e-9
        )
        assert prob_one_boundary_right(1, (0, 1, 0)) == pytest.approx(
            P_ONE_S, abs=1e-9
        )
        sym = (1 / np.sqrt(3),) * 3
        assert prob_one_boundary(1, sym) == pytest.approx(
            prob_one_boundary_right(1, sym), abs=1e-11
        )

    def test_boundary_at_start_absorbs_nothing(self):
        assert prob_one_boundary_right(0, (0, 0, 1)) == 0.0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            prob_one_boundary(0, (0, 0, 1))
        with pytest.raises(ValueError):
            prob_one_boundary(1, (0.5, 0, 0))


class TestTwoBoundary:
    def test_table_row_one(self):
        ans = prob_two_boundary(AbsorptionQuery((0, 0, 1), left=2, right=1))
        assert ans.p_left == pytest.approx(TABLE_L[0], abs=1e-9)
        assert ans.p_right == pytest.approx(TABLE_R[0], abs=1e-9)
        assert ans.total == pytest.approx(0.6, abs=1e-9)
        # row 1 is exactly rational: 13/85 and 38/85
        assert ans.p_left == pytest.approx(13 / 85, abs=1e-12)
        assert ans.p_right == pytest.approx(38 / 85, abs=1e-12)

    def test_box_value(self):
        ans = prob_two_boundary(AbsorptionQuery((0, 0, 1), left=1, right=1))
        assert ans.p_left == pytest.approx(2 / 3, abs=1e-12)
        assert ans.p_right == pytest.approx(1 / 3, abs=1e-12)
        assert ans.deficit == pytest.approx(0.0, abs=1e-12)

    def test_table_row_six(self):
        ans = prob_two_boundary(AbsorptionQuery((0, 0, 1), left=2, right=6))
        assert ans.p_left == pytest.approx(TABLE_L[5], abs=1e-9)
        assert ans.p_right == pytest.approx(TABLE_R[5], abs=1e-9)

    def test_conservation_by_construction(self):
        ans = prob_two_boundary(AbsorptionQuery((0, 0, 1), left=3, right=2))
        assert ans.total + ans.deficit == pytest.approx(1.0, abs=0)
        assert ans.total == ans.p_left + ans.p_right

    def test_swap_symmetry(self):
        rng = np.random.default_rng(5)
        raw = rng.normal(size=3) + 1j * rng.normal(size=3)
        raw /= np.linalg.norm(raw)
        a, b, g = (complex(c) for c in raw)
        fwd = prob_two_boundary(AbsorptionQuery((a, b, g), left=3, right=2))
        rev = prob_two_boundary(AbsorptionQuery((g, b, a), left=2, right=3))
        assert fwd.p_right == pytest.approx(rev.p_left, abs=1e-13)
        assert fwd.p_left == pytest.approx(rev.p_right, abs=1e-13)

    def test_monotone_in_right_distance(self):
        values = [
            prob_two_boundary(AbsorptionQuery((0, 0, 1), left=1, right=n)).p_left
            for n in range(1, 7)
        ]
        assert all(b >= a - 1e-13 for a, b in zip(values, values[1:]))

    def test_deficit_matches_simulator_residual(self):
        ans = prob_two_boundary(AbsorptionQuery((0, 0, 1), left=2, right=2))
        report = run_walk(CoinSpinor(0, 0, 1), BoundarySpec(left=2, right=2), 2000)
        assert report.residual_norm == pytest.approx(ans.deficit, abs=5e-3)

    def test_query_validation(self):
        with pytest.raises(ValueError):
            AbsorptionQuery((0, 0, 1))
        with pytest.raises(ValueError):
            AbsorptionQuery((0, 0, 1), left=-1, right=2)
        with pytest.raises(ValueError):
            AbsorptionQuery((1, 1, 1), left=1)


class TestDispatch:
    def test_two_boundary_query(self):
        ans = absorption_answer(AbsorptionQuery((0, 0, 1), left=1, right=1))
        assert ans.p_left is not None and ans.p_right is not None

    def test_left_only(self):
        ans = absorption_answer(AbsorptionQuery((0, 0, 1), left=1))
        assert ans.p_right is None
        assert ans.p_left == pytest.approx(P_ONE_R, abs=1e-9)
        assert ans.deficit == pytest.approx(1 - P_ONE_R, abs=1e-9)

    def test_right_only(self):
        ans = absorption_answer(AbsorptionQuery((1, 0, 0), right=1))
        assert ans.p_left is None
        assert ans.p_right == pytest.approx(P_ONE_R, abs=1e-9)


class TestTheorem4:
    def test_seed_and_first_step(self):
        seq = theorem4_sequence(1)
        assert seq[0] == 0.0
        assert seq[1] == pytest.approx(2 / 3, abs=1e-12)

    def test_fixed_point(self):
        seq = theorem4_sequence(25)
        assert seq[25] == pytest.approx(1 / np.sqrt(2), abs=1e-9)
        # monotone approach; strictly so until double precision saturates
        assert np.all(np.diff(seq) >= 0)
        assert np.all(np.diff(seq[:8]) > 0)

    def test_crosscheck_against_quadrature(self):
        for n in range(1, 11):
            assert theorem4_crosscheck(n) < 1e-8

    def test_validation(self):
        with pytest.raises(ValueError):
            theorem4_sequence(-1)
        with pytest.raises(ValueError):
            theorem4_crosscheck(0)


@pytest.fixture(scope="module")
def rows():
    return table1(max_n=6)


class TestTable1:
    def test_ten_digit_probabilities(self, rows):
        for i, row in enumerate(rows):
            assert row.left == pytest.approx(TABLE_L[i], abs=1e-9)
            assert row.right == pytest.approx(TABLE_R[i], abs=1e-9)
            assert row.total == pytest.approx(TABLE_S[i], abs=1e-9)

    def test_scaled_deficits(self, rows):
        # frozen from 40-digit arithmetic on the exact iteration
        for i in range(5):
            assert rows[i].deficit_scaled == pytest.approx(
                DEFICIT_1E12[i], abs=0.05
            )
            assert rows[i].log2_deficit == pytest.approx(
                LOG2_DEFICIT[i], abs=1e-3
            )
        assert rows[5].deficit_scaled is None
        assert rows[5].log2_deficit is None

    def test_rational_first_row(self, rows):
        assert rows[0].deficit_scaled == pytest.approx(2 / 495 * 1e12, abs=0.05)

    def test_geometric_decay_of_deficit(self, rows):
        logs = [r.log2_deficit for r in rows[:5]]
        diffs = np.diff(logs)
        assert np.max(np.abs(diffs - diffs.mean())) < 0.15

    def test_precision_flags(self, rows):
        assert all(r.precision_ok for r in rows)
        assert all(r.error_estimate <= 1e-12 for r in rows)

    def test_validation(self):
        with pytest.raises(ValueError):
            table1(max_n=1)
