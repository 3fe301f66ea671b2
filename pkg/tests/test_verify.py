import math

import numpy as np
import pytest

from adsheat.geometry import point_at_distance
from adsheat.verify import (
    CheckOutcome,
    ConfigurationError,
    DEFAULT_SUITES,
    DiscGrid,
    ResidualReport,
    SymmetricOperatorSample,
    check_maass_pde,
    check_normalization_k0,
    check_radial_heat_pde,
    check_semigroup_k0,
    check_subordination,
    random_negative_semidefinite,
    run_default_suite,
)


class TestSamples:
    def test_random_sample_is_reproducible(self):
        a = random_negative_semidefinite(5, seed=7)
        b = random_negative_semidefinite(5, seed=7)
        assert np.array_equal(a.matrix, b.matrix)
        c = random_negative_semidefinite(5, seed=8)
        assert not np.array_equal(a.matrix, c.matrix)

    def test_sample_invariants(self):
        s = random_negative_semidefinite(6, seed=3)
        assert s.dim == 6
        assert float(np.abs(s.matrix - s.matrix.T).max()) == 0.0
        assert float(np.linalg.eigvalsh(s.matrix).max()) <= 1e-12

    def test_rejects_asymmetric(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="symmetric"):
            SymmetricOperatorSample(m)

    def test_rejects_positive_eigenvalue(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            SymmetricOperatorSample(np.array([[1.0]]))

    def test_accepts_diagonal_nsd(self):
        s = SymmetricOperatorSample(np.diag([0.0, -1.0, -4.0]))
        assert s.dim == 3


class TestResidualReport:
    def test_rejects_negative_residual(self):
        with pytest.raises(ValueError):
            ResidualReport(-1e-3, 0.0, "g")

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            ResidualReport(float("nan"), 0.0, "g")


class TestDiscGrid:
    def test_defaults(self):
        g = DiscGrid()
        assert g.radius == 0.8
        assert g.step == 0.02

    def test_validation(self):
        with pytest.raises(ValueError):
            DiscGrid(radius=1.2)
        with pytest.raises(ValueError):
            DiscGrid(step=0.5)
        with pytest.raises(ValueError):
            DiscGrid(radius=0.97, step=0.02)


class TestSubordination:
    def test_diagonal_matrix_is_machine_exact(self):
        # eigenvectors are trivial, so the check reduces to the scalar
        # identity int (4 pi t)^{-1/2} e^{-x^2/4t} cos(x s) dx = e^{-t s^2}
        sample = SymmetricOperatorSample(np.diag([0.0, -1.0, -4.0]))
        report = check_subordination(sample, 1.0)
        assert report.max_abs_residual <= 1e-12

    @pytest.mark.parametrize("t", [0.25, 0.5, 1.0])
    def test_random_sample_meets_threshold(self, t):
        sample = random_negative_semidefinite(5, seed=42)
        report = check_subordination(sample, t)
        assert report.max_rel_residual <= 1e-8

    def test_node_refinement_is_monotone(self):
        # spectral convergence of the Gauss rule against the fixed
        # eigendecomposition oracle
        sample = random_negative_semidefinite(5, seed=42)
        residuals = [
            check_subordination(sample, 1.0, n_nodes=n).max_abs_residual
            for n in (8, 16, 32)
        ]
        assert residuals[0] > residuals[1] > residuals[2]
        assert residuals[2] <= 1e-12

    def test_scaled_spectrum(self):
        sample = random_negative_semidefinite(5, seed=11, scale=3.0)
        report = check_subordination(sample, 0.5)
        assert report.max_rel_residual <= 1e-8


class TestSemigroup:
    def test_chapman_kolmogorov_at_origin(self):
        report = check_semigroup_k0(0.5, 0.5, point_at_distance(0.0))
        assert report.max_rel_residual <= 1e-3

    def test_chapman_kolmogorov_off_origin(self):
        report = check_semigroup_k0(0.3, 0.7, point_at_distance(0.4))
        assert report.max_rel_residual <= 1e-3

    def test_time_swap_symmetry(self):
        z = point_at_distance(0.4)
        a = check_semigroup_k0(0.3, 0.7, z)
        b = check_semigroup_k0(0.7, 0.3, z)
        # p_{t+s} = p_t * p_s = p_s * p_t: both orders must verify equally
        assert a.max_rel_residual <= 1e-3
        assert b.max_rel_residual <= 1e-3


class TestNormalization:
    @pytest.mark.parametrize("t,n,tol", [(1.0, 1, 1e-6), (0.25, 1, 1e-6), (1.0, 2, 1e-5)])
    def test_unit_mass(self, t, n, tol):
        report = check_normalization_k0(t, n)
        assert report.max_abs_residual <= tol


class TestRadialPde:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_residual_within_threshold(self, n):
        report = check_radial_heat_pde(n=n)
        assert report.max_rel_residual <= 1e-4

    def test_rejects_tiny_x_lo(self):
        with pytest.raises(ValueError):
            check_radial_heat_pde(x_range=(0.05, 4.0))

    def test_rejects_oversized_step(self):
        with pytest.raises(ValueError):
            check_radial_heat_pde(h=0.05)

    def test_guard_fires_on_unreachable_target(self):
        with pytest.raises(ConfigurationError):
            check_radial_heat_pde(n=1, h=5e-3, target_rel=1e-9)


class TestMaassPde:
    def test_weight_zero_default_grid(self):
        report = check_maass_pde(1.0, 0.0)
        assert report.max_rel_residual <= 5e-3

    def test_weight_one_refined_grid(self):
        report = check_maass_pde(1.0, 1.0, DiscGrid(step=0.01))
        assert report.max_rel_residual <= 5e-3

    def test_coarse_grid_guard_suggests_step(self):
        # at kappa = 1 and step 0.02 the O(h^2) stencil truncation alone
        # exceeds 5e-3, so the guard must refuse and suggest a finer step
        with pytest.raises(ConfigurationError) as exc_info:
            check_maass_pde(1.0, 1.0, DiscGrid(step=0.02), target_rel=5e-3)
        step = exc_info.value.suggested_step
        assert step is not None
        assert 0.010 < step < 0.018

    def test_config_echo_reports_grid(self):
        report = check_maass_pde(0.8, 0.5)
        assert "step" in report.config_echo
        assert report.config_echo["kappa"] == 0.5


class TestSuiteRunner:
    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            run_default_suite(("nonsense",))

    def test_single_suite_rows(self):
        rows = run_default_suite(("subordination",))
        assert len(rows) == 2
        for row in rows:
            assert isinstance(row, CheckOutcome)
            assert row.name.startswith("subordination")
            assert row.passed
            assert "threshold" in row.config_echo
            assert "grid_spec" in row.config_echo

    def test_seed_flows_to_samples(self):
        a = run_default_suite(("subordination",), seed=1)
        b = run_default_suite(("subordination",), seed=1)
        assert [r.max_abs_residual for r in a] == [r.max_abs_residual for r in b]

    def test_default_suite_names(self):
        assert DEFAULT_SUITES == (
            "maass-pde",
            "radial-pde",
            "subordination",
            "semigroup",
            "normalization",
        )
