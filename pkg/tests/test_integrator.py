"""Tests for the adaptive integrator, guards, and Hermite resampling."""

import numpy as np
import pytest

from riccati_lie.errors import DomainError, GuardViolation, NumericError
from riccati_lie.integrator import (
    Trajectory,
    hamiltonian_guard,
    integrate,
    sample_at,
)
from riccati_lie.model import PhasePoint, PotentialSpec, hamiltonian, hamiltonian_field
from riccati_lie.timefn import constant


def canonical_potential():
    return PotentialSpec(constant(0.0), constant(0.0), constant(1.0))


def canonical_solution(t):
    return np.array([2.0 * t / (1.0 + t * t), -((1.0 + t * t) ** 2) / 4.0])


class TestIntegrate:
    def test_zero_field_is_constant(self):
        traj = integrate(lambda t, y: (0.0, 0.0), (0.0, (1.0, -1.0)), 5.0, 1e-10)
        assert np.all(traj.states == [1.0, -1.0])
        assert np.all(traj.derivs == 0.0)
        assert traj.ts[0] == 0.0 and traj.ts[-1] == 5.0

    def test_free_particle_closed_form(self):
        P = PotentialSpec(constant(0.0), constant(0.0), constant(0.0))
        traj = integrate(hamiltonian_field(P), (0.0, (0.0, -1.0)), 2.0, 1e-10,
                         guard=hamiltonian_guard)
        assert np.max(np.abs(traj.states[:, 0] - traj.ts)) < 1e-10
        assert np.max(np.abs(traj.states[:, 1] + 1.0)) < 1e-12

    def test_canonical_final_state(self):
        traj = integrate(hamiltonian_field(canonical_potential()), (0.0, (0.0, -0.25)),
                         1.0, 1e-10, guard=hamiltonian_guard)
        assert traj.ts[-1] == 1.0
        np.testing.assert_allclose(traj.states[-1], [1.0, -1.0], atol=1e-9)

    def test_times_strictly_increasing(self):
        traj = integrate(hamiltonian_field(canonical_potential()), (0.0, (0.0, -0.25)),
                         2.0, 1e-8, guard=hamiltonian_guard)
        assert np.all(np.diff(traj.ts) > 0.0)

    def test_stored_derivatives_match_rhs(self):
        rhs = hamiltonian_field(canonical_potential())
        traj = integrate(rhs, (0.0, (0.0, -0.25)), 2.0, 1e-10, guard=hamiltonian_guard)
        for i, t in enumerate(traj.ts):
            np.testing.assert_allclose(traj.derivs[i], rhs(t, traj.states[i]), rtol=1e-14)

    def test_convergence_with_tolerance(self):
        rhs = hamiltonian_field(canonical_potential())
        errs = []
        for k in range(11):
            tol = 1e-5 * 0.5**k
            traj = integrate(rhs, (0.0, (0.0, -0.25)), 2.0, tol,
                             guard=hamiltonian_guard, max_step=2.0)
            errs.append(np.max(np.abs(traj.states[-1] - canonical_solution(2.0))))
        # tightening by 64x must not let the error grow (local plateaus
        # around step-count quantization are expected at coarser ratios)
        for i in range(len(errs) - 6):
            assert errs[i + 6] <= errs[i]
        assert max(errs[-3:]) < min(errs[:3])
        traj = integrate(rhs, (0.0, (0.0, -0.25)), 2.0, 1e-10, guard=hamiltonian_guard)
        assert np.max(np.abs(traj.states[-1] - canonical_solution(2.0))) <= 1e-8

    def test_bad_window_rejected(self):
        with pytest.raises(ValueError):
            integrate(lambda t, y: (0.0, 0.0), (1.0, (0.0, -1.0)), 1.0, 1e-8)
        with pytest.raises(ValueError):
            integrate(lambda t, y: (0.0, 0.0), (0.0, (0.0, -1.0)), 1.0, 0.0)


class TestGuards:
    def test_initial_violation_rejected(self):
        with pytest.raises(DomainError):
            integrate(lambda t, y: (0.0, 0.0), (0.0, (0.0, 1.0)), 1.0, 1e-8,
                      guard=hamiltonian_guard)

    def test_exit_reported_with_last_valid_time(self):
        # p rises linearly from -0.5 and crosses the guarded boundary at
        # t = 0.5 - 1e-9; bisection localizes the exit to ~1e-10 in t
        with pytest.raises(GuardViolation) as excinfo:
            integrate(lambda t, y: (0.0, 1.0), (0.0, (0.0, -0.5)), 1.0, 1e-10,
                      guard=hamiltonian_guard)
        t_exit = 0.5 - 1e-9
        assert t_exit - 1e-9 <= excinfo.value.last_valid_t <= t_exit

    def test_no_emitted_sample_violates_guard(self):
        try:
            integrate(lambda t, y: (0.0, 1.0), (0.0, (0.0, -0.5)), 1.0, 1e-10,
                      guard=hamiltonian_guard)
        except GuardViolation:
            pass
        traj = integrate(hamiltonian_field(canonical_potential()), (0.0, (0.0, -0.25)),
                         2.0, 1e-10, guard=hamiltonian_guard)
        assert np.all(traj.states[:, 1] <= -1e-9)

    def test_blowup_reports_step_underflow(self):
        # dx/dt = x^2 from x=1 has a pole at t=1
        with pytest.raises(NumericError):
            integrate(lambda t, y: (y[0] ** 2, 0.0), (0.0, (1.0, -1.0)), 2.0, 1e-8)


class TestEnergyDrift:
    def test_autonomous_hamiltonian_nearly_conserved(self):
        P = canonical_potential()
        traj = integrate(hamiltonian_field(P), (0.0, (0.0, -0.25)), 2.0, 1e-10,
                         guard=hamiltonian_guard, system="hamiltonian")
        h0 = hamiltonian(P, 0.0, PhasePoint(0.0, -0.25))
        assert h0 == -1.0
        drift = max(
            abs(hamiltonian(P, t, PhasePoint(*s)) - h0)
            for t, s in zip(traj.ts, traj.states)
        )
        assert drift <= 1e-7


class TestSampleAt:
    def test_nodes_are_exact(self):
        traj = integrate(hamiltonian_field(canonical_potential()), (0.0, (0.0, -0.25)),
                         2.0, 1e-8, guard=hamiltonian_guard)
        for i in (0, len(traj) // 2, len(traj) - 1):
            np.testing.assert_array_equal(sample_at(traj, traj.ts[i]), traj.states[i])

    def test_constant_trajectory_resamples_to_constant(self):
        traj = integrate(lambda t, y: (0.0, 0.0), (0.0, (1.0, -1.0)), 5.0, 1e-10)
        for t in (0.1, 2.3, 4.99):
            np.testing.assert_array_equal(sample_at(traj, t), [1.0, -1.0])

    def test_linear_solution_interpolates_exactly(self):
        P = PotentialSpec(constant(0.0), constant(0.0), constant(0.0))
        traj = integrate(hamiltonian_field(P), (0.0, (0.0, -1.0)), 2.0, 1e-10,
                         guard=hamiltonian_guard)
        s = sample_at(traj, 0.37)
        assert abs(s[0] - 0.37) < 1e-12
        assert abs(s[1] + 1.0) < 1e-12

    def test_exact_on_cubics(self):
        # Hermite data taken from a cubic is reproduced identically
        ts = np.linspace(0.0, 2.0, 9)
        poly = lambda t: np.column_stack([t**3 - 2 * t**2 + 3 * t - 1, 2 * t**3 + t])
        dpoly = lambda t: np.column_stack([3 * t**2 - 4 * t + 3, 6 * t**2 + 1])
        traj = Trajectory(ts=ts, states=poly(ts), derivs=dpoly(ts), system="generic")
        rng = np.random.default_rng(1)
        for t in rng.uniform(0.0, 2.0, 50):
            np.testing.assert_allclose(sample_at(traj, t), poly(np.array([t]))[0], atol=1e-12)

    def test_out_of_range_rejected(self):
        traj = integrate(lambda t, y: (0.0, 0.0), (0.0, (1.0, -1.0)), 1.0, 1e-10)
        for t in (-0.1, 1.1):
            with pytest.raises(DomainError):
                sample_at(traj, t)

    def test_derivative_free_trajectories_not_resampled(self):
        traj = Trajectory(ts=np.array([0.0, 1.0]), states=np.zeros((2, 2)),
                          derivs=None, system="superposed")
        with pytest.raises(ValueError):
            sample_at(traj, 0.5)
