"""Tests for fiber averaging, quadrature, and spectral antiderivatives.

Expected values are hand-computed closed forms: trigonometric moments
(mean of cos^2 is 1/2), Bessel integrals for quadrature exactness, and
the single-harmonic fiber oscillation U-tilde = f(x) cos(tau), whose
periodic solution is v-tilde = -f'(x) sin(tau) with mean squared
velocity f'(x)^2 / 2.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastslow import (AveragedSystem, AveragingError, FastSlowSystem,
                      FiberOscillationProblem, QuadratureRule, TrigSeries,
                      average_coefficients, averaged_hamiltonian,
                      effective_potential, magnetic_form,
                      oscillation_induced_potential,
                      periodic_antiderivative_samples,
                      solve_fiber_oscillation)

# Hand-computed: a0 = (1,), h0 = 1, U0 = 0.5, mu = 1, P = (1,)
# Hbar = 1/2 + 1 + 1/2 + 1/2 = 2.5.
AVERAGED_HAMILTONIAN_EXAMPLE = 2.5

finite = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)


def constant_coefficient_system(a0, h0, U0, a1=None, h1=None, U1=None,
                                epsilon=0.01, mu=1.0, dim=1):
    zero_vec = lambda q, phi: np.zeros(dim)
    zero = lambda q, phi: 0.0
    return FastSlowSystem(
        dim_base=dim,
        a0=lambda q: np.full(dim, a0),
        h0=lambda q: h0,
        U0=U0,
        a1=a1 or zero_vec,
        h1=h1 or zero,
        U1=U1 or zero,
        epsilon=epsilon,
        mu=mu)


def synthetic_averaged(mu=1.0):
    return AveragedSystem(
        dim_base=2,
        a0=lambda Q: np.array([0.3 * np.sin(Q[1]), 0.2 * Q[0]]),
        h0=lambda Q: 2.0 + Q[0] ** 2,
        U0=lambda Q: 0.5 * float(Q @ Q),
        mu=mu)


class TestQuadrature:
    def test_trapezoid_exact_on_trigonometric_polynomials(self):
        rule = QuadratureRule(n_nodes=16)
        nodes, _ = rule.nodes_weights()
        for k in (1, 2, 5, 7):
            # Mean of cos^2(k tau) over the circle is 1/2.
            mean = rule.fiber_mean(np.cos(k * nodes) ** 2)
            assert abs(mean - 0.5) < 1e-13
            assert abs(rule.fiber_mean(np.sin(k * nodes))) < 1e-13

    def test_both_schemes_match_bessel_integral(self):
        # Integral of exp(cos tau) over [0, 2 pi) is 2 pi I_0(1).
        want = 2.0 * np.pi * np.i0(1.0)
        for scheme in ("trapezoid_periodic", "gauss_legendre_mapped"):
            rule = QuadratureRule(n_nodes=64, scheme=scheme)
            nodes, _ = rule.nodes_weights()
            got = rule.integrate(np.exp(np.cos(nodes)))
            assert abs(got - want) < 1e-12

    def test_integrate_handles_vector_samples(self):
        rule = QuadratureRule(n_nodes=32)
        nodes, _ = rule.nodes_weights()
        samples = np.stack([np.cos(nodes) ** 2, np.sin(nodes)], axis=1)
        mean = rule.fiber_mean(samples)
        assert mean.shape == (2,)
        assert abs(mean[0] - 0.5) < 1e-13
        assert abs(mean[1]) < 1e-13

    def test_rejects_bad_construction(self):
        with pytest.raises(ValueError):
            QuadratureRule(n_nodes=0)
        with pytest.raises(ValueError, match="scheme"):
            QuadratureRule(scheme="simpson")


class TestTrigSeries:
    def closed_form(self, tau):
        return (1.0 + 0.3 * np.cos(tau) - 0.2 * np.sin(3 * tau)
                + 0.05 * np.cos(8 * tau))

    def test_interpolates_band_limited_samples(self):
        # Highest harmonic 8 is the Nyquist mode for 16 samples.
        grid = np.arange(16) * (2.0 * np.pi / 16)
        series = TrigSeries.from_samples(self.closed_form(grid))
        probes = np.array([0.0, 0.17, 1.3, 2.9, 4.4, 5.8])
        assert np.max(np.abs(series(probes) - self.closed_form(probes))) \
            < 1e-12

    def test_samples_round_trip(self):
        grid = np.arange(20) * (2.0 * np.pi / 20)
        values = np.exp(np.sin(grid))
        series = TrigSeries.from_samples(values)
        assert np.max(np.abs(series.samples() - values)) < 1e-13

    def test_scalar_evaluation_returns_float(self):
        series = TrigSeries.from_samples(np.cos(np.arange(8) * np.pi / 4))
        assert isinstance(series(0.3), float)


class TestPeriodicAntiderivative:
    def test_first_order_on_single_harmonic(self):
        n = 64
        tau = np.arange(n) * (2.0 * np.pi / n)
        for k in (1, 3, 10):
            got = periodic_antiderivative_samples(np.cos(k * tau))
            assert np.max(np.abs(got - np.sin(k * tau) / k)) < 1e-12

    def test_second_order_on_single_harmonic(self):
        n = 64
        tau = np.arange(n) * (2.0 * np.pi / n)
        got = periodic_antiderivative_samples(np.cos(3 * tau), order=2)
        assert np.max(np.abs(got + np.cos(3 * tau) / 9.0)) < 1e-12

    def test_vector_samples_integrate_componentwise(self):
        n = 32
        tau = np.arange(n) * (2.0 * np.pi / n)
        samples = np.stack([np.cos(tau), np.sin(2 * tau)], axis=1)
        got = periodic_antiderivative_samples(samples)
        want = np.stack([np.sin(tau), -np.cos(2 * tau) / 2.0], axis=1)
        assert np.max(np.abs(got - want)) < 1e-12

    def test_nonzero_mean_raises_with_details(self):
        n = 32
        tau = np.arange(n) * (2.0 * np.pi / n)
        with pytest.raises(AveragingError) as err:
            periodic_antiderivative_samples(1.0 + np.cos(tau),
                                            what="test forcing")
        assert err.value.coefficient == "test forcing"
        assert abs(err.value.residual - 1.0) < 1e-12
        assert "secular" in str(err.value)

    def test_rejects_unsupported_order(self):
        with pytest.raises(ValueError, match="order"):
            periodic_antiderivative_samples(np.zeros(8), order=3)


class TestAverageCoefficients:
    def test_zero_oscillation_passes_through(self):
        system = constant_coefficient_system(
            a0=0.0, h0=1.0, U0=lambda q: 0.5 * float(q @ q))
        avg = average_coefficients(system)
        q = np.array([0.7])
        assert avg.mu == system.mu
        assert avg.U0(q) == system.U0(q)
        assert avg.h0(q) == 1.0
        assert avg.diagnostics["residual_means"]["U1"] == 0.0
        assert abs(avg.diagnostics["inertia_inverse_min"] - 1.0) < 1e-15

    def test_oscillating_potential_averages_to_slow_part(self):
        # U = q^2 (1 + eps cos phi): fiber mean of the eps part is zero.
        system = constant_coefficient_system(
            a0=0.0, h0=1.0,
            U0=lambda q: float(q @ q),
            U1=lambda q, phi: float(q @ q) * np.cos(phi))
        avg = average_coefficients(system)
        q = np.array([-1.3])
        assert abs(avg.U0(q) - 1.69) < 1e-15
        assert avg.diagnostics["residual_means"]["U1"] < 1e-12

    def test_oscillating_inertia_with_zero_mean_is_accepted(self):
        system = constant_coefficient_system(
            a0=0.0, h0=2.0, U0=lambda q: 0.0,
            h1=lambda q, phi: np.sin(3 * phi))
        avg = average_coefficients(system)
        assert avg.h0(np.zeros(1)) == 2.0

    def test_nonzero_mean_oscillation_raises_naming_coefficient(self):
        system = constant_coefficient_system(
            a0=0.0, h0=1.0, U0=lambda q: 0.0,
            U1=lambda q, phi: 0.1 + np.cos(phi))
        with pytest.raises(AveragingError) as err:
            average_coefficients(system)
        assert err.value.coefficient == "U1"
        assert err.value.point is not None
        assert abs(err.value.residual - 0.1) < 1e-12

    def test_nonpositive_total_inertia_raises(self):
        system = constant_coefficient_system(
            a0=0.0, h0=0.01, U0=lambda q: 0.0,
            h1=lambda q, phi: np.sin(phi), epsilon=0.1)
        with pytest.raises(AveragingError) as err:
            average_coefficients(system)
        assert err.value.coefficient == "h"

    def test_sample_points_are_honored(self):
        system = constant_coefficient_system(
            a0=0.0, h0=1.0, U0=lambda q: 0.0)
        pts = [np.array([5.0]), np.array([-5.0])]
        avg = average_coefficients(system, sample_points=pts)
        stored = avg.diagnostics["sample_points"]
        assert len(stored) == 2
        assert np.array_equal(stored[0], pts[0])

    def test_negative_inertia_inverse_is_reported_not_raised(self):
        # h0 - a0.a0 < 0 is a diagnostic, not an error.
        system = constant_coefficient_system(
            a0=2.0, h0=1.0, U0=lambda q: 0.0)
        avg = average_coefficients(system)
        assert avg.diagnostics["inertia_inverse_min"] == -3.0


class TestAveragedHamiltonian:
    def test_frozen_example(self):
        avg = AveragedSystem(
            dim_base=1,
            a0=lambda Q: np.array([1.0]),
            h0=lambda Q: 1.0,
            U0=lambda Q: 0.5,
            mu=1.0)
        got = averaged_hamiltonian(avg, np.zeros(1), np.array([1.0]))
        assert abs(got - AVERAGED_HAMILTONIAN_EXAMPLE) < 1e-14

    @given(q1=finite, q2=finite, p1=finite, p2=finite,
           mu=st.floats(min_value=-1.5, max_value=1.5, allow_nan=False))
    @settings(deadline=None, max_examples=60)
    def test_chart_identity(self, q1, q2, p1, p2, mu):
        # Hbar = |P + mu a0|^2 / 2 + Ubar_mu, an algebraic identity.
        avg = synthetic_averaged(mu)
        Q = np.array([q1, q2])
        P = np.array([p1, p2])
        P1 = P + mu * avg.a0(Q)
        left = averaged_hamiltonian(avg, Q, P)
        right = 0.5 * float(P1 @ P1) + effective_potential(avg, Q)
        assert abs(left - right) < 1e-12


class TestMagneticForm:
    def test_one_dimensional_form_vanishes(self):
        avg = AveragedSystem(
            dim_base=1,
            a0=lambda Q: np.array([np.sin(Q[0])]),
            h0=lambda Q: 1.0,
            U0=lambda Q: 0.0,
            mu=2.0)
        assert np.max(np.abs(magnetic_form(avg, np.array([0.4])))) < 1e-9

    def test_uniform_field_from_symmetric_gauge(self):
        # a0 = (-b Q2 / 2, b Q1 / 2) generates constant B = [[0, b], [-b, 0]].
        b = 0.8
        avg = AveragedSystem(
            dim_base=2,
            a0=lambda Q: np.array([-0.5 * b * Q[1], 0.5 * b * Q[0]]),
            h0=lambda Q: 0.25 * b * b * float(Q @ Q),
            U0=lambda Q: 0.0,
            mu=1.0,
            grad_a0=lambda Q: np.array([[0.0, 0.5 * b], [-0.5 * b, 0.0]]))
        B = magnetic_form(avg, np.array([0.3, -1.1]))
        assert np.max(np.abs(B - np.array([[0.0, b], [-b, 0.0]]))) < 1e-14

    def test_finite_difference_fallback_matches_analytic(self):
        b = 0.8
        exact = AveragedSystem(
            dim_base=2,
            a0=lambda Q: np.array([-0.5 * b * Q[1], 0.5 * b * Q[0]]),
            h0=lambda Q: 0.0, U0=lambda Q: 0.0, mu=1.0,
            grad_a0=lambda Q: np.array([[0.0, 0.5 * b], [-0.5 * b, 0.0]]))
        fallback = AveragedSystem(
            dim_base=2, a0=exact.a0, h0=exact.h0, U0=exact.U0, mu=1.0)
        Q = np.array([0.3, -1.1])
        assert np.max(np.abs(magnetic_form(exact, Q)
                             - magnetic_form(fallback, Q))) < 1e-9

    @given(q1=finite, q2=finite)
    @settings(deadline=None, max_examples=30)
    def test_antisymmetry(self, q1, q2):
        avg = synthetic_averaged(1.3)
        B = magnetic_form(avg, np.array([q1, q2]))
        assert np.max(np.abs(B + B.T)) < 1e-9


class TestFiberOscillation:
    def single_harmonic_problem(self, epsilon=0.01, omega=100.0):
        return FiberOscillationProblem(
            potential_tilde=lambda x, tau: np.sin(x[0]) * np.cos(tau),
            omega=omega,
            epsilon=epsilon,
            grad=lambda x, tau: np.array([np.cos(x[0]) * np.cos(tau)]))

    def test_single_harmonic_velocity_profile(self):
        # U-tilde = sin(x) cos(tau): v-tilde = -cos(x) sin(tau).
        problem = self.single_harmonic_problem()
        sol = solve_fiber_oscillation(problem, np.array([0.8]))
        want = -np.cos(0.8) * np.sin(sol.tau)
        assert np.max(np.abs(sol.v_tilde[:, 0] - want)) < 1e-12
        assert np.max(np.abs(sol.x_tilde[:, 0]
                             - np.cos(0.8) * np.cos(sol.tau))) < 1e-12

    def test_mean_squared_velocity_closed_form(self):
        problem = self.single_harmonic_problem()
        sol = solve_fiber_oscillation(problem, np.array([0.8]))
        assert abs(sol.mean_vv - 0.5 * np.cos(0.8) ** 2) < 1e-12

    def test_induced_potential_closed_form(self):
        # Added term is (eps^2 omega^2 / 4) f'(x)^2 for f(x) cos(tau).
        problem = self.single_harmonic_problem(epsilon=0.01, omega=100.0)
        U_slow = lambda x: 0.5 * float(x @ x)
        got = oscillation_induced_potential(problem, U_slow, np.array([0.8]))
        want = 0.32 + 0.25 * (0.01 * 100.0) ** 2 * np.cos(0.8) ** 2
        assert abs(got - want) < 1e-12

    def test_gradient_fallback_matches_analytic(self):
        with_grad = self.single_harmonic_problem()
        without = FiberOscillationProblem(
            potential_tilde=with_grad.potential_tilde,
            omega=with_grad.omega, epsilon=with_grad.epsilon)
        a = solve_fiber_oscillation(with_grad, np.array([0.8]))
        b = solve_fiber_oscillation(without, np.array([0.8]))
        assert np.max(np.abs(a.v_tilde - b.v_tilde)) < 1e-8

    def test_secular_forcing_raises(self):
        problem = FiberOscillationProblem(
            potential_tilde=lambda x, tau: (1.0 + np.cos(tau)) * x[0],
            omega=50.0, epsilon=0.02,
            grad=lambda x, tau: np.array([1.0 + np.cos(tau)]))
        with pytest.raises(AveragingError, match="secular"):
            solve_fiber_oscillation(problem, np.array([0.3]))

    def test_mu_property(self):
        problem = self.single_harmonic_problem(epsilon=0.02, omega=150.0)
        assert abs(problem.mu - 3.0) < 1e-15
