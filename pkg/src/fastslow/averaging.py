"""Averaging of one-frequency fast-oscillating natural Hamiltonian systems.

The full system has Hamiltonian

    H = (1/2) p.p + gamma a(q, phi) . p + (1/2) h(q, phi) gamma^2 + U(q, phi)

with coefficient expansions a = a0(q) + eps a1(q, phi), h = h0 + eps h1,
U = U0 + eps U1, where the order-eps parts have zero fiber mean. Written
in the fast time the equations of motion are

    dq/dtau   = eps (p + gamma a)
    dphi/dtau = a . p + h gamma
    dp/dtau   = -eps d_q (gamma a . p + (1/2) h gamma^2 + U)
    dgamma/dtau = -eps d_phi (gamma a1 . p + (1/2) h1 gamma^2 + U1)

so gamma drifts only at order eps and is replaced by its initial value
mu in the averaged description. The averaged Hamiltonian

    Hbar = (1/2) P.P + mu a0(Q) . P + (1/2) mu^2 h0(Q) + U0(Q)

generates slow dynamics that shadow (q, p, gamma) to order eps over
slow-time horizons of order one. In the shifted chart P1 = P + mu a0(Q)
the same dynamics take Lorentz-force form with magnetic field
B_ij = mu (d_i a0_j - d_j a0_i) and scalar potential

    Ubar_mu = (1/2) mu^2 (h0 - a0 . a0) + U0.

The quantity h0 - a0 . a0 is the inverse fiber inertia of a matching
bundle metric when positive; averaged data produced by other routes
(strongly forced oscillating potentials, for instance) can make it
non-positive, so its sign is reported as a diagnostic and never enforced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from ._derivatives import jacobian, gradient

ZERO_MEAN_TOL = 1e-10
TWO_PI = 2.0 * np.pi


class AveragingError(ValueError):
    """A coefficient violates the structural assumptions of averaging."""

    def __init__(self, message: str, coefficient: str | None = None,
                 point=None, residual: float | None = None) -> None:
        super().__init__(message)
        self.coefficient = coefficient
        self.point = point
        self.residual = residual


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature on the fiber circle [0, 2*pi).

    scheme "trapezoid_periodic" uses n_nodes equispaced nodes and equal
    weights; it integrates trigonometric polynomials of degree below
    n_nodes exactly. scheme "gauss_legendre_mapped" maps a Gauss-Legendre
    rule from [-1, 1] onto [0, 2*pi].
    """

    n_nodes: int = 64
    scheme: Literal["trapezoid_periodic", "gauss_legendre_mapped"] = \
        "trapezoid_periodic"

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be a positive integer")
        if self.scheme not in ("trapezoid_periodic", "gauss_legendre_mapped"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        if self.scheme == "trapezoid_periodic":
            nodes = np.arange(self.n_nodes) * (TWO_PI / self.n_nodes)
            weights = np.full(self.n_nodes, TWO_PI / self.n_nodes)
        else:
            x, w = np.polynomial.legendre.leggauss(self.n_nodes)
            nodes = np.pi * (x + 1.0)
            weights = np.pi * w
        return nodes, weights

    def integrate(self, samples: np.ndarray) -> np.ndarray:
        """Integral over [0, 2*pi) of node samples (first axis = nodes)."""
        samples = np.asarray(samples, dtype=float)
        _, weights = self.nodes_weights()
        return np.tensordot(weights, samples, axes=(0, 0))

    def fiber_mean(self, samples: np.ndarray) -> np.ndarray:
        return self.integrate(samples) / TWO_PI


class TrigSeries:
    """Real trigonometric polynomial built from uniform samples.

    Wraps the rFFT coefficients of n equispaced samples on [0, 2*pi) and
    evaluates the interpolating band-limited series at arbitrary angles.
    """

    def __init__(self, coeffs: np.ndarray, n_samples: int) -> None:
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.n_samples = int(n_samples)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "TrigSeries":
        samples = np.asarray(samples, dtype=float)
        return cls(np.fft.rfft(samples) / samples.size, samples.size)

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        k = np.arange(self.coeffs.size)
        # One-sided spectrum: double every mode except DC and (for even
        # sample counts) the Nyquist mode.
        scale = np.full(self.coeffs.size, 2.0)
        scale[0] = 1.0
        if self.n_samples % 2 == 0 and self.coeffs.size == self.n_samples // 2 + 1:
            scale[-1] = 1.0
        phases = np.exp(1j * np.multiply.outer(tau, k))
        vals = np.real(phases @ (scale * self.coeffs))
        return vals if vals.ndim else float(vals)

    def samples(self) -> np.ndarray:
        return np.fft.irfft(self.coeffs * self.n_samples, n=self.n_samples)


def periodic_antiderivative_samples(samples: np.ndarray,
                                    order: int = 1,
                                    tol: float = ZERO_MEAN_TOL,
                                    what: str = "integrand") -> np.ndarray:
    """Zero-mean antiderivative of periodic samples, order 1 or 2.

    samples holds values on the uniform grid tau_j = 2*pi*j/n (extra
    trailing axes are integrated elementwise). The input must have zero
    fiber mean relative to its own scale; otherwise the antiderivative
    would grow secularly and an AveragingError is raised naming ``what``.
    """
    samples = np.asarray(samples, dtype=float)
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    n = samples.shape[0]
    mean = np.mean(samples, axis=0)
    scale = max(1.0, float(np.max(np.abs(samples))) if samples.size else 0.0)
    worst = float(np.max(np.abs(mean))) if np.size(mean) else abs(float(mean))
    if worst > tol * scale:
        raise AveragingError(
            f"{what} has nonzero fiber mean {worst:.3e}; its periodic "
            "antiderivative would grow secularly",
            coefficient=what, residual=worst)
    spec = np.fft.rfft(samples, axis=0)
    k = np.arange(spec.shape[0])
    factor = np.zeros(spec.shape[0], dtype=complex)
    factor[1:] = (1.0 / (1j * k[1:])) ** order
    shape = (spec.shape[0],) + (1,) * (spec.ndim - 1)
    spec = spec * factor.reshape(shape)
    spec[0] = 0.0
    return np.fft.irfft(spec, n=n, axis=0)


@dataclass(frozen=True)
class FastSlowSystem:
    """Coefficient data of a fast-oscillating natural Hamiltonian system.

    a0, h0, U0 are functions of q alone; a1, h1, U1 depend on (q, phi)
    and must have zero fiber mean. epsilon > 0 is the timescale ratio
    and mu the conserved leading-order fiber momentum, so the fast
    frequency is omega = mu / epsilon. Analytic derivative callables are
    optional; central differences are used where they are absent.
    grad_a0(q)[i, j] is d a0_j / d q_i, and jac_q_a1 follows the same
    layout in its first two axes.
    """

    dim_base: int
    a0: Callable[[np.ndarray], np.ndarray]
    h0: Callable[[np.ndarray], float]
    U0: Callable[[np.ndarray], float]
    a1: Callable[[np.ndarray, float], np.ndarray]
    h1: Callable[[np.ndarray, float], float]
    U1: Callable[[np.ndarray, float], float]
    epsilon: float
    mu: float
    grad_a0: Callable[[np.ndarray], np.ndarray] | None = None
    grad_h0: Callable[[np.ndarray], np.ndarray] | None = None
    grad_U0: Callable[[np.ndarray], np.ndarray] | None = None
    jac_q_a1: Callable[[np.ndarray, float], np.ndarray] | None = None
    dphi_a1: Callable[[np.ndarray, float], np.ndarray] | None = None
    grad_q_h1: Callable[[np.ndarray, float], np.ndarray] | None = None
    dphi_h1: Callable[[np.ndarray, float], float] | None = None
    grad_q_U1: Callable[[np.ndarray, float], np.ndarray] | None = None
    dphi_U1: Callable[[np.ndarray, float], float] | None = None

    def __post_init__(self) -> None:
        if self.dim_base < 1:
            raise ValueError("dim_base must be a positive integer")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")

    @property
    def omega(self) -> float:
        """Fast fiber frequency mu / epsilon."""
        return self.mu / self.epsilon

    def a(self, q: np.ndarray, phi: float) -> np.ndarray:
        return (np.asarray(self.a0(q), dtype=float)
                + self.epsilon * np.asarray(self.a1(q, phi), dtype=float))

    def h(self, q: np.ndarray, phi: float) -> float:
        return float(self.h0(q)) + self.epsilon * float(self.h1(q, phi))

    def U(self, q: np.ndarray, phi: float) -> float:
        return float(self.U0(q)) + self.epsilon * float(self.U1(q, phi))

    def hamiltonian(self, q: np.ndarray, p: np.ndarray, phi: float,
                    gamma: float) -> float:
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        a = self.a(q, phi)
        return float(0.5 * (p @ p) + gamma * (a @ p)
                     + 0.5 * self.h(q, phi) * gamma * gamma + self.U(q, phi))


@dataclass(frozen=True)
class AveragedSystem:
    """Averaged (slow) Hamiltonian data (a0, h0, U0) with momentum mu.

    The combination h0 - a0 . a0 must evaluate finite; its sign is not
    constrained and is carried in diagnostics["inertia_inverse_min"]
    when the system was produced by average_coefficients. grad_a0 has
    the layout grad_a0(q)[i, j] = d a0_j / d q_i.
    """

    dim_base: int
    a0: Callable[[np.ndarray], np.ndarray]
    h0: Callable[[np.ndarray], float]
    U0: Callable[[np.ndarray], float]
    mu: float
    grad_a0: Callable[[np.ndarray], np.ndarray] | None = None
    grad_h0: Callable[[np.ndarray], np.ndarray] | None = None
    grad_U0: Callable[[np.ndarray], np.ndarray] | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.dim_base < 1:
            raise ValueError("dim_base must be a positive integer")


@dataclass(frozen=True)
class FiberOscillationProblem:
    """Periodically forced oscillation data for a strongly driven particle.

    potential_tilde(x, tau) is the zero-mean oscillating part of the
    potential in the fast phase tau; omega is the forcing frequency and
    epsilon the timescale ratio, so the effective momentum is
    mu = epsilon * omega. grad, when given, returns the x-gradient of
    potential_tilde.
    """

    potential_tilde: Callable[[np.ndarray, float], float]
    omega: float
    epsilon: float
    grad: Callable[[np.ndarray, float], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")

    @property
    def mu(self) -> float:
        return self.epsilon * self.omega


def _coefficient_samples(fn, q: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    return np.array([np.asarray(fn(q, phi), dtype=float) for phi in nodes])


def average_coefficients(system: FastSlowSystem,
                         rule: QuadratureRule | None = None,
                         sample_points: Sequence[np.ndarray] | None = None
                         ) -> AveragedSystem:
    """Averaged system of a fast-slow system, with residual diagnostics.

    Verifies at the sample points that the oscillating coefficients a1,
    h1, U1 have fiber mean below 1e-10 (relative to their own scale) and
    that the total inertia h0 + eps h1 stays positive; violations raise
    an AveragingError naming the offending coefficient and point. The
    returned system reuses the slow coefficients and analytic gradients
    of the input and records the worst residual means, together with the
    minimum of h0 - a0 . a0 over the samples, in diagnostics.
    """
    rule = rule or QuadratureRule()
    if sample_points is None:
        pts = [
            np.zeros(system.dim_base),
            np.full(system.dim_base, 0.7),
            np.full(system.dim_base, -1.3),
            np.linspace(0.3, 1.1, system.dim_base),
        ]
    else:
        pts = [np.asarray(p, dtype=float) for p in sample_points]
    nodes, _ = rule.nodes_weights()

    residuals = {"a1": 0.0, "h1": 0.0, "U1": 0.0}
    inertia_min = np.inf
    for q in pts:
        for name, fn in (("a1", system.a1), ("h1", system.h1),
                         ("U1", system.U1)):
            samples = _coefficient_samples(fn, q, nodes)
            scale = max(1.0, float(np.max(np.abs(samples))))
            mean = rule.fiber_mean(samples)
            worst = float(np.max(np.abs(np.atleast_1d(mean))))
            if worst > ZERO_MEAN_TOL * scale:
                raise AveragingError(
                    f"coefficient {name} has nonzero fiber mean "
                    f"{worst:.3e} at q={q}",
                    coefficient=name, point=q, residual=worst)
            residuals[name] = max(residuals[name], worst)
        h0q = float(system.h0(q))
        for phi in nodes:
            total = h0q + system.epsilon * float(system.h1(q, phi))
            if not total > 0.0:
                raise AveragingError(
                    f"total fiber inertia h0 + eps h1 is not positive at "
                    f"q={q}, phi={phi:.3f} (value {total:.3e})",
                    coefficient="h", point=q, residual=total)
        a0q = np.asarray(system.a0(q), dtype=float)
        inv = h0q - float(a0q @ a0q)
        if not np.isfinite(inv):
            raise AveragingError(
                f"h0 - a0.a0 is not finite at q={q}", coefficient="h0",
                point=q)
        inertia_min = min(inertia_min, inv)

    diagnostics = {
        "residual_means": residuals,
        "inertia_inverse_min": float(inertia_min),
        "sample_points": [q.copy() for q in pts],
    }
    return AveragedSystem(
        dim_base=system.dim_base, a0=system.a0, h0=system.h0, U0=system.U0,
        mu=system.mu, grad_a0=system.grad_a0, grad_h0=system.grad_h0,
        grad_U0=system.grad_U0, diagnostics=diagnostics)


def averaged_hamiltonian(avg: AveragedSystem, Q: np.ndarray,
                         P: np.ndarray) -> float:
    """Hbar = (1/2) P.P + mu a0(Q).P + (1/2) mu^2 h0(Q) + U0(Q)."""
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    a0 = np.asarray(avg.a0(Q), dtype=float)
    return float(0.5 * (P @ P) + avg.mu * (a0 @ P)
                 + 0.5 * avg.mu ** 2 * float(avg.h0(Q)) + float(avg.U0(Q)))


def effective_potential(avg: AveragedSystem, Q: np.ndarray) -> float:
    """Scalar potential of the magnetic chart.

    Ubar_mu = (1/2) mu^2 (h0 - a0 . a0) + U0, so that the averaged
    Hamiltonian equals (1/2) |P1|^2 + Ubar_mu with P1 = P + mu a0(Q).
    """
    Q = np.asarray(Q, dtype=float)
    a0 = np.asarray(avg.a0(Q), dtype=float)
    return float(0.5 * avg.mu ** 2 * (float(avg.h0(Q)) - float(a0 @ a0))
                 + float(avg.U0(Q)))


def magnetic_form(avg: AveragedSystem, Q: np.ndarray) -> np.ndarray:
    """Magnetic two-form matrix B_ij = mu (d_i a0_j - d_j a0_i) at Q.

    Uses the analytic grad_a0 when present, otherwise central
    differences with step 1e-6 * max(1, |Q|_inf).
    """
    Q = np.asarray(Q, dtype=float)
    if avg.grad_a0 is not None:
        jac = np.asarray(avg.grad_a0(Q), dtype=float)
    else:
        jac = jacobian(lambda x: avg.a0(x), Q)
    return avg.mu * (jac - jac.T)


@dataclass(frozen=True)
class FiberSolution:
    """Leading-order periodic oscillation at a frozen slow position."""

    tau: np.ndarray
    v_tilde: np.ndarray
    x_tilde: np.ndarray
    mean_vv: float


def solve_fiber_oscillation(problem: FiberOscillationProblem,
                            x_bar: np.ndarray,
                            rule: QuadratureRule | None = None
                            ) -> FiberSolution:
    """Leading-order periodic fiber oscillation at frozen x_bar.

    Solves dv/dtau = -grad potential_tilde(x_bar, tau), dx/dtau = v with
    both integration constants fixed by the zero-mean condition, on a
    uniform grid of rule.n_nodes points. Raises when the forcing has a
    nonzero mean (secular drift).
    """
    rule = rule or QuadratureRule()
    x_bar = np.atleast_1d(np.asarray(x_bar, dtype=float))
    n = rule.n_nodes
    tau = np.arange(n) * (TWO_PI / n)
    if problem.grad is not None:
        forcing = np.stack([-np.atleast_1d(np.asarray(
            problem.grad(x_bar, t), dtype=float)) for t in tau])
    else:
        forcing = np.stack([-gradient(
            lambda x, _t=t: problem.potential_tilde(x, _t), x_bar)
            for t in tau])
    v_tilde = periodic_antiderivative_samples(
        forcing, order=1, what="oscillating forcing")
    x_tilde = periodic_antiderivative_samples(
        v_tilde, order=1, what="fiber velocity")
    mean_vv = float(np.mean(np.sum(v_tilde * v_tilde, axis=1)))
    return FiberSolution(tau=tau, v_tilde=v_tilde, x_tilde=x_tilde,
                         mean_vv=mean_vv)


def oscillation_induced_potential(problem: FiberOscillationProblem,
                                  U_slow: Callable[[np.ndarray], float],
                                  x_bar: np.ndarray,
                                  rule: QuadratureRule | None = None
                                  ) -> float:
    """Slow potential plus the kinetic energy stored in fast oscillation.

    Returns U_slow(x_bar) + (eps^2 omega^2 / 4 pi) * integral over one
    period of |v_tilde|^2 dtau, where v_tilde is the zero-mean velocity
    of the leading-order fiber oscillation at frozen x_bar.
    """
    sol = solve_fiber_oscillation(problem, x_bar, rule)
    x_bar = np.atleast_1d(np.asarray(x_bar, dtype=float))
    energy = 0.5 * (problem.epsilon * problem.omega) ** 2 * sol.mean_vv
    return float(U_slow(x_bar)) + energy
