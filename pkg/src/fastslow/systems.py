"""Worked fast-slow systems: pendulum, spinning disk, driven particle.

Three mechanisms produce the same averaged structure:

* A pendulum whose suspension point vibrates vertically at frequency
  omega = mu / epsilon. The suspension trick recasts the strong drive
  as a fast fiber with conserved momentum; averaging yields the
  effective potential (1/4) mu^2 amp^2 sin^2(theta) - g l cos(theta),
  which stabilizes the upright position once mu^2 amp^2 > 2 g l.

* A disk spinning fast about its axis while the axis stays normal to a
  curved surface. Reduction by the spin produces a Lorentz-like force
  proportional to the Gaussian curvature of the surface: the force on
  the Euler-Lagrange side is sqrt(a11 a22) mu K [[0, -1], [1, 0]] qdot,
  matching the magnetic chart with B = sqrt(a11 a22) mu K [[0,1],[-1,0]].

* A particle in a rapidly oscillating potential. With V and S the
  zero-mean first and second time-antiderivatives of the oscillating
  part, the slow system sees the corrected potential
  Ubar + (eps^2 mu^2 / 2) <V'.V'> and, at the next order, a magnetic
  vector coefficient mu a0 = -eps^3 mu <S'' V'> (primes are spatial
  derivatives, angle brackets fiber means). The corrected coefficients
  have h0 = 0, so h0 - a0.a0 < 0: this averaged system is not the
  reduction of any Riemannian bundle metric, which is why the sign is
  only diagnosed, never enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._derivatives import (FIRST_ORDER_STEP, SECOND_ORDER_STEP, gradient,
                           hessian, jacobian, step_size)
from .averaging import (AveragedSystem, AveragingError, FastSlowSystem,
                        QuadratureRule, TrigSeries, average_coefficients,
                        periodic_antiderivative_samples)
from .bundle_geometry import TrivialBundleMetric
from .integrators import Trajectory

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Vertically driven pendulum


@dataclass(frozen=True)
class PendulumParams:
    """Pendulum with vertically vibrating suspension.

    length and gravity set the slow pendulum, amplitude the suspension
    stroke (per unit of mu), mu the conserved fast momentum and epsilon
    the timescale ratio; the drive frequency is omega = mu / epsilon.
    """

    length: float = 1.0
    gravity: float = 1.0
    amplitude: float = 0.5
    mu: float = 3.0
    epsilon: float = 5e-3

    def __post_init__(self) -> None:
        for name in ("length", "gravity", "amplitude", "epsilon"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def omega(self) -> float:
        return self.mu / self.epsilon

    @property
    def stability_threshold(self) -> float:
        """Critical mu above which the upright position is stable.

        From (1/2) mu^2 amp^2 = g l: mu* = sqrt(2 g l) / amp.
        """
        return math.sqrt(2.0 * self.gravity * self.length) / self.amplitude


def pendulum_systems(params: PendulumParams,
                     fiber_floor: float = 1.0
                     ) -> tuple[FastSlowSystem, AveragedSystem]:
    """Fast-slow suspension of the driven pendulum and its average.

    Works in the arclength chart x = length * theta. The suspension
    trick adds a fiber circle carrying the drive phase; fiber_floor is
    the x-independent part of the fiber inertia (any positive value
    gives the same slow dynamics because the induced constant potential
    shift is absorbed into U0). The averaged effective potential is

        (1/4) mu^2 amp^2 sin^2(x / l) - g l cos(x / l)

    exactly, for every fiber_floor.
    """
    l = params.length
    g = params.gravity
    amp = params.amplitude
    c = float(fiber_floor)

    def a0(q):
        return np.zeros(1)

    def grad_a0(q):
        return np.zeros((1, 1))

    def h0(q):
        return c + 0.5 * amp ** 2 * math.sin(q[0] / l) ** 2

    def grad_h0(q):
        return np.array([amp ** 2 * math.sin(q[0] / l)
                         * math.cos(q[0] / l) / l])

    def U0(q):
        return -g * l * math.cos(q[0] / l) - 0.5 * params.mu ** 2 * c

    def grad_U0(q):
        return np.array([g * math.sin(q[0] / l)])

    def a1(q, phi):
        return np.array([-amp * math.sin(phi) * math.sin(q[0] / l)])

    def jac_q_a1(q, phi):
        return np.array([[-amp / l * math.sin(phi) * math.cos(q[0] / l)]])

    def dphi_a1(q, phi):
        return np.array([-amp * math.cos(phi) * math.sin(q[0] / l)])

    def h1(q, phi):
        return -0.5 * amp ** 2 * math.cos(2.0 * phi) * math.sin(q[0] / l) ** 2

    def grad_q_h1(q, phi):
        return np.array([-amp ** 2 / l * math.cos(2.0 * phi)
                         * math.sin(q[0] / l) * math.cos(q[0] / l)])

    def dphi_h1(q, phi):
        return amp ** 2 * math.sin(2.0 * phi) * math.sin(q[0] / l) ** 2

    def U1(q, phi):
        return -g * amp * math.cos(phi)

    def grad_q_U1(q, phi):
        return np.zeros(1)

    def dphi_U1(q, phi):
        return g * amp * math.sin(phi)

    system = FastSlowSystem(
        dim_base=1, a0=a0, h0=h0, U0=U0, a1=a1, h1=h1, U1=U1,
        epsilon=params.epsilon, mu=params.mu,
        grad_a0=grad_a0, grad_h0=grad_h0, grad_U0=grad_U0,
        jac_q_a1=jac_q_a1, dphi_a1=dphi_a1, grad_q_h1=grad_q_h1,
        dphi_h1=dphi_h1, grad_q_U1=grad_q_U1, dphi_U1=dphi_U1)
    # Validation samples stay off the zeros of sin(x / l) so that a zero
    # fiber_floor still passes the positivity check.
    samples = [np.array([l * t]) for t in (0.9, 2.0, -1.1, 2.8)]
    averaged = average_coefficients(system, sample_points=samples)
    return system, averaged


def pendulum_fiber_problem(params: PendulumParams):
    """Oscillation problem of the driven pendulum at frozen angle.

    The oscillating potential is -amp * l * cos(x / l) * cos(tau); the
    induced potential of this problem reproduces the suspension result
    (1/4) mu^2 amp^2 sin^2(x / l) on top of the slow -g l cos(x / l).
    """
    from .averaging import FiberOscillationProblem

    l = params.length
    amp = params.amplitude

    def potential_tilde(x, tau):
        return -amp * l * math.cos(x[0] / l) * math.cos(tau)

    def grad(x, tau):
        return np.array([amp * math.sin(x[0] / l) * math.cos(tau)])

    return FiberOscillationProblem(
        potential_tilde=potential_tilde, omega=params.omega,
        epsilon=params.epsilon, grad=grad)


def simulate_physical_pendulum(params: PendulumParams, theta0: float,
                               p0: float, horizon: float | None = None,
                               dt: float | None = None,
                               store_every: int | None = None,
                               stop_when: Callable[[float, float, float],
                                                   bool] | None = None
                               ) -> Trajectory:
    """Integrate the driven pendulum itself, with no averaging.

    The Hamiltonian in physical time is

        H = (p - amp mu l sin(phi) sin(theta))^2 / (2 l^2)
            - g l cos(theta),      phi = omega t,  omega = mu / epsilon,

    i.e. the drive enters at strength O(1/epsilon); this is the system
    the averaged pendulum approximates. Integration is classical RK4
    with dt defaulting to a 64th of the drive period; horizon defaults
    to 1/epsilon. stop_when(t, theta, p) aborts the run early when it
    returns True (the trigger time is stored in meta["stopped_at"]).
    Every accepted step is offered to stop_when even when only each
    store_every-th state is kept.
    """
    l = params.length
    g = params.gravity
    amp = params.amplitude
    omega = params.omega
    if horizon is None:
        horizon = 1.0 / params.epsilon
    if dt is None:
        dt = (TWO_PI / omega) / 64.0
    n_steps = int(math.ceil(horizon / dt - 1e-9))
    if store_every is None:
        store_every = max(1, int(math.ceil(n_steps / 20000)))

    gl = g * l
    inv_l2 = 1.0 / (l * l)
    aml = amp * params.mu * l

    def rhs(theta: float, p: float, phi: float) -> tuple[float, float]:
        sin_phi = math.sin(phi)
        v = (p - aml * sin_phi * math.sin(theta)) * inv_l2
        return v, v * aml * sin_phi * math.cos(theta) - gl * math.sin(theta)

    times = [0.0]
    rows = [(theta0, p0, 0.0)]
    theta, p = float(theta0), float(p0)
    t = 0.0
    stopped_at = None
    for k in range(n_steps):
        step = min(dt, horizon - t)
        phi = omega * t
        k1t, k1p = rhs(theta, p, phi)
        half = 0.5 * step
        k2t, k2p = rhs(theta + half * k1t, p + half * k1p,
                       phi + half * omega)
        k3t, k3p = rhs(theta + half * k2t, p + half * k2p,
                       phi + half * omega)
        k4t, k4p = rhs(theta + step * k3t, p + step * k3p,
                       phi + step * omega)
        theta += step / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        p += step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        t += step
        if not (math.isfinite(theta) and math.isfinite(p)):
            raise RuntimeError(f"pendulum state became non-finite at step {k}")
        if (k + 1) % store_every == 0 or k == n_steps - 1:
            times.append(t)
            rows.append((theta, p, math.fmod(omega * t, TWO_PI)))
        if stop_when is not None and stop_when(t, theta, p):
            stopped_at = t
            if times[-1] != t:
                times.append(t)
                rows.append((theta, p, math.fmod(omega * t, TWO_PI)))
            break

    values = np.array(rows)
    energies = np.empty(values.shape[0])
    for i, (th, pp, ph) in enumerate(rows):
        v = (pp - aml * math.sin(ph) * math.sin(th)) * inv_l2
        energies[i] = 0.5 * l * l * v * v - gl * math.cos(th)
    return Trajectory(
        times=np.array(times), values=values,
        state_labels=("theta", "p_theta", "phi"), kind="pendulum_physical",
        dim_base=1,
        invariant_log={"energy": energies,
                       "momentum": np.zeros(values.shape[0])},
        meta={"omega": omega, "clock": "physical", "stopped_at": stopped_at})


# ---------------------------------------------------------------------------
# Disk spinning over a curved surface


class DomainError(ValueError):
    """A surface operation was asked for a point outside its chart."""


@dataclass(frozen=True)
class SurfaceMetric:
    """Orthogonal surface metric a11 dq1^2 + a22 dq2^2 on a chart.

    d_sqrt_a11 and d_sqrt_a22, when given, return the two partial
    derivatives of sqrt(a11) and sqrt(a22); central differences with
    step 1e-6 * max(1, |q|_inf) fill in otherwise. domain holds the
    closed chart rectangle ((q1_min, q1_max), (q2_min, q2_max)) and
    operations reject points outside it.
    """

    a11: Callable[[np.ndarray], float]
    a22: Callable[[np.ndarray], float]
    d_sqrt_a11: Callable[[np.ndarray], np.ndarray] | None = None
    d_sqrt_a22: Callable[[np.ndarray], np.ndarray] | None = None
    domain: tuple = ((-np.inf, np.inf), (-np.inf, np.inf))
    name: str = "surface"

    def require_in_domain(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        (lo1, hi1), (lo2, hi2) = self.domain
        if not (lo1 <= q[0] <= hi1 and lo2 <= q[1] <= hi2):
            raise DomainError(
                f"point {q} lies outside the declared chart domain "
                f"{self.domain} of {self.name}")
        return q

    def sqrt_a11(self, q: np.ndarray) -> float:
        val = float(self.a11(q))
        if not val > 0.0:
            raise ValueError(f"a11 must be positive, got {val:.3e} at q={q}")
        return math.sqrt(val)

    def sqrt_a22(self, q: np.ndarray) -> float:
        val = float(self.a22(q))
        if not val > 0.0:
            raise ValueError(f"a22 must be positive, got {val:.3e} at q={q}")
        return math.sqrt(val)

    def grad_sqrt_a11(self, q: np.ndarray) -> np.ndarray:
        if self.d_sqrt_a11 is not None:
            return np.asarray(self.d_sqrt_a11(q), dtype=float)
        return gradient(self.sqrt_a11, np.asarray(q, dtype=float))

    def grad_sqrt_a22(self, q: np.ndarray) -> np.ndarray:
        if self.d_sqrt_a22 is not None:
            return np.asarray(self.d_sqrt_a22(q), dtype=float)
        return gradient(self.sqrt_a22, np.asarray(q, dtype=float))


def sphere_surface(radius: float = 1.0) -> SurfaceMetric:
    """Round sphere in colatitude q1 and longitude q2 (poles excluded)."""
    r = float(radius)
    return SurfaceMetric(
        a11=lambda q: r * r,
        a22=lambda q: r * r * math.sin(q[0]) ** 2,
        d_sqrt_a11=lambda q: np.zeros(2),
        d_sqrt_a22=lambda q: np.array([r * math.cos(q[0]), 0.0]),
        domain=((0.02, math.pi - 0.02), (-np.inf, np.inf)),
        name=f"sphere(radius={r})")


def plane_surface() -> SurfaceMetric:
    """Euclidean plane in Cartesian coordinates."""
    return SurfaceMetric(
        a11=lambda q: 1.0, a22=lambda q: 1.0,
        d_sqrt_a11=lambda q: np.zeros(2), d_sqrt_a22=lambda q: np.zeros(2),
        name="plane")


def exponential_surface() -> SurfaceMetric:
    """Metric dq1^2 + e^{2 q1} dq2^2 of constant curvature -1."""
    return SurfaceMetric(
        a11=lambda q: 1.0,
        a22=lambda q: math.exp(2.0 * q[0]),
        d_sqrt_a11=lambda q: np.zeros(2),
        d_sqrt_a22=lambda q: np.array([math.exp(q[0]), 0.0]),
        domain=((-10.0, 10.0), (-np.inf, np.inf)),
        name="exponential")


def gaussian_curvature(surface: SurfaceMetric, q: np.ndarray) -> float:
    """Gaussian curvature of an orthogonal metric.

    K = -(1 / sqrt(a11 a22)) [ d1( d1 sqrt(a22) / sqrt(a11) )
                             + d2( d2 sqrt(a11) / sqrt(a22) ) ].

    The inner first derivatives use the analytic partials when the
    surface carries them; the outer derivatives are always central
    differences with step 1e-5 * max(1, |q|_inf).
    """
    q = surface.require_in_domain(q)

    def r1(x):
        return surface.grad_sqrt_a22(x)[0] / surface.sqrt_a11(x)

    def r2(x):
        return surface.grad_sqrt_a11(x)[1] / surface.sqrt_a22(x)

    h = 1e-5 * max(1.0, float(np.max(np.abs(q))))
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    div = ((r1(q + e1) - r1(q - e1)) + (r2(q + e2) - r2(q - e2))) / (2.0 * h)
    return -div / (surface.sqrt_a11(q) * surface.sqrt_a22(q))


def disk_connection(surface: SurfaceMetric, q: np.ndarray) -> np.ndarray:
    """Base coefficients A(q) of the axis-normal disk connection.

    A = ( d2 sqrt(a11) / sqrt(a22), -d1 sqrt(a22) / sqrt(a11) ), the
    orientation being fixed so that the exterior derivative identity

        d(A . dq) = sqrt(a11 a22) K dq1 ^ dq2

    holds with positively oriented (q1, q2); on the round sphere
    A = (0, -cos q1).
    """
    q = surface.require_in_domain(q)
    return np.array([
        surface.grad_sqrt_a11(q)[1] / surface.sqrt_a22(q),
        -surface.grad_sqrt_a22(q)[0] / surface.sqrt_a11(q),
    ])


def curvature_identity_residual(surface: SurfaceMetric, q: np.ndarray,
                                step: float | None = None) -> float:
    """Residual d(A . dq) - sqrt(a11 a22) K at q (finite differences).

    The curl of the connection is computed with central differences of
    disk_connection, so this is an independent check of the curvature
    rather than a restatement of its formula.
    """
    q = surface.require_in_domain(q)
    h = step if step is not None else 1e-5 * max(1.0, float(np.max(np.abs(q))))
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    curl = ((disk_connection(surface, q + e1)[1]
             - disk_connection(surface, q - e1)[1])
            - (disk_connection(surface, q + e2)[0]
               - disk_connection(surface, q - e2)[0])) / (2.0 * h)
    dens = surface.sqrt_a11(q) * surface.sqrt_a22(q)
    return float(curl - dens * gaussian_curvature(surface, q))


@dataclass(frozen=True)
class DiskParams:
    """Disk of mass m spinning about its surface-normal axis.

    inertia_axial and inertia_diametral are the moments about the spin
    axis and a diameter; omega_axial is the (fast) spin rate, so the
    conserved axial momentum is mu = inertia_axial * omega_axial.
    second_form(q, qdot) -> real adds the quadratic normal-curvature
    contribution of the carrying surface to the kinetic energy; it
    defaults to zero.
    """

    mass: float = 1.0
    inertia_axial: float = 1.0
    inertia_diametral: float = 0.5
    omega_axial: float = 2.0
    second_form: Callable[[np.ndarray, np.ndarray], float] | None = None

    def __post_init__(self) -> None:
        for name in ("mass", "inertia_axial", "inertia_diametral"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def mu(self) -> float:
        return self.inertia_axial * self.omega_axial


def _second_form_matrix(params: DiskParams, q: np.ndarray) -> np.ndarray:
    if params.second_form is None:
        return np.zeros((2, 2))
    f = params.second_form
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    f11 = float(f(q, e1))
    f22 = float(f(q, e2))
    f12 = 0.5 * (float(f(q, e1 + e2)) - f11 - f22)
    return np.array([[f11, f12], [f12, f22]])


def disk_mass_matrix(params: DiskParams, surface: SurfaceMetric,
                     q: np.ndarray) -> np.ndarray:
    """Slow kinetic matrix M(q) = m diag(a11, a22) + I_d * second form."""
    q = np.asarray(q, dtype=float)
    m = params.mass * np.diag([float(surface.a11(q)), float(surface.a22(q))])
    return m + params.inertia_diametral * _second_form_matrix(params, q)


def spinning_disk_rhs(params: DiskParams,
                      surface: SurfaceMetric) -> Callable[[np.ndarray],
                                                          np.ndarray]:
    """Euler-Lagrange vector field of the reduced disk in (q, qdot).

    The slow energy is E0 = (1/2) qdot . M(q) qdot with M the disk mass
    matrix, and reduction by the fast spin adds the gyroscopic force

        sqrt(a11 a22) mu K(q) [[0, -1], [1, 0]] qdot,

    proportional to the Gaussian curvature. The returned callable maps
    z = (q1, q2, u1, u2) to its time derivative; with mu = 0 the flow
    is geodesic for M, and on a flat surface it is straight lines.
    """
    mu = params.mu

    def rhs(z: np.ndarray) -> np.ndarray:
        q = z[:2]
        u = z[2:]
        surface.require_in_domain(q)
        mass = disk_mass_matrix(params, surface, q)
        h = step_size(q)
        dmass = []
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            dmass.append((disk_mass_matrix(params, surface, q + e)
                          - disk_mass_matrix(params, surface, q - e))
                         / (2.0 * h))
        kcurv = gaussian_curvature(surface, q)
        dens = surface.sqrt_a11(q) * surface.sqrt_a22(q)
        force = dens * mu * kcurv * np.array([-u[1], u[0]])
        # d/dt (M u) - (1/2) u . d_i M u = force_i
        quad = 0.5 * np.array([u @ dmass[0] @ u, u @ dmass[1] @ u])
        drift = (u[0] * dmass[0] + u[1] * dmass[1]) @ u
        udot = np.linalg.solve(mass, force + quad - drift)
        return np.concatenate([u, udot])

    return rhs


def disk_momentum(params: DiskParams, surface: SurfaceMetric,
                  q: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Shifted-chart momentum P1 = M(q) u matching spinning_disk_rhs."""
    return disk_mass_matrix(params, surface, np.asarray(q, dtype=float)) \
        @ np.asarray(u, dtype=float)


def disk_reduced_system(params: DiskParams, surface: SurfaceMetric
                        ) -> tuple[AveragedSystem, dict]:
    """Magnetic-chart data equivalent to the Euler-Lagrange disk flow.

    Returns an AveragedSystem shell (it carries mu and the state shape;
    a0, h0, U0 vanish) plus the override callables for
    integrate_reduced_magnetic: kinetic Hamiltonian
    H = (1/2) P1 . M(q)^{-1} P1 and magnetic matrix
    B = sqrt(a11 a22) mu K [[0, 1], [-1, 0]], whose transpose reproduces
    the gyroscopic force of spinning_disk_rhs.
    """
    mu = params.mu

    def minv(q):
        return np.linalg.inv(disk_mass_matrix(params, surface, q))

    def hamiltonian(Q, P1):
        return float(0.5 * P1 @ minv(Q) @ P1)

    def grad_q(Q, P1):
        surface.require_in_domain(Q)
        h = step_size(Q)
        out = np.empty(2)
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            out[i] = (0.5 * P1 @ minv(Q + e) @ P1
                      - 0.5 * P1 @ minv(Q - e) @ P1) / (2.0 * h)
        return out

    def grad_p(Q, P1):
        return minv(Q) @ P1

    def b_field(Q):
        dens = surface.sqrt_a11(Q) * surface.sqrt_a22(Q)
        k = gaussian_curvature(surface, Q)
        return dens * mu * k * np.array([[0.0, 1.0], [-1.0, 0.0]])

    shell = AveragedSystem(
        dim_base=2, a0=lambda q: np.zeros(2), h0=lambda q: 0.0,
        U0=lambda q: 0.0, mu=mu,
        grad_a0=lambda q: np.zeros((2, 2)),
        grad_h0=lambda q: np.zeros(2), grad_U0=lambda q: np.zeros(2))
    overrides = {"hamiltonian": hamiltonian, "grad_q": grad_q,
                 "grad_p": grad_p, "b_field": b_field, "momentum": mu}
    return shell, overrides


# ---------------------------------------------------------------------------
# Particle in a rapidly oscillating potential


@dataclass(frozen=True)
class HarmonicMode:
    """One fiber harmonic c(x) cos(k tau) + s(x) sin(k tau).

    dc, ds are spatial gradients and d2c, d2s spatial Hessians; finite
    differences stand in for missing ones.
    """

    k: int
    c: Callable[[np.ndarray], float]
    s: Callable[[np.ndarray], float]
    dc: Callable[[np.ndarray], np.ndarray] | None = None
    ds: Callable[[np.ndarray], np.ndarray] | None = None
    d2c: Callable[[np.ndarray], np.ndarray] | None = None
    d2s: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("harmonic index k must be a positive integer")

    def grad_c(self, x: np.ndarray) -> np.ndarray:
        if self.dc is not None:
            return np.asarray(self.dc(x), dtype=float)
        return gradient(self.c, x)

    def grad_s(self, x: np.ndarray) -> np.ndarray:
        if self.ds is not None:
            return np.asarray(self.ds(x), dtype=float)
        return gradient(self.s, x)

    def hess_c(self, x: np.ndarray) -> np.ndarray:
        if self.d2c is not None:
            return np.asarray(self.d2c(x), dtype=float)
        return hessian(self.c, x)

    def hess_s(self, x: np.ndarray) -> np.ndarray:
        if self.d2s is not None:
            return np.asarray(self.d2s(x), dtype=float)
        return hessian(self.s, x)


@dataclass(frozen=True)
class OscillatingPotential:
    """Potential U(x, tau), 2*pi-periodic in the fast phase tau.

    fourier_modes, when given, list the oscillating part exactly as
    harmonics; spectral sampling is used otherwise. mean_part is the
    fiber mean Ubar(x) (computed by quadrature when absent) and
    grad_mean its spatial gradient.
    """

    dim_base: int
    U: Callable[[np.ndarray, float], float]
    fourier_modes: tuple[HarmonicMode, ...] | None = None
    mean_part: Callable[[np.ndarray], float] | None = None
    grad_mean: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.dim_base < 1:
            raise ValueError("dim_base must be a positive integer")
        if self.fourier_modes is not None:
            object.__setattr__(self, "fourier_modes",
                               tuple(self.fourier_modes))
        x = np.full(self.dim_base, 0.3)
        gap = abs(float(self.U(x, 0.0)) - float(self.U(x, TWO_PI)))
        if gap > 1e-12:
            raise ValueError(
                f"potential is not 2*pi-periodic in tau: gap {gap:.3e}")

    def mean(self, x: np.ndarray, rule: QuadratureRule | None = None) -> float:
        if self.mean_part is not None:
            return float(self.mean_part(x))
        rule = rule or QuadratureRule()
        nodes, _ = rule.nodes_weights()
        return float(rule.fiber_mean(
            np.array([self.U(x, t) for t in nodes])))


def _oscillating_samples(potential: OscillatingPotential, x: np.ndarray,
                         n: int) -> np.ndarray:
    tau = np.arange(n) * (TWO_PI / n)
    vals = np.array([potential.U(x, t) for t in tau])
    if potential.mean_part is not None:
        vals = vals - float(potential.mean_part(x))
    else:
        vals = vals - np.mean(vals)
    return vals


def zero_mean_antiderivative(potential: OscillatingPotential, x: np.ndarray,
                             order: int = 1,
                             rule: QuadratureRule | None = None
                             ) -> Callable[[float], float]:
    """Zero-mean tau-antiderivative of the oscillating part of U at x.

    order 1 gives V with dV/dtau = U - Ubar, order 2 gives S with
    d^2S/dtau^2 = U - Ubar, both with zero fiber mean. With declared
    Fourier modes the antiderivative is exact per harmonic (for
    U - Ubar = sum c_k cos + s_k sin:
    V = sum (c_k sin - s_k cos) / k, S = -sum (c_k cos + s_k sin) / k^2);
    otherwise it is built spectrally from uniform samples. A residual
    fiber mean above 1e-10 raises, since the antiderivative would then
    grow secularly.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if potential.fourier_modes is not None:
        terms = [(m.k, float(m.c(x)), float(m.s(x)))
                 for m in potential.fourier_modes]

        def anti(tau, _terms=tuple(terms), _order=order):
            tau_arr = np.asarray(tau, dtype=float)
            total = np.zeros_like(tau_arr)
            for k, ck, sk in _terms:
                if _order == 1:
                    total = total + (ck * np.sin(k * tau_arr)
                                     - sk * np.cos(k * tau_arr)) / k
                else:
                    total = total - (ck * np.cos(k * tau_arr)
                                     + sk * np.sin(k * tau_arr)) / (k * k)
            return total if total.ndim else float(total)

        return anti
    rule = rule or QuadratureRule()
    vals = _oscillating_samples(potential, x, rule.n_nodes)
    anti_samples = periodic_antiderivative_samples(
        vals, order=order, what="oscillating potential")
    return TrigSeries.from_samples(anti_samples)


def mean_grad_antiderivative_sq(potential: OscillatingPotential,
                                x: np.ndarray,
                                rule: QuadratureRule | None = None) -> float:
    """Fiber mean of V' . V', with V the first antiderivative of U - Ubar.

    Primes denote spatial gradients. With Fourier modes this is the
    exact sum over harmonics of (|grad c_k|^2 + |grad s_k|^2) / (2 k^2).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if potential.fourier_modes is not None:
        total = 0.0
        for m in potential.fourier_modes:
            dc = m.grad_c(x)
            ds = m.grad_s(x)
            total += (float(dc @ dc) + float(ds @ ds)) / (2.0 * m.k ** 2)
        return total
    rule = rule or QuadratureRule()
    n = rule.n_nodes
    h = step_size(x)
    grads = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        hi = periodic_antiderivative_samples(
            _oscillating_samples(potential, x + e, n), order=1,
            what="oscillating potential")
        lo = periodic_antiderivative_samples(
            _oscillating_samples(potential, x - e, n), order=1,
            what="oscillating potential")
        grads.append((hi - lo) / (2.0 * h))
    vp = np.stack(grads)
    return float(np.mean(np.sum(vp * vp, axis=0)))


def mean_hess_cross_term(potential: OscillatingPotential, x: np.ndarray,
                         rule: QuadratureRule | None = None) -> np.ndarray:
    """Fiber mean of S'' V' (Hessian of S applied to the gradient of V).

    V and S are the zero-mean first and second antiderivatives of
    U - Ubar. With Fourier modes this is the exact per-harmonic sum
    (hess(c_k) grad(s_k) - hess(s_k) grad(c_k)) / (2 k^3); this vector,
    scaled by -eps^3, is the magnetic coefficient a0 of the averaged
    particle.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if potential.fourier_modes is not None:
        total = np.zeros(x.size)
        for m in potential.fourier_modes:
            total = total + (m.hess_c(x) @ m.grad_s(x)
                             - m.hess_s(x) @ m.grad_c(x)) / (2.0 * m.k ** 3)
        return total
    rule = rule or QuadratureRule()
    n = rule.n_nodes
    l = x.size
    h1 = step_size(x)

    def vprime() -> np.ndarray:
        rows = []
        for i in range(l):
            e = np.zeros(l)
            e[i] = h1
            hi = periodic_antiderivative_samples(
                _oscillating_samples(potential, x + e, n), order=1,
                what="oscillating potential")
            lo = periodic_antiderivative_samples(
                _oscillating_samples(potential, x - e, n), order=1,
                what="oscillating potential")
            rows.append((hi - lo) / (2.0 * h1))
        return np.stack(rows)

    def s_at(pt: np.ndarray) -> np.ndarray:
        return periodic_antiderivative_samples(
            _oscillating_samples(potential, pt, n), order=2,
            what="oscillating potential")

    h2 = step_size(x, SECOND_ORDER_STEP)
    s0 = s_at(x)
    spp = np.empty((l, l, n))
    for i in range(l):
        ei = np.zeros(l)
        ei[i] = h2
        spp[i, i] = (s_at(x + ei) - 2.0 * s0 + s_at(x - ei)) / (h2 * h2)
        for j in range(i + 1, l):
            ej = np.zeros(l)
            ej[j] = h2
            mixed = (s_at(x + ei + ej) - s_at(x + ei - ej)
                     - s_at(x - ei + ej) + s_at(x - ei - ej)) / (4.0 * h2 * h2)
            spp[i, j] = spp[j, i] = mixed
    vp = vprime()
    return np.mean(np.einsum("ikn,kn->in", spp, vp), axis=1)


def oscillating_particle_averaged(potential: OscillatingPotential,
                                  epsilon: float, mu: float,
                                  rule: QuadratureRule | None = None
                                  ) -> tuple[AveragedSystem, dict]:
    """Averaged system of a particle in a strongly oscillating potential.

    The slow Hamiltonian keeps the fiber-mean potential plus the
    oscillation-induced correction,

        U0 = Ubar + (eps^2 mu^2 / 2) <V' . V'>,

    and acquires the magnetic coefficient mu a0 = -eps^3 mu <S'' V'>
    (h0 = 0: the correction enters the potential once, through U0).
    The reference data dict carries the raw means plus the matching
    bundle quantities: fiber_inertia 1 / (eps^2 <V'.V'>) and connection
    +eps^3 <S'' V'>.
    """
    if not epsilon > 0.0:
        raise ValueError("epsilon must be positive")
    rule = rule or QuadratureRule()
    eps = float(epsilon)

    def ubar(x):
        return potential.mean(np.atleast_1d(np.asarray(x, dtype=float)), rule)

    def mean_vv(x):
        return mean_grad_antiderivative_sq(potential, x, rule)

    def mean_sv(x):
        return mean_hess_cross_term(potential, x, rule)

    def U0(x):
        return ubar(x) + 0.5 * eps ** 2 * mu ** 2 * mean_vv(x)

    def a0(x):
        return -eps ** 3 * mean_sv(x)

    def h0(x):
        return 0.0

    samples = [np.full(potential.dim_base, v) for v in (0.4, 0.9, -1.2)]
    inertia_min = min(-float(a0(x) @ a0(x)) for x in samples)
    diagnostics = {
        "inertia_inverse_min": inertia_min,
        "sample_points": samples,
        "note": "h0 - a0.a0 <= 0: no Riemannian bundle realization",
    }
    averaged = AveragedSystem(
        dim_base=potential.dim_base, a0=a0, h0=h0, U0=U0, mu=mu,
        grad_h0=lambda x: np.zeros(potential.dim_base),
        diagnostics=diagnostics)
    reference = {
        "slow_mean": ubar,
        "mean_grad_sq": mean_vv,
        "mean_cross": mean_sv,
        "fiber_inertia": lambda x: 1.0 / (eps ** 2 * mean_vv(x)),
        "connection": lambda x: eps ** 3 * mean_sv(x),
    }
    return averaged, reference


def particle_invariant_metric(potential: OscillatingPotential,
                              epsilon: float,
                              rule: QuadratureRule | None = None,
                              sample_points: Sequence = ()
                              ) -> TrivialBundleMetric:
    """Bundle metric whose reduction matches the averaged particle.

    The fiber inertia is 1 / (eps^2 <V'.V'>) and the connection
    coefficient +eps^3 <S'' V'>; the metric is positive definite because
    h |a|^2 = O(eps^4) stays far below one.
    """
    rule = rule or QuadratureRule()
    eps = float(epsilon)

    def a(q, phi):
        return eps ** 3 * mean_hess_cross_term(potential, q, rule)

    def h(q, phi):
        return 1.0 / (eps ** 2
                      * mean_grad_antiderivative_sq(potential, q, rule))

    return TrivialBundleMetric(dim_base=potential.dim_base, a=a, h=h,
                               sample_points=tuple(sample_points))


def particle_systems(potential: OscillatingPotential, epsilon: float,
                     mu: float = 1.0
                     ) -> tuple[FastSlowSystem, AveragedSystem]:
    """Weakly forced suspension of the oscillating particle.

    The oscillating part of the potential enters at order eps (U1 =
    U - Ubar), so averaging keeps only Ubar: this is the regime of the
    closeness theorem, where the eps^2 and eps^3 corrections of
    oscillating_particle_averaged are below the theorem's own accuracy
    and are dropped.
    """
    l = potential.dim_base

    def ubar(q):
        return potential.mean(q)

    grad_ubar = potential.grad_mean or (lambda q: gradient(ubar, q))

    def U1(q, phi):
        return float(potential.U(q, phi)) - float(ubar(q))

    if potential.fourier_modes is not None:
        modes = potential.fourier_modes

        def grad_q_U1(q, phi):
            total = np.zeros(l)
            for m in modes:
                total = total + (m.grad_c(q) * math.cos(m.k * phi)
                                 + m.grad_s(q) * math.sin(m.k * phi))
            return total

        def dphi_U1(q, phi):
            total = 0.0
            for m in modes:
                total += m.k * (-float(m.c(q)) * math.sin(m.k * phi)
                                + float(m.s(q)) * math.cos(m.k * phi))
            return total
    else:
        grad_q_U1 = None
        dphi_U1 = None

    system = FastSlowSystem(
        dim_base=l,
        a0=lambda q: np.zeros(l), h0=lambda q: 1.0, U0=ubar,
        a1=lambda q, phi: np.zeros(l), h1=lambda q, phi: 0.0, U1=U1,
        epsilon=float(epsilon), mu=float(mu),
        grad_a0=lambda q: np.zeros((l, l)),
        grad_h0=lambda q: np.zeros(l), grad_U0=grad_ubar,
        jac_q_a1=lambda q, phi: np.zeros((l, l)),
        dphi_a1=lambda q, phi: np.zeros(l),
        grad_q_h1=lambda q, phi: np.zeros(l),
        dphi_h1=lambda q, phi: 0.0,
        grad_q_U1=grad_q_U1, dphi_U1=dphi_U1)
    averaged = average_coefficients(system)
    return system, averaged


def particle_potential_1d(trap: float = 1.0, alpha: float = 0.7,
                          beta: float = 0.4) -> OscillatingPotential:
    """1-d trap with one oscillating harmonic pair.

    U = (1/2) trap x^2 + alpha sin(x) cos(tau) + beta cos(x) sin(tau).
    """

    def c(x):
        return alpha * math.sin(x[0])

    def s(x):
        return beta * math.cos(x[0])

    mode = HarmonicMode(
        k=1, c=c, s=s,
        dc=lambda x: np.array([alpha * math.cos(x[0])]),
        ds=lambda x: np.array([-beta * math.sin(x[0])]),
        d2c=lambda x: np.array([[-alpha * math.sin(x[0])]]),
        d2s=lambda x: np.array([[-beta * math.cos(x[0])]]))

    return OscillatingPotential(
        dim_base=1,
        U=lambda x, tau: (0.5 * trap * x[0] ** 2 + c(x) * math.cos(tau)
                          + s(x) * math.sin(tau)),
        fourier_modes=(mode,),
        mean_part=lambda x: 0.5 * trap * x[0] ** 2,
        grad_mean=lambda x: np.array([trap * x[0]]))


def particle_potential_2d(trap: float = 1.0, alpha: float = 0.7,
                          beta: float = 0.4) -> OscillatingPotential:
    """2-d trap whose oscillating harmonics carry a nonzero cross term.

    U = (1/2) trap |x|^2 + f(x) cos(tau) + g(x) sin(tau) with
    f = alpha sin(x1 + 0.3 x2) and g = beta cos(0.7 x1 - x2); the
    resulting <S'' V'> has a curl, so the averaged magnetic form is
    nonzero.
    """
    w1 = np.array([1.0, 0.3])
    w2 = np.array([0.7, -1.0])

    def c(x):
        return alpha * math.sin(float(w1 @ x))

    def s(x):
        return beta * math.cos(float(w2 @ x))

    mode = HarmonicMode(
        k=1, c=c, s=s,
        dc=lambda x: alpha * math.cos(float(w1 @ x)) * w1,
        ds=lambda x: -beta * math.sin(float(w2 @ x)) * w2,
        d2c=lambda x: -alpha * math.sin(float(w1 @ x)) * np.outer(w1, w1),
        d2s=lambda x: -beta * math.cos(float(w2 @ x)) * np.outer(w2, w2))

    return OscillatingPotential(
        dim_base=2,
        U=lambda x, tau: (0.5 * trap * float(x @ x) + c(x) * math.cos(tau)
                          + s(x) * math.sin(tau)),
        fourier_modes=(mode,),
        mean_part=lambda x: 0.5 * trap * float(x @ x),
        grad_mean=lambda x: trap * np.asarray(x, dtype=float))


def uniform_field_averaged(strength: float = 0.8,
                           mu: float = 1.0) -> AveragedSystem:
    """Averaged system of a charge in a uniform magnetic field.

    a0 = (-b Q2 / 2, b Q1 / 2) gives the constant magnetic matrix
    B = mu b [[0, 1], [-1, 0]]; h0 = a0 . a0 makes the effective
    potential vanish, so magnetic-chart orbits are circles of Larmor
    radius |P1| / (mu b).
    """
    b = float(strength)

    def a0(q):
        return np.array([-0.5 * b * q[1], 0.5 * b * q[0]])

    return AveragedSystem(
        dim_base=2, a0=a0,
        h0=lambda q: 0.25 * b * b * float(q @ q),
        U0=lambda q: 0.0, mu=float(mu),
        grad_a0=lambda q: np.array([[0.0, 0.5 * b], [-0.5 * b, 0.0]]),
        grad_h0=lambda q: 0.5 * b * b * np.asarray(q, dtype=float),
        grad_U0=lambda q: np.zeros(2))


# ---------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class ExampleInfo:
    """CLI-addressable example with its documented parameter schema."""

    name: str
    summary: str
    parameters: tuple[tuple[str, str, str], ...]


REGISTRY: dict[str, ExampleInfo] = {
    "pendulum": ExampleInfo(
        name="pendulum",
        summary="vertically driven pendulum via the suspension trick",
        parameters=(
            ("length", "1.0", "pendulum length"),
            ("gravity", "1.0", "gravitational acceleration"),
            ("amplitude", "0.5", "suspension stroke per unit mu"),
            ("mu", "3.0", "conserved fast momentum (drive = mu/epsilon)"),
            ("fiber_floor", "1.0", "constant part of the fiber inertia"),
            ("theta0", "2.0", "initial angle"),
            ("p0", "0.0", "initial angular momentum"),
        )),
    "disk": ExampleInfo(
        name="disk",
        summary="disk spinning about the normal of a curved surface",
        parameters=(
            ("surface", "sphere", "sphere | plane | exponential"),
            ("radius", "1.0", "sphere radius (sphere only)"),
            ("mass", "1.0", "disk mass"),
            ("inertia_axial", "1.0", "moment about the spin axis"),
            ("inertia_diametral", "0.5", "moment about a diameter"),
            ("omega_axial", "2.0", "spin rate (mu = inertia_axial * rate)"),
            ("q1_0", "1.0471975511965976", "initial q1"),
            ("q2_0", "0.0", "initial q2"),
            ("u1_0", "0.1", "initial q1 velocity"),
            ("u2_0", "0.5", "initial q2 velocity"),
            ("horizon", "10.0", "integration time"),
        )),
    "particle": ExampleInfo(
        name="particle",
        summary="particle in a rapidly oscillating potential",
        parameters=(
            ("trap", "1.0", "harmonic trap stiffness"),
            ("alpha", "0.7", "cos(tau) harmonic amplitude"),
            ("beta", "0.4", "sin(tau) harmonic amplitude"),
            ("mu", "1.0", "conserved fast momentum"),
            ("x0", "0.8", "initial position"),
            ("p0", "0.3", "initial momentum"),
        )),
}
