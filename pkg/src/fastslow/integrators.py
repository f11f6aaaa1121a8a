"""Symplectic-leaning time integration and closeness diagnostics.

The full fast-oscillating system is integrated in its own fast time tau,
but every trajectory reports the slow time t = eps * tau in its time
column, so full and reduced runs share a clock. Reduced systems are
integrated directly in slow time with the eps-free vector fields

    canonical chart:  dQ/dt = P + mu a0(Q)
                      dP/dt = -d_Q (mu a0 . P + (1/2) mu^2 h0 + U0)
    magnetic chart:   dQ/dt = P1
                      dP1/dt = -grad Ubar_mu(Q) + B(Q)^T P1

with B_ij = mu (d_i a0_j - d_j a0_i). The default method is the
implicit midpoint rule with a full Newton solve per step (central-
difference Jacobians, warm-started by linear extrapolation); classical
RK4 is available as a non-symplectic reference.

closeness_report measures sup_{t in [0, min(horizons, 1)]} of the
deviations |q - Q|, |p - P|, |gamma - mu| between a full trajectory and
a reduced one started from matching initial data; the averaging theorem
bounds the sum by a constant times eps on that window, and halving eps
should roughly halve the sup error. The constant itself is never
asserted, only the observed ratios.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from ._derivatives import jacobian, gradient
from .averaging import AveragedSystem, FastSlowSystem, averaged_hamiltonian, \
    effective_potential, magnetic_form
from .bundle_geometry import PhaseStateFull, PhaseStateReduced, convert_chart

TWO_PI = 2.0 * np.pi
IC_MATCH_TOL = 1e-12
HORIZON_FACTOR_MAX = 10.0


class IntegrationError(RuntimeError):
    """Raised when a time step cannot be completed."""

    def __init__(self, message: str, step: int | None = None) -> None:
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class IntegratorConfig:
    """Step-size and solver settings for the time steppers.

    dt is measured in fast time tau for the full system and in slow time
    t for reduced systems. newton_tol bounds the max-norm residual of
    the implicit midpoint solve and must lie in (0, 1e-6].
    """

    method: Literal["implicit_midpoint", "rk4"] = "implicit_midpoint"
    dt: float = 1e-2
    newton_tol: float = 1e-12
    newton_max_iter: int = 50

    def __post_init__(self) -> None:
        if self.method not in ("implicit_midpoint", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if not (0.0 < self.newton_tol <= 1e-6):
            raise ValueError("newton_tol must lie in (0, 1e-6]")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be at least 1")


@dataclass
class Trajectory:
    """Sampled trajectory with per-node conserved-quantity logs.

    times is strictly increasing and measured in the slow clock (or the
    system's own physical clock for standalone simulations); values has
    one state per row. derivs stores the state derivative in the same
    clock as times, for use by cubic Hermite interpolation. The
    invariant_log always carries "energy" and "momentum" arrays aligned
    with times; integrate_full additionally logs "phi_dot".
    """

    times: np.ndarray
    values: np.ndarray
    state_labels: tuple[str, ...]
    kind: str
    dim_base: int
    derivs: np.ndarray | None = None
    invariant_log: dict = field(default_factory=dict)
    chart: str | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.times.size:
            raise ValueError("values must have one row per time node")
        if self.values.shape[1] != len(self.state_labels):
            raise ValueError("state_labels must match the state width")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0.0):
            raise ValueError("times must be strictly increasing")
        if self.derivs is not None:
            self.derivs = np.asarray(self.derivs, dtype=float)
            if self.derivs.shape != self.values.shape:
                raise ValueError("derivs must match the shape of values")

    def __len__(self) -> int:
        return self.times.size

    def state(self, i: int):
        """Node i as a typed phase state (full and reduced kinds only)."""
        row = self.values[i]
        if self.kind == "full":
            return PhaseStateFull.from_array(row, self.dim_base)
        if self.kind.startswith("reduced"):
            return PhaseStateReduced.from_array(
                row, self.dim_base, chart=self.chart or "canonical")
        raise ValueError(f"kind {self.kind!r} has no typed state view")

    @property
    def states(self) -> list:
        return [self.state(i) for i in range(len(self))]


def _rk4_step(f, z: np.ndarray, dt: float,
              k1: np.ndarray | None = None) -> np.ndarray:
    k1 = f(z) if k1 is None else k1
    k2 = f(z + 0.5 * dt * k1)
    k3 = f(z + 0.5 * dt * k2)
    k4 = f(z + dt * k3)
    return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _midpoint_step(f, z: np.ndarray, dt: float, guess: np.ndarray,
                   tol: float, max_iter: int) -> np.ndarray:
    """One implicit midpoint step z' = z + dt f((z + z')/2) by Newton."""
    scale = max(1.0, float(np.max(np.abs(z))))
    znew = guess
    eye = np.eye(z.size)
    for _ in range(max_iter):
        mid = 0.5 * (z + znew)
        res = znew - z - dt * f(mid)
        if float(np.max(np.abs(res))) <= tol * scale:
            return znew
        jac = eye - 0.5 * dt * jacobian(f, mid).T
        znew = znew - np.linalg.solve(jac, res)
        if not np.all(np.isfinite(znew)):
            raise IntegrationError("Newton iterate became non-finite")
    res = float(np.max(np.abs(znew - z - dt * f(0.5 * (z + znew)))))
    raise IntegrationError(
        f"implicit midpoint Newton did not converge: residual {res:.3e} "
        f"after {max_iter} iterations (tol {tol:.1e})")


def _step_sequence(horizon: float, dt: float) -> list[float]:
    n = int(np.floor(horizon / dt + 1e-9))
    steps = [dt] * n
    rem = horizon - n * dt
    if rem > 1e-12 * max(1.0, horizon):
        steps.append(rem)
    return steps


def integrate_autonomous(f: Callable[[np.ndarray], np.ndarray],
                         z0: np.ndarray,
                         horizon: float,
                         config: IntegratorConfig,
                         *,
                         state_labels: Sequence[str],
                         kind: str,
                         dim_base: int,
                         energy: Callable[[np.ndarray], float] | None = None,
                         logs: dict | None = None,
                         chart: str | None = None,
                         meta: dict | None = None,
                         backward: bool = False) -> Trajectory:
    """Integrate dz/dt = f(z) over [0, horizon] and log invariants.

    With backward=True the steps are taken with -dt (the reported times
    still increase from 0), which together with a forward run forms the
    time-reversal test of the symmetric midpoint rule. logs maps extra
    invariant names to per-state callables.
    """
    z0 = np.asarray(z0, dtype=float)
    if not horizon > 0.0:
        raise ValueError("horizon must be positive")
    sign = -1.0 if backward else 1.0
    steps = _step_sequence(horizon, config.dt)
    values = np.empty((len(steps) + 1, z0.size))
    times = np.empty(len(steps) + 1)
    values[0] = z0
    times[0] = 0.0
    z = z0
    z_prev = None
    dt_prev = None
    t = 0.0
    for i, dt in enumerate(steps):
        dt_signed = sign * dt
        try:
            if config.method == "rk4":
                znew = _rk4_step(f, z, dt_signed)
            else:
                if z_prev is None:
                    guess = z + dt_signed * f(z)
                else:
                    guess = z + (dt / dt_prev) * (z - z_prev)
                znew = _midpoint_step(f, z, dt_signed, guess,
                                      config.newton_tol,
                                      config.newton_max_iter)
        except IntegrationError as err:
            raise IntegrationError(
                f"step {i} (t={t:.6g}): {err}", step=i) from err
        if not np.all(np.isfinite(znew)):
            raise IntegrationError(
                f"step {i} (t={t:.6g}): state became non-finite", step=i)
        z_prev, dt_prev = z, dt
        z = znew
        t += dt
        values[i + 1] = z
        times[i + 1] = t
    derivs = np.empty_like(values)
    for i in range(values.shape[0]):
        derivs[i] = sign * f(values[i])
    invariant_log = {}
    if energy is not None:
        invariant_log["energy"] = np.array(
            [energy(values[i]) for i in range(values.shape[0])])
    for name, fn in (logs or {}).items():
        invariant_log[name] = np.array(
            [fn(values[i]) for i in range(values.shape[0])])
    return Trajectory(times=times, values=values,
                      state_labels=tuple(state_labels), kind=kind,
                      dim_base=dim_base, derivs=derivs,
                      invariant_log=invariant_log, chart=chart,
                      meta=dict(meta or {}))


def _full_rhs(system: FastSlowSystem) -> Callable[[np.ndarray], np.ndarray]:
    l = system.dim_base
    eps = system.epsilon
    ga0 = system.grad_a0 or (lambda q: jacobian(system.a0, q))
    ga1 = system.jac_q_a1 or (
        lambda q, phi: jacobian(lambda x: system.a1(x, phi), q))
    gh0 = system.grad_h0 or (lambda q: gradient(system.h0, q))
    gh1 = system.grad_q_h1 or (
        lambda q, phi: gradient(lambda x: system.h1(x, phi), q))
    gU0 = system.grad_U0 or (lambda q: gradient(system.U0, q))
    gU1 = system.grad_q_U1 or (
        lambda q, phi: gradient(lambda x: system.U1(x, phi), q))

    def _dphi(fn, q, phi):
        h = 1e-6
        hi = np.asarray(fn(q, phi + h), dtype=float)
        lo = np.asarray(fn(q, phi - h), dtype=float)
        return (hi - lo) / (2.0 * h)

    da1 = system.dphi_a1 or (lambda q, phi: _dphi(system.a1, q, phi))
    dh1 = system.dphi_h1 or (lambda q, phi: float(_dphi(system.h1, q, phi)))
    dU1 = system.dphi_U1 or (lambda q, phi: float(_dphi(system.U1, q, phi)))

    def rhs(z: np.ndarray) -> np.ndarray:
        q = z[:l]
        p = z[l:2 * l]
        phi = z[2 * l]
        gam = z[2 * l + 1]
        a = (np.asarray(system.a0(q), dtype=float)
             + eps * np.asarray(system.a1(q, phi), dtype=float))
        h = float(system.h0(q)) + eps * float(system.h1(q, phi))
        dq = eps * (p + gam * a)
        dphi = float(a @ p) + h * gam
        jac_a = (np.asarray(ga0(q), dtype=float)
                 + eps * np.asarray(ga1(q, phi), dtype=float))
        grad_h = (np.asarray(gh0(q), dtype=float)
                  + eps * np.asarray(gh1(q, phi), dtype=float))
        grad_U = (np.asarray(gU0(q), dtype=float)
                  + eps * np.asarray(gU1(q, phi), dtype=float))
        dp = -eps * (gam * (jac_a @ p) + 0.5 * gam * gam * grad_h + grad_U)
        dgam = -eps * (gam * float(np.asarray(da1(q, phi)) @ p)
                       + 0.5 * gam * gam * float(dh1(q, phi))
                       + float(dU1(q, phi)))
        out = np.empty(2 * l + 2)
        out[:l] = dq
        out[l:2 * l] = dp
        out[2 * l] = dphi
        out[2 * l + 1] = dgam
        return out

    return rhs


def full_velocities(system: FastSlowSystem,
                    state: PhaseStateFull) -> tuple[np.ndarray, float]:
    """Mixed-clock velocities (u, xi) of a full state.

    u = p + gamma a(q, phi) is the base velocity in the slow clock and
    xi = a . p + h gamma the fiber velocity dphi/dtau in the fast clock;
    these are the velocity slots at which the bundle momentum map
    reproduces gamma.
    """
    a = system.a(state.q, state.phi)
    h = system.h(state.q, state.phi)
    u = state.p + state.gamma * a
    xi = float(a @ state.p) + h * state.gamma
    return u, xi


def integrate_full(system: FastSlowSystem, state0: PhaseStateFull,
                   horizon: float, config: IntegratorConfig,
                   backward: bool = False) -> Trajectory:
    """Integrate the full system over fast time [0, horizon].

    horizon and config.dt are measured in the fast time tau and horizon
    may not exceed 10 / epsilon; the returned time column is the slow
    time t = eps * tau. Energy, the fiber momentum gamma, and the fiber
    speed dphi/dtau are logged at every node. The stored phi column is
    wrapped to [0, 2*pi).
    """
    eps = system.epsilon
    if horizon > HORIZON_FACTOR_MAX / eps * (1.0 + 1e-9):
        raise ValueError(
            f"horizon {horizon:.6g} exceeds the supported bound "
            f"10/epsilon = {HORIZON_FACTOR_MAX / eps:.6g}")
    l = system.dim_base
    f = _full_rhs(system)
    labels = tuple([f"q{i + 1}" for i in range(l)]
                   + [f"p{i + 1}" for i in range(l)] + ["phi", "gamma"])

    def energy(z: np.ndarray) -> float:
        return system.hamiltonian(z[:l], z[l:2 * l], z[2 * l], z[2 * l + 1])

    traj = integrate_autonomous(
        f, state0.as_array(), horizon, config, state_labels=labels,
        kind="full", dim_base=l, energy=energy,
        logs={"momentum": lambda z: z[2 * l + 1]},
        meta={"epsilon": eps, "mu": system.mu, "clock": "slow (t = eps tau)"},
        backward=backward)
    traj.invariant_log["phi_dot"] = traj.derivs[:, 2 * l].copy()
    traj.times = eps * traj.times
    traj.derivs = traj.derivs / eps
    traj.values[:, 2 * l] = np.mod(traj.values[:, 2 * l], TWO_PI)
    return traj


def integrate_reduced_canonical(avg: AveragedSystem,
                                state0: PhaseStateReduced, horizon: float,
                                config: IntegratorConfig,
                                backward: bool = False) -> Trajectory:
    """Integrate the averaged system in the canonical chart.

    horizon and config.dt are measured directly in the slow time t; the
    eps prefactors of the slow equations are absorbed by that clock
    change, so no epsilon enters. The averaged energy is logged, and the
    momentum log holds the constant mu (exactly, since mu is a parameter
    of the flow rather than an evolving state).
    """
    state0 = convert_chart(state0, avg.a0, avg.mu, "canonical")
    l = avg.dim_base
    mu = avg.mu
    ga0 = avg.grad_a0 or (lambda q: jacobian(avg.a0, q))
    gh0 = avg.grad_h0 or (lambda q: gradient(avg.h0, q))
    gU0 = avg.grad_U0 or (lambda q: gradient(avg.U0, q))

    def f(z: np.ndarray) -> np.ndarray:
        Q = z[:l]
        P = z[l:]
        a0 = np.asarray(avg.a0(Q), dtype=float)
        dQ = P + mu * a0
        dP = -(mu * (np.asarray(ga0(Q), dtype=float) @ P)
               + 0.5 * mu * mu * np.asarray(gh0(Q), dtype=float)
               + np.asarray(gU0(Q), dtype=float))
        return np.concatenate([dQ, dP])

    labels = tuple([f"Q{i + 1}" for i in range(l)]
                   + [f"P{i + 1}" for i in range(l)])
    return integrate_autonomous(
        f, state0.as_array(), horizon, config, state_labels=labels,
        kind="reduced_canonical", dim_base=l,
        energy=lambda z: averaged_hamiltonian(avg, z[:l], z[l:]),
        logs={"momentum": lambda z: mu},
        chart="canonical", meta={"mu": mu, "clock": "slow"},
        backward=backward)


def integrate_reduced_magnetic(avg: AveragedSystem,
                               state0: PhaseStateReduced, horizon: float,
                               config: IntegratorConfig,
                               *,
                               hamiltonian: Callable | None = None,
                               grad_q: Callable | None = None,
                               grad_p: Callable | None = None,
                               b_field: Callable | None = None,
                               momentum: float | None = None,
                               backward: bool = False) -> Trajectory:
    """Integrate the averaged system in the magnetic (shifted) chart.

    The state is (Q, P1) with P1 = P + mu a0(Q) and the default flow is

        dQ/dt = P1,   dP1/dt = -grad Ubar_mu(Q) + B(Q)^T P1,

    a Lorentz force with magnetic matrix B. The kinetic term, forces and
    field can all be overridden (hamiltonian, grad_q, grad_p, b_field)
    for reductions whose kinetic energy is not (1/2)|P1|^2, e.g. a disk
    rolling its axis over a curved surface; overrides take the pair
    (Q, P1). momentum overrides the constant logged in the momentum slot.
    """
    state0 = convert_chart(state0, avg.a0, avg.mu, "magnetic")
    l = avg.dim_base
    mu = avg.mu

    if grad_q is None:
        if (avg.grad_h0 is not None and avg.grad_U0 is not None
                and avg.grad_a0 is not None):
            def grad_q(Q, P1):
                a0 = np.asarray(avg.a0(Q), dtype=float)
                ga0 = np.asarray(avg.grad_a0(Q), dtype=float)
                return (0.5 * mu * mu * (np.asarray(avg.grad_h0(Q), dtype=float)
                                         - 2.0 * (ga0 @ a0))
                        + np.asarray(avg.grad_U0(Q), dtype=float))
        else:
            def grad_q(Q, P1):
                return gradient(lambda x: effective_potential(avg, x), Q)
    if grad_p is None:
        def grad_p(Q, P1):
            return P1
    if b_field is None:
        def b_field(Q):
            return magnetic_form(avg, Q)
    if hamiltonian is None:
        def hamiltonian(Q, P1):
            return float(0.5 * (P1 @ P1) + effective_potential(avg, Q))

    def f(z: np.ndarray) -> np.ndarray:
        Q = z[:l]
        P1 = z[l:]
        v = np.asarray(grad_p(Q, P1), dtype=float)
        dP1 = (-np.asarray(grad_q(Q, P1), dtype=float)
               + np.asarray(b_field(Q), dtype=float).T @ v)
        return np.concatenate([v, dP1])

    mom = mu if momentum is None else float(momentum)
    labels = tuple([f"Q{i + 1}" for i in range(l)]
                   + [f"P1_{i + 1}" for i in range(l)])
    return integrate_autonomous(
        f, state0.as_array(), horizon, config, state_labels=labels,
        kind="reduced_magnetic", dim_base=l,
        energy=lambda z: float(hamiltonian(z[:l], z[l:])),
        logs={"momentum": lambda z: mom},
        chart="magnetic", meta={"mu": mu, "clock": "slow"},
        backward=backward)


def hermite_interpolate(times: np.ndarray, values: np.ndarray,
                        derivs: np.ndarray,
                        t_query: np.ndarray) -> np.ndarray:
    """Cubic Hermite interpolation of sampled values with derivatives."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    derivs = np.asarray(derivs, dtype=float)
    t_query = np.atleast_1d(np.asarray(t_query, dtype=float))
    if times.size < 2:
        return np.repeat(values[:1], t_query.size, axis=0)
    idx = np.clip(np.searchsorted(times, t_query, side="right") - 1,
                  0, times.size - 2)
    t0 = times[idx]
    t1 = times[idx + 1]
    h = t1 - t0
    s = ((t_query - t0) / h)[:, None]
    y0 = values[idx]
    y1 = values[idx + 1]
    d0 = derivs[idx] * h[:, None]
    d1 = derivs[idx + 1] * h[:, None]
    s2 = s * s
    s3 = s2 * s
    return ((2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1)


@dataclass(frozen=True)
class ClosenessReport:
    """Sup-norm deviations between a full and a reduced trajectory.

    Errors are measured over slow times t in [0, min(horizons, 1)],
    i.e. fast times up to 1/eps; horizon records the fast-time length
    actually compared. ratio_table rows hold epsilon, the total sup
    error |q-Q| + |p-P| + |gamma-mu|, and the ratio of the previous
    row's error to this row's (populated by closeness_sweep).
    """

    sup_error_q: float
    sup_error_p: float
    sup_error_gamma: float
    sup_error_total: float
    horizon: float
    epsilon: float
    ratio_table: tuple = ()


def closeness_report(full: Trajectory, reduced: Trajectory,
                     system: FastSlowSystem) -> ClosenessReport:
    """Compare a full trajectory against a reduced one.

    Initial conditions must match to 1e-12 ((q, p)(0) = (Q, P)(0) and
    gamma(0) = mu). The reduced trajectory is converted to the canonical
    chart if needed and cubic-Hermite interpolated to the full
    trajectory's time nodes; deviations use the Euclidean norm per node.
    """
    if full.kind != "full" or not reduced.kind.startswith("reduced"):
        raise ValueError("closeness_report takes one full and one reduced "
                         "trajectory")
    l = system.dim_base
    mu = system.mu
    eps = system.epsilon

    red_values = reduced.values
    red_derivs = reduced.derivs
    if reduced.chart == "magnetic":
        ga0 = system.grad_a0 or (lambda q: jacobian(system.a0, q))
        red_values = red_values.copy()
        red_derivs = red_derivs.copy()
        for i in range(red_values.shape[0]):
            Q = red_values[i, :l]
            shift = mu * np.asarray(system.a0(Q), dtype=float)
            red_values[i, l:] -= shift
            red_derivs[i, l:] -= mu * (np.asarray(ga0(Q), dtype=float).T
                                       @ red_derivs[i, :l])

    dq0 = float(np.max(np.abs(full.values[0, :l] - red_values[0, :l])))
    dp0 = float(np.max(np.abs(full.values[0, l:2 * l] - red_values[0, l:2 * l])))
    dg0 = abs(full.values[0, 2 * l + 1] - mu)
    if max(dq0, dp0, dg0) > IC_MATCH_TOL:
        raise ValueError(
            "initial conditions do not match: |q0-Q0|=%.3e, |p0-P0|=%.3e, "
            "|gamma0-mu|=%.3e exceed 1e-12" % (dq0, dp0, dg0))

    s_cap = min(full.times[-1], reduced.times[-1], 1.0)
    mask = full.times <= s_cap * (1.0 + 1e-12) + 1e-300
    t_cmp = full.times[mask]
    interp = hermite_interpolate(reduced.times, red_values, red_derivs, t_cmp)
    fq = full.values[mask, :l]
    fp = full.values[mask, l:2 * l]
    fg = full.values[mask, 2 * l + 1]
    err_q = np.sqrt(np.sum((fq - interp[:, :l]) ** 2, axis=1))
    err_p = np.sqrt(np.sum((fp - interp[:, l:]) ** 2, axis=1))
    err_g = np.abs(fg - mu)
    total = float(np.max(err_q + err_p + err_g))
    report = ClosenessReport(
        sup_error_q=float(np.max(err_q)), sup_error_p=float(np.max(err_p)),
        sup_error_gamma=float(np.max(err_g)), sup_error_total=total,
        horizon=float(s_cap / eps), epsilon=eps,
        ratio_table=({"epsilon": eps, "sup_error": total, "ratio": None},))
    return report


def closeness_sweep(build: Callable[[float], tuple],
                    epsilons: Sequence[float],
                    config_full: IntegratorConfig,
                    config_reduced: IntegratorConfig,
                    horizon_slow: float = 1.0) -> list[ClosenessReport]:
    """Run full-versus-reduced comparisons across an epsilon sweep.

    build(eps) returns (system, averaged, full_state0, reduced_state0).
    Each epsilon is integrated to the slow time horizon_slow (fast time
    horizon_slow / eps for the full system) and the shared ratio table,
    with successive error ratios, is attached to every report. For data
    within the averaging regime the ratios should sit near 2 when the
    sweep halves epsilon.
    """
    reports = []
    for eps in epsilons:
        system, avg, s_full, s_red = build(eps)
        full = integrate_full(system, s_full, horizon_slow / eps, config_full)
        red = integrate_reduced_canonical(avg, s_red, horizon_slow,
                                          config_reduced)
        reports.append(closeness_report(full, red, system))
    table = []
    for i, rep in enumerate(reports):
        ratio = (None if i == 0
                 else reports[i - 1].sup_error_total / rep.sup_error_total)
        table.append({"epsilon": rep.epsilon,
                      "sup_error": rep.sup_error_total, "ratio": ratio})
    table = tuple(table)
    return [dataclasses.replace(rep, ratio_table=table) for rep in reports]
