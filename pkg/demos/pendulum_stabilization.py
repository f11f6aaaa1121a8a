"""Dynamic stabilization of the inverted Kapitza pendulum.

Sweeps the drive strength mu across the stabilization threshold
mu^2 a^2 = 2 g l and reports how far the pendulum strays from the
upright position theta = pi over the slow horizon t = 1/eps. The
effective potential develops a local minimum at the top exactly when
the drive is strong enough.
"""

import numpy as np

from fastslow import PendulumParams, simulate_physical_pendulum

LENGTH = 1.0
GRAVITY = 1.0
AMPLITUDE = 0.5
EPSILON = 5e-3
THETA0 = np.pi + 0.05
DEPARTURE = 0.3
MU_VALUES = (1.5, 2.0, 2.5, 2.83, 3.0, 4.0)


def main():
    threshold = np.sqrt(2.0 * GRAVITY * LENGTH) / AMPLITUDE
    print(f"drive threshold mu* = sqrt(2 g l)/a = {threshold:.4f}")
    print(f"initial angle theta0 = pi + {THETA0 - np.pi:.2f}, "
          f"horizon t = 1/eps = {1.0 / EPSILON:.0f}")
    print()
    print(f"{'mu':>6}  {'max |theta - pi|':>18}  outcome")
    for mu in MU_VALUES:
        params = PendulumParams(length=LENGTH, gravity=GRAVITY,
                                amplitude=AMPLITUDE, mu=mu, epsilon=EPSILON)
        traj = simulate_physical_pendulum(
            params, THETA0, 0.0, horizon=1.0 / EPSILON, store_every=50,
            stop_when=lambda t, theta, p: abs(theta - np.pi) >= DEPARTURE)
        deviation = float(np.max(np.abs(traj.values[:, 0] - np.pi)))
        stopped = traj.meta["stopped_at"]
        if stopped is None:
            outcome = "stays upright"
        else:
            outcome = f"falls away at t = {stopped:.2f}"
        print(f"{mu:6.2f}  {deviation:18.4f}  {outcome}")


if __name__ == "__main__":
    main()
