"""Lie-Poisson Euler equations with scalar central extensions.

For a Lie algebra with bracket [e_i, e_j] = sum_k c^k_ij e_k, functions
of the dual variable nu carry the extended Lie-Poisson bracket

    {f, g}(nu) = -<nu, [df, dg]> - sigma(df, dg),

where sigma is an antisymmetric 2-cocycle (the central coordinate is
not evolved: a scalar extension only shifts the bracket). Every
coboundary cocycle sigma_L(X, Y) = -<L, [X, Y]>, i.e. the matrix
sigma_ij = -sum_k L_k c^k_ij, is equivalent to a momentum shift: the
Hamiltonian flow of H = (1/2) <xi, I^{-1} xi> under the extended
bracket coincides with the shifted Euler equation

    dxi/dt = -ad*_{I^{-1} xi} (xi - L),

with the coadjoint action (ad*_X xi)_j = sum_{i,k} xi_k c^k_ij X_i.
On so(3) with L = 0 this is the rigid body: ad*_X xi = xi x X.

Energy, the quadratic Casimirs, and |xi - L|^2 are all quadratic, so
the implicit midpoint rule conserves them to solver tolerance; their
logged drift measures Newton slop rather than method error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .integrators import IntegratorConfig, Trajectory, integrate_autonomous

JACOBI_TOL = 1e-12
COCYCLE_TOL = 1e-12
INERTIA_SYMMETRY_TOL = 1e-14


def _jacobiator(constants: np.ndarray) -> float:
    c = constants
    jac = (np.einsum("ijm,mkl->ijkl", c, c)
           + np.einsum("jkm,mil->ijkl", c, c)
           + np.einsum("kim,mjl->ijkl", c, c))
    return float(np.max(np.abs(jac)))


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants of a finite-dimensional Lie algebra.

    structure_constants[i, j, k] is the e_k coefficient of [e_i, e_j].
    Antisymmetry in (i, j) must hold exactly; the Jacobi identity is
    enforced to 1e-12 at construction.
    """

    dim: int
    structure_constants: np.ndarray
    name: str = "algebra"

    def __post_init__(self) -> None:
        c = np.asarray(self.structure_constants, dtype=float)
        if c.shape != (self.dim, self.dim, self.dim):
            raise ValueError("structure constants must be dim^3")
        object.__setattr__(self, "structure_constants", c)
        if np.any(c + np.transpose(c, (1, 0, 2)) != 0.0):
            raise ValueError(
                "structure constants must be antisymmetric in the lower "
                "indices (exactly)")
        worst = _jacobiator(c)
        if worst > JACOBI_TOL:
            raise ValueError(
                f"Jacobi identity violated: max residual {worst:.3e} "
                f"exceeds {JACOBI_TOL:.1e}")

    def bracket(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        return np.einsum("i,j,ijk->k", X, Y, self.structure_constants)

    def jacobiator(self) -> float:
        return _jacobiator(self.structure_constants)


@dataclass(frozen=True)
class Cocycle:
    """Antisymmetric scalar 2-cocycle sigma(X, Y) = X . sigma_matrix Y."""

    sigma: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.sigma, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("sigma must be a square matrix")
        object.__setattr__(self, "sigma", s)
        if np.any(s + s.T != 0.0):
            raise ValueError("sigma must be antisymmetric (exactly)")

    def __call__(self, X: np.ndarray, Y: np.ndarray) -> float:
        return float(np.asarray(X, dtype=float) @ self.sigma
                     @ np.asarray(Y, dtype=float))


def cocycle_identity_residual(algebra: LieAlgebraData,
                              cocycle: Cocycle) -> float:
    """Max residual of sigma([e_i,e_j], e_k) + cyclic over basis triples."""
    c = algebra.structure_constants
    s = cocycle.sigma
    res = (np.einsum("ijm,mk->ijk", c, s)
           + np.einsum("jkm,mi->ijk", c, s)
           + np.einsum("kim,mj->ijk", c, s))
    return float(np.max(np.abs(res)))


def make_cocycle(algebra: LieAlgebraData, sigma: np.ndarray) -> Cocycle:
    """Validated cocycle: antisymmetric and closed on the given algebra."""
    coc = Cocycle(sigma=np.asarray(sigma, dtype=float))
    worst = cocycle_identity_residual(algebra, coc)
    if worst > COCYCLE_TOL:
        raise ValueError(
            f"cocycle identity violated on {algebra.name}: max residual "
            f"{worst:.3e} exceeds {COCYCLE_TOL:.1e}")
    return coc


def coadjoint_action(algebra: LieAlgebraData, X: np.ndarray,
                     xi: np.ndarray) -> np.ndarray:
    """Coadjoint action (ad*_X xi)_j = sum_{i,k} xi_k c^k_ij X_i.

    Defined by the pairing identity <ad*_X xi, Y> = <xi, [X, Y]>; on
    so(3) it is the cross product xi x X.
    """
    X = np.asarray(X, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return np.einsum("i,ijk,k->j", X, algebra.structure_constants, xi)


def shift_cocycle(algebra: "LieAlgebraData | EulerSystem",
                  shift: np.ndarray | None = None) -> Cocycle:
    """Coboundary cocycle of a momentum shift L.

    sigma_ij = -sum_k L_k c^k_ij, i.e. sigma(X, Y) = -<L, [X, Y]>; it is
    automatically closed (its identity residual is the Jacobiator paired
    with L). Accepts either (algebra, L) or an EulerSystem, whose own
    shift element is used.
    """
    if isinstance(algebra, EulerSystem):
        if shift is not None:
            raise TypeError("pass either an EulerSystem or (algebra, shift)")
        algebra, shift = algebra.algebra, algebra.shift
    elif shift is None:
        raise TypeError("shift is required when passing a bare algebra")
    shift = np.asarray(shift, dtype=float)
    sigma = -np.einsum("ijk,k->ij", algebra.structure_constants, shift)
    sigma = 0.5 * (sigma - sigma.T)
    return make_cocycle(algebra, sigma)


def extended_bracket(algebra: LieAlgebraData, cocycle: Cocycle | None,
                     df: np.ndarray, dg: np.ndarray,
                     nu: np.ndarray) -> float:
    """Extended Lie-Poisson bracket of two linear gradients at nu.

    {f, g}(nu) = -<nu, [df, dg]> - sigma(df, dg). The value is
    antisymmetrized structurally, so swapping df and dg negates it
    exactly (bit for bit), not merely to rounding.
    """
    nu = np.asarray(nu, dtype=float)

    def raw(u, v):
        val = -float(nu @ algebra.bracket(u, v))
        if cocycle is not None:
            val -= cocycle(u, v)
        return val

    return 0.5 * (raw(df, dg) - raw(dg, df))


@dataclass(frozen=True)
class EulerSystem:
    """Euler equation data: algebra, inertia tensor, momentum shift.

    inertia must be symmetric (to 1e-14) and positive definite
    (Cholesky); shift is the momentum offset L. orientation "right"
    flips the sign of the vector field, matching the opposite bracket
    convention.
    """

    algebra: LieAlgebraData
    inertia: np.ndarray
    shift: np.ndarray | None = None
    orientation: Literal["left", "right"] = "left"

    def __post_init__(self) -> None:
        inertia = np.asarray(self.inertia, dtype=float)
        n = self.algebra.dim
        if inertia.shape != (n, n):
            raise ValueError("inertia must be dim x dim")
        asym = float(np.max(np.abs(inertia - inertia.T)))
        if asym > INERTIA_SYMMETRY_TOL:
            raise ValueError(
                f"inertia is not symmetric: max asymmetry {asym:.3e}")
        try:
            np.linalg.cholesky(inertia)
        except np.linalg.LinAlgError as err:
            raise ValueError("inertia is not positive definite") from err
        object.__setattr__(self, "inertia", inertia)
        shift = (np.zeros(n) if self.shift is None
                 else np.asarray(self.shift, dtype=float))
        if shift.shape != (n,):
            raise ValueError("shift must have length dim")
        object.__setattr__(self, "shift", shift)
        if self.orientation not in ("left", "right"):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    def velocity(self, xi: np.ndarray) -> np.ndarray:
        """Angular velocity I^{-1} xi."""
        return np.linalg.solve(self.inertia, np.asarray(xi, dtype=float))

    def energy(self, xi: np.ndarray) -> float:
        xi = np.asarray(xi, dtype=float)
        return float(0.5 * xi @ self.velocity(xi))


def euler_vector_field(system: EulerSystem, xi: np.ndarray) -> np.ndarray:
    """Shifted Euler equation dxi/dt = -ad*_{I^{-1} xi} (xi - L).

    The field is orthogonal to the angular velocity I^{-1} xi, so the
    kinetic energy is conserved at the level of the vector field; with
    orientation "right" the overall sign flips.
    """
    xi = np.asarray(xi, dtype=float)
    v = system.velocity(xi)
    out = -coadjoint_action(system.algebra, v, xi - system.shift)
    return -out if system.orientation == "right" else out


def extended_hamiltonian_field(algebra: LieAlgebraData,
                               cocycle: Cocycle | None,
                               inertia: np.ndarray,
                               xi: np.ndarray) -> np.ndarray:
    """Flow of H = (1/2) <xi, I^{-1} xi> under the extended bracket.

    Component j is {H, xi_j}(xi). For the coboundary cocycle of a shift
    L this reproduces euler_vector_field of the shifted system exactly,
    which is the two-path identity behind the shift-equivalence check.
    """
    xi = np.asarray(xi, dtype=float)
    dh = np.linalg.solve(np.asarray(inertia, dtype=float), xi)
    n = algebra.dim
    out = np.empty(n)
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        out[j] = extended_bracket(algebra, cocycle, dh, e, xi)
    return out


def integrate_euler(system: EulerSystem, xi0: np.ndarray, horizon: float,
                    config: IntegratorConfig) -> Trajectory:
    """Integrate the (shifted) Euler equation and log its invariants.

    Logs energy (1/2) <xi, I^{-1} xi>, the quadratic form |xi|^2 in the
    momentum slot, and |xi - L|^2 as "casimir_shifted"; for so(3)-like
    algebras the latter is the Casimir of the shifted flow. All three
    are quadratic, so implicit midpoint keeps their drift at the Newton
    tolerance.
    """
    xi0 = np.asarray(xi0, dtype=float)
    n = system.algebra.dim
    if xi0.shape != (n,):
        raise ValueError("xi0 must have length dim")
    inertia_inv = np.linalg.inv(system.inertia)
    constants = system.algebra.structure_constants
    shift = system.shift
    sign = -1.0 if system.orientation == "right" else 1.0

    def f(xi: np.ndarray) -> np.ndarray:
        v = inertia_inv @ xi
        eta = xi - shift
        coad = v @ np.tensordot(constants, eta, axes=([2], [0]))
        return -sign * coad

    labels = tuple(f"xi{i + 1}" for i in range(n))
    return integrate_autonomous(
        f, xi0, horizon, config, state_labels=labels, kind="euler",
        dim_base=n,
        energy=lambda z: float(0.5 * z @ inertia_inv @ z),
        logs={"momentum": lambda z: float(z @ z),
              "casimir_shifted": lambda z: float((z - shift) @ (z - shift))},
        meta={"algebra": system.algebra.name,
              "orientation": system.orientation})


# ---------------------------------------------------------------------------
# Built-in algebras and the plain-text loader


def abelian(n: int) -> LieAlgebraData:
    """Abelian algebra R^n (all brackets vanish)."""
    return LieAlgebraData(dim=n, structure_constants=np.zeros((n, n, n)),
                          name=f"abelian({n})")


def so3() -> LieAlgebraData:
    """Rotation algebra so(3): [e1, e2] = e3 and cyclic."""
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    return LieAlgebraData(dim=3, structure_constants=c, name="so3")


def heisenberg3() -> LieAlgebraData:
    """Heisenberg algebra: [e1, e2] = e3, e3 central."""
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    return LieAlgebraData(dim=3, structure_constants=c, name="heisenberg3")


def oscillator4() -> LieAlgebraData:
    """Oscillator algebra: [e1,e2]=e3, [e1,e3]=-e2, [e2,e3]=e4 central."""
    c = np.zeros((4, 4, 4))
    entries = (((0, 1, 2), 1.0), ((0, 2, 1), -1.0), ((1, 2, 3), 1.0))
    for (i, j, k), v in entries:
        c[i, j, k] = v
        c[j, i, k] = -v
    return LieAlgebraData(dim=4, structure_constants=c, name="oscillator4")


BUILTIN_ALGEBRAS: dict[str, Callable[[], LieAlgebraData]] = {
    "abelian3": lambda: abelian(3),
    "so3": so3,
    "heisenberg3": heisenberg3,
    "oscillator4": oscillator4,
}


def load_algebra(text: str, name: str = "algebra") -> LieAlgebraData:
    """Parse structure constants from a plain-text description.

    Format: a `dim N` line, then one `i j k value` row per nonzero
    structure constant c^k_ij with 0-indexed basis labels; `#` starts a
    comment. The antisymmetric mirror of every row is filled in
    automatically, conflicting duplicates are rejected, and the Jacobi
    identity is enforced. All violations are reported together with
    their line numbers.
    """
    errors: list[str] = []
    dim: int | None = None
    rows: list[tuple[int, int, int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if dim is None:
            if parts[0] != "dim" or len(parts) != 2:
                errors.append(f"line {lineno}: expected `dim N`, got {raw!r}")
                continue
            try:
                dim = int(parts[1])
            except ValueError:
                errors.append(f"line {lineno}: bad dimension {parts[1]!r}")
                continue
            if dim < 1:
                errors.append(f"line {lineno}: dimension must be positive")
                dim = None
            continue
        if len(parts) != 4:
            errors.append(
                f"line {lineno}: expected `i j k value`, got {raw!r}")
            continue
        try:
            i, j, k = int(parts[0]), int(parts[1]), int(parts[2])
            value = float(parts[3])
        except ValueError:
            errors.append(f"line {lineno}: could not parse {raw!r}")
            continue
        if not all(0 <= idx < dim for idx in (i, j, k)):
            errors.append(
                f"line {lineno}: index out of range for dim {dim}")
            continue
        if i == j and value != 0.0:
            errors.append(
                f"line {lineno}: [e{i}, e{i}] must vanish, got {value}")
            continue
        rows.append((lineno, i, j, k, value))
    if dim is None and not errors:
        errors.append("missing `dim N` line")
    if errors:
        raise ValueError("invalid algebra file:\n" + "\n".join(errors))

    c = np.zeros((dim, dim, dim))
    seen: dict[tuple[int, int, int], tuple[int, float]] = {}
    for lineno, i, j, k, value in rows:
        for ii, jj, vv in ((i, j, value), (j, i, -value)):
            key = (ii, jj, k)
            if key in seen and seen[key][1] != vv:
                errors.append(
                    f"line {lineno}: c^{k}_{ii}{jj}={vv} conflicts with "
                    f"line {seen[key][0]} ({seen[key][1]})")
            else:
                seen[key] = (lineno, vv)
                c[ii, jj, k] = vv
    if errors:
        raise ValueError("invalid algebra file:\n" + "\n".join(errors))
    try:
        return LieAlgebraData(dim=dim, structure_constants=c, name=name)
    except ValueError as err:
        raise ValueError(f"invalid algebra file: {err}") from err
