"""Uncoupled classical trajectories of the coherent-state labels.

Each label obeys ``i dz/dt = dH/dzc`` evaluated at ``(conj(z), z)``, which is
Hamilton's equations written in the complex variable.  All labels are
advanced together with fixed-step RK4; nothing couples them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["TrajectorySet", "eom_rhs", "rk4_step", "step", "propagate", "energies"]


def energies(labels, ham):
    """Classical energies ``H(conj(z), z)`` (real part) of each label."""
    z = np.asarray(labels, dtype=complex)
    return np.real(ham.h(np.conj(z), z))


@dataclass(frozen=True)
class TrajectorySet:
    """Labels at time ``t`` plus their energies at ``t = 0``."""

    labels: np.ndarray
    t: float = 0.0
    energies: np.ndarray | None = None

    @classmethod
    def start(cls, labels, ham, t=0.0):
        z = np.atleast_1d(np.array(labels, dtype=complex))
        if z.size < 1:
            raise ValueError("need at least one label")
        return cls(labels=z, t=t, energies=energies(z, ham))


def eom_rhs(z, ham):
    """Label velocity ``dz/dt = -i dH/dzc``."""
    z = np.asarray(z, dtype=complex)
    d_zc, _ = ham.grad(np.conj(z), z)
    return -1j * d_zc


def rk4_step(f, y, dt):
    """One classic Runge-Kutta step of the autonomous system ``y' = f(y)``."""
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(traj: TrajectorySet, dt: float, ham) -> TrajectorySet:
    if not dt > 0:
        raise ValueError("dt must be positive")
    z = rk4_step(lambda y: eom_rhs(y, ham), traj.labels, dt)
    return TrajectorySet(labels=z, t=traj.t + dt, energies=traj.energies)


def propagate(traj: TrajectorySet, dt: float, n_steps: int, ham, stride: int = 1):
    """Advance ``n_steps`` RK4 steps; return the start plus every ``stride``-th state.

    Negative ``dt`` is allowed here and integrates backwards in time (used
    for time-reversal checks).
    """
    if dt == 0 or n_steps < 1:
        raise ValueError("need dt != 0 and n_steps >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    rhs = lambda y: eom_rhs(y, ham)  # noqa: E731
    z = traj.labels
    out = [traj]
    for i in range(1, n_steps + 1):
        z = rk4_step(rhs, z, dt)
        if i % stride == 0 or i == n_steps:
            out.append(TrajectorySet(labels=z, t=traj.t + i * dt, energies=traj.energies))
    return out
