"""Split-operator FFT solver for the 1-d Schroedinger equation.

Serves as the converged grid reference for the CCS runs.  The grid is
periodic, ``x_j = -L + j * 2L/N``; wavefunctions must vanish at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import WellParams

__all__ = [
    "ReferenceState",
    "SplitOperator",
    "SplittingNotConverged",
    "init_gaussian",
    "step_split",
    "propagate_reference",
    "correlation_reference",
    "energy_expectation",
    "tunneling_splitting",
]

DEFAULT_GRID = (10.0, 512)


class SplittingNotConverged(RuntimeError):
    pass


def _grid(L, N):
    dx = 2.0 * L / N
    x = -L + dx * np.arange(N)
    k = 2.0 * np.pi * np.fft.fftfreq(N, d=dx)
    return x, k, dx


def _potential_values(potential, x):
    if hasattr(potential, "potential"):
        return np.asarray(potential.potential(x), dtype=float)
    if callable(potential):
        return np.asarray(potential(x), dtype=float)
    v = np.asarray(potential, dtype=float)
    if v.shape != x.shape:
        raise ValueError("potential array does not match the grid")
    return v


@dataclass(frozen=True)
class ReferenceState:
    L: float
    N: int
    psi: np.ndarray
    t: float = 0.0

    @property
    def x(self):
        return _grid(self.L, self.N)[0]

    @property
    def dx(self):
        return 2.0 * self.L / self.N

    def norm(self):
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)

    def inner(self, other):
        """Grid approximation of ``<self|other>``."""
        return complex(np.vdot(self.psi, other) * self.dx)


def gaussian_on_grid(x, q, p):
    return np.pi**-0.25 * np.exp(-0.5 * (x - q) ** 2 + 1j * p * (x - 0.5 * q))


def init_gaussian(center_q, center_p, grid=DEFAULT_GRID, tail_tol=1e-12) -> ReferenceState:
    """Unit-width Gaussian wavepacket centered at ``(center_q, center_p)``."""
    L, N = grid
    N = int(N)
    if N < 2 or N & (N - 1):
        raise ValueError(f"N must be a power of two, got {N}")
    x, _, dx = _grid(L, N)
    psi = gaussian_on_grid(x, center_q, center_p)
    # probability density of the packet at the nearer edge
    tail = np.pi**-0.5 * np.exp(-((L - abs(center_q)) ** 2))
    if tail > tail_tol:
        raise ValueError(
            f"Gaussian density {tail:.2e} at the grid edge exceeds {tail_tol:g}; enlarge L"
        )
    psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    return ReferenceState(L=float(L), N=N, psi=psi)


class SplitOperator:
    """Precomputed Strang factors for a fixed grid, potential and time step.

    With ``imaginary=True`` the factors are the real decays of imaginary-time
    propagation and the caller is responsible for renormalizing.
    """

    def __init__(self, L, N, dt, potential, imaginary=False):
        self.x, self.k, self.dx = _grid(L, N)
        self.L, self.N, self.dt = L, N, dt
        self.v = _potential_values(potential, self.x)
        kin = 0.5 * self.k**2
        if imaginary:
            self.half_kinetic = np.exp(-0.5 * dt * kin)
            self.potential_phase = np.exp(-dt * self.v)
        else:
            self.half_kinetic = np.exp(-0.5j * dt * kin)
            self.potential_phase = np.exp(-1j * dt * self.v)

    def step(self, psi):
        psi = np.fft.ifft(self.half_kinetic * np.fft.fft(psi))
        psi = self.potential_phase * psi
        return np.fft.ifft(self.half_kinetic * np.fft.fft(psi))

    def evolve(self, psi, n_steps):
        # merge adjacent half kinetic steps: one fft pair per step
        if n_steps < 1:
            return psi
        full_kinetic = self.half_kinetic**2
        phi = self.half_kinetic * np.fft.fft(psi)
        for _ in range(n_steps - 1):
            phi = full_kinetic * np.fft.fft(self.potential_phase * np.fft.ifft(phi))
        phi = np.fft.fft(self.potential_phase * np.fft.ifft(phi))
        return np.fft.ifft(self.half_kinetic * phi)


def step_split(state: ReferenceState, dt: float, potential) -> ReferenceState:
    """One Strang step: half kinetic, full potential, half kinetic.

    ``potential`` is a callable ``V(x)``, an object with a ``potential``
    method (e.g. :class:`~ccs_tunneling.model.WellParams`, which gives the
    plain double well), or an array of grid values.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    op = SplitOperator(state.L, state.N, dt, potential)
    return replace(state, psi=op.step(state.psi), t=state.t + dt)


def propagate_reference(state: ReferenceState, dt, n_steps, potential, stride=1):
    """Return the initial state and every ``stride``-th state after it."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    op = SplitOperator(state.L, state.N, dt, potential)
    out = [state]
    psi = state.psi
    done = 0
    while done < n_steps:
        m = min(stride, n_steps - done)
        psi = op.evolve(psi, m)
        done += m
        out.append(replace(state, psi=psi, t=state.t + done * dt))
    return out


def _steps_for(times, dt):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(np.diff(times) < 0) or (times.size and times[0] < 0):
        raise ValueError("times must be a non-negative increasing sequence")
    steps = np.rint(times / dt).astype(int)
    if not np.allclose(steps * dt, times, rtol=0, atol=1e-9 * max(1.0, times.max(initial=0.0))):
        raise ValueError("times must be integer multiples of dt")
    return steps


def correlation_reference(state0: ReferenceState, beta_center, times, dt, potential):
    """``<beta|psi(t)>`` on the grid at each requested time."""
    steps = _steps_for(times, dt)
    op = SplitOperator(state0.L, state0.N, dt, potential)
    beta = gaussian_on_grid(op.x, *beta_center)
    out = np.empty(steps.size, dtype=complex)
    psi = state0.psi
    done = 0
    for i, s in enumerate(steps):
        psi = op.evolve(psi, s - done)
        done = s
        out[i] = np.vdot(beta, psi) * op.dx
    return out


def energy_expectation(psi, x, k, v):
    """``<psi|H|psi>/<psi|psi>`` with the kinetic part applied spectrally."""
    kin = np.fft.ifft(0.5 * k**2 * np.fft.fft(psi))
    num = np.vdot(psi, kin + v * psi).real
    return num / np.vdot(psi, psi).real


def _parity(psi):
    # x_j -> -x_j maps index j to (N - j) mod N on this grid
    return np.roll(psi[::-1], 1)


def _relax(op, psi, sign, tol, max_time):
    steps_per_check = max(1, int(round(1.0 / op.dt)))
    e_old = None
    n_checks = int(np.ceil(max_time))
    for _ in range(n_checks):
        psi = op.evolve(psi, steps_per_check)
        psi = 0.5 * (psi + sign * _parity(psi))
        psi = psi / np.sqrt(np.vdot(psi, psi).real * op.dx)
        e = energy_expectation(psi, op.x, op.k, op.v)
        if e_old is not None and abs(e - e_old) <= tol * abs(e):
            return e, psi
        e_old = e
    raise SplittingNotConverged(
        f"{'even' if sign > 0 else 'odd'} state not converged within imaginary time {max_time}"
    )


def tunneling_splitting(
    ham=None,
    grid=DEFAULT_GRID,
    dt=1e-3,
    center=None,
    tol=1e-12,
    max_time=200.0,
):
    """Lowest even and odd eigenvalues by imaginary-time relaxation.

    A Gaussian at ``center`` (default: the right minimum of the plain double
    well) is split into its even and odd parts, and each part is relaxed
    separately, so the odd part converges to the first excited state without
    any orthogonalization against the ground state.  Iteration stops once the
    energy changes by at most ``tol`` (relative) per unit imaginary time.

    Returns
    -------
    E1, E2, Delta : float
    """
    if ham is None:
        ham = WellParams(1.0)
    if center is None:
        center = np.sqrt(ham.a / ham.b) if isinstance(ham, WellParams) else 1.0
    L, N = grid
    op = SplitOperator(L, int(N), dt, ham, imaginary=True)
    psi0 = gaussian_on_grid(op.x, center, 0.0)
    e1, _ = _relax(op, psi0, +1.0, tol, max_time)
    e2, _ = _relax(op, psi0, -1.0, tol, max_time)
    return e1, e2, e2 - e1
