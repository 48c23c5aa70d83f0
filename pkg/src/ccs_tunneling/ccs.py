"""Coupled coherent states: variational coefficients on classical labels.

The wavefunction is ``sum_l a_l |z_l(t)>``.  Labels follow the classical
flow (see :mod:`ccs_tunneling.classical`); the coefficients obey

    i (G + eps I) da/dt = ((G + eps I) * B) a,

with ``G`` the Gram matrix, ``B`` the bracket of the CCS matrix elements and
``*`` the element-wise product (for ``eps = 0`` the right-hand side is
``Ht a`` with ``Ht`` from :func:`ccs_tunneling.coherent.htilde_matrix`).
The overlap factor is regularized on both sides, so adding a constant to the
Hamiltonian changes ``a`` by a global phase for any ``eps``.  Everything is
rebuilt at every RK4 stage from the stage's label positions, so labels and
coefficients share one time grid.

:func:`propagate_ccs` integrates in a frame rotating at a reference energy
``e_ref`` (by default the energy of the initial state) and restores the
phase analytically; a constant shift of the Hamiltonian then leaves the
integrated numbers unchanged up to rounding.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .classical import eom_rhs
from .coherent import gram, htilde_apply, htilde_matrix, overlap

__all__ = [
    "CCSState",
    "CCSSolveError",
    "NormDriftError",
    "initial_state",
    "assemble",
    "coeff_rhs",
    "propagate_ccs",
    "energy",
    "norm",
    "cross_correlation",
]

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-8


class CCSSolveError(RuntimeError):
    """The regularized overlap system could not be solved."""

    def __init__(self, message, condition):
        super().__init__(f"{message} (condition number ~ {condition:.3e})")
        self.condition = condition


class NormDriftError(RuntimeError):
    """Norm of the CCS wavefunction left the allowed band."""

    def __init__(self, t, value, tolerance):
        super().__init__(
            f"norm drifted to {value:.6f} at t={t:.6g} (allowed |N - N0| <= {tolerance:g})"
        )
        self.t = t
        self.value = value
        self.tolerance = tolerance


@dataclass(frozen=True)
class CCSState:
    t: float
    labels: np.ndarray
    a: np.ndarray


def initial_state(labels, occupied: int, t: float = 0.0) -> CCSState:
    """Put unit weight on label ``occupied`` and zero on all others."""
    z = np.atleast_1d(np.array(labels, dtype=complex))
    if not isinstance(occupied, (int, np.integer)) or not 0 <= occupied < z.size:
        raise IndexError(f"occupied index {occupied!r} out of range for {z.size} labels")
    a = np.zeros(z.size, dtype=complex)
    a[occupied] = 1.0
    return CCSState(t=t, labels=z, a=a)


def assemble(labels, ham):
    """Return ``(G, Ht)`` for the given labels."""
    z = np.atleast_1d(np.asarray(labels, dtype=complex))
    g = gram(z)
    return g, htilde_matrix(z, ham, omega=g)


def _solve(g, rhs, eps):
    lhs = g
    if eps:
        lhs = g.copy()
        lhs.flat[:: g.shape[0] + 1] += eps
    try:
        x = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise CCSSolveError(f"overlap solve failed: {exc}", np.linalg.cond(lhs)) from exc
    if not np.all(np.isfinite(x)):
        raise CCSSolveError("overlap solve produced non-finite values", np.linalg.cond(lhs))
    return x


def coeff_rhs(state: CCSState, ham, eps: float = DEFAULT_EPS, zdot=None, e_ref: float = 0.0):
    """Coefficient derivatives at ``state``.

    Solves ``(G + eps I) x = -i ((G + eps I) * B) a`` by LU factorization.
    ``zdot`` switches on the velocity substitution in the matrix elements
    (see :func:`~ccs_tunneling.coherent.htilde_matrix`).  A non-zero
    ``e_ref`` gives the derivative in the frame rotating at that energy.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    g = gram(state.labels)
    hta = htilde_apply(state.labels, ham, state.a, omega=g, zdot=zdot, e_ref=e_ref, eps=eps)
    return _solve(g, -1j * hta, eps)


def energy(state: CCSState, ham) -> float:
    """Quantum energy expectation ``<Psi|H|Psi>/<Psi|Psi>``."""
    z = state.labels
    g = gram(z)
    hmat = g * ham.h(np.conj(z)[:, None], z[None, :])
    return float(np.real(np.vdot(state.a, hmat @ state.a)) / _norm(g, state.a))


def _norm(g, a):
    return float(np.real(np.vdot(a, g @ a)))


def norm(state: CCSState) -> float:
    """``conj(a) . G . a``; the imaginary part is rounding noise and dropped."""
    return _norm(gram(state.labels), state.a)


def cross_correlation(state: CCSState, beta) -> complex:
    """``<beta|Psi> = sum_l a_l <beta|z_l>``."""
    return complex(np.sum(state.a * overlap(beta, state.labels)))


def propagate_ccs(
    state: CCSState,
    ham,
    dt: float,
    n_steps: int,
    eps: float = DEFAULT_EPS,
    stride: int = 1,
    max_norm_drift: float | None = 0.1,
    use_velocity: bool = False,
    e_ref: float | None = None,
):
    """Propagate labels and coefficients together with RK4.

    Parameters
    ----------
    state : CCSState
    ham : Hamiltonian object with ``h`` and ``grad``
    dt : float
        Time step, shared by labels and coefficients.
    n_steps : int
    eps : float
        Diagonal shift added to the Gram matrix before every solve.
    stride : int
        Keep every ``stride``-th state (the initial and final states are
        always kept).
    max_norm_drift : float or None
        Raise :class:`NormDriftError` once ``|N(t) - N(0)|`` exceeds this.
        ``None`` disables the check.
    use_velocity : bool
        Replace ``dH/dzc`` in the matrix elements by ``i dz/dt``.
    e_ref : float, optional
        Energy of the rotating frame; defaults to :func:`energy` of the
        initial state.  ``0`` integrates the bare equations.

    Returns
    -------
    list of CCSState
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if n_steps < 1 or stride < 1:
        raise ValueError("n_steps and stride must be >= 1")
    if eps < 0:
        raise ValueError("eps must be non-negative")

    if e_ref is None:
        e_ref = energy(state, ham)

    def rhs(z, a):
        zd = eom_rhs(z, ham)
        g = gram(z)
        hta = htilde_apply(
            z, ham, a, omega=g, zdot=zd if use_velocity else None, e_ref=e_ref, eps=eps
        )
        return zd, _solve(g, -1j * hta, eps), g

    def phase(i):
        return np.exp(-1j * e_ref * i * dt)

    z = state.labels
    a = state.a
    n0 = norm(state)
    out = [state]
    for i in range(1, n_steps + 1):
        k1z, k1a, g = rhs(z, a)
        if max_norm_drift is not None and i > 1:
            n = _norm(g, a)
            if abs(n - n0) > max_norm_drift:
                raise NormDriftError(state.t + (i - 1) * dt, n, max_norm_drift)
        k2z, k2a, _ = rhs(z + 0.5 * dt * k1z, a + 0.5 * dt * k1a)
        k3z, k3a, _ = rhs(z + 0.5 * dt * k2z, a + 0.5 * dt * k2a)
        k4z, k4a, _ = rhs(z + dt * k3z, a + dt * k3a)
        z = z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        a = a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        if i % stride == 0 or i == n_steps:
            out.append(CCSState(t=state.t + i * dt, labels=z, a=a * phase(i)))
    if max_norm_drift is not None:
        n = norm(out[-1])
        if abs(n - n0) > max_norm_drift:
            raise NormDriftError(out[-1].t, n, max_norm_drift)
    logger.debug("propagated %d labels over %d steps", z.size, n_steps)
    return out
