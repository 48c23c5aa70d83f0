"""Coherent-state algebra on unit-width Gaussians.

A label ``z`` is a complex number (or an array of them); the corresponding
normalized state is ``|z> = exp(-|z|**2/2) exp(z a^dagger) |0>``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "label_from_qp",
    "qp_from_label",
    "overlap",
    "gram",
    "htilde",
    "htilde_matrix",
    "htilde_apply",
    "position_amplitude",
]

_SQRT2 = np.sqrt(2.0)
_PI_QUARTER = np.pi**-0.25


def label_from_qp(q, p):
    """Map phase-space points to complex labels, ``z = (q + i p)/sqrt(2)``."""
    return (np.asarray(q) + 1j * np.asarray(p)) / _SQRT2


def qp_from_label(z):
    z = np.asarray(z)
    return _SQRT2 * z.real, _SQRT2 * z.imag


def overlap(zk, zl):
    """``<zk|zl> = exp(-(|zk|**2 + |zl|**2)/2 + conj(zk) zl)``; broadcasts."""
    zk = np.asarray(zk)
    zl = np.asarray(zl)
    return np.exp(-0.5 * (np.abs(zk) ** 2 + np.abs(zl) ** 2) + np.conj(zk) * zl)


@lru_cache(maxsize=16)
def _upper(m):
    return np.triu_indices(m, 1)


def gram(labels):
    """Overlap (Gram) matrix ``G[k, l] = <z_k|z_l>`` of a 1-d label array.

    Only the strict upper triangle is exponentiated; the rest follows from
    Hermiticity and the unit diagonal, both of which hold exactly.
    """
    z = np.atleast_1d(np.asarray(labels, dtype=complex))
    m = z.size
    rows, cols = _upper(m)
    half_norm = 0.5 * (z.real**2 + z.imag**2)
    upper = np.exp(np.conj(z[rows]) * z[cols] - half_norm[rows] - half_norm[cols])
    g = np.empty((m, m), dtype=complex)
    g[rows, cols] = upper
    g[cols, rows] = np.conj(upper)
    g[np.diag_indices(m)] = 1.0
    return g


def htilde(zk, zl, ham):
    """Single CCS matrix element between labels ``zk`` and ``zl``.

    The derivative terms are evaluated on trajectory ``l``, i.e. at
    ``(conj(zl), zl)``.  ``ham`` is anything with ``h(zc, z)`` and
    ``grad(zc, z)`` (e.g. :class:`~ccs_tunneling.model.WellParams`).
    """
    zlc = np.conj(zl)
    d_zc, d_z = ham.grad(zlc, zl)
    bracket = ham.h(np.conj(zk), zl) - 0.5 * (zl * d_z - d_zc * zlc) - np.conj(zk) * d_zc
    return overlap(zk, zl) * bracket


def _label_gradients(z, zc, ham, zdot):
    if zdot is None:
        return ham.grad(zc, z)
    d_zc = 1j * np.asarray(zdot)
    return d_zc, np.conj(d_zc)


def htilde_matrix(labels, ham, omega=None, zdot=None, eps=0.0):
    """Assemble all CCS matrix elements at once.

    Parameters
    ----------
    labels : (M,) complex array
    ham : Hamiltonian object
    omega : (M, M) complex array, optional
        Precomputed Gram matrix of ``labels``.
    zdot : (M,) complex array, optional
        Label velocities.  When given, ``dH/dzc`` on each trajectory is taken
        as ``1j * zdot`` and ``dH/dz`` as its conjugate, instead of evaluating
        the gradient.
    eps : float
        Diagonal shift of the overlap factor: returns
        ``(omega + eps I) * bracket`` (element-wise), matching a regularized
        overlap matrix on the left-hand side.

    Returns
    -------
    (M, M) complex array
    """
    z = np.atleast_1d(np.asarray(labels, dtype=complex))
    zc = np.conj(z)
    if omega is None:
        omega = gram(z)
    d_zc, d_z = _label_gradients(z, zc, ham, zdot)
    bracket = ham.h(zc[:, None], z[None, :])
    bracket -= (0.5 * (z * d_z - d_zc * zc))[None, :]
    bracket -= np.multiply.outer(zc, d_zc)
    out = omega * bracket
    if eps:
        out[np.diag_indices_from(out)] += eps * np.diag(bracket)
    return out


def htilde_apply(labels, ham, a, omega=None, zdot=None, e_ref=0.0, eps=0.0):
    """Matrix-vector product with the CCS matrix, without forming it.

    Computes ``(omega + eps I) * (bracket - e_ref)`` applied to ``a``, i.e.
    ``htilde_matrix(labels, ham, eps=eps) @ a - e_ref * (omega + eps I) @ a``.

    Needs ``ham.coefficients()``: the kernel is then a polynomial
    ``sum C[m, n] zc**m z**n`` and the element-wise product with the Gram
    matrix collapses to one product of ``omega`` with an ``(M, deg + 1)``
    block.  Falls back to the explicit matrix for other Hamiltonians.
    """
    z = np.atleast_1d(np.asarray(labels, dtype=complex))
    a = np.asarray(a)
    if omega is None:
        omega = gram(z)
    zc = np.conj(z)
    d_zc, d_z = _label_gradients(z, zc, ham, zdot)
    column = 0.5 * (z * d_z - d_zc * zc) + e_ref
    if eps:
        diag = ham.h(zc, z) - column - zc * d_zc
    if not hasattr(ham, "coefficients"):
        ht = htilde_matrix(z, ham, omega=omega, zdot=zdot)
        out = ht @ a - e_ref * (omega @ a)
    else:
        c = np.asarray(ham.coefficients())
        powers = np.vander(z, c.shape[1], increasing=True)
        u = (powers @ c.T) * a[:, None]
        # column-only and rank-one parts of the bracket
        u[:, 0] -= column * a
        u[:, 1] -= d_zc * a
        w = omega @ u
        out = np.sum(np.vander(zc, c.shape[0], increasing=True) * w, axis=1)
    if eps:
        out = out + eps * diag * a
    return out


def position_amplitude(x, z):
    """Position representation of ``|z>``.

    ``pi**-0.25 exp(-(x - q)**2/2 + i p (x - q/2))`` with ``(q, p)`` the
    phase-space center of ``z``.  The ``-q/2`` phase matches the overlap
    convention of :func:`overlap`.
    """
    q, p = qp_from_label(z)
    x = np.asarray(x)
    return _PI_QUARTER * np.exp(-0.5 * (x - q) ** 2 + 1j * p * (x - 0.5 * q))
