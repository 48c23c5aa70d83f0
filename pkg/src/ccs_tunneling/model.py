"""Quartic double well: plain and normal-ordered Hamiltonians.

Units are dimensionless with hbar = m = omega = 1.  The complex phase-space
variable is ``z = (q + i p) / sqrt(2)``; holomorphic Hamiltonians take the pair
``(zc, z)`` where ``zc`` plays the role of ``conj(z)`` but is treated as an
independent argument.

The normal-ordered kernel :func:`h_ord` drops the constant barrier offset, so
on the physical slice ``h_ord(conj(z), z) + D == p**2/2 + potential_ordered(q)``.
A constant only rotates the global phase of the wavefunction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WellParams",
    "Landmarks",
    "HarmonicOscillator",
    "ShiftedHamiltonian",
    "potential_plain",
    "potential_ordered",
    "h_ord",
    "grad_h_ord",
    "landmarks",
    "separatrix_points",
]


@dataclass(frozen=True)
class WellParams:
    """Barrier height ``D`` and the quartic coefficients derived from it.

    ``a = 1/2`` and ``b = 1/(16 D)`` make the curvature at both minima unity
    and the barrier height equal to ``D``.
    """

    D: float = 1.0
    a: float = field(init=False)
    b: float = field(init=False)

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError(f"barrier height D must be positive, got {self.D!r}")
        object.__setattr__(self, "a", 0.5)
        object.__setattr__(self, "b", 1.0 / (16.0 * self.D))

    # Hamiltonian interface shared with HarmonicOscillator, used by the
    # propagators and the reference solver.
    def h(self, zc, z):
        return h_ord(zc, z, self)

    def grad(self, zc, z):
        return grad_h_ord(zc, z, self)

    def potential(self, x):
        return potential_plain(x, self)

    def coefficients(self):
        """``C`` with ``h_ord(zc, z) == sum C[m, n] zc**m z**n``."""
        c = np.zeros((5, 5))
        c4 = 1.0 / (256.0 * self.D)
        # -(zc - z)^2/4 - (zc + z)^2/8
        c[2, 0] = c[0, 2] = -0.25 - 0.125
        c[1, 1] = 0.5 - 0.25
        c[0, 0] = 0.25 - 0.125 + 3.0 * c4
        # c4 * ((zc + z)^4 + 6 (zc + z)^2)
        for m, binom in enumerate((1, 4, 6, 4, 1)):
            c[m, 4 - m] += c4 * binom
        c[2, 0] += 6.0 * c4
        c[0, 2] += 6.0 * c4
        c[1, 1] += 12.0 * c4
        return c


@dataclass(frozen=True)
class Landmarks:
    q_min_plain: float
    q_min_ordered: float
    barrier_plain: float
    v_ord_at_zero: float
    v_ord_at_min: float
    barrier_ordered: float
    separatrix_energy_ordered: float


def potential_plain(q, params: WellParams):
    """``-(a/2) q**2 + (b/4) q**4 + E_B`` with ``E_B = a**2/(4b) = D``."""
    q = np.asarray(q)
    e_b = params.a**2 / (4.0 * params.b)
    return -0.5 * params.a * q**2 + 0.25 * params.b * q**4 + e_b


def potential_ordered(q, params: WellParams):
    """Potential picked up by the classical kernel after normal ordering."""
    q = np.asarray(q)
    D = params.D
    q2 = q * q
    return D - 0.25 * (q2 - 0.5) + (q2 * q2 + 3.0 * q2 + 0.75) / (64.0 * D)


def h_ord(zc, z, params: WellParams):
    """Normal-ordered classical Hamiltonian ``H_ord(zc, z)``.

    Holomorphic in both arguments; broadcasts like numpy.
    """
    s = zc + z
    d = zc - z
    s2 = s * s
    return (
        -0.25 * (d * d - 1.0)
        - 0.125 * (s2 + 1.0)
        + (s2 * (s2 + 6.0) + 3.0) / (256.0 * params.D)
    )


def grad_h_ord(zc, z, params: WellParams):
    """Return ``(dH/dzc, dH/dz)`` of :func:`h_ord`."""
    s = zc + z
    d = zc - z
    quartic = s * (4.0 * s * s + 12.0) / (256.0 * params.D)
    common = -0.25 * s + quartic
    return common - 0.5 * d, common + 0.5 * d


def landmarks(params: WellParams) -> Landmarks:
    D = params.D
    v0 = D + 0.125 + 3.0 / (256.0 * D)
    vmin = 0.5 - 6.0 / (256.0 * D)
    return Landmarks(
        q_min_plain=float(np.sqrt(params.a / params.b)),
        q_min_ordered=float(np.sqrt(8.0 * D - 1.5)),
        barrier_plain=D,
        v_ord_at_zero=v0,
        v_ord_at_min=vmin,
        barrier_ordered=D - 0.375 + 9.0 / (256.0 * D),
        separatrix_energy_ordered=float(np.real(h_ord(0.0, 0.0, params))),
    )


def separatrix_points(ordered: bool, params: WellParams, n: int):
    """Sample the separatrix (the phase-space "eight") as an ``(m, 2)`` array.

    ``q`` is swept uniformly over the outer turning points and ``p`` is solved
    from the energy condition; each ``q`` yields the pair ``(q, +p)``,
    ``(q, -p)``.  The sweep has ``n`` values, so ``m <= 2 n``.  Points where
    the condition has no real solution are skipped.

    In the plain variant the level set is ``p**2/2 + V(q) = D``; in the
    ordered variant it is ``H_ord = H_ord(0, 0)``, i.e.
    ``p**2/2 + V_ord(q) = V_ord(0)``.
    """
    if n < 2:
        raise ValueError("need at least two sweep points")
    if ordered:
        v = lambda q: potential_ordered(q, params)  # noqa: E731
    else:
        v = lambda q: potential_plain(q, params)  # noqa: E731
    e_sep = float(v(0.0))
    # outer turning point: largest root of V(q) = V(0)
    if ordered:
        # V_ord(q) - V_ord(0) = q^2 (q^2 + 3 - 16 D) / (64 D)
        q_edge = np.sqrt(16.0 * params.D - 3.0)
    else:
        q_edge = np.sqrt(2.0 * params.a / params.b)
    qs = np.linspace(-q_edge, q_edge, n)
    kin = e_sep - v(qs)
    # endpoints and q=0 sit on the level set with p=0 up to rounding
    kin = np.where(np.abs(kin) < 1e-12, 0.0, kin)
    keep = kin >= 0.0
    qs = qs[keep]
    p = np.sqrt(2.0 * kin[keep])
    pts = np.concatenate([np.column_stack([qs, p]), np.column_stack([qs[::-1], -p[::-1]])])
    return pts


@dataclass(frozen=True)
class HarmonicOscillator:
    """``p**2/2 + omega**2 q**2/2`` with unit-width coherent states.

    For ``omega = 1`` the normal-ordered kernel is ``zc*z`` (the zero-point
    constant is dropped).  Only used to check the propagators against
    closed-form coherent-state dynamics.
    """

    omega: float = 1.0

    def h(self, zc, z):
        w2 = self.omega**2
        s = zc + z
        d = zc - z
        return -0.25 * (d * d - 1.0) + 0.25 * w2 * (s * s + 1.0) - 0.5

    def grad(self, zc, z):
        w2 = self.omega**2
        s = zc + z
        d = zc - z
        return -0.5 * d + 0.5 * w2 * s, 0.5 * d + 0.5 * w2 * s

    def potential(self, x):
        return 0.5 * self.omega**2 * np.asarray(x) ** 2

    def coefficients(self):
        w2 = self.omega**2
        c = np.zeros((3, 3))
        c[2, 0] = c[0, 2] = 0.25 * (w2 - 1.0)
        c[1, 1] = 0.5 * (1.0 + w2)
        c[0, 0] = 0.25 * (1.0 + w2) - 0.5
        return c


@dataclass(frozen=True)
class ShiftedHamiltonian:
    """Wrap a Hamiltonian and add a real constant to it."""

    base: object
    shift: float

    def h(self, zc, z):
        return self.base.h(zc, z) + self.shift

    def grad(self, zc, z):
        return self.base.grad(zc, z)

    def potential(self, x):
        return self.base.potential(x) + self.shift

    def coefficients(self):
        c = np.array(self.base.coefficients(), dtype=float)
        c[0, 0] += self.shift
        return c
