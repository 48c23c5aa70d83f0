"""
Overlaps and the regularized solve
==================================

Neighbouring coherent states on a dense grid overlap strongly, so the Gram
matrix is close to singular.  A tiny diagonal shift keeps the linear solve
for the coefficient derivatives well defined.
"""

import numpy as np

from ccs_tunneling import GridSpec, WellParams, gram, initial_state, make_grid
from ccs_tunneling import coeff_rhs, htilde_matrix, norm

params = WellParams(1.0)
labels, occupied = make_grid(GridSpec(mirrored=True))

# %%
# The Gram matrix is Hermitian with a unit diagonal.  Its spectrum spans many
# orders of magnitude on this grid.
g = gram(labels)
w = np.linalg.eigvalsh(g)
print(f"M = {labels.size}, Gram eigenvalues in [{w.min():.2e}, {w.max():.2f}]")
print(f"condition number with eps = 1e-8: {np.linalg.cond(g + 1e-8 * np.eye(labels.size)):.2e}")

# %%
# The Hamiltonian matrix between labels is not Hermitian (the derivative
# terms sit on the ket's trajectory), but the resulting flow conserves the
# norm.  With a single occupied label G a does not change to first order,
# so the derivative of N = a^H G a comes from the coefficients alone.
state = initial_state(labels, occupied)
adot = coeff_rhs(state, params)
dn = 2 * np.real(np.vdot(state.a, g @ adot))
ht = htilde_matrix(labels, params, omega=g)
print(f"||Ht - Ht^H|| = {np.linalg.norm(ht - ht.conj().T):.2e}")
print(f"N = {norm(state):.12f}, dN/dt at t = 0: {dn:.2e}")
