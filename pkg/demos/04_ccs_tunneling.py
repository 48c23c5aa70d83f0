"""
Tunneling with classical trajectories
=====================================

All labels start below the barrier and none of them ever crosses it.  A
grid around one well alone therefore cannot describe the transfer, while
adding the mirror-image grid in the other well lets the coupled
coefficients move the amplitude across.  This runs both for half a period
(about half a minute).
"""

import math

import numpy as np

from ccs_tunneling import GridSpec, WellParams, correlation_reference, cross_correlation
from ccs_tunneling import init_gaussian, initial_state, label_from_qp, make_grid
from ccs_tunneling import position_amplitude, propagate_ccs

params = WellParams(1.0)
beta = complex(label_from_qp(-math.sqrt(8.0), 0.0))
dt, n_steps, stride = 0.02, 6600, 50

# %%
# Exact overlap with the left-well Gaussian for comparison.
times = np.arange(0, n_steps + 1, stride) * dt
psi0 = init_gaussian(math.sqrt(8.0), 0.0)
c_ref = np.abs(correlation_reference(psi0, (-math.sqrt(8.0), 0.0), times, dt, params))

# %%
# Same sub-barrier grid, once alone and once with its mirror image.
for mirrored in (False, True):
    labels, occupied = make_grid(GridSpec(mirrored=mirrored))
    states = propagate_ccs(initial_state(labels, occupied), params, dt, n_steps, stride=stride)
    c = np.array([abs(cross_correlation(s, beta)) for s in states])
    print(f"M = {labels.size:3d}: |c| at t = {times[-1]:g} is {c[-1]:.4f} "
          f"(exact {c_ref[-1]:.4f}), max deviation {np.abs(c - c_ref).max():.2e}")

# %%
# Where the probability sits at the end of the mirrored run.  The
# coefficients of an overcomplete basis are large and partly cancel, so
# rebuild psi(x) on a grid and integrate over each half-line.
final = states[-1]
x = np.linspace(-8.0, 8.0, 2001)
psi = position_amplitude(x[:, None], final.labels[None, :]) @ final.a
rho = np.abs(psi) ** 2 * (x[1] - x[0])
print(f"probability at x < 0: {rho[x < 0].sum():.3f}, x > 0: {rho[x > 0].sum():.3f}")
