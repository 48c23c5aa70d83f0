"""
Phase space of the double well
==============================

Where the wells sit, how high the barrier is in the classical (normal
ordered) energy, and which grid labels start below it.
"""

import numpy as np

from ccs_tunneling import GridSpec, WellParams, classify_energies, landmarks, make_grid
from ccs_tunneling import separatrix_points

# %%
# With D = 1 the plain potential has minima at q = +-sqrt(8) and a barrier
# of height 1.  The normal-ordered potential that drives the labels is
# shallower and its minima sit closer to the origin.
params = WellParams(1.0)
lm = landmarks(params)
print(f"plain minima at q = +-{lm.q_min_plain:.4f}, barrier {lm.barrier_plain:.4f}")
print(f"ordered minima at q = +-{lm.q_min_ordered:.4f}, barrier {lm.barrier_ordered:.8f}")
print(f"separatrix energy of the label flow: {lm.separatrix_energy_ordered:.8f}")

# %%
# The separatrix is the figure-eight through the hyperbolic point at the
# origin.  Its widest momentum is reached above each minimum.
for ordered in (False, True):
    pts = separatrix_points(ordered, params, 401)
    name = "ordered" if ordered else "plain"
    print(f"{name:8s} separatrix: q in [{pts[:, 0].min():.3f}, {pts[:, 0].max():.3f}], "
          f"max |p| = {np.abs(pts[:, 1]).max():.3f}")

# %%
# A 7x7 grid centered on the right minimum stays inside the right lobe, so
# no label can ever reach the left well classically.  Widening the window
# puts some labels over the barrier.
for spec in (GridSpec(), GridSpec(nq=9, np=9, half_width_q=1.0, half_width_p=1.5)):
    labels, occupied = make_grid(spec)
    region = classify_energies(labels, params)
    print(f"{labels.size} labels, half-widths ({spec.half_width_q}, {spec.half_width_p}): "
          f"{(region == 'above').sum()} above the separatrix")
