"""End-to-end acceptance checks for the library.

Each test prints one ``PASS``/``FAIL`` line (also repeated in the pytest
terminal summary).  The scenario runs take several minutes in total; they are
shared through module-scoped fixtures.
"""

import math
from pathlib import Path

import numpy as np
import pytest

from ccs_tunneling import (
    HarmonicOscillator,
    ShiftedHamiltonian,
    TrajectorySet,
    WellParams,
    correlation_reference,
    cross_correlation,
    grad_h_ord,
    h_ord,
    init_gaussian,
    initial_state,
    label_from_qp,
    load_config,
    make_grid,
    overlap,
    potential_plain,
    propagate,
    propagate_ccs,
    propagate_reference,
    run_scenario,
    tunneling_splitting,
)
from ccs_tunneling.classical import energies

from conftest import ACCEPTANCE_LINES, SQRT8, random_labels
from oracles import fd_grad, hamiltonian_element

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
SCENARIOS = ("fig2", "fig3", "fig4", "fig4_m121")


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


@pytest.fixture(scope="module")
def runs():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_scenario(load_config(CONFIGS / f"{name}.conf"), write=False)
        return cache[name]

    return get


def test_01_tunneling_splitting():
    e1, e2, delta = tunneling_splitting(WellParams(1.0))
    period = 2 * math.pi / delta
    ok = abs(delta / 2.392e-2 - 1) <= 0.01 and abs(period / 263 - 1) <= 0.01
    report(1, ok, f"Delta = {delta:.6e} (target 2.392e-2), T_t = {period:.3f} (target 263), 1% tolerance")


def test_02_mirrored_grid_tracks_reference(runs):
    r = runs("fig3")
    assert r.labels0.size == 98 and r.t[-1] == pytest.approx(526)
    dev = r.max_deviation
    window = (r.t >= 110) & (r.t <= 150)
    peak = np.abs(r.c_ccs[window]).max()
    t_peak = r.t[window][np.argmax(np.abs(r.c_ccs[window]))]
    ok = dev <= 0.05 and peak >= 0.9
    report(
        2, ok,
        f"M=98 max ||c_ccs|-|c_ref|| = {dev:.2e} (<= 0.05), "
        f"max |c_ccs| in [110,150] = {peak:.4f} at t={t_peak:g} (>= 0.9)",
    )


def test_03_sub_barrier_grid_misses_tunneling(runs):
    r = runs("fig2")
    assert r.labels0.size == 49
    ccs, ref = np.abs(r.c_ccs).max(), np.abs(r.c_ref).max()
    ok = ccs <= 0.3 and ref >= 0.9
    report(3, ok, f"M=49 max |c_ccs| = {ccs:.4f} (<= 0.3), max |c_ref| = {ref:.4f} (>= 0.9)")


def test_04_over_barrier_grid(runs):
    r81, r121 = runs("fig4"), runs("fig4_m121")
    assert r81.labels0.size == 81 and r121.labels0.size == 121
    d81, d121 = r81.max_deviation, r121.max_deviation
    ok = d81 <= 0.15 and d121 < d81
    report(4, ok, f"M=81 deviation = {d81:.2e} (<= 0.15), M=121 deviation = {d121:.2e} (smaller)")


def test_05_norm_conservation(runs):
    r = runs("fig3")
    lo, hi = r.norm.min(), r.norm.max()
    report(5, 0.98 <= lo and hi <= 1.02, f"fig3 norm in [{lo:.6f}, {hi:.6f}] (within [0.98, 1.02])")


def test_05b_half_period_snapshot(runs):
    # the fig5 configuration is the fig3 run read out at t = 131
    r = runs("fig3")
    (snap,) = r.snapshots
    assert snap.t == pytest.approx(131)
    q = math.sqrt(2) * snap.labels.real
    left = np.abs(snap.a[q < 0])
    assert left.size > 0 and left.max() > 0
    print(f"t=131 snapshot: {left.size} labels at q < 0, max |a| there = {left.max():.3f}")


def test_06_classical_energy_conservation():
    params = WellParams(1.0)
    labels = np.concatenate(
        [make_grid(load_config(CONFIGS / f"{n}.conf").grid_for_well())[0] for n in SCENARIOS]
    )
    traj = TrajectorySet.start(labels, params)
    e0 = traj.energies
    worst = 0.0
    for s in propagate(traj, 1e-3, 263_000, params, stride=1000):
        drift = np.abs(energies(s.labels, params) - e0) / np.maximum(1.0, np.abs(e0))
        worst = max(worst, drift.max())
    report(6, worst <= 1e-8, f"{labels.size} labels, max relative drift over [0, 263] = {worst:.2e} (<= 1e-8)")


def test_07_matrix_element_oracle(rng):
    params = WellParams(1.0)
    v = lambda x: potential_plain(x, params) - params.D  # noqa: E731
    zk, zl = random_labels(rng, 50), random_labels(rng, 50)
    err = max(
        abs(overlap(a, b) * h_ord(np.conj(a), b, params) - hamiltonian_element(a, b, v))
        for a, b in zip(zk, zl)
    )
    report(7, err <= 1e-8, f"50 pairs |z| <= 3, max |kernel - quadrature| = {err:.2e} (<= 1e-8)")


def test_08_gradient_oracle(rng):
    params = WellParams(1.0)
    zc, z = random_labels(rng, 100), random_labels(rng, 100)
    an = grad_h_ord(zc, z, params)
    fd = fd_grad(lambda a, b: h_ord(a, b, params), zc, z)
    rel = max(np.max(np.abs(x - y) / np.maximum(1.0, np.abs(x))) for x, y in zip(an, fd))
    report(8, rel <= 1e-6, f"100 points, max relative gradient error = {rel:.2e} (<= 1e-6)")


def test_09_reference_solver_sanity():
    n = 6283
    s0 = init_gaussian(2.0, 1.0)
    s = propagate_reference(s0, 2 * math.pi / n, n, HarmonicOscillator(), stride=n)[-1]
    revival = abs(s0.inner(s.psi))

    params = WellParams(1.0)
    start = init_gaussian(SQRT8, 0.0)

    def c_at(dt):
        return correlation_reference(start, (SQRT8, 0.0), [10.0], dt, params)[0]

    ref = c_at(0.00625)
    ratio = abs(c_at(0.05) - ref) / abs(c_at(0.025) - ref)
    ok = abs(revival - 1) <= 1e-6 and 3.5 <= ratio <= 4.5
    report(9, ok, f"harmonic revival |<psi0|psi(2pi)>| = {revival:.10f}, Strang ratio = {ratio:.3f} (in [3.5, 4.5])")


def test_10_invariance():
    params = WellParams(1.0)
    labels, occ = make_grid(load_config(CONFIGS / "fig3.conf").grid_for_well())
    alpha = complex(label_from_qp(SQRT8, 0.0))
    dt, n, stride = 0.01, 6000, 100

    def run(ham, start, beta):
        states = propagate_ccs(initial_state(labels, start), ham, dt, n, stride=stride)
        return np.array([abs(cross_correlation(s, beta)) for s in states])

    base = run(params, occ, -alpha)
    shifted = run(ShiftedHamiltonian(params, 0.37), occ, -alpha)
    # reflect every label through the origin and swap alpha and beta
    mirrored = run(params, occ + labels.size // 2, alpha)
    d_shift = np.abs(base - shifted).max()
    d_mirror = np.abs(base - mirrored).max()
    ok = d_shift <= 1e-10 and d_mirror <= 1e-8
    report(
        10, ok,
        f"fig3 grid over [0, 60]: constant shift changes |c| by {d_shift:.1e} (<= 1e-10), "
        f"mirror relabeling by {d_mirror:.1e} (<= 1e-8)",
    )
