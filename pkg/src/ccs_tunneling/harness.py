"""Grid experiments: rectangular label grids, scenario runs, CSV output.

A scenario is described by a small ``key = value`` text file::

    # mirrored dense grid
    scenario = fig3
    D = 1
    nq = 7
    np = 7
    half_width_q = 0.5
    half_width_p = 0.75
    mirrored = true
    dt = 0.01
    t_final = 526
    out_dir = out/fig3

Running it propagates the CCS expansion and the split-operator reference on
the same time grid and writes ``correlation.csv``, ``snapshots.csv`` and
``separatrix.csv`` into ``out_dir``.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .ccs import DEFAULT_EPS, cross_correlation, initial_state, norm, propagate_ccs
from .classical import energies
from .coherent import label_from_qp, qp_from_label
from .model import WellParams, landmarks, separatrix_points
from .reference import DEFAULT_GRID, correlation_reference, init_gaussian

__all__ = [
    "ConfigError",
    "GridSpec",
    "ExperimentConfig",
    "ScenarioResult",
    "make_grid",
    "classify_energies",
    "parse_config",
    "load_config",
    "run_scenario",
    "write_grid_csv",
    "write_separatrix_csv",
    "fmt",
]

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


def fmt(value) -> str:
    """17 significant digits, so CSV output round-trips exactly."""
    return "%.17g" % value


@dataclass(frozen=True)
class GridSpec:
    """Rectangular ``nq x np`` lattice in phase space.

    Both counts are odd so that one point sits exactly on ``center``; that
    point carries the initial wavepacket.  ``mirrored`` appends the copy
    reflected through the origin, ``(q, p) -> (-q, -p)``.
    """

    center: tuple = (math.sqrt(8.0), 0.0)
    nq: int = 7
    np: int = 7
    half_width_q: float = 0.5
    half_width_p: float = 0.75
    mirrored: bool = False

    def __post_init__(self):
        for name in ("nq", "np"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 1 or n % 2 == 0:
                raise ConfigError(f"{name} must be a positive odd integer, got {n!r}")
        if self.half_width_q < 0 or self.half_width_p < 0:
            raise ConfigError("grid half-widths must be non-negative")

    @property
    def size(self):
        return self.nq * self.np * (2 if self.mirrored else 1)


def _offsets(half_width, n):
    if n == 1:
        return np.zeros(1)
    return np.linspace(-half_width, half_width, n)


def make_grid(spec: GridSpec):
    """Return ``(labels, occupied)`` for a grid specification.

    Points are ordered with ``q`` as the slow index.  The occupied index is
    the center of the first (unmirrored) block.
    """
    qc, pc = spec.center
    q = qc + _offsets(spec.half_width_q, spec.nq)
    p = pc + _offsets(spec.half_width_p, spec.np)
    qq, pp = np.meshgrid(q, p, indexing="ij")
    labels = label_from_qp(qq.ravel(), pp.ravel())
    occupied = (spec.nq // 2) * spec.np + spec.np // 2
    if spec.mirrored:
        labels = np.concatenate([labels, -labels])
    return labels, occupied


def classify_energies(labels, params):
    """``'above'`` or ``'below'`` the ordered separatrix energy, per label."""
    e = energies(labels, params)
    e_sep = landmarks(params).separatrix_energy_ordered
    return np.where(e > e_sep, "above", "below")


@dataclass(frozen=True)
class ExperimentConfig:
    D: float = 1.0
    grid: GridSpec = field(default_factory=GridSpec)
    dt: float = 1e-3
    t_final: float = 263.0
    eps: float = DEFAULT_EPS
    snapshot_times: tuple = ()
    sample_interval: float = 0.5
    scenario: str = "custom"
    out_dir: str = "out"

    def __post_init__(self):
        for name in ("D", "dt", "t_final", "sample_interval"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive, got {v!r}")
        if not self.eps >= 0:
            raise ConfigError(f"eps must be non-negative, got {self.eps!r}")
        if not _is_multiple(self.sample_interval, self.dt):
            raise ConfigError("sample_interval must be a multiple of dt")
        if not _is_multiple(self.t_final, self.sample_interval):
            raise ConfigError("t_final must be a multiple of sample_interval")
        for t in self.snapshot_times:
            if not 0 <= t <= self.t_final or not _is_multiple(t, self.dt):
                raise ConfigError(f"snapshot time {t!r} must be a multiple of dt in [0, t_final]")

    @property
    def params(self):
        return WellParams(self.D)

    def grid_for_well(self):
        """Grid spec with the default center moved to this D's right minimum."""
        if self.grid.center == GridSpec.center:
            return _replace_center(self.grid, (math.sqrt(8.0 * self.D), 0.0))
        return self.grid


def _replace_center(spec, center):
    kw = {f.name: getattr(spec, f.name) for f in fields(spec)}
    kw["center"] = center
    return GridSpec(**kw)


def _is_multiple(x, unit):
    r = x / unit
    return abs(r - round(r)) <= 1e-9 * max(1.0, abs(r))


_GRID_KEYS = {"nq", "np", "half_width_q", "half_width_p", "mirrored"}
_FLOAT_KEYS = {"D", "half_width_q", "half_width_p", "dt", "t_final", "eps", "sample_interval"}
_INT_KEYS = {"nq", "np"}
_KNOWN_KEYS = _GRID_KEYS | _FLOAT_KEYS | _INT_KEYS | {
    "snapshot_times",
    "scenario",
    "out_dir",
}


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key == "mirrored":
                values[key] = _parse_bool(value)
            elif key == "snapshot_times":
                values[key] = tuple(float(s) for s in value.split(",") if s.strip())
            else:
                if not value:
                    raise ConfigError(f"line {lineno}: empty value for {key!r}")
                values[key] = value
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from exc

    grid_kw = {k: values.pop(k) for k in list(values) if k in _GRID_KEYS}
    D = values.get("D", 1.0)
    if not D > 0:
        raise ConfigError(f"D must be positive, got {D!r}")
    grid = GridSpec(center=(math.sqrt(8.0 * D), 0.0), **grid_kw)
    return ExperimentConfig(grid=grid, **values)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


@dataclass
class ScenarioResult:
    t: np.ndarray
    c_ccs: np.ndarray
    c_ref: np.ndarray
    norm: np.ndarray
    snapshots: list
    labels0: np.ndarray
    occupied: int
    paths: dict

    @property
    def max_deviation(self):
        return float(np.max(np.abs(np.abs(self.c_ccs) - np.abs(self.c_ref))))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_separatrix_csv(fh, params, n=401, variants=("plain", "ordered")):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["q", "p", "variant"])
    for variant in variants:
        for q, p in separatrix_points(variant == "ordered", params, n):
            w.writerow([fmt(q), fmt(p), variant])


def write_grid_csv(fh, labels, occupied, params):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["label_index", "q", "p", "energy", "region", "occupied"])
    q, p = qp_from_label(labels)
    e = energies(labels, params)
    region = classify_energies(labels, params)
    for i in range(len(labels)):
        w.writerow([i, fmt(q[i]), fmt(p[i]), fmt(e[i]), region[i], int(i == occupied)])


def run_scenario(config: ExperimentConfig, write=True, max_norm_drift=0.1) -> ScenarioResult:
    """Run CCS and the split-operator reference and write the CSV artifacts.

    Numerical aborts (:class:`~ccs_tunneling.ccs.NormDriftError`,
    :class:`~ccs_tunneling.ccs.CCSSolveError`) propagate to the caller.
    """
    params = config.params
    spec = config.grid_for_well()
    labels, occupied = make_grid(spec)
    q_alpha = math.sqrt(8.0 * config.D)
    beta = complex(label_from_qp(-q_alpha, 0.0))

    dt = config.dt
    n_steps = int(round(config.t_final / dt))
    sample_stride = int(round(config.sample_interval / dt))
    snap_steps = sorted({int(round(t / dt)) for t in config.snapshot_times})
    stride = math.gcd(sample_stride, *snap_steps) if snap_steps else sample_stride
    if stride == 0:
        stride = sample_stride

    logger.info("scenario %s: M=%d, %d steps of %g", config.scenario, labels.size, n_steps, dt)
    states = propagate_ccs(
        initial_state(labels, occupied),
        params,
        dt,
        n_steps,
        eps=config.eps,
        stride=stride,
        max_norm_drift=max_norm_drift,
    )
    by_step = {int(round(s.t / dt)): s for s in states}
    sample_steps = list(range(0, n_steps + 1, sample_stride))
    samples = [by_step[k] for k in sample_steps]
    t = np.array([k * dt for k in sample_steps])
    c_ccs = np.array([cross_correlation(s, beta) for s in samples])
    norms = np.array([norm(s) for s in samples])

    psi0 = init_gaussian(q_alpha, 0.0, DEFAULT_GRID)
    c_ref = correlation_reference(psi0, (-q_alpha, 0.0), t, dt, params)
    snapshots = [by_step[k] for k in snap_steps]

    paths = {}
    if write:
        out = Path(config.out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
        if not os.access(out, os.W_OK):
            raise ConfigError(f"output directory {out} is not writable")
        paths["correlation"] = out / "correlation.csv"
        _write_csv(
            paths["correlation"],
            ["t", "re_c_ccs", "im_c_ccs", "abs_c_ccs", "abs_c_ref", "norm_ccs"],
            (
                [fmt(ti), fmt(c.real), fmt(c.imag), fmt(abs(c)), fmt(abs(r)), fmt(n)]
                for ti, c, r, n in zip(t, c_ccs, c_ref, norms)
            ),
        )
        paths["snapshots"] = out / "snapshots.csv"
        rows = []
        for s in snapshots:
            q, p = qp_from_label(s.labels)
            for i in range(s.labels.size):
                rows.append(
                    [fmt(s.t), i, fmt(q[i]), fmt(p[i]), fmt(s.a[i].real), fmt(s.a[i].imag)]
                )
        _write_csv(paths["snapshots"], ["t", "label_index", "q", "p", "re_a", "im_a"], rows)
        paths["separatrix"] = out / "separatrix.csv"
        with open(paths["separatrix"], "w", newline="", encoding="utf-8") as fh:
            write_separatrix_csv(fh, params)

    return ScenarioResult(
        t=t,
        c_ccs=c_ccs,
        c_ref=c_ref,
        norm=norms,
        snapshots=snapshots,
        labels0=labels,
        occupied=occupied,
        paths=paths,
    )
