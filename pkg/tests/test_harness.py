import csv
import os
from pathlib import Path

import numpy as np
import pytest

from ccs_tunneling import (
    ConfigError,
    ExperimentConfig,
    GridSpec,
    classify_energies,
    label_from_qp,
    load_config,
    make_grid,
    parse_config,
    run_scenario,
)
from ccs_tunneling.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_grid_sizes_and_center():
    for spec, size in ((GridSpec(), 49), (GridSpec(mirrored=True), 98), (GridSpec(nq=9, np=9), 81)):
        labels, occ = make_grid(spec)
        assert labels.size == size == spec.size
        assert labels[occ] == label_from_qp(np.sqrt(8.0), 0.0)


def test_mirrored_grid_is_exact_reflection():
    labels, _ = make_grid(GridSpec(mirrored=True))
    np.testing.assert_array_equal(labels[49:], -labels[:49])


def test_grid_spacing_and_order():
    labels, _ = make_grid(GridSpec(nq=3, np=5, half_width_q=1.0, half_width_p=2.0))
    q, p = np.sqrt(2) * labels.real, np.sqrt(2) * labels.imag
    np.testing.assert_allclose(q[:5], np.sqrt(8.0) - 1.0)
    np.testing.assert_allclose(p[:5], [-2.0, -1.0, 0.0, 1.0, 2.0], atol=1e-15)


def test_grid_spec_validation():
    with pytest.raises(ConfigError):
        GridSpec(nq=4)
    with pytest.raises(ConfigError):
        GridSpec(np=0)
    with pytest.raises(ConfigError):
        GridSpec(half_width_q=-1.0)


def test_classification(params):
    assert classify_energies(np.array([label_from_qp(np.sqrt(6.5), 0.0)]), params)[0] == "below"
    assert classify_energies(np.array([label_from_qp(0.0, 2.0)]), params)[0] == "above"
    dense, _ = make_grid(GridSpec())
    assert np.all(classify_energies(dense, params) == "below")
    wide, _ = make_grid(GridSpec(nq=9, np=9, half_width_q=1.0, half_width_p=1.5))
    assert np.any(classify_energies(wide, params) == "above")
    np.testing.assert_array_equal(classify_energies(-wide, params), classify_energies(wide, params))


def test_parse_config_roundtrip():
    cfg = parse_config(
        """
        # comment
        scenario = demo
        D = 2   # trailing comment
        nq = 3
        np = 5
        mirrored = yes
        dt = 0.01
        t_final = 1
        snapshot_times = 0.5, 1
        """
    )
    assert cfg.scenario == "demo"
    assert cfg.grid.center == (4.0, 0.0)
    assert cfg.grid.size == 30
    assert cfg.snapshot_times == (0.5, 1.0)


@pytest.mark.parametrize(
    "text",
    [
        "bogus = 1",
        "dt 0.1",
        "t_final = 0",
        "dt = -1",
        "nq = 2",
        "mirrored = maybe",
        "dt = 0.01\ndt = 0.02",
        "dt = 0.3\nsample_interval = 0.5",
        "t_final = 1\nsnapshot_times = 2",
        "eps = -1",
    ],
)
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_shipped_configs_load():
    sizes = {"fig2": 49, "fig3": 98, "fig4": 81, "fig4_m121": 121, "fig5": 98}
    for name, size in sizes.items():
        cfg = load_config(CONFIGS / f"{name}.conf")
        assert cfg.scenario == name
        assert cfg.grid.size == size
    with pytest.raises(ConfigError):
        load_config(CONFIGS / "missing.conf")


def short_config(tmp_path, **kw):
    base = dict(
        grid=GridSpec(nq=3, np=3),
        dt=0.01,
        t_final=2.0,
        snapshot_times=(1.0,),
        out_dir=str(tmp_path),
    )
    base.update(kw)
    return ExperimentConfig(**base)


def test_run_scenario_writes_csv(tmp_path):
    result = run_scenario(short_config(tmp_path))
    assert result.t[0] == 0.0 and result.t[-1] == pytest.approx(2.0)
    with open(result.paths["correlation"], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "re_c_ccs", "im_c_ccs", "abs_c_ccs", "abs_c_ref", "norm_ccs"]
    assert len(rows) == 1 + result.t.size
    with open(result.paths["snapshots"], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "label_index", "q", "p", "re_a", "im_a"]
    assert len(rows) == 1 + 9
    assert float(rows[1][0]) == pytest.approx(1.0)
    with open(result.paths["separatrix"], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["q", "p", "variant"]
    assert {r[2] for r in rows[1:]} == {"plain", "ordered"}


def test_run_scenario_is_deterministic(tmp_path):
    a = run_scenario(short_config(tmp_path / "a", out_dir=str(tmp_path / "a")))
    b = run_scenario(short_config(tmp_path / "b", out_dir=str(tmp_path / "b")))
    for key in a.paths:
        assert a.paths[key].read_bytes() == b.paths[key].read_bytes()


def write_conf(path, **values):
    path.write_text("".join(f"{k} = {v}\n" for k, v in values.items()))
    return str(path)


def test_cli_splitting(capsys):
    assert main(["splitting", "--D", "1"]) == 0
    out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    assert float(out["Delta"]) == pytest.approx(2.392e-2, rel=0.01)
    assert float(out["T_t"]) == pytest.approx(263.0, rel=0.01)


def test_cli_grid(capsys):
    assert main(["grid", str(CONFIGS / "fig2.conf")]) == 0
    captured = capsys.readouterr()
    rows = list(csv.reader(captured.out.splitlines()))
    assert rows[0] == ["label_index", "q", "p", "energy", "region", "occupied"]
    assert len(rows) == 50
    assert sum(int(r[5]) for r in rows[1:]) == 1
    assert "49 labels: 49 below, 0 above" in captured.err


def test_cli_separatrix(capsys):
    assert main(["separatrix", "--ordered", "--n", "11"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["q", "p", "variant"]
    assert all(r[2] == "ordered" for r in rows[1:])


def test_cli_run(tmp_path, capsys):
    conf = write_conf(
        tmp_path / "c.conf", nq=3, np=3, dt=0.01, t_final=1, out_dir=tmp_path / "out"
    )
    assert main(["run", conf]) == 0
    assert (tmp_path / "out" / "correlation.csv").exists()
    assert "M=9" in capsys.readouterr().out


def test_cli_usage_errors(tmp_path, capsys):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["splitting", "--D", "-1"]) == 1
    assert main(["run", write_conf(tmp_path / "bad.conf", t_final=0)]) == 1
    assert main(["run", str(tmp_path / "missing.conf")]) == 1


@pytest.mark.skipif(hasattr(os, "geteuid") and os.geteuid() == 0, reason="root ignores permissions")
def test_cli_unwritable_output(tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    conf = write_conf(tmp_path / "c.conf", nq=1, np=1, dt=0.01, t_final=0.5, out_dir=locked / "x")
    assert main(["run", conf]) == 1


def test_cli_output_path_is_a_file(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    conf = write_conf(tmp_path / "c.conf", nq=1, np=1, dt=0.01, t_final=0.5, out_dir=blocker / "x")
    assert main(["run", conf]) == 1


def test_cli_numerical_abort(tmp_path, capsys):
    # coincident labels with no regularization: singular overlap matrix
    conf = write_conf(
        tmp_path / "c.conf", nq=3, np=1, half_width_q=0, eps=0, dt=0.01, t_final=0.5,
        out_dir=tmp_path / "out",
    )
    assert main(["run", conf]) == 2
    assert "condition number" in capsys.readouterr().err
