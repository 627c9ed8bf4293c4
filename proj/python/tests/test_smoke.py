import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import lpg

CONFIGS = Path(os.environ.get("LPG_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


@pytest.fixture(scope="module")
def line():
    return lpg.abelian_operator([(1, 1)], [16.0], [128], [1])


def test_grid_shape_and_axis():
    g = lpg.Grid([4.0, 2.0], [8, 16])
    assert g.shape == [8, 16]
    assert g.size == 128
    assert g.axis(0)[0] == -4.0
    assert g.axis(1)[1] - g.axis(1)[0] == pytest.approx(0.25)


def test_apply_matches_symbol_on_plane_wave(line):
    x = line.grid.axis(0)
    xi = 3 * 2 * math.pi / 32
    f = np.exp(1j * xi * x)
    assert np.allclose(lpg.apply(line, f), xi**2 * f, atol=1e-10)


def test_blocks_sum_to_input(line):
    f = lpg.gaussian(line.grid, [0.7])
    total = sum(lpg.blocks(line, f))
    assert np.allclose(total, f, atol=1e-7)


def test_exp_decay_matches_callable(line):
    f = lpg.spike(line.grid)
    a = lpg.apply_multiplier(line, lpg.exp_decay(0.5), f)
    b = lpg.apply_multiplier(line, lpg.Multiplier(lambda t: math.exp(-0.5 * t)), f)
    assert np.allclose(a, b, atol=1e-7)


def test_besov_l2_matches_lp_at_r0_q2(line):
    f = lpg.gaussian(line.grid, [1.0])
    b = lpg.besov_norm(line, f, 0.0, 2.0, 2.0)
    n = lpg.lp_norm(line.grid, f, 2.0)
    assert math.sqrt(0.5) * n <= b <= n * (1 + 1e-8)


def test_nikolskii_slope_on_line():
    op = lpg.abelian_operator([(1, 1)], [math.pi * 40.25], [1024], [1])
    rep = lpg.nikolskii_slope(op, lpg.spike(op.grid), 2.0, lpg.inf, [1, 4, 16, 64])
    assert abs(rep["fitted_slope"] - 0.25) <= 0.02


def test_heisenberg_operator_properties():
    op = lpg.heisenberg_operator([2, 2, 4], [8, 8, 8])
    assert op.Q == 4 and op.nu == 2 and not op.has_symbol
    f = lpg.gaussian(op.grid, [0.5, 0.5, 1.0])
    assert lpg.apply(op, f).shape == (8, 8, 8)


def test_bad_shape_raises(line):
    with pytest.raises(ValueError):
        lpg.apply(line, np.zeros(7))


def test_list_and_run(tmp_path):
    names = [n for n, _ in lpg.list_experiments()]
    assert "partition" in names
    cfg = {**json.loads((CONFIGS / "minimal.json").read_text()), "output_dir": str(tmp_path)}
    manifest = lpg.run(cfg)
    assert all(o["passed"] for o in manifest["outcomes"])
    assert (tmp_path / "manifest.json").exists()
