import numpy as np
import pytest

from conftest import random_density_matrix, random_local_unitaries
from opsent.luopt import (
    OptimizerConfig,
    StateKind,
    angle_grid,
    optimize,
    optimize_many,
    restart_draws,
    start_points,
    state_factor,
    sweep,
    witness_after,
)
from opsent.qops import conjugate_local, ghz_state, projector, su2, w_state
from opsent.states import DecayAngles, pure_state
from opsent.witnesses import evaluate

GHZ = projector(ghz_state())
W = projector(w_state())
SMALL = OptimizerConfig(restarts=40)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(local_iterations=0)
    with pytest.raises(ValueError):
        OptimizerConfig(hops=-1)


def test_start_points():
    s = start_points(5, 3)
    assert s.shape == (5, 9)
    assert np.all(s[0] == 0)
    np.testing.assert_array_equal(s, start_points(5, 3))
    # a longer run extends, never reshuffles, a shorter one
    np.testing.assert_array_equal(start_points(8, 3)[:5], s)


def test_hop_offsets_per_restart():
    x5, h5 = restart_draws(5, 9, hops=3)
    x8, h8 = restart_draws(8, 9, hops=3)
    assert h5.shape == (5, 3, 9)
    np.testing.assert_array_equal(x8[:5], x5)
    np.testing.assert_array_equal(h8[:5], h5)
    np.testing.assert_array_equal(restart_draws(5, 9, hops=0)[0], x5)


def test_hops_recover_stalled_descent():
    # a rank-2 state whose Q_SEP optimum lies on a thin cusp set
    rng = np.random.default_rng(7)
    rho = random_density_matrix(rng, rank=2)
    cfg = OptimizerConfig(restarts=20)
    plain = optimize(rho, "SEP", OptimizerConfig(restarts=20, hops=0)).optimized_value
    assert optimize(rho, "SEP", cfg).optimized_value >= plain


def test_state_factor(rng):
    for rank in (1, 3, 8):
        rho = random_density_matrix(rng, rank=rank)
        f = state_factor(rho)
        assert f.shape[1] == rank
        np.testing.assert_allclose(f @ f.conj().T, rho, atol=1e-12)


def test_witness_after_matches_direct(rng):
    rho = random_density_matrix(rng, rank=3)
    for _ in range(10):
        p = rng.uniform(-np.pi, np.pi, 9)
        direct = conjugate_local(rho, [su2(*row) for row in p.reshape(3, 3)])
        for w in ("SEP", "GHZ", "W"):
            assert witness_after(rho, p, w) == pytest.approx(evaluate(direct, w), abs=1e-12)


def test_ghz_identity_start_is_optimal():
    rep = optimize(GHZ, "GHZ", SMALL)
    assert rep.optimized_value == pytest.approx(1, abs=1e-6)
    assert rep.raw_value == pytest.approx(1)


def test_ghz_under_w_witness():
    assert optimize(GHZ, "W", SMALL).optimized_value == pytest.approx(0.75, abs=0.01)


def test_w_under_ghz_witness():
    assert optimize(W, "GHZ", SMALL).optimized_value == pytest.approx(0.628, abs=0.01)


def test_reproducible():
    a = optimize(W, "SEP", OptimizerConfig(restarts=12, seed=7))
    b = optimize(W, "SEP", OptimizerConfig(restarts=12, seed=7))
    assert a.optimized_value == b.optimized_value
    np.testing.assert_array_equal(a.best_params, b.best_params)
    assert a.best_restart == b.best_restart


def test_more_restarts_never_worse(rng):
    rho = random_density_matrix(rng, rank=2)
    lo = optimize(rho, "W", OptimizerConfig(restarts=10, seed=1)).optimized_value
    hi = optimize(rho, "W", OptimizerConfig(restarts=20, seed=1)).optimized_value
    assert hi >= lo


def test_batch_does_not_change_rows(rng):
    rhos = [random_density_matrix(rng, rank=r) for r in (1, 4, 8)]
    cfg = OptimizerConfig(restarts=6)
    together = optimize_many(rhos, "GHZ", cfg)
    for rho, rep in zip(rhos, together):
        alone = optimize(rho, "GHZ", cfg)
        assert alone.optimized_value == rep.optimized_value


def test_bounded_by_one(rng):
    for _ in range(5):
        rho = random_density_matrix(rng)
        for w in ("SEP", "GHZ", "W"):
            assert optimize(rho, w, OptimizerConfig(restarts=8)).optimized_value <= 1 + 1e-9


def test_never_below_raw(rng):
    rho = random_density_matrix(rng, rank=2)
    rep = optimize(rho, "SEP", OptimizerConfig(restarts=2, local_iterations=3))
    assert rep.optimized_value >= rep.raw_value


def test_local_conjugate_invariance(rng):
    rho = projector(pure_state(DecayAngles(2.0, 2.5)))
    u = random_local_unitaries(rng, 1)[0]
    rho2 = u @ rho @ u.conj().T
    for w in ("SEP", "GHZ", "W"):
        a = optimize(rho, w, SMALL).optimized_value
        b = optimize(rho2, w, SMALL).optimized_value
        assert abs(a - b) < 2e-3


def test_report_dict():
    d = optimize(GHZ, "SEP", OptimizerConfig(restarts=2)).to_dict()
    assert d["witness"] == "SEP"
    assert len(d["best_params"]) == 9


class TestSweep:
    def test_grid_order(self):
        g = angle_grid(3)
        assert len(g) == 9
        assert g[1].theta_ab == 0 and g[1].theta_bc == pytest.approx(2 * np.pi / 3)
        with pytest.raises(ValueError):
            angle_grid(1)

    def test_degenerate_marked(self):
        pts = sweep(angle_grid(4), StateKind("pure"), "GHZ", OptimizerConfig(restarts=2))
        deg = [p for p in pts if p.degenerate]
        assert deg and all(p.angles.theta_ab == 0 and p.angles.theta_bc == 0 for p in deg)
        assert all(p.region in ("I", "II", "III") for p in pts)

    def test_mixed_kind(self):
        pts = sweep([(2 * np.pi / 3, 2 * np.pi / 3)], StateKind("mixed"), "GHZ", OptimizerConfig(restarts=8))
        assert pts[0].region == "I"
        assert pts[0].report.optimized_value < 1e-3

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            StateKind("thermal")
        with pytest.raises(ValueError):
            sweep([], StateKind(), "GHZ")


@pytest.mark.slow
def test_table_point_large_opening_angle():
    rho = projector(pure_state(DecayAngles(15 * np.pi / 8, np.pi / 4)))
    assert optimize(rho, "GHZ").optimized_value == pytest.approx(0.76, abs=0.015)
    assert optimize(rho, "W").optimized_value == pytest.approx(0.83, abs=0.015)
