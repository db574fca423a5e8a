from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opsent.kinematics import (
    Infeasible,
    OutOfRange,
    classify_region,
    cos_angle_from_energies,
    energy_fractions,
    is_feasible,
    max_energy_fraction,
    region_grid,
)
from opsent.states import DecayAngles

PI = np.pi
GOLDEN = Path(__file__).parent / "data" / "regions_200.txt"


def closure_oracle(t_ab, t_bc):
    """Energies from a direct linear solve of p_a + p_b + p_c = 0 with |p_a| = 1.

    Photons are taken counter-clockwise a -> b -> c, so both stated angles
    must be at most pi.  Returns normalised fractions, or None when the
    orientation is reversed or some energy would be negative.
    """
    if t_ab > PI + 1e-12 or t_bc > PI + 1e-12:
        return None
    dirs = [np.array([np.cos(t), np.sin(t)]) for t in (0.0, t_ab, t_ab + t_bc)]
    m = np.column_stack([dirs[1], dirs[2]])
    if abs(np.linalg.det(m)) < 1e-9:
        return None
    wb, wc = np.linalg.solve(m, -dirs[0])
    w = np.array([1.0, wb, wc])
    if np.any(w < -1e-9):
        return None
    return w / w.sum()


class TestEnergyFractions:
    def test_symmetric(self):
        w = energy_fractions((2 * PI / 3, 2 * PI / 3))
        np.testing.assert_allclose(w.as_tuple(), (1 / 3, 1 / 3, 1 / 3), atol=1e-12)

    def test_symmetric_satisfies_momentum_relation(self):
        # (1/2 - 2/3 + 1/9) / (1/9) = -1/2
        assert cos_angle_from_energies(1 / 3, 1 / 3) == pytest.approx(-0.5, abs=1e-12)

    @pytest.mark.parametrize("angles", [(PI / 4, PI / 2), (0.1, 0.2), (PI / 16, PI / 16), (1.2, 1.9)])
    def test_half_plane_is_infeasible(self, angles):
        assert sum(angles) < PI
        with pytest.raises(Infeasible):
            energy_fractions(angles)

    def test_reflex_angle_is_infeasible(self):
        with pytest.raises(Infeasible):
            energy_fractions((1.5 * PI, 0.75 * PI))

    def test_matches_linear_solve(self, rng):
        hits = 0
        for t1, t2 in rng.uniform(0, 2 * PI, size=(400, 2)):
            ref = closure_oracle(t1, t2)
            if ref is None:
                assert not is_feasible((t1, t2))
                continue
            hits += 1
            np.testing.assert_allclose(energy_fractions((t1, t2)).as_tuple(), ref, atol=1e-9)
        assert hits > 30

    def test_collinear(self):
        w = energy_fractions((PI, PI))
        assert w.wb == pytest.approx(0.5)
        assert w.wa + w.wc == pytest.approx(0.5)


class TestRegions:
    def test_examples(self):
        assert classify_region((2 * PI / 3, 2 * PI / 3)) == "I"
        assert classify_region((PI, PI)) == "II"
        assert classify_region((PI / 16, PI / 16)) == "III"
        assert classify_region((PI, PI / 2)) == "II"

    @given(st.floats(0, 2 * PI, exclude_max=True), st.floats(0, 2 * PI, exclude_max=True))
    def test_symmetric_in_angles(self, t1, t2):
        assert classify_region((t1, t2)) == classify_region((t2, t1))

    @given(st.floats(0, 2 * PI, exclude_max=True), st.floats(0, 2 * PI, exclude_max=True))
    def test_fractions_bounded(self, t1, t2):
        try:
            w = energy_fractions((t1, t2))
        except Infeasible:
            return
        assert sum(w.as_tuple()) == pytest.approx(1, abs=1e-12)
        assert max(w.as_tuple()) <= 0.5 + 1e-12
        assert min(w.as_tuple()) >= 0

    def test_golden_grid(self):
        expected = [line.strip() for line in GOLDEN.read_text().splitlines() if line.strip()]
        got = region_grid(200)
        code = {"I": "1", "II": "2", "III": "3"}
        assert ["".join(code[c] for c in row) for row in got] == expected

    def test_golden_grid_against_oracle(self):
        rows = GOLDEN.read_text().split()
        th = 2 * PI * np.arange(200) / 200
        for i in range(0, 200, 3):
            for j in range(0, 200, 3):
                ref = closure_oracle(th[i], th[j])
                label = rows[i][j]
                if ref is None:
                    assert label in "23"
                elif ref.max() < 0.5 - 1e-6 and ref.min() > 1e-6:
                    assert label == "1", (i, j)

    def test_region_one_is_the_triangle(self):
        g = region_grid(200)
        assert (g == "I").sum() == 99 * 98 // 2

    def test_wraps_angles(self):
        assert classify_region(DecayAngles(2 * PI + 2 * PI / 3, -4 * PI / 3)) == "I"


class TestMaxEnergy:
    def test_symmetric(self):
        assert max_energy_fraction((2 * PI / 3, 2 * PI / 3)) == pytest.approx(1 / 3)

    def test_region_two_is_half(self):
        th = 2 * PI * np.arange(40) / 40
        for a in th:
            for b in th:
                if classify_region((a, b)) == "II":
                    assert max_energy_fraction((a, b)) == pytest.approx(0.5, abs=1e-9)

    def test_grows_towards_boundary(self):
        assert max_energy_fraction((PI / 2 + 0.05, PI / 2 + 0.05)) > max_energy_fraction((2 * PI / 3, 2 * PI / 3))

    def test_infeasible_propagates(self):
        with pytest.raises(Infeasible):
            max_energy_fraction((0.1, 0.1))


class TestCosFromEnergies:
    def test_examples(self):
        assert cos_angle_from_energies(1 / 3, 1 / 3) == pytest.approx(-0.5)
        assert cos_angle_from_energies(0.5, 0.5) == pytest.approx(-1.0)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            cos_angle_from_energies(0.1, 0.1)

    def test_division_guard(self):
        with pytest.raises(OutOfRange):
            cos_angle_from_energies(1e-9, 1e-9)

    def test_round_trip_region_one(self):
        th = 2 * PI * np.arange(50) / 50
        n = 0
        for a in th:
            for b in th:
                if classify_region((a, b)) != "I":
                    continue
                w = energy_fractions((a, b))
                assert cos_angle_from_energies(w.wa, w.wb) == pytest.approx(np.cos(a), abs=1e-9)
                n += 1
        assert n > 250
