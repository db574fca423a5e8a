"""Energy-momentum constraints for three coplanar photons in the rest frame.

Energies are quoted as fractions of the total energy E.  For a closed
planar momentum triangle each photon's energy is proportional to the sine
of the angle between the other two photons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import TWO_PI, DecayAngles, _angles

EXTREMAL_EPS = 1e-9
# slack when testing the closure conditions; angles come in as floats
_ANGLE_SLACK = 1e-12


class Infeasible(ValueError):
    """No momentum-conserving energies exist for these angles (region III)."""


class OutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class EnergyFractions:
    wa: float
    wb: float
    wc: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.wa, self.wb, self.wc)

    def max(self) -> float:
        return max(self.as_tuple())

    def min(self) -> float:
        return min(self.as_tuple())


def is_feasible(angles) -> bool:
    """True when the three momenta can close, i.e. no open half-plane holds them all."""
    ang = _angles(angles)
    t1, t2 = ang.theta_ab, ang.theta_bc
    return t1 <= np.pi + _ANGLE_SLACK and t2 <= np.pi + _ANGLE_SLACK and t1 + t2 >= np.pi - _ANGLE_SLACK


def energy_fractions(angles) -> EnergyFractions:
    """Photon energies over E from the sine rule of the momentum triangle.

    Raises :class:`Infeasible` in region III.  Collinear configurations
    (one angle zero, the other two pi) do not fix the split between the two
    parallel photons; the lone photon carries E/2 and the parallel pair is
    returned with E/4 each.
    """
    ang = _angles(angles)
    if not is_feasible(ang):
        raise Infeasible(f"momentum closure impossible at theta_ab={ang.theta_ab!r}, theta_bc={ang.theta_bc!r}")
    t_ca = TWO_PI - ang.theta_ab - ang.theta_bc
    s = np.array([np.sin(ang.theta_bc), np.sin(t_ca), np.sin(ang.theta_ab)])
    s = np.clip(s, 0.0, None)
    total = s.sum()
    if total < 1e-12:
        # collinear: the photon facing the zero angle runs against the other two
        angs = np.array([ang.theta_bc, t_ca, ang.theta_ab])
        lone = int(np.argmin(np.abs(np.sin(angs / 2))))
        w = np.full(3, 0.25)
        w[lone] = 0.5
        return EnergyFractions(*map(float, w))
    w = s / total
    return EnergyFractions(*map(float, w))


def max_energy_fraction(angles) -> float:
    return energy_fractions(angles).max()


def classify_region(angles) -> str:
    """'I' (interior), 'II' (extremal energies) or 'III' (forbidden)."""
    try:
        w = energy_fractions(angles)
    except Infeasible:
        return "III"
    if w.max() >= 0.5 - EXTREMAL_EPS or w.min() <= EXTREMAL_EPS:
        return "II"
    return "I"


def cos_angle_from_energies(wa: float, wb: float) -> float:
    """Cosine of the a-b opening angle from two energy fractions.

    Raises :class:`OutOfRange` when no physical angle exists.
    """
    prod = wa * wb
    if prod < 1e-15:
        raise OutOfRange(f"energy fractions too small: wa={wa!r}, wb={wb!r}")
    c = (0.5 - wa - wb + prod) / prod
    if not -1.0 - 1e-12 <= c <= 1.0 + 1e-12:
        raise OutOfRange(f"cos(theta_ab) = {c:.6g} lies outside [-1, 1]")
    return float(np.clip(c, -1.0, 1.0))


def region_grid(n: int) -> np.ndarray:
    """Region labels on the n x n grid theta = 2 pi k / n, rows indexed by theta_ab."""
    th = TWO_PI * np.arange(n) / n
    return np.array([[classify_region(DecayAngles(a, b)) for b in th] for a in th])
