"""Polarisation states of the three photons from ortho-positronium decay."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qops import SX, SY, projector, tensor

TWO_PI = 2 * np.pi
DEGENERACY_TOL = 1e-12

SX3 = tensor(SX, SX, SX)
SY3 = tensor(SY, SY, SY)
SZ3 = np.diag([1, -1, -1, 1, -1, 1, 1, -1]).astype(complex)

_BITS = np.array([[(n >> 2) & 1, (n >> 1) & 1, n & 1] for n in range(8)])


class DegenerateKinematics(ValueError):
    """The decay configuration carries no polarisation amplitude."""

    def __init__(self, theta_ab: float, theta_bc: float):
        self.theta_ab = theta_ab
        self.theta_bc = theta_bc
        super().__init__(
            f"degenerate kinematics at theta_ab={theta_ab!r}, theta_bc={theta_bc!r}: "
            "state vector vanishes"
        )


@dataclass(frozen=True)
class DecayAngles:
    """In-plane separation angles (radians) between photons a-b and b-c."""

    theta_ab: float
    theta_bc: float

    def __post_init__(self):
        object.__setattr__(self, "theta_ab", float(self.theta_ab) % TWO_PI)
        object.__setattr__(self, "theta_bc", float(self.theta_bc) % TWO_PI)

    @property
    def theta_ca(self) -> float:
        return (TWO_PI - self.theta_ab - self.theta_bc) % TWO_PI

    def __iter__(self):
        yield self.theta_ab
        yield self.theta_bc


def _angles(angles) -> DecayAngles:
    if isinstance(angles, DecayAngles):
        return angles
    return DecayAngles(*angles)


def base_state() -> np.ndarray:
    """Unnormalised |000> - |110> - |011> - |101> (squared norm 4)."""
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = 1
    psi[0b110] = psi[0b011] = psi[0b101] = -1
    return psi


def kinematic_diagonal(angles) -> np.ndarray:
    """Diagonal of the kinematic operator as a length-8 real vector."""
    ang = _angles(angles)
    s_ab = np.sin(ang.theta_ab / 2) ** 2
    s_mid = np.sin(ang.theta_ab / 2 + ang.theta_bc / 2) ** 2
    s_bc = np.sin(ang.theta_bc / 2) ** 2
    sign = 1 - 2 * _BITS
    return sign[:, 2] * s_ab + sign[:, 1] * s_mid + sign[:, 0] * s_bc


def kinematic_operator(angles) -> np.ndarray:
    return np.diag(kinematic_diagonal(angles)).astype(complex)


def normalization(angles) -> float:
    """Squared norm of the kinematic operator applied to the base state."""
    ang = _angles(angles)
    t1, t2 = ang.theta_ab, ang.theta_bc
    return 0.5 * (
        9
        + np.cos(2 * t1)
        + np.cos(2 * t1 + 2 * t2)
        + np.cos(2 * t2)
        - 4 * (np.cos(t1) + np.cos(t1 + t2) + np.cos(t2))
    )


def _finish(vec: np.ndarray, ang: DecayAngles) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if norm < DEGENERACY_TOL:
        raise DegenerateKinematics(ang.theta_ab, ang.theta_bc)
    return vec / norm


def pure_state(angles, s: int = 0, phi_plane: float = 0.0) -> np.ndarray:
    """Normalised three-photon state for spin projection ``s`` in {-1, 0, 1}.

    The plane factor ``cos(phi) 1 + sin(phi) sx^3`` is applied as an
    operator and the result renormalised.  ``s = +1`` and ``s = -1`` follow
    from the ``s = 0`` state by ``sx^3`` and ``sy^3`` respectively.
    """
    if s not in (-1, 0, 1):
        raise ValueError(f"spin projection must be -1, 0 or 1, got {s!r}")
    ang = _angles(angles)
    raw = kinematic_diagonal(ang) * base_state()
    vec = np.cos(phi_plane) * raw + np.sin(phi_plane) * (SX3 @ raw)
    psi0 = _finish(vec, ang)
    if s == 0:
        return psi0
    if s == 1:
        return SX3 @ psi0
    return SY3 @ psi0


def mixed_state(angles, phi_plane: float = 0.0, p: float = 1 / 3) -> np.ndarray:
    """p |s=0><s=0| + (1-p)/2 (|s=+1><s=+1| + |s=-1><s=-1|)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p must lie in [0, 1], got {p!r}")
    psi0 = pure_state(angles, 0, phi_plane)
    rho = p * projector(psi0)
    if p < 1.0:
        q = 0.5 * (1 - p)
        rho = rho + q * projector(SX3 @ psi0) + q * projector(SY3 @ psi0)
    return rho
