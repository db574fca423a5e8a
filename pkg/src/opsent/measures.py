"""Bipartite entanglement of the reduced photon states and CKW monogamy."""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .qops import PHOTONS, SY, n_qubits, partial_trace, projector, purity, tensor

SYSY = tensor(SY, SY)


@dataclass(frozen=True)
class MonogamyReport:
    pivot: str
    tangle: float
    c_sq_1: float
    c_sq_2: float
    gap: float
    partners: tuple[str, str] = ("", "")

    def to_dict(self) -> dict:
        return asdict(self)


def _photon(label) -> int:
    if isinstance(label, str):
        return PHOTONS.index(label)
    return int(label)


def concurrence_pure(psi: np.ndarray, part=(0,)) -> float:
    """Concurrence of a pure state across the cut ``part`` | rest.

    Uses sqrt(2 (1 - Tr rho_part^2)), which is the two-qubit concurrence
    for qubit-qubit cuts.
    """
    psi = np.asarray(psi, dtype=complex)
    rho = projector(psi / np.linalg.norm(psi))
    red = partial_trace(rho, part)
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity(red)))))


def concurrence_mixed(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    # lambda_i are the singular values of sqrt(rho) (Y x Y) sqrt(rho)^*; this
    # avoids square roots of noisy near-zero eigenvalues of rho rho~
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    if w.min() < -1e-9:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3g}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return _wootters(root)


def _wootters(factor: np.ndarray) -> float:
    """Concurrence of factor factor^dagger, for any 4 x r factor."""
    lam = np.zeros(4)
    sv = np.linalg.svd(factor.T @ SYSY @ factor, compute_uv=False)
    lam[: min(4, sv.size)] = sv[:4]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def tangle(psi: np.ndarray, pivot="a") -> float:
    """4 det of the pivot photon's reduced state."""
    psi = np.asarray(psi, dtype=complex)
    if n_qubits(psi.shape[0]) != 3:
        raise ValueError("tangle needs a three-qubit pure state")
    rho = projector(psi / np.linalg.norm(psi))
    red = partial_trace(rho, [_photon(pivot)])
    return float(4.0 * np.linalg.det(red).real)


def pair_concurrence(psi: np.ndarray, i, j) -> float:
    """Concurrence between photons i and j of a three-qubit pure state."""
    psi = np.asarray(psi, dtype=complex)
    i, j = _photon(i), _photon(j)
    if i == j:
        raise ValueError("need two distinct photons")
    k = 3 - i - j
    # columns are the (unnormalised) i-j states conditioned on photon k
    amp = np.moveaxis((psi / np.linalg.norm(psi)).reshape(2, 2, 2), (i, j, k), (0, 1, 2))
    return _wootters(amp.reshape(4, 2))


def monogamy_gap(psi: np.ndarray, pivot="a") -> MonogamyReport:
    """Tangle of ``pivot`` minus the squared concurrences it shares pairwise."""
    p = _photon(pivot)
    j, k = (q for q in range(3) if q != p)
    tau = tangle(psi, p)
    c1 = pair_concurrence(psi, p, j) ** 2
    c2 = pair_concurrence(psi, p, k) ** 2
    return MonogamyReport(
        pivot=PHOTONS[p],
        tangle=tau,
        c_sq_1=c1,
        c_sq_2=c2,
        gap=tau - c1 - c2,
        partners=(PHOTONS[j], PHOTONS[k]),
    )
