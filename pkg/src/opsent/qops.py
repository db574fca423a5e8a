"""Small dense linear algebra for one-, two- and three-qubit objects.

Qubit ordering: photon ``a`` is the most significant bit, so the basis
label ``|ijk>`` sits at index ``4*i + 2*j + k``.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}

PHOTONS = ("a", "b", "c")

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
# circular polarisation, (|0> +/- i|1>)/sqrt(2)
KET_PLUS = np.array([1, 1j], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1j], dtype=complex) / np.sqrt(2)


class InvalidDensityMatrix(ValueError):
    pass


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of vectors or matrices."""
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, ops)


def basis_state(label: str) -> np.ndarray:
    """Computational basis ket from a bit string such as ``"011"``."""
    if not label or set(label) - {"0", "1"}:
        raise ValueError(f"invalid basis label {label!r}")
    psi = np.zeros(2 ** len(label), dtype=complex)
    psi[int(label, 2)] = 1.0
    return psi


def ghz_state() -> np.ndarray:
    return (basis_state("000") + basis_state("111")) / np.sqrt(2)


def w_state() -> np.ndarray:
    return (basis_state("001") + basis_state("010") + basis_state("100")) / np.sqrt(3)


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return psi / np.linalg.norm(psi)


def n_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim or n not in (1, 2, 3):
        raise ValueError(f"dimension {dim} is not 2, 4 or 8")
    return n


def _subsystem_indices(keep: Iterable, n: int) -> list[int]:
    out = []
    for k in keep:
        if isinstance(k, str):
            if k not in PHOTONS[:n]:
                raise ValueError(f"unknown subsystem {k!r}")
            k = PHOTONS.index(k)
        k = int(k)
        if not 0 <= k < n:
            raise ValueError(f"subsystem index {k} out of range for {n} qubits")
        out.append(k)
    return sorted(set(out))


def partial_trace(rho: np.ndarray, keep: Iterable) -> np.ndarray:
    """Reduced density matrix on the subsystems in ``keep``.

    ``keep`` holds photon labels (``"a"``, ``"b"``, ``"c"``) or qubit
    indices; it must be a nonempty proper subset of the qubits of ``rho``.
    The kept qubits stay in their original order.
    """
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits(rho.shape[0])
    kept = _subsystem_indices(keep, n)
    if not kept or len(kept) == n:
        raise ValueError("keep must be a nonempty proper subset of the subsystems")
    traced = [q for q in range(n) if q not in kept]
    t = rho.reshape([2] * (2 * n))
    # row axes 0..n-1, column axes n..2n-1
    letters = "abcdefghijklmnop"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for q in traced:
        cols[q] = rows[q]
    out = "".join(rows[q] for q in kept) + "".join(cols[q] for q in kept)
    red = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = 2 ** len(kept)
    return red.reshape(d, d)


def su2(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """exp(i alpha sz/2) exp(i beta sy/2) exp(i gamma sz/2)."""
    return su2_batch(np.array([[alpha, beta, gamma]], dtype=float))[0]


def su2_batch(params: np.ndarray) -> np.ndarray:
    """Vectorised :func:`su2` over the leading axes of ``params[..., 3]``."""
    params = np.asarray(params, dtype=float)
    a, b, g = params[..., 0], params[..., 1], params[..., 2]
    cb, sb = np.cos(b / 2), np.sin(b / 2)
    ep = np.exp(0.5j * (a + g))
    em = np.exp(0.5j * (a - g))
    u = np.empty(params.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = ep * cb
    u[..., 0, 1] = em * sb
    u[..., 1, 0] = -em.conj() * sb
    u[..., 1, 1] = ep.conj() * cb
    return u


def local_unitary(params: Sequence[float]) -> np.ndarray:
    """U_a (x) U_b (x) U_c from nine Euler angles (three per photon)."""
    p = np.asarray(params, dtype=float).reshape(3, 3)
    return tensor(*(su2(*row) for row in p))


def conjugate_local(rho: np.ndarray, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """(U_a (x) U_b (x) U_c) rho (U_a (x) U_b (x) U_c)^dagger."""
    if len(unitaries) != 3:
        raise ValueError("need exactly three single-qubit unitaries")
    u = tensor(*unitaries)
    return u @ np.asarray(rho, dtype=complex) @ u.conj().T


def pauli_string(labels: str | Sequence[str]) -> np.ndarray:
    try:
        return tensor(*(PAULI[p.upper()] for p in labels))
    except KeyError as exc:
        raise ValueError(f"invalid Pauli label in {labels!r}") from exc


def pauli_expectation(rho: np.ndarray, labels: str | Sequence[str]) -> float:
    """Tr(rho P1 (x) P2 (x) P3) for a Pauli string like ``"XYY"``."""
    val = np.trace(np.asarray(rho) @ pauli_string(labels))
    if abs(val.imag) > 1e-10:
        raise InvalidDensityMatrix(f"<{''.join(labels)}> has imaginary part {val.imag:.3g}")
    return float(val.real)


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def check_density_matrix(
    rho: np.ndarray, *, herm_tol: float = 1e-10, trace_tol: float = 1e-10, psd_tol: float = 1e-9
) -> np.ndarray:
    """Raise :class:`InvalidDensityMatrix` unless ``rho`` is a valid state.

    Returns ``rho`` so the call can be chained.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4, 8):
        raise InvalidDensityMatrix(f"bad shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise InvalidDensityMatrix("matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise InvalidDensityMatrix(f"trace is {tr.real:.12g}, expected 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam_min < -psd_tol:
        raise InvalidDensityMatrix(f"negative eigenvalue {lam_min:.3g}")
    return rho
