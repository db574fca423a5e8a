import numpy as np
import pytest

from opsent.qops import projector, su2_batch


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(rng, dim=8, rank=None):
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_local_unitaries(rng, n):
    """n stacked 8x8 matrices U_a (x) U_b (x) U_c with Haar single-qubit factors."""
    u = rng.random((n, 3, 3))
    ang = np.stack([2 * np.pi * u[..., 0], np.arccos(1 - 2 * u[..., 1]), 4 * np.pi * u[..., 2]], axis=-1)
    s = su2_batch(ang)
    return np.einsum("nab,ncd,nef->nacebdf", s[:, 0], s[:, 1], s[:, 2]).reshape(n, 8, 8)


def separable_mixture(rng, terms=4):
    w = rng.dirichlet(np.ones(terms))
    rho = np.zeros((8, 8), dtype=complex)
    for p in w:
        psi = np.kron(np.kron(random_state(rng, 2), random_state(rng, 2)), random_state(rng, 2))
        rho += p * projector(psi)
    return rho


def biseparable_mixture(rng, terms=4):
    w = rng.dirichlet(np.ones(terms))
    rho = np.zeros((8, 8), dtype=complex)
    for p in w:
        single = rng.integers(3)
        psi = np.kron(random_state(rng, 2), random_state(rng, 4)).reshape(2, 2, 2)
        psi = np.moveaxis(psi, 0, single).ravel()
        rho += p * projector(psi)
    return rho


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# (number, title, passed, detail) for each acceptance criterion that ran
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {title}: {detail}")
