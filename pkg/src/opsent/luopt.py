"""Maximise a witness over local-unitary conjugations.

Each restart is an independent Nelder-Mead descent on the nine Euler
angles of U_a (x) U_b (x) U_c, followed by one polishing descent from its
best vertex and a few short perturb-and-descend hops.  The hops matter
for Q_SEP: its sixth-root penalty has a cusp on the thin set where one
diagonal entry vanishes, and a simplex tends to stall beside it.  The kernels are compiled with numba and loop over rows
(restarts, possibly for many states at once); a row's result never depends
on the other rows in the batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np

from . import witnesses as wit
from .kinematics import classify_region
from .qops import projector
from .states import DecayAngles, DegenerateKinematics, mixed_state, pure_state

N_PARAMS = 9
_WITNESS_ID = {"SEP": 0, "GHZ": 1, "W": 2}


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 200
    local_iterations: int = 500
    convergence_tol: float = 1e-7
    seed: int = 0
    initial_step: float = 1.0
    xtol: float = 1e-6
    hops: int = 4
    hop_scale: float = 0.1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.local_iterations < 1:
            raise ValueError("local_iterations must be >= 1")
        if self.hops < 0:
            raise ValueError("hops must be >= 0")


@dataclass
class WitnessReport:
    witness: str
    raw_value: float
    optimized_value: float
    best_params: np.ndarray = field(repr=False)
    restarts_used: int
    converged: bool
    best_restart: int = 0

    def to_dict(self) -> dict:
        return {
            "witness": self.witness,
            "raw_value": self.raw_value,
            "optimized_value": self.optimized_value,
            "best_params": [float(x) for x in self.best_params],
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "best_restart": self.best_restart,
        }


def restart_draws(restarts: int, seed: int, hops: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Initial Euler angles and hop perturbations, one row per restart.

    Restart ``r`` draws from its own generator seeded with ``seed ^ r``, so
    a row never depends on how many restarts run.  Row 0 starts at the
    identity.  Outer angles are uniform and the middle one has density
    sin(beta)/2, which makes each single-photon unitary Haar distributed.
    Hop offsets are standard normal.
    """
    x = np.zeros((restarts, N_PARAMS))
    offsets = np.zeros((restarts, hops, N_PARAMS))
    for r in range(restarts):
        rng = np.random.default_rng(seed ^ r)
        if r > 0:
            u = rng.random((3, 3))
            ang = np.empty((3, 3))
            ang[:, 0] = 2 * np.pi * u[:, 0]
            ang[:, 1] = np.arccos(1 - 2 * u[:, 1])
            ang[:, 2] = 4 * np.pi * u[:, 2]
            x[r] = ang.ravel()
        offsets[r] = rng.standard_normal((hops, N_PARAMS))
    return x, offsets


def start_points(restarts: int, seed: int) -> np.ndarray:
    return restart_draws(restarts, seed)[0]


def state_factor(rho: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """F (8 x r) with rho = F F^dagger, dropping negligible eigenvalues."""
    lam, vec = np.linalg.eigh(np.asarray(rho, dtype=complex))
    keep = lam > tol * max(lam[-1], 1.0)
    if not keep.any():
        keep[-1] = True
    return np.ascontiguousarray(vec[:, keep] * np.sqrt(np.clip(lam[keep], 0.0, None)))


@numba.njit(cache=True)
def _witness_value(fac, p, wid):
    r = fac.shape[1]
    u = np.empty((3, 2, 2), dtype=np.complex128)
    for q in range(3):
        a = p[3 * q]
        b = p[3 * q + 1]
        g = p[3 * q + 2]
        cb = np.cos(0.5 * b)
        sb = np.sin(0.5 * b)
        ep = np.exp(0.5j * (a + g))
        em = np.exp(0.5j * (a - g))
        u[q, 0, 0] = ep * cb
        u[q, 0, 1] = em * sb
        u[q, 1, 0] = -np.conj(em) * sb
        u[q, 1, 1] = np.conj(ep) * cb
    f = fac.copy()
    for q in range(3):
        bit = 4 >> q
        for i0 in range(8):
            if i0 & bit:
                continue
            i1 = i0 | bit
            for k in range(r):
                x0 = f[i0, k]
                x1 = f[i1, k]
                f[i0, k] = u[q, 0, 0] * x0 + u[q, 0, 1] * x1
                f[i1, k] = u[q, 1, 0] * x0 + u[q, 1, 1] * x1
    d = np.zeros(8)
    for i in range(8):
        s = 0.0
        for k in range(r):
            s += f[i, k].real ** 2 + f[i, k].imag ** 2
        d[i] = s
    if wid == 2:
        c12 = 0j
        c14 = 0j
        c24 = 0j
        for k in range(r):
            c12 += f[1, k] * np.conj(f[2, k])
            c14 += f[1, k] * np.conj(f[4, k])
            c24 += f[2, k] * np.conj(f[4, k])
        return 2.0 * (abs(c12) + abs(c14) + abs(c24)) - (
            d[1]
            + d[2]
            + d[4]
            + 2.0 * (np.sqrt(d[0] * d[3]) + np.sqrt(d[0] * d[5]) + np.sqrt(d[0] * d[6]))
        )
    c07 = 0j
    for k in range(r):
        c07 += f[0, k] * np.conj(f[7, k])
    if wid == 0:
        prod = d[1] * d[2] * d[3] * d[4] * d[5] * d[6]
        return 2.0 * abs(c07) - 2.0 * prod ** (1.0 / 6.0)
    return 2.0 * (abs(c07) - np.sqrt(d[6] * d[1]) - np.sqrt(d[5] * d[2]) - np.sqrt(d[3] * d[4]))


@numba.njit(cache=True)
def _nelder_mead_row(fac, x0, wid, step, maxiter, ftol, xtol):
    # minimises the negated witness; standard coefficients 1, 2, 1/2, 1/2
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    for v in range(n + 1):
        sim[v] = x0
        if v > 0:
            sim[v, v - 1] += step
        fs[v] = -_witness_value(fac, sim[v], wid)
    it = 0
    converged = False
    xbar = np.empty(n)
    while it < maxiter:
        order = np.argsort(fs, kind="mergesort")
        sim = sim[order]
        fs = fs[order]
        spread = 0.0
        for v in range(1, n + 1):
            for j in range(n):
                dx = abs(sim[v, j] - sim[0, j])
                if dx > spread:
                    spread = dx
        if fs[n] - fs[0] <= ftol and spread <= xtol:
            converged = True
            break
        it += 1
        for j in range(n):
            s = 0.0
            for v in range(n):
                s += sim[v, j]
            xbar[j] = s / n
        xr = 2.0 * xbar - sim[n]
        fr = -_witness_value(fac, xr, wid)
        if fr < fs[0]:
            xe = 3.0 * xbar - 2.0 * sim[n]
            fe = -_witness_value(fac, xe, wid)
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
        elif fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
        else:
            shrink = False
            if fr < fs[n]:
                xc = 1.5 * xbar - 0.5 * sim[n]
                fc = -_witness_value(fac, xc, wid)
                if fc <= fr:
                    sim[n] = xc
                    fs[n] = fc
                else:
                    shrink = True
            else:
                xcc = 0.5 * xbar + 0.5 * sim[n]
                fcc = -_witness_value(fac, xcc, wid)
                if fcc < fs[n]:
                    sim[n] = xcc
                    fs[n] = fcc
                else:
                    shrink = True
            if shrink:
                for v in range(1, n + 1):
                    sim[v] = sim[0] + 0.5 * (sim[v] - sim[0])
                    fs[v] = -_witness_value(fac, sim[v], wid)
    best = np.argmin(fs)
    return sim[best].copy(), fs[best], it, converged


@numba.njit(cache=True)
def _descend_rows(factors, state_of_row, x0, offsets, wid, step, maxiter, ftol, xtol, hop_step):
    nrow = x0.shape[0]
    xout = np.empty_like(x0)
    vals = np.empty(nrow)
    conv = np.zeros(nrow, dtype=np.bool_)
    for i in range(nrow):
        fac = factors[state_of_row[i]]
        x, f, _, c = _nelder_mead_row(fac, x0[i], wid, step, maxiter, ftol, xtol)
        x, f, _, c = _nelder_mead_row(fac, x, wid, 0.25 * step, maxiter, ftol, xtol)
        for h in range(offsets.shape[1]):
            y, g, _, ch = _nelder_mead_row(fac, x + hop_step * offsets[i, h], wid, hop_step, maxiter, ftol, xtol)
            if g < f:
                x, f, c = y, g, ch
        xout[i] = x
        vals[i] = -f
        conv[i] = c
    return xout, vals, conv


def witness_after(rho: np.ndarray, params: np.ndarray, witness: str) -> float:
    """Witness of rho conjugated by the local unitary with Euler angles ``params``."""
    fac = state_factor(rho).astype(np.complex128)
    return float(_witness_value(fac, np.asarray(params, dtype=float), _WITNESS_ID[wit.witness_name(witness)]))


def optimize_many(
    rhos: Sequence[np.ndarray], witness: str, config: OptimizerConfig = OptimizerConfig()
) -> list[WitnessReport]:
    """Optimise one witness for several density matrices in a single batch."""
    name = wit.witness_name(witness)
    if len(rhos) == 0:
        return []
    facs = [state_factor(r) for r in rhos]
    rank = max(f.shape[1] for f in facs)
    padded = np.zeros((len(facs), 8, rank), dtype=np.complex128)
    for i, f in enumerate(facs):
        padded[i, :, : f.shape[1]] = f
    nr = config.restarts
    starts, offsets = restart_draws(nr, config.seed, config.hops)
    x0 = np.tile(starts, (len(facs), 1))
    offsets = np.tile(offsets, (len(facs), 1, 1))
    state_of_row = np.repeat(np.arange(len(facs)), nr)
    x, values, conv = _descend_rows(
        padded,
        state_of_row,
        x0,
        offsets,
        _WITNESS_ID[name],
        float(config.initial_step),
        int(config.local_iterations),
        float(config.convergence_tol),
        float(config.xtol),
        float(config.hop_scale),
    )
    values = values.reshape(len(facs), nr)
    x = x.reshape(len(facs), nr, N_PARAMS)
    conv = conv.reshape(len(facs), nr)
    fn = wit.witness_function(name)
    reports = []
    for i, rho in enumerate(rhos):
        raw = float(fn(np.asarray(rho)))
        # argmax picks the first maximum: ties go to the lowest restart index
        best = int(np.argmax(values[i]))
        reports.append(
            WitnessReport(
                witness=name,
                raw_value=raw,
                optimized_value=max(float(values[i, best]), raw),
                best_params=x[i, best].copy(),
                restarts_used=nr,
                converged=bool(conv[i, best]),
                best_restart=best,
            )
        )
    return reports


def optimize(rho: np.ndarray, witness: str, config: OptimizerConfig = OptimizerConfig()) -> WitnessReport:
    """Maximise ``witness`` over U_a (x) U_b (x) U_c conjugations of ``rho``."""
    return optimize_many([rho], witness, config)[0]


@dataclass(frozen=True)
class StateKind:
    """Which decay state to build at each grid point."""

    kind: str = "pure"
    s: int = 0
    phi_plane: float = 0.0
    p: float = 1 / 3

    def __post_init__(self):
        if self.kind not in ("pure", "mixed"):
            raise ValueError(f"state kind must be 'pure' or 'mixed', got {self.kind!r}")

    def build(self, angles) -> np.ndarray:
        if self.kind == "pure":
            return projector(pure_state(angles, self.s, self.phi_plane))
        return mixed_state(angles, self.phi_plane, self.p)


@dataclass
class SweepPoint:
    angles: DecayAngles
    region: str
    report: WitnessReport | None

    @property
    def degenerate(self) -> bool:
        return self.report is None


def angle_grid(n: int) -> list[DecayAngles]:
    """n x n grid over [0, 2 pi)^2 in row-major order (theta_ab outer)."""
    if n < 2:
        raise ValueError("grid resolution must be at least 2")
    th = 2 * np.pi * np.arange(n) / n
    return [DecayAngles(a, b) for a in th for b in th]


def sweep(
    angles_grid: Sequence,
    state_kind: StateKind,
    witness: str,
    config: OptimizerConfig = OptimizerConfig(),
) -> list[SweepPoint]:
    """Optimised witness at every grid point, tagged with its kinematic region.

    Points where the state vanishes are returned with ``report=None``.
    """
    if len(angles_grid) == 0:
        raise ValueError("empty angle grid")
    grid = [a if isinstance(a, DecayAngles) else DecayAngles(*a) for a in angles_grid]
    rhos, where = [], []
    for i, ang in enumerate(grid):
        try:
            rhos.append(state_kind.build(ang))
        except DegenerateKinematics:
            continue
        where.append(i)
    reports: list[WitnessReport | None] = [None] * len(grid)
    for i, rep in zip(where, optimize_many(rhos, witness, config)):
        reports[i] = rep
    return [SweepPoint(ang, classify_region(ang), rep) for ang, rep in zip(grid, reports)]
