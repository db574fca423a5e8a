"""Nonlinear separability criteria built from density-matrix elements.

All criteria accept a single 8x8 matrix or a stack ``(..., 8, 8)``; a
positive value certifies entanglement (``q_sep``) or genuine multipartite
entanglement (``q_ghz``, ``q_w``).  A non-positive value proves nothing.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

WITNESSES = ("SEP", "GHZ", "W")

# The Pauli strings needed to rebuild <000|rho|111>.
PAULI_XY = ("XXX", "XYY", "YXY", "YYX", "XXY", "XYX", "YXX", "YYY")


def _diag(rho):
    return np.clip(np.real(np.diagonal(rho, axis1=-2, axis2=-1)), 0.0, None)


def q_sep(rho):
    """2|rho_{000,111}| - 2 (product of the six mixed-weight diagonals)^(1/6)."""
    rho = np.asarray(rho)
    d = _diag(rho)
    prod = d[..., 1] * d[..., 2] * d[..., 3] * d[..., 4] * d[..., 5] * d[..., 6]
    return 2 * np.abs(rho[..., 0, 7]) - 2 * prod ** (1 / 6)


def q_ghz(rho):
    rho = np.asarray(rho)
    d = _diag(rho)
    pen = np.sqrt(d[..., 6] * d[..., 1]) + np.sqrt(d[..., 5] * d[..., 2]) + np.sqrt(d[..., 3] * d[..., 4])
    return 2 * (np.abs(rho[..., 0, 7]) - pen)


def q_w(rho):
    rho = np.asarray(rho)
    d = _diag(rho)
    coh = np.abs(rho[..., 1, 2]) + np.abs(rho[..., 1, 4]) + np.abs(rho[..., 2, 4])
    pen = d[..., 1] + d[..., 2] + d[..., 4] + 2 * (
        np.sqrt(d[..., 0] * d[..., 3]) + np.sqrt(d[..., 0] * d[..., 5]) + np.sqrt(d[..., 0] * d[..., 6])
    )
    return 2 * coh - pen


_BY_NAME = {"SEP": q_sep, "GHZ": q_ghz, "W": q_w}
_ALIASES = {"QSEP": "SEP", "QGHZ": "GHZ", "QW": "W"}


def witness_name(name: str) -> str:
    key = name.upper().replace("_", "")
    key = _ALIASES.get(key, key)
    if key not in _BY_NAME:
        raise ValueError(f"unknown witness {name!r}; choose from {', '.join(WITNESSES)}")
    return key


def witness_function(witness: str):
    return _BY_NAME[witness_name(witness)]


def evaluate(rho, witness: str):
    return witness_function(witness)(rho)


def _bits(label) -> tuple[int, int, int]:
    if isinstance(label, str):
        if len(label) != 3 or set(label) - {"0", "1"}:
            raise ValueError(f"invalid basis label {label!r}")
        return tuple(int(c) for c in label)
    if isinstance(label, (int, np.integer)):
        return ((label >> 2) & 1, (label >> 1) & 1, label & 1)
    return tuple(int(b) for b in label)


def _index(bits) -> int:
    return 4 * bits[0] + 2 * bits[1] + bits[2]


def partitions(k: int) -> list[list[tuple[int, ...]]]:
    """All partitions of the photons {0, 1, 2} into exactly ``k`` blocks."""
    if k == 1:
        return [[(0, 1, 2)]]
    if k == 3:
        return [[(0,), (1,), (2,)]]
    if k == 2:
        return [[(q,), tuple(r for r in range(3) if r != q)] for q in range(3)]
    raise ValueError(f"k must be 1, 2 or 3, got {k}")


def _swap(chi1, chi2, block):
    c1, c2 = list(chi1), list(chi2)
    for q in block:
        c1[q], c2[q] = chi2[q], chi1[q]
    return c1, c2


def q_generic(rho, seed=("000", "111"), k: int = 2) -> float:
    """k-separability criterion for the seed product state |chi1>|chi2>.

    The two-copy expectation values reduce to products of single-copy
    entries, so rho (x) rho is never formed.  The result carries an
    overall factor 2 so that ``k=3`` and ``k=2`` with seed (000, 111)
    coincide with :func:`q_sep` and :func:`q_ghz`.
    """
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    chi1, chi2 = _bits(seed[0]), _bits(seed[1])
    if chi1 == chi2:
        raise ValueError("seed states must differ")
    rho = np.asarray(rho)
    d = _diag(rho)
    i1, i2 = _index(chi1), _index(chi2)
    # <chi| rho(x)rho P_total |chi> = rho[c1,c2] rho[c2,c1] = |rho[c1,c2]|^2
    total = np.abs(rho[..., i1, i2])
    acc = 0.0
    for part in partitions(k):
        prod = 1.0
        for block in part:
            c1, c2 = _swap(chi1, chi2, block)
            prod = prod * d[..., _index(c1)] * d[..., _index(c2)]
        acc = acc + prod ** (1 / (2 * k))
    return 2 * (total - acc)


def element_from_pauli(expectations: Mapping[str, float]) -> complex:
    """Rebuild <000|rho|111> from the eight X/Y Pauli-string expectations."""
    missing = [s for s in PAULI_XY if s not in expectations]
    if missing:
        raise KeyError(f"missing expectation values: {', '.join(missing)}")
    e = expectations
    re = e["XXX"] - e["XYY"] - e["YXY"] - e["YYX"]
    im = e["XXY"] + e["XYX"] + e["YXX"] - e["YYY"]
    return complex(re, -im) / 8


def seed_pairs() -> Sequence[tuple[str, str]]:
    labels = [format(n, "03b") for n in range(8)]
    return list(combinations(labels, 2))
