"""
Small dense linear-algebra helpers shared by the coin, attractor and analytic
modules: orthonormalization, phase conventions and eigenvalue clustering.
"""
from __future__ import annotations

from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray


RANK_TOL = 1e-9


def fix_phase(vec: NDArray[np.complex128], tol: float = 1e-12) -> NDArray[np.complex128]:
    """
    Multiply by a global phase so the first component with modulus above
    `tol` is real and positive.
    """
    vec = np.asarray(vec, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(vec) > tol)
    if nz.size == 0:
        return vec.copy()
    lead = vec[nz[0]]
    return vec * (abs(lead) / lead)


def mgs(
    columns: NDArray[np.complex128],
    *,
    rel_tol: float = RANK_TOL,
) -> Tuple[NDArray[np.complex128], List[int]]:
    """
    Modified Gram-Schmidt with one reorthogonalization pass.

    Columns whose residual norm falls below `rel_tol` times their input norm
    are dropped as linearly dependent. Returns the (d, rank) basis and the
    indices of the input columns that produced it.
    """
    columns = np.asarray(columns, dtype=np.complex128)
    d = columns.shape[0]
    basis: List[NDArray[np.complex128]] = []
    kept: List[int] = []
    for k in range(columns.shape[1]):
        x = columns[:, k].copy()
        norm0 = np.linalg.norm(x)
        if norm0 == 0.0:
            continue
        for _ in range(2):
            for q in basis:
                x -= np.vdot(q, x) * q
        norm1 = np.linalg.norm(x)
        if norm1 < rel_tol * norm0:
            continue
        basis.append(x / norm1)
        kept.append(k)
    if not basis:
        return np.zeros((d, 0), dtype=np.complex128), kept
    return np.stack(basis, axis=1), kept


def orthonormalize(columns: NDArray[np.complex128], *, rel_tol: float = RANK_TOL) -> NDArray[np.complex128]:
    """Orthonormal basis of the column span, shape (d, rank)."""
    return mgs(columns, rel_tol=rel_tol)[0]


def cluster_phases(values: NDArray[np.complex128], tol: float) -> List[List[int]]:
    """
    Group unit-modulus values whose phase distance is below `tol`.

    Groups and the indices inside them come out sorted by phase in [0, 2pi).
    """
    values = np.asarray(values, dtype=np.complex128)
    phases = np.mod(np.angle(values), 2 * np.pi)
    phases[phases > 2 * np.pi - tol] -= 2 * np.pi
    order = np.argsort(phases, kind="stable")
    groups: List[List[int]] = []
    for idx in order:
        if groups:
            ref = values[groups[-1][0]]
            if abs(np.angle(values[idx] / ref)) < tol:
                groups[-1].append(int(idx))
                continue
        groups.append([int(idx)])
    return groups


def max_abs(a: NDArray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0
