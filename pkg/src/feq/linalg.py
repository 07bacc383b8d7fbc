"""Dense linear algebra shared by the solvers: joint eigenspaces of commuting
families and null spaces of tall stacked systems."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import DegenerateSplitFailed


def _clusters(w: np.ndarray, tol: float) -> list[list[int]]:
    left = list(np.argsort(w.real, kind="stable"))
    out = []
    while left:
        i = left.pop(0)
        group = [i] + [j for j in left if abs(w[j] - w[i]) <= tol]
        left = [j for j in left if j not in group]
        out.append(group)
    return out


def _orth(V: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return U[:, :rank]


def is_scalar_family(R: np.ndarray, tol: float) -> bool:
    d = R.shape[-1]
    diag = np.trace(R, axis1=1, axis2=2) / d
    return bool(np.max(np.abs(R - diag[:, None, None] * np.eye(d))) <= tol)


def max_commutator(mats: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Largest entry of ``AB - BA`` over all pairs, with the worst pair."""
    worst, pair = 0.0, (0, 0)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = float(np.max(np.abs(mats[i] @ mats[j] - mats[j] @ mats[i])))
            if c > worst:
                worst, pair = c, (i, j)
    return worst, pair


def joint_eigenspaces(
    mats,
    rng: np.random.Generator,
    *,
    max_retries: int = 8,
    cluster_tol: float = 1e-7,
    scalar_tol: float = 1e-8,
) -> list[np.ndarray]:
    """Decompose C^m into the joint eigenspaces of a commuting diagonalizable family.

    A random real combination of the matrices is eigendecomposed; eigenvalue
    clusters give invariant subspaces, and any subspace on which some member
    still acts non-scalarly is split again with a fresh combination of the
    restricted matrices.  Returns orthonormal bases (m x d arrays).
    """
    stack = np.asarray(mats, dtype=np.complex128)
    r, m, _ = stack.shape
    scale = max(1.0, float(np.max(np.abs(stack))))
    out = []
    work = [np.eye(m, dtype=np.complex128)]
    while work:
        Q = work.pop()
        R = np.einsum("ai,rab,bj->rij", Q.conj(), stack, Q)
        if Q.shape[1] == 1 or is_scalar_family(R, scalar_tol * scale):
            out.append(Q)
            continue
        for _ in range(max_retries):
            c = rng.standard_normal(r)
            w, V = np.linalg.eig(np.tensordot(c, R, axes=1))
            groups = _clusters(w, cluster_tol * max(1.0, float(np.max(np.abs(w)))))
            if len(groups) > 1:
                break
        else:
            raise DegenerateSplitFailed(
                f"could not split a {Q.shape[1]}-dimensional subspace after "
                f"{max_retries} random combinations",
                witness={"dimension": Q.shape[1]},
            )
        for g in groups:
            work.append(Q @ _orth(V[:, g]))
    if sum(q.shape[1] for q in out) != m:
        raise DegenerateSplitFailed(
            "joint eigenspaces do not span the space (family not diagonalizable?)",
            witness={"dimensions": [q.shape[1] for q in out], "expected": m},
        )
    return out


def null_space_stacked(blocks: Iterable[np.ndarray], n: int, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (n x d) of the common null space of row blocks.

    Blocks are folded into an n x n triangular factor by repeated QR, so the
    full (rows x n) system never needs to be held in memory.
    """
    R = np.zeros((0, n), dtype=np.complex128)
    for B in blocks:
        R = np.linalg.qr(np.vstack([R, np.asarray(B, dtype=np.complex128)]), mode="r")
    if R.shape[0] == 0:
        return np.eye(n, dtype=np.complex128)
    _, s, Vh = np.linalg.svd(R, full_matrices=True)
    if s[0] == 0:
        return np.eye(n, dtype=np.complex128)
    rank = int(np.sum(s > rtol * s[0]))
    return Vh[rank:].conj().T


def project_residual(basis: np.ndarray, v: np.ndarray) -> float:
    """Max-norm distance from v to its orthogonal projection onto span(basis)."""
    v = np.asarray(v, dtype=np.complex128)
    if basis.shape[1] == 0:
        return float(np.max(np.abs(v)))
    Qb = _orth(basis)
    return float(np.max(np.abs(v - Qb @ (Qb.conj().T @ v))))
