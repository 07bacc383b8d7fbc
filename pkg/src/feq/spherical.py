"""K-spherical functions of a central pair and their associated functions.

Spherical functions are the joint eigenvectors of the averaged translation
operators ``(S_y f)(x) = avg_k f(x k y k^-1)`` on the K-central subspace,
normalized to take the value 1 at the identity.
"""

from __future__ import annotations

import numpy as np

from .errors import NormalizationFailure, NotCentralPair
from .funcspace import (
    BASE_TOL,
    central_pair_test,
    default_tol,
    kavg,
    snap,
    orbits_of,
)
from .group import FiniteGroup, Subgroup
from .linalg import joint_eigenspaces, max_commutator, null_space_stacked

DEFAULT_SEED = 0xD1A1
DEDUP_TOL = 1e-6


def canonical_key(values, decimals: int = 8):
    """Sort key for functions: lexicographic in (re, im), larger values first."""
    v = np.round(np.asarray(values, dtype=np.complex128), decimals) + 0.0
    return tuple(x for z in v for x in (-z.real, -z.imag))


def canonical_sort(funcs):
    return sorted(funcs, key=canonical_key)


def dedupe(funcs, tol: float = DEDUP_TOL):
    out = []
    for f in funcs:
        if all(np.max(np.abs(f - g)) >= tol for g in out):
            out.append(f)
    return out


def translation_operator(G: FiniteGroup, K: Subgroup, y: int) -> np.ndarray:
    """Matrix of ``f -> avg_k f(. k y k^-1)``."""
    n = G.order
    S = np.zeros((n, n))
    ks = list(K)
    rows = np.arange(n)
    for k in ks:
        z = G.conj(k, y)
        np.add.at(S, (rows, G.cayley[:, z]), 1.0)
    return S / len(ks)


def spherical_residual(G: FiniteGroup, K: Subgroup, phi) -> float:
    """``max_{x,y} |avg_k phi(x k y k^-1) - phi(x) phi(y)|``."""
    phi = np.asarray(phi, dtype=np.complex128)
    return float(np.max(np.abs(kavg(G, K, phi) - np.outer(phi, phi))))


def _central_basis(G: FiniteGroup, K: Subgroup) -> np.ndarray:
    """Orthonormal basis of the K-central functions: scaled orbit indicators."""
    orbits = orbits_of(G, K)
    E = np.zeros((G.order, len(orbits)))
    for j, o in enumerate(orbits):
        E[o, j] = 1.0 / np.sqrt(len(o))
    return E


def restricted_operators(G: FiniteGroup, K: Subgroup) -> np.ndarray:
    """``S_y`` restricted to the K-central subspace, one per orbit representative."""
    E = _central_basis(G, K)
    reps = [o[0] for o in orbits_of(G, K)]
    return np.array([E.T @ translation_operator(G, K, y) @ E for y in reps])


def compute_spherical_functions(
    G: FiniteGroup, K: Subgroup, seed: int = DEFAULT_SEED, tol: float | None = None
) -> list[np.ndarray]:
    """All K-spherical functions of a central pair, canonically sorted."""
    cp = central_pair_test(G, K)
    if not cp.central:
        raise NotCentralPair("(G, K) is not a central pair", witness=cp.witness)
    ops = restricted_operators(G, K)
    comm, pair = max_commutator(ops)
    if comm > BASE_TOL * max(1, len(ops)):
        raise NotCentralPair(
            "restricted translation operators do not commute",
            witness={"orbit_pair": list(pair), "max_commutator": comm},
        )
    E = _central_basis(G, K)
    spaces = joint_eigenspaces(ops, np.random.default_rng(seed))
    funcs, failed = [], []
    for q in spaces:
        for j in range(q.shape[1]):
            v = E @ q[:, j]
            if abs(v[G.identity]) < 1e-8:
                failed.append(np.round(v, 12).tolist())
                continue
            phi = snap(v / v[G.identity])
            res = spherical_residual(G, K, phi)
            if res > (tol if tol is not None else default_tol(phi)):
                failed.append({"residual": res})
                continue
            funcs.append(phi)
    if failed:
        raise NormalizationFailure(
            f"{len(failed)} joint eigenvector(s) could not be normalized to a spherical function",
            witness=failed,
        )
    funcs = canonical_sort(dedupe(funcs))
    m = len(orbits_of(G, K))
    if len(funcs) != m:
        raise NormalizationFailure(
            f"found {len(funcs)} spherical functions, expected {m} (one per K-orbit)",
            witness={"found": len(funcs), "expected": m},
        )
    return funcs


def associated_function_space(
    G: FiniteGroup, K: Subgroup, phi, rtol: float = 1e-8
) -> list[np.ndarray]:
    """Basis of ``{l : avg_k l(x k y k^-1) = l(x) phi(y) + phi(x) l(y)}``.

    One n x n block of the homogeneous system per y, folded by QR.
    """
    phi = np.asarray(phi, dtype=np.complex128)
    n = G.order
    eye = np.eye(n)

    def blocks():
        for y in range(n):
            B = translation_operator(G, K, y) - phi[y] * eye
            B = B.astype(np.complex128)
            B[:, y] -= phi
            yield B

    N = null_space_stacked(blocks(), n, rtol)
    return [N[:, j] for j in range(N.shape[1])]


def associated_residual(G: FiniteGroup, K: Subgroup, phi, ell) -> float:
    phi = np.asarray(phi, dtype=np.complex128)
    ell = np.asarray(ell, dtype=np.complex128)
    M = kavg(G, K, ell)
    return float(np.max(np.abs(M - np.outer(ell, phi) - np.outer(phi, ell)))) if ell.size else 0.0


def is_spherical(G: FiniteGroup, K: Subgroup, phi, tol: float | None = None) -> bool:
    phi = np.asarray(phi, dtype=np.complex128)
    if tol is None:
        tol = default_tol(phi)
    return bool(np.max(np.abs(phi)) > tol and spherical_residual(G, K, phi) <= tol)


__all__ = [
    "associated_function_space",
    "associated_residual",
    "canonical_key",
    "canonical_sort",
    "compute_spherical_functions",
    "dedupe",
    "is_spherical",
    "restricted_operators",
    "spherical_residual",
    "translation_operator",
]
