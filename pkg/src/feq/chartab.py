"""Irreducible character tables via class-sum matrices (Burnside-Dixon, numeric).

The class sums span the centre of the group algebra; their structure
constants give commuting matrices whose common eigenvectors are the central
characters ``omega_i = |C_i| chi(C_i) / d``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSplitFailed
from .group import FiniteGroup, conjugacy_classes, orbit_labels
from .linalg import joint_eigenspaces

DEFAULT_SEED = 0xD1A1
TABLE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CharacterTable:
    classes: list[list[int]]
    rows: np.ndarray  # (r, r) complex, rows[a, j] = chi_a(C_j)
    degrees: list[int]

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.classes])

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.classes]

    @property
    def group_order(self) -> int:
        return int(self.sizes.sum())

    def lift(self, a: int, G: FiniteGroup) -> np.ndarray:
        """Row ``a`` as a function on the elements of G."""
        return self.rows[a][orbit_labels(G, self.classes)]

    def row_orthogonality_error(self) -> float:
        X = self.rows
        gram = (X * self.sizes) @ X.conj().T / self.group_order
        return float(np.max(np.abs(gram - np.eye(len(X)))))

    def column_orthogonality_error(self) -> float:
        X = self.rows
        gram = X.T @ X.conj()
        return float(np.max(np.abs(gram - np.diag(self.group_order / self.sizes))))


def class_multiplication_coefficients(G: FiniteGroup, classes=None) -> np.ndarray:
    """``a[i, j, k] = #{(x, y) in C_i x C_j : xy = z}`` for a fixed z in C_k."""
    if classes is None:
        classes = conjugacy_classes(G)
    lab = orbit_labels(G, classes)
    r = len(classes)
    xs = np.arange(G.order)

    def counts_for(z):
        ys = G.cayley[G.inverse[xs], z]  # y = x^-1 z
        out = np.zeros((r, r), dtype=np.int64)
        np.add.at(out, (lab[xs], lab[ys]), 1)
        return out

    a = np.empty((r, r, r), dtype=np.int64)
    for k, cls in enumerate(classes):
        a[:, :, k] = counts_for(cls[0])
    # the count must not depend on the chosen z; check one class with |C| > 1
    for k, cls in enumerate(classes):
        if len(cls) > 1:
            assert np.array_equal(a[:, :, k], counts_for(cls[-1]))
            break
    return a


def _row_key(row: np.ndarray, degree: int):
    vals = np.round(row, 8) + 0.0  # + 0.0 folds -0.0 into 0.0
    return (degree, tuple((-v.real, -v.imag) for v in vals))


def character_table(G: FiniteGroup, seed: int = DEFAULT_SEED, max_retries: int = 8) -> CharacterTable:
    classes = conjugacy_classes(G)
    sizes = np.array([len(c) for c in classes], dtype=float)
    r = len(classes)
    n = G.order
    a = class_multiplication_coefficients(G, classes)
    # M_i[j, k] = a[i, j, k]; omega_i omega_j = sum_k a[i, j, k] omega_k
    mats = a.astype(np.complex128)
    rng = np.random.default_rng(seed)
    spaces = joint_eigenspaces(mats, rng, max_retries=max_retries)
    if any(q.shape[1] != 1 for q in spaces):
        raise DegenerateSplitFailed(
            "class algebra eigenspaces did not separate",
            witness={"dimensions": [q.shape[1] for q in spaces]},
        )
    rows, degrees = [], []
    for q in spaces:
        omega = q[:, 0] / q[0, 0]  # class 0 is {e}, omega_0 = 1
        d2 = n / np.sum(np.abs(omega) ** 2 / sizes)
        d = float(np.sqrt(d2.real))
        deg = int(round(d))
        if abs(d - deg) > 1e-6 or deg < 1:
            raise DegenerateSplitFailed(
                f"recovered degree {d} is not an integer", witness={"degree": d}
            )
        rows.append(deg * omega / sizes)
        degrees.append(deg)
    if sum(d * d for d in degrees) != n:
        raise DegenerateSplitFailed(
            "sum of squared degrees differs from the group order",
            witness={"degrees": degrees},
        )
    order = sorted(range(r), key=lambda i: _row_key(rows[i], degrees[i]))
    table = CharacterTable(
        classes=classes,
        rows=np.array([rows[i] for i in order]),
        degrees=[degrees[i] for i in order],
    )
    for err in (table.row_orthogonality_error(), table.column_orthogonality_error()):
        if err > TABLE_TOL * max(1, n):
            raise DegenerateSplitFailed(
                f"orthogonality check failed (error {err:.3g})", witness={"error": err}
            )
    return table
