"""Complex functions on a finite group.

A function on G is a complex vector indexed by element; integrals over K and
G are averages under the normalized counting measure.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import BadIdentity, InvalidFunction, NotMultiplicative, VanishingValue
from .group import (
    FiniteGroup,
    Subgroup,
    commutator_subgroup,
    conjugation_table,
    k_conjugation_orbits,
    orbit_labels,
)

BASE_TOL = 1e-9


def default_tol(*funcs, base: float = BASE_TOL) -> float:
    """``base * max(1, max|f|)`` over all given functions."""
    m = 1.0
    for f in funcs:
        if f is not None and np.size(f):
            m = max(m, float(np.max(np.abs(f))))
    return base * m


def snap(values, decimals: int = 12) -> np.ndarray:
    """Round away floating-point dust (changes values by at most 5e-13)."""
    v = np.round(np.asarray(values, dtype=np.complex128), decimals)
    return v.real + 0.0 + 1j * (v.imag + 0.0)


def as_function(G: FiniteGroup, values) -> np.ndarray:
    f = np.asarray(values, dtype=np.complex128)
    if f.shape != (G.order,):
        raise InvalidFunction(f"expected {G.order} values, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        bad = int(np.nonzero(~np.isfinite(f))[0][0])
        raise InvalidFunction("function has non-finite values", witness=bad)
    return f


@dataclass(frozen=True, eq=False)
class UnitCharacter:
    values: np.ndarray
    unitary: bool

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


# ---------------------------------------------------------------------------
# cached structure of a pair (G, K)


@functools.lru_cache(maxsize=64)
def _pair_structure(G: FiniteGroup, K: Subgroup):
    orbits = k_conjugation_orbits(G, K)
    labels = orbit_labels(G, orbits)
    sizes = np.array([len(o) for o in orbits], dtype=float)
    # P[y, z] = 1/|O_y| if z in O_y: the C_K projection as a matrix
    P = (labels[:, None] == labels[None, :]) / sizes[labels][:, None]
    P.setflags(write=False)
    return orbits, labels, P


def orbits_of(G: FiniteGroup, K: Subgroup) -> list[list[int]]:
    return _pair_structure(G, K)[0]


def projection_matrix(G: FiniteGroup, K: Subgroup) -> np.ndarray:
    """Matrix of C_K."""
    return _pair_structure(G, K)[2]


def kavg(G: FiniteGroup, K: Subgroup, f) -> np.ndarray:
    """``M[x, y] = avg_k f(x k y k^-1)``.

    The map ``k -> k y k^-1`` covers the orbit of y uniformly, so the K-average
    is an orbit average and the whole table is one matrix product.
    """
    f = np.asarray(f)
    return f[G.cayley] @ projection_matrix(G, K).T


def ck_project(G: FiniteGroup, K: Subgroup, f) -> np.ndarray:
    """``(C_K f)(x) = avg_k f(k x k^-1)``."""
    return projection_matrix(G, K) @ np.asarray(f, dtype=np.complex128)


def left_translate(G: FiniteGroup, x: int, f) -> np.ndarray:
    """``(L_x f)(y) = f(x^-1 y)``."""
    f = np.asarray(f)
    return f[G.cayley[G.inverse[x]]]


def check_involution(G: FiniteGroup, f) -> np.ndarray:
    """``f(x^-1)``."""
    return np.asarray(f)[G.inverse]


def mu_check(G: FiniteGroup, mu, f) -> np.ndarray:
    """``mu(x) f(x^-1)``."""
    return np.asarray(mu) * check_involution(G, f)


def convolve(G: FiniteGroup, f, g) -> np.ndarray:
    """``(f*g)(x) = (1/|G|) sum_y f(y) g(y^-1 x)``."""
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    # row y of g[cayley[inverse]] is x -> g(y^-1 x)
    return f @ g[G.cayley[G.inverse]] / G.order


def is_k_central(G: FiniteGroup, K: Subgroup, f, tol: float | None = None) -> bool:
    f = np.asarray(f)
    if tol is None:
        tol = default_tol(f)
    c = conjugation_table(G, K)
    return bool(np.max(np.abs(f[c] - f[None, :])) <= tol)


def kannappan_residual(
    G: FiniteGroup, K: Subgroup, f, samples: int | None = None, seed: int = 0
) -> float:
    """Max over (x, y, z) of the double-average commutation defect.

    ``avg_{k,h} f(z kxk^-1 hyh^-1) - avg_{k,h} f(z kyk^-1 hxh^-1)``.  With
    ``samples`` set, evaluates that many uniformly random triples instead of
    the full O(n^3 |K|^2) scan.
    """
    f = np.asarray(f, dtype=np.complex128)
    t = G.cayley
    P = projection_matrix(G, K)
    n = G.order
    if samples is None:
        worst = 0.0
        for z in range(n):
            R = f[t[t[z]]]  # R[a, b] = f(z a b)
            Q = P @ R @ P.T  # Q[x, y] = avg over a in O_x, b in O_y
            worst = max(worst, float(np.max(np.abs(Q - Q.T))))
        return worst
    rng = np.random.default_rng(seed)
    z, x, y = rng.integers(0, n, size=(3, samples))
    orbits, labels, _ = _pair_structure(G, K)
    worst = 0.0
    for zi, xi, yi in zip(z, x, y):
        ox, oy = np.asarray(orbits[labels[xi]]), np.asarray(orbits[labels[yi]])
        a = f[t[t[zi, ox][:, None], oy[None, :]]].mean()
        b = f[t[t[zi, oy][:, None], ox[None, :]]].mean()
        worst = max(worst, abs(a - b))
    return float(worst)


@dataclass(frozen=True)
class CentralPairResult:
    central: bool
    max_deviation: float
    witness: dict | None

    def __bool__(self):
        return self.central


def central_pair_test(G: FiniteGroup, K: Subgroup, tol: float = BASE_TOL) -> CentralPairResult:
    """Do the K-orbit indicators commute under convolution?

    ``(1_O * 1_O')(x)`` is ``|{(a, b) in O x O' : ab = x}| / |G|``, so the test
    compares integer incidence counts keyed by (orbit, orbit, product).
    """
    orbits, labels, _ = _pair_structure(G, K)
    m, n = len(orbits), G.order
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    prod = G.cayley.ravel()
    key = (labels[a] * m + labels[b]) * n + prod
    swapped = (labels[b] * m + labels[a]) * n + prod
    k1, c1 = np.unique(key, return_counts=True)
    k2, c2 = np.unique(swapped, return_counts=True)
    counts = dict(zip(k1.tolist(), c1.tolist()))
    counts_sw = dict(zip(k2.tolist(), c2.tolist()))
    worst, witness = 0.0, None
    for k in sorted(set(counts) | set(counts_sw)):
        d = abs(counts.get(k, 0) - counts_sw.get(k, 0)) / n
        if d > worst:
            worst = d
            oo, x = divmod(k, n)
            o1, o2 = divmod(oo, m)
            witness = {
                "orbits": [orbits[o1], orbits[o2]],
                "element": int(x),
                "deviation": d,
            }
    central = worst <= tol
    return CentralPairResult(central, worst, None if central else witness)


def is_central_pair(G: FiniteGroup, K: Subgroup, tol: float = BASE_TOL) -> bool:
    return central_pair_test(G, K, tol).central


# ---------------------------------------------------------------------------
# unit characters


def validate_character(G: FiniteGroup, mu, tol: float = BASE_TOL) -> UnitCharacter:
    mu = as_function(G, mu)
    if abs(mu[G.identity] - 1) > tol:
        raise BadIdentity(f"mu(e) = {mu[G.identity]} != 1", witness=G.identity)
    zero = np.nonzero(np.abs(mu) <= tol)[0]
    if zero.size:
        raise VanishingValue("character vanishes", witness=int(zero[0]))
    dev = np.abs(mu[G.cayley] - mu[:, None] * mu[None, :])
    scale = max(1.0, float(np.max(np.abs(mu))) ** 2)
    if np.max(dev) > tol * scale:
        x, y = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise NotMultiplicative(
            f"mu(x y) != mu(x) mu(y) at x={G.names[x]}, y={G.names[y]}",
            witness=[int(x), int(y)],
        )
    unitary = bool(np.max(np.abs(np.abs(mu) - 1)) <= tol)
    return UnitCharacter(mu, unitary)


def trivial_character(G: FiniteGroup) -> UnitCharacter:
    return UnitCharacter(np.ones(G.order, dtype=np.complex128), True)


def _angle_key(values):
    turns = np.mod(np.angle(values) / (2 * np.pi), 1.0)
    turns = np.round(turns, 9) % 1.0
    return tuple(turns.tolist())


def enumerate_unit_characters(G: FiniteGroup) -> list[UnitCharacter]:
    """All homomorphisms G -> C*, lifted from the dual of G/[G,G].

    Ordered by the angles of their values (in turns) element by element, so
    the trivial character comes first and on Z_n the j-th entry is
    ``x -> exp(2 pi i j x / n)``.
    """
    from .chartab import character_table  # chartab depends on this module
    from .group import group_from_cayley

    N = commutator_subgroup(G)
    coset_of = np.full(G.order, -1)
    reps = []
    for x in range(G.order):
        if coset_of[x] >= 0:
            continue
        members = [int(G.cayley[x, k]) for k in N.elements]
        coset_of[members] = len(reps)
        reps.append(x)
    q = len(reps)
    table = [[int(coset_of[G.cayley[a, b]]) for b in reps] for a in reps]
    Q = group_from_cayley(table)
    ct = character_table(Q)
    lifted = []
    for row in ct.rows:
        # abelian quotient: every class is a singleton, class i is element classes[i][0]
        on_q = np.empty(q, dtype=np.complex128)
        for ci, cls in enumerate(ct.classes):
            on_q[cls[0]] = row[ci]
        mu = on_q[coset_of]
        mu = snap(mu / np.abs(mu))  # values are roots of unity
        lifted.append(validate_character(G, mu, tol=1e-8))
    lifted.sort(key=lambda c: _angle_key(c.values))
    return [UnitCharacter(c.values, True) for c in lifted]
