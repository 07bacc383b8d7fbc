"""Residuals and solvers for the integral d'Alembert and Wilson equations.

    D: avg_k f(x k y k^-1) + mu(y) avg_k f(x k y^-1 k^-1) = 2 f(x) f(y)
    W: avg_k f(x k y k^-1) + mu(y) avg_k f(x k y^-1 k^-1) = 2 f(x) g(y)

Every solver has two routes. The constructive route builds solutions from
spherical functions as ``(phi + mu phi_check) / 2``; the oracle route treats
the equation as a joint eigenproblem (D) or a homogeneous linear system in f
(W) and shares no code with the spherical module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    ConstructionResidualExceeded,
    GNotRecognized,
    NonCommutingFamily,
    NotAWilsonSolution,
    NotCentralPair,
    ResidualExceeded,
    Unclassifiable,
)
from .funcspace import (
    BASE_TOL,
    ck_project,
    default_tol,
    is_central_pair,
    kavg,
    mu_check,
    projection_matrix,
    snap,
)
from .group import FiniteGroup, Subgroup, k_conjugation_orbits, orbit_labels
from .linalg import joint_eigenspaces, max_commutator, null_space_stacked
from .spherical import (
    DEDUP_TOL,
    DEFAULT_SEED,
    associated_function_space,
    associated_residual,
    canonical_key,
    compute_spherical_functions,
    is_spherical,
    spherical_residual,
)


@dataclass
class SolutionReport:
    equation: str
    solutions: list
    residuals: list
    provenance: str
    classification: str | None = None
    details: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.solutions)


def _mu(G: FiniteGroup, mu) -> np.ndarray:
    if mu is None:
        return np.ones(G.order, dtype=np.complex128)
    return np.asarray(mu, dtype=np.complex128)


def _fn(f) -> np.ndarray:
    return np.asarray(f, dtype=np.complex128)


# ---------------------------------------------------------------------------
# pointwise defects and residuals


def wilson_defect(G: FiniteGroup, K: Subgroup, mu, f, g) -> np.ndarray:
    """``W[x, y]``: left side of W minus ``2 f(x) g(y)``."""
    mu, f, g = _mu(G, mu), _fn(f), _fn(g)
    M = kavg(G, K, f)
    return M + mu[None, :] * M[:, G.inverse] - 2 * np.outer(f, g)


def long_defect(G: FiniteGroup, K: Subgroup, mu, g) -> np.ndarray:
    """Four-term defect of the long d'Alembert equation at (x, y)."""
    mu, g = _mu(G, mu), _fn(g)
    M = kavg(G, K, g)
    inv = G.inverse
    # avg_k g(y^-1 k x k^-1) = M[y^-1, x]
    return (
        M
        + mu[None, :] * M[:, inv]
        + M.T
        + mu[None, :] * M[inv, :].T
        - 4 * np.outer(g, g)
    )


def sine_defect(G: FiniteGroup, K: Subgroup, omega, f, symmetrized: bool = False) -> np.ndarray:
    omega, f = _fn(omega), _fn(f)
    M = kavg(G, K, omega)
    cross = np.outer(omega, f) + np.outer(f, omega)
    if symmetrized:
        return M + M.T - 2 * cross
    return M - cross


def dalembert_residual(G: FiniteGroup, K: Subgroup, mu, f) -> float:
    return float(np.max(np.abs(wilson_defect(G, K, mu, f, f))))


def wilson_residual(G: FiniteGroup, K: Subgroup, mu, f, g) -> float:
    return float(np.max(np.abs(wilson_defect(G, K, mu, f, g))))


def long_dalembert_residual(G: FiniteGroup, K: Subgroup, mu, g) -> float:
    return float(np.max(np.abs(long_defect(G, K, mu, g))))


def sine_addition_residual(G: FiniteGroup, K: Subgroup, omega, f, symmetrized: bool = False) -> float:
    return float(np.max(np.abs(sine_defect(G, K, omega, f, symmetrized))))


def twisted_wilson_residual(G: FiniteGroup, K: Subgroup, mu, chi, f, g) -> float:
    """Residual of ``avg_k f(xky) conj(chi(k)) + mu(y) avg_k f(xky^-1) conj(chi(k)) = 2 f(x) g(y)``.

    ``chi`` lists the character values on ``K.elements`` in order.
    """
    mu, f, g = _mu(G, mu), _fn(f), _fn(g)
    chi = np.asarray(chi, dtype=np.complex128)
    t = G.cayley
    N = np.zeros((G.order, G.order), dtype=np.complex128)
    for k, c in zip(K.elements, chi):
        N += f[t[t[:, k]]] * np.conj(c)  # f(x k y)
    N /= K.order
    D = N + mu[None, :] * N[:, G.inverse] - 2 * np.outer(f, g)
    return float(np.max(np.abs(D)))


def fx_deviation(G: FiniteGroup, K: Subgroup, f, x: int) -> np.ndarray:
    """``f_x(y) = avg_k f(x k y k^-1) - f(x) f(y)``."""
    f = _fn(f)
    return kavg(G, K, f)[x] - f[x] * f


# ---------------------------------------------------------------------------
# d'Alembert: construction from spherical functions


def solve_dalembert(
    G: FiniteGroup, K: Subgroup, mu=None, seed: int = DEFAULT_SEED, tol: float | None = None
) -> SolutionReport:
    """All solutions ``(phi + mu phi_check)/2`` over the spherical functions."""
    mu = _mu(G, mu)
    sph = compute_spherical_functions(G, K, seed)
    found = []
    for phi in sph:
        partner = mu_check(G, mu, phi)
        f = snap((phi + partner) / 2)
        res = dalembert_residual(G, K, mu, f)
        bound = tol if tol is not None else default_tol(f)
        if res > bound:
            raise ConstructionResidualExceeded(
                f"constructed solution fails verification (residual {res:.3g})",
                witness={"residual": res, "phi": phi.tolist()},
            )
        if any(np.max(np.abs(f - h[0])) < DEDUP_TOL for h in found):
            continue  # phi and mu phi_check give the same f
        self_paired = bool(np.max(np.abs(phi - partner)) < DEDUP_TOL)
        found.append((f, phi, partner, self_paired, res))
    found.sort(key=lambda item: canonical_key(item[0]))
    return SolutionReport(
        equation="dalembert",
        solutions=[f for f, *_ in found],
        residuals=[r for *_, r in found],
        provenance="constructed-from-spherical",
        details=[
            {"phi": phi, "mu_phi_check": partner, "self_paired": sp}
            for _, phi, partner, sp, _ in found
        ],
    )


# ---------------------------------------------------------------------------
# d'Alembert: joint eigenproblem oracle


def dalembert_operators(G: FiniteGroup, K: Subgroup, mu=None):
    """``A_y = S_y + mu(y) S_{y^-1}`` for one representative y of each K-orbit.

    ``S_y`` is assembled as the uniform average of right translations by the
    orbit of y (the K-average visits each orbit point equally often).
    Returns ``(orbits, labels, mats)``.
    """
    mu = _mu(G, mu)
    orbits = k_conjugation_orbits(G, K)
    labels = orbit_labels(G, orbits)
    n = G.order
    rows = np.arange(n)

    def orbit_shift(orbit):
        S = np.zeros((n, n))
        for z in orbit:
            S[rows, G.cayley[:, z]] += 1.0
        return S / len(orbit)

    shifts = [orbit_shift(o) for o in orbits]
    mats = []
    for o in orbits:
        y = o[0]
        mats.append(shifts[labels[y]] + mu[y] * shifts[labels[G.inverse[y]]])
    return orbits, labels, np.array(mats, dtype=np.complex128)


def _check_commuting(mats, tol, max_pairs=4000, seed=0):
    m = len(mats)
    if m * (m - 1) // 2 <= max_pairs:
        return max_commutator(mats)
    rng = np.random.default_rng(seed)
    worst, pair = 0.0, (0, 0)
    for _ in range(max_pairs):
        i, j = rng.choice(m, size=2, replace=False)
        c = float(np.max(np.abs(mats[i] @ mats[j] - mats[j] @ mats[i])))
        if c > worst:
            worst, pair = c, (int(i), int(j))
    return worst, pair


def solve_dalembert_oracle(
    G: FiniteGroup, K: Subgroup, mu=None, seed: int = DEFAULT_SEED, tol: float | None = None
) -> SolutionReport:
    """D-solutions as normalized joint eigenvectors of ``{A_y}`` on all of C^G.

    A solution satisfies ``A_y f = 2 f(y) f``, so within a joint eigenspace
    with eigenvalues ``lam(y)`` the only candidate is the member closest to
    ``lam / 2``; candidates are normalized at e and kept iff they verify.
    """
    mu = _mu(G, mu)
    orbits, labels, mats = dalembert_operators(G, K, mu)
    comm, pair = _check_commuting(mats, BASE_TOL)
    if comm > BASE_TOL * max(1, G.order):
        reps = [orbits[i][0] for i in pair]
        raise NonCommutingFamily(
            f"A_y family does not commute (max commutator entry {comm:.3g})",
            witness={"y_pair": reps, "max_commutator": comm},
        )
    spaces = joint_eigenspaces(mats, np.random.default_rng(seed))
    found, dims = [], []
    for Q in spaces:
        d = Q.shape[1]
        lam = np.array([np.trace(Q.conj().T @ A @ Q) / d for A in mats])[labels]
        c, *_ = np.linalg.lstsq(Q, lam / 2, rcond=None)
        v = Q @ c
        if abs(v[G.identity]) < 1e-8:
            continue
        f = snap(v / v[G.identity])
        res = dalembert_residual(G, K, mu, f)
        if res <= (tol if tol is not None else default_tol(f)):
            found.append((f, res, d))
    uniq = []
    for item in found:
        if all(np.max(np.abs(item[0] - u[0])) >= DEDUP_TOL for u in uniq):
            uniq.append(item)
    uniq.sort(key=lambda item: canonical_key(item[0]))
    return SolutionReport(
        equation="dalembert",
        solutions=[f for f, _, _ in uniq],
        residuals=[r for _, r, _ in uniq],
        provenance="oracle-eigen",
        details=[{"eigenspace_dim": d} for *_, d in uniq],
        notes={"joint_eigenspaces": len(spaces)},
    )


def same_solution_set(a, b, tol: float = DEDUP_TOL) -> bool:
    """Set equality of two function lists under max-norm distance < tol.

    Mutual containment, so repeated entries in either list do not matter.
    """
    return all(any(np.max(np.abs(f - h)) < tol for h in b) for f in a) and all(
        any(np.max(np.abs(f - h)) < tol for h in a) for f in b
    )


# ---------------------------------------------------------------------------
# Wilson


def _match_generator(report: SolutionReport, g):
    for f, det in zip(report.solutions, report.details):
        if np.max(np.abs(f - g)) < DEDUP_TOL:
            return det
    return None


def solve_wilson(
    G: FiniteGroup, K: Subgroup, mu, g, seed: int = DEFAULT_SEED, tol: float | None = None
) -> SolutionReport:
    """Basis of the f-space for a given d'Alembert solution g (central pairs).

    With ``psi = mu phi_check``: if ``phi != psi`` the space is spanned by
    ``(phi + psi)/2`` and ``(phi - psi)/2``; otherwise by phi together with the
    associated functions l of phi that also satisfy ``l = -mu l_check``.
    """
    mu, g = _mu(G, mu), _fn(g)
    g_tol = tol if tol is not None else default_tol(g)
    if dalembert_residual(G, K, mu, g) > g_tol:
        raise GNotRecognized("g is not a d'Alembert solution", witness={
            "residual": dalembert_residual(G, K, mu, g)})
    dsol = solve_dalembert(G, K, mu, seed)
    det = _match_generator(dsol, g)
    if det is None:
        raise GNotRecognized("g does not match any constructed d'Alembert solution")
    phi, psi = det["phi"], det["mu_phi_check"]
    notes = {"phi": phi}
    if not det["self_paired"]:
        basis = [(phi + psi) / 2, (phi - psi) / 2]
        case = "distinct-pair"
    else:
        case = "self-paired"
        assoc = associated_function_space(G, K, phi)
        notes["associated_dim"] = len(assoc)
        odd = []
        if assoc:
            L = np.column_stack(assoc)
            # keep l with l + mu l_check = 0
            C = L + mu[:, None] * L[G.inverse]
            coeffs = null_space_stacked([C], L.shape[1])
            odd = [L @ coeffs[:, j] for j in range(coeffs.shape[1])]
        notes["odd_associated_dim"] = len(odd)
        basis = [phi] + odd
    residuals = []
    for f in basis:
        res = wilson_residual(G, K, mu, f, g)
        if res > (tol if tol is not None else default_tol(f, g)):
            raise ConstructionResidualExceeded(
                f"basis vector fails the Wilson equation (residual {res:.3g})",
                witness={"residual": res},
            )
        residuals.append(res)
    return SolutionReport(
        equation="wilson",
        solutions=basis,
        residuals=residuals,
        provenance="constructed-from-spherical",
        classification=case,
        notes=notes,
    )


def wilson_operators_all(G: FiniteGroup, K: Subgroup, mu=None):
    """``A_y`` for every element y (indexed by element)."""
    orbits, labels, mats = dalembert_operators(G, K, mu)
    return mats[labels]


def solve_wilson_oracle(
    G: FiniteGroup, K: Subgroup, mu, g, rtol: float = 1e-8
) -> SolutionReport:
    """Null space of ``f -> (A_y f)(x) - 2 g(y) f(x)`` over all (x, y).

    The basis is split along C_K, which maps solutions to solutions: first an
    orthonormal basis of the K-central solutions, then one of the solutions
    killed by C_K (``notes['ck_zero_dim']``).
    """
    mu, g = _mu(G, mu), _fn(g)
    n = G.order
    orbits, labels, mats = dalembert_operators(G, K, mu)
    eye = np.eye(n)
    N = null_space_stacked((mats[labels[y]] - 2 * g[y] * eye for y in range(n)), n, rtol)
    r = N.shape[1]
    if r:
        _, s, Vh = np.linalg.svd(projection_matrix(G, K) @ N)
        s = np.concatenate([s, np.zeros(r - s.size)])
        rank = int(np.sum(s > 1e-8))
        V = Vh.conj().T
        central = N @ V[:, :rank]
        killed = N @ V[:, rank:]
        basis = [central[:, j] for j in range(rank)] + [killed[:, j] for j in range(r - rank)]
    else:
        rank, basis = 0, []
    return SolutionReport(
        equation="wilson",
        solutions=basis,
        residuals=[wilson_residual(G, K, mu, f, g) for f in basis],
        provenance="oracle-nullspace",
        notes={"dimension": r, "ck_nonzero_dim": rank, "ck_zero_dim": r - rank},
    )


@dataclass(frozen=True)
class LinkCheck:
    ck_f_nonzero: bool
    g_dalembert_residual: float
    tol: float

    @property
    def consistent(self) -> bool:
        """False only for a counterexample: C_K f != 0 but g fails D."""
        return (not self.ck_f_nonzero) or self.g_dalembert_residual <= self.tol


def wilson_link_check(G: FiniteGroup, K: Subgroup, mu, f, g, tol: float | None = None) -> LinkCheck:
    mu, f, g = _mu(G, mu), _fn(f), _fn(g)
    if tol is None:
        tol = default_tol(f, g)
    res = wilson_residual(G, K, mu, f, g)
    if res > tol:
        raise NotAWilsonSolution(f"(f, g) has Wilson residual {res:.3g}", witness={"residual": res})
    ck = ck_project(G, K, f)
    return LinkCheck(
        ck_f_nonzero=bool(np.max(np.abs(ck)) > tol),
        g_dalembert_residual=dalembert_residual(G, K, mu, g),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# sine addition classification


@dataclass
class SineClassification:
    case: str
    phi: np.ndarray | None = None
    psi: np.ndarray | None = None
    c: complex | None = None
    distances: dict = field(default_factory=dict)


def classify_sine_pair(
    G: FiniteGroup, K: Subgroup, f, g, seed: int = DEFAULT_SEED, tol: float | None = None
) -> SineClassification:
    """Sort a solution of ``avg_k f(x k y k^-1) = f(x) g(y) + g(x) f(y)`` into
    zero-f, single-spherical (g = phi/2, f = c phi), two-spherical
    (g = (phi+psi)/2, f = c(phi-psi)) or associated (g spherical)."""
    f, g = _fn(f), _fn(g)
    if tol is None:
        tol = default_tol(f, g)
    res = sine_addition_residual(G, K, f, g)
    if res > tol:
        raise Unclassifiable(
            f"(f, g) does not solve the sine addition formula (residual {res:.3g})",
            witness={"residual": res},
        )
    dist = {"zero-f": float(np.max(np.abs(f)))}
    if dist["zero-f"] <= tol:
        return SineClassification("zero-f", distances=dist)

    phi = 2 * g
    c = f[G.identity] / phi[G.identity] if abs(phi[G.identity]) > tol else 0.0
    d2 = max(spherical_residual(G, K, phi), float(np.max(np.abs(f - c * phi))))
    dist["single-spherical"] = d2
    if d2 <= tol and abs(c) > tol and is_spherical(G, K, phi, tol):
        return SineClassification("single-spherical", phi=phi, c=complex(c), distances=dist)

    best = np.inf
    if is_central_pair(G, K):
        sph = compute_spherical_functions(G, K, seed)
        for a, b in combinations(sph, 2):
            dg = float(np.max(np.abs(g - (a + b) / 2)))
            diff = a - b
            cc = np.vdot(diff, f) / np.vdot(diff, diff)
            df = float(np.max(np.abs(f - cc * diff)))
            d3 = max(dg, df)
            best = min(best, d3)
            if d3 <= tol and abs(cc) > tol:
                dist["two-spherical"] = d3
                return SineClassification("two-spherical", phi=a, psi=b, c=complex(cc), distances=dist)
    dist["two-spherical"] = best

    d4 = max(spherical_residual(G, K, g), associated_residual(G, K, g, f))
    dist["associated"] = d4
    if d4 <= tol and is_spherical(G, K, g, tol):
        return SineClassification("associated", phi=g, distances=dist)
    raise Unclassifiable("no case of the classification matched", witness=dist)


# ---------------------------------------------------------------------------
# character formulas


def dalembert_from_character(G: FiniteGroup, mu, chi, tol: float | None = None) -> np.ndarray:
    """``(chi(x) + mu(x) chi(x^-1)) / (2 d)`` with ``d = chi(e)``; K = G."""
    from .group import whole_group

    mu, chi = _mu(G, mu), _fn(chi)
    d = int(round(chi[G.identity].real))
    f = (chi + mu * chi[G.inverse]) / (2 * d)
    res = dalembert_residual(G, whole_group(G), mu, f)
    if res > (tol if tol is not None else default_tol(f)):
        raise ResidualExceeded(f"character formula residual {res:.3g}", witness={"residual": res})
    return f


@dataclass(frozen=True, eq=False)
class TraceProjection:
    values: np.ndarray
    zero: bool
    residual: float
    side_condition_residual: float


def trace_projection_solution(
    G: FiniteGroup, K: Subgroup, mu, chi_pi, chi_delta, tol: float | None = None
) -> TraceProjection:
    """Solution built from a character of G and a character of K.

    ``t(x) = dim(delta) avg_k conj(chi_delta(k)) chi_pi(k x)`` is the trace of
    ``E(delta) pi(x)`` (trace linearity turns the operator average into a
    character sum) and ``f = (t + mu t_check) / (2 dim(delta))``.  On finite
    groups quasi-boundedness and complete irreducibility are automatic; the
    side condition is reported as the max deviation of
    ``avg_k dim(delta) chi_delta(k) f(k^-1 x)`` from ``f(x)``.
    ``chi_delta`` lists values on ``K.elements`` in order.
    """
    if not is_central_pair(G, K):
        raise NotCentralPair("(G, K) is not a central pair")
    mu, chi_pi = _mu(G, mu), _fn(chi_pi)
    chi_delta = np.asarray(chi_delta, dtype=np.complex128)
    ks = np.asarray(K.elements)
    e_pos = K.elements.index(G.identity)
    dim = int(round(chi_delta[e_pos].real))
    t = dim * (np.conj(chi_delta) @ chi_pi[G.cayley[ks]]) / K.order
    f = (t + mu * t[G.inverse]) / (2 * dim)
    side = dim * (chi_delta @ f[G.cayley[G.inverse[ks]]]) / K.order
    side_res = float(np.max(np.abs(side - f)))
    zero_tol = tol if tol is not None else default_tol(chi_pi)
    if np.max(np.abs(f)) <= zero_tol:
        return TraceProjection(np.zeros_like(f), True, 0.0, side_res)
    res = dalembert_residual(G, K, mu, f)
    if res > (tol if tol is not None else default_tol(f)):
        raise ResidualExceeded(f"trace formula residual {res:.3g}", witness={"residual": res})
    return TraceProjection(f, False, res, side_res)
