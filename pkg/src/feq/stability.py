"""Quantitative inequalities behind the superstability argument, checked pointwise.

On a finite group every function is bounded, so the bounded-or-exact
dichotomy says nothing; the triangle-inequality steps it rests on do hold
for every pair (f, g) and are verified here with witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonUnitaryMu
from .funcspace import BASE_TOL
from .equations import (
    long_defect,
    solve_dalembert_oracle,
    solve_wilson_oracle,
    wilson_defect,
)
from .group import FiniteGroup, Subgroup

DEFAULT_SEED = 0xD1A1


@dataclass(frozen=True)
class BoundCheck:
    tag: str
    passed: bool
    slack: float  # min over points of rhs - lhs; negative means violated
    witness: tuple


@dataclass
class StabilityReport:
    delta: float
    bound_checks: list = field(default_factory=list)
    perturbation: list | None = None


def _unitary(G: FiniteGroup, mu) -> np.ndarray:
    if mu is None:
        return np.ones(G.order, dtype=np.complex128)
    mu = np.asarray(mu, dtype=np.complex128)
    dev = np.abs(np.abs(mu) - 1)
    if np.max(dev) > BASE_TOL:
        x = int(np.argmax(dev))
        raise NonUnitaryMu(f"|mu| != 1 at element {G.names[x]}", witness=x)
    return mu


def _tol(f, g) -> float:
    s = max(1.0, float(np.max(np.abs(f))), float(np.max(np.abs(g))))
    return BASE_TOL * s * s


def wilson_sup_residual(G: FiniteGroup, K: Subgroup, mu, f, g) -> float:
    mu = _unitary(G, mu)
    return float(np.max(np.abs(wilson_defect(G, K, mu, f, g))))


def _result(tag, slack_arr, tol):
    idx = np.unravel_index(int(np.argmin(slack_arr)), slack_arr.shape)
    s = float(slack_arr[idx])
    return BoundCheck(tag, s >= -tol, s, tuple(int(i) for i in idx))


def check_inversion_bound(G: FiniteGroup, K: Subgroup, mu, f, g) -> BoundCheck:
    """``|2 f(x)| |g(y) - mu(y) g(y^-1)| <= 2 delta`` for all x, y."""
    mu = _unitary(G, mu)
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    delta = wilson_sup_residual(G, K, mu, f, g)
    lhs = 2 * np.abs(f)[:, None] * np.abs(g - mu * g[G.inverse])[None, :]
    return _result("inversion", 2 * delta - lhs, _tol(f, g))


def check_long_equation_bound(
    G: FiniteGroup, K: Subgroup, mu, f, g, g_weight: float = 2.0
) -> BoundCheck:
    """``2|f(z)| |L_g(x, y)| <= (8 + w|g(x)| + w|g(y)|) delta`` for all x, y, z.

    ``L_g`` is the long d'Alembert defect of g.  The default weight w = 2 is
    what the triangle-inequality chain delivers; w = 1 is a strictly
    stronger claim that fails, e.g. for f = 1, g = 5, mu = 1.
    Witness is (x, y, z).
    """
    mu = _unitary(G, mu)
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    delta = wilson_sup_residual(G, K, mu, f, g)
    L = np.abs(long_defect(G, K, mu, g))
    ag = np.abs(g)
    z = int(np.argmax(np.abs(f)))  # the worst z maximizes |f(z)|
    lhs = 2 * abs(f[z]) * L
    rhs = (8 + g_weight * ag[:, None] + g_weight * ag[None, :]) * delta
    check = _result("long-equation", rhs - lhs, _tol(f, g))
    return BoundCheck(check.tag, check.passed, check.slack, check.witness + (z,))


def check_wilson_propagation_bound(
    G: FiniteGroup, K: Subgroup, mu, f, g, chunk: int = 64
) -> BoundCheck:
    """``2|g(z)| |W(x, y)| <= (8 + 2|g(y)|) delta + 2|f(x)| |L_g(y, z)|``.

    ``W`` is the pointwise Wilson defect of (f, g).  Witness is (x, y, z).
    """
    mu = _unitary(G, mu)
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    W = np.abs(wilson_defect(G, K, mu, f, g))
    delta = float(W.max())
    L = np.abs(long_defect(G, K, mu, g))
    af, ag = np.abs(f), np.abs(g)
    tol = _tol(f, g)
    best = None
    base = ((8 + 2 * ag) * delta)[None, :, None]
    for start in range(0, G.order, chunk):
        xs = slice(start, start + chunk)
        lhs = 2 * W[xs][:, :, None] * ag[None, None, :]
        rhs = base + 2 * af[xs][:, None, None] * L[None, :, :]
        slack = rhs - lhs
        idx = np.unravel_index(int(np.argmin(slack)), slack.shape)
        s = float(slack[idx])
        if best is None or s < best[0]:
            best = (s, (idx[0] + start, int(idx[1]), int(idx[2])))
    s, wit = best
    return BoundCheck("wilson-propagation", s >= -tol, s, tuple(int(i) for i in wit))


def bound_checks(G: FiniteGroup, K: Subgroup, mu, f, g) -> StabilityReport:
    return StabilityReport(
        delta=wilson_sup_residual(G, K, mu, f, g),
        bound_checks=[
            check_inversion_bound(G, K, mu, f, g),
            check_long_equation_bound(G, K, mu, f, g),
            check_wilson_propagation_bound(G, K, mu, f, g),
        ],
    )


# ---------------------------------------------------------------------------
# perturbation


def disc_noise(rng: np.random.Generator, n: int, epsilon: float) -> np.ndarray:
    """Uniform samples on the closed complex disc of radius epsilon."""
    r = epsilon * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return r * np.exp(1j * theta)


def _subspace_distance(B: np.ndarray, v: np.ndarray) -> float:
    """Max-norm of v minus its least-squares projection onto span(B)."""
    if B.shape[1] == 0:
        return float(np.max(np.abs(v)))
    c, *_ = np.linalg.lstsq(B, v, rcond=None)
    return float(np.max(np.abs(v - B @ c)))


def distance_to_solutions(G: FiniteGroup, K: Subgroup, mu, f, g, dsols, base_f=None) -> float:
    """Upper bound on the max-norm distance from (f, g) to the exact W-solution set.

    Exact solutions are (0, anything) and (h, g0) with g0 a d'Alembert
    solution and h in the f-space of g0.  Within an f-space the distance is
    bounded by the projection residual, or by ``|f - base_f|`` when base_f is
    a known member of that space.
    """
    best = float(np.max(np.abs(f)))
    for g0 in dsols:
        dg = float(np.max(np.abs(g - g0)))
        if dg >= best:
            continue
        space = solve_wilson_oracle(G, K, mu, g0)
        B = np.column_stack(space.solutions) if space.solutions else np.zeros((G.order, 0))
        df = _subspace_distance(B, f)
        if base_f is not None and B.shape[1]:
            c, *_ = np.linalg.lstsq(B, base_f, rcond=None)
            if np.max(np.abs(B @ c - base_f)) <= BASE_TOL:
                df = min(df, float(np.max(np.abs(f - base_f))))
        best = min(best, max(dg, df))
    return best


def perturbation_probe(
    G: FiniteGroup,
    K: Subgroup,
    mu,
    base,
    epsilon: float,
    seed: int = DEFAULT_SEED,
    trials: int = 1,
) -> StabilityReport:
    """Perturb an exact solution pair by disc noise and measure delta and distance.

    Trial i draws from ``default_rng([seed, i])``.
    """
    mu = _unitary(G, mu)
    f0 = np.asarray(base[0], dtype=np.complex128)
    g0 = np.asarray(base[1], dtype=np.complex128)
    dsols = solve_dalembert_oracle(G, K, mu, seed).solutions
    bound = (2 + 2 * (np.max(np.abs(f0)) + np.max(np.abs(g0)) + epsilon)) * epsilon
    rows = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        f = f0 + disc_noise(rng, G.order, epsilon)
        g = g0 + disc_noise(rng, G.order, epsilon)
        delta = wilson_sup_residual(G, K, mu, f, g)
        rows.append({
            "epsilon": epsilon,
            "delta": delta,
            "delta_bound": float(bound),
            "distance": distance_to_solutions(G, K, mu, f, g, dsols, base_f=f0),
        })
    return StabilityReport(
        delta=max((r["delta"] for r in rows), default=0.0),
        bound_checks=[],
        perturbation=rows,
    )


# ---------------------------------------------------------------------------
# fuzzing


def random_pair(G: FiniteGroup, K: Subgroup, rng: np.random.Generator, kind: str, dsols=()):
    """A test pair of one of the kinds ``random``, ``central``, ``near`` or ``constant``."""
    from .funcspace import ck_project

    n = G.order
    if kind == "random":
        scale = rng.uniform(0.1, 3.0)
        return disc_noise(rng, n, scale), disc_noise(rng, n, scale)
    if kind == "central":
        return (
            ck_project(G, K, disc_noise(rng, n, 2.0)),
            ck_project(G, K, disc_noise(rng, n, 2.0)),
        )
    if kind == "near" and len(dsols):
        g = dsols[rng.integers(len(dsols))]
        a = rng.normal() + 1j * rng.normal()
        eps = 10.0 ** rng.uniform(-6, -1)
        return a * g + disc_noise(rng, n, eps), g + disc_noise(rng, n, eps)
    c = disc_noise(rng, 2, 6.0)
    return np.full(n, c[0]), np.full(n, c[1])


FUZZ_KINDS = ("random", "central", "near", "constant")


def fuzz_bounds(
    G: FiniteGroup, K: Subgroup, mu, trials: int, seed: int = DEFAULT_SEED, dsols=None
) -> dict:
    """Run the three bound checks on ``trials`` seeded pairs; summarize per check."""
    mu = _unitary(G, mu)
    if dsols is None:
        try:
            dsols = solve_dalembert_oracle(G, K, mu, seed).solutions
        except Exception:
            dsols = []
    rng = np.random.default_rng(seed)
    summary = {}
    for i in range(trials):
        f, g = random_pair(G, K, rng, FUZZ_KINDS[i % len(FUZZ_KINDS)], dsols)
        for chk in bound_checks(G, K, mu, f, g).bound_checks:
            s = summary.setdefault(chk.tag, {"passed": 0, "failed": 0, "min_slack": np.inf, "witness": None})
            s["passed" if chk.passed else "failed"] += 1
            if chk.slack < s["min_slack"]:
                s["min_slack"], s["witness"] = chk.slack, list(chk.witness)
    for s in summary.values():
        s["min_slack"] = float(s["min_slack"])
    return summary
