import numpy as np
import pytest

from conftest import random_function
from feq.chartab import character_table
from feq.errors import (
    GNotRecognized,
    NonCommutingFamily,
    NotAWilsonSolution,
    NotCentralPair,
    Unclassifiable,
)
from feq.equations import (
    classify_sine_pair,
    dalembert_from_character,
    dalembert_residual,
    fx_deviation,
    long_dalembert_residual,
    same_solution_set,
    sine_addition_residual,
    solve_dalembert,
    solve_dalembert_oracle,
    solve_wilson,
    solve_wilson_oracle,
    trace_projection_solution,
    twisted_wilson_residual,
    wilson_link_check,
    wilson_residual,
)
from feq.funcspace import enumerate_unit_characters
from feq.group import (
    cyclic,
    generated_subgroup,
    group_from_cayley,
    make_subgroup,
    quaternion8,
    subgroup_as_group,
    symmetric,
    trivial_subgroup,
    whole_group,
)
from feq.linalg import project_residual
from feq.spherical import compute_spherical_functions

S3 = symmetric(3)
Z4 = cyclic(4)
Z4e = trivial_subgroup(Z4)
MU_I = np.array([1, 1j, -1, -1j])  # x -> i^x
SIGN = np.array([1, -1, -1, 1, 1, -1])

# Exact solution sets of the d'Alembert system, solved symbolically by
# oracles/derive_values.py (zero solution omitted).
EXACT = {
    "Z4/e mu=1": (Z4, Z4e, None, [[1, 1, 1, 1], [1, 0, -1, 0], [1, -1, 1, -1]]),
    "Z4/e mu=i^x": (Z4, Z4e, MU_I, [[1, 0.5 + 0.5j, 0, 0.5 - 0.5j], [1, -0.5 - 0.5j, 0, -0.5 + 0.5j]]),
    "Z6/e mu=1": (cyclic(6), trivial_subgroup(cyclic(6)), None, [
        [1, 1, 1, 1, 1, 1], [1, 0.5, -0.5, -1, -0.5, 0.5],
        [1, -0.5, -0.5, 1, -0.5, -0.5], [1, -1, 1, -1, 1, -1]]),
    "S3/S3 mu=1": (S3, whole_group(S3), None, [
        [1, 1, 1, 1, 1, 1], [1, 0, 0, -0.5, -0.5, 0], [1, -1, -1, 1, 1, -1]]),
    "S3/S3 mu=sign": (S3, whole_group(S3), SIGN, [[1, 0, 0, 1, 1, 0], [1, 0, 0, -0.5, -0.5, 0]]),
    "S3/(23) mu=1": (S3, make_subgroup(S3, [0, 1]), None, [
        [1, 1, 1, 1, 1, 1], [1, 1, -0.5, -0.5, -0.5, -0.5],
        [1, -1, 0.5, -0.5, -0.5, 0.5], [1, -1, -1, 1, 1, -1]]),
}


# ---------------------------------------------------------------------------
# residuals


def test_dalembert_residual_examples():
    assert dalembert_residual(S3, whole_group(S3), None, np.ones(6)) == 0
    assert dalembert_residual(S3, whole_group(S3), None, np.zeros(6)) == 0
    f = np.array([1, (1 + 1j) / 2, 0, (1 - 1j) / 2])
    assert dalembert_residual(Z4, Z4e, MU_I, f) < 1e-15
    # spot value x = y = 1: f(2) + mu(1) f(0) = i = 2 f(1)^2
    assert f[2] + MU_I[1] * f[0] == pytest.approx(2 * f[1] ** 2)


def test_wilson_residual_examples(rng):
    g = random_function(rng, 6)
    assert wilson_residual(S3, whole_group(S3), None, np.zeros(6), g) == 0
    assert wilson_residual(Z4, Z4e, None, [0, 1, 0, -1], [1, 0, -1, 0]) < 1e-15
    f = np.array([1, 0, -0.5, -0.5, 0, 0])
    assert wilson_residual(S3, whole_group(S3), None, f, f) == dalembert_residual(S3, whole_group(S3), None, f)


def test_long_residual_examples():
    K = whole_group(S3)
    assert long_dalembert_residual(S3, K, None, np.ones(6)) == 0
    assert long_dalembert_residual(S3, K, None, np.zeros(6)) == 0
    for mu in enumerate_unit_characters(S3):
        for g in solve_dalembert(S3, K, mu.values).solutions:
            assert long_dalembert_residual(S3, K, mu.values, g) < 1e-12


def test_sine_residual_examples(rng):
    assert sine_addition_residual(S3, whole_group(S3), np.zeros(6), random_function(rng, 6)) == 0
    omega, f = np.array([0, 1, 0, -1]), np.array([1, 0, -1, 0])
    assert sine_addition_residual(Z4, Z4e, omega, f) < 1e-15
    assert sine_addition_residual(Z4, Z4e, omega, f, symmetrized=True) < 1e-15


def test_sine_symmetrized_is_twice_plain_for_central_omega(rng):
    from feq.funcspace import ck_project

    K = whole_group(S3)
    for _ in range(5):
        omega = ck_project(S3, K, random_function(rng, 6))
        f = random_function(rng, 6)
        from feq.equations import sine_defect

        plain = sine_defect(S3, K, omega, f)
        sym = sine_defect(S3, K, omega, f, symmetrized=True)
        assert np.allclose(sym, 2 * plain, atol=1e-12)


def test_twisted_residual_reduces_to_pointwise_wilson(rng):
    f, g = random_function(rng, 6), random_function(rng, 6)
    res = twisted_wilson_residual(S3, trivial_subgroup(S3), SIGN, [1], f, g)
    t = S3.cayley
    direct = np.abs(f[t] + SIGN[None, :] * f[t[:, S3.inverse]] - 2 * np.outer(f, g)).max()
    assert res == pytest.approx(direct)
    assert twisted_wilson_residual(S3, whole_group(S3), None, np.ones(6), np.ones(6), np.ones(6)) == 0


def test_twisted_residual_detects_broken_equivariance():
    K = make_subgroup(S3, [0, S3.index("213")])  # {e, (12)}
    chi = [1, -1]  # sign of K on K.elements
    f = np.zeros(6)
    f[S3.index("231")] = 1
    assert twisted_wilson_residual(S3, K, None, chi, f, f) > 0.1


def test_fx_deviation_examples():
    K = whole_group(S3)
    for phi in compute_spherical_functions(S3, K):
        for x in range(6):
            assert np.max(np.abs(fx_deviation(S3, K, phi, x))) < 1e-12
    f = np.array([1, 0.2, 0.2, 3, 3, 0.2])  # K-central, f(e) = 1
    assert np.max(np.abs(fx_deviation(S3, K, f, S3.identity))) < 1e-15


# ---------------------------------------------------------------------------
# d'Alembert solvers


@pytest.mark.parametrize("name", list(EXACT))
def test_solvers_match_exact_oracle(name):
    G, K, mu, expected = EXACT[name]
    expected = [np.array(e, dtype=complex) for e in expected]
    for solver in (solve_dalembert, solve_dalembert_oracle):
        rep = solver(G, K, mu)
        assert same_solution_set(rep.solutions, expected, tol=1e-9), solver.__name__
        assert all(r < 1e-9 for r in rep.residuals)


@pytest.mark.parametrize("n", range(2, 9))
def test_euler_cosines(n):
    G = cyclic(n)
    rep = solve_dalembert(G, trivial_subgroup(G))
    x = np.arange(n)
    expected = [np.cos(2 * np.pi * j * x / n) for j in range(n // 2 + 1)]
    assert len(rep.solutions) == n // 2 + 1
    assert same_solution_set(rep.solutions, expected, tol=1e-9)


def test_z4_canonical_order():
    rep = solve_dalembert(Z4, Z4e)
    assert np.allclose(rep.solutions, [[1, 1, 1, 1], [1, 0, -1, 0], [1, -1, 1, -1]], atol=1e-12)
    assert [d["self_paired"] for d in rep.details] == [True, False, True]


def test_abelian_k_does_not_matter():
    base = solve_dalembert(Z4, Z4e, MU_I).solutions
    for K in (generated_subgroup(Z4, [2]), whole_group(Z4)):
        assert same_solution_set(solve_dalembert(Z4, K, MU_I).solutions, base)


def test_solver_refuses_non_central_pair():
    with pytest.raises(NotCentralPair):
        solve_dalembert(S3, trivial_subgroup(S3))


def test_oracle_trivial_group():
    G = group_from_cayley([[0]])
    rep = solve_dalembert_oracle(G, whole_group(G))
    assert len(rep.solutions) == 1 and rep.solutions[0][0] == 1


def test_oracle_non_commuting_family():
    with pytest.raises(NonCommutingFamily) as exc:
        solve_dalembert_oracle(S3, trivial_subgroup(S3))
    assert len(exc.value.witness["y_pair"]) == 2


# ---------------------------------------------------------------------------
# Wilson


def test_wilson_z4_case_i():
    g = np.array([1, 0, -1, 0])
    rep = solve_wilson(Z4, Z4e, None, g)
    assert rep.classification == "distinct-pair"
    assert len(rep.solutions) == 2
    W = np.column_stack(rep.solutions)
    for v in ([1, 0, -1, 0], [0, 1j, 0, -1j]):
        assert project_residual(W, np.array(v)) < 1e-12
    assert solve_wilson_oracle(Z4, Z4e, None, g).notes["dimension"] == 2


def test_wilson_s3_case_ii():
    K = whole_group(S3)
    g = np.array([1, 0, 0, -0.5, -0.5, 0])
    rep = solve_wilson(S3, K, None, g)
    assert rep.classification == "self-paired"
    assert len(rep.solutions) == 1 + rep.notes["odd_associated_dim"]
    oracle = solve_wilson_oracle(S3, K, None, g)
    assert oracle.notes["ck_nonzero_dim"] == 1
    # non-central solutions exist: the remaining matrix coefficients of the 2-dim irrep
    assert oracle.notes["ck_zero_dim"] == 3


def test_wilson_constant_g_on_abelian():
    G = cyclic(5)
    rep = solve_wilson(G, trivial_subgroup(G), None, np.ones(5))
    assert project_residual(np.column_stack(rep.solutions), np.ones(5)) < 1e-12


def test_wilson_unrecognized_g(rng):
    with pytest.raises(GNotRecognized):
        solve_wilson(Z4, Z4e, None, random_function(rng, 4))


def test_wilson_oracle_random_g_is_trivial(rng):
    rep = solve_wilson_oracle(Z4, Z4e, None, random_function(rng, 4))
    assert rep.solutions == [] and rep.notes["dimension"] == 0


def test_wilson_link_check_examples(rng):
    K = whole_group(S3)
    f = np.array([1, 0, 0, -0.5, -0.5, 0])
    chk = wilson_link_check(S3, K, None, f, f)
    assert chk.ck_f_nonzero and chk.g_dalembert_residual < 1e-12 and chk.consistent
    chk = wilson_link_check(S3, K, None, np.zeros(6), random_function(rng, 6))
    assert not chk.ck_f_nonzero and chk.consistent
    with pytest.raises(NotAWilsonSolution):
        wilson_link_check(S3, K, None, np.ones(6), np.zeros(6))


# ---------------------------------------------------------------------------
# sine addition classification


def test_classify_zero_f(rng):
    assert classify_sine_pair(S3, whole_group(S3), np.zeros(6), random_function(rng, 6)).case == "zero-f"


def test_classify_two_spherical_z4():
    c = 0.7 - 0.2j
    f = c * np.array([0, 1, 0, -1])
    g = np.array([1, 0, -1, 0])
    r = classify_sine_pair(Z4, Z4e, f, g)
    assert r.case == "two-spherical"
    pair = {tuple(np.round(r.phi, 9)), tuple(np.round(r.psi, 9))}
    assert pair == {tuple(np.round(1j ** np.arange(4), 9)), tuple(np.round((-1j) ** np.arange(4), 9))}
    assert np.allclose(r.c * (r.phi - r.psi), f)


def test_classify_single_spherical():
    phi = np.array([1, 0, 0, -0.5, -0.5, 0])
    r = classify_sine_pair(S3, whole_group(S3), 5 * phi, phi / 2)
    assert r.case == "single-spherical" and r.c == pytest.approx(5)


def test_classify_rejects_non_solution():
    phi = np.array([1, 0, 0, -0.5, -0.5, 0])
    # (3 phi, phi) does not solve the sine law: 3 phi phi != 6 phi phi
    with pytest.raises(Unclassifiable):
        classify_sine_pair(S3, whole_group(S3), 3 * phi, phi)


# ---------------------------------------------------------------------------
# character formulas


@pytest.mark.parametrize("n", [3, 5, 6])
def test_character_formula_euler(n):
    G = cyclic(n)
    x = np.arange(n)
    for j in range(n):
        f = dalembert_from_character(G, None, np.exp(2j * np.pi * j * x / n))
        assert np.allclose(f, np.cos(2 * np.pi * j * x / n), atol=1e-12)


def test_character_formula_s3_and_q8():
    t = character_table(S3)
    assert np.allclose(dalembert_from_character(S3, None, t.lift(2, S3)), [1, 0, 0, -0.5, -0.5, 0])
    Q = quaternion8()
    t = character_table(Q)
    f = dalembert_from_character(Q, None, t.lift(4, Q))
    assert np.allclose(f, [1, -1, 0, 0, 0, 0, 0, 0], atol=1e-12)


def _k_chars(G, K):
    H = subgroup_as_group(G, K)
    t = character_table(H)
    return [t.lift(a, H) for a in range(len(t.rows))]


def test_trace_projection_whole_group_trivial_delta():
    K = whole_group(S3)
    t = character_table(S3)
    triv = _k_chars(S3, K)[0]
    out = trace_projection_solution(S3, K, None, t.lift(0, S3), triv)
    assert not out.zero and np.allclose(out.values, 1)
    for a in (1, 2):
        assert trace_projection_solution(S3, K, None, t.lift(a, S3), triv).zero


def test_trace_projection_trivial_k_matches_character_formula():
    G = cyclic(5)
    K = trivial_subgroup(G)
    x = np.arange(5)
    for j in range(5):
        chi = np.exp(2j * np.pi * j * x / 5)
        out = trace_projection_solution(G, K, None, chi, [1])
        assert np.allclose(out.values, dalembert_from_character(G, None, chi))


def test_trace_projection_s3_transposition_subgroup():
    t12 = S3.index("213")
    K = make_subgroup(S3, [0, t12])
    chi_std = character_table(S3).lift(2, S3)
    out = trace_projection_solution(S3, K, None, chi_std, [1, 1])
    expected_t = (chi_std + chi_std[S3.cayley[t12]]) / 2
    assert np.allclose(out.values, (expected_t + expected_t[S3.inverse]) / 2)
    assert out.residual < 1e-9 and out.side_condition_residual < 1e-12


def test_trace_projection_requires_central_pair():
    with pytest.raises(NotCentralPair):
        trace_projection_solution(S3, trivial_subgroup(S3), None, np.ones(6), [1])


def test_same_solution_set_ignores_repeats():
    a = [np.ones(3), np.ones(3), np.zeros(3)]
    assert same_solution_set(a, [np.zeros(3), np.ones(3)])
    assert not same_solution_set(a, [np.ones(3)])
