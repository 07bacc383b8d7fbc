import numpy as np
import pytest

from feq.chartab import character_table, class_multiplication_coefficients
from feq.funcspace import is_k_central
from feq.group import (
    conjugacy_classes,
    cyclic,
    dihedral,
    group_from_cayley,
    product,
    quaternion8,
    symmetric,
    whole_group,
)

GROUPS = [cyclic(1), cyclic(2), cyclic(6), symmetric(3), symmetric(4), dihedral(4), dihedral(5),
          quaternion8(), product(cyclic(2), symmetric(3))]


def test_class_coefficients_small():
    assert class_multiplication_coefficients(group_from_cayley([[0]]))[0, 0, 0] == 1
    assert class_multiplication_coefficients(cyclic(2))[1, 1, 0] == 1


def test_class_coefficients_s3_transpositions():
    S3 = symmetric(3)
    classes = conjugacy_classes(S3)
    a = class_multiplication_coefficients(S3, classes)
    t = [i for i, c in enumerate(classes) if len(c) == 3][0]
    assert a[t, t, 0] == 3


def test_class_coefficients_bruteforce():
    G = dihedral(4)
    classes = conjugacy_classes(G)
    a = class_multiplication_coefficients(G, classes)
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            for k, ck in enumerate(classes):
                for z in ck:
                    cnt = sum(1 for x in ci for y in cj if G.cayley[x, y] == z)
                    assert cnt == a[i, j, k]


def test_z2_table():
    t = character_table(cyclic(2))
    assert t.degrees == [1, 1]
    assert np.allclose(t.rows, [[1, 1], [1, -1]])


def test_s3_table():
    t = character_table(symmetric(3))
    assert t.degrees == [1, 1, 2]
    assert [len(c) for c in t.classes] == [1, 3, 2]
    assert np.allclose(t.rows[2], [2, 0, -1], atol=1e-12)


def test_q8_table():
    Q = quaternion8()
    t = character_table(Q)
    assert t.degrees == [1, 1, 1, 1, 2]
    names = [[Q.names[x] for x in c] for c in t.classes]
    assert names == [["1"], ["-1"], ["i", "-i"], ["j", "-j"], ["k", "-k"]]
    assert np.allclose(t.rows[4], [2, -2, 0, 0, 0], atol=1e-12)


def test_cyclic_table_is_dual_group():
    t = character_table(cyclic(6))
    x = np.arange(6)
    expected = {tuple(np.round(np.exp(2j * np.pi * j * x / 6), 8)) for j in range(6)}
    got = {tuple(np.round(r + 0.0, 8)) for r in t.rows}
    assert got == expected


@pytest.mark.parametrize("G", GROUPS, ids=lambda g: f"order{g.order}")
def test_table_invariants(G):
    t = character_table(G)
    assert len(t.rows) == len(t.classes)
    assert sum(d * d for d in t.degrees) == G.order
    assert t.row_orthogonality_error() < 1e-8
    assert t.column_orthogonality_error() < 1e-8
    for a, d in enumerate(t.degrees):
        assert np.max(np.abs(t.rows[a])) <= d + 1e-9
        assert is_k_central(G, whole_group(G), t.lift(a, G))


@pytest.mark.parametrize("G", [symmetric(4), quaternion8(), dihedral(5)], ids=lambda g: f"order{g.order}")
def test_table_independent_of_seed(G):
    a = character_table(G, seed=1)
    b = character_table(G, seed=987654)
    assert a.degrees == b.degrees
    assert np.allclose(a.rows, b.rows, atol=1e-9)


def test_s5_table():
    t = character_table(symmetric(5))
    assert sorted(t.degrees) == [1, 1, 4, 4, 5, 5, 6]
