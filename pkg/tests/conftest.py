import numpy as np
import pytest

from feq.group import (
    cyclic,
    dihedral,
    generated_subgroup,
    make_subgroup,
    product,
    quaternion8,
    symmetric,
    trivial_subgroup,
    whole_group,
)


def _pairs():
    s3 = symmetric(3)
    d4 = dihedral(4)
    out = [(f"Z{n}/e", cyclic(n), trivial_subgroup(cyclic(n))) for n in (2, 3, 4, 5, 6, 8)]
    for name, G in (("S3", s3), ("D4", d4), ("Q8", quaternion8()), ("S4", symmetric(4))):
        out.append((f"{name}/{name}", G, whole_group(G)))
    out.append(("S3/(23)", s3, make_subgroup(s3, [0, 1])))
    out.append(("D4/<s>", d4, generated_subgroup(d4, [4])))
    out.append(("Q8/<i>", quaternion8(), generated_subgroup(quaternion8(), [2])))
    out.append(("S3/A3", s3, generated_subgroup(s3, [3])))
    out.append(("D5/<r>", dihedral(5), generated_subgroup(dihedral(5), [1])))
    s4 = symmetric(4)
    out.append(("S4/S3", s4, generated_subgroup(s4, [1, 2])))
    z2s3 = product(cyclic(2), s3)
    out.append(("Z2xS3/Z2xS3", z2s3, whole_group(z2s3)))
    return out


CENTRAL_PAIRS = _pairs()
SMALL_CENTRAL_PAIRS = [p for p in CENTRAL_PAIRS if p[1].order <= 12]


def pair_id(p):
    return p[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_function(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
