"""Integral d'Alembert and Wilson functional equations on finite groups.

Groups are Cayley tables, functions are complex vectors indexed by element,
and every Haar integral becomes an average over the normalized counting
measure.
"""

__version__ = "0.1.0"

from .group import (  # noqa: E402
    FiniteGroup,
    Subgroup,
    cyclic,
    dihedral,
    group_from_cayley,
    make_subgroup,
    parse_group_ref,
    parse_subgroup_ref,
    quaternion8,
    symmetric,
    trivial_subgroup,
    whole_group,
)
from .funcspace import central_pair_test, enumerate_unit_characters  # noqa: E402
from .chartab import character_table  # noqa: E402
from .spherical import compute_spherical_functions  # noqa: E402
from .equations import (  # noqa: E402
    dalembert_residual,
    solve_dalembert,
    solve_dalembert_oracle,
    solve_wilson,
    solve_wilson_oracle,
    wilson_residual,
)

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "central_pair_test",
    "character_table",
    "compute_spherical_functions",
    "cyclic",
    "dalembert_residual",
    "dihedral",
    "enumerate_unit_characters",
    "group_from_cayley",
    "make_subgroup",
    "parse_group_ref",
    "parse_subgroup_ref",
    "quaternion8",
    "solve_dalembert",
    "solve_dalembert_oracle",
    "solve_wilson",
    "solve_wilson_oracle",
    "symmetric",
    "trivial_subgroup",
    "whole_group",
    "wilson_residual",
]
