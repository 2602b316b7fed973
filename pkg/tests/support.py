"""Shared specs and instance generators for the test suite."""

import random

from metacsp import linalg as la
from metacsp.membership import brute_force_in_B
from metacsp.presentation import GroupSpec, exalpha, genbs

GENBS23 = genbs(2, 3)
EXALPHA = exalpha()
UNITRI = GroupSpec((((1, 1), (0, 1)), ((1, 2), (0, 1))))
JORDAN = GroupSpec((((2, 1), (0, 2)), ((3, 0), (0, 3))))

SOLVER_SPECS = {"genbs23": GENBS23, "exalpha": EXALPHA, "unitri": UNITRI, "jordan": JORDAN}


def random_diagonal_spec(rng: random.Random, s: int, n: int) -> GroupSpec:
    choices = [1, 1, 2, 3, 4, 6, -2, -1]
    return GroupSpec(tuple(la.diag([rng.choice(choices) for _ in range(s)]) for _ in range(n)))


def random_commuting_N(spec: GroupSpec, rng: random.Random, box: int = 3):
    """``c0 I + sum c_l M_l + c' M_1 M_n``: always commutes with the action."""
    N = la.mat_scale(rng.randint(-box, box), la.identity(spec.s))
    for M in spec.matrices:
        N = la.mat_add(N, la.mat_scale(rng.randint(-box, box), M))
    N = la.mat_add(N, la.mat_scale(rng.randint(-1, 1),
                                   la.matmul(spec.matrices[0], spec.matrices[-1])))
    return N


def random_B_vector(spec: GroupSpec, rng: random.Random, max_j: int = 2, box: int = 5):
    j = rng.randint(0, max_j)
    w = tuple(rng.randint(-box, box) for _ in range(spec.s))
    return la.matvec(la.mat_pow(la.mat_inv(spec.M), j), w)


def rational_solutions_exist(N, u) -> bool:
    """Rank test on the augmented matrix."""
    aug = tuple(tuple(row) + (ui,) for row, ui in zip(N, u))
    return la.rank(N) == la.rank(aug)


def brute_in_B(v, spec: GroupSpec) -> bool:
    """Iterate ``M`` for as many steps as the coarse exponent bound allows."""
    t_cap = la.denominator_lcm(v).bit_length()
    return brute_force_in_B(v, spec, t_cap * spec.s * max(spec.d.bit_length(), 1) + 1)
