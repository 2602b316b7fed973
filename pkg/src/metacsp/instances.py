"""Reproducible random elements and conjugate pairs."""

from __future__ import annotations

import random

from . import linalg as la
from .conjugacy import l1_shell
from .presentation import GroupSpec
from .words import SemidirectElem, sd_conjugate


def random_b_element(spec: GroupSpec, rng: random.Random, max_j: int = 2, box: int = 5) -> tuple:
    """``M^-j w`` with ``j <= max_j`` and ``w`` in ``[-box, box]^s``."""
    j = rng.randint(0, max_j)
    w = tuple(rng.randint(-box, box) for _ in range(spec.s))
    return la.matvec(la.mat_pow(la.mat_inv(spec.M), j), w)


def random_exponent(n: int, length: int, rng: random.Random) -> tuple:
    """Uniform choice among exponent vectors of l1-norm exactly ``length``."""
    return rng.choice(list(l1_shell(n, length)))


def random_conjugate_pair(spec: GroupSpec, x_len: int, rng: random.Random,
                          y_max: int = 3, max_j: int = 2):
    """``(g, g1, h)`` with ``|x|_1 == x_len``, ``|y_h|_1 <= y_max`` and ``g1 = h g h^-1``."""
    x = random_exponent(spec.n, x_len, rng)
    g = SemidirectElem(random_b_element(spec, rng, max_j=max_j), x)
    y = random_exponent(spec.n, rng.randint(0, y_max), rng)
    h = SemidirectElem(random_b_element(spec, rng, max_j=max_j), y)
    return g, sd_conjugate(h, g, spec), h
