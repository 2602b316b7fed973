"""Solving ``N X = u`` with the solution constrained to ``B``.

``N`` is an integral matrix commuting with every ``M_l``. After the Smith
normal form ``D = Q N P`` the basis is reordered so the kernel columns of
``P`` come first; then every ``P^-1 M_l P`` is block upper triangular
``[[A_l, B_l], [0, C_l]]`` and membership of a solution reduces to
membership of its quotient part ``v2`` for the action of the ``C_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .membership import is_in_B, least_power, smallest_t
from .presentation import GroupSpec, log2_floor, stabilization_exponent

SOLVED = "solved"
NO_RATIONAL = "no-rational-solution"
NOT_IN_B = "rational-but-not-in-B"
U_NOT_IN_ZD = "u-not-in-Zd"


@dataclass
class BSolveOutcome:
    status: str
    solution: tuple | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


class BSolver:
    """Everything about ``N`` that does not depend on the right-hand side.

    Reuse one instance when solving many systems with the same matrix.
    """

    def __init__(self, N, spec: GroupSpec):
        N = la.mat(N)
        s = spec.s
        if la.shape(N) != (s, s):
            raise ValueError(f"N must be {s}x{s}")
        if not la.is_integral(N):
            raise ValueError("N must be integral")
        for l, Ml in enumerate(spec.matrices, start=1):
            if not la.commutes(N, Ml):
                raise ValueError(f"N does not commute with M_{l}")
        self.N = N
        self.spec = spec
        self.snf = la.snf(N)
        r = self.r = self.snf.rank
        self.k = s - r  # kernel dimension
        P = self.snf.P
        # kernel columns first
        order = list(range(r, s)) + list(range(r))
        self.P = tuple(tuple(row[j] for j in order) for row in P)
        self.P_inv = la.mat_inv(self.P)
        self.C_parts = tuple(self._blocks(Ml)[2] for Ml in spec.matrices)
        C = la.identity(r)
        for Cl in self.C_parts:
            C = la.matmul(C, Cl)
        self.C = C
        self._power_blocks = {}

    def _blocks(self, A):
        T = la.matmul(la.matmul(self.P_inv, A), self.P)
        k, s = self.k, self.spec.s
        lower_left = la.submatrix(T, range(k, s), range(k))
        if any(any(row) for row in lower_left):
            raise AssertionError("kernel of N is not invariant; N must commute with the action")
        return (la.submatrix(T, range(k), range(k)),
                la.submatrix(T, range(k), range(k, s)),
                la.submatrix(T, range(k, s), range(k, s)))

    @cached_property
    def alpha(self) -> int:
        """Stabilisation exponent of ``C`` on the quotient, same ``d``."""
        if self.r == 0:
            return 0
        return stabilization_exponent(self.C, self.spec.d)

    def power_blocks(self, e: int):
        if e not in self._power_blocks:
            self._power_blocks[e] = self._blocks(la.mat_pow(self.spec.M, e))
        return self._power_blocks[e]

    def solve(self, u: Sequence) -> BSolveOutcome:
        spec, r, k = self.spec, self.r, self.k
        u = la.vec(u)
        if len(u) != spec.s:
            raise ValueError(f"u has dimension {len(u)}, expected {spec.s}")
        diag = {"snf": self.snf, "r": r}
        t0 = smallest_t(u, spec.d)
        diag["t0"] = t0
        if t0 is None:
            return BSolveOutcome(U_NOT_IN_ZD, diagnostics=diag)
        Qu = la.matvec(self.snf.Q, u)
        if any(Qu[r:]):
            return BSolveOutcome(NO_RATIONAL, diagnostics=diag)
        v2 = tuple(la._norm(Fraction(Qu[i]) / self.snf.D[i][i]) for i in range(r))
        diag["v2"] = v2
        diag["C"] = self.C
        t = smallest_t(v2, spec.d)
        diag["t"] = t
        if t is None:
            return BSolveOutcome(NOT_IN_B, diagnostics=diag)
        diag["coarse_exponent"] = t * r * log2_floor(spec.d)
        e = least_power(self.C, v2, t * self.alpha) if r else 0
        if e is None:
            return BSolveOutcome(NOT_IN_B, diagnostics=diag)
        diag["exponent"] = e
        A, S, _ = self.power_blocks(e)
        diag["A"], diag["S"] = A, S
        if k:
            v1 = la.vec_scale(-1, la.matvec(la.mat_inv(A), la.matvec(S, v2)))
        else:
            v1 = ()
        v = la.matvec(self.P, v1 + v2)
        if la.matvec(self.N, v) != u:
            raise AssertionError("reconstructed solution does not satisfy N v = u")
        if not la.is_integral(la.matvec(la.mat_pow(spec.M, e), v)):
            raise AssertionError("reconstructed solution is not in B")
        return BSolveOutcome(SOLVED, solution=v, diagnostics=diag)


def solve_in_B(N, u: Sequence, spec: GroupSpec, verify: bool = True) -> BSolveOutcome:
    """Decide whether ``N X = u`` has a solution in ``B`` and produce one."""
    out = BSolver(N, spec).solve(u)
    if verify and out.solved and not is_in_B(out.solution, spec):
        raise AssertionError("solution failed the membership check")
    return out


def t_bound(outcome: BSolveOutcome) -> int | None:
    """``t0 + floor(log2 det D2)``: each gcd-strip halves the denominator at least."""
    diag = outcome.diagnostics
    if diag.get("t0") is None or "v2" not in diag:
        return None
    snf = diag["snf"]
    det_d2 = math.prod(snf.invariants)
    return diag["t0"] + log2_floor(det_d2)
