"""Membership of rational vectors in ``B = union_j M^-j Z^s``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import linalg as la
from .presentation import GroupSpec, log2_floor


def smallest_t(v: Sequence, d: int) -> int | None:
    """Least ``t >= 0`` with ``d^t v`` integral, ``None`` if there is none.

    Strips ``gcd(m, d)`` from the common denominator ``m`` until it reaches
    1, so the loop runs ``O(log m)`` times.
    """
    m = la.denominator_lcm(v)
    t = 0
    while m > 1:
        g = math.gcd(m, d)
        if g == 1:
            return None
        m //= g
        t += 1
    return t


@dataclass(frozen=True)
class Membership:
    in_b: bool
    witness: int | None = None  # least k with M^k v integral
    t: int | None = None
    reason: str | None = None  # "not-in-Zd" or "matrix-power"

    def __bool__(self):
        return self.in_b


def least_power(M, v: Sequence, hi: int) -> int | None:
    """Least ``k <= hi`` with ``M^k v`` integral (``M`` integral, so this is monotone)."""
    if la.is_integral(v):
        return 0
    if not la.is_integral(la.matvec(la.mat_pow(M, hi), v)):
        return None
    lo = 0  # M^lo v is not integral
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if la.is_integral(la.matvec(la.mat_pow(M, mid), v)):
            hi = mid
        else:
            lo = mid
    return hi


def member(v: Sequence, M, d: int, alpha: int) -> Membership:
    """Membership test for the action generated by the integral matrix ``M``.

    ``d`` must make ``d M^-1`` integral and ``alpha`` must be the
    stabilisation exponent of ``M`` for ``d``.
    """
    t = smallest_t(v, d)
    if t is None:
        return Membership(False, reason="not-in-Zd")
    k = least_power(M, v, t * alpha)
    if k is None:
        return Membership(False, t=t, reason="matrix-power")
    return Membership(True, witness=k, t=t)


def is_in_B(v: Sequence, spec: GroupSpec) -> Membership:
    if len(v) != spec.s:
        raise ValueError(f"vector has dimension {len(v)}, expected {spec.s}")
    return member(la.vec(v), spec.M, spec.d, spec.alpha)


def coarse_exponent(t: int, spec: GroupSpec) -> int:
    """The coarse exponent ``t * s * floor(log2 d)`` that always suffices."""
    return t * spec.s * log2_floor(spec.d)


def brute_force_in_B(v: Sequence, spec: GroupSpec, j_max: int) -> bool:
    """True iff ``M^j v`` is integral for some ``j <= j_max`` (plain iteration)."""
    w = la.vec(v)
    for _ in range(j_max + 1):
        if la.is_integral(w):
            return True
        w = la.matvec(spec.M, w)
    return False
