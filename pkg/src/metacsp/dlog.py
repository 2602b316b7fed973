"""Discrete-log route for generalised Baumslag-Solitar groups.

With ``x = q_1`` and every ``m_l`` coprime to ``1 - m_1``, the quotient
``B / (1 - m_1) B`` is the ring ``Z / |1 - m_1|`` and ``q_1`` acts trivially
on it, so finding ``y`` comes down to solving

    m_2^t_2 ... m_k^t_k * b  ==  b1   (mod |1 - m_1|).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import linalg as la
from .conjugacy import Conjugator, CspInstance
from .errors import MetacspError
from .membership import is_in_B
from .words import sd_conjugate


class ReductionError(MetacspError, ValueError):
    pass


@dataclass(frozen=True)
class DlogInstance:
    modulus: int
    bases: tuple
    source: int
    target: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        for m in self.bases:
            if math.gcd(m, self.modulus) != 1:
                raise ValueError(f"base {m} is not coprime to {self.modulus}")


def genbs_parameters(spec) -> tuple:
    if spec.s != 1:
        raise ReductionError("not a Baumslag-Solitar spec (s != 1)")
    ms = tuple(M[0][0] for M in spec.matrices)
    if any(m < 2 for m in ms):
        raise ReductionError("Baumslag-Solitar parameters must be at least 2")
    return ms


def residue(q, modulus: int) -> int:
    """Image of a rational with denominator prime to ``modulus`` in ``Z/modulus``."""
    q = la.Fraction(q)
    return q.numerator * pow(q.denominator, -1, modulus) % modulus if modulus > 1 else 0


def bs_reduce(inst: CspInstance) -> DlogInstance:
    ms = genbs_parameters(inst.spec)
    if inst.x != (1,) + (0,) * (len(ms) - 1):
        raise ReductionError("the reduction needs x = q1")
    modulus = abs(1 - ms[0])
    for l, m in enumerate(ms[1:], start=2):
        if math.gcd(m, modulus) != 1:
            raise ReductionError(f"m_{l} = {m} is not coprime to {modulus}")
    return DlogInstance(modulus, tuple(m % modulus if modulus > 1 else 0 for m in ms[1:]),
                        residue(inst.b[0], modulus), residue(inst.b1[0], modulus))


def multiplicative_order(a: int, modulus: int) -> int:
    if modulus == 1:
        return 1
    k, cur = 1, a % modulus
    while cur != 1:
        cur = cur * a % modulus
        k += 1
    return k


def bsgs(base: int, source: int, target: int, modulus: int) -> int | None:
    """Least ``t >= 0`` with ``base^t * source == target`` (mod ``modulus``).

    ``base`` must be a unit; ``source`` need not be. Baby steps tabulate
    ``base^j * source`` for ``j < m``, giant steps walk ``target * base^(-m i)``.
    """
    source %= modulus
    target %= modulus
    if source == target:
        return 0
    m = math.isqrt(modulus) + 1  # order of base is below modulus
    table = {}
    cur = source
    for j in range(m):
        table.setdefault(cur, j)
        cur = cur * base % modulus
    step = pow(base, -m, modulus)
    cur = target
    for i in range(m + 1):
        j = table.get(cur)
        if j is not None:
            return i * m + j
        cur = cur * step % modulus
    return None


def solve_congruence(instance: DlogInstance, bounds: int | tuple | None = None):
    """Exponents ``(t_2, ..., t_k)`` or ``None``.

    One base goes through ``bsgs``. Several bases are enumerated with each
    exponent below ``bounds`` (default: that base's multiplicative order),
    in lexicographic order.
    """
    mod = instance.modulus
    if mod == 1:
        return (0,) * len(instance.bases)
    if not instance.bases:
        return () if instance.source % mod == instance.target % mod else None
    if len(instance.bases) == 1:
        t = bsgs(instance.bases[0], instance.source, instance.target, mod)
        return None if t is None else (t,)
    if bounds is None:
        caps = tuple(multiplicative_order(b, mod) for b in instance.bases)
    elif isinstance(bounds, int):
        caps = (bounds,) * len(instance.bases)
    else:
        caps = tuple(bounds)
    target = instance.target % mod
    for ts in itertools.product(*(range(c) for c in caps)):
        val = instance.source
        for b, t in zip(instance.bases, ts):
            val = val * pow(b, t, mod) % mod
        if val == target:
            return ts
    return None


def dlog_csp_solve(inst: CspInstance, lift_cap: int = 64):
    """Conjugator through the discrete-log route, or ``None``.

    Exponents solve the congruence only modulo the bases' orders, so lifts
    ``t, t + ord, ...`` are tried until ``(1 - m_1) c = b1 - y b`` has its
    solution ``c`` in ``B``.
    """
    spec = inst.spec
    dl = bs_reduce(inst)
    ts = solve_congruence(dl)
    if ts is None:
        return None
    ms = genbs_parameters(spec)
    orders = [multiplicative_order(b, dl.modulus) for b in dl.bases]
    for lift in range(lift_cap):
        y = (0,) + tuple(t + lift * o for t, o in zip(ts, orders))
        u = inst.b1[0] - spec.action(y)[0][0] * inst.b[0]
        c = (la._norm(la.Fraction(u) / (1 - ms[0])),)
        if is_in_B(c, spec):
            h = Conjugator(c, y)
            if sd_conjugate(h.as_element, inst.g, spec) != inst.g1:
                raise AssertionError("dlog conjugator failed verification")
            return h
    return None
