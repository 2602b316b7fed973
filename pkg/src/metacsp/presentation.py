"""Group specifications for split metabelian groups ``B x| Q``.

A group is fixed by ``n`` pairwise commuting, nonsingular ``s x s`` integer
matrices; ``M_l`` encodes how the generator ``q_l`` of the free abelian
group ``Q`` acts on ``B``, an additive subgroup of ``Q^s`` containing
``Z^s``. Column ``j`` of ``M_l`` holds the exponents of ``q_l b_j q_l^-1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .errors import SpecError


@dataclass(frozen=True)
class GroupSpec:
    matrices: tuple
    n: int = field(init=False)
    s: int = field(init=False)
    d_parts: tuple = field(init=False)
    d: int = field(init=False)

    def __post_init__(self):
        mats = _validate_matrices(self.matrices)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "n", len(mats))
        object.__setattr__(self, "s", len(mats[0]))
        parts = tuple(la.denominator_lcm(la.mat_inv(M)) for M in mats)
        object.__setattr__(self, "d_parts", parts)
        # lcm rather than the product; only integrality of d * M_l^-1 is used
        object.__setattr__(self, "d", math.lcm(*parts))

    @cached_property
    def inverses(self) -> tuple:
        return tuple(la.mat_inv(M) for M in self.matrices)

    @cached_property
    def M(self):
        """Product ``M_1 ... M_n``."""
        P = la.identity(self.s)
        for Ml in self.matrices:
            P = la.matmul(P, Ml)
        return P

    @cached_property
    def alpha(self) -> int:
        return compute_alpha(self)

    @cached_property
    def mu(self) -> int:
        return max(la.max_abs(M) for M in self.matrices)

    def action(self, x: Sequence[int]):
        """Matrix of ``q_1^x_1 ... q_n^x_n`` acting on ``Q^s``."""
        return _action(self, tuple(x))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "s": self.s,
                           "matrices": [[list(r) for r in M] for M in self.matrices]})

    def __repr__(self):
        return f"GroupSpec(n={self.n}, s={self.s}, d={self.d})"


@lru_cache(maxsize=8192)
def _action(spec: GroupSpec, x: tuple):
    A = la.identity(spec.s)
    for l, e in enumerate(x):
        if e > 0:
            A = la.matmul(A, la.mat_pow(spec.matrices[l], e))
        elif e < 0:
            A = la.matmul(A, la.mat_pow(spec.inverses[l], -e))
    return A


def _validate_matrices(matrices) -> tuple:
    if not isinstance(matrices, (list, tuple)) or not matrices:
        raise SpecError("need a non-empty list of matrices")
    s = None
    out = []
    for l, M in enumerate(matrices, start=1):
        if not isinstance(M, (list, tuple)) or not M:
            raise SpecError(f"matrix {l} is not a list of rows")
        if s is None:
            s = len(M)
        if len(M) != s or any(not isinstance(r, (list, tuple)) or len(r) != s for r in M):
            raise SpecError(f"matrix {l} is not {s}x{s}")
        for r in M:
            for a in r:
                if isinstance(a, bool) or not isinstance(a, int):
                    raise SpecError(f"matrix {l} has non-integer entry {a!r}")
        M = la.mat(M)
        if la.det(M) == 0:
            raise SpecError(f"matrix {l} has zero determinant")
        out.append(M)
    for l in range(len(out)):
        for t in range(l + 1, len(out)):
            if not la.commutes(out[l], out[t]):
                raise SpecError(f"matrices {l + 1} and {t + 1} do not commute", (l + 1, t + 1))
    return tuple(out)


def parse_spec(text: str) -> GroupSpec:
    """Build a validated spec from its JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecError("malformed document: top level must be an object")
    for key in ("n", "s", "matrices"):
        if key not in doc:
            raise SpecError(f"malformed document: missing field {key!r}")
    n, s, matrices = doc["n"], doc["s"], doc["matrices"]
    if not (isinstance(n, int) and isinstance(s, int)) or n < 1 or s < 1:
        raise SpecError("n and s must be positive integers")
    if not isinstance(matrices, list) or len(matrices) != n:
        raise SpecError(f"expected {n} matrices")
    for l, M in enumerate(matrices, start=1):
        if not isinstance(M, list) or len(M) != s or any(
                not isinstance(r, list) or len(r) != s for r in M):
            raise SpecError(f"matrix {l} is not {s}x{s}")
    return GroupSpec(matrices)


def load_spec(path) -> GroupSpec:
    return parse_spec(Path(path).read_text())


def genbs(*ms: int) -> GroupSpec:
    """Generalised metabelian Baumslag-Solitar group ``q_l b q_l^-1 = b^m_l``."""
    return GroupSpec(tuple(((m,),) for m in ms))


def exalpha() -> GroupSpec:
    return GroupSpec((((2, 0, 0), (0, 1, 0), (0, 0, 1)),
                      ((1, 0, 0), (0, 4, 0), (0, 0, 1)),
                      ((1, 0, 0), (0, 1, 0), (0, 0, 16))))


def stabilization_exponent(M, d: int) -> int:
    """Least ``j`` with ``M^-j Z^s & (1/d)Z^s == M^-(j+1) Z^s & (1/d)Z^s``.

    ``M`` must be integral with ``d * M^-1`` integral. Once two consecutive
    terms agree the chain is constant from there on.
    """
    s = len(M)
    if d == 1:
        return 0
    box = la.Lattice.standard(s, Fraction(1, d))
    Minv = la.mat_inv(M)
    power = la.identity(s)
    prev = la.lattice_intersect(la.Lattice.from_columns(power), box)
    j = 0
    while True:
        power = la.matmul(Minv, power)
        cur = la.lattice_intersect(la.Lattice.from_columns(power), box)
        if cur == prev:
            return j
        prev = cur
        j += 1


def compute_alpha(spec: GroupSpec) -> int:
    """Exponent ``alpha`` with ``B & (1/d^i)Z^s`` inside ``M^(-i*alpha) Z^s`` for every i.

    Computed exactly from the lattice chain; the chain length in
    ``(Z/d)^s`` caps it at ``s * floor(log2 d)``.
    """
    a = stabilization_exponent(spec.M, spec.d)
    assert a <= spec.s * log2_floor(spec.d)
    return a


def log2_floor(d: int) -> int:
    return d.bit_length() - 1


@dataclass(frozen=True)
class Classification:
    polycyclic: bool
    unitriangular: tuple | None  # (s1, s2) block split when every M_l is block unitriangular

    @property
    def kind(self) -> str:
        if self.unitriangular is not None:
            return "unitriangular"
        return "polycyclic" if self.polycyclic else "generic"


def unitriangular_split(spec: GroupSpec) -> tuple | None:
    s = spec.s
    for s1 in range(s + 1):
        if all(_in_gamma(M, s1) for M in spec.matrices):
            return (s1, s - s1)
    return None


def _in_gamma(M, s1: int) -> bool:
    s = len(M)
    for i in range(s):
        for j in range(s):
            same_block = (i < s1) == (j < s1)
            if same_block and M[i][j] != int(i == j):
                return False
            if i >= s1 and j < s1 and M[i][j] != 0:
                return False
    return True


def classify(spec: GroupSpec) -> Classification:
    return Classification(polycyclic=spec.d == 1, unitriangular=unitriangular_split(spec))
