"""Conjugacy search in ``G = B x| Q``.

For ``g = (b, x)`` and ``g1 = (b1, x)`` a conjugator ``h = (c, y)`` solves

    b1 = M_y b + (I - M_x) c,

so it is enough to find ``y`` with ``b1 - M_y b`` in ``N_x B`` (where
``N_x = I - M_x``) and then read ``c`` off the linear solve. Candidates
``y`` are enumerated by l1-length, lexicographically within a length.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from . import linalg as la
from .errors import NotConjugateError, NotInBError, SingularError
from .linsolver import BSolver
from .membership import is_in_B
from .presentation import GroupSpec, unitriangular_split
from .words import SemidirectElem, sd_conjugate


@dataclass(frozen=True)
class Conjugator:
    c: tuple
    y: tuple

    @property
    def as_element(self) -> SemidirectElem:
        return SemidirectElem(self.c, self.y)


@dataclass(frozen=True)
class NotFound:
    max_len: int

    def __bool__(self):
        return False


class CspInstance:
    def __init__(self, spec: GroupSpec, g: SemidirectElem, g1: SemidirectElem):
        if tuple(g.x) != tuple(g1.x):
            raise NotConjugateError("Q-parts differ, elements are not conjugate")
        for name, elem in (("g", g), ("g1", g1)):
            verdict = is_in_B(elem.v, spec)
            if not verdict:
                raise NotInBError(f"B-part of {name}: {verdict.reason}")
        self.spec = spec
        self.g = g
        self.g1 = g1
        self.b = la.vec(g.v)
        self.b1 = la.vec(g1.v)
        self.x = tuple(g.x)
        self.L = sum(map(abs, self.x))
        self.M_x = spec.action(self.x)
        self.N_x = la.mat_sub(la.identity(spec.s), self.M_x)

    @cached_property
    def scaled_solver(self) -> BSolver:
        """Solver for ``d^L N_x``, which is integral and commutes with the action."""
        return BSolver(la.mat_scale(self.spec.d ** self.L, self.N_x), self.spec)

    @property
    def degenerate(self) -> bool:
        return not any(self.x)

    def solve_modulo(self, u: Sequence):
        """Some ``c`` in ``B`` with ``N_x c = u``, or ``None``.

        ``u`` must lie in ``B``. It is first pushed into ``Z^s`` by
        ``R = M^k``; ``R`` commutes with ``N_x`` and permutes ``B``, so we
        solve ``d^L N_x X1 = d^L R u`` and return ``c = R^-1 X1``.
        """
        spec = self.spec
        u = la.vec(u)
        if self.degenerate:
            return (0,) * spec.s if not any(u) else None
        verdict = is_in_B(u, spec)
        if not verdict:
            raise NotInBError(verdict.reason)
        k = verdict.witness
        Ru = la.matvec(la.mat_pow(spec.M, k), u)
        out = self.scaled_solver.solve(la.vec_scale(spec.d ** self.L, Ru))
        if not out.solved:
            return None
        Minv = la.mat_inv(spec.M)
        return la.matvec(la.mat_pow(Minv, k), out.solution)


def make_instance(spec: GroupSpec, g: SemidirectElem, g1: SemidirectElem) -> CspInstance:
    return CspInstance(spec, g, g1)


def quotient_equal(b: Sequence, b_prime: Sequence, inst: CspInstance) -> bool:
    """True iff ``b - b'`` lies in ``N_x B``."""
    for w in (b, b_prime):
        if not is_in_B(w, inst.spec):
            raise NotInBError("quotient_equal needs vectors of B")
    return inst.solve_modulo(la.vec_sub(b, b_prime)) is not None


def l1_shell(n: int, length: int) -> Iterator[tuple]:
    """All vectors of ``Z^n`` with l1-norm exactly ``length``, in lexicographic order."""
    if n == 0:
        if length == 0:
            yield ()
        return
    for first in range(-length, length + 1):
        rest = length - abs(first)
        for tail in l1_shell(n - 1, rest):
            yield (first,) + tail


def candidates(n: int, max_len: int) -> Iterator[tuple]:
    for length in range(max_len + 1):
        yield from l1_shell(n, length)


def _try(inst: CspInstance, y: tuple):
    u = la.vec_sub(inst.b1, la.matvec(inst.spec.action(y), inst.b))
    c = inst.solve_modulo(u)
    return None if c is None else Conjugator(c, y)


def _first_in_chunk(args):
    spec, g, g1, ys = args
    inst = CspInstance(spec, g, g1)
    for i, y in enumerate(ys):
        found = _try(inst, y)
        if found is not None:
            return i, found
    return None


def csp_solve(inst: CspInstance, max_len: int = 20, workers: int = 1):
    """Find ``h`` with ``h g h^-1 == g1`` and ``|y|_1 <= max_len``.

    Returns a ``Conjugator`` or ``NotFound(max_len)``. With ``workers > 1``
    each l1-shell is split across processes; the winner is always the
    candidate sequential order would have found first.
    """
    spec = inst.spec
    if workers > 1:
        found = _parallel_search(inst, max_len, workers)
    else:
        found = next((h for h in map(lambda y: _try(inst, y), candidates(spec.n, max_len))
                      if h is not None), None)
    if found is None:
        return NotFound(max_len)
    if sd_conjugate(found.as_element, inst.g, spec) != inst.g1:
        raise AssertionError(f"conjugator {found} failed verification")
    return found


def _parallel_search(inst: CspInstance, max_len: int, workers: int):
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for length in range(max_len + 1):
            shell = list(l1_shell(inst.spec.n, length))
            size = max(1, math.ceil(len(shell) / workers))
            chunks = [shell[i:i + size] for i in range(0, len(shell), size)]
            jobs = [(inst.spec, inst.g, inst.g1, ch) for ch in chunks]
            for res in pool.map(_first_in_chunk, jobs):  # chunk order == lexicographic order
                if res is not None:
                    return res[1]
    return None


def coset_reps(m: int, index: int) -> list[tuple]:
    """Exponent vectors with l1-norm below ``index``; they cover every coset of a
    subgroup of index ``index`` in ``Z^m``."""
    return list(candidates(m, index - 1)) if index >= 1 else []


def stabilizer_probe(inst: CspInstance, max_len: int) -> list[tuple]:
    """Every ``y`` with ``|y|_1 <= max_len`` fixing ``b`` modulo ``N_x B``."""
    spec = inst.spec
    return [y for y in candidates(spec.n, max_len)
            if quotient_equal(la.matvec(spec.action(y), inst.b), inst.b, inst)]


def orbit_size(inst: CspInstance, limit: int = 10_000) -> int:
    """Size of the ``Q``-orbit of ``b`` in ``B / N_x B`` by breadth-first search.

    Equals ``[Q : Q2]`` for ``Q2`` the stabiliser; only meaningful when the
    orbit is finite (for example ``N_x`` nonsingular).
    """
    spec = inst.spec
    found = [inst.b]
    frontier = [inst.b]
    gens = [tuple(e if i == l else 0 for i in range(spec.n)) for l in range(spec.n)
            for e in (1, -1)]
    while frontier:
        nxt = []
        for w in frontier:
            for y in gens:
                z = la.matvec(spec.action(y), w)
                if not any(inst.solve_modulo(la.vec_sub(z, o)) is not None for o in found):
                    found.append(z)
                    nxt.append(z)
                    if len(found) > limit:
                        raise RuntimeError("orbit exceeds limit")
        frontier = nxt
    return len(found)


# ---------------------------------------------------------------------------
# torsion of B / N_x B


@dataclass(frozen=True)
class TorsionBounds:
    exp_bound: int
    order_bound: int
    K: int
    K_power: int  # K^L
    K_gamma: int | None = None
    gamma_bound: int | None = None


def _ceil_sqrt_s_power(s: int, power: int, factor: int) -> int:
    """``ceil(sqrt(s)**power * factor)``."""
    return la.ceil_root_power(s, power, 2, factor)


def torsion_bounds(inst: CspInstance) -> TorsionBounds:
    """Bounds on the torsion subgroup ``T`` of ``B / N_x B``.

    * exponent: ``sqrt(s) d^(Ls) (a+1)^s``
    * order: ``sqrt(s)^s d^(L s^2) (a+1)^(s^2)``
    * ``K = (sqrt(s) d s mu + sqrt(s) d)^(s^2)`` so that ``|T| <= K^L``
    * block unitriangular actions: ``K' = sqrt(s) (2 mu)^(s^2)`` with
      ``|T| <= K' L^(s^2)``

    ``a`` is the largest |entry| of ``M_x`` and ``mu`` that of any ``M_l``.
    All values are exact ceilings.
    """
    if inst.L == 0:
        raise ValueError("x is the identity: N_x = 0 and there is nothing to bound")
    spec = inst.spec
    s, d, L = spec.s, spec.d, inst.L
    a = la.max_abs(inst.M_x)
    a_up = math.ceil(a) + 1  # (a + 1) rounded up; a may be a fraction
    exp_bound = _ceil_sqrt_s_power(s, 1, d ** (L * s) * a_up ** s)
    order_bound = _ceil_sqrt_s_power(s, s, d ** (L * s * s) * a_up ** (s * s))
    mu = spec.mu
    # (sqrt(s) d (s mu + 1))^(s^2)
    K = _ceil_sqrt_s_power(s, s * s, (d * (s * mu + 1)) ** (s * s))
    K_gamma = gamma_bound = None
    if unitriangular_split(spec) is not None:
        K_gamma = _ceil_sqrt_s_power(s, 1, (2 * mu) ** (s * s))
        gamma_bound = K_gamma * L ** (s * s)
    return TorsionBounds(exp_bound, order_bound, K, K ** L, K_gamma, gamma_bound)


@dataclass(frozen=True)
class TorsionInfo:
    order: int
    invariants: tuple  # invariant factors > 1 of T

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1


def _image_in_Zs(inst: CspInstance, max_iter: int) -> la.Lattice:
    """``N_x B & Z^s`` as the union of the chain ``N_x M^-j Z^s & Z^s``."""
    spec = inst.spec
    Zs = la.Lattice.standard(spec.s)
    Minv = la.mat_inv(spec.M)
    A = inst.N_x
    prev = la.lattice_intersect(la.Lattice.from_columns(A), Zs)
    for _ in range(max_iter):
        A = la.matmul(A, Minv)
        cur = la.lattice_intersect(la.Lattice.from_columns(A), Zs)
        if cur == prev:
            return cur
        prev = cur
    raise RuntimeError("image chain did not stabilise")


def _saturation(N) -> la.Lattice:
    """Integer points of the rational column span of ``N``."""
    s = len(N)
    left = la.integer_left_kernel(N)
    if not left:
        return la.Lattice.standard(s)
    gens = la.integer_left_kernel(la.transpose(left))
    return la.Lattice(s, gens)


def torsion_brute_force(inst: CspInstance, allow_singular: bool = False,
                        max_iter: int = 10_000) -> TorsionInfo:
    """Exact structure of the torsion subgroup ``T`` of ``B / N_x B``.

    ``Z^s`` surjects onto ``T`` after intersecting with the rational span of
    ``N_x`` (the ``M``-translates of its image all have the same size), so

        T = (N_x Q^s & Z^s) / (N_x B & Z^s),

    and the denominator lattice is the stable value of an increasing chain.
    By default a singular ``N_x`` is refused.
    """
    N = inst.N_x
    if inst.degenerate:
        raise SingularError("x is the identity, N_x = 0")
    if la.det(N) == 0 and not allow_singular:
        raise SingularError("N_x is singular")
    top = _saturation(N)
    bottom = _image_in_Zs(inst, max_iter)
    order = la.lattice_index(bottom, top)
    # invariant factors: express the bottom basis in top coordinates
    coords = tuple(top.coordinates(b) for b in bottom.basis)
    inv = tuple(k for k in la.snf(coords).invariants if k != 1) if coords else ()
    assert math.prod(inv) == order
    return TorsionInfo(order, inv)
