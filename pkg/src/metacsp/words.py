"""Words, collected normal forms and the semidirect ``(v, x)`` representation.

A collected word has the shape ``q^-alpha b^beta q^gamma``::

    q_1^-a_1 ... q_n^-a_n  b_1^b_1 ... b_s^b_s  q_1^g_1 ... q_n^g_n

with every ``a_i >= 0``. The same element is the pair ``(v, x)`` where
``v = M_1^-a_1 ... M_n^-a_n beta`` and ``x = gamma - alpha``; pairs multiply
as ``(v, x)(w, y) = (v + M_x w, x + y)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import NotInBError, WordSyntaxError
from .presentation import GroupSpec


@dataclass(frozen=True)
class Letter:
    kind: str  # "q" or "b"
    index: int  # 1-based
    exp: int

    def __str__(self):
        return f"{self.kind}{self.index}" + ("" if self.exp == 1 else f"^{self.exp}")


class Word:
    """Free word with adjacent letters on the same generator merged."""

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence[Letter] = ()):
        stack: list[Letter] = []
        for let in letters:
            if let.exp == 0:
                continue
            if stack and (stack[-1].kind, stack[-1].index) == (let.kind, let.index):
                e = stack.pop().exp + let.exp
                if e:
                    stack.append(Letter(let.kind, let.index, e))
            else:
                stack.append(let)
        self.letters = tuple(stack)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        return " ".join(map(str, self.letters))

    def __repr__(self):
        return f"Word({str(self)!r})"

    def length(self) -> int:
        return sum(abs(let.exp) for let in self.letters)

    def check(self, spec: GroupSpec) -> None:
        for let in self.letters:
            limit = spec.n if let.kind == "q" else spec.s
            if not 1 <= let.index <= limit:
                raise ValueError(f"generator {let.kind}{let.index} out of range for {spec}")


_TOKEN = re.compile(r"([qb])(\d+)(?:\^(-?\d+))?")


def parse_word(text: str) -> Word:
    """Parse words like ``"q1^-2 b3^5 q2"``; ``*`` and whitespace separate terms."""
    letters = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch == "*":
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"unexpected {ch!r}", pos)
        exp = int(m.group(3)) if m.group(3) is not None else 1
        letters.append(Letter(m.group(1), int(m.group(2)), exp))
        pos = m.end()
    return Word(letters)


@dataclass(frozen=True)
class NormalForm:
    alpha: tuple
    beta: tuple
    gamma: tuple

    def word(self) -> Word:
        return Word(self._letters())

    def _letters(self):
        out = [Letter("q", i + 1, -a) for i, a in enumerate(self.alpha) if a]
        out += [Letter("b", j + 1, b) for j, b in enumerate(self.beta) if b]
        out += [Letter("q", i + 1, g) for i, g in enumerate(self.gamma) if g]
        return out

    def __str__(self):
        # no merging: the three blocks print in collected order
        return " ".join(map(str, self._letters()))

    def length(self) -> int:
        return sum(map(abs, self.alpha + self.beta + self.gamma))


@dataclass(frozen=True)
class SemidirectElem:
    v: tuple
    x: tuple

    @classmethod
    def identity(cls, spec: GroupSpec) -> "SemidirectElem":
        return cls((0,) * spec.s, (0,) * spec.n)

    def __str__(self):
        return f"v={format_vector(self.v)} x={format_vector(self.x)}"


def format_vector(v) -> str:
    return ",".join(str(a) for a in v)


def parse_vector(text: str) -> tuple:
    """Comma-separated integers or fractions, e.g. ``"1/32,3/64,5/16"``."""
    try:
        return la.vec(Fraction(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad vector {text!r}") from None


def sd_multiply(g: SemidirectElem, h: SemidirectElem, spec: GroupSpec) -> SemidirectElem:
    v = la.vec_add(g.v, la.matvec(spec.action(g.x), h.v))
    return SemidirectElem(v, tuple(a + b for a, b in zip(g.x, h.x)))


def sd_inverse(g: SemidirectElem, spec: GroupSpec) -> SemidirectElem:
    negx = tuple(-a for a in g.x)
    return SemidirectElem(la.vec_scale(-1, la.matvec(spec.action(negx), g.v)), negx)


def sd_conjugate(h: SemidirectElem, g: SemidirectElem, spec: GroupSpec) -> SemidirectElem:
    """``h g h^-1``; for ``h = (c, y)``, ``g = (b, x)`` this is ``(c + M_y b - M_x c, x)``."""
    return sd_multiply(sd_multiply(h, g, spec), sd_inverse(h, spec), spec)


def letter_elem(let: Letter, spec: GroupSpec) -> SemidirectElem:
    if let.kind == "q":
        x = tuple(let.exp if i == let.index - 1 else 0 for i in range(spec.n))
        return SemidirectElem((0,) * spec.s, x)
    v = tuple(let.exp if j == let.index - 1 else 0 for j in range(spec.s))
    return SemidirectElem(v, (0,) * spec.n)


def word_to_semidirect(w: Word, spec: GroupSpec) -> SemidirectElem:
    w.check(spec)
    g = SemidirectElem.identity(spec)
    for let in w:
        g = sd_multiply(g, letter_elem(let, spec), spec)
    return g


def to_semidirect(nf: NormalForm, spec: GroupSpec) -> SemidirectElem:
    v = nf.beta
    for l, a in enumerate(nf.alpha):
        if a:
            v = la.matvec(la.mat_pow(spec.inverses[l], a), v)
    return SemidirectElem(la.vec(v), tuple(g - a for g, a in zip(nf.gamma, nf.alpha)))


def minimize(nf: NormalForm, spec: GroupSpec) -> NormalForm:
    """Lower each ``alpha_i`` (ascending ``i``) while ``M_i^-1 beta`` stays integral.

    Commutation of the ``M_l`` means a later reduction never re-enables an
    earlier index, so one pass reaches a minimal form.
    """
    alpha, beta, gamma = list(nf.alpha), nf.beta, list(nf.gamma)
    for i in range(spec.n):
        while alpha[i]:
            nb = la.matvec(spec.inverses[i], beta)
            if not la.is_integral(nb):
                break
            beta = nb
            alpha[i] -= 1
            gamma[i] -= 1
    return NormalForm(tuple(alpha), la.vec(beta), tuple(gamma))


def is_minimal(nf: NormalForm, spec: GroupSpec) -> bool:
    return all(not a or not la.is_integral(la.matvec(spec.inverses[i], nf.beta))
               for i, a in enumerate(nf.alpha))


def from_semidirect(g: SemidirectElem, spec: GroupSpec) -> NormalForm:
    """Canonical collected form of ``(v, x)``.

    Starts from ``alpha = (k, ..., k)`` with ``k`` the least exponent making
    ``M^k v`` integral, then minimises. Raises ``NotInBError`` if ``v`` is
    not in ``B``.
    """
    from .membership import is_in_B

    verdict = is_in_B(g.v, spec)
    if not verdict:
        raise NotInBError(verdict.reason)
    k = verdict.witness
    beta = la.matvec(la.mat_pow(spec.M, k), g.v)
    alpha = (k,) * spec.n
    gamma = tuple(k + a for a in g.x)
    return minimize(NormalForm(alpha, beta, gamma), spec)


def collect(w: Word, spec: GroupSpec) -> NormalForm:
    """Collected normal form of a word.

    Runs on the semidirect representation, so powers like ``b^(m^k)`` never
    get spelled out.
    """
    return from_semidirect(word_to_semidirect(w, spec), spec)


def elem_word(g: SemidirectElem, spec: GroupSpec) -> str:
    return str(from_semidirect(g, spec))
