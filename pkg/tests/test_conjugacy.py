import itertools
import random
from fractions import Fraction

import pytest

from metacsp import linalg as la
from metacsp.conjugacy import (Conjugator, CspInstance, NotFound, coset_reps, csp_solve,
                               l1_shell, orbit_size, quotient_equal, stabilizer_probe,
                               torsion_bounds, torsion_brute_force)
from metacsp.errors import NotConjugateError, NotInBError, SingularError
from metacsp.instances import random_conjugate_pair
from metacsp.presentation import GroupSpec, genbs
from metacsp.words import SemidirectElem, sd_conjugate, sd_multiply

from support import EXALPHA, GENBS23, JORDAN, UNITRI, random_B_vector

CSP_SPECS = {"genbs23": GENBS23, "exalpha": EXALPHA, "unitri": UNITRI, "jordan": JORDAN}


def elem(v, x):
    return SemidirectElem(la.vec(v), tuple(x))


def test_l1_shell_order_and_size():
    assert list(l1_shell(1, 2)) == [(-2,), (2,)]
    shell = list(l1_shell(2, 1))
    assert shell == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert shell == sorted(shell)
    assert len(list(l1_shell(3, 2))) == 18


def test_coset_reps():
    assert coset_reps(1, 3) == [(0,), (-1,), (1,), (-2,), (2,)]
    assert sorted(coset_reps(1, 3)) == [(-2,), (-1,), (0,), (1,), (2,)]
    reps = coset_reps(2, 2)
    assert set(reps) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)} and len(reps) <= 16
    assert coset_reps(2, 1) == [(0, 0)]


@pytest.mark.parametrize("index", [1, 2, 3, 4])
def test_coset_reps_cover_sublattices(index):
    # every subgroup of Z^2 of the given index has a representative of each coset
    reps = coset_reps(2, index)
    for a in range(1, index + 1):
        if index % a:
            continue
        c = index // a
        for b in range(c):
            H = la.Lattice(2, [(a, b), (0, c)])
            covered = []
            for r in reps:
                if not any(la.vec_sub(r, o) in H for o in covered):
                    covered.append(r)
            assert len(covered) == index


def test_instance_validation():
    with pytest.raises(NotConjugateError):
        CspInstance(GENBS23, elem((1,), (1, 0)), elem((1,), (0, 1)))
    with pytest.raises(NotInBError):
        CspInstance(GENBS23, elem((Fraction(1, 5),), (1, 0)), elem((1,), (1, 0)))


def test_scaled_solver_is_integral():
    inst = CspInstance(EXALPHA, elem((1, 0, 0), (-1, 2, 0)), elem((1, 0, 0), (-1, 2, 0)))
    assert not la.is_integral(inst.N_x)
    assert la.is_integral(inst.scaled_solver.N)


def test_quotient_equal_basics():
    rng = random.Random(2)
    inst = CspInstance(EXALPHA, elem((1, 2, 3), (1, 1, 1)), elem((1, 2, 3), (1, 1, 1)))
    assert quotient_equal(inst.b, inst.b, inst)
    for _ in range(30):
        w = random_B_vector(EXALPHA, rng)
        assert quotient_equal(la.vec_add(inst.b, la.matvec(inst.N_x, w)), inst.b, inst)
    # B / N_x B is Z/3 x Z/15 here, so e2 is not a multiple of N_x
    assert not quotient_equal((0, 1, 0), (0, 0, 0), inst)
    inst = CspInstance(GENBS23, elem((1,), (1, 0)), elem((1,), (1, 0)))
    for a, b in [((1,), (0,)), ((Fraction(7, 6),), (5,)), ((0,), (Fraction(-1, 36),))]:
        assert quotient_equal(a, b, inst)


def test_quotient_equal_is_Q_invariant():
    rng = random.Random(4)
    for spec in (EXALPHA, JORDAN, GENBS23):
        x = tuple(rng.choice([1, 2]) for _ in range(spec.n))
        inst = CspInstance(spec, elem((0,) * spec.s, x), elem((0,) * spec.s, x))
        for _ in range(20):
            a, b = random_B_vector(spec, rng), random_B_vector(spec, rng)
            if rng.random() < 0.5:
                b = la.vec_add(a, la.matvec(inst.N_x, random_B_vector(spec, rng)))
            same = quotient_equal(a, b, inst)
            assert same == quotient_equal(b, a, inst)
            for M in spec.matrices:
                assert quotient_equal(la.matvec(M, a), la.matvec(M, b), inst) == same


def test_identity_conjugator():
    g = elem((3,), (1, 1))
    h = csp_solve(CspInstance(GENBS23, g, g))
    assert h == Conjugator((0,), (0, 0))


def test_genbs_round_trip_from_example():
    # h = q2 b, g = q1: g1 = h g h^-1
    h = sd_multiply(elem((0,), (0, 1)), elem((1,), (0, 0)), GENBS23)
    g = elem((0,), (1, 0))
    g1 = sd_conjugate(h, g, GENBS23)
    found = csp_solve(CspInstance(GENBS23, g, g1))
    assert sd_conjugate(found.as_element, g, GENBS23) == g1


def test_not_found_and_budget():
    # x = q1 q2 gives B / N_x B = Z/5 with q1, q2 acting by 2 and 3
    g = elem((1,), (1, 1))
    assert csp_solve(CspInstance(GENBS23, g, elem((5,), (1, 1))), max_len=4) == NotFound(4)
    g1 = elem((4,), (1, 1))
    assert not csp_solve(CspInstance(GENBS23, g, g1), max_len=1)
    h = csp_solve(CspInstance(GENBS23, g, g1), max_len=2)
    assert sum(map(abs, h.y)) == 2


def test_degenerate_x_is_an_orbit_problem():
    g = elem((1,), (0, 0))
    h = csp_solve(CspInstance(GENBS23, g, elem((Fraction(4, 3),), (0, 0))), max_len=3)
    assert h.y == (2, -1) and h.c == (0,)
    assert not csp_solve(CspInstance(GENBS23, g, elem((5,), (0, 0))), max_len=3)


@pytest.mark.parametrize("name", sorted(CSP_SPECS))
def test_random_round_trips(name):
    spec = CSP_SPECS[name]
    rng = random.Random(17)
    for _ in range(25):
        g, g1, h = random_conjugate_pair(spec, rng.randint(0, 4), rng)
        found = csp_solve(CspInstance(spec, g, g1), max_len=sum(map(abs, h.x)))
        assert found
        assert sum(map(abs, found.y)) <= sum(map(abs, h.x))
        assert sd_conjugate(found.as_element, g, spec) == g1


def test_parallel_matches_sequential():
    rng = random.Random(23)
    for spec in (EXALPHA, GENBS23):
        for _ in range(3):
            g, g1, h = random_conjugate_pair(spec, 3, rng)
            inst = CspInstance(spec, g, g1)
            assert csp_solve(inst, max_len=3, workers=2) == csp_solve(inst, max_len=3)


def test_cyclic_Q_needs_at_most_L_steps():
    spec = GroupSpec((((3, 1), (1, 1)),))
    rng = random.Random(29)
    for L in (1, 2, 3):
        for _ in range(8):
            g = elem(random_B_vector(spec, rng), (L,))
            h = elem(random_B_vector(spec, rng), (rng.randint(-6, 6),))
            g1 = sd_conjugate(h, g, spec)
            assert csp_solve(CspInstance(spec, g, g1), max_len=L)


def test_stabilizer_probe_contains_x_and_identity():
    inst = CspInstance(EXALPHA, elem((1, 1, 1), (1, 1, 1)), elem((1, 1, 1), (1, 1, 1)))
    stab = stabilizer_probe(inst, 3)
    assert (0, 0, 0) in stab and (1, 1, 1) in stab


# ---------------------------------------------------------------------------
# torsion


def test_torsion_of_sign_flip():
    spec = GroupSpec((((-1,),),))
    inst = CspInstance(spec, elem((0,), (1,)), elem((0,), (1,)))
    bounds = torsion_bounds(inst)
    assert bounds.order_bound == 2
    info = torsion_brute_force(inst)
    assert info.order == 2 and info.invariants == (2,)


def test_torsion_unit_N():
    inst = CspInstance(GENBS23, elem((0,), (1, 0)), elem((0,), (1, 0)))
    assert torsion_bounds(inst).order_bound == 18
    assert torsion_brute_force(inst).order == 1
    spec = GroupSpec((((2, 1), (1, 1)),))  # N_x = [[-1, -1], [-1, 0]] is unimodular
    inst = CspInstance(spec, elem((0, 0), (1,)), elem((0, 0), (1,)))
    assert torsion_brute_force(inst).order == 1


def test_torsion_exalpha():
    x = (1, 1, 1)
    inst = CspInstance(EXALPHA, elem((0, 0, 0), x), elem((0, 0, 0), x))
    info = torsion_brute_force(inst)
    assert info.order == 45 and info.invariants == (3, 15) and info.exponent == 15
    b = torsion_bounds(inst)
    assert info.order <= b.order_bound and info.order <= b.K_power
    assert info.exponent <= b.exp_bound
    assert orbit_size(inst) <= info.order


def test_torsion_refusals():
    inst = CspInstance(EXALPHA, elem((0, 0, 0), (1, 0, 0)), elem((0, 0, 0), (1, 0, 0)))
    with pytest.raises(SingularError):
        torsion_brute_force(inst)
    inst = CspInstance(EXALPHA, elem((0, 0, 0), (0, 0, 0)), elem((0, 0, 0), (0, 0, 0)))
    with pytest.raises(ValueError):
        torsion_bounds(inst)
    with pytest.raises(SingularError):
        torsion_brute_force(inst)


def _quotient_order_by_enumeration(inst, box):
    """Count classes of ``Z^s`` in ``B / N_x B`` among a box of integer points."""
    reps = []
    for p in itertools.product(range(box), repeat=inst.spec.s):
        if not any(quotient_equal(p, r, inst) for r in reps):
            reps.append(p)
    return len(reps)


@pytest.mark.parametrize("spec, x", [
    (GroupSpec((((-1,),),)), (1,)),
    (genbs(2, 3), (1, 1)),
    (genbs(5), (2,)),
    (JORDAN, (1, 0)),
    (GroupSpec((((3, 1), (1, 1)),)), (1,)),
])
def test_torsion_matches_enumeration(spec, x):
    inst = CspInstance(spec, elem((0,) * spec.s, x), elem((0,) * spec.s, x))
    info = torsion_brute_force(inst)
    # the exponent kills the quotient, so every class meets [0, exponent)^s
    assert _quotient_order_by_enumeration(inst, info.exponent) == info.order
    b = torsion_bounds(inst)
    assert info.order <= b.order_bound and info.order <= b.K_power


def test_torsion_unitriangular_gamma_bound():
    x = (1, 1)
    inst = CspInstance(UNITRI, elem((0, 0), x), elem((0, 0), x))
    with pytest.raises(SingularError):
        torsion_brute_force(inst)
    info = torsion_brute_force(inst, allow_singular=True)
    b = torsion_bounds(inst)
    assert b.gamma_bound is not None
    assert info.order <= b.gamma_bound and info.order <= b.K_power
