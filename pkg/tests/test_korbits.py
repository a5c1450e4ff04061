import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gzsreg.gz import cutoff, is_regular
from gzsreg.korbits import (
    BorelSubalgebra,
    Flag,
    OrbitClass,
    all_orbit_classes,
    beta_root_vector,
    bordered_open_form,
    borel_flag,
    borel_of_regular_nilpotent,
    closed_centralizer_intersection,
    common_centralizer_witness,
    classify_korbit,
    converse_check,
    is_borel_subalgebra,
    kernel_flag,
    nilpsink_check,
    open_orbit_conjugator,
    open_orbit_determinant_check,
    pi_k,
    projection_is_borel_inside,
    random_k_element,
    representative_flag,
    same_span,
    sample_nplus_reg,
    sample_regular_nilpotent,
    stabilizer_borel,
    stabilizer_by_equations,
    theta,
    theta_matrix,
    theta_prime,
    transposition_matrix,
    unit_vector,
    v_element,
    v_identity,
)
from gzsreg.linalg import RationalMatrix, is_nilpotent


@pytest.mark.parametrize("n1", range(2, 7))
def test_orbit_counts_and_roundtrip(n1):
    classes = all_orbit_classes(n1)
    assert sum(c.is_closed for c in classes) == n1
    assert sum(not c.is_closed for c in classes) == comb(n1, 2)
    for c in classes:
        assert classify_korbit(representative_flag(c, n1)) == c


def test_triangular_flags():
    up = classify_korbit(Flag.standard(4))
    down = classify_korbit(Flag.reversed_standard(4))
    assert up == OrbitClass.closed(4) and up.sign(4) == "+"
    assert down == OrbitClass.closed(1) and down.sign(4) == "-"
    assert OrbitClass.closed(2).sign(4) is None


def test_open_orbit_flag():
    # e_1 + e_N ⊂ e_2 ⊂ ... ⊂ e_n ⊂ e_1
    n1 = 4
    e = lambda k: unit_vector(n1, k)  # noqa: E731
    first = tuple(a + b for a, b in zip(e(1), e(4)))
    flag = Flag.from_vectors([first, e(2), e(3), e(1)])
    assert classify_korbit(flag) == OrbitClass.nonclosed(1, n1)
    assert flag.same_as(representative_flag(OrbitClass.nonclosed(1, n1), n1))
    # the last vector of a full flag is irrelevant, so I + E_{N,1} gives the same flag
    assert BorelSubalgebra(open_orbit_conjugator(n1)).flag().same_as(flag)


def test_orbit_class_json():
    for c in all_orbit_classes(4):
        assert OrbitClass.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        OrbitClass.nonclosed(3, 2)


@pytest.mark.parametrize("n1", range(2, 6))
def test_stabilizer_matches_linear_system(n1):
    for c in all_orbit_classes(n1):
        flag = representative_flag(c, n1)
        by_eq = stabilizer_by_equations(flag)
        assert len(by_eq) == comb(n1 + 1, 2)
        assert same_span(stabilizer_borel(flag).basis(), by_eq)
        assert is_borel_subalgebra(by_eq, n1)
        assert borel_flag(by_eq, n1).same_as(flag)


def test_borel_recognition_rejects():
    n = 3
    diag_plus = [RationalMatrix.elementary(n, k, k) for k in range(1, n + 1)]
    assert not is_borel_subalgebra(diag_plus, n)
    # right dimension, not a subalgebra
    mixed = diag_plus + [RationalMatrix.elementary(n, 1, 2), RationalMatrix.elementary(n, 2, 1), RationalMatrix.elementary(n, 1, 3)]
    assert not is_borel_subalgebra(mixed, n)
    assert is_borel_subalgebra(BorelSubalgebra.upper(n).basis(), n)


def test_k_invariance_200_elements():
    rng = random.Random(11)
    for _ in range(200):
        n1 = rng.randint(2, 5)
        c = rng.choice(all_orbit_classes(n1))
        k = random_k_element(n1, rng)
        assert theta(k) == k
        assert classify_korbit(representative_flag(c, n1).transformed(k)) == c


def test_theta_is_conjugation_by_sign_matrix():
    rng = random.Random(2)
    for n1 in range(2, 6):
        j = theta_matrix(n1)
        x = RationalMatrix([[rng.randint(-4, 4) for _ in range(n1)] for _ in range(n1)])
        assert theta(x) == j @ x @ j
        assert theta(theta(x)) == x
        assert pi_k(x) == (x + theta(x)) * Fraction(1, 2)


def test_pi_k_is_block_part():
    x = RationalMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert pi_k(x) == RationalMatrix([[1, 2, 0], [4, 5, 0], [0, 0, 9]])


def test_cayley_identity_hand_case():
    # N = 2, (i, j) = (1, 2): v = [[1, 1], [1, -1]], v^-1 theta(v) = [[0, -1], [1, 0]]
    v = v_element(1, 2, 2)
    assert v == RationalMatrix([[1, 1], [1, -1]])
    vi = v_identity(1, 2, 2)
    assert vi.product == RationalMatrix([[0, -1], [1, 0]])
    assert vi.t == RationalMatrix.diagonal([1, -1])


@pytest.mark.parametrize("n1", range(2, 7))
def test_cayley_identity_all_pairs(n1):
    j = theta_matrix(n1)
    for i, jj in combinations(range(1, n1 + 1), 2):
        v = v_element(i, jj, n1)
        vi = v_identity(i, jj, n1)
        assert vi.holds and vi.t.is_diagonal()
        assert vi.t @ vi.t == RationalMatrix.identity(n1)
        # second route: theta applied as J v J
        assert v.inverse() @ (j @ v @ j) == transposition_matrix(n1, i, jj) @ vi.t
        # v carries the standard flag to the representative flag
        rep = representative_flag(OrbitClass.nonclosed(i, jj), n1)
        assert Flag(v).same_as(rep)


def test_theta_prime_is_involution():
    rng = random.Random(5)
    x = RationalMatrix([[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])
    for i, j in combinations(range(1, 5), 2):
        assert theta_prime(i, j, theta_prime(i, j, x)) == x


@pytest.mark.parametrize("n1", range(2, 6))
def test_projection_nilpotency_by_orbit(n1):
    rng = random.Random(n1)
    for c in all_orbit_classes(n1):
        report = nilpsink_check(c, n1, 15, rng)
        assert report.ok, report.to_json()
        assert report.expect_nilpotent == c.is_closed


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.randoms(use_true_random=False))
def test_bordered_open_form_matches_conjugation(n1, rng):
    y = sample_nplus_reg(n1, rng)
    x = BorelSubalgebra(open_orbit_conjugator(n1)).conjugate(y)
    assert x == bordered_open_form(y)


@pytest.mark.parametrize("n1", range(2, 6))
def test_open_orbit_determinant(n1):
    rng = random.Random(100 + n1)
    for _ in range(20):
        ok, det, expected = open_orbit_determinant_check(n1, rng)
        assert ok and det != 0


@pytest.mark.parametrize("n1", range(3, 6))
def test_interior_closed_orbits_share_centralizer(n1):
    for i in range(2, n1):
        c = OrbitClass.closed(i)
        inter = closed_centralizer_intersection(c, n1)
        assert same_span(inter, [beta_root_vector(n1)])
        w = common_centralizer_witness(c, n1)
        b = stabilizer_borel(representative_flag(c, n1))
        for x in b.nilradical_basis():
            assert w.commutator(x).is_zero()
            assert w.leading(n1 - 1).commutator(cutoff(x, n1 - 1)).is_zero()


@pytest.mark.parametrize("n1", range(2, 6))
def test_triangular_closed_orbits_have_no_common_centralizer(n1):
    rng = random.Random(7 * n1)
    for i in (1, n1):
        c = OrbitClass.closed(i)
        assert closed_centralizer_intersection(c, n1) == []
        assert common_centralizer_witness(c, n1) is None
        b = stabilizer_borel(representative_flag(c, n1))
        for _ in range(20):
            assert converse_check(sample_regular_nilpotent(b, rng))


@pytest.mark.parametrize("n1", range(2, 6))
def test_regular_nilpotent_borel(n1):
    rng = random.Random(n1)
    for c in all_orbit_classes(n1):
        b = stabilizer_borel(representative_flag(c, n1))
        x = sample_regular_nilpotent(b, rng)
        assert is_nilpotent(x) and is_regular(x)
        assert kernel_flag(x).same_as(b.flag())
        assert borel_of_regular_nilpotent(x).contains(x)


@pytest.mark.parametrize("n1", range(2, 6))
def test_projection_is_borel_exactly_for_closed(n1):
    for c in all_orbit_classes(n1):
        b = stabilizer_borel(representative_flag(c, n1))
        assert projection_is_borel_inside(b) == c.is_closed
