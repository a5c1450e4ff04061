import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gzsreg.gz import (
    GZSpectrum,
    SAMPLE_KINDS,
    cutoff,
    gz_gradients,
    gz_trace,
    is_nilfibre,
    is_nilfibre_sreg,
    is_regular,
    is_sreg_centralizer,
    is_sreg_differentials,
    kw_map,
    level_diagnostics,
    sample_matrix,
    trace_vector,
)
from gzsreg.linalg import Polynomial, RationalMatrix


@st.composite
def int_matrices(draw, min_size=1, max_size=4, bound=3):
    n = draw(st.integers(min_size, max_size))
    return RationalMatrix(
        draw(st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=n, max_size=n))
    )


def newton_traces(p: Polynomial, k: int) -> list[Fraction]:
    """Power sums p_1..p_k of the roots of a monic polynomial, by Newton's identities."""
    n = p.degree
    e = [Fraction(1)] + [(-1) ** j * p.coefficients[n - j] for j in range(1, n + 1)]
    sums = []
    for m in range(1, k + 1):
        s = (-1) ** (m - 1) * m * (e[m] if m <= n else 0)
        for j in range(1, m):
            s += (-1) ** (j - 1) * (e[j] if j <= n else 0) * sums[m - j - 1]
        sums.append(s)
    return sums


def test_cutoff_bounds():
    x = RationalMatrix.identity(3)
    assert cutoff(x, 2) == RationalMatrix.identity(2)
    with pytest.raises(IndexError):
        cutoff(x, 0)
    with pytest.raises(IndexError):
        cutoff(x, 4)


def test_spectrum_examples():
    lower = RationalMatrix([[0, 0, 0], [1, 0, 0], [Fraction(1, 2), 3, 0]])
    assert [str(p) for p in kw_map(lower).level_polys] == ["t", "t^2", "t^3"]
    assert kw_map(lower).is_zero()
    d = RationalMatrix.diagonal([1, 2])
    assert [str(p) for p in kw_map(d).level_polys] == ["t - 1", "t^2 - 3*t + 2"]


def test_spectrum_json_roundtrip():
    s = kw_map(RationalMatrix([[1, Fraction(1, 3)], [2, 5]]))
    assert GZSpectrum.from_json(s.to_json()) == s


def test_zero_matrix_diagnostics():
    z = RationalMatrix.zeros(3)
    assert not is_sreg_centralizer(z) and not is_sreg_differentials(z)
    diag = level_diagnostics(z)
    assert diag[0].regular and not diag[1].regular
    assert [d.centralizer_dim for d in diag] == [1, 4, 9]


def test_principal_jordan_is_strongly_regular():
    # E12 + E23 is the regular nilpotent of the all-upper component with a3 = 0
    j = RationalMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert is_sreg_centralizer(j) and is_sreg_differentials(j)
    assert is_nilfibre_sreg(j)
    assert [d.intersection_dim for d in level_diagnostics(j)] == [0, 0, None]


def test_diagonal_fails_only_through_intersection():
    d = RationalMatrix.diagonal([1, 2, 3])
    diag = level_diagnostics(d)
    assert all(row.regular for row in diag)
    assert diag[0].intersection_dim == 1
    assert not is_sreg_centralizer(d) and not is_sreg_differentials(d)


def test_distinct_diagonal_upper_triangular_is_sreg():
    x = RationalMatrix([[1, 1, 0], [0, 2, 1], [0, 0, 3]])
    assert is_sreg_centralizer(x) and is_sreg_differentials(x)
    assert not is_nilfibre(x)


def test_distinct_diagonal_can_still_fail():
    # e_3 = v_3 - v_2 in eigenvectors, so the projector onto the 1-eigenline
    # (E11 - E12) kills e_3 and commutes with both x_2 and x
    x = RationalMatrix([[1, 1, 1], [0, 2, 1], [0, 0, 3]])
    witness = RationalMatrix([[1, -1, 0], [0, 0, 0], [0, 0, 0]])
    assert witness.commutator(x).is_zero()
    assert cutoff(witness, 2).commutator(cutoff(x, 2)).is_zero()
    assert level_diagnostics(x)[1].intersection_dim == 1
    assert not is_sreg_centralizer(x) and not is_sreg_differentials(x)


def test_gradient_count():
    for n in range(1, 6):
        assert len(gz_gradients(RationalMatrix.zeros(n))) == n * (n + 1) // 2


@settings(max_examples=80, deadline=None)
@given(int_matrices(max_size=4))
def test_trace_invariants_match_level_charpolys(x):
    spec = kw_map(x)
    for i in range(1, x.size + 1):
        sums = newton_traces(spec.level_polys[i - 1], i)
        assert [gz_trace(x, i, j) for j in range(1, i + 1)] == sums
    assert len(trace_vector(x)) == x.size * (x.size + 1) // 2


@settings(max_examples=120, deadline=None)
@given(int_matrices(max_size=4, bound=2))
def test_criteria_agree(x):
    assert is_sreg_centralizer(x) == is_sreg_differentials(x)


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_size=4, bound=2), st.lists(st.sampled_from([-3, -2, -1, 1, 2, 3]), min_size=4, max_size=4))
def test_torus_conjugation_invariance(x, d):
    t = RationalMatrix.diagonal(d[: x.size])
    y = t @ x @ t.inverse()
    assert kw_map(y) == kw_map(x)
    assert is_sreg_centralizer(y) == is_sreg_centralizer(x)


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_size=4, bound=2), st.integers(-3, 3))
def test_transpose_and_shift_invariance(x, c):
    s = is_sreg_centralizer(x)
    assert is_sreg_centralizer(x.T) == s
    assert is_sreg_centralizer(x + RationalMatrix.identity(x.size) * c) == s


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_size=4))
def test_sreg_implies_every_cutoff_regular(x):
    if is_sreg_centralizer(x):
        assert all(is_regular(cutoff(x, i)) for i in range(1, x.size + 1))


def test_sampler_covers_both_outcomes():
    rng = random.Random(3)
    for kind in SAMPLE_KINDS:
        assert sample_matrix(3, rng, kind).size == 3
    verdicts = {is_sreg_centralizer(sample_matrix(3, rng)) for _ in range(60)}
    assert verdicts == {True, False}
    with pytest.raises(ValueError):
        sample_matrix(2, rng, "nope")
