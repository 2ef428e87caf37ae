from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import golden
from redrank.feasibility import (
    Constraint,
    InequalitySystem,
    NormalizationError,
    as_spectrum,
    build_Pr,
    build_Qr,
    feasible_242,
    feasible_362,
    in_S_r,
    lp_feasible,
    majorization_form_362,
    min_rank,
    min_rank_report,
    rank_range,
    region_check,
    region_system,
    sandwich_362,
)
from redrank.linalg import density_from_spectrum, random_unitary, spectrum
from redrank.simplex import phase_one

F = Fraction
A_EX = (F(3, 4), F(1, 4))
B_EX = (F(7, 10), F(2, 10), F(1, 10))


def _rows(sys):
    return {(q.coeffs, q.rhs, q.kind) for q in sys.constraints}


# --- simplex ---------------------------------------------------------------

def test_phase_one_infeasible():
    x, value = phase_one([[1], [-1]], [1, -2], [], [], 1)
    assert x is None and value > 0


def test_phase_one_feasible_with_equality():
    x, value = phase_one([[-1, 1]], [0], [[1, 1]], [F(1, 2)], 2)
    assert value == 0
    assert sum(x) == F(1, 2) and x[0] >= x[1] >= 0


def test_phase_one_degenerate():
    # many redundant tight rows through the origin: Bland's rule must terminate
    A = [[1, -1], [-1, 1], [1, 1], [-1, -1], [2, -2]]
    x, value = phase_one(A, [0, 0, 0, 0, 0], [], [], 2)
    assert x == [0, 0] and value == 0


def test_lp_feasible_free_variables():
    sys = InequalitySystem(1, [Constraint((F(1),), F(1), "le", "x<=1"), Constraint((F(-1),), F(-2), "le", "x>=2")])
    assert not lp_feasible(sys).feasible
    sys = InequalitySystem(1, [Constraint((F(1),), F(-3), "le", "x<=-3")])
    res = lp_feasible(sys)
    assert res.feasible and res.witness[0] <= -3


# --- system builders --------------------------------------------------------

def test_build_pr_m1_forces_value():
    res = lp_feasible(build_Pr((F(1),), 3))
    assert res.witness == (F(1, 3),)


@pytest.mark.parametrize("m, r", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_build_pr_uniform_witness(m, r):
    a = (F(1, m),) * m
    assert build_Pr(a, r).satisfied_by((F(1, r * m),) * m)


def test_build_pr_contains_weyl_row():
    sys = build_Pr(A_EX, 2)
    assert ((F(-2), F(0)), F(-3, 4), "le") in _rows(sys)


def test_build_qr_padded_rows():
    sys = build_Qr(B_EX, 2, 2)
    rows = _rows(sys)
    assert ((F(-2), F(0)), F(-7, 10), "le") in rows  # 7/10 <= 2 c1
    assert ((F(0), F(-2)), F(-1, 10), "le") in rows  # 1/10 <= 2 c2


def test_build_qr_square_matches_pr():
    b = (F(1, 2), F(1, 3), F(1, 6))
    assert _rows(build_Qr(b, 2, 3)) == _rows(build_Pr(b, 2))
    with pytest.raises(ValueError):
        build_Qr((F(1, 2), F(1, 2)), 2, 3)


def test_normalization_errors():
    with pytest.raises(NormalizationError):
        build_Pr((F(1, 2), F(1, 4)), 2)
    with pytest.raises(NormalizationError):
        min_rank((F(1, 2), F(1, 2)), (F(3, 2), F(-1, 2)))


# --- worked example ----------------------------------------------------------

def test_worked_example_system():
    a = spectrum(golden.sigma1_23())
    b = spectrum(golden.sigma2_23())
    assert a == A_EX and b[2] == F(1, 12)
    sys = region_system(a, b, 2)
    assert sys.satisfied_by(golden.C_23)
    assert "b[{3}] <= c[{2}] + c[{2}]" in sys.binding(golden.C_23)
    r, c = min_rank(a, b)
    assert r == 2 and sys.satisfied_by(c)


def test_min_rank_examples():
    assert min_rank(A_EX, (F(3, 4), F(1, 4), 0))[0] == 1
    assert min_rank((F(1, 2), F(1, 2)), B_EX)[0] == 2
    assert min_rank((F(1, 2), F(1, 3), F(1, 6)), (F(1, 2), F(1, 2)))[0] == 2
    rep = min_rank_report((1,), (F(1, 3),) * 3)
    assert rep.min_rank == 3


def test_float_inputs_rationalized():
    assert as_spectrum([0.25, 0.75]) == (F(3, 4), F(1, 4))
    assert as_spectrum(["1/3", "0.5", "1/6"]) == (F(1, 2), F(1, 3), F(1, 6))


# --- properties ----------------------------------------------------------------

spec_pair = st.tuples(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))


@settings(max_examples=40, deadline=None)
@given(spec_pair)
def test_min_rank_properties(args):
    m, n, seed = args
    rng = np.random.default_rng(seed)
    a = golden.random_rational_spectrum(m, rng, zeros=int(rng.integers(0, m)))
    b = golden.random_rational_spectrum(n, rng, zeros=int(rng.integers(0, n)))
    r, c = min_rank(a, b)
    assert r == min_rank(b, a)[0]
    assert r <= max(sum(1 for x in a if x), sum(1 for x in b if x))
    same = sorted(x for x in a if x) == sorted(x for x in b if x)
    assert (r == 1) == same
    if r > 1:
        assert region_system(a, b, r).satisfied_by(c)
        assert not in_S_r(a, b, r - 1)
    top = max(len(a), len(b))
    assert all(in_S_r(a, b, k) for k in range(r, top + 1))


def test_r1_region_is_padded_equality():
    assert region_check(A_EX, (F(3, 4), F(1, 4), 0), 1)[0]
    assert not region_check(A_EX, B_EX, 1)[0]
    with pytest.raises(ValueError):
        region_check(A_EX, B_EX, 0)


def test_rank_range_examples():
    l1, l2 = 0.7, 0.3
    assert list(rank_range(np.diag([l1, l2]), np.diag([l1, l2]))) == [1, 2, 3, 4]
    for n in (2, 3):
        assert list(rank_range(np.eye(n) / n, np.eye(n) / n)) == list(range(1, n * n + 1))
    rng = np.random.default_rng(11)
    s1 = density_from_spectrum([1 / 3, 1 / 3, 1 / 3], random_unitary(3, rng))
    s2 = density_from_spectrum([0.9, 0.1], random_unitary(2, rng))
    assert list(rank_range(s1, s2)) == [3, 4, 5, 6]
    # full rank alone does not force min rank 3
    s1 = density_from_spectrum([0.5, 0.3, 0.2], random_unitary(3, rng))
    s2 = density_from_spectrum([0.6, 0.4], random_unitary(2, rng))
    assert list(rank_range(s1, s2)) == [2, 3, 4, 5, 6]
    assert list(rank_range(golden.sigma1_23(), golden.sigma2_23())) == [2, 3, 4, 5, 6]


# --- closed forms ----------------------------------------------------------

def test_362_examples():
    flat = (F(1, 6),) * 6
    assert feasible_362((F(1, 3),) * 3, flat)
    assert not feasible_362((F(1, 2), F(1, 4), F(1, 4)), flat)
    assert majorization_form_362(flat) == (F(1, 3),) * 3
    b = (F(1, 4), F(1, 4), F(1, 8), F(1, 8), F(1, 8), F(1, 8))
    a = (b[0] + b[1], b[2] + b[3], b[4] + b[5])  # boundary case a1 = b1 + b2
    assert feasible_362(a, b) and in_S_r(a, b, 2) and sandwich_362(a, b)


def test_362_first_branch():
    b = (F(1, 5), F(1, 5), F(1, 5), F(1, 5), F(1, 5) - F(1, 100), F(1, 100))
    assert b[3] + b[4] >= F(1, 3)
    h = (b[0] + b[1] + b[2] + b[5]) / 2
    assert majorization_form_362(b) == (b[3] + b[4], h, h)


def test_362_grid_against_sandwich():
    rng = np.random.default_rng(5)
    for _ in range(5):
        b = golden.random_rational_spectrum(6, rng)
        for i in range(1, 24):
            for j in range(1, 24 - i):
                a = as_spectrum([F(i, 24), F(j, 24), F(24 - i - j, 24)])
                assert feasible_362(a, b) == sandwich_362(a, b)


def test_242_examples():
    flat = (F(1, 4),) * 4
    assert feasible_242((F(1, 2), F(1, 2)), flat)
    assert not feasible_242((F(3, 5), F(2, 5)), flat)
    assert not feasible_242((1, 0), (F(2, 5), F(3, 10), F(1, 5), F(1, 10)))


def test_closed_forms_match_lp():
    rng = np.random.default_rng(17)
    for _ in range(40):
        a3, b6 = golden.random_rational_spectrum(3, rng), golden.random_rational_spectrum(6, rng)
        assert feasible_362(a3, b6) == in_S_r(a3, b6, 2)
        a2, b4 = golden.random_rational_spectrum(2, rng), golden.random_rational_spectrum(4, rng)
        assert feasible_242(a2, b4) == in_S_r(a2, b4, 2)
