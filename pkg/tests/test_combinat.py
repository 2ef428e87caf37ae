import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redrank.combinat import (
    CapExceededError,
    IndexTuple,
    evaluate_inequality,
    format_inequalities,
    klyachko_inequalities,
    lr_coefficient,
    make_partition,
    partition_of_subset,
)

F = Fraction


# --- independent oracle: Schur polynomials by SSYT enumeration -------------

def _ssyt_monomials(shape, nvars):
    """Monomial expansion of s_shape in nvars variables, as a Counter of exponent tuples."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    out = Counter()
    fill = {}

    def rec(t):
        if t == len(cells):
            exp = [0] * nvars
            for v in fill.values():
                exp[v] += 1
            out[tuple(exp)] += 1
            return
        i, j = cells[t]
        lo = 0
        if j > 0:
            lo = max(lo, fill[(i, j - 1)])
        if i > 0:
            lo = max(lo, fill[(i - 1, j)] + 1)
        for v in range(lo, nvars):
            fill[(i, j)] = v
            rec(t + 1)
        fill.pop((i, j), None)

    rec(0)
    return out


def _mul(p, q):
    out = Counter()
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
    return out


def _schur_expand(poly, nvars):
    """Peel off the dominance-leading term repeatedly; returns {partition: coefficient}."""
    poly = Counter({e: c for e, c in poly.items() if c})
    result = {}
    while poly:
        lead = max((e for e in poly if list(e) == sorted(e, reverse=True)))
        c = poly[lead]
        lam = make_partition(lead)
        result[lam] = c
        for e, v in _ssyt_monomials(lam, nvars).items():
            poly[e] -= c * v
            if poly[e] == 0:
                del poly[e]
    return result


def brute_lr(nu, mus):
    nu = make_partition(nu)
    nvars = max(1, sum(len(make_partition(mu)) for mu in mus), len(nu))
    poly = Counter({(0,) * nvars: 1})
    for mu in mus:
        poly = _mul(poly, _ssyt_monomials(make_partition(mu), nvars))
    return _schur_expand(poly, nvars).get(nu, 0)


# --- partitions ------------------------------------------------------------

def test_partition_of_subset():
    assert partition_of_subset((1, 2, 3)) == ()
    assert partition_of_subset((2, 4)) == (2, 1)
    assert partition_of_subset((5,)) == (4,)
    with pytest.raises(ValueError):
        make_partition((1, 2))


# --- LR coefficients -------------------------------------------------------

@pytest.mark.parametrize(
    "nu, mus, value",
    [
        ((2, 1), [(2, 1)], 1),
        ((2,), [(1,), (1,)], 1),
        ((1, 1), [(1,), (1,)], 1),
        ((2, 1), [(1,), (1,)], 0),
        ((2, 1), [(1,), (1,), (1,)], 2),
        ((3, 2, 1), [(2, 1), (2, 1)], 2),
        ((4, 2, 2, 1), [(2, 1), (3, 2, 1)], 2),
        ((3,), [(1,), (1,)], 0),
    ],
)
def test_lr_known_values(nu, mus, value):
    assert lr_coefficient(nu, mus) == value


def test_lr_agrees_with_schur_product_oracle():
    parts = [(), (1,), (2,), (1, 1), (2, 1), (3,), (1, 1, 1), (2, 2), (3, 1)]
    checked = 0
    for lam, mu in itertools.combinations_with_replacement(parts, 2):
        nvars = len(lam) + len(mu) or 1
        poly = _mul(_ssyt_monomials(lam, nvars), _ssyt_monomials(mu, nvars))
        expansion = _schur_expand(poly, nvars)
        for nu, c in expansion.items():
            assert lr_coefficient(nu, [lam, mu]) == c, (nu, lam, mu)
            checked += 1
    assert checked > 50


def test_lr_iterated_against_oracle():
    # standard-tableau count: c^nu_{(1),(1),(1)} = f^nu
    assert lr_coefficient((3,), [(1,)] * 3) == 1
    assert lr_coefficient((1, 1, 1), [(1,)] * 3) == 1
    for nu, mus in [((3, 2, 1), [(1,), (2, 1), (1, 1)]), ((3, 2), [(1,), (1,), (2, 1)]), ((2, 2, 1), [(1,), (1, 1), (1, 1)])]:
        assert lr_coefficient(nu, mus) == brute_lr(nu, mus)


@settings(max_examples=40, deadline=None)
@given(st.permutations([(2, 1), (1,), (1, 1)]))
def test_lr_symmetric_in_factors(mus):
    assert lr_coefficient((3, 2, 1), list(mus)) == lr_coefficient((3, 2, 1), [(2, 1), (1,), (1, 1)])


def test_lr_empty_factor_and_weight():
    for nu, mu in [((2, 1), (2, 1)), ((3, 1), (2, 1)), ((2,), (2,))]:
        assert lr_coefficient(nu, [mu, ()]) == lr_coefficient(nu, [mu])
    assert lr_coefficient((2, 1), [(1,), (1,)]) == 0  # weight mismatch


# --- Klyachko index sets ---------------------------------------------------

def test_lr22_listing():
    got = klyachko_inequalities(2, 2)
    assert [t.text() for t in got] == [
        "a[{1}] <= c[{1}] + c[{1}]",
        "a[{2}] <= c[{1}] + c[{2}]",
        "a[{2}] <= c[{2}] + c[{1}]",
    ]
    assert IndexTuple(1, (2,), ((1,), (1,))) not in got


def test_excluded_lr22_tuple_is_violated():
    # ({2};{1},{1}) is excluded but never violated; ({1};{2},{2}) is excluded and violated.
    got = set(klyachko_inequalities(2, 2))
    bad = IndexTuple(1, (1,), ((2,), (2,)))
    assert bad not in got
    rng = np.random.default_rng(3)
    violated = False
    for _ in range(100):
        C = [_rand_herm(2, rng) for _ in range(2)]
        a = np.linalg.eigvalsh(sum(C))[::-1]
        cs = [np.linalg.eigvalsh(c)[::-1] for c in C]
        violated |= not evaluate_inequality(bad, a, cs)
    assert violated


def test_weyl_triples_m3_r2():
    k1 = {(t.J0, t.Js) for t in klyachko_inequalities(3, 2) if t.k == 1}
    weyl = {((i + j - 1,), ((i,), (j,))) for i in range(1, 4) for j in range(1, 4) if i + j - 1 <= 3}
    assert k1 == weyl


def test_counts_and_weight_filter():
    counts = {(2, 2): 3, (3, 2): 12, (3, 3): 20, (4, 2): 41, (4, 4): 180}
    for (m, r), n in counts.items():
        tuples = klyachko_inequalities(m, r)
        assert len(tuples) == n
        for t in tuples:
            assert sum(partition_of_subset(t.J0)) == sum(sum(partition_of_subset(J)) for J in t.Js)
            assert 1 <= t.k <= m - 1
            assert all(len(J) == t.k and list(J) == sorted(J) for J in (t.J0,) + t.Js)
    assert tuples == sorted(tuples)


def test_r1_reduces_to_equal_subsets():
    for m in range(2, 6):
        tuples = klyachko_inequalities(m, 1)
        assert tuples and all(t.Js == (t.J0,) for t in tuples)
        assert len(tuples) == 2**m - 2


def test_cap():
    with pytest.raises(CapExceededError):
        klyachko_inequalities(9, 2)
    with pytest.raises(CapExceededError):
        klyachko_inequalities(3, 5)
    with pytest.raises(ValueError):
        klyachko_inequalities(0, 2)


def test_m1_has_no_inequalities():
    assert klyachko_inequalities(1, 3) == []


def _rand_herm(m, rng):
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return (G + G.conj().T) / 2


@pytest.mark.parametrize("m, r", [(2, 3), (3, 2), (4, 3), (5, 2)])
def test_soundness_sampled(m, r):
    rng = np.random.default_rng(m * 10 + r)
    tuples = klyachko_inequalities(m, r)
    for _ in range(200):
        C = [_rand_herm(m, rng) for _ in range(r)]
        a = np.linalg.eigvalsh(sum(C))[::-1]
        cs = [np.linalg.eigvalsh(c)[::-1] for c in C]
        assert all(evaluate_inequality(t, a, cs, tol=1e-9) for t in tuples)


def test_evaluate_inequality():
    t = IndexTuple(1, (1,), ((1,), (1,)))
    assert not evaluate_inequality(t, (1, 0), ((0.2, 0.3), (0.2, 0.3)))
    half = (F(1, 2), F(1, 2))
    for t in klyachko_inequalities(2, 2):
        assert evaluate_inequality(t, (1, 1), (half, half))
    with pytest.raises(ValueError):
        evaluate_inequality(t, (1, 0, 0), ((1, 0), (1, 0)))


def test_format_json():
    tuples = klyachko_inequalities(2, 2)
    assert format_inequalities(tuples, as_json=True).startswith('[{"k": 1, "J0": [1], "Js": [[1], [1]]}')
