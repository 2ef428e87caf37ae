"""Partitions, Littlewood-Richardson coefficients and Horn/Klyachko index sets.

An inequality of the Horn type for ``A = C_1 + ... + C_r`` (all m x m
Hermitian) is indexed by a tuple ``(J0; J1, ..., Jr)`` of k-subsets of
``{1..m}`` and reads

    sum_{i in J0} lambda_i(A) <= sum_j sum_{i in Jj} lambda_i(C_j).

The tuple belongs to ``LR(m, r)`` when the iterated Littlewood-Richardson
coefficient ``c^{lambda(J0)}_{lambda(J1), ..., lambda(Jr)}`` is positive.
Subsets are 1-based tuples throughout, matching the mathematical indexing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations

MAX_M = 8
MAX_R = 4

Partition = tuple  # weakly decreasing positive ints, trailing zeros trimmed


class CapExceededError(ValueError):
    pass


def make_partition(parts) -> Partition:
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"{parts} is not a partition")
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def partition_of_subset(J) -> Partition:
    """``lambda(J) = (j_k - k, ..., j_2 - 2, j_1 - 1)`` for ``J = {j_1 < ... < j_k}``."""
    J = sorted(J)
    return make_partition(j - (i + 1) for i, j in reversed(list(enumerate(J))))


def _contained(inner: Partition, outer: Partition) -> bool:
    return len(inner) <= len(outer) and all(a <= b for a, b in zip(inner, outer))


@lru_cache(maxsize=None)
def _lr2(nu: Partition, lam: Partition, mu: Partition) -> int:
    """Number of LR tableaux of skew shape nu/lam with content mu."""
    if sum(nu) != sum(lam) + sum(mu) or not _contained(lam, nu) or not _contained(mu, nu):
        return 0
    if not mu:
        return 1
    rows = len(nu)
    lam_ext = lam + (0,) * (rows - len(lam))
    # Cells in reading order: top row first, each row right to left.
    cells = [(i, j) for i in range(rows) for j in range(nu[i] - 1, lam_ext[i] - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    count = [0] * (len(mu) + 1)
    total = 0

    def place(t: int) -> None:
        nonlocal total
        if t == len(cells):
            total += 1
            return
        i, j = cells[t]
        hi = min(len(mu), i + 1)
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        above = filling.get((i - 1, j))
        lo = 1 if above is None else above + 1
        for v in range(lo, hi + 1):
            if count[v] >= mu[v - 1]:
                continue
            if v > 1 and count[v] + 1 > count[v - 1]:
                continue
            filling[(i, j)] = v
            count[v] += 1
            place(t + 1)
            count[v] -= 1
            del filling[(i, j)]

    place(0)
    return total


def _sub_partitions(nu: Partition, size: int):
    """All partitions contained in ``nu`` with the given size."""
    out = []

    def rec(i: int, prev: int, remaining: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        if i >= len(nu):
            return
        for p in range(min(prev, nu[i], remaining), 0, -1):
            acc.append(p)
            rec(i + 1, p, remaining - p, acc)
            acc.pop()

    rec(0, nu[0] if nu else 0, size, [])
    return out


@lru_cache(maxsize=None)
def _lr_iter(nu: Partition, mus: tuple) -> int:
    if len(mus) == 0:
        return 1 if not nu else 0
    if len(mus) == 1:
        return 1 if nu == mus[0] else 0
    last = mus[-1]
    size = sum(nu) - sum(last)
    if size < 0:
        return 0
    total = 0
    for kappa in _sub_partitions(nu, size):
        inner = _lr_iter(kappa, mus[:-1])
        if inner:
            total += inner * _lr2(nu, kappa, last)
    return total


def lr_coefficient(nu, mus) -> int:
    """Iterated Littlewood-Richardson coefficient ``c^nu_{mu_1, ..., mu_p}``.

    Folded from two-factor coefficients,
    ``c^nu_{mu_1..mu_p} = sum_kappa c^kappa_{mu_1..mu_{p-1}} c^nu_{kappa, mu_p}``,
    each counted by backtracking over LR skew tableaux.
    """
    nu = make_partition(nu)
    mus = tuple(make_partition(mu) for mu in mus)
    if sum(nu) != sum(sum(mu) for mu in mus):
        return 0
    # The coefficient is symmetric in the factors; sorting improves cache reuse.
    mus = tuple(sorted(mus, reverse=True))
    return _lr_iter(nu, mus)


@dataclass(frozen=True, order=True)
class IndexTuple:
    """``(J0; J1, ..., Jr)`` with every J a sorted k-subset of ``{1..m}``."""

    k: int
    J0: tuple
    Js: tuple

    def text(self) -> str:
        def fmt(J):
            return "{" + ",".join(str(i) for i in J) + "}"

        return f"a[{fmt(self.J0)}] <= " + " + ".join(f"c[{fmt(J)}]" for J in self.Js)

    def to_json(self) -> dict:
        return {"k": self.k, "J0": list(self.J0), "Js": [list(J) for J in self.Js]}


def _check_cap(m: int, r: int, max_m: int, max_r: int) -> None:
    if m < 1 or r < 1:
        raise ValueError("m and r must be positive")
    if m > max_m or r > max_r:
        raise CapExceededError(f"LR({m},{r}) exceeds the enumeration cap (m <= {max_m}, r <= {max_r})")


@lru_cache(maxsize=None)
def klyachko_classes(m: int, r: int, max_m: int = MAX_M, max_r: int = MAX_R) -> tuple:
    """``LR(m, r)`` up to reordering of ``J1..Jr``.

    Returns tuples ``(J0, (J1, ..., Jr))`` with the ``Js`` sorted; the full
    index set is their orbit under permutations of the ``Js``.
    """
    _check_cap(m, r, max_m, max_r)
    out = []
    for k in range(1, m):
        subsets = list(combinations(range(1, m + 1), k))
        lam = {J: partition_of_subset(J) for J in subsets}
        for multiset in combinations_with_replacement(subsets, r):
            weight = sum(sum(lam[J]) for J in multiset)
            mus = [lam[J] for J in multiset]
            for J0 in subsets:
                if sum(lam[J0]) != weight:
                    continue
                if lr_coefficient(lam[J0], mus) > 0:
                    out.append((J0, multiset))
    return tuple(out)


def klyachko_inequalities(m: int, r: int, max_m: int = MAX_M, max_r: int = MAX_R) -> list[IndexTuple]:
    """All tuples of ``LR(m, r)`` for subset sizes ``k = 1..m-1``, sorted.

    The trace equality (the ``k = m`` case) is not part of the list; callers
    add it as an equality constraint.
    """
    seen = set()
    for J0, multiset in klyachko_classes(m, r, max_m, max_r):
        for Js in set(permutations(multiset)):
            seen.add(IndexTuple(len(J0), J0, Js))
    return sorted(seen)


def evaluate_inequality(t: IndexTuple, a, cs, tol: float = 0.0) -> bool:
    """Truth of ``sum_{J0} a_i <= sum_j sum_{Jj} cs[j]_i``.

    Exact when all inputs are rational; otherwise ``tol`` is an absolute slack.
    """
    m = len(a)
    if len(cs) != len(t.Js) or any(len(c) != m for c in cs):
        raise ValueError("dimension mismatch between tuple, a and cs")
    if max(t.J0 + sum(t.Js, ())) > m:
        raise ValueError("tuple indexes beyond the spectrum length")
    lhs = sum((a[i - 1] for i in t.J0), Fraction(0) if _exact(a) else 0.0)
    rhs = sum(c[i - 1] for J, c in zip(t.Js, cs) for i in J)
    if _exact(a) and all(_exact(c) for c in cs):
        return lhs <= rhs
    return float(lhs) <= float(rhs) + tol


def _exact(v) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in v)


def format_inequalities(tuples, as_json: bool = False) -> str:
    if as_json:
        return json.dumps([t.to_json() for t in tuples])
    return "\n".join(t.text() for t in tuples)
