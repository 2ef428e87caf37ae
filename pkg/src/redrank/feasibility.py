"""Minimal ranks of bipartite states with prescribed marginal spectra.

For spectra ``a`` (length m) and ``b`` (length n >= m), a state of rank at
most r with those marginals exists iff some ``c`` in R^m, decreasing and
nonnegative with ``sum(c) = 1/r``, satisfies

* every LR(m, r) inequality with ``a`` on the left and r copies of ``c``
  on the right (the polyhedron ``P_r(a)``), and
* every LR(n, r) inequality with ``b`` on the left and r copies of the
  zero-padded ``c`` on the right (``Q_r(b)``).

All of this is decided in exact rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinat import klyachko_classes
from .linalg import RAT_DEN_CAP, check_density, majorizes, rank_eps, rationalize, spectrum
from .simplex import phase_one


class NormalizationError(ValueError):
    """Spectrum is not decreasing, nonnegative and of unit sum."""


@dataclass
class Constraint:
    coeffs: tuple  # over c_1..c_m
    rhs: Fraction
    kind: str  # "le" or "eq"
    label: str

    def value(self, c) -> Fraction:
        return sum((a * x for a, x in zip(self.coeffs, c)), Fraction(0))

    def holds(self, c) -> bool:
        v = self.value(c)
        return v == self.rhs if self.kind == "eq" else v <= self.rhs


@dataclass
class InequalitySystem:
    """Rational linear system in ``c_1..c_m``; ``le`` rows mean ``coeffs . c <= rhs``."""

    m: int
    constraints: list[Constraint] = field(default_factory=list)

    @property
    def equalities(self):
        return [q for q in self.constraints if q.kind == "eq"]

    @property
    def inequalities(self):
        return [q for q in self.constraints if q.kind == "le"]

    def __add__(self, other: "InequalitySystem") -> "InequalitySystem":
        if self.m != other.m:
            raise ValueError("systems over different variable counts")
        return InequalitySystem(self.m, self.constraints + other.constraints)

    def satisfied_by(self, c) -> bool:
        c = [Fraction(x) for x in c]
        return len(c) == self.m and all(q.holds(c) for q in self.constraints)

    def binding(self, c) -> list[str]:
        c = [Fraction(x) for x in c]
        return [q.label for q in self.constraints if q.value(c) == q.rhs]


@dataclass
class FeasibilityResult:
    feasible: bool
    witness: tuple | None = None
    phase_one_value: Fraction = Fraction(0)


def as_spectrum(values, cap: int = RAT_DEN_CAP) -> tuple[Fraction, ...]:
    """Exact decreasing spectrum from rationals, decimal strings or floats."""
    out = []
    floats = []
    for v in values:
        if isinstance(v, (Fraction, int)):
            out.append(Fraction(v))
        elif isinstance(v, str):
            out.append(Fraction(v.strip()))
        else:
            floats.append(float(v))
    if floats:
        return rationalize(out + floats, cap)
    return tuple(sorted(out, reverse=True))


def _check_normalized(a) -> None:
    if any(x < 0 for x in a):
        raise NormalizationError(f"negative entry in spectrum {a}")
    if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
        raise NormalizationError(f"spectrum {a} is not decreasing")
    if sum(a) != 1:
        raise NormalizationError(f"spectrum sums to {sum(a)}, expected 1")


def _fmt(J) -> str:
    return "{" + ",".join(map(str, J)) + "}"


def _base_system(m: int, r: int) -> InequalitySystem:
    sys = InequalitySystem(m)
    sys.constraints.append(Constraint((Fraction(1),) * m, Fraction(1, r), "eq", f"sum c = 1/{r}"))
    for i in range(m - 1):
        row = [Fraction(0)] * m
        row[i], row[i + 1] = Fraction(-1), Fraction(1)
        sys.constraints.append(Constraint(tuple(row), Fraction(0), "le", f"c{i + 1} >= c{i + 2}"))
    row = [Fraction(0)] * m
    row[m - 1] = Fraction(-1)
    sys.constraints.append(Constraint(tuple(row), Fraction(0), "le", f"c{m} >= 0"))
    return sys


@lru_cache(maxsize=None)
def _grouped_rows(size: int, r: int, m: int) -> tuple:
    """LR(size, r) rows grouped by their coefficient vector over ``c_1..c_m``.

    With all r summand spectra equal to ``c`` (zero-padded beyond m), a tuple
    contributes the coefficient ``#{j : i in J_j}`` to ``c_i``.  Returns
    ``((coeffs, (J0, ...), label), ...)``; the binding row of a group is the
    one with the largest left-hand side.
    """
    groups: dict[tuple, list] = {}
    labels: dict[tuple, str] = {}
    for J0, multiset in klyachko_classes(size, r):
        coeffs = [0] * m
        for J in multiset:
            for i in J:
                if i <= m:
                    coeffs[i - 1] += 1
        key = tuple(coeffs)
        groups.setdefault(key, []).append(J0)
        labels.setdefault(key, " + ".join(f"c[{_fmt(J)}]" for J in multiset))
    return tuple((k, tuple(v), labels[k]) for k, v in sorted(groups.items()))


def _horn_rows(left, r: int, m: int, sym: str) -> list[Constraint]:
    out = []
    for coeffs, J0s, label in _grouped_rows(len(left), r, m):
        sums = [sum((left[i - 1] for i in J0), Fraction(0)) for J0 in J0s]
        best = max(range(len(sums)), key=lambda t: sums[t])
        # sum_{J0} left <= coeffs . c   <=>   -coeffs . c <= -sum_{J0} left
        out.append(Constraint(
            tuple(Fraction(-x) for x in coeffs),
            -sums[best],
            "le",
            f"{sym}[{_fmt(J0s[best])}] <= {label}",
        ))
    return out


def build_Pr(a, r: int) -> InequalitySystem:
    """``P_r(a)``: ordering, ``sum c = 1/r`` and the LR(m, r) rows with left side ``a``."""
    a = as_spectrum(a)
    _check_normalized(a)
    m = len(a)
    sys = _base_system(m, r)
    sys.constraints += _horn_rows(a, r, m, "a")
    return sys


def build_Qr(b, r: int, m: int) -> InequalitySystem:
    """``Q_r(b)`` over ``c`` in R^m, with ``c`` zero-padded to length n = len(b)."""
    b = as_spectrum(b)
    _check_normalized(b)
    if m > len(b):
        raise ValueError(f"m = {m} exceeds n = {len(b)}; swap the systems first")
    sys = _base_system(m, r)
    sys.constraints += _horn_rows(b, r, m, "b")
    return sys


def lp_feasible(sys: InequalitySystem) -> FeasibilityResult:
    """Decide nonemptiness exactly; a returned witness is re-checked by substitution."""
    A_ub = [q.coeffs for q in sys.inequalities]
    b_ub = [q.rhs for q in sys.inequalities]
    A_eq = [q.coeffs for q in sys.equalities]
    b_eq = [q.rhs for q in sys.equalities]
    # c >= 0 is implied by the ordering rows whenever they are present; the
    # simplex works with nonnegative variables, so free variables are split.
    nonneg = _implies_nonneg(sys)
    if nonneg:
        x, value = phase_one(A_ub, b_ub, A_eq, b_eq, sys.m)
    else:
        split = lambda row: list(row) + [-v for v in row]  # noqa: E731
        x, value = phase_one([split(r) for r in A_ub], b_ub, [split(r) for r in A_eq], b_eq, 2 * sys.m)
        if x is not None:
            x = [x[i] - x[i + sys.m] for i in range(sys.m)]
    if x is None:
        return FeasibilityResult(False, None, value)
    if not sys.satisfied_by(x):
        raise AssertionError("simplex witness fails substitution check")
    return FeasibilityResult(True, tuple(x), value)


def _implies_nonneg(sys: InequalitySystem) -> bool:
    m = sys.m
    labels = {q.label for q in sys.constraints}
    return f"c{m} >= 0" in labels and all(f"c{i + 1} >= c{i + 2}" in labels for i in range(m - 1))


def _orient(a, b):
    a, b = as_spectrum(a), as_spectrum(b)
    _check_normalized(a)
    _check_normalized(b)
    if len(a) > len(b):
        a, b = b, a
    return a, b


def _padded_equal(a, b) -> bool:
    d = max(len(a), len(b))
    return tuple(a) + (Fraction(0),) * (d - len(a)) == tuple(b) + (Fraction(0),) * (d - len(b))


def region_system(a, b, r: int) -> InequalitySystem:
    """``P_r(a) & Q_r(b)`` after orienting so that ``len(a) <= len(b)``."""
    a, b = _orient(a, b)
    sys = build_Pr(a, r)
    sys.constraints += _horn_rows(b, r, len(a), "b")
    return sys


def in_S_r(a, b, r: int) -> bool:
    """Whether some state with marginal spectra ``a``, ``b`` has rank at most ``r``."""
    return region_check(a, b, r)[0]


def region_check(a, b, r: int):
    """``(feasible, witness c or None, labels of constraints tight at c)``."""
    a, b = _orient(a, b)
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        ok = _padded_equal(a, b)
        return ok, (tuple(a) if ok else None), []
    sys = region_system(a, b, r)
    res = lp_feasible(sys)
    return res.feasible, res.witness, (sys.binding(res.witness) if res.feasible else [])


def nonzero_count(v) -> int:
    return sum(1 for x in v if x != 0)


@dataclass
class MinRankResult:
    min_rank: int
    witness_c: tuple | None
    inequality_count: int


def min_rank_report(a, b) -> MinRankResult:
    """Smallest r with ``P_r(a) & Q_r(b)`` nonempty, scanning r = 1, 2, ..."""
    a, b = _orient(a, b)
    if _padded_equal(a, b):
        return MinRankResult(1, tuple(a), 0)
    bound = max(nonzero_count(a), nonzero_count(b))
    for r in range(2, bound + 1):
        sys = region_system(a, b, r)
        res = lp_feasible(sys)
        if res.feasible:
            return MinRankResult(r, res.witness, len(sys.constraints))
    raise AssertionError(f"no feasible rank up to {bound} for a={a}, b={b}")


def min_rank(a, b) -> tuple[int, tuple | None]:
    rep = min_rank_report(a, b)
    return rep.min_rank, rep.witness_c


def rank_range(sigma1, sigma2, cap: int = RAT_DEN_CAP) -> range:
    """Achievable ranks ``min_rank .. rank(sigma1) * rank(sigma2)`` of states with these marginals."""
    check_density(sigma1)
    check_density(sigma2)
    a = spectrum(sigma1, cap)
    b = spectrum(sigma2, cap)
    lo = min_rank(a, b)[0]
    hi = rank_eps(np.asarray(sigma1)) * rank_eps(np.asarray(sigma2))
    return range(lo, hi + 1)


def feasible_362(a, b) -> bool:
    """Closed form for ``m = 3``, ``n = 6``, ``r = 2``."""
    a = as_spectrum(a)
    b = as_spectrum(b)
    if len(a) != 3 or len(b) != 6:
        raise ValueError("need a of length 3 and b of length 6")
    a1, a2, a3 = a
    b1, b2, b3, b4, b5, b6 = b
    return (
        sum(a) == sum(b)
        and max(b3 + b6, b4 + b5) <= a1 <= b1 + b2
        and (b3 + b4 + b5 + b6) / 2 <= a2 <= (b1 + b2 + b3 + b4) / 2
        and b5 + b6 <= a3 <= min(b1 + b4, b2 + b3)
    )


def feasible_242(a, b) -> bool:
    """Closed form for ``m = 2``, ``n = 4``, ``r = 2``."""
    a = as_spectrum(a)
    b = as_spectrum(b)
    if len(a) != 2 or len(b) != 4:
        raise ValueError("need a of length 2 and b of length 4")
    a1, a2 = a
    b1, b2, b3, b4 = b
    return sum(a) == sum(b) and (b3 + b4) / 2 <= a2 and a1 <= b1 + b2


def majorization_form_362(b) -> tuple[Fraction, Fraction, Fraction]:
    """Lower vector ``c`` of the sandwich ``c < a < (b1+b2, b3+b4, b5+b6)``."""
    b = as_spectrum(b)
    if len(b) != 6:
        raise ValueError("need b of length 6")
    b1, b2, b3, b4, b5, b6 = b
    third = Fraction(1, 3) * sum(b)
    if b4 + b5 >= third:
        h = (b1 + b2 + b3 + b6) / 2
        return (b4 + b5, h, h)
    if b2 + b3 >= third:
        return (third, third, third)
    h = (b1 + b4 + b5 + b6) / 2
    return (h, h, b2 + b3)


def sandwich_362(a, b) -> bool:
    a = as_spectrum(a)
    b = as_spectrum(b)
    upper = (b[0] + b[1], b[2] + b[3], b[4] + b[5])
    return majorizes(majorization_form_362(b), a) and majorizes(a, upper)
