"""Minimal rank of a 2x3 state from its marginals.

We start from a rank-2 state on C^2 (x) C^3, read off both marginals, and
ask the exact LP for the smallest rank any state with those marginals can
have.  Then a witness is built for every achievable rank and checked.

Run:  python demos/minimal_rank_walkthrough.py
"""
from fractions import Fraction

import numpy as np

from redrank.construct import state_of_rank, verify_membership
from redrank.feasibility import min_rank_report, rank_range, region_system
from redrank.linalg import partial_trace_1, partial_trace_2, rank_eps, spectrum, swap_systems

# Entries are listed with the 3-dimensional factor first; swap_systems
# brings the matrix into C^2 (x) C^3 order.
listed = np.array([
    [3, -2, 1, 1, 2, -1],
    [-2, 2, 0, 0, -2, 2],
    [1, 0, 1, 1, 0, 1],
    [1, 0, 1, 1, 0, 1],
    [2, -2, 0, 0, 2, -2],
    [-1, 2, 1, 1, -2, 3],
], dtype=complex) / 12
rho = swap_systems(listed, (3, 2))

s1 = partial_trace_2(rho, (2, 3))
s2 = partial_trace_1(rho, (2, 3))
print("rank(rho) =", rank_eps(rho))
print("12 * sigma1 =\n", np.round(12 * s1.real, 12))
print("12 * sigma2 =\n", np.round(12 * s2.real, 12))

# Spectra become exact rationals; sigma2 has irrational eigenvalues
# (11 +- sqrt 57)/24, which are rounded with a bounded denominator.
a, b = spectrum(s1), spectrum(s2)
print("spectra:", [str(x) for x in a], [str(x) for x in b])

rep = min_rank_report(a, b)
print(f"\nmin rank {rep.min_rank}, LP with {rep.inequality_count} constraints")
print("witness c =", [str(x) for x in rep.witness_c])
system = region_system(a, b, rep.min_rank)
c_exact = (Fraction(11, 24), Fraction(1, 24))
print(f"hand-derived c = (11/24, 1/24) feasible: {system.satisfied_by(c_exact)}")
print("tight constraints there:", system.binding(c_exact))

print("\nwitness states:")
for k in rank_range(s1, s2):
    w = state_of_rank(s1, s2, k)
    r = verify_membership(w, s1, s2)
    print(f"  rank {k}: pass={r.passed}  residuals=({r.residual_tr1:.1e}, {r.residual_tr2:.1e})")
