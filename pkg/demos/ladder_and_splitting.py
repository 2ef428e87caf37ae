"""From the ladder state to every rank up to r1*r2.

For diagonal marginals diag(a1,a2,a3) and diag(b1,b2) the ladder gives three
vectors z_l, each a short sum of product vectors.  Splitting one Schmidt
term off a z_l keeps both marginals and raises the rank by one, so repeated
splits walk the rank from 3 up to 6.

Run:  python demos/ladder_and_splitting.py
"""
import numpy as np

from redrank.construct import ladder_state, split_step, verify_membership
from redrank.linalg import schmidt

a = np.array([0.5, 0.3, 0.2])
b = np.array([0.6, 0.4])
s1, s2 = np.diag(a), np.diag(b)


def show(dec, title):
    rep = verify_membership(dec.state(), s1, s2)
    print(f"{title}: {len(dec)} vectors, rank {rep.rank}, pass={rep.passed}")
    for z in dec.vectors:
        nz = {int(i): round(float(abs(z[i]) ** 2), 4) for i in np.flatnonzero(np.abs(z) > 1e-12)}
        print("    support (index: |entry|^2)", nz)


dec = ladder_state(s1, s2)
show(dec, "ladder")

while True:
    ranks = [len(schmidt(z, 3, 2)) for z in dec.vectors]
    j = int(np.argmax(ranks))
    if ranks[j] < 2:
        break
    dec = split_step(dec, j, 1)
    show(dec, f"after splitting vector {j}")
