"""Channels with a prescribed image of the maximally mixed state.

A channel M_m -> M_n with Phi(I/m) = sigma2 corresponds to a state with
marginals I/m and sigma2 (its Choi matrix divided by m).  So the possible
Choi ranks, i.e. the minimal Kraus counts, are a rank range, and a channel
can be synthesized for each of them.

Run:  python demos/channels_with_choi_rank.py
"""
import numpy as np

from redrank.channels import apply_channel, channel_with_choi_rank, choi_rank_range, fixed_marginal

rng = np.random.default_rng(1)
sigma2 = np.diag([0.55, 0.3, 0.15])

for m in (1, 2, 3):
    ranks = list(choi_rank_range(sigma2, m))
    print(f"m={m}: Choi ranks {ranks}")
    for k in ranks:
        ch = channel_with_choi_rank(sigma2, m, k)
        err = np.abs(fixed_marginal(ch) - sigma2).max()
        A = rng.standard_normal((m, m))
        A = A @ A.T
        tr_err = abs(np.trace(apply_channel(ch, A)) - np.trace(A))
        print(f"    k={k}: {len(ch)} Kraus ops, TP defect {ch.tp_defect():.1e}, "
              f"|Phi(I/m)-sigma2| {err:.1e}, trace error {tr_err:.1e}")

print("\nunital qubit channels: every k in", list(choi_rank_range(np.eye(2) / 2, 2)))
for k in range(1, 5):
    ch = channel_with_choi_rank(np.eye(2) / 2, 2, k)
    print(f"    k={k}: Phi(I/2) = {np.round(fixed_marginal(ch).real, 12).tolist()}")
