"""Ranks of bipartite density matrices with prescribed marginals."""
from .channels import KrausRep, channel_with_choi_rank, choi_rank, choi_rank_range
from .combinat import IndexTuple, klyachko_inequalities, lr_coefficient
from .construct import (
    RankOneDecomposition,
    ladder_state,
    numerical_witness,
    rank_one_state,
    state_of_rank,
    verify_membership,
)
from .feasibility import build_Pr, build_Qr, in_S_r, lp_feasible, min_rank, rank_range
from .linalg import partial_trace_1, partial_trace_2, rank_eps, schmidt

__all__ = [
    "IndexTuple",
    "KrausRep",
    "RankOneDecomposition",
    "build_Pr",
    "build_Qr",
    "channel_with_choi_rank",
    "choi_rank",
    "choi_rank_range",
    "in_S_r",
    "klyachko_inequalities",
    "ladder_state",
    "lp_feasible",
    "lr_coefficient",
    "min_rank",
    "numerical_witness",
    "partial_trace_1",
    "partial_trace_2",
    "rank_eps",
    "rank_one_state",
    "rank_range",
    "schmidt",
    "state_of_rank",
    "verify_membership",
]
