"""Kraus and Choi representations of channels M_m -> M_n.

The Choi matrix is the block matrix ``C = (Phi(E_ij))_{i,j<=m}`` of size
``mn``.  A Kraus operator ``F`` (n x m) corresponds to the vector
``u = sum_i e_i (x) F e_i``, i.e. ``matricize(u, m, n) = F^t``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import construct, feasibility
from .linalg import (
    PSD_TOL,
    RANK_TOL,
    check_density,
    hermitian_eigs,
    matricize,
    partial_trace_2,
    rank_eps,
    vectorize,
)

TP_TOL = 1e-9


class TracePreservationError(ValueError):
    pass


@dataclass
class KrausRep:
    m: int
    n: int
    operators: list  # n x m arrays

    def __post_init__(self):
        self.operators = [np.asarray(F, dtype=complex) for F in self.operators]
        for F in self.operators:
            if F.shape != (self.n, self.m):
                raise ValueError(f"Kraus operator of shape {F.shape}, expected {(self.n, self.m)}")

    def __len__(self) -> int:
        return len(self.operators)

    def tp_defect(self) -> float:
        S = sum(F.conj().T @ F for F in self.operators)
        return float(np.max(np.abs(S - np.eye(self.m))))

    def is_trace_preserving(self, tol: float = TP_TOL) -> bool:
        return self.tp_defect() <= tol


def apply_channel(k: KrausRep, A) -> np.ndarray:
    """``Phi(A) = sum_j F_j A F_j^*``."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (k.m, k.m):
        raise ValueError(f"input of shape {A.shape}, expected {(k.m, k.m)}")
    return sum(F @ A @ F.conj().T for F in k.operators)


def choi_from_kraus(k: KrausRep, tp_tol: float = TP_TOL) -> np.ndarray:
    if not k.is_trace_preserving(tp_tol):
        raise TracePreservationError(f"sum F^*F deviates from I by {k.tp_defect():.3e}")
    U = np.column_stack([vectorize(F.T) for F in k.operators])
    return U @ U.conj().T


def kraus_from_choi(C, m: int, n: int, rank_tol: float = RANK_TOL, psd_tol: float = PSD_TOL) -> KrausRep:
    """One Kraus operator ``sqrt(lambda) * matricize(u)^t`` per eigenpair above ``rank_tol``."""
    C = np.asarray(C, dtype=complex)
    if C.shape != (m * n, m * n):
        raise ValueError(f"Choi matrix of shape {C.shape}, expected {(m * n, m * n)}")
    vals, U = hermitian_eigs(C)
    if vals[-1] < -psd_tol * max(1.0, m):
        raise ValueError(f"Choi matrix is not PSD (min eigenvalue {vals[-1]:.3e})")
    ops = [np.sqrt(lam) * matricize(U[:, i], m, n).T for i, lam in enumerate(vals) if lam > rank_tol]
    return KrausRep(m, n, ops)


def is_choi_of_channel(C, m: int, n: int, tol: float = TP_TOL, psd_tol: float = PSD_TOL) -> bool:
    """PSD with block traces ``(tr P_ij) = I_m``."""
    C = np.asarray(C, dtype=complex)
    vals = hermitian_eigs(C)[0]
    return bool(vals[-1] >= -psd_tol and np.allclose(partial_trace_2(C, (m, n)), np.eye(m), atol=tol, rtol=0))


def choi_rank(k: KrausRep) -> int:
    return rank_eps(choi_from_kraus(k))


def fixed_marginal(k: KrausRep) -> np.ndarray:
    """``Phi(I_m / m)``."""
    return apply_channel(k, np.eye(k.m) / k.m)


def choi_rank_range(sigma2, m: int) -> range:
    """Choi ranks of channels ``M_m -> M_n`` with ``Phi(I_m/m) = sigma2``."""
    check_density(sigma2)
    return feasibility.rank_range(np.eye(m, dtype=complex) / m, sigma2)


def channel_with_choi_rank(sigma2, m: int, k: int, seed: int | None = construct.DEFAULT_SEED) -> KrausRep:
    """A channel with exactly ``k`` Kraus operators and ``Phi(I_m/m) = sigma2``."""
    sigma2 = np.asarray(sigma2, dtype=complex)
    n = sigma2.shape[0]
    rho = construct.state_of_rank(np.eye(m, dtype=complex) / m, sigma2, k, seed=seed)
    rep = kraus_from_choi(m * rho, m, n)
    if len(rep) != k:
        raise construct.NumericalFailure(f"extracted {len(rep)} Kraus operators, expected {k}")
    return rep


def analyze(k: KrausRep) -> dict:
    C = choi_from_kraus(k, tp_tol=np.inf)
    return {
        "choi_rank": rank_eps(C),
        "fixed_marginal": fixed_marginal(k),
        "trace_preserving": k.is_trace_preserving(),
        "tp_defect": k.tp_defect(),
    }

