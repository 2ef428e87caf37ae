"""Explicit bipartite states with prescribed marginals and prescribed rank.

Three routes, chosen by :func:`state_of_rank`:

* rank one: a single vector whose Schmidt coefficients are the square
  roots of the common nonzero spectrum;
* ranks ``r1 .. r1*r2`` (``r1 >= r2`` the marginal ranks): the cyclic
  ladder of product-basis vectors in the joint eigenbasis, then splitting
  one Schmidt term off at a time;
* ranks below ``r1``: a numerical search for ``V`` (``mn x k``) with
  ``tr_1(VV^*) = sigma2`` and ``tr_2(VV^*) = sigma1``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import feasibility
from .linalg import (
    PSD_TOL,
    RANK_TOL,
    SV_CUTOFF,
    check_density,
    eigvals_desc,
    hermitian_eigs,
    partial_trace_1,
    partial_trace_2,
    rank_eps,
    schmidt,
    swap_matrix,
)

log = logging.getLogger(__name__)

MEMBER_TOL = 1e-8
SPEC_TOL = 1e-8
ORACLE_TOL = 1e-14
MAX_RESTARTS = 32
ITERS = 5000
DEFAULT_SEED = 20170101


class RankOutOfRangeError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    """The numerical search failed where the exact LP says a witness exists."""


@dataclass
class RankOneDecomposition:
    """``rho = sum_j z_j z_j^*`` on C^m (x) C^n."""

    vectors: list
    dims: tuple

    def __len__(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """The ``mn x len`` matrix with the ``z_j`` as columns."""
        m, n = self.dims
        if not self.vectors:
            return np.zeros((m * n, 0), dtype=complex)
        return np.column_stack(self.vectors).astype(complex)

    def state(self) -> np.ndarray:
        Z = self.matrix()
        return Z @ Z.conj().T

    def rank(self, tol: float = RANK_TOL) -> int:
        # eigenvalues of Z Z^* are the squared singular values of Z
        s = np.linalg.svd(self.matrix(), compute_uv=False)
        return int(np.sum(s**2 > tol))

    def trace(self) -> float:
        return float(sum(np.vdot(z, z).real for z in self.vectors))

    def transformed(self, K: np.ndarray, dims=None) -> "RankOneDecomposition":
        return RankOneDecomposition([K @ z for z in self.vectors], dims or self.dims)


@dataclass
class MembershipReport:
    residual_tr1: float
    residual_tr2: float
    psd_min_eig: float
    rank: int
    trace: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "residual_tr1": self.residual_tr1,
            "residual_tr2": self.residual_tr2,
            "psd_min_eig": self.psd_min_eig,
            "rank": self.rank,
            "trace": self.trace,
            "pass": self.passed,
        }


def verify_membership(rho, sigma1, sigma2, tol: float = MEMBER_TOL, psd_tol: float = PSD_TOL,
                      rank_tol: float = RANK_TOL) -> MembershipReport:
    """Check ``tr_2(rho) = sigma1``, ``tr_1(rho) = sigma2`` and ``rho >= 0``."""
    rho = np.asarray(rho, dtype=complex)
    s1 = np.asarray(sigma1, dtype=complex)
    s2 = np.asarray(sigma2, dtype=complex)
    m, n = s1.shape[0], s2.shape[0]
    if rho.shape != (m * n, m * n):
        raise ValueError(f"rho has shape {rho.shape}, expected {(m * n, m * n)}")
    r1 = float(np.linalg.norm(partial_trace_1(rho, (m, n)) - s2))
    r2 = float(np.linalg.norm(partial_trace_2(rho, (m, n)) - s1))
    herm = float(np.linalg.norm(rho - rho.conj().T))
    vals = eigvals_desc(0.5 * (rho + rho.conj().T))
    lo = float(vals[-1])
    rank = int(np.sum(np.abs(vals) > rank_tol))
    ok = r1 <= tol and r2 <= tol and lo >= -psd_tol and herm <= tol
    return MembershipReport(r1, r2, lo, rank, float(np.trace(rho).real), bool(ok))


def _eig_clamped(sigma):
    vals, U = hermitian_eigs(sigma)
    vals = np.where(vals > RANK_TOL, vals, 0.0)
    return vals, U


def rank_one_state(sigma1, sigma2, spec_tol: float = SPEC_TOL) -> np.ndarray:
    """Rank-one ``vv^*`` with ``tr_2 = sigma1`` and ``tr_1 = sigma2``.

    ``v = sum_j sqrt(lambda_j) x_j (x) y_j`` with ``x_j``, ``y_j`` eigenvectors
    of ``sigma1``, ``sigma2`` for the common nonzero eigenvalues.  Since
    ``tr_1(ww^*) = [w]^t conj([w])``, the ``y_j`` enter without conjugation.
    """
    v = _rank_one_vector(sigma1, sigma2, spec_tol)
    return np.outer(v, v.conj())


def _rank_one_vector(sigma1, sigma2, spec_tol: float = SPEC_TOL) -> np.ndarray:
    mu, U = _eig_clamped(sigma1)
    nu, V = _eig_clamped(sigma2)
    r = int(np.sum(mu > 0))
    if r != int(np.sum(nu > 0)) or np.max(np.abs(mu[:r] - nu[:r]), initial=0.0) > spec_tol:
        raise ValueError("marginals do not share the same nonzero spectrum")
    lam = 0.5 * (mu[:r] + nu[:r])
    v = sum(np.sqrt(lam[j]) * np.kron(U[:, j], V[:, j]) for j in range(r))
    return np.asarray(v, dtype=complex)


def _ladder_vectors(mu, nu) -> list:
    """Ladder vectors for diagonal marginals with ``len(mu) = r1 >= r2 = len(nu)``.

    ``z_l = sum_i v_{c(i, l), i}`` over ``i = 1..r2``, where ``v_ij = sqrt(mu_i nu_j) e_i (x) e_j``
    and ``c(i, l) = i + l - 1`` wraps cyclically past ``r1``.
    Returns 0-based index pairs and weights: ``[[(i, j, w), ...], ...]``.
    """
    r1, r2 = len(mu), len(nu)
    out = []
    for ell in range(1, r1 + 1):
        terms = []
        for i in range(1, r2 + 1):
            if ell <= r1 - r2 + 1 or i <= r1 + 1 - ell:
                row = i + ell - 1
            else:
                row = i + ell - 1 - r1
            terms.append((row - 1, i - 1, np.sqrt(mu[row - 1] * nu[i - 1])))
        out.append(terms)
    return out


def _diag_ladder(mu, nu, m: int, n: int) -> RankOneDecomposition:
    r1 = int(np.sum(mu > 0))
    r2 = int(np.sum(nu > 0))
    vecs = []
    for terms in _ladder_vectors(mu[:r1], nu[:r2]):
        z = np.zeros(m * n, dtype=complex)
        for i, j, w in terms:
            z[i * n + j] = w
        vecs.append(z)
    return RankOneDecomposition(vecs, (m, n))


def _oriented_ladder(sigma1, sigma2):
    """Ladder in the joint eigenbasis plus the map back to the standard basis."""
    s1 = np.asarray(sigma1, dtype=complex)
    s2 = np.asarray(sigma2, dtype=complex)
    m, n = s1.shape[0], s2.shape[0]
    mu, U = _eig_clamped(s1)
    nu, V = _eig_clamped(s2)
    if np.sum(mu > 0) >= np.sum(nu > 0):
        dec = _diag_ladder(mu, nu, m, n)
        return dec, np.kron(U, V)
    # build for the swapped problem, then exchange the factors back
    dec = _diag_ladder(nu, mu, n, m)
    P = swap_matrix(n, m)
    dec = dec.transformed(P, (m, n))
    return dec, np.kron(U, V)


def ladder_state(sigma1, sigma2) -> RankOneDecomposition:
    """Decomposition into ``max(rank sigma1, rank sigma2)`` vectors whose state has these marginals."""
    dec, K = _oriented_ladder(sigma1, sigma2)
    return dec.transformed(K)


def split_step(dec: RankOneDecomposition, j: int, p: int = 1, cutoff: float = SV_CUTOFF) -> RankOneDecomposition:
    """Replace ``z_j`` by its first ``p`` Schmidt terms and the sum of the rest.

    Cross terms between distinct Schmidt terms have vanishing partial
    traces, so both marginals are unchanged.
    """
    m, n = dec.dims
    form = schmidt(dec.vectors[j], m, n, cutoff)
    if not 1 <= p < len(form):
        raise ValueError(f"split point {p} outside 1..{len(form) - 1} (Schmidt rank {len(form)})")
    terms = form.term_vectors()
    new = terms[:p] + [np.sum(terms[p:], axis=0)]
    vectors = dec.vectors[:j] + new + dec.vectors[j + 1:]
    return RankOneDecomposition(vectors, dec.dims)


def _schmidt_rank(z, dims, cutoff=SV_CUTOFF) -> int:
    m, n = dims
    if np.linalg.norm(z) <= cutoff:
        return 0
    return len(schmidt(z, m, n, cutoff))


def split_to_rank(dec: RankOneDecomposition, k: int) -> RankOneDecomposition | None:
    """Greedy p = 1 splits of the term with the largest Schmidt rank until the rank is ``k``."""
    current = dec.rank()
    while current < k:
        ranks = [_schmidt_rank(z, dec.dims) for z in dec.vectors]
        j = int(np.argmax(ranks))
        if ranks[j] < 2:
            return None
        dec = split_step(dec, j, 1)
        current = dec.rank()
    return dec if current == k else None


def _decomposition_of(rho, dims) -> RankOneDecomposition:
    vals, U = hermitian_eigs(rho)
    keep = vals > RANK_TOL
    return RankOneDecomposition([np.sqrt(v) * U[:, i] for i, v in zip(np.flatnonzero(keep), vals[keep])], dims)


def _objective(x, s1, s2, k, m, n):
    N = k * m * n
    W = (x[:N] + 1j * x[N:]).reshape(k, m, n)
    A = np.einsum("kij,klj->il", W, W.conj()) - s1
    B = np.einsum("kia,kib->ab", W, W.conj()) - s2
    f = float(np.sum(np.abs(A) ** 2) + np.sum(np.abs(B) ** 2))
    G = 4.0 * (np.einsum("il,klj->kij", A, W) + np.einsum("kil,jl->kij", W, B))
    return f, np.concatenate([G.real.ravel(), G.imag.ravel()])


def witness_search(sigma1, sigma2, k: int, max_restarts: int = MAX_RESTARTS, iters: int = ITERS,
                   oracle_tol: float = ORACLE_TOL, seed: int | None = DEFAULT_SEED):
    """Minimize ``||tr_1(VV^*) - sigma2||^2 + ||tr_2(VV^*) - sigma1||^2`` over ``V`` in C^{mn x k}.

    L-BFGS with the analytic gradient, from random starts drawn in order
    from ``seed``.  Returns ``(V, f, restarts_used)`` for the first start
    reaching ``f < oracle_tol``, otherwise the best ``(V, f)`` seen.
    """
    if k < 1:
        raise ValueError("k must be positive")
    s1 = np.asarray(sigma1, dtype=complex)
    s2 = np.asarray(sigma2, dtype=complex)
    m, n = s1.shape[0], s2.shape[0]
    rng = np.random.default_rng(seed)
    best = (None, np.inf)
    for attempt in range(max_restarts):
        x0 = rng.standard_normal(2 * k * m * n)
        x0 /= np.linalg.norm(x0)
        res = minimize(_objective, x0, args=(s1, s2, k, m, n), jac=True, method="L-BFGS-B",
                       options={"maxiter": iters, "ftol": 1e-30, "gtol": 1e-14, "maxcor": 30})
        f = float(res.fun)
        if f < best[1]:
            N = k * m * n
            V = (res.x[:N] + 1j * res.x[N:]).reshape(k, m * n).T
            best = (V, f)
        if f < oracle_tol:
            return best[0], best[1], attempt + 1
    return best[0], best[1], max_restarts


def numerical_witness(sigma1, sigma2, k: int, max_restarts: int = MAX_RESTARTS, iters: int = ITERS,
                      oracle_tol: float = ORACLE_TOL, seed: int | None = DEFAULT_SEED):
    """A state ``VV^*`` of rank at most ``k`` with the given marginals, or ``None``."""
    V, f, _ = witness_search(sigma1, sigma2, k, max_restarts, iters, oracle_tol, seed)
    if f >= oracle_tol:
        return None
    return V @ V.conj().T


def state_of_rank(sigma1, sigma2, k: int, seed: int | None = DEFAULT_SEED, max_restarts: int = MAX_RESTARTS,
                  iters: int = ITERS) -> np.ndarray:
    """A state of rank exactly ``k`` with marginals ``sigma1`` (``tr_2``) and ``sigma2`` (``tr_1``)."""
    check_density(sigma1)
    check_density(sigma2)
    s1 = np.asarray(sigma1, dtype=complex)
    s2 = np.asarray(sigma2, dtype=complex)
    dims = (s1.shape[0], s2.shape[0])
    ranks = feasibility.rank_range(s1, s2)
    if k not in ranks:
        raise RankOutOfRangeError(f"rank {k} not achievable; achievable ranks are {ranks.start}..{ranks.stop - 1}")
    r_hi = max(rank_eps(s1), rank_eps(s2))

    if k >= r_hi:
        dec, K = _oriented_ladder(s1, s2)
        dec = split_to_rank(dec, k)
        if dec is None:
            raise NumericalFailure(f"splitting the ladder did not reach rank {k}")
        rho = dec.transformed(K).state()
    elif ranks.start == 1:
        v = _rank_one_vector(s1, s2)
        dec = split_to_rank(RankOneDecomposition([v], dims), k)
        if dec is None:
            raise NumericalFailure(f"splitting the rank-one state did not reach rank {k}")
        rho = dec.state()
    else:
        rho = _numerical_rank(s1, s2, k, ranks.start, dims, seed, max_restarts, iters)

    rep = verify_membership(rho, s1, s2)
    if not rep.passed or rep.rank != k:
        raise NumericalFailure(f"constructed state fails verification: {rep}")
    return rho


def _numerical_rank(s1, s2, k, lo, dims, seed, max_restarts, iters):
    for start in ([k] if k == lo else [k, lo]):
        rho = numerical_witness(s1, s2, start, max_restarts, iters, seed=seed)
        if rho is None:
            log.info("numerical search failed at rank %d", start)
            continue
        dec = split_to_rank(_decomposition_of(rho, dims), k)
        if dec is not None:
            return dec.state()
    raise NumericalFailure(f"no numerical witness of rank {k}, although the LP certifies one exists")
