"""Dense Hermitian linear algebra on bipartite spaces C^m (x) C^n.

Matrices are plain numpy arrays.  Every routine here also accepts
``dtype=object`` arrays of :class:`fractions.Fraction`, so partial traces
and the system swap can be evaluated exactly.

Basis convention: ``e_i (x) e_j`` sits at flat index ``i * n + j``
(zero-based), i.e. ``np.kron`` ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
SV_CUTOFF = 1e-8
RANK_TOL = 1e-8
EIG_TOL = 1e-12
UNIT_TOL = 1e-10
MAJ_TOL = 1e-12
RAT_DEN_CAP = 10**6


class DimensionError(ValueError):
    """Shapes do not match the declared bipartite split."""


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class InvalidStateError(ValueError):
    """Input is not a density matrix (PSD with unit trace)."""


@dataclass(frozen=True)
class SchmidtForm:
    """Singular triples ``(s_j, x_j, y_j)`` with ``w = sum_j s_j x_j (x) y_j``."""

    coeffs: np.ndarray  # shape (k,), decreasing, positive
    left: np.ndarray  # shape (m, k), orthonormal columns
    right: np.ndarray  # shape (n, k), orthonormal columns

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def terms(self) -> list[tuple[float, np.ndarray, np.ndarray]]:
        return [(float(s), self.left[:, j], self.right[:, j]) for j, s in enumerate(self.coeffs)]

    def term_vectors(self) -> list[np.ndarray]:
        """The vectors ``s_j x_j (x) y_j`` in C^{mn}."""
        return [s * np.kron(x, y) for s, x, y in self.terms]

    def reconstruct(self) -> np.ndarray:
        m, n = self.left.shape[0], self.right.shape[0]
        if len(self) == 0:
            return np.zeros(m * n, dtype=complex)
        return np.sum(self.term_vectors(), axis=0)


def _split(rho, dims):
    if dims is None:
        raise DimensionError("a bipartite split (m, n) is required")
    m, n = dims
    rho = np.asarray(rho)
    if rho.shape != (m * n, m * n):
        raise DimensionError(f"matrix of shape {rho.shape} does not match split {(m, n)}")
    return rho.reshape(m, n, m, n), m, n


def partial_trace_1(rho, dims):
    """Trace out the first factor: the sum of the m diagonal n x n blocks."""
    r4, m, n = _split(rho, dims)
    out = r4[0, :, 0, :].copy()
    for i in range(1, m):
        out = out + r4[i, :, i, :]
    return out


def partial_trace_2(rho, dims):
    """Trace out the second factor: the m x m matrix of block traces."""
    r4, m, n = _split(rho, dims)
    out = r4[:, 0, :, 0].copy()
    for a in range(1, n):
        out = out + r4[:, a, :, a]
    return out


def matricize(w, m: int, n: int) -> np.ndarray:
    """Reshape ``w`` in C^{mn} into the m x n matrix whose i-th row is ``w[i*n:(i+1)*n]``."""
    w = np.asarray(w)
    if w.ndim != 1 or w.shape[0] != m * n:
        raise DimensionError(f"vector of length {w.shape} cannot be matricized as {m}x{n}")
    return w.reshape(m, n).copy()


def vectorize(W) -> np.ndarray:
    """Inverse of :func:`matricize`."""
    return np.asarray(W).reshape(-1).copy()


def _monomial_terms(W, cutoff):
    # Exact Schmidt triples when each row and column of W has at most one
    # non-negligible entry; avoids SVD mixing inside degenerate subspaces.
    mask = np.abs(W) > cutoff
    if np.any(mask.sum(axis=0) > 1) or np.any(mask.sum(axis=1) > 1):
        return None
    m, n = W.shape
    idx = np.argwhere(mask)
    vals = W[mask]
    order = sorted(range(len(idx)), key=lambda t: (-abs(vals[t]), tuple(idx[t])))
    k = len(order)
    s = np.empty(k)
    X = np.zeros((m, k), dtype=complex)
    Y = np.zeros((n, k), dtype=complex)
    for col, t in enumerate(order):
        i, j = idx[t]
        s[col] = abs(vals[t])
        X[i, col] = vals[t] / abs(vals[t])
        Y[j, col] = 1.0
    return SchmidtForm(s, X, Y)


def schmidt(w, m: int, n: int, cutoff: float = SV_CUTOFF) -> SchmidtForm:
    """Schmidt decomposition of ``w`` from the SVD of its matricization."""
    W = matricize(np.asarray(w, dtype=complex), m, n)
    if not np.any(np.abs(W) > 0):
        raise ValueError("Schmidt decomposition of the zero vector")
    mono = _monomial_terms(W, cutoff)
    if mono is not None:
        return mono
    X, s, Yt = np.linalg.svd(W)
    k = int(np.sum(s > cutoff))
    # W = X S Yt, so the right factors are the rows of Yt (no conjugation).
    return SchmidtForm(s[:k].copy(), X[:, :k].copy(), Yt[:k, :].T.copy())


def is_hermitian(H, tol: float = HERM_TOL) -> bool:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        return False
    if H.dtype == object:
        return all(H[i, j] == _conj(H[j, i]) for i in range(H.shape[0]) for j in range(H.shape[0]))
    return bool(np.max(np.abs(H - H.conj().T), initial=0.0) <= tol)


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


def _jacobi_rotation(app: float, aqq: float, apq: complex):
    """2x2 unitary ``U`` with ``(U^* [[app, apq], [conj apq, aqq]] U)`` diagonal."""
    g = abs(apq)
    phase = apq / g
    tau = (aqq - app) / (2.0 * g)
    t = 1.0 / (abs(tau) + np.sqrt(1.0 + tau * tau))
    if tau < 0:
        t = -t
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)


def hermitian_eigs(H, tol: float = EIG_TOL, max_sweeps: int = 60, herm_tol: float = HERM_TOL):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps over all pivots (p, q) until the off-diagonal Frobenius norm is at
    most ``tol * ||H||_F``.

    Returns
    -------
    values : ndarray
        Eigenvalues in decreasing order.
    U : ndarray
        Unitary whose columns are the matching eigenvectors, ``H U = U diag(values)``.
    """
    H = np.asarray(H)
    if H.dtype == object:
        H = H.astype(complex)
    if not is_hermitian(H, herm_tol * max(1.0, float(np.linalg.norm(H)))):
        raise NotHermitianError("hermitian_eigs requires a Hermitian matrix")
    A = np.array(H, dtype=complex)
    A = 0.5 * (A + A.conj().T)
    d = A.shape[0]
    V = np.eye(d, dtype=complex)
    scale = np.linalg.norm(A)
    if d > 1 and scale > 0:
        for _ in range(max_sweeps):
            off = np.linalg.norm(A - np.diag(np.diag(A)))
            if off <= tol * scale:
                break
            for p in range(d - 1):
                for q in range(p + 1, d):
                    apq = A[p, q]
                    if abs(apq) <= 1e-300 or abs(apq) < 1e-3 * tol * scale / d:
                        continue
                    R = _jacobi_rotation(A[p, p].real, A[q, q].real, apq)
                    cols = [p, q]
                    A[:, cols] = A[:, cols] @ R
                    A[cols, :] = R.conj().T @ A[cols, :]
                    A[p, q] = A[q, p] = 0.0
                    V[:, cols] = V[:, cols] @ R
        else:
            raise RuntimeError("Jacobi iteration did not converge")
    vals = np.real(np.diag(A)).copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], V[:, order]


def eigvals_desc(H) -> np.ndarray:
    return hermitian_eigs(H)[0]


def rank_eps(H, tol: float = RANK_TOL) -> int:
    """Number of eigenvalues of ``H`` with absolute value above ``tol``."""
    return int(np.sum(np.abs(eigvals_desc(H)) > tol))


def _pad(a, b):
    a, b = list(a), list(b)
    d = max(len(a), len(b))
    return a + [0] * (d - len(a)), b + [0] * (d - len(b))


def majorizes(a, b, tol: float = MAJ_TOL) -> bool:
    """True iff ``a`` is majorized by ``b`` (``a < b`` in the majorization order).

    Shorter vectors are padded with zeros.  With exact (``Fraction``/int)
    inputs the comparison is exact and ``tol`` is ignored.
    """
    a, b = _pad(a, b)
    exact = all(isinstance(x, (int, Fraction)) for x in a + b)
    if exact:
        tol = 0
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb + tol:
            return False
    return abs(sa - sb) <= tol


def swap_matrix(m: int, n: int) -> np.ndarray:
    """Permutation ``P`` with ``P (x (x) y) = y (x) x`` for x in C^m, y in C^n."""
    P = np.zeros((m * n, m * n), dtype=int)
    for i in range(m):
        for j in range(n):
            P[j * m + i, i * n + j] = 1
    return P


def swap_systems(rho, dims):
    """Exchange the two tensor factors; the result carries the split (n, m)."""
    r4, m, n = _split(rho, dims)
    return r4.transpose(1, 0, 3, 2).reshape(m * n, m * n).copy()


def is_unitary(U, tol: float = UNIT_TOL) -> bool:
    U = np.asarray(U, dtype=complex)
    return U.ndim == 2 and U.shape[0] == U.shape[1] and np.allclose(
        U.conj().T @ U, np.eye(U.shape[0]), atol=tol, rtol=0
    )


def conjugate_local(rho, U, V, tol: float = UNIT_TOL) -> np.ndarray:
    """Return ``(U (x) V) rho (U (x) V)^*``."""
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if not is_unitary(U, tol) or not is_unitary(V, tol):
        raise NotUnitaryError("local factors must be unitary")
    _split(rho, (U.shape[0], V.shape[0]))
    K = np.kron(U, V)
    return K @ np.asarray(rho, dtype=complex) @ K.conj().T


def check_density(rho, psd_tol: float = PSD_TOL, trace_tol: float = TRACE_TOL, herm_tol: float = HERM_TOL):
    """Raise :class:`InvalidStateError` unless ``rho`` is a density matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"not a square matrix: shape {rho.shape}")
    if not is_hermitian(rho, herm_tol):
        raise InvalidStateError("matrix is not Hermitian")
    vals = eigvals_desc(rho)
    if vals[-1] < -psd_tol:
        raise InvalidStateError(f"matrix is not PSD (min eigenvalue {vals[-1]:.3e})")
    tr = complex(np.trace(rho.astype(complex)))
    if abs(tr - 1) > trace_tol:
        raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1")
    return rho


def rationalize(values, cap: int = RAT_DEN_CAP, zero_tol: float = RANK_TOL) -> tuple[Fraction, ...]:
    """Exact rational spectrum for floating eigenvalues, sorted decreasing.

    Each value is rounded by continued fractions with denominator at most
    ``cap``; values within ``zero_tol`` of zero become exactly 0.  If the
    rounded values do not sum to 1 exactly, the largest entry absorbs the
    difference so the result is normalized without disturbing small,
    exactly-represented eigenvalues.
    """
    out = []
    for v in values:
        if isinstance(v, (Fraction, int)):
            out.append(Fraction(v))
            continue
        v = float(np.real(v))
        if abs(v) <= zero_tol:
            out.append(Fraction(0))
        else:
            out.append(Fraction(v).limit_denominator(cap))
    out.sort(reverse=True)
    total = sum(out, Fraction(0))
    if out and total != 1 and abs(total - 1) <= 1e-6:
        out[0] += 1 - total
    return tuple(out)


def spectrum(H, cap: int = RAT_DEN_CAP) -> tuple[Fraction, ...]:
    """Rational decreasing spectrum of a density matrix (float or exact)."""
    H = np.asarray(H)
    if H.dtype == object and H.shape == (1, 1):
        return (Fraction(H[0, 0]),)
    return rationalize(eigvals_desc(H), cap)


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_density(d: int, rng, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^* / tr`` with ``G`` a d x rank Ginibre matrix."""
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def density_from_spectrum(values, U=None) -> np.ndarray:
    """``U diag(values) U^*`` (``U`` defaults to the identity)."""
    D = np.diag(np.asarray([float(v) for v in values], dtype=float)).astype(complex)
    if U is None:
        return D
    return U @ D @ U.conj().T
