"""Dense complex matrix kernel for desk-scale (n <= 16) matrices.

Everything operates on plain numpy ``complex128`` arrays and is a pure
function of its arguments.  Heavy lifting (LU determinants, Hermitian
eigendecompositions, SVD) is delegated to LAPACK through numpy/scipy;
the cofactor adjugate keeps Adj(A) well defined near singularity, where
det(A) * inv(A) is not.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import sqrtm

from .errors import FactorizationError, NotHermitian, NotPositiveDefinite

__all__ = [
    "as_square_matrix",
    "frob",
    "scalar_residual",
    "matrix_residual",
    "determinant",
    "adjugate",
    "hermitian_eig",
    "pd_sqrt",
    "numeric_rank",
    "principal_root",
    "takagi_factor",
    "matrix_to_json",
    "matrix_from_json",
]


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and coerce ``a`` to a finite square complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"{name} must be a square n x n array, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def frob(a) -> float:
    return float(np.linalg.norm(a))


def scalar_residual(x, y) -> float:
    """Scale-aware scalar deviation |x - y| / (1 + |x| + |y|)."""
    x = complex(x)
    y = complex(y)
    return abs(x - y) / (1.0 + abs(x) + abs(y))


def matrix_residual(x, y) -> float:
    """Scale-aware Frobenius deviation ||X - Y|| / (1 + ||X|| + ||Y||)."""
    x = np.asarray(x)
    y = np.asarray(y)
    return float(np.linalg.norm(x - y) / (1.0 + np.linalg.norm(x) + np.linalg.norm(y)))


def determinant(a) -> complex:
    """Determinant via LAPACK's partially pivoted LU; exact for n = 1."""
    m = np.asarray(a, dtype=complex)
    if m.shape[0] == 1:
        return complex(m[0, 0])
    return complex(np.linalg.det(m))


def _adjugate_cofactor(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    adj = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(a, j, axis=0), i, axis=1)
            adj[i, j] = (-1) ** (i + j) * determinant(minor)
    return adj


def adjugate(a) -> np.ndarray:
    """Adjugate Adj(A) with A @ Adj(A) = det(A) I.

    Cofactors for n <= 4; det(A) * inv(A) for larger n, falling back to
    cofactors when |det A| < 1e-12 * max(1, ||A||_F)^n so the result stays
    meaningful for (near-)singular input.
    """
    m = np.asarray(a, dtype=complex)
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    if n <= 4:
        return _adjugate_cofactor(m)
    d = determinant(m)
    if abs(d) < 1e-12 * max(1.0, frob(m)) ** n:
        return _adjugate_cofactor(m)
    return d * np.linalg.inv(m)


def hermitian_eig(a):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` real ascending and ``v``
    unitary, so that A = v @ diag(w) @ v^*.  Raises :class:`NotHermitian`
    when ||A - A^*||_F > 1e-10 (1 + ||A||_F).
    """
    m = np.asarray(a, dtype=complex)
    if np.linalg.norm(m - m.conj().T) > 1e-10 * (1.0 + frob(m)):
        raise NotHermitian("input is not Hermitian within tolerance 1e-10")
    w, v = np.linalg.eigh(m)
    return w, v


def pd_sqrt(a) -> np.ndarray:
    """Unique positive definite square root of a PD matrix."""
    w, v = hermitian_eig(a)
    if w[0] <= 1e-10:
        raise NotPositiveDefinite(f"minimum eigenvalue {w[0]:.3e} is not > 1e-10")
    s = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def numeric_rank(a, ratio_tol: float) -> int:
    """Count singular values above ratio_tol * sigma_max (0 for the zero matrix)."""
    if not 0.0 < ratio_tol < 1.0:
        raise ValueError(f"ratio_tol must lie in (0, 1), got {ratio_tol}")
    s = np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > ratio_tol * s[0]))


def principal_root(z, k: int) -> complex:
    """Principal k-th root of a nonzero complex number.

    Positive real input gives the positive real root exactly.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("principal root of zero is undefined here")
    if z.imag == 0.0 and z.real > 0.0:
        return complex(z.real ** (1.0 / k))
    return z ** (1.0 / k)


def takagi_factor(c, tol: float = 1e-8) -> np.ndarray:
    """Factor an invertible complex symmetric C as Q @ Q^T.

    Uses the Autonne/Takagi route: from an SVD C = U S V^H symmetry forces
    C = U (S B^T) U^T with B = U^H V-bar unitary and B S = S B^T.  A square
    root of B taken with the branch cut rotated into the widest eigenphase
    gap inherits that relation, so Q = U B^{1/2} S^{1/2} satisfies
    Q Q^T = C.  Raises :class:`FactorizationError` if C is numerically
    singular or the reconstruction misses by more than ``tol``.
    """
    m = as_square_matrix(c, "symmetric factor input")
    m = 0.5 * (m + m.T)
    u, s, vh = np.linalg.svd(m)
    if s[-1] <= 1e-12 * max(s[0], 1.0):
        raise FactorizationError("matrix is numerically singular")
    b = u.conj().T @ vh.T
    phases = np.sort(np.angle(np.linalg.eigvals(b)))
    ext = np.concatenate([phases, [phases[0] + 2.0 * np.pi]])
    gaps = np.diff(ext)
    g = int(np.argmax(gaps))
    cut = phases[g] + 0.5 * gaps[g]
    psi = cut - np.pi
    root = sqrtm(np.exp(-1j * psi) * b)
    if isinstance(root, tuple):  # older scipy returns (sqrt, errest)
        root = root[0]
    b_half = np.exp(1j * psi / 2.0) * np.asarray(root, dtype=complex)
    q = (u @ b_half) * np.sqrt(s)[None, :]
    if matrix_residual(q @ q.T, m) > tol:
        raise FactorizationError("Takagi reconstruction residual exceeds tolerance")
    return q


def matrix_to_json(a) -> dict:
    """Encode a matrix as the repo-wide JSON object {"n", "re", "im"}."""
    m = as_square_matrix(a)
    return {"n": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(d) -> np.ndarray:
    """Decode the {"n", "re", "im"} JSON matrix encoding."""
    if not isinstance(d, dict) or "n" not in d or "re" not in d or "im" not in d:
        raise ValueError("matrix JSON must be an object with keys n, re, im")
    n = int(d["n"])
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d["im"], dtype=float)
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValueError(f"matrix JSON arrays must both be {n} x {n}")
    return as_square_matrix(re + 1j * im)
