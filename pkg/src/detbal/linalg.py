"""Dense complex linear algebra substrate for small Hilbert spaces.

All downstream modules work with n x n complex matrices at desk scale
(n <= 16 or so).  At that size a self-contained cyclic Jacobi eigensolver
is accurate to near machine precision and, unlike library solvers, has a
fixed sweep order, so identical input bits always produce identical output
bits.  Every function here is pure: inputs are never modified.

The Hilbert-Schmidt inner product is conjugate-linear in the first
argument: hs_inner(a, b) = tr(a^dag b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DetbalError, DimensionMismatch, NotHermitian, NotInvertible

_MAX_SWEEPS = 60


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used by every check in the toolkit.

    eq_tol bounds residuals of functional identities, psd_tol bounds how
    negative an eigenvalue may be (relative to scale) before a matrix stops
    counting as positive semidefinite, and inv_tol is the smallest
    admissible eigenvalue of a state that still counts as invertible.
    """

    eq_tol: float = 1e-9
    psd_tol: float = 1e-9
    inv_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.eq_tol <= 0.0 or self.psd_tol <= 0.0 or self.inv_tol <= 0.0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class CheckResult:
    """Verdict of one numerical check plus the residuals behind it.

    residual is the largest of the named sub-residuals in detail; passed
    records whether every sub-residual cleared its threshold (eq_tol for
    identity residuals, psd_tol for eigenvalue negativity).
    """

    passed: bool
    residual: float
    detail: dict[str, float]
    tol: Tolerance


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(x) -> np.ndarray:
    """Coerce input to a square, finite, complex ndarray copy."""
    m = np.array(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise DetbalError("matrix entries must be finite")
    return m


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b), conjugate-linear in a."""
    a = np.asarray(a)
    b = np.asarray(b)
    _same_shape(a, b)
    return complex(np.vdot(a, b))


def hs_norm(a: np.ndarray) -> float:
    """Frobenius norm, the norm induced by hs_inner."""
    return float(np.linalg.norm(a))


def require_hermitian(m: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Validate Hermiticity up to rel_tol * max(1, ||m||) and return m."""
    m = as_matrix(m)
    res = float(np.linalg.norm(m - m.conj().T))
    if res > rel_tol * max(1.0, float(np.linalg.norm(m))):
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3e})")
    return m


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eig(m) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix with a cyclic Jacobi scheme.

    Sweeps run over index pairs (p, q), p < q, in a fixed lexicographic
    order; each rotation is the complex Givens rotation annihilating the
    (p, q) entry.  The fixed order makes the result, including the
    eigenvector choice inside degenerate eigenspaces, deterministic for
    fixed input.  Eigenvalues come back sorted in descending order.
    """
    a = require_hermitian(m)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    if n == 1:
        return EigenDecomposition(np.array([a[0, 0].real]), v)
    converged = False
    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm(a) <= 1e-14 * scale:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-18 * scale:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- G^dag A G with the rotation G supported on columns p, q:
                # G[p,p]=c, G[p,q]=s, G[q,p]=-s*conj(phase), G[q,q]=c*conj(phase).
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * col_p + c * np.conj(phase) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * vp + c * np.conj(phase) * vq
    if not converged and _offdiag_norm(a) > 1e-14 * scale:
        raise DetbalError("jacobi eigensolver failed to converge")
    lam = np.real(np.diag(a)).copy()
    order = np.argsort(-lam, kind="stable")
    return EigenDecomposition(lam[order], v[:, order])


def mat_power(m, z, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal power m**z of a Hermitian positive definite matrix.

    z may be complex; eigenvalues are exponentiated as exp(z * log(lam)).
    Raises NotInvertible when an eigenvalue does not exceed tol.inv_tol.
    """
    eig = hermitian_eig(m)
    lam = eig.eigenvalues
    if float(np.min(lam)) <= tol.inv_tol:
        raise NotInvertible(
            f"matrix power needs strictly positive spectrum (min eigenvalue {np.min(lam):.3e})"
        )
    powered = np.exp(np.asarray(z, dtype=complex) * np.log(lam.astype(complex)))
    u = eig.eigenvectors
    return u @ np.diag(powered) @ u.conj().T


def is_psd(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a Hermitian matrix is PSD within tol.psd_tol (relative, floor 1)."""
    eig = hermitian_eig(m)
    lam = eig.eigenvalues
    return bool(lam[-1] >= -tol.psd_tol * max(1.0, float(lam[0])))


@lru_cache(maxsize=None)
def _matrix_units(n: int) -> tuple[tuple[int, int, np.ndarray], ...]:
    out = []
    for j in range(n):
        for k in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[j, k] = 1.0
            e.setflags(write=False)
            out.append((j, k, e))
    return tuple(out)


def matrix_unit(n: int, j: int, k: int) -> np.ndarray:
    """The matrix unit E_jk (1 in row j, column k, zero elsewhere)."""
    e = np.zeros((n, n), dtype=complex)
    e[j, k] = 1.0
    return e


def matrix_units(n: int) -> tuple[tuple[int, int, np.ndarray], ...]:
    """All n^2 matrix units as (j, k, E_jk) triples, row-major order."""
    return _matrix_units(n)
