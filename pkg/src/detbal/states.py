"""States, purifications and two-copy correlation functionals.

A density matrix is stored in its own eigenbasis: a descending eigenvalue
vector plus the unitary that maps the user basis to that eigenbasis.
Every operation downstream of make_density works in the eigenbasis, so
callers handing in observables or channels expressed in another basis must
conjugate them first (the command-line front end does this automatically).

For an invertible density matrix rho, the map A ox B -> tr(r^dag A r B^T)
with r = rho^(1/2) w (w unitary) is the state of a canonical purification
of rho, written as a functional on two commuting copies of the matrix
algebra.  Its first marginal is always A -> tr(rho A); the second marginal
matches only for w = identity, which is the default.  The classically
correlated counterpart sum_j rho_j a_jj b_jj shares both marginals but has
no off-diagonal correlations; the gap between the two is what the balance
checks in this package exploit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonUnitary, NotDensity, NotInvertible
from .linalg import (
    DEFAULT_TOL,
    CheckResult,
    Tolerance,
    as_matrix,
    hermitian_eig,
    matrix_units,
)

_DEGENERACY_GAP = 1e-8


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Invertible density matrix in its eigenbasis.

    diag holds the eigenvalues in descending order; basis is the unitary V
    with V^dag rho_user V = diag(diag).  degenerate flags an eigenvalue gap
    below 1e-8, in which case the eigenbasis (and with it the purification
    below) is not canonical: V is still fixed deterministically by the
    eigensolver, but physically distinct choices exist.
    """

    n: int
    diag: np.ndarray
    basis: np.ndarray
    degenerate: bool

    def matrix(self) -> np.ndarray:
        """The density matrix in its eigenbasis (diagonal)."""
        return np.diag(self.diag).astype(complex)

    def power(self, z) -> np.ndarray:
        """Elementwise spectral power rho**z in the eigenbasis; z may be complex."""
        if isinstance(z, (int, float)):
            d = np.power(self.diag, float(z))
        else:
            d = np.exp(np.asarray(z, dtype=complex) * np.log(self.diag.astype(complex)))
        return np.diag(d).astype(complex)


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure two-copy extension of rho, represented by r = rho^(1/2) w."""

    rho: DensityMatrix
    r: np.ndarray
    w: np.ndarray


@dataclass(frozen=True, eq=False)
class DiagonalCorrelatedState:
    """Classically correlated two-copy state built from rho's spectrum."""

    rho: DensityMatrix


def make_density(m, tol: Tolerance = DEFAULT_TOL) -> DensityMatrix:
    """Validate and eigendecompose a density matrix.

    Requires Hermiticity, unit trace to 1e-12, positive semidefiniteness
    within tol.psd_tol, and all eigenvalues above tol.inv_tol (the whole
    toolkit assumes invertible states).
    """
    m = as_matrix(m)
    herm = float(np.linalg.norm(m - m.conj().T))
    if herm > 1e-12 * max(1.0, float(np.linalg.norm(m))):
        raise NotDensity(f"not Hermitian (residual {herm:.3e})")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > 1e-12:
        raise NotDensity(f"trace must be 1, got {tr.real:.12g}")
    eig = hermitian_eig(m)
    lam = eig.eigenvalues
    if lam[-1] < -tol.psd_tol:
        raise NotDensity(f"negative eigenvalue {lam[-1]:.3e}")
    if lam[-1] <= tol.inv_tol:
        raise NotInvertible(
            f"density matrix must be invertible (min eigenvalue {lam[-1]:.3e})"
        )
    degenerate = bool(np.min(-np.diff(lam)) < _DEGENERACY_GAP) if len(lam) > 1 else False
    return DensityMatrix(n=m.shape[0], diag=lam, basis=eig.eigenvectors, degenerate=degenerate)


def expectation(rho: DensityMatrix, a) -> complex:
    """tr(rho a) with the observable a expressed in rho's eigenbasis."""
    a = np.asarray(a, dtype=complex)
    return complex(np.sum(rho.diag * np.diag(a)))


def purify(rho: DensityMatrix, w=None) -> Purification:
    """Purification r = rho^(1/2) w; w defaults to the identity.

    With w = identity both marginals of the induced two-copy functional
    reduce to tr(rho .); any other unitary w reproduces only the first.
    """
    if w is None:
        w = np.eye(rho.n, dtype=complex)
    w = as_matrix(w)
    if w.shape[0] != rho.n:
        raise NonUnitary(f"w has dimension {w.shape[0]}, state has {rho.n}")
    res = float(np.linalg.norm(w.conj().T @ w - np.eye(rho.n)))
    if res > 1e-12 * rho.n:
        raise NonUnitary(f"w is not unitary (residual {res:.3e})")
    return Purification(rho=rho, r=rho.power(0.5) @ w, w=w)


def omega_eval(p: Purification, a, b) -> complex:
    """Entangled two-copy expectation tr(r^dag a r b^T)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return complex(np.trace(p.r.conj().T @ a @ p.r @ b.T))


def theta_eval(s: DiagonalCorrelatedState, a, b) -> complex:
    """Classically correlated expectation sum_j rho_j a_jj b_jj."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return complex(np.sum(s.rho.diag * np.diag(a) * np.diag(b)))


def marginals_check(p: Purification, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Compare both marginals of the purified state against tr(rho .).

    Sub-residuals are maxima over all matrix units.  The first marginal
    holds for every admissible w; the second is the signature of w =
    identity (or of a maximally mixed rho).
    """
    rho = p.rho
    eye = np.eye(rho.n, dtype=complex)
    first = 0.0
    second = 0.0
    for _, _, e in matrix_units(rho.n):
        want = expectation(rho, e)
        first = max(first, abs(omega_eval(p, e, eye) - want))
        second = max(second, abs(omega_eval(p, eye, e) - want))
    residual = max(first, second)
    return CheckResult(
        passed=bool(residual <= tol.eq_tol),
        residual=residual,
        detail={"first_marginal": first, "second_marginal": second},
        tol=tol,
    )
