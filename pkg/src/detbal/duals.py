"""Dual maps of a channel relative to a faithful state, and the modular family.

Fix an invertible density matrix rho (diagonal, per states.make_density)
and write <A> = tr(rho A).  For a linear map s on M_n this module builds:

  hs_adjoint   s^dag   adjoint for tr(a^dag b):      <s^dag(A), B>_HS = <A, s(B)>_HS
  trace_dual   s^#     predual of the trace pairing: tr[s^#(A) B] = tr[A s(B)]
  rho_dual     s'      state dual:                   <s'(A) B> = <A s(B)>
  kms_dual     s^(1/2) symmetrized state dual:
               tr(rho^(1/2) s^(1/2)(A) rho^(1/2) B) = tr(rho^(1/2) A rho^(1/2) s(B))
  hat_map      s^hat   transpose conjugate of the state dual: s'(A^T)^T
  theta_conjugate      (Theta s Theta)(A^T)^T for a reversing operation Theta

Closed forms used (all checked against their defining pairings in tests):
  s^#(A)      = s^dag(A^dag)^dag, equal to s^dag for Hermiticity-preserving s
  s'(A)       = rho^(-1) s^#(rho A)
  s^(1/2)(A)  = rho^(-1/2) s^#(rho^(1/2) A rho^(1/2)) rho^(-1/2)

The kms dual preserves complete positivity and is an involution; the state
dual agrees with it exactly when s commutes with the modular map
Delta(A) = rho A rho^(-1).  The one-parameter family Delta^(-iz)(A) =
rho^(-iz) A rho^(iz) extends Delta: z = i gives Delta itself, real z gives
the modular unitary group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonUnitary, NotInvolutive
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, matrix_units
from .states import DensityMatrix
from .superop import SuperOperator, _commutation_matrix, pi_rep


def hs_adjoint(s: SuperOperator) -> SuperOperator:
    """Adjoint for the Hilbert-Schmidt inner product: the conjugate transpose."""
    return SuperOperator(s.n, s.mat.conj().T)


def _dagger_conjugate(s: SuperOperator) -> SuperOperator:
    """The (linear) map A -> s(A^dag)^dag."""
    k = _commutation_matrix(s.n)
    return SuperOperator(s.n, k @ s.mat.conj() @ k)


def bar_map(s: SuperOperator) -> SuperOperator:
    """Transpose conjugate A -> s(A^T)^T; CP for CP input."""
    k = _commutation_matrix(s.n)
    return SuperOperator(s.n, k @ s.mat @ k)


def trace_dual(s: SuperOperator) -> SuperOperator:
    """The map s^# with tr[s^#(A) B] = tr[A s(B)] for all A, B.

    Computed as s^dag(A^dag)^dag; for Hermiticity-preserving s this equals
    hs_adjoint(s).  Kraus maps dualize to their Kraus-adjoint families, so
    unital maps have trace-preserving duals and conversely.
    """
    return _dagger_conjugate(hs_adjoint(s))


def _check_state(s: SuperOperator, rho: DensityMatrix) -> None:
    if s.n != rho.n:
        raise DimensionMismatch(f"map on M_{s.n} vs state on dimension {rho.n}")


def rho_dual(s: SuperOperator, rho: DensityMatrix) -> SuperOperator:
    """State dual s' with <s'(A) B> = <A s(B)>, via rho^(-1) s^#(rho A).

    The closed form costs O(n^4); the defining pairing is kept as a test
    oracle.  s' is unital iff s preserves <.>, and trace-of-rho-preserving
    iff s is unital.
    """
    _check_state(s, rho)
    left = pi_rep(rho.power(-1), np.eye(rho.n)).mat
    right = pi_rep(rho.matrix(), np.eye(rho.n)).mat
    return SuperOperator(s.n, left @ trace_dual(s).mat @ right)


def kms_dual(s: SuperOperator, rho: DensityMatrix) -> SuperOperator:
    """Symmetrized state dual rho^(-1/2) s^#(rho^(1/2) A rho^(1/2)) rho^(-1/2).

    Involutive, completely positive for completely positive s, and equal to
    rho_dual exactly on maps commuting with the modular map.
    """
    _check_state(s, rho)
    half = rho.power(0.5)
    halfinv = rho.power(-0.5)
    outer = pi_rep(halfinv, halfinv.T).mat
    inner = pi_rep(half, half.T).mat
    return SuperOperator(s.n, outer @ trace_dual(s).mat @ inner)


def hat_map(s: SuperOperator, rho: DensityMatrix) -> SuperOperator:
    """Transpose conjugate of the state dual: A -> s'(A^T)^T."""
    return bar_map(rho_dual(s, rho))


@dataclass(frozen=True, eq=False)
class ModularFamily:
    """The modular map of rho and its square root, as superoperators.

    delta is A -> rho A rho^(-1): positive definite and self-adjoint for
    the Hilbert-Schmidt inner product, diagonal in the matrix-unit basis
    with entries rho_j / rho_k.
    """

    rho: DensityMatrix
    delta: SuperOperator
    delta_half: SuperOperator


def modular(rho: DensityMatrix) -> ModularFamily:
    """Build the modular map of rho from its eigenvalue ratios."""
    d = rho.diag
    ratios = np.kron(1.0 / d, d)  # vec index (col k, row j) -> rho_j / rho_k
    return ModularFamily(
        rho=rho,
        delta=SuperOperator(rho.n, np.diag(ratios).astype(complex)),
        delta_half=SuperOperator(rho.n, np.diag(np.sqrt(ratios)).astype(complex)),
    )


def modular_power(rho: DensityMatrix, z) -> SuperOperator:
    """The analytic modular family at parameter z: A -> rho^(-iz) A rho^(iz).

    Real z gives the unitary modular group; z = i recovers the modular map
    itself and z = -i its inverse (the sign convention is locked by tests).
    """
    left = rho.power(-1j * complex(z))
    right = rho.power(1j * complex(z))
    return pi_rep(left, right.T)


@dataclass(frozen=True, eq=False)
class ReversingOperation:
    """Involutive *-anti-automorphism A -> u A^T u^dag (time reversal).

    Always anti-multiplicative and *-preserving for unitary u; involutivity
    additionally needs u conj(u) to be a phase multiple of the identity,
    which make_reversing verifies numerically.
    """

    u: np.ndarray

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def apply(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        return self.u @ a.T @ self.u.conj().T

    def superop(self) -> SuperOperator:
        k = _commutation_matrix(self.n)
        return SuperOperator(self.n, np.kron(self.u.conj(), self.u) @ k)


def make_reversing(u, tol: Tolerance = DEFAULT_TOL) -> ReversingOperation:
    """Validate u and build the reversing operation A -> u A^T u^dag.

    Checks unitarity, then verifies on all matrix units that the operation
    is anti-multiplicative, compatible with the adjoint, and squares to the
    identity.  The first two hold automatically for unitary u and are
    cheap insurance; the involution check has real teeth and rejects for
    example real rotations by angles other than multiples of pi/2.
    """
    u = as_matrix(u)
    n = u.shape[0]
    ures = float(np.linalg.norm(u.conj().T @ u - np.eye(n)))
    if ures > 1e-12 * n:
        raise NonUnitary(f"u is not unitary (residual {ures:.3e})")
    th = ReversingOperation(u=u)
    units = matrix_units(n)
    anti = 0.0
    star = 0.0
    for _, _, e1 in units:
        t1 = th.apply(e1)
        star = max(star, float(np.linalg.norm(th.apply(e1.conj().T) - t1.conj().T)))
        for _, _, e2 in units:
            anti = max(anti, float(np.linalg.norm(th.apply(e1 @ e2) - th.apply(e2) @ t1)))
    if max(anti, star) > tol.eq_tol:
        raise NonUnitary(
            f"not a *-anti-automorphism (residuals {anti:.3e}, {star:.3e})"
        )
    invol = 0.0
    for _, _, e in units:
        invol = max(invol, float(np.linalg.norm(th.apply(th.apply(e)) - e)))
    if invol > tol.eq_tol:
        raise NotInvolutive(
            f"operation squares to the identity only up to {invol:.3e}; "
            "u conj(u) must be a phase multiple of the identity"
        )
    return th


def transpose_reversing(n: int) -> ReversingOperation:
    """The plain transpose, the canonical reversing operation."""
    return ReversingOperation(u=np.eye(n, dtype=complex))


def theta_conjugate(s: SuperOperator, th: ReversingOperation) -> SuperOperator:
    """The map A -> (Theta s Theta)(A^T)^T.

    For the plain transpose this is s itself; in general it is the
    candidate against which the kms dual is compared by the square-root
    balance condition.
    """
    if s.n != th.n:
        raise DimensionMismatch(f"map on M_{s.n} vs reversing operation on M_{th.n}")
    k = _commutation_matrix(s.n)
    tm = th.superop().mat
    return SuperOperator(s.n, k @ tm @ s.mat @ tm @ k)
