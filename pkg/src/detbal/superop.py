"""Superoperators on M_n as n^2 x n^2 matrices, plus CP/unital predicates.

Convention: column-stacking vectorization.  vec(X) stacks the columns of X
below one another, so vec(A X B^T) = (B ox A) vec(X) and the map
X -> A X B^T has matrix kron(B, A).  A Kraus map X -> sum_j V_j X V_j^dag
therefore has matrix sum_j kron(conj(V_j), V_j).  Every matrix stored in a
SuperOperator uses this convention; mixing it with row-stacking data will
silently transpose factors, which is why the JSON interchange format tags
superoperator matrices with an explicit "convention" field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch
from .linalg import (
    DEFAULT_TOL,
    CheckResult,
    Tolerance,
    as_matrix,
    hermitian_eig,
    matrix_units,
)


def vec(x) -> np.ndarray:
    """Column-stacking vectorization of a matrix."""
    return np.asarray(x, dtype=complex).reshape(-1, order="F")


def unvec(v, n: int | None = None) -> np.ndarray:
    """Inverse of vec; n defaults to sqrt(len(v))."""
    v = np.asarray(v, dtype=complex)
    if n is None:
        n = round(len(v) ** 0.5)
    if n * n != v.size:
        raise DimensionMismatch(f"cannot reshape length {v.size} into {n} x {n}")
    return v.reshape((n, n), order="F")


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """Linear map on M_n stored as its n^2 x n^2 column-stacking matrix."""

    n: int
    mat: np.ndarray

    def apply(self, x) -> np.ndarray:
        """Evaluate the map on an n x n matrix."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.n, self.n):
            raise DimensionMismatch(f"expected shape {(self.n, self.n)}, got {x.shape}")
        return unvec(self.mat @ vec(x), self.n)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """self after other: (self.compose(other)).apply(x) = self(other(x))."""
        if self.n != other.n:
            raise DimensionMismatch(f"cannot compose maps on M_{self.n} and M_{other.n}")
        return SuperOperator(self.n, self.mat @ other.mat)

    def power(self, k: int) -> "SuperOperator":
        """k-fold composition with itself; k = 0 gives the identity map."""
        if k < 0 or k != int(k):
            raise ValueError(f"power wants a nonnegative integer, got {k!r}")
        return SuperOperator(self.n, np.linalg.matrix_power(self.mat, int(k)))


def identity_superop(n: int) -> SuperOperator:
    """The identity map on M_n."""
    return SuperOperator(n, np.eye(n * n, dtype=complex))


@lru_cache(maxsize=None)
def _commutation_matrix(n: int) -> np.ndarray:
    k = np.zeros((n * n, n * n), dtype=complex)
    for r in range(n):
        for c in range(n):
            k[r + n * c, c + n * r] = 1.0
    k.setflags(write=False)
    return k


def transpose_superop(n: int) -> SuperOperator:
    """The transpose map X -> X^T; its matrix is the commutation matrix."""
    return SuperOperator(n, _commutation_matrix(n).copy())


def pi_rep(a, b) -> SuperOperator:
    """Two-sided multiplication X -> a X b^T, the product representation.

    The second factor acts through its transpose so that a ox b acts on
    row and column indices independently; the matrix is kron(b, a).
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"factor shapes differ: {a.shape} vs {b.shape}")
    return SuperOperator(a.shape[0], np.kron(b, a))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A finite Kraus family; unital=True asserts sum_j V_j V_j^dag = 1."""

    ops: tuple
    unital: bool = False

    def __post_init__(self):
        if len(self.ops) == 0:
            raise DimensionMismatch("a Kraus channel needs at least one operator")
        shape = self.ops[0].shape
        for v in self.ops:
            if v.shape != shape or v.ndim != 2 or v.shape[0] != v.shape[1]:
                raise DimensionMismatch("Kraus operators must share one square shape")
        if self.unital:
            n = shape[0]
            acc = sum(v @ v.conj().T for v in self.ops)
            res = float(np.linalg.norm(acc - np.eye(n)))
            if res > DEFAULT_TOL.eq_tol:
                raise DimensionMismatch(
                    f"Kraus family flagged unital misses sum V V^dag = 1 by {res:.3e}"
                )

    @property
    def n(self) -> int:
        return self.ops[0].shape[0]


def make_kraus(ops, unital: bool = False) -> KrausChannel:
    """Validate a sequence of arrays into a KrausChannel."""
    return KrausChannel(tuple(as_matrix(v) for v in ops), unital=unital)


def from_kraus(k) -> SuperOperator:
    """Superoperator of X -> sum_j V_j X V_j^dag.

    Accepts a KrausChannel or a plain sequence of square matrices.
    """
    if not isinstance(k, KrausChannel):
        k = make_kraus(k)
    n = k.n
    mat = np.zeros((n * n, n * n), dtype=complex)
    for v in k.ops:
        mat += np.kron(v.conj(), v)
    return SuperOperator(n, mat)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Choi matrix sum_jk E_jk ox s(E_jk) of a superoperator on M_n."""

    n: int
    mat: np.ndarray


def choi(s: SuperOperator) -> ChoiMatrix:
    """Choi matrix in the convention C = sum_jk E_jk ox s(E_jk).

    The map sits in the second tensor factor; C is PSD exactly when s is
    completely positive.  For the identity map C is n times the projector
    onto the canonical maximally entangled vector, eigenvalues (n, 0, ...).
    """
    n = s.n
    c = np.zeros((n * n, n * n), dtype=complex)
    for j, k, e in matrix_units(n):
        c += np.kron(e, s.apply(e))
    return ChoiMatrix(n, c)


def is_completely_positive(s: SuperOperator, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """CP test: the Choi matrix must be Hermitian and PSD.

    Eigenvalue negativity is measured relative to the largest Choi
    eigenvalue with a floor of 1, so scaling a channel does not move the
    verdict.  detail reports the extreme Choi eigenvalues.
    """
    c = choi(s).mat
    herm = float(np.linalg.norm(c - c.conj().T)) / max(1.0, float(np.linalg.norm(c)))
    lam = hermitian_eig(0.5 * (c + c.conj().T)).eigenvalues
    lam_max = float(lam[0])
    lam_min = float(lam[-1])
    negativity = max(0.0, -lam_min) / max(1.0, lam_max)
    passed = bool(herm <= tol.eq_tol and negativity <= tol.psd_tol)
    return CheckResult(
        passed=passed,
        residual=max(herm, negativity),
        detail={
            "choi_hermiticity": herm,
            "choi_negativity": negativity,
            "choi_min_eigenvalue": lam_min,
            "choi_max_eigenvalue": lam_max,
        },
        tol=tol,
    )


@lru_cache(maxsize=None)
def _projector_frame(n: int) -> tuple[np.ndarray, ...]:
    """Deterministic rank-1 frame spanning the Hermitian matrices."""
    vecs = []
    eye = np.eye(n, dtype=complex)
    for j in range(n):
        vecs.append(eye[:, j])
    for j in range(n):
        for k in range(j + 1, n):
            vecs.append((eye[:, j] + eye[:, k]) / np.sqrt(2.0))
            vecs.append((eye[:, j] + 1j * eye[:, k]) / np.sqrt(2.0))
    out = tuple(np.outer(v, v.conj()) for v in vecs)
    for p in out:
        p.setflags(write=False)
    return out


def is_positive_map(s: SuperOperator, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Positivity-only test: outputs on a fixed rank-1 projector frame are PSD.

    This is weaker than complete positivity and (like any finite probe
    family) only a necessary condition for positivity, but it is the check
    of choice when the stronger Choi criterion is deliberately disabled.
    """
    worst_neg = 0.0
    worst_herm = 0.0
    for proj in _projector_frame(s.n):
        out = s.apply(proj)
        herm = float(np.linalg.norm(out - out.conj().T)) / max(1.0, float(np.linalg.norm(out)))
        worst_herm = max(worst_herm, herm)
        lam = hermitian_eig(0.5 * (out + out.conj().T)).eigenvalues
        worst_neg = max(worst_neg, max(0.0, -float(lam[-1])) / max(1.0, float(lam[0])))
    passed = bool(worst_herm <= tol.eq_tol and worst_neg <= tol.psd_tol)
    return CheckResult(
        passed=passed,
        residual=max(worst_herm, worst_neg),
        detail={"output_hermiticity": worst_herm, "output_negativity": worst_neg},
        tol=tol,
    )


def is_unital(s: SuperOperator, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Unitality test: residual ||s(1) - 1||."""
    residual = float(np.linalg.norm(s.apply(np.eye(s.n)) - np.eye(s.n)))
    return CheckResult(
        passed=bool(residual <= tol.eq_tol),
        residual=residual,
        detail={"unital": residual},
        tol=tol,
    )


def is_hermitian_map(s: SuperOperator, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Hermiticity-preservation test: s(A^dag) = s(A)^dag on matrix units."""
    residual = 0.0
    for j, k, e in matrix_units(s.n):
        lhs = s.apply(e.conj().T)
        rhs = s.apply(e).conj().T
        residual = max(residual, float(np.linalg.norm(lhs - rhs)))
    return CheckResult(
        passed=bool(residual <= tol.eq_tol),
        residual=residual,
        detail={"hermitian_map": residual},
        tol=tol,
    )
