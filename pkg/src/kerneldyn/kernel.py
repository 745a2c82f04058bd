"""
Scalar analytic kernels on the unit disc as truncated coefficient matrices.

A kernel ``k(z, w) = sum_{m,n} a[m, n] z^m conj(w)^n`` is stored through its
leading ``N x N`` block.  Every moment is kept factorial-normalised: entry
``a[m, n]`` equals ``d^{m+n} k / dz^m dconj(w)^n (0, 0) / (m! n!)``, so no
factorial is ever formed.

The normalised derivative kernels ``Khat_n = K_n / n!`` (``K_n(z) = d^n k/dconj(w)^n (z, 0)``)
have Gram matrix ``<Khat_n, Khat_m> = a[m, n]``, i.e. the coefficient matrix
*is* the Gram matrix of the family ``Khat_0 .. Khat_{N-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConstructionError, NotHermitianError, NotPositiveDefiniteError
from .seqdsl import SequenceSpec

HERMITIAN_TOL = 1e-12
PD_RELATIVE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Truncated Hermitian coefficient array of a scalar kernel.

    ``factor`` is an optional upper-triangular ``U`` with ``a = U^H U`` that
    constructors supply when they know one exactly (diagonal, tridiagonal and
    conjugated kernels).  ``beta`` records the generating sequence of a
    diagonal kernel; criteria use it for analytic shortcuts.
    """

    a: np.ndarray
    factor: np.ndarray | None = None
    beta: SequenceSpec | None = None

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ConstructionError(f"coefficient matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ConstructionError("coefficient matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        if self.factor is not None:
            u = np.array(self.factor, dtype=complex)
            u.setflags(write=False)
            object.__setattr__(self, "factor", u)

    @property
    def order(self) -> int:
        return self.a.shape[0]

    @property
    def is_diagonal(self) -> bool:
        return self.beta is not None

    def hermitian_residual(self) -> float:
        """``||A - A^H||_inf / max(1, ||A||_inf)``."""
        a = self.a
        scale = max(1.0, float(np.abs(a).sum(axis=1).max()))
        return float(np.abs(a - a.conj().T).sum(axis=1).max()) / scale


@dataclass(frozen=True, eq=False)
class GramData:
    G: np.ndarray
    U: np.ndarray | None
    min_eigenvalue: float
    max_eigenvalue: float

    @property
    def order(self):
        return self.G.shape[0]

    def norm(self, c) -> float:
        """Norm of ``sum_j c_j Khat_j``, i.e. ``sqrt(c^H G c)``."""
        c = _pad(c, self.order)
        return float(np.sqrt(max(np.vdot(c, self.G @ c).real, 0.0)))

    def inner(self, c, d) -> complex:
        """``<sum c_j Khat_j, sum d_j Khat_j> = d^H G c``."""
        return complex(np.vdot(_pad(d, self.order), self.G @ _pad(c, self.order)))


def _pad(c, n):
    c = np.asarray(c, dtype=complex)
    if c.shape[0] > n:
        raise ConstructionError(f"coordinate vector of length {c.shape[0]} exceeds order {n}")
    if c.shape[0] < n:
        c = np.concatenate([c, np.zeros(n - c.shape[0], dtype=complex)])
    return c


def diagonal_coefficients(beta: SequenceSpec, N: int) -> CoefficientMatrix:
    """Diagonal kernel ``sum beta_n^2 z^n conj(w)^n`` truncated at order ``N``."""
    if N < 1:
        raise ConstructionError("order must be positive")
    b = beta.values(N)
    if np.any(b <= 0):
        bad = int(np.argmax(b <= 0))
        raise ConstructionError(f"beta_{bad} = {b[bad]} is not positive")
    sq = beta.squares(N)
    return CoefficientMatrix(np.diag(sq).astype(complex), factor=np.diag(b).astype(complex), beta=beta)


def normalized_diagonal(A: CoefficientMatrix) -> np.ndarray:
    """``a[n, n]`` -- the n-th diagonal moment divided by ``(n!)^2``."""
    d = np.diagonal(A.a)
    bad = np.abs(d.imag) > 1e-12
    if np.any(bad):
        n = int(np.argmax(bad))
        raise NotHermitianError(f"diagonal entry a[{n},{n}] = {d[n]} is not real")
    return d.real.copy()


def derivative_moment(A: CoefficientMatrix, n: int, m: int) -> complex:
    """Normalised mixed moment ``d^{n+m} k / dz^n dconj(w)^m (0,0) / (n! m!) = a[n, m]``."""
    N = A.order
    if not (0 <= n < N and 0 <= m < N):
        raise IndexError(f"moment ({n}, {m}) outside truncation order {N}")
    return complex(A.a[n, m])


def _upper_positive(u):
    # Rotate rows so the diagonal is real positive; U^H U is unchanged.
    d = np.diagonal(u)
    phase = np.where(d == 0, 1.0, np.conj(d) / np.where(d == 0, 1.0, np.abs(d)))
    return phase[:, None] * u


def gram(A: CoefficientMatrix) -> GramData:
    """Gram data of ``Khat_0 .. Khat_{N-1}``; raises if not positive definite.

    When the matrix carries an exact triangular factor the factor is used
    directly (positive definite iff its diagonal has no zeros).  Otherwise
    the eigenvalue gate ``lambda_min > 1e-12 * lambda_max`` decides and
    ``numpy.linalg.cholesky`` supplies the factor.
    """
    if A.hermitian_residual() > HERMITIAN_TOL:
        raise NotHermitianError(
            f"coefficient matrix is not Hermitian (residual {A.hermitian_residual():.3e})")
    G = A.a
    if A.factor is not None:
        U = _upper_positive(A.factor)
        diag = np.abs(np.diagonal(U))
        if np.any(diag == 0):
            raise NotPositiveDefiniteError("exact factor is singular", 0.0)
        # reported only; the exact factor is the PD certificate
        ev = np.diagonal(G).real if A.is_diagonal else np.linalg.eigvalsh(G)
        return GramData(G, U, float(ev.min()), float(ev.max()))
    ev = np.linalg.eigvalsh(G)
    lo, hi = float(ev[0]), float(ev[-1])
    if not (hi > 0 and lo > PD_RELATIVE_TOL * hi):
        raise NotPositiveDefiniteError(
            f"Gram matrix not positive definite: smallest eigenvalue {lo:.3e}, largest {hi:.3e}", lo)
    L = np.linalg.cholesky(G)
    return GramData(G, L.conj().T, lo, hi)


def evaluate_kernel(A: CoefficientMatrix, z: complex, w: complex) -> complex:
    """Truncated ``sum_{m,n<N} a[m,n] z^m conj(w)^n``."""
    if abs(z) >= 1 or abs(w) >= 1:
        raise ValueError("kernel is evaluated only inside the unit disc")
    N = A.order
    zp = np.power(complex(z), np.arange(N))
    wp = np.power(np.conj(complex(w)), np.arange(N))
    return complex(zp @ A.a @ wp)


def kernel_norm_at(A: CoefficientMatrix, w: complex) -> float:
    """``||k(., w)|| = sqrt(k(w, w))``."""
    kww = evaluate_kernel(A, w, w)
    if abs(kww.imag) > 1e-12 * max(1.0, abs(kww.real)) or kww.real < -1e-12:
        raise NotPositiveDefiniteError(f"k(w, w) = {kww} is not non-negative at this truncation",
                                       kww.real)
    return float(np.sqrt(max(kww.real, 0.0)))


class PSDResult(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


def psd_check(A: CoefficientMatrix, tol: float = PSD_TOL) -> PSDResult:
    """True iff ``lambda_min(A) >= -tol * max(1, lambda_max(A))``."""
    a = A.a if isinstance(A, CoefficientMatrix) else np.asarray(A, dtype=complex)
    ev = np.linalg.eigvalsh(a)
    lo, hi = float(ev[0]), float(ev[-1])
    return PSDResult(lo >= -tol * max(1.0, hi), lo)
