"""
Concrete kernel families: tridiagonal kernels, kernels conjugated by a
power series or polynomial, and block (operator-valued) kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConstructionError
from .kernel import CoefficientMatrix
from .seqdsl import SequenceSpec

DEFAULT_SLACK = 1e-2


# ---------------------------------------------------------------------------
# Tridiagonal kernels


@dataclass(frozen=True)
class TridiagonalSpec:
    """Orthonormal basis ``e_n(z) = mu_n z^n + nu_n z^(n+1)``.

    Complex generators are given as a modulus sequence plus an optional phase
    sequence (radians).
    """

    mu: SequenceSpec
    nu: SequenceSpec
    N: int
    mu_phase: SequenceSpec | None = None
    nu_phase: SequenceSpec | None = None

    def _complex(self, mod, phase, count):
        v = mod.values(count).astype(complex)
        if phase is not None:
            v = v * np.exp(1j * phase.values(count))
        return v

    def mu_values(self, count=None) -> np.ndarray:
        return self._complex(self.mu, self.mu_phase, self.N if count is None else count)

    def nu_values(self, count=None) -> np.ndarray:
        return self._complex(self.nu, self.nu_phase, self.N if count is None else count)

    def validate(self, count=None):
        count = self.N if count is None else count
        mu, nu = self.mu_values(count), self.nu_values(count)
        for name, v in (("mu", mu), ("nu", nu)):
            if np.any(v == 0):
                raise ConstructionError(f"{name}_{int(np.argmax(v == 0))} is zero")
        return mu, nu


def tridiagonal_coefficients(t: TridiagonalSpec) -> CoefficientMatrix:
    """Coefficients of ``sum_n e_n(z) conj(e_n(w))`` below order ``N``."""
    if t.N < 2:
        raise ConstructionError("tridiagonal order must be at least 2")
    mu, nu = t.validate()
    N = t.N
    a = np.zeros((N, N), dtype=complex)
    a[0, 0] = abs(mu[0]) ** 2
    idx = np.arange(1, N)
    a[idx, idx] = np.abs(mu[1:]) ** 2 + np.abs(nu[:-1]) ** 2
    up = mu[:-1] * np.conj(nu[:-1])
    a[idx - 1, idx] = up
    a[idx, idx - 1] = np.conj(up)
    # columns of E are the coefficient vectors of e_0 .. e_{N-1}; A = E E^H
    E = np.diag(mu) + np.diag(nu[:-1], k=-1)
    return CoefficientMatrix(a, factor=E.conj().T)


@dataclass(frozen=True)
class TridiagonalBounds:
    sup_mu_ratio: float      # sup |mu_n / mu_{n+1}|
    sup_nu_ratio: float      # sup |nu_n / mu_{n+1}|
    mu_ratio_stable: bool    # sup over the second half does not exceed the first half
    holds: bool
    window: int
    basis: str = "window"


def stable_sup(ratios, slack):
    if not np.all(np.isfinite(ratios)):
        return False
    half = max(1, len(ratios) // 2)
    head, tail = ratios[:half], ratios[half:]
    if tail.size == 0:
        return True
    return bool(tail.max() <= (1 + slack) * head.max())


def tridiagonal_boundedness(t: TridiagonalSpec, window: int | None = None,
                            slack: float = DEFAULT_SLACK) -> TridiagonalBounds:
    """Window suprema for the boundedness conditions of ``M_z`` on a tridiagonal space.

    ``holds`` needs ``sup |mu_n/mu_{n+1}|`` to be finite -- read on a window as
    "not growing between the two halves" -- and ``sup |nu_n/mu_{n+1}| < 1``.
    """
    window = t.N - 1 if window is None else window
    if not 1 <= window <= t.N - 1:
        raise ConstructionError(f"window must lie in [1, {t.N - 1}]")
    mu, nu = t.validate(window + 1)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        r_mu = np.abs(mu[:window] / mu[1:window + 1])
        r_nu = np.abs(nu[:window] / mu[1:window + 1])
    sup_mu, sup_nu = float(r_mu.max()), float(r_nu.max())
    stable = stable_sup(r_mu, slack)
    return TridiagonalBounds(sup_mu, sup_nu, stable, bool(stable and sup_nu < 1), window)


def expand_znf_in_basis(t: TridiagonalSpec, n: int) -> np.ndarray:
    """Coefficients ``alpha_j`` with ``z^n (a + b z) = sum_j alpha_j e_j`` (``j < N``).

    ``a + b z = k(., 0)`` with ``a = |mu_0|^2`` and ``b = mu_0 conj(nu_0)``.
    """
    N = t.N
    if n < 0 or n + 2 > N:
        raise ConstructionError(f"need n + 2 <= N, got n={n}, N={N}")
    mu, nu = t.validate()
    a = abs(mu[0]) ** 2
    b = mu[0] * np.conj(nu[0])
    alpha = np.zeros(N, dtype=complex)
    alpha[n] = a / mu[n]
    alpha[n + 1] = b / mu[n + 1] - (a / mu[n]) * (nu[n] / mu[n + 1])
    for j in range(n + 2, N):
        alpha[j] = -(nu[j - 1] / mu[j]) * alpha[j - 1]
    return alpha


@dataclass(frozen=True)
class ZnfBound:
    norm_sq: float           # truncated sum |alpha_j|^2
    tail_bound: float        # geometric bound on the dropped tail
    norm_sq_upper: float
    bound: float             # C / |mu_n|^2
    C: float
    M: float
    r: float
    R: float
    holds: bool


def znf_norm_bound(t: TridiagonalSpec, n: int, window: int | None = None) -> ZnfBound:
    """Compare ``||z^n k(.,0)||^2`` with the estimate ``C / |mu_n|^2``.

    ``C = M^2 (1 + (r+1)^2 sum_{k>=1} R^(2k))`` where ``M = max(a, |b|)``,
    ``r = sup |mu_m/mu_{m+1}|`` and ``R = sup |nu_m/mu_{m+1}|`` over the window.
    """
    gate = tridiagonal_boundedness(t, window)
    R, r = gate.sup_nu_ratio, gate.sup_mu_ratio
    if not R < 1:
        raise ConstructionError(f"sup |nu_m/mu_(m+1)| = {R} >= 1 on the window; bound undefined")
    alpha = expand_znf_in_basis(t, n)
    mu = t.mu_values()
    a = abs(mu[0]) ** 2
    b = abs(mu[0] * np.conj(t.nu_values(1)[0]))
    M = max(a, b)
    geo = R * R / (1 - R * R)
    C = M * M * (1 + (r + 1) ** 2 * geo)
    norm_sq = float(np.sum(np.abs(alpha) ** 2))
    tail = float(abs(alpha[-1]) ** 2 * geo)
    bound = float(C / abs(mu[n]) ** 2)
    return ZnfBound(norm_sq, tail, norm_sq + tail, bound, float(C), float(M), float(r), float(R),
                    norm_sq + tail <= bound)


# ---------------------------------------------------------------------------
# Conjugation by a power series / polynomial


def lower_toeplitz(p, N) -> np.ndarray:
    """Matrix of multiplication by ``sum p_i z^i`` on coefficients below order ``N``."""
    col = np.zeros(N, dtype=complex)
    p = np.asarray(p, dtype=complex)[:N]
    col[:p.size] = p
    row = np.zeros(N, dtype=complex)
    row[0] = col[0]
    return scipy.linalg.toeplitz(col, row)


def conjugate_by_series(A: CoefficientMatrix, p) -> CoefficientMatrix:
    """Coefficients of ``p(z) k(z, w) conj(p(w))``: returns ``L A L^H``.

    Exact at every order below ``N`` since only ``p_0 .. p_{N-1}`` contribute.
    """
    p = np.asarray(p, dtype=complex)
    if p.size == 0 or p[0] == 0:
        raise ConstructionError("conjugating series must have non-zero constant term")
    L = lower_toeplitz(p, A.order)
    X = L @ A.a @ L.conj().T
    X = (X + X.conj().T) / 2
    factor = None if A.factor is None else A.factor @ L.conj().T
    return CoefficientMatrix(X, factor=factor)


def geometric_series_coeffs(N: int) -> np.ndarray:
    """Taylor coefficients of ``1 / (1 - z)`` below order ``N``."""
    return np.ones(N, dtype=complex)


# ---------------------------------------------------------------------------
# Block kernels


@dataclass(frozen=True)
class PolynomialSpec:
    """``P(z) = sum_j coeffs[j] z^j`` with scalar or ``d x d`` coefficients."""

    coeffs: tuple

    def __post_init__(self):
        arrs = [np.asarray(c, dtype=complex) for c in self.coeffs]
        if not arrs:
            raise ConstructionError("polynomial needs at least one coefficient")
        shapes = {c.shape for c in arrs}
        if len(shapes) != 1:
            raise ConstructionError("polynomial coefficients must share one shape")
        shape = shapes.pop()
        if shape not in ((),) and (len(shape) != 2 or shape[0] != shape[1]):
            raise ConstructionError(f"block coefficients must be square, got {shape}")
        if shape == () and all(c == 0 for c in arrs):
            raise ConstructionError("polynomial is identically zero")
        if shape != () and np.linalg.svd(arrs[0], compute_uv=False).min() <= 1e-12:
            raise ConstructionError("A_0 is not injective")
        object.__setattr__(self, "coeffs", tuple(arrs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_block(self):
        return self.coeffs[0].ndim == 2

    @property
    def dim(self):
        return self.coeffs[0].shape[0] if self.is_block else 1


@dataclass(frozen=True, eq=False)
class BlockCoefficientKernel:
    """``B[m, n]`` is the ``d x d`` normalised block moment of ``z^m conj(w)^n``.

    ``scalar`` is the scalar kernel a quasi-scalar kernel was built from;
    ``beta`` the base weight sequence of a polynomial-conjugated kernel.
    """

    B: np.ndarray
    scalar: CoefficientMatrix | None = None
    beta: SequenceSpec | None = None

    def __post_init__(self):
        B = np.array(self.B, dtype=complex)
        if B.ndim != 4 or B.shape[0] != B.shape[1] or B.shape[2] != B.shape[3]:
            raise ConstructionError(f"block kernel must have shape (N, N, d, d), got {B.shape}")
        if B.shape[2] > 64:
            raise ConstructionError("block dimension limited to 64")
        scale = max(1.0, float(np.abs(B).max()))
        if np.abs(B - B.transpose(1, 0, 3, 2).conj()).max() > 1e-12 * scale:
            raise ConstructionError("block kernel is not block-Hermitian")
        for n, blk in enumerate(np.einsum("nnij->nij", B)):
            ev = np.linalg.eigvalsh(blk)
            if ev[0] < -1e-10 * max(1.0, ev[-1]):
                raise ConstructionError(f"diagonal block {n} is not positive semidefinite")
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def order(self):
        return self.B.shape[0]

    @property
    def dim(self):
        return self.B.shape[2]

    def diagonal_blocks(self) -> np.ndarray:
        return np.einsum("nnij->nij", self.B).copy()

    def hermitian_residual(self) -> float:
        return float(np.abs(self.B - self.B.transpose(1, 0, 3, 2).conj()).max())


def quasi_scalar(A: CoefficientMatrix, d: int) -> BlockCoefficientKernel:
    """``K(z, w) = k(z, w) I_d``."""
    if d < 1:
        raise ConstructionError("block dimension must be positive")
    B = A.a[:, :, None, None] * np.eye(d)[None, None]
    return BlockCoefficientKernel(B, scalar=A, beta=A.beta)


def block_polynomial_conjugate(beta: SequenceSpec, P: PolynomialSpec, N: int) -> BlockCoefficientKernel:
    """``K_P(z, w) = P(z) k(z, w) I P(w)^*`` for the diagonal kernel with weights ``beta``."""
    coeffs = P.coeffs if P.is_block else tuple(c.reshape(1, 1) for c in P.coeffs)
    d = coeffs[0].shape[0]
    sq = beta.squares(N)
    if np.any(beta.values(N) <= 0):
        raise ConstructionError("beta must be positive")
    Lb = np.zeros((N * d, N * d), dtype=complex)
    for j, Aj in enumerate(coeffs):
        for i in range(j, N):
            Lb[i * d:(i + 1) * d, (i - j) * d:(i - j + 1) * d] = Aj
    D = np.kron(np.diag(sq), np.eye(d))
    full = Lb @ D @ Lb.conj().T
    full = (full + full.conj().T) / 2
    B = full.reshape(N, d, N, d).transpose(0, 2, 1, 3)
    return BlockCoefficientKernel(B, beta=beta)
